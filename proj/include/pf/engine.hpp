#pragma once
// Deterministic tick-based orchestration: encounter detection, session
// stepping, the exchange + filter pipeline, energy accounting, and
// metrics collection. Peers interact only through encoded exchange
// messages during co-location; there is no query path to a peer that is
// not in radio range. Ground-truth bookkeeping (community labels, item
// origins, contact history) lives in the metrics side-channel of World
// and is never transmitted.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pf/mobility.hpp"
#include "pf/prefs.hpp"
#include "pf/radio.hpp"
#include "pf/rng.hpp"
#include "pf/scenario.hpp"
#include "pf/wire.hpp"

namespace pf::sim {

struct ReceivedPayload {
    prefs::ContextData context;  // encounter stamp attached at propagation time
    std::vector<wire::RatingRecord> records;
};

struct PeerAgent {
    std::size_t index = 0;
    std::string pseudo_id;  // 36-character token
    std::string community_label;
    bool sharing_enabled = true;
    prefs::PeerPreferenceList own;
    prefs::NeighborhoodPreferenceList nbhd;
    prefs::SimilarityStore store;
    mobility::MobilityState mobility_state;
    radio::EnergyState energy;
    std::vector<prefs::Prediction> recommendations;
    // Ratings received from other peers, kept verbatim as decoded.
    std::map<std::string, ReceivedPayload> received;
};

// One line of the event log (events.jsonl). Unused fields stay at their
// defaults; which fields are meaningful depends on `type`.
struct Event {
    long tick = 0;
    std::string type;  // contact-begin contact-end session-opened
                       // session-closed exchange admission resample
    std::string a;     // peer / sender pseudo-id
    std::string b;     // peer / receiver pseudo-id
    double distance_m = 0.0;
    double dwell_s = 0.0;
    std::string outcome;
    long bytes = 0;
    long n_sim = 0;
    long n_nbhd = 0;
    std::uint64_t payload_hash = 0;
    double score = 0.0;
    bool admitted = false;
    long distinct_items = 0;
    long total_weight = 0;
};

enum class FlowState { Defined, Infinite, Undefined };

// Within/cross-community recommendation flow. `ratio` is meaningful only
// when state == Defined; Infinite marks flow with zero cross-community
// coverage, Undefined marks the absence of any flow to compare.
struct FlowStats {
    double within = 0.0;
    double cross = 0.0;
    FlowState state = FlowState::Undefined;
    double ratio = 0.0;
};

struct MetricsRecord {
    long tick = 0;
    long active_sessions = 0;
    // Cumulative counters; monotone non-decreasing over a run.
    long sessions_opened = 0;
    long success = 0;
    long failed_range = 0;
    long failed_dwell = 0;
    long failed_probabilistic = 0;
    long exchanges = 0;
    long admissions = 0;
    long bytes_exchanged = 0;
    std::vector<double> battery;  // per peer, pct
    double coverage_mean = 0.0;   // mean coverage over every generated item
    FlowStats flow;
    std::map<std::string, double> item_coverage;  // configured tracked items
};

class World {
public:
    World(scenario::ScenarioConfig config, std::uint64_t seed);

    // Advances one tick, appending events; tick numbers start at 0.
    void step_tick(long tick, std::vector<Event>& events);

    MetricsRecord snapshot_metrics(long tick) const;

    const scenario::ScenarioConfig& config() const { return config_; }
    std::uint64_t seed() const { return seed_; }
    const std::vector<PeerAgent>& agents() const { return agents_; }
    PeerAgent& agent(std::size_t i) { return agents_[i]; }
    const mobility::MobilityParams& mobility_params() const { return mobility_params_; }

    // --- metrics side-channel (ground truth, never transmitted) ---
    // Community of origin per generated item; shared-pool items map to "".
    const std::map<std::string, std::string>& item_communities() const {
        return item_communities_;
    }
    std::vector<std::string> community_labels() const;
    // Origin peers of every item currently in a peer's neighborhood list.
    const std::map<std::string, std::set<std::size_t>>& nbhd_origins(std::size_t peer) const {
        return nbhd_origins_[peer];
    }
    bool ever_met(std::size_t i, std::size_t j) const;
    // Count of exchange applications whose bytes could not be attributed
    // to a valid in-range session; stays 0 unless the protocol invariants
    // are broken.
    long attribution_violations() const { return attribution_violations_; }
    long total_bytes() const { return bytes_exchanged_; }

private:
    struct PairState {
        bool in_range_prev = false;
        bool session_spent = false;  // one session per encounter
        std::optional<radio::LinkSession> session;
        double open_distance_m = 0.0;
        long contact_begin_tick = 0;
        bool met_ever = false;
    };

    void build(std::uint64_t seed);
    void apply_exchange(std::size_t receiver, std::size_t sender, const std::string& bytes,
                        const std::map<std::string, std::set<std::size_t>>& sender_origins,
                        long tick, std::vector<Event>& events);
    wire::ExchangeMessage build_message(const PeerAgent& sender, double now_s);
    void refresh_coverage_counts(std::size_t peer,
                                 const prefs::NeighborhoodPreferenceList& old_list);
    PairState& pair(std::size_t i, std::size_t j) { return pairs_[i * agents_.size() + j]; }

    scenario::ScenarioConfig config_;
    std::uint64_t seed_ = 0;
    mobility::MobilityParams mobility_params_;  // includes generated POIs
    std::vector<PeerAgent> agents_;
    std::vector<PairState> pairs_;  // indexed i * n + j for i < j
    std::vector<RngStream> mobility_rngs_;
    std::vector<RngStream> filter_rngs_;
    RngStream radio_rng_;

    std::map<std::string, std::string> item_communities_;
    std::vector<std::map<std::string, std::set<std::size_t>>> nbhd_origins_;
    // Frozen origins of each stored snapshot: receiver -> slot peer -> item -> origins.
    std::vector<std::map<std::string, std::map<std::string, std::set<std::size_t>>>>
        slot_origins_;
    // Incremental per-item holder counts, one slot per community plus total.
    std::map<std::string, std::vector<long>> holder_counts_;
    std::vector<std::string> community_order_;
    std::map<std::string, std::size_t> community_index_;
    std::vector<long> community_sizes_;

    long sessions_opened_ = 0;
    long success_ = 0;
    long failed_range_ = 0;
    long failed_dwell_ = 0;
    long failed_probabilistic_ = 0;
    long exchanges_ = 0;
    long admissions_ = 0;
    long bytes_exchanged_ = 0;
    long attribution_violations_ = 0;
};

struct RunResult {
    World world;
    std::vector<MetricsRecord> metrics;
    std::vector<Event> events;
};

// Runs a full scenario. Deterministic: identical (config, seed) pairs
// produce identical metrics and event streams.
RunResult run(const scenario::ScenarioConfig& config, std::uint64_t seed);

// Fraction of peers whose neighborhood list contains the item.
double coverage(const World& world, const std::string& item_id);

// Within- vs cross-community coverage of community-origin items,
// averaged over communities. Throws std::invalid_argument with fewer
// than two communities.
FlowStats flow_ratio(const World& world);

// Count of (receiver, item) pairs where the receiver's neighborhood
// holds an item whose origin peer it has never been co-located with.
long relay_reachability(const World& world);

}  // namespace pf::sim
