#pragma once
// Domain types for the four on-device data pools and the filter pipeline:
// similarity comparison, top-k admission into the similarity store,
// bootstrap resampling of the neighborhood preference list, and the
// recommendation update. All operations are pure value transformations;
// randomness enters only through an explicit RngStream.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pf/rng.hpp"

namespace pf::prefs {

// One star rating of one item. Stars are integers in [1, 5].
struct Rating {
    std::string item_id;
    int value = 0;
};

constexpr int kMinStars = 1;
constexpr int kMaxStars = 5;

// A peer's own item ratings; the private data pool. share_fraction
// controls how much of it is exposed to nearby peers.
class PeerPreferenceList {
public:
    PeerPreferenceList() = default;
    PeerPreferenceList(std::string owner, double share_fraction = 1.0);

    // Insert-or-replace; at most one rating per item. Throws
    // std::invalid_argument on an empty item id or stars outside [1, 5].
    void rate(const std::string& item_id, int stars);

    const std::string& owner() const { return owner_; }
    double share_fraction() const { return share_fraction_; }
    const std::map<std::string, int>& ratings() const { return ratings_; }
    bool has_rated(const std::string& item_id) const { return ratings_.count(item_id) != 0; }
    std::size_t size() const { return ratings_.size(); }

private:
    std::string owner_;
    double share_fraction_ = 1.0;
    std::map<std::string, int> ratings_;  // item_id -> stars
};

// One aggregated entry: a real-valued rating plus its draw multiplicity.
// Entries carry no origin peer identifier.
struct NeighborhoodEntry {
    double value = 0.0;  // in [1.0, 5.0]
    long weight = 0;     // >= 1
};

// Capacity-bounded aggregate mixed from the most similar peers; the unit
// of propagation.
struct NeighborhoodPreferenceList {
    std::size_t capacity = 500;
    std::map<std::string, NeighborhoodEntry> entries;

    bool within_capacity() const { return entries.size() <= capacity; }
};

// The payload used for peer similarity comparison: a projection of the
// owner's rating vector.
struct SimilarityData {
    std::map<std::string, int> vector;  // item_id -> stars
};

// Stamp characterizing an encounter. Tags are local annotations and are
// never transmitted.
struct ContextData {
    double x = 0.0;
    double y = 0.0;
    double timestamp = 0.0;  // simulated seconds since run start
    std::vector<std::string> tags;
};

struct StoreSlot {
    std::string peer;  // pseudo-id
    double score = 0.0;
    NeighborhoodPreferenceList snapshot;
    std::uint64_t arrival = 0;  // admission order, for tie-breaking
};

// Top-k cache of the most similar encountered peers. Slots are kept
// sorted by score descending, earlier arrival winning ties, at most one
// slot per peer.
class SimilarityStore {
public:
    SimilarityStore() = default;
    explicit SimilarityStore(std::size_t k) : k_(k) {}

    std::size_t k() const { return k_; }
    const std::vector<StoreSlot>& slots() const { return slots_; }
    bool contains(const std::string& peer) const;
    std::size_t size() const { return slots_.size(); }

private:
    std::size_t k_ = 5;
    std::vector<StoreSlot> slots_;
    std::uint64_t next_arrival_ = 0;

    friend std::pair<SimilarityStore, bool> admit_to_store(SimilarityStore store,
                                                           const std::string& peer,
                                                           double score,
                                                           NeighborhoodPreferenceList snapshot);
};

// Cosine over the two rating sub-vectors restricted to co-rated items.
// Absent when fewer than min_overlap items are co-rated; absence means
// "not comparable", not an error. Symmetric, and exactly 1.0 for a
// vector against itself (all intermediate sums are exact small integers).
std::optional<double> cosine_similarity(const SimilarityData& a, const SimilarityData& b,
                                        std::size_t min_overlap);

// Admission happens when the store has a free slot or the score strictly
// exceeds the current k-th highest. A re-encountered stored peer replaces
// its own slot rather than occupying two. Returns the updated store and
// whether the candidate was admitted.
std::pair<SimilarityStore, bool> admit_to_store(SimilarityStore store, const std::string& peer,
                                                double score, NeighborhoodPreferenceList snapshot);

// Source attribution of one bootstrap draw. slot_index refers to the
// store's sorted slot order at call time; kOwnSource means the draw came
// from the peer's own shared ratings. Consumed by the metrics
// side-channel to keep ground-truth provenance; never transmitted.
constexpr int kOwnSource = -1;
struct DrawAttribution {
    std::string item_id;
    int slot_index = kOwnSource;
};

struct ResampleResult {
    NeighborhoodPreferenceList list;
    std::vector<DrawAttribution> draws;
};

// Bootstrap-resamples a fresh neighborhood list: n_draws samples with
// replacement from the pooled source (the owner's shared ratings at
// weight 1.0 each, plus every stored snapshot entry at weight
// entry.weight x slot score), then aggregates duplicates per item
// (value = mean of drawn values, weight = draw count) and truncates to
// the capacity highest-weight items, ties resolved by item id. An empty
// pooled source yields an empty list.
ResampleResult resample_neighborhood(const PeerPreferenceList& own, const SimilarityStore& store,
                                     std::size_t capacity, int n_draws, RngStream& rng);

// Uniformly samples ceil(share_fraction x |ratings|) ratings without
// replacement. Fraction 1 returns everything and consumes no randomness.
SimilarityData shared_view(const PeerPreferenceList& own, RngStream& rng);

struct Prediction {
    std::string item_id;
    double value = 0.0;
    long weight = 0;
};

// Weighted-popularity baseline: every neighborhood item the peer has not
// rated, ranked by (weight, value) descending with lexicographic item-id
// ties, truncated to top_n.
std::vector<Prediction> predict_ratings(const PeerPreferenceList& own,
                                        const NeighborhoodPreferenceList& nbhd,
                                        std::size_t top_n);

}  // namespace pf::prefs
