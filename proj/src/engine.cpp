#include "pf/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pf::sim {

namespace {

std::string make_pseudo_id(RngStream& rng) {
    static const char* hex = "0123456789abcdef";
    std::string s;
    s.reserve(36);
    for (int i = 0; i < 36; ++i) {
        switch (i) {
            case 8:
            case 13:
            case 18:
            case 23: s += '-'; break;
            case 14: s += '4'; break;
            case 19: s += hex[8 + rng.uniform_int(4)]; break;
            default: s += hex[rng.uniform_int(16)]; break;
        }
    }
    return s;
}

// Item ids are neutral tokens; community membership of an item is
// ground truth kept in the metrics side-channel and never leaks into
// payload bytes.
std::string item_name(int index, int total_items) {
    std::size_t width = std::max<std::size_t>(4, std::to_string(total_items - 1).size());
    std::string digits = std::to_string(index);
    return "item-" + std::string(width - digits.size(), '0') + digits;
}

// Sample `count` distinct indices from [0, n) via partial Fisher-Yates.
std::vector<int> sample_indices(int n, int count, RngStream& rng) {
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    for (int i = 0; i < count && i < n; ++i) {
        int j = i + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n - i)));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(std::min(count, n));
    std::sort(idx.begin(), idx.end());
    return idx;
}

}  // namespace

World::World(scenario::ScenarioConfig config, std::uint64_t seed)
    : config_(std::move(config)), seed_(seed), mobility_params_(config_.mobility) {
    build(seed);
}

void World::build(std::uint64_t seed) {
    std::vector<scenario::ValidationIssue> issues;
    if (config_.communities.empty()) {
        issues.push_back({"communities", "at least one community is required"});
    }
    if (config_.radio.anchors.empty()) {
        issues.push_back({"radio.anchors", "at least one anchor is required"});
    }
    const int n_peers = config_.total_peers();
    if (config_.mobility_model == mobility::Model::LinePath &&
        static_cast<int>(mobility_params_.paths.size()) != n_peers) {
        issues.push_back({"mobility.paths", "line_path requires exactly one path per peer"});
    }
    if (!issues.empty()) throw scenario::ScenarioError(std::move(issues));

    RngStream gen = RngStream::derive(seed, "worldgen");
    radio_rng_ = RngStream::derive(seed, "radio");

    if (config_.mobility_model == mobility::Model::Gathering && mobility_params_.pois.empty()) {
        for (int i = 0; i < config_.poi_count; ++i) {
            mobility_params_.pois.push_back(
                {gen.uniform(0.0, mobility_params_.area_width),
                 gen.uniform(0.0, mobility_params_.area_height)});
        }
    }

    // Item pools. Community items carry their community as ground-truth
    // origin; shared items map to "".
    std::vector<std::vector<std::string>> community_pools;
    for (const auto& c : config_.communities) {
        community_order_.push_back(c.label);
        community_index_[c.label] = community_order_.size() - 1;
        community_sizes_.push_back(c.peers);
        std::vector<std::string> pool;
        for (int i = 0; i < c.pool_size; ++i) {
            pool.push_back(item_name(c.label, i, c.pool_size));
            item_communities_[pool.back()] = c.label;
        }
        community_pools.push_back(std::move(pool));
    }
    std::vector<std::string> shared_pool;
    for (int i = 0; i < config_.shared_items.size; ++i) {
        shared_pool.push_back(item_name("shared", i, config_.shared_items.size));
        item_communities_[shared_pool.back()] = "";
    }
    const std::size_t n_comm = community_order_.size();
    for (const auto& [item, label] : item_communities_) {
        (void)label;
        holder_counts_[item] = std::vector<long>(n_comm + 1, 0);
    }

    // Agents, community by community.
    agents_.reserve(n_peers);
    std::size_t index = 0;
    for (std::size_t ci = 0; ci < config_.communities.size(); ++ci) {
        const auto& c = config_.communities[ci];
        for (int p = 0; p < c.peers; ++p, ++index) {
            PeerAgent a;
            a.index = index;
            a.pseudo_id = make_pseudo_id(gen);
            a.community_label = c.label;
            a.sharing_enabled = static_cast<int>(index) >= config_.sharing_off_peers;
            a.own = prefs::PeerPreferenceList(a.pseudo_id, config_.filter.share_fraction);
            for (int idx : sample_indices(c.pool_size, c.ratings_per_peer, gen)) {
                int stars = c.value_min +
                            static_cast<int>(gen.uniform_int(
                                static_cast<std::uint64_t>(c.value_max - c.value_min + 1)));
                a.own.rate(community_pools[ci][idx], stars);
            }
            if (config_.shared_items.size > 0 && config_.shared_items.ratings_per_peer > 0) {
                for (int idx : sample_indices(config_.shared_items.size,
                                              config_.shared_items.ratings_per_peer, gen)) {
                    int stars;
                    if (config_.shared_items.inverted) {
                        // Alternating high/low pattern, flipped for every
                        // other community: cross-community taste stays
                        // comparable but dissimilar.
                        stars = (idx % 2 == 0) ? 5 : 1;
                        if (ci % 2 == 1) stars = 6 - stars;
                    } else {
                        stars = 1 + static_cast<int>(gen.uniform_int(5));
                    }
                    a.own.rate(shared_pool[idx], stars);
                }
            }
            a.nbhd.capacity = config_.filter.capacity;
            a.store = prefs::SimilarityStore(static_cast<std::size_t>(config_.filter.k));
            a.energy.mode = a.sharing_enabled ? radio::SharingMode::SharingOn
                                              : radio::SharingMode::SharingOff;
            agents_.push_back(std::move(a));
        }
    }

    mobility_rngs_.reserve(agents_.size());
    filter_rngs_.reserve(agents_.size());
    for (std::size_t i = 0; i < agents_.size(); ++i) {
        mobility_rngs_.push_back(RngStream::derive(seed, "mobility", i));
        filter_rngs_.push_back(RngStream::derive(seed, "filter", i));
        agents_[i].mobility_state =
            mobility::init_mobility(config_.mobility_model, i, mobility_params_, mobility_rngs_[i]);
    }
    pairs_.assign(agents_.size() * agents_.size(), PairState{});
    nbhd_origins_.assign(agents_.size(), {});
    slot_origins_.assign(agents_.size(), {});
}

std::vector<std::string> World::community_labels() const { return community_order_; }

bool World::ever_met(std::size_t i, std::size_t j) const {
    if (i == j) return true;
    if (i > j) std::swap(i, j);
    return pairs_[i * agents_.size() + j].met_ever;
}

wire::ExchangeMessage World::build_message(const PeerAgent& sender, double now_s) {
    wire::ExchangeMessage m;
    m.sender = sender.pseudo_id;
    m.context.x = sender.mobility_state.position.x;
    m.context.y = sender.mobility_state.position.y;
    m.context.timestamp = now_s;
    prefs::SimilarityData shared = prefs::shared_view(sender.own, filter_rngs_[sender.index]);
    m.similarity_payload.reserve(shared.vector.size());
    for (const auto& [item, stars] : shared.vector) {
        m.similarity_payload.push_back(wire::RatingRecord::own_rating(sender.pseudo_id, item, stars));
    }
    m.neighborhood_payload.reserve(sender.nbhd.entries.size());
    for (const auto& [item, entry] : sender.nbhd.entries) {
        m.neighborhood_payload.push_back(wire::RatingRecord::aggregated(item, entry.value, entry.weight));
    }
    return m;
}

void World::refresh_coverage_counts(std::size_t peer,
                                    const prefs::NeighborhoodPreferenceList& old_list) {
    const auto& now = agents_[peer].nbhd.entries;
    const std::size_t ci = community_index_.at(agents_[peer].community_label);
    for (const auto& [item, entry] : old_list.entries) {
        (void)entry;
        if (now.count(item)) continue;
        auto it = holder_counts_.find(item);
        if (it == holder_counts_.end()) continue;
        --it->second[ci];
        --it->second.back();
    }
    for (const auto& [item, entry] : now) {
        (void)entry;
        if (old_list.entries.count(item)) continue;
        auto it = holder_counts_.find(item);
        if (it == holder_counts_.end()) continue;
        ++it->second[ci];
        ++it->second.back();
    }
}

void World::apply_exchange(std::size_t receiver, std::size_t sender, const std::string& bytes,
                           const std::map<std::string, std::set<std::size_t>>& sender_origins,
                           long tick, std::vector<Event>& events) {
    auto decoded = wire::decode(bytes);
    if (std::holds_alternative<wire::DecodeError>(decoded)) {
        ++attribution_violations_;
        return;
    }
    auto& msg = std::get<wire::ExchangeMessage>(decoded);
    // Received bytes must re-encode identically; anything else would mean
    // data was altered or injected outside a live session.
    if (wire::encode(msg) != bytes) {
        ++attribution_violations_;
        return;
    }
    PeerAgent& r = agents_[receiver];
    const PeerAgent& s = agents_[sender];

    ++exchanges_;
    bytes_exchanged_ += static_cast<long>(bytes.size());
    Event ev;
    ev.tick = tick;
    ev.type = "exchange";
    ev.a = s.pseudo_id;
    ev.b = r.pseudo_id;
    ev.bytes = static_cast<long>(bytes.size());
    ev.n_sim = static_cast<long>(msg.similarity_payload.size());
    ev.n_nbhd = static_cast<long>(msg.neighborhood_payload.size());
    ev.payload_hash = fnv1a64(bytes);
    events.push_back(std::move(ev));

    r.received[s.pseudo_id] = ReceivedPayload{msg.context, msg.similarity_payload};

    // Filter step 1: similarity comparison on the received similarity data
    // against the receiver's full rating vector.
    prefs::SimilarityData incoming;
    for (const auto& rec : msg.similarity_payload) {
        incoming.vector[rec.item_id] = rec.value_tenths / 10;
    }
    prefs::SimilarityData mine{r.own.ratings()};
    auto score = prefs::cosine_similarity(mine, incoming, config_.filter.min_overlap);
    if (!score) return;  // not comparable: no admission, no resample

    // Filter step 2: top-k admission and neighborhood resampling.
    prefs::NeighborhoodPreferenceList snapshot;
    snapshot.capacity = std::max<std::size_t>(msg.neighborhood_payload.size(), 1);
    for (const auto& rec : msg.neighborhood_payload) {
        snapshot.entries[rec.item_id] = prefs::NeighborhoodEntry{rec.value(), rec.weight};
    }
    auto [store2, admitted] =
        prefs::admit_to_store(std::move(r.store), s.pseudo_id, *score, std::move(snapshot));
    r.store = std::move(store2);

    Event adm;
    adm.tick = tick;
    adm.type = "admission";
    adm.a = s.pseudo_id;
    adm.b = r.pseudo_id;
    adm.score = *score;
    adm.admitted = admitted;
    events.push_back(std::move(adm));

    // Keep the frozen-origin side channel in sync with the store slots.
    auto& sorigins = slot_origins_[receiver];
    std::set<std::string> current_slots;
    for (const auto& slot : r.store.slots()) current_slots.insert(slot.peer);
    for (auto it = sorigins.begin(); it != sorigins.end();) {
        if (!current_slots.count(it->first)) {
            it = sorigins.erase(it);
        } else {
            ++it;
        }
    }
    if (!admitted) return;
    ++admissions_;
    std::map<std::string, std::set<std::size_t>> frozen;
    for (const auto& rec : msg.neighborhood_payload) {
        auto found = sender_origins.find(rec.item_id);
        frozen[rec.item_id] =
            found != sender_origins.end() ? found->second : std::set<std::size_t>{};
    }
    sorigins[s.pseudo_id] = std::move(frozen);

    prefs::NeighborhoodPreferenceList old_list = r.nbhd;
    auto res = prefs::resample_neighborhood(r.own, r.store, config_.filter.capacity,
                                            config_.filter.n_draws, filter_rngs_[receiver]);
    r.nbhd = std::move(res.list);
    if (!r.nbhd.within_capacity()) {
        throw std::logic_error("neighborhood list exceeded its capacity");
    }

    // Rebuild ground-truth origins of the new neighborhood list from the
    // draw attributions.
    auto& norigins = nbhd_origins_[receiver];
    norigins.clear();
    const auto& slots = r.store.slots();
    for (const auto& draw : res.draws) {
        if (!r.nbhd.entries.count(draw.item_id)) continue;  // truncated away
        auto& dst = norigins[draw.item_id];
        if (draw.slot_index == prefs::kOwnSource) {
            dst.insert(receiver);
        } else {
            const auto& slot_peer = slots[static_cast<std::size_t>(draw.slot_index)].peer;
            auto so = sorigins.find(slot_peer);
            if (so != sorigins.end()) {
                auto io = so->second.find(draw.item_id);
                if (io != so->second.end()) {
                    dst.insert(io->second.begin(), io->second.end());
                }
            }
        }
    }
    refresh_coverage_counts(receiver, old_list);

    // Filter step 3: recommendation update.
    r.recommendations = prefs::predict_ratings(r.own, r.nbhd, config_.filter.top_n);

    Event rs;
    rs.tick = tick;
    rs.type = "resample";
    rs.a = r.pseudo_id;
    rs.distinct_items = static_cast<long>(r.nbhd.entries.size());
    long total_weight = 0;
    for (const auto& [item, entry] : r.nbhd.entries) {
        (void)item;
        total_weight += entry.weight;
    }
    rs.total_weight = total_weight;
    events.push_back(std::move(rs));
}

void World::step_tick(long tick, std::vector<Event>& events) {
    const double dt = config_.tick_s;
    const std::size_t n = agents_.size();
    const double now_s = static_cast<double>(tick + 1) * dt;

    for (std::size_t i = 0; i < n; ++i) {
        agents_[i].mobility_state =
            mobility::step_mobility(agents_[i].mobility_state, dt, mobility_params_, mobility_rngs_[i]);
    }
    std::vector<mobility::Position> positions(n);
    for (std::size_t i = 0; i < n; ++i) positions[i] = agents_[i].mobility_state.position;
    auto dist = mobility::pairwise_distances(positions);

    struct PendingExchange {
        std::size_t i, j;
        double open_distance_m;
    };
    std::vector<PendingExchange> pending;

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            PairState& ps = pair(i, j);
            const double d = dist.at(i, j);
            const bool in_range = d <= config_.radio.effective_radius_m;

            if (in_range && !ps.in_range_prev) {
                ps.contact_begin_tick = tick;
                ps.met_ever = true;
                ps.session_spent = false;
                Event ev;
                ev.tick = tick;
                ev.type = "contact-begin";
                ev.a = agents_[i].pseudo_id;
                ev.b = agents_[j].pseudo_id;
                ev.distance_m = d;
                events.push_back(std::move(ev));
            } else if (!in_range && ps.in_range_prev) {
                Event ev;
                ev.tick = tick;
                ev.type = "contact-end";
                ev.a = agents_[i].pseudo_id;
                ev.b = agents_[j].pseudo_id;
                ev.dwell_s = static_cast<double>(tick - ps.contact_begin_tick) * dt;
                events.push_back(std::move(ev));
            }

            // One session per encounter, opened at first contact when both
            // peers share.
            if (in_range && !ps.session_spent && !ps.session && agents_[i].sharing_enabled &&
                agents_[j].sharing_enabled) {
                ps.session = radio::LinkSession{agents_[i].pseudo_id, agents_[j].pseudo_id};
                ps.open_distance_m = d;
                ps.session_spent = true;
                ++sessions_opened_;
                Event ev;
                ev.tick = tick;
                ev.type = "session-opened";
                ev.a = agents_[i].pseudo_id;
                ev.b = agents_[j].pseudo_id;
                ev.distance_m = d;
                events.push_back(std::move(ev));
            }

            if (ps.session && ps.session->open()) {
                radio::Phase before = ps.session->phase;
                *ps.session = radio::step_session(*ps.session, dt, in_range, d, config_.obstacles,
                                                  config_.radio, radio_rng_);
                if (ps.session->phase == radio::Phase::Exchanging &&
                    before != radio::Phase::Exchanging) {
                    pending.push_back({i, j, ps.open_distance_m});
                }
                if (ps.session->phase == radio::Phase::Closed) {
                    switch (ps.session->outcome) {
                        case radio::Outcome::Success: ++success_; break;
                        case radio::Outcome::FailedRange: ++failed_range_; break;
                        case radio::Outcome::FailedDwell: ++failed_dwell_; break;
                        case radio::Outcome::FailedProbabilistic: ++failed_probabilistic_; break;
                        case radio::Outcome::None: break;
                    }
                    Event ev;
                    ev.tick = tick;
                    ev.type = "session-closed";
                    ev.a = agents_[i].pseudo_id;
                    ev.b = agents_[j].pseudo_id;
                    ev.outcome = std::string(radio::to_string(ps.session->outcome));
                    events.push_back(std::move(ev));
                }
            }
            if (!in_range && ps.session && !ps.session->open()) {
                ps.session.reset();  // encounter over; next contact is a new encounter
            }
            ps.in_range_prev = in_range;
        }
    }

    // Exchange barrier: build every message from pre-exchange state, then
    // apply all receptions in pair order.
    struct BuiltExchange {
        std::size_t i, j;
        std::string bytes_from_i, bytes_from_j;
        std::map<std::string, std::set<std::size_t>> origins_i, origins_j;
    };
    std::vector<BuiltExchange> built;
    built.reserve(pending.size());
    for (const auto& p : pending) {
        // Attribution guard: the session must have opened within radio
        // range for these bytes to exist at all.
        if (p.open_distance_m > config_.radio.effective_radius_m) {
            ++attribution_violations_;
            continue;
        }
        BuiltExchange b;
        b.i = p.i;
        b.j = p.j;
        b.bytes_from_i = wire::encode(build_message(agents_[p.i], now_s));
        b.bytes_from_j = wire::encode(build_message(agents_[p.j], now_s));
        b.origins_i = nbhd_origins_[p.i];
        b.origins_j = nbhd_origins_[p.j];
        built.push_back(std::move(b));
    }
    for (const auto& b : built) {
        apply_exchange(b.i, b.j, b.bytes_from_j, b.origins_j, tick, events);
        apply_exchange(b.j, b.i, b.bytes_from_i, b.origins_i, tick, events);
    }

    const double dt_hours = dt / 3600.0;
    for (auto& a : agents_) {
        a.energy = radio::energy_tick(a.energy, dt_hours, config_.radio);
    }
}

MetricsRecord World::snapshot_metrics(long tick) const {
    MetricsRecord m;
    m.tick = tick;
    const std::size_t n = agents_.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto& ps = pairs_[i * n + j];
            if (ps.session && ps.session->open() && ps.session->phase != radio::Phase::Idle) {
                ++m.active_sessions;
            }
        }
    }
    m.sessions_opened = sessions_opened_;
    m.success = success_;
    m.failed_range = failed_range_;
    m.failed_dwell = failed_dwell_;
    m.failed_probabilistic = failed_probabilistic_;
    m.exchanges = exchanges_;
    m.admissions = admissions_;
    m.bytes_exchanged = bytes_exchanged_;
    m.battery.reserve(n);
    for (const auto& a : agents_) m.battery.push_back(a.energy.battery_pct);

    if (!holder_counts_.empty()) {
        double sum = 0.0;
        for (const auto& [item, counts] : holder_counts_) {
            (void)item;
            sum += static_cast<double>(counts.back()) / static_cast<double>(n);
        }
        m.coverage_mean = sum / static_cast<double>(holder_counts_.size());
    }

    // Within/cross flow from the incremental holder counts.
    const std::size_t n_comm = community_order_.size();
    if (n_comm >= 2) {
        std::vector<double> within(n_comm, 0.0), cross(n_comm, 0.0);
        std::vector<long> pool_sizes(n_comm, 0);
        for (const auto& [item, counts] : holder_counts_) {
            const std::string& label = item_communities_.at(item);
            if (label.empty()) continue;  // shared items have no single origin
            std::size_t ci = community_index_.at(label);
            ++pool_sizes[ci];
            within[ci] += static_cast<double>(counts[ci]);
            cross[ci] += static_cast<double>(counts.back() - counts[ci]);
        }
        double within_sum = 0.0, cross_sum = 0.0, ratio_sum = 0.0;
        std::size_t defined = 0;
        bool infinite = false;
        for (std::size_t ci = 0; ci < n_comm; ++ci) {
            if (pool_sizes[ci] == 0) continue;
            long members = community_sizes_[ci];
            long others = static_cast<long>(n) - members;
            double w = within[ci] / (static_cast<double>(pool_sizes[ci]) * members);
            double x = others > 0
                           ? cross[ci] / (static_cast<double>(pool_sizes[ci]) * others)
                           : 0.0;
            within_sum += w;
            cross_sum += x;
            if (x > 0.0) {
                ratio_sum += w / x;
                ++defined;
            } else if (w > 0.0) {
                infinite = true;
            }
        }
        m.flow.within = within_sum / static_cast<double>(n_comm);
        m.flow.cross = cross_sum / static_cast<double>(n_comm);
        if (infinite) {
            m.flow.state = FlowState::Infinite;
        } else if (defined > 0) {
            m.flow.state = FlowState::Defined;
            m.flow.ratio = ratio_sum / static_cast<double>(defined);
        } else {
            m.flow.state = FlowState::Undefined;
        }
    }

    for (const auto& item : config_.output.track_items) {
        auto it = holder_counts_.find(item);
        double cov = it == holder_counts_.end()
                         ? 0.0
                         : static_cast<double>(it->second.back()) / static_cast<double>(n);
        m.item_coverage[item] = cov;
    }
    return m;
}

RunResult run(const scenario::ScenarioConfig& config, std::uint64_t seed) {
    RunResult out{World(config, seed), {}, {}};
    const long ticks = out.world.config().total_ticks();
    out.metrics.reserve(static_cast<std::size_t>(ticks));
    for (long t = 0; t < ticks; ++t) {
        out.world.step_tick(t, out.events);
        out.metrics.push_back(out.world.snapshot_metrics(t));
    }
    return out;
}

double coverage(const World& world, const std::string& item_id) {
    const auto& agents = world.agents();
    if (agents.empty()) return 0.0;
    std::size_t holders = 0;
    for (const auto& a : agents) {
        if (a.nbhd.entries.count(item_id)) ++holders;
    }
    return static_cast<double>(holders) / static_cast<double>(agents.size());
}

FlowStats flow_ratio(const World& world) {
    auto labels = world.community_labels();
    if (labels.size() < 2) {
        throw std::invalid_argument("flow_ratio requires at least two communities");
    }
    // Brute-force recomputation from current neighborhood lists; the
    // per-tick metrics keep incremental counts that must agree with this.
    const auto& agents = world.agents();
    const std::size_t n = agents.size();
    double within_sum = 0.0, cross_sum = 0.0, ratio_sum = 0.0;
    std::size_t defined = 0;
    bool infinite = false;
    for (const auto& label : labels) {
        std::vector<std::string> pool;
        for (const auto& [item, community] : world.item_communities()) {
            if (community == label) pool.push_back(item);
        }
        long members = 0;
        for (const auto& a : agents) {
            if (a.community_label == label) ++members;
        }
        long others = static_cast<long>(n) - members;
        if (pool.empty() || members == 0) continue;
        double within_hits = 0.0, cross_hits = 0.0;
        for (const auto& item : pool) {
            for (const auto& a : agents) {
                if (!a.nbhd.entries.count(item)) continue;
                if (a.community_label == label) {
                    within_hits += 1.0;
                } else {
                    cross_hits += 1.0;
                }
            }
        }
        double w = within_hits / (static_cast<double>(pool.size()) * members);
        double x = others > 0 ? cross_hits / (static_cast<double>(pool.size()) * others) : 0.0;
        within_sum += w;
        cross_sum += x;
        if (x > 0.0) {
            ratio_sum += w / x;
            ++defined;
        } else if (w > 0.0) {
            infinite = true;
        }
    }
    FlowStats out;
    out.within = within_sum / static_cast<double>(labels.size());
    out.cross = cross_sum / static_cast<double>(labels.size());
    if (infinite) {
        out.state = FlowState::Infinite;
    } else if (defined > 0) {
        out.state = FlowState::Defined;
        out.ratio = ratio_sum / static_cast<double>(defined);
    } else {
        out.state = FlowState::Undefined;
    }
    return out;
}

long relay_reachability(const World& world) {
    long count = 0;
    const auto& agents = world.agents();
    for (std::size_t q = 0; q < agents.size(); ++q) {
        for (const auto& [item, origins] : world.nbhd_origins(q)) {
            (void)item;
            for (std::size_t origin : origins) {
                if (origin != q && !world.ever_met(q, origin)) {
                    ++count;
                    break;  // count each (receiver, item) pair once
                }
            }
        }
    }
    return count;
}

}  // namespace pf::sim
