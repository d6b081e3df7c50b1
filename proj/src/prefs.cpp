#include "pf/prefs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pf::prefs {

PeerPreferenceList::PeerPreferenceList(std::string owner, double share_fraction)
    : owner_(std::move(owner)), share_fraction_(share_fraction) {
    if (share_fraction_ < 0.0 || share_fraction_ > 1.0) {
        throw std::invalid_argument("share_fraction must be in [0, 1]");
    }
}

void PeerPreferenceList::rate(const std::string& item_id, int stars) {
    if (item_id.empty()) {
        throw std::invalid_argument("item_id must be non-empty");
    }
    if (stars < kMinStars || stars > kMaxStars) {
        throw std::invalid_argument("rating value must be in [1, 5]");
    }
    ratings_[item_id] = stars;
}

bool SimilarityStore::contains(const std::string& peer) const {
    for (const auto& s : slots_) {
        if (s.peer == peer) return true;
    }
    return false;
}

std::optional<double> cosine_similarity(const SimilarityData& a, const SimilarityData& b,
                                        std::size_t min_overlap) {
    // Sums are exact: products of stars are small integers, so the result
    // is symmetric in (a, b) and self-similarity is exactly 1.0.
    double dot = 0.0, norm_a = 0.0, norm_b = 0.0;
    std::size_t overlap = 0;
    // Iterate the smaller map; item order does not affect the sums because
    // co-rated products are accumulated identically either way.
    const auto& small = a.vector.size() <= b.vector.size() ? a.vector : b.vector;
    const auto& large = a.vector.size() <= b.vector.size() ? b.vector : a.vector;
    for (const auto& [item, v_small] : small) {
        auto it = large.find(item);
        if (it == large.end()) continue;
        ++overlap;
        dot += static_cast<double>(v_small) * it->second;
        norm_a += static_cast<double>(v_small) * v_small;
        norm_b += static_cast<double>(it->second) * it->second;
    }
    if (overlap < min_overlap || overlap == 0) return std::nullopt;
    return dot / std::sqrt(norm_a * norm_b);
}

namespace {

void sort_slots(std::vector<StoreSlot>& slots) {
    std::stable_sort(slots.begin(), slots.end(), [](const StoreSlot& x, const StoreSlot& y) {
        if (x.score != y.score) return x.score > y.score;
        return x.arrival < y.arrival;  // earlier arrival wins ties
    });
}

}  // namespace

std::pair<SimilarityStore, bool> admit_to_store(SimilarityStore store, const std::string& peer,
                                                double score, NeighborhoodPreferenceList snapshot) {
    auto& slots = store.slots_;
    // A re-encountered stored peer competes without its own old slot.
    slots.erase(std::remove_if(slots.begin(), slots.end(),
                               [&](const StoreSlot& s) { return s.peer == peer; }),
                slots.end());

    bool admitted = false;
    if (slots.size() < store.k_) {
        admitted = true;
    } else if (!slots.empty() && score > slots.back().score) {
        // Strictly above the k-th highest: evict the lowest-scored slot
        // (latest arrival among equal lowest scores sorts last).
        slots.pop_back();
        admitted = true;
    }
    if (admitted) {
        slots.push_back(StoreSlot{peer, score, std::move(snapshot), store.next_arrival_++});
        sort_slots(slots);
    }
    return {std::move(store), admitted};
}

namespace {

struct PoolAtom {
    const std::string* item_id;
    double value;
    double weight;
    int slot_index;  // kOwnSource for own ratings
};

}  // namespace

ResampleResult resample_neighborhood(const PeerPreferenceList& own, const SimilarityStore& store,
                                     std::size_t capacity, int n_draws, RngStream& rng) {
    if (n_draws < 1) {
        throw std::invalid_argument("n_draws must be >= 1");
    }
    ResampleResult result;
    result.list.capacity = capacity;

    // Pooled source: the owner's shared ratings at weight 1.0 each, then
    // every snapshot entry at weight entry.weight x slot score.
    SimilarityData shared = shared_view(own, rng);
    std::vector<PoolAtom> pool;
    pool.reserve(shared.vector.size());
    for (const auto& [item, stars] : shared.vector) {
        pool.push_back(PoolAtom{&item, static_cast<double>(stars), 1.0, kOwnSource});
    }
    const auto& slots = store.slots();
    for (std::size_t si = 0; si < slots.size(); ++si) {
        for (const auto& [item, entry] : slots[si].snapshot.entries) {
            double w = static_cast<double>(entry.weight) * slots[si].score;
            if (w <= 0.0) continue;
            pool.push_back(PoolAtom{&item, entry.value, w, static_cast<int>(si)});
        }
    }
    if (pool.empty()) return result;

    std::vector<double> cumulative(pool.size());
    double total = 0.0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        total += pool[i].weight;
        cumulative[i] = total;
    }

    struct Accum {
        double value_sum = 0.0;
        long count = 0;
    };
    std::map<std::string, Accum> drawn;
    result.draws.reserve(static_cast<std::size_t>(n_draws));
    for (int d = 0; d < n_draws; ++d) {
        double u = rng.u01() * total;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        std::size_t idx = it == cumulative.end() ? pool.size() - 1
                                                 : static_cast<std::size_t>(it - cumulative.begin());
        const PoolAtom& atom = pool[idx];
        auto& acc = drawn[*atom.item_id];
        acc.value_sum += atom.value;
        acc.count += 1;
        result.draws.push_back(DrawAttribution{*atom.item_id, atom.slot_index});
    }

    // Truncate to the capacity highest-weight items, ties by item id.
    std::vector<std::pair<std::string, Accum>> ordered(drawn.begin(), drawn.end());
    std::sort(ordered.begin(), ordered.end(), [](const auto& x, const auto& y) {
        if (x.second.count != y.second.count) return x.second.count > y.second.count;
        return x.first < y.first;
    });
    if (ordered.size() > capacity) ordered.resize(capacity);
    for (const auto& [item, acc] : ordered) {
        result.list.entries[item] =
            NeighborhoodEntry{acc.value_sum / static_cast<double>(acc.count), acc.count};
    }
    return result;
}

SimilarityData shared_view(const PeerPreferenceList& own, RngStream& rng) {
    SimilarityData out;
    const auto& ratings = own.ratings();
    const std::size_t n = ratings.size();
    const std::size_t n_share =
        static_cast<std::size_t>(std::ceil(own.share_fraction() * static_cast<double>(n)));
    if (n_share == 0) return out;
    if (n_share >= n) {
        out.vector = ratings;
        return out;
    }
    std::vector<const std::pair<const std::string, int>*> items;
    items.reserve(n);
    for (const auto& kv : ratings) items.push_back(&kv);
    // Partial Fisher-Yates: the first n_share positions are a uniform
    // sample without replacement.
    for (std::size_t i = 0; i < n_share; ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng.uniform_int(n - i));
        std::swap(items[i], items[j]);
    }
    for (std::size_t i = 0; i < n_share; ++i) {
        out.vector.emplace(items[i]->first, items[i]->second);
    }
    return out;
}

std::vector<Prediction> predict_ratings(const PeerPreferenceList& own,
                                        const NeighborhoodPreferenceList& nbhd,
                                        std::size_t top_n) {
    std::vector<Prediction> out;
    out.reserve(nbhd.entries.size());
    for (const auto& [item, entry] : nbhd.entries) {
        if (own.has_rated(item)) continue;
        out.push_back(Prediction{item, entry.value, entry.weight});
    }
    std::sort(out.begin(), out.end(), [](const Prediction& x, const Prediction& y) {
        if (x.weight != y.weight) return x.weight > y.weight;
        if (x.value != y.value) return x.value > y.value;
        return x.item_id < y.item_id;
    });
    if (out.size() > top_n) out.resize(top_n);
    return out;
}

}  // namespace pf::prefs
