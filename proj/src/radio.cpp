#include "pf/radio.hpp"

#include <algorithm>
#include <stdexcept>

namespace pf::radio {

RadioParams RadioParams::defaults() {
    RadioParams p;
    p.anchors = {
        {3.0, 1.00, 1.00},
        {6.0, 0.80, 0.70},
        {10.0, 0.20, 0.00},
        {12.0, 0.00, 0.00},
    };
    return p;
}

double success_probability(double distance_m, bool obstacles, const RadioParams& params) {
    if (params.anchors.empty()) {
        throw std::invalid_argument("RadioParams.anchors must not be empty");
    }
    auto p_at = [&](const RangeAnchor& a) { return obstacles ? a.p_obstructed : a.p_clear; };
    const auto& anchors = params.anchors;
    if (distance_m <= anchors.front().distance_m) return p_at(anchors.front());
    if (distance_m >= anchors.back().distance_m) return p_at(anchors.back());
    for (std::size_t i = 1; i < anchors.size(); ++i) {
        if (distance_m > anchors[i].distance_m) continue;
        const auto& lo = anchors[i - 1];
        const auto& hi = anchors[i];
        double t = (distance_m - lo.distance_m) / (hi.distance_m - lo.distance_m);
        return p_at(lo) + t * (p_at(hi) - p_at(lo));
    }
    return p_at(anchors.back());
}

double sample_delay(RngStream& rng, const RadioParams& params) {
    return rng.uniform(params.delay_min_s, params.delay_max_s);
}

std::string_view to_string(Phase phase) {
    switch (phase) {
        case Phase::Idle: return "idle";
        case Phase::Connecting: return "connecting";
        case Phase::Exchanging: return "exchanging";
        case Phase::Closed: return "closed";
    }
    return "unknown";
}

std::string_view to_string(Outcome outcome) {
    switch (outcome) {
        case Outcome::None: return "none";
        case Outcome::Success: return "success";
        case Outcome::FailedRange: return "failed-range";
        case Outcome::FailedDwell: return "failed-dwell";
        case Outcome::FailedProbabilistic: return "failed-probabilistic";
    }
    return "unknown";
}

LinkSession step_session(LinkSession s, double dt_s, bool in_range, double distance_m,
                         bool obstacles, const RadioParams& params, RngStream& rng) {
    if (dt_s <= 0.0) {
        throw std::invalid_argument("dt must be positive");
    }
    switch (s.phase) {
        case Phase::Closed:
            break;
        case Phase::Idle: {
            if (!in_range) break;
            // Success is decided once per encounter, at first contact.
            double p = success_probability(distance_m, obstacles, params);
            if (p <= 0.0) {
                s.phase = Phase::Closed;
                s.outcome = Outcome::FailedRange;
            } else if (rng.u01() < p) {
                s.phase = Phase::Connecting;
                s.initial_delay_s = sample_delay(rng, params);
                s.remaining_delay_s = s.initial_delay_s;
            } else {
                s.phase = Phase::Closed;
                s.outcome = Outcome::FailedProbabilistic;
            }
            break;
        }
        case Phase::Connecting: {
            if (!in_range) {
                s.phase = Phase::Closed;
                s.outcome = Outcome::FailedDwell;
                break;
            }
            s.remaining_delay_s -= dt_s;
            if (s.remaining_delay_s <= 0.0) {
                s.remaining_delay_s = 0.0;
                s.phase = Phase::Exchanging;
            }
            break;
        }
        case Phase::Exchanging:
            // Single-shot exchange; one tick, then the connection is torn
            // down regardless of whether the peers are still in range.
            s.phase = Phase::Closed;
            s.outcome = Outcome::Success;
            break;
    }
    return s;
}

EnergyState energy_tick(EnergyState e, double dt_hours, const RadioParams& params) {
    if (dt_hours < 0.0) {
        throw std::invalid_argument("dt must be >= 0");
    }
    double rate = e.mode == SharingMode::SharingOn ? params.drain_on_pct_per_h
                                                   : params.drain_off_pct_per_h;
    e.battery_pct = std::max(0.0, e.battery_pct - rate * dt_hours);
    return e;
}

}  // namespace pf::radio
