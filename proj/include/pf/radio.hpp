#pragma once
// Link model calibrated from field measurements: range-dependent
// connection success, initial-connection delay, the per-encounter session
// state machine, and battery drain accounting.

#include <string>
#include <vector>

#include "pf/rng.hpp"

namespace pf::radio {

// Measured connection success at one distance, with and without
// obstacles between the devices.
struct RangeAnchor {
    double distance_m = 0.0;
    double p_clear = 0.0;
    double p_obstructed = 0.0;
};

struct RadioParams {
    // Anchors sorted by distance; probabilities non-increasing with
    // distance. Between anchors the model interpolates linearly; below
    // the first anchor it clamps to that anchor, above the last to zero.
    std::vector<RangeAnchor> anchors;
    double delay_min_s = 11.0;
    double delay_max_s = 41.0;
    double drain_on_pct_per_h = 5.77;   // advertise/discover active
    double drain_off_pct_per_h = 0.50;  // sharing disabled
    double effective_radius_m = 6.0;    // encounter detection radius

    static RadioParams defaults();
};

// Piecewise-linear interpolation through the measured anchors.
double success_probability(double distance_m, bool obstacles, const RadioParams& params);

// Initial-connection delay, uniform over the measured [min, max] window.
double sample_delay(RngStream& rng, const RadioParams& params);

enum class Phase { Idle, Connecting, Exchanging, Closed };

enum class Outcome {
    None,                 // session not closed yet
    Success,              // exchange completed
    FailedRange,          // contact beyond any usable anchor distance
    FailedDwell,          // peers separated before the handshake finished
    FailedProbabilistic,  // connection attempt lost the success draw
};

std::string_view to_string(Phase phase);
std::string_view to_string(Outcome outcome);

// State of one device-to-device encounter. Closed is absorbing.
struct LinkSession {
    std::string peer_a;
    std::string peer_b;
    Phase phase = Phase::Idle;
    double remaining_delay_s = 0.0;
    double initial_delay_s = 0.0;
    Outcome outcome = Outcome::None;

    bool open() const { return phase != Phase::Closed; }
};

// Advances one session by one tick.
//   Idle + in range      -> success draw at the contact distance, then
//                           Connecting with a sampled delay, or Closed
//                           (FailedRange when the success probability is
//                           zero, FailedProbabilistic when the draw fails)
//   Connecting           -> counts down while in range; leaves range ->
//                           Closed(FailedDwell); countdown expired ->
//                           Exchanging
//   Exchanging           -> Closed(Success) after the one exchange tick
// The opening tick does not count against the delay.
LinkSession step_session(LinkSession s, double dt_s, bool in_range, double distance_m,
                         bool obstacles, const RadioParams& params, RngStream& rng);

enum class SharingMode { SharingOn, SharingOff };

struct EnergyState {
    double battery_pct = 100.0;
    SharingMode mode = SharingMode::SharingOn;
};

// Linear drain at the measured rate for the current mode, floored at 0.
EnergyState energy_tick(EnergyState e, double dt_hours, const RadioParams& params);

}  // namespace pf::radio
