#pragma once
// Spatial movement of peers: random-waypoint roaming, gathering dwell
// behavior at points of interest, a transit-vehicle model, and scripted
// straight-line walks. Movement drives encounter opportunities; it is
// the only peer sampling mechanism in the system.

#include <cstddef>
#include <vector>

#include "pf/rng.hpp"

namespace pf::mobility {

struct Position {
    double x = 0.0;
    double y = 0.0;
};

double distance(const Position& a, const Position& b);

enum class Model { RandomWaypoint, Gathering, TransitLine, LinePath };

// A scripted straight-line walk; speed 0 keeps the peer stationary at
// its start point.
struct LineSpec {
    Position start;
    Position end;
    double speed = 0.0;
};

struct MobilityParams {
    double area_width = 200.0;
    double area_height = 200.0;

    // Random waypoint
    double v_min = 0.5;
    double v_max = 1.5;
    double pause_max_s = 120.0;

    // Gathering
    std::vector<Position> pois;
    double dwell_mean_s = 300.0;

    // Transit line: one shared vehicle crossing the area, then dispersal
    // into random-waypoint roaming.
    Position transit_start{0.0, 0.0};
    Position transit_velocity{8.0, 0.0};  // m/s
    double transit_interval_s = 240.0;

    // Line path, one spec per peer
    std::vector<LineSpec> paths;
};

struct MobilityState {
    Model model = Model::RandomWaypoint;
    std::size_t peer_index = 0;
    Position position;
    Position waypoint;
    double speed = 0.0;
    double pause_remaining_s = 0.0;  // also the gathering dwell timer
    std::size_t poi_index = 0;
    double elapsed_s = 0.0;  // transit clock
    bool dispersed = false;  // transit interval over
};

// Initial state for one peer; consumes randomness only where the model
// calls for it (spawn point, first waypoint, first dwell).
MobilityState init_mobility(Model model, std::size_t peer_index, const MobilityParams& params,
                            RngStream& rng);

// Advances one peer by dt seconds. Positions never leave the configured
// area: waypoints are redrawn inside it rather than reflected.
MobilityState step_mobility(MobilityState m, double dt_s, const MobilityParams& params,
                            RngStream& rng);

// Symmetric Euclidean distance matrix with a zero diagonal, stored
// row-major over the full n x n square.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    explicit DistanceMatrix(std::size_t n) : n_(n), d_(n * n, 0.0) {}

    std::size_t size() const { return n_; }
    double at(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
    void set(std::size_t i, std::size_t j, double v) {
        d_[i * n_ + j] = v;
        d_[j * n_ + i] = v;
    }

private:
    std::size_t n_ = 0;
    std::vector<double> d_;
};

DistanceMatrix pairwise_distances(const std::vector<Position>& positions);

}  // namespace pf::mobility
