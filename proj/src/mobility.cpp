#include "pf/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pf::mobility {

double distance(const Position& a, const Position& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

namespace {

Position clamp_to_area(Position p, const MobilityParams& params) {
    p.x = std::clamp(p.x, 0.0, params.area_width);
    p.y = std::clamp(p.y, 0.0, params.area_height);
    return p;
}

Position random_point(const MobilityParams& params, RngStream& rng) {
    return Position{rng.uniform(0.0, params.area_width), rng.uniform(0.0, params.area_height)};
}

void pick_next_leg(MobilityState& m, const MobilityParams& params, RngStream& rng) {
    m.waypoint = random_point(params, rng);
    m.speed = rng.uniform(params.v_min, params.v_max);
}

void pick_next_poi(MobilityState& m, const MobilityParams& params, RngStream& rng) {
    if (params.pois.size() > 1) {
        // Relocate to a different POI than the current one.
        std::size_t offset = 1 + static_cast<std::size_t>(rng.uniform_int(params.pois.size() - 1));
        m.poi_index = (m.poi_index + offset) % params.pois.size();
    }
    m.position = clamp_to_area(params.pois[m.poi_index], params);
    m.pause_remaining_s = rng.exponential(params.dwell_mean_s);
}

Position transit_position(double elapsed_s, const MobilityParams& params) {
    Position p{params.transit_start.x + params.transit_velocity.x * elapsed_s,
               params.transit_start.y + params.transit_velocity.y * elapsed_s};
    return clamp_to_area(p, params);
}

// Advance along the segment toward the waypoint; returns true on arrival.
bool advance(MobilityState& m, double dt_s) {
    double dx = m.waypoint.x - m.position.x;
    double dy = m.waypoint.y - m.position.y;
    double dist = std::hypot(dx, dy);
    double step = m.speed * dt_s;
    if (dist <= step || dist == 0.0) {
        m.position = m.waypoint;
        return true;
    }
    m.position.x += dx / dist * step;
    m.position.y += dy / dist * step;
    return false;
}

}  // namespace

MobilityState init_mobility(Model model, std::size_t peer_index, const MobilityParams& params,
                            RngStream& rng) {
    MobilityState m;
    m.model = model;
    m.peer_index = peer_index;
    switch (model) {
        case Model::RandomWaypoint:
            m.position = random_point(params, rng);
            pick_next_leg(m, params, rng);
            break;
        case Model::Gathering: {
            if (params.pois.empty()) {
                throw std::invalid_argument("Gathering model requires at least one POI");
            }
            m.poi_index = peer_index % params.pois.size();
            m.position = clamp_to_area(params.pois[m.poi_index], params);
            m.pause_remaining_s = rng.exponential(params.dwell_mean_s);
            break;
        }
        case Model::TransitLine:
            m.position = transit_position(0.0, params);
            break;
        case Model::LinePath: {
            if (peer_index >= params.paths.size()) {
                throw std::invalid_argument("LinePath model requires one path per peer");
            }
            const auto& spec = params.paths[peer_index];
            m.position = clamp_to_area(spec.start, params);
            m.waypoint = clamp_to_area(spec.end, params);
            m.speed = spec.speed;
            break;
        }
    }
    return m;
}

MobilityState step_mobility(MobilityState m, double dt_s, const MobilityParams& params,
                            RngStream& rng) {
    if (dt_s <= 0.0) {
        throw std::invalid_argument("dt must be positive");
    }
    switch (m.model) {
        case Model::RandomWaypoint: {
            if (m.pause_remaining_s > 0.0) {
                m.pause_remaining_s -= dt_s;
                if (m.pause_remaining_s <= 0.0) {
                    m.pause_remaining_s = 0.0;
                    pick_next_leg(m, params, rng);
                }
                break;
            }
            if (advance(m, dt_s)) {
                m.pause_remaining_s = rng.uniform(0.0, params.pause_max_s);
                if (m.pause_remaining_s == 0.0) pick_next_leg(m, params, rng);
            }
            break;
        }
        case Model::Gathering: {
            m.pause_remaining_s -= dt_s;
            if (m.pause_remaining_s <= 0.0) pick_next_poi(m, params, rng);
            break;
        }
        case Model::TransitLine: {
            m.elapsed_s += dt_s;
            if (!m.dispersed && m.elapsed_s >= params.transit_interval_s) {
                m.dispersed = true;
                pick_next_leg(m, params, rng);
            }
            if (m.dispersed) {
                if (advance(m, dt_s)) {
                    m.pause_remaining_s = 0.0;
                    pick_next_leg(m, params, rng);
                }
            } else {
                m.position = transit_position(m.elapsed_s, params);
            }
            break;
        }
        case Model::LinePath: {
            if (m.speed > 0.0) advance(m, dt_s);
            break;
        }
    }
    return m;
}

DistanceMatrix pairwise_distances(const std::vector<Position>& positions) {
    DistanceMatrix out(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) {
        for (std::size_t j = i + 1; j < positions.size(); ++j) {
            out.set(i, j, distance(positions[i], positions[j]));
        }
    }
    return out;
}

}  // namespace pf::mobility
