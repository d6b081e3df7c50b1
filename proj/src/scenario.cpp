#include "pf/scenario.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace pf::scenario {

using nlohmann::json;

int ScenarioConfig::total_peers() const {
    int n = 0;
    for (const auto& c : communities) n += c.peers;
    return n;
}

long ScenarioConfig::total_ticks() const {
    return static_cast<long>(duration_s / tick_s + 0.5);
}

namespace {

std::string join_issues(const std::vector<ValidationIssue>& issues) {
    std::ostringstream out;
    out << "invalid scenario (" << issues.size() << " issue" << (issues.size() == 1 ? "" : "s")
        << "):";
    for (const auto& i : issues) out << "\n  " << i.key << ": " << i.message;
    return out.str();
}

bool valid_label(const std::string& s) {
    if (s.empty() || s.size() > 24) return false;
    for (char c : s) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                  c == '-' || c == '_';
        if (!ok) return false;
    }
    return true;
}

// Strict-schema walker: collects range violations, type mismatches, and
// unknown keys, all addressed by dotted key path.
class Reader {
public:
    Reader(const json& obj, std::string prefix, std::vector<ValidationIssue>& issues)
        : obj_(obj), prefix_(std::move(prefix)), issues_(issues) {}

    ~Reader() {
        if (!obj_.is_object()) return;
        for (auto it = obj_.begin(); it != obj_.end(); ++it) {
            if (!seen_.count(it.key())) {
                issues_.push_back({path(it.key()), "unknown key"});
            }
        }
    }

    Reader(const Reader&) = delete;
    Reader& operator=(const Reader&) = delete;

    bool has(const std::string& key) {
        seen_.insert(key);
        return obj_.is_object() && obj_.contains(key);
    }

    const json* raw(const std::string& key) {
        return has(key) ? &obj_.at(key) : nullptr;
    }

    template <typename T>
    void number(const std::string& key, T& out, double lo, double hi) {
        const json* v = raw(key);
        if (!v) return;
        if (!v->is_number()) {
            issues_.push_back({path(key), "expected a number"});
            return;
        }
        double d = v->get<double>();
        if (std::is_integral_v<T> && d != static_cast<double>(static_cast<long long>(d))) {
            issues_.push_back({path(key), "expected an integer"});
            return;
        }
        if (d < lo || d > hi) {
            std::ostringstream msg;
            msg << "must be in [" << lo << ", " << hi << "]";
            issues_.push_back({path(key), msg.str()});
            return;
        }
        out = static_cast<T>(d);
    }

    void boolean(const std::string& key, bool& out) {
        const json* v = raw(key);
        if (!v) return;
        if (!v->is_boolean()) {
            issues_.push_back({path(key), "expected a boolean"});
            return;
        }
        out = v->get<bool>();
    }

    void string(const std::string& key, std::string& out) {
        const json* v = raw(key);
        if (!v) return;
        if (!v->is_string()) {
            issues_.push_back({path(key), "expected a string"});
            return;
        }
        out = v->get<std::string>();
    }

    void fail(const std::string& key, const std::string& message) {
        issues_.push_back({path(key), message});
    }

    std::string path(const std::string& key) const {
        return prefix_.empty() ? key : prefix_ + "." + key;
    }

    const json& obj() const { return obj_; }
    std::vector<ValidationIssue>& issues() { return issues_; }

private:
    const json& obj_;
    std::string prefix_;
    std::vector<ValidationIssue>& issues_;
    std::set<std::string> seen_;
};

bool parse_point(const json& v, mobility::Position& out) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) return false;
    out.x = v[0].get<double>();
    out.y = v[1].get<double>();
    return true;
}

void parse_communities(Reader& top, ScenarioConfig& cfg) {
    const json* arr = top.raw("communities");
    if (!arr) return;
    if (!arr->is_array()) {
        top.fail("communities", "expected an array of community objects");
        return;
    }
    cfg.communities.clear();
    std::set<std::string> labels;
    for (std::size_t i = 0; i < arr->size(); ++i) {
        std::string prefix = "communities[" + std::to_string(i) + "]";
        if (!(*arr)[i].is_object()) {
            top.issues().push_back({prefix, "expected an object"});
            continue;
        }
        CommunitySpec c;
        {
            Reader r((*arr)[i], prefix, top.issues());
            r.string("label", c.label);
            r.number("peers", c.peers, 1, 100000);
            r.number("pool_size", c.pool_size, 1, 1000000);
            r.number("ratings_per_peer", c.ratings_per_peer, 1, 1000000);
            r.number("value_min", c.value_min, 1, 5);
            r.number("value_max", c.value_max, 1, 5);
            if (c.label.empty()) c.label = "c" + std::to_string(i);
            if (!valid_label(c.label)) {
                r.fail("label", "must match [A-Za-z0-9_-]{1,24}");
            } else if (!labels.insert(c.label).second) {
                r.fail("label", "duplicate community label '" + c.label + "'");
            }
            if (c.ratings_per_peer > c.pool_size) {
                r.fail("ratings_per_peer", "cannot exceed pool_size");
            }
            if (c.value_min > c.value_max) {
                r.fail("value_min", "cannot exceed value_max");
            }
            if (c.peers < 1) r.fail("peers", "must be >= 1");
            if (c.pool_size < 1) r.fail("pool_size", "must be >= 1");
            if (c.ratings_per_peer < 1) r.fail("ratings_per_peer", "must be >= 1");
        }
        cfg.communities.push_back(std::move(c));
    }
}

void parse_shared_items(Reader& top, ScenarioConfig& cfg) {
    const json* obj = top.raw("shared_items");
    if (!obj) return;
    if (!obj->is_object()) {
        top.fail("shared_items", "expected an object");
        return;
    }
    Reader r(*obj, "shared_items", top.issues());
    r.number("size", cfg.shared_items.size, 0, 1000000);
    r.number("ratings_per_peer", cfg.shared_items.ratings_per_peer, 0, 1000000);
    std::string pattern = cfg.shared_items.inverted ? "inverted" : "uniform";
    r.string("pattern", pattern);
    if (pattern == "inverted") {
        cfg.shared_items.inverted = true;
    } else if (pattern == "uniform") {
        cfg.shared_items.inverted = false;
    } else {
        r.fail("pattern", "must be 'inverted' or 'uniform'");
    }
    if (cfg.shared_items.ratings_per_peer > cfg.shared_items.size) {
        r.fail("ratings_per_peer", "cannot exceed size");
    }
}

void parse_mobility(Reader& top, ScenarioConfig& cfg) {
    const json* obj = top.raw("mobility");
    if (!obj) return;
    if (!obj->is_object()) {
        top.fail("mobility", "expected an object");
        return;
    }
    Reader r(*obj, "mobility", top.issues());
    std::string model = std::string(to_string(cfg.mobility_model));
    r.string("model", model);
    if (model == "random_waypoint") {
        cfg.mobility_model = mobility::Model::RandomWaypoint;
    } else if (model == "gathering") {
        cfg.mobility_model = mobility::Model::Gathering;
    } else if (model == "transit_line") {
        cfg.mobility_model = mobility::Model::TransitLine;
    } else if (model == "line_path") {
        cfg.mobility_model = mobility::Model::LinePath;
    } else {
        r.fail("model",
               "must be one of random_waypoint, gathering, transit_line, line_path");
    }
    auto& m = cfg.mobility;
    r.number("v_min", m.v_min, 1e-6, 100.0);
    r.number("v_max", m.v_max, 1e-6, 100.0);
    r.number("pause_max_s", m.pause_max_s, 0.0, 1e6);
    r.number("dwell_mean_s", m.dwell_mean_s, 1e-6, 1e7);
    r.number("poi_count", cfg.poi_count, 1, 1000);
    r.number("transit_interval_s", m.transit_interval_s, 0.0, 1e7);
    if (m.v_min > m.v_max) r.fail("v_min", "cannot exceed v_max");
    if (const json* pois = r.raw("pois")) {
        if (!pois->is_array()) {
            r.fail("pois", "expected an array of [x, y] points");
        } else {
            m.pois.clear();
            for (std::size_t i = 0; i < pois->size(); ++i) {
                mobility::Position p;
                if (!parse_point((*pois)[i], p)) {
                    r.fail("pois[" + std::to_string(i) + "]", "expected an [x, y] point");
                    continue;
                }
                m.pois.push_back(p);
            }
        }
    }
    if (const json* v = r.raw("transit_start")) {
        if (!parse_point(*v, m.transit_start)) r.fail("transit_start", "expected an [x, y] point");
    }
    if (const json* v = r.raw("transit_velocity")) {
        if (!parse_point(*v, m.transit_velocity)) {
            r.fail("transit_velocity", "expected an [vx, vy] pair");
        }
    }
    if (const json* paths = r.raw("paths")) {
        if (!paths->is_array()) {
            r.fail("paths", "expected an array of path objects");
        } else {
            m.paths.clear();
            for (std::size_t i = 0; i < paths->size(); ++i) {
                std::string prefix = "mobility.paths[" + std::to_string(i) + "]";
                if (!(*paths)[i].is_object()) {
                    top.issues().push_back({prefix, "expected an object"});
                    continue;
                }
                mobility::LineSpec spec;
                Reader pr((*paths)[i], prefix, top.issues());
                if (const json* v = pr.raw("start")) {
                    if (!parse_point(*v, spec.start)) pr.fail("start", "expected an [x, y] point");
                } else {
                    pr.fail("start", "required");
                }
                if (const json* v = pr.raw("end")) {
                    if (!parse_point(*v, spec.end)) pr.fail("end", "expected an [x, y] point");
                } else {
                    pr.fail("end", "required");
                }
                pr.number("speed", spec.speed, 0.0, 100.0);
                m.paths.push_back(spec);
            }
        }
    }
}

void parse_radio(Reader& top, ScenarioConfig& cfg, std::vector<bool>& anchor_has_obstructed) {
    const json* obj = top.raw("radio");
    if (!obj) {
        anchor_has_obstructed.assign(cfg.radio.anchors.size(), true);
        return;
    }
    if (!obj->is_object()) {
        top.fail("radio", "expected an object");
        return;
    }
    Reader r(*obj, "radio", top.issues());
    auto& p = cfg.radio;
    r.number("effective_radius_m", p.effective_radius_m, 1e-6, 1000.0);
    r.number("delay_min_s", p.delay_min_s, 0.0, 1e6);
    r.number("delay_max_s", p.delay_max_s, 0.0, 1e6);
    r.number("drain_on_pct_per_h", p.drain_on_pct_per_h, 0.0, 100.0);
    r.number("drain_off_pct_per_h", p.drain_off_pct_per_h, 0.0, 100.0);
    if (p.delay_min_s > p.delay_max_s) r.fail("delay_min_s", "cannot exceed delay_max_s");
    anchor_has_obstructed.assign(p.anchors.size(), true);
    if (const json* anchors = r.raw("anchors")) {
        if (!anchors->is_array() || anchors->empty()) {
            r.fail("anchors", "expected a non-empty array of anchor objects");
            return;
        }
        p.anchors.clear();
        anchor_has_obstructed.clear();
        for (std::size_t i = 0; i < anchors->size(); ++i) {
            std::string prefix = "radio.anchors[" + std::to_string(i) + "]";
            if (!(*anchors)[i].is_object()) {
                top.issues().push_back({prefix, "expected an object"});
                continue;
            }
            radio::RangeAnchor a;
            Reader ar((*anchors)[i], prefix, top.issues());
            ar.number("distance_m", a.distance_m, 0.0, 10000.0);
            ar.number("p_clear", a.p_clear, 0.0, 1.0);
            bool has_obstructed = ar.has("p_obstructed");
            ar.number("p_obstructed", a.p_obstructed, 0.0, 1.0);
            p.anchors.push_back(a);
            anchor_has_obstructed.push_back(has_obstructed);
        }
        for (std::size_t i = 1; i < p.anchors.size(); ++i) {
            if (p.anchors[i].distance_m <= p.anchors[i - 1].distance_m) {
                r.fail("anchors[" + std::to_string(i) + "].distance_m",
                       "anchor distances must be strictly increasing");
            }
            if (p.anchors[i].p_clear > p.anchors[i - 1].p_clear) {
                r.fail("anchors[" + std::to_string(i) + "].p_clear",
                       "success probabilities must be non-increasing with distance");
            }
            if (anchor_has_obstructed[i] && anchor_has_obstructed[i - 1] &&
                p.anchors[i].p_obstructed > p.anchors[i - 1].p_obstructed) {
                r.fail("anchors[" + std::to_string(i) + "].p_obstructed",
                       "success probabilities must be non-increasing with distance");
            }
        }
    }
}

void parse_filter(Reader& top, ScenarioConfig& cfg) {
    const json* obj = top.raw("filter");
    if (!obj) return;
    if (!obj->is_object()) {
        top.fail("filter", "expected an object");
        return;
    }
    Reader r(*obj, "filter", top.issues());
    r.number("k", cfg.filter.k, 1, 100000);
    r.number("capacity", cfg.filter.capacity, 1, 10000000);
    r.number("n_draws", cfg.filter.n_draws, 1, 10000000);
    r.number("min_overlap", cfg.filter.min_overlap, 1, 1000000);
    r.number("share_fraction", cfg.filter.share_fraction, 0.0, 1.0);
    r.number("top_n", cfg.filter.top_n, 1, 1000000);
}

void parse_output(Reader& top, ScenarioConfig& cfg) {
    const json* obj = top.raw("output");
    if (!obj) return;
    if (!obj->is_object()) {
        top.fail("output", "expected an object");
        return;
    }
    Reader r(*obj, "output", top.issues());
    r.number("summary_curve_points", cfg.output.summary_curve_points, 1, 100000);
    if (const json* items = r.raw("track_items")) {
        if (!items->is_array()) {
            r.fail("track_items", "expected an array of item ids");
        } else {
            cfg.output.track_items.clear();
            for (std::size_t i = 0; i < items->size(); ++i) {
                if (!(*items)[i].is_string()) {
                    r.fail("track_items[" + std::to_string(i) + "]", "expected a string");
                    continue;
                }
                cfg.output.track_items.push_back((*items)[i].get<std::string>());
            }
        }
    }
}

}  // namespace

ScenarioError::ScenarioError(std::vector<ValidationIssue> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

std::string_view to_string(mobility::Model model) {
    switch (model) {
        case mobility::Model::RandomWaypoint: return "random_waypoint";
        case mobility::Model::Gathering: return "gathering";
        case mobility::Model::TransitLine: return "transit_line";
        case mobility::Model::LinePath: return "line_path";
    }
    return "unknown";
}

ScenarioConfig from_json(const json& j) {
    std::vector<ValidationIssue> issues;
    ScenarioConfig cfg;
    cfg.radio = radio::RadioParams::defaults();
    // Default world: one community of 50 pedestrians roaming 200 x 200 m.
    cfg.communities = {CommunitySpec{"c0", 50, 100, 20, 1, 5}};

    if (!j.is_object()) {
        issues.push_back({"<root>", "scenario must be a JSON object"});
        throw ScenarioError(std::move(issues));
    }

    std::vector<bool> anchor_has_obstructed;
    {
        Reader top(j, "", issues);
        top.string("name", cfg.name);
        if (const json* area = top.raw("area")) {
            if (!area->is_object()) {
                top.fail("area", "expected an object");
            } else {
                Reader r(*area, "area", issues);
                r.number("width", cfg.mobility.area_width, 1.0, 1e6);
                r.number("height", cfg.mobility.area_height, 1.0, 1e6);
            }
        }
        parse_communities(top, cfg);
        parse_shared_items(top, cfg);
        parse_mobility(top, cfg);
        parse_radio(top, cfg, anchor_has_obstructed);
        top.boolean("obstacles", cfg.obstacles);
        parse_filter(top, cfg);
        top.number("duration_s", cfg.duration_s, 1e-6, 1e9);
        top.number("tick_s", cfg.tick_s, 1e-6, 1e6);
        top.number("sharing_off_peers", cfg.sharing_off_peers, 0, 1000000);
        parse_output(top, cfg);
    }

    // Cross-field constraints.
    if (cfg.communities.empty()) {
        issues.push_back({"communities", "at least one community is required"});
    }
    if (cfg.obstacles) {
        for (std::size_t i = 0; i < anchor_has_obstructed.size(); ++i) {
            if (!anchor_has_obstructed[i]) {
                issues.push_back({"radio.anchors[" + std::to_string(i) + "].p_obstructed",
                                  "required when obstacles=true"});
            }
        }
    }
    if (cfg.sharing_off_peers > cfg.total_peers()) {
        issues.push_back({"sharing_off_peers", "cannot exceed the total peer count"});
    }
    if (cfg.mobility_model == mobility::Model::LinePath &&
        static_cast<int>(cfg.mobility.paths.size()) != cfg.total_peers()) {
        issues.push_back({"mobility.paths",
                          "line_path requires exactly one path per peer (" +
                              std::to_string(cfg.total_peers()) + " peers, " +
                              std::to_string(cfg.mobility.paths.size()) + " paths)"});
    }
    auto inside = [&](const mobility::Position& p) {
        return p.x >= 0.0 && p.x <= cfg.mobility.area_width && p.y >= 0.0 &&
               p.y <= cfg.mobility.area_height;
    };
    for (std::size_t i = 0; i < cfg.mobility.pois.size(); ++i) {
        if (!inside(cfg.mobility.pois[i])) {
            issues.push_back({"mobility.pois[" + std::to_string(i) + "]",
                              "point lies outside the configured area"});
        }
    }
    for (std::size_t i = 0; i < cfg.mobility.paths.size(); ++i) {
        if (!inside(cfg.mobility.paths[i].start) || !inside(cfg.mobility.paths[i].end)) {
            issues.push_back({"mobility.paths[" + std::to_string(i) + "]",
                              "path endpoints must lie inside the configured area"});
        }
    }

    if (!issues.empty()) throw ScenarioError(std::move(issues));
    return cfg;
}

ScenarioConfig validate(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ScenarioError({{"<json>", e.what()}});
    }
    return from_json(j);
}

namespace {

// Presets mirror the prototype experiments: a 100 kB bulk share, the
// four-device lossless exchange, the public-transport run, the
// passing-pedestrians / cafe contrast, and the two-community flow
// scenario.
const std::map<std::string, std::string>& preset_map() {
    static const std::map<std::string, std::string> presets = {
        {"bulk-1000", R"({
            "name": "bulk-1000",
            "area": {"width": 200, "height": 200},
            "communities": [
                {"label": "c0", "peers": 2, "pool_size": 1000, "ratings_per_peer": 1000}
            ],
            "mobility": {
                "model": "line_path",
                "paths": [
                    {"start": [100, 100], "end": [100, 100], "speed": 0},
                    {"start": [101, 100], "end": [101, 100], "speed": 0}
                ]
            },
            "duration_s": 120
        })"},
        {"four-device", R"({
            "name": "four-device",
            "area": {"width": 200, "height": 200},
            "communities": [
                {"label": "d0", "peers": 1, "pool_size": 25, "ratings_per_peer": 25},
                {"label": "d1", "peers": 1, "pool_size": 25, "ratings_per_peer": 25},
                {"label": "d2", "peers": 1, "pool_size": 25, "ratings_per_peer": 25},
                {"label": "d3", "peers": 1, "pool_size": 25, "ratings_per_peer": 25}
            ],
            "mobility": {
                "model": "line_path",
                "paths": [
                    {"start": [100, 100], "end": [100, 100], "speed": 0},
                    {"start": [101, 100], "end": [101, 100], "speed": 0},
                    {"start": [100, 101], "end": [100, 101], "speed": 0},
                    {"start": [101, 101], "end": [101, 101], "speed": 0}
                ]
            },
            "duration_s": 600
        })"},
        {"transit", R"({
            "name": "transit",
            "area": {"width": 300, "height": 200},
            "communities": [
                {"label": "riders", "peers": 3, "pool_size": 50, "ratings_per_peer": 20}
            ],
            "mobility": {
                "model": "transit_line",
                "transit_start": [10, 100],
                "transit_velocity": [1.0, 0],
                "transit_interval_s": 240
            },
            "duration_s": 300
        })"},
        {"pedestrian-pass", R"({
            "name": "pedestrian-pass",
            "area": {"width": 200, "height": 200},
            "communities": [
                {"label": "c0", "peers": 2, "pool_size": 20, "ratings_per_peer": 10}
            ],
            "mobility": {
                "model": "line_path",
                "paths": [
                    {"start": [0, 100], "end": [200, 100], "speed": 1.4},
                    {"start": [200, 100], "end": [0, 100], "speed": 1.4}
                ]
            },
            "duration_s": 150
        })"},
        {"cafe", R"({
            "name": "cafe",
            "area": {"width": 200, "height": 200},
            "communities": [
                {"label": "guests", "peers": 6, "pool_size": 50, "ratings_per_peer": 20}
            ],
            "mobility": {
                "model": "gathering",
                "pois": [[60, 100], [140, 100]],
                "dwell_mean_s": 300
            },
            "duration_s": 900
        })"},
        {"two-communities", R"({
            "name": "two-communities",
            "area": {"width": 250, "height": 250},
            "communities": [
                {"label": "c0", "peers": 20, "pool_size": 40, "ratings_per_peer": 15,
                 "value_min": 4, "value_max": 5},
                {"label": "c1", "peers": 20, "pool_size": 40, "ratings_per_peer": 15,
                 "value_min": 4, "value_max": 5}
            ],
            "shared_items": {"size": 10, "ratings_per_peer": 6, "pattern": "inverted"},
            "mobility": {
                "model": "random_waypoint",
                "v_min": 1.0, "v_max": 1.8, "pause_max_s": 60
            },
            "duration_s": 7200
        })"},
    };
    return presets;
}

}  // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& [name, text] : preset_map()) names.push_back(name);
    return names;
}

bool is_preset(const std::string& name) { return preset_map().count(name) != 0; }

std::string preset_json(const std::string& name) { return preset_map().at(name); }

ScenarioConfig preset(const std::string& name) { return validate(preset_json(name)); }

}  // namespace pf::scenario
