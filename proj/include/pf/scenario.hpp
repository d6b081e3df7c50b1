#pragma once
// Scenario schema: the JSON input that fully determines a run together
// with a seed. Validation is strict (unknown keys are errors) and every
// issue names the offending key and the violated constraint.

#include <nlohmann/json_fwd.hpp>

#include <stdexcept>
#include <string>
#include <vector>

#include "pf/mobility.hpp"
#include "pf/radio.hpp"

namespace pf::scenario {

// One latent interest community: a pool of items its members draw their
// ratings from. The label seeds item ids ("<label>-NNN") and stays in the
// metrics side-channel; it is never transmitted.
struct CommunitySpec {
    std::string label;
    int peers = 0;
    int pool_size = 0;
    int ratings_per_peer = 0;
    int value_min = 1;
    int value_max = 5;
};

// Optional pool of globally known items rated across communities. With
// the inverted pattern, communities rate them in opposite high/low
// patterns, so cross-community similarity stays positive but low.
struct SharedItemsSpec {
    int size = 0;
    int ratings_per_peer = 0;
    bool inverted = true;
};

struct FilterParams {
    int k = 5;
    std::size_t capacity = 500;
    int n_draws = 500;
    std::size_t min_overlap = 2;
    double share_fraction = 1.0;
    std::size_t top_n = 10;
};

struct OutputOptions {
    std::vector<std::string> track_items;  // items whose coverage curves go to the summary
    int summary_curve_points = 200;
};

struct ScenarioConfig {
    std::string name = "custom";
    std::vector<CommunitySpec> communities;
    SharedItemsSpec shared_items;
    mobility::Model mobility_model = mobility::Model::RandomWaypoint;
    mobility::MobilityParams mobility;
    int poi_count = 2;  // POIs generated at world build when none are given
    radio::RadioParams radio;
    bool obstacles = false;
    FilterParams filter;
    double duration_s = 3600.0;
    double tick_s = 1.0;
    int sharing_off_peers = 0;  // the first N peers keep sharing disabled
    OutputOptions output;

    int total_peers() const;
    long total_ticks() const;
};

struct ValidationIssue {
    std::string key;
    std::string message;
};

class ScenarioError : public std::runtime_error {
public:
    explicit ScenarioError(std::vector<ValidationIssue> issues);
    const std::vector<ValidationIssue>& issues() const { return issues_; }

private:
    std::vector<ValidationIssue> issues_;
};

// Parses and validates scenario JSON text; throws ScenarioError carrying
// every detected issue.
ScenarioConfig validate(const std::string& json_text);

ScenarioConfig from_json(const nlohmann::json& j);

std::string_view to_string(mobility::Model model);

// Built-in scenario presets. Preset JSON goes through the same validate()
// path as user files.
std::vector<std::string> preset_names();
bool is_preset(const std::string& name);
std::string preset_json(const std::string& name);  // throws std::out_of_range
ScenarioConfig preset(const std::string& name);

}  // namespace pf::scenario
