#pragma once
// Run artifacts: metrics.csv, events.jsonl, summary.json, and sweep
// aggregation. Files are written atomically (temp + rename) and all
// float formatting uses shortest-round-trip text, so identical runs
// produce byte-identical artifacts.

#include <nlohmann/json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pf/engine.hpp"
#include "pf/scenario.hpp"

namespace pf::cli {

inline constexpr std::string_view kMetricsSchema = "pf-metrics-v1";
inline constexpr std::string_view kSummarySchema = "pf-summary-v1";

// Shortest text that parses back to exactly the same double.
std::string format_number(double v);

std::string metrics_csv(const sim::RunResult& result);
std::string events_jsonl(const sim::RunResult& result);
nlohmann::ordered_json build_summary(const sim::RunResult& result);

void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

struct SimulateOptions {
    std::optional<long> ticks_override;
    bool plots = false;
};

// Runs one scenario and writes metrics.csv, events.jsonl, summary.json
// (plus plots/ when requested) into out_dir.
sim::RunResult simulate_to_dir(scenario::ScenarioConfig config, std::uint64_t seed,
                               const std::filesystem::path& out_dir,
                               const SimulateOptions& opts = {});

struct SweepSpec {
    // Dotted config path (e.g. "filter.k", "communities.0.peers") to the
    // values it sweeps over.
    std::map<std::string, std::vector<nlohmann::json>> grid;
    std::vector<std::uint64_t> seeds;
};

// Cartesian product of grid values x seeds over the base scenario JSON;
// one aggregated CSV, rows sorted by (grid point, seed). Runs execute on
// a worker pool; output order does not depend on scheduling.
void sweep_to_dir(const nlohmann::json& base_config, const SweepSpec& spec,
                  const std::filesystem::path& out_dir, unsigned workers = 0);

}  // namespace pf::cli
