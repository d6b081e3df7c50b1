// pfsim: deterministic scenario runner for the propagate-filter
// device-to-device recommendation simulator.
//
//   pfsim simulate --scenario <file|preset> --seed <u64> --out <dir> [--ticks N] [--plots]
//   pfsim sweep    --scenario <file|preset> --grid <file> --seeds a..b --out <dir>
//   pfsim report   <dir>...
//   pfsim presets
//
// PFSIM_LOG=debug|info|warn|error|off controls verbosity.

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pf/artifacts.hpp"
#include "pf/engine.hpp"
#include "pf/report.hpp"
#include "pf/scenario.hpp"

namespace {

namespace fs = std::filesystem;

void configure_logging() {
    const char* level = std::getenv("PFSIM_LOG");
    if (!level) {
        spdlog::set_level(spdlog::level::info);
        return;
    }
    std::string l(level);
    if (l == "debug") {
        spdlog::set_level(spdlog::level::debug);
    } else if (l == "info") {
        spdlog::set_level(spdlog::level::info);
    } else if (l == "warn") {
        spdlog::set_level(spdlog::level::warn);
    } else if (l == "error") {
        spdlog::set_level(spdlog::level::err);
    } else if (l == "off" || l == "quiet") {
        spdlog::set_level(spdlog::level::off);
    } else {
        spdlog::set_level(spdlog::level::info);
        spdlog::warn("unknown PFSIM_LOG level '{}', using info", l);
    }
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read " + path.string());
    }
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::string scenario_text(const std::string& ref) {
    if (fs::exists(ref)) return read_text(ref);
    if (pf::scenario::is_preset(ref)) return pf::scenario::preset_json(ref);
    std::ostringstream msg;
    msg << "scenario '" << ref << "' is neither a file nor a preset; presets:";
    for (const auto& name : pf::scenario::preset_names()) msg << ' ' << name;
    throw std::runtime_error(msg.str());
}

// "a..b" inclusive, or a single seed.
std::vector<std::uint64_t> parse_seeds(const std::string& spec) {
    std::size_t dots = spec.find("..");
    auto parse_one = [](const std::string& s) {
        std::size_t pos = 0;
        std::uint64_t v = std::stoull(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("bad seed '" + s + "'");
        return v;
    };
    if (dots == std::string::npos) return {parse_one(spec)};
    std::uint64_t lo = parse_one(spec.substr(0, dots));
    std::uint64_t hi = parse_one(spec.substr(dots + 2));
    if (hi < lo) throw std::invalid_argument("seed range end precedes start");
    if (hi - lo > 100000) throw std::invalid_argument("seed range too large");
    std::vector<std::uint64_t> out;
    for (std::uint64_t s = lo; s <= hi; ++s) out.push_back(s);
    return out;
}

int run_simulate(const std::string& scenario_ref, std::uint64_t seed, const fs::path& out_dir,
                 std::optional<long> ticks, bool plots) {
    pf::scenario::ScenarioConfig config = pf::scenario::validate(scenario_text(scenario_ref));
    spdlog::info("simulate scenario={} seed={} peers={} ticks={}", config.name, seed,
                 config.total_peers(), ticks.value_or(config.total_ticks()));
    pf::cli::SimulateOptions opts;
    opts.ticks_override = ticks;
    opts.plots = plots;
    pf::sim::RunResult result = pf::cli::simulate_to_dir(std::move(config), seed, out_dir, opts);
    const auto& m = result.metrics;
    spdlog::info("done: {} sessions, {} successes, {} bytes exchanged -> {}",
                 m.empty() ? 0 : m.back().sessions_opened, m.empty() ? 0 : m.back().success,
                 m.empty() ? 0 : m.back().bytes_exchanged, out_dir.string());
    return 0;
}

int run_sweep(const std::string& scenario_ref, const fs::path& grid_path,
              const std::string& seeds_spec, const fs::path& out_dir, unsigned workers) {
    nlohmann::json base = nlohmann::json::parse(scenario_text(scenario_ref));
    nlohmann::json grid_json = nlohmann::json::parse(read_text(grid_path));
    if (!grid_json.is_object()) {
        throw std::runtime_error("grid file must be a JSON object mapping config paths to arrays");
    }
    pf::cli::SweepSpec spec;
    for (auto it = grid_json.begin(); it != grid_json.end(); ++it) {
        if (!it.value().is_array()) {
            throw std::runtime_error("grid axis '" + it.key() + "' must be an array of values");
        }
        spec.grid[it.key()] = std::vector<nlohmann::json>(it.value().begin(), it.value().end());
    }
    spec.seeds = parse_seeds(seeds_spec);
    std::size_t points = 1;
    for (const auto& [key, values] : spec.grid) {
        (void)key;
        points *= values.size();
    }
    spdlog::info("sweep: {} grid points x {} seeds = {} runs", points, spec.seeds.size(),
                 points * spec.seeds.size());
    pf::cli::sweep_to_dir(base, spec, out_dir, workers);
    spdlog::info("wrote {}", (out_dir / "sweep.csv").string());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    configure_logging();
    CLI::App app{"propagate-filter device-to-device recommendation simulator"};
    app.require_subcommand(1);

    std::string scenario_ref;
    std::string seeds_spec = "0";
    std::uint64_t seed = 0;
    std::string out_dir = "out";
    std::string grid_path;
    long ticks = -1;
    bool plots = false;
    unsigned workers = 0;
    std::vector<std::string> report_dirs;

    auto* simulate = app.add_subcommand("simulate", "run one scenario and write artifacts");
    simulate->add_option("--scenario", scenario_ref, "scenario file or preset name")->required();
    simulate->add_option("--seed", seed, "run seed");
    simulate->add_option("--out", out_dir, "output directory");
    simulate->add_option("--ticks", ticks, "override the scenario duration, in ticks");
    simulate->add_flag("--plots", plots, "also write SVG plots");

    auto* sweep = app.add_subcommand("sweep", "run a parameter grid and aggregate one CSV");
    sweep->add_option("--scenario", scenario_ref, "scenario file or preset name")->required();
    sweep->add_option("--grid", grid_path, "JSON file: config path -> array of values")
        ->required();
    sweep->add_option("--seeds", seeds_spec, "seed or inclusive range a..b");
    sweep->add_option("--out", out_dir, "output directory");
    sweep->add_option("--workers", workers, "worker threads (default: hardware)");

    auto* report = app.add_subcommand("report", "write report.md and plots for run directories");
    report->add_option("dirs", report_dirs, "run directories")->required();

    auto* presets = app.add_subcommand("presets", "list built-in scenario presets");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) {
            std::optional<long> ticks_opt;
            if (ticks >= 0) ticks_opt = ticks;
            return run_simulate(scenario_ref, seed, out_dir, ticks_opt, plots);
        }
        if (sweep->parsed()) {
            return run_sweep(scenario_ref, grid_path, seeds_spec, out_dir, workers);
        }
        if (report->parsed()) {
            for (const auto& dir : report_dirs) {
                pf::report::generate_report(dir);
                spdlog::info("wrote {}", (fs::path(dir) / "report.md").string());
            }
            return 0;
        }
        if (presets->parsed()) {
            for (const auto& name : pf::scenario::preset_names()) {
                std::printf("%s\n", name.c_str());
            }
            return 0;
        }
    } catch (const pf::scenario::ScenarioError& e) {
        spdlog::error("{}", e.what());
        return 1;
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return 2;
    }
    return 0;
}
