#include "pf/artifacts.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <sstream>
#include <thread>

#include "pf/report.hpp"

namespace pf::cli {

using nlohmann::json;
using nlohmann::ordered_json;

std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::string hex64(std::uint64_t v) {
    static const char* hex = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = hex[v & 0xf];
        v >>= 4;
    }
    return s;
}

struct BatteryStats {
    double mean = 0.0, min = 0.0, max = 0.0;
};

BatteryStats battery_stats(const std::vector<double>& battery) {
    BatteryStats out;
    if (battery.empty()) return out;
    out.min = battery.front();
    out.max = battery.front();
    double sum = 0.0;
    for (double b : battery) {
        sum += b;
        out.min = std::min(out.min, b);
        out.max = std::max(out.max, b);
    }
    out.mean = sum / static_cast<double>(battery.size());
    return out;
}

std::string flow_ratio_cell(const sim::FlowStats& flow) {
    switch (flow.state) {
        case sim::FlowState::Defined: return format_number(flow.ratio);
        case sim::FlowState::Infinite: return "inf";
        case sim::FlowState::Undefined: return "";
    }
    return "";
}

std::string_view flow_state_name(sim::FlowState state) {
    switch (state) {
        case sim::FlowState::Defined: return "defined";
        case sim::FlowState::Infinite: return "infinite";
        case sim::FlowState::Undefined: return "undefined";
    }
    return "undefined";
}

}  // namespace

std::string metrics_csv(const sim::RunResult& result) {
    std::ostringstream out;
    out << "# " << kMetricsSchema << "\n";
    out << "tick,active_sessions,sessions_opened,success,failed_range,failed_dwell,"
           "failed_probabilistic,exchanges,admissions,bytes_exchanged,"
           "battery_mean,battery_min,battery_max,coverage_mean,flow_within,flow_cross,flow_ratio";
    const auto& tracked = result.world.config().output.track_items;
    std::vector<std::string> tracked_sorted(tracked.begin(), tracked.end());
    std::sort(tracked_sorted.begin(), tracked_sorted.end());
    for (const auto& item : tracked_sorted) out << ",cov_" << item;
    out << "\n";
    for (const auto& m : result.metrics) {
        BatteryStats b = battery_stats(m.battery);
        out << m.tick << ',' << m.active_sessions << ',' << m.sessions_opened << ',' << m.success
            << ',' << m.failed_range << ',' << m.failed_dwell << ',' << m.failed_probabilistic
            << ',' << m.exchanges << ',' << m.admissions << ',' << m.bytes_exchanged << ','
            << format_number(b.mean) << ',' << format_number(b.min) << ',' << format_number(b.max)
            << ',' << format_number(m.coverage_mean) << ',' << format_number(m.flow.within) << ','
            << format_number(m.flow.cross) << ',' << flow_ratio_cell(m.flow);
        for (const auto& item : tracked_sorted) {
            auto it = m.item_coverage.find(item);
            out << ',' << format_number(it == m.item_coverage.end() ? 0.0 : it->second);
        }
        out << "\n";
    }
    return out.str();
}

std::string events_jsonl(const sim::RunResult& result) {
    std::ostringstream out;
    for (const auto& e : result.events) {
        ordered_json j;
        j["tick"] = e.tick;
        j["type"] = e.type;
        if (e.type == "contact-begin" || e.type == "session-opened") {
            j["a"] = e.a;
            j["b"] = e.b;
            j["distance_m"] = e.distance_m;
        } else if (e.type == "contact-end") {
            j["a"] = e.a;
            j["b"] = e.b;
            j["dwell_s"] = e.dwell_s;
        } else if (e.type == "session-closed") {
            j["a"] = e.a;
            j["b"] = e.b;
            j["outcome"] = e.outcome;
        } else if (e.type == "exchange") {
            j["sender"] = e.a;
            j["receiver"] = e.b;
            j["bytes"] = e.bytes;
            j["n_sim"] = e.n_sim;
            j["n_nbhd"] = e.n_nbhd;
            j["payload_hash"] = hex64(e.payload_hash);
        } else if (e.type == "admission") {
            j["sender"] = e.a;
            j["receiver"] = e.b;
            j["score"] = e.score;
            j["admitted"] = e.admitted;
        } else if (e.type == "resample") {
            j["peer"] = e.a;
            j["distinct_items"] = e.distinct_items;
            j["total_weight"] = e.total_weight;
        }
        out << j.dump() << "\n";
    }
    return out.str();
}

ordered_json build_summary(const sim::RunResult& result) {
    const auto& world = result.world;
    const auto& cfg = world.config();
    ordered_json j;
    j["schema"] = std::string(kSummarySchema);
    j["scenario"] = cfg.name;
    j["seed"] = world.seed();
    j["peers"] = cfg.total_peers();
    j["ticks"] = static_cast<long>(result.metrics.size());
    j["tick_s"] = cfg.tick_s;

    ordered_json outcomes;
    const sim::MetricsRecord* last = result.metrics.empty() ? nullptr : &result.metrics.back();
    outcomes["success"] = last ? last->success : 0;
    outcomes["failed_range"] = last ? last->failed_range : 0;
    outcomes["failed_dwell"] = last ? last->failed_dwell : 0;
    outcomes["failed_probabilistic"] = last ? last->failed_probabilistic : 0;
    j["outcomes"] = outcomes;
    j["sessions_opened"] = last ? last->sessions_opened : 0;
    j["exchanges"] = last ? last->exchanges : 0;
    j["admissions"] = last ? last->admissions : 0;
    j["bytes_exchanged"] = last ? last->bytes_exchanged : 0;

    BatteryStats b = last ? battery_stats(last->battery) : BatteryStats{};
    ordered_json battery;
    battery["mean"] = b.mean;
    battery["min"] = b.min;
    battery["max"] = b.max;
    j["battery"] = battery;

    j["coverage_mean_final"] = last ? last->coverage_mean : 0.0;

    sim::FlowStats flow;
    if (world.community_labels().size() >= 2) flow = sim::flow_ratio(world);
    j["flow_state"] = std::string(flow_state_name(flow.state));
    if (flow.state == sim::FlowState::Defined) {
        j["flow_ratio"] = flow.ratio;
    } else {
        j["flow_ratio"] = nullptr;
    }
    j["flow_within"] = flow.within;
    j["flow_cross"] = flow.cross;
    j["relay_reachability"] = sim::relay_reachability(world);
    j["attribution_violations"] = world.attribution_violations();

    double rec_sum = 0.0;
    for (const auto& a : world.agents()) rec_sum += static_cast<double>(a.recommendations.size());
    j["recommendations_mean"] =
        world.agents().empty() ? 0.0 : rec_sum / static_cast<double>(world.agents().size());

    ordered_json radio_model;
    ordered_json anchors = ordered_json::array();
    for (const auto& a : cfg.radio.anchors) {
        ordered_json anchor;
        anchor["distance_m"] = a.distance_m;
        anchor["p_clear"] = a.p_clear;
        anchor["p_obstructed"] = a.p_obstructed;
        anchors.push_back(anchor);
    }
    radio_model["anchors"] = anchors;
    radio_model["delay_min_s"] = cfg.radio.delay_min_s;
    radio_model["delay_max_s"] = cfg.radio.delay_max_s;
    radio_model["drain_on_pct_per_h"] = cfg.radio.drain_on_pct_per_h;
    radio_model["drain_off_pct_per_h"] = cfg.radio.drain_off_pct_per_h;
    radio_model["effective_radius_m"] = cfg.radio.effective_radius_m;
    radio_model["obstacles"] = cfg.obstacles;
    j["radio_model"] = radio_model;

    // Downsampled curves for reporting; full resolution lives in metrics.csv.
    ordered_json coverage_curve = ordered_json::array();
    ordered_json battery_curve = ordered_json::array();
    if (!result.metrics.empty()) {
        std::size_t stride = std::max<std::size_t>(
            1, result.metrics.size() / static_cast<std::size_t>(cfg.output.summary_curve_points));
        for (std::size_t i = 0; i < result.metrics.size(); i += stride) {
            const auto& m = result.metrics[i];
            coverage_curve.push_back({m.tick, m.coverage_mean, m.flow.within, m.flow.cross});
            battery_curve.push_back({m.tick, battery_stats(m.battery).mean});
        }
        const auto& m = result.metrics.back();
        if (coverage_curve.empty() || coverage_curve.back()[0] != m.tick) {
            coverage_curve.push_back({m.tick, m.coverage_mean, m.flow.within, m.flow.cross});
            battery_curve.push_back({m.tick, battery_stats(m.battery).mean});
        }
    }
    j["coverage_curve"] = coverage_curve;
    j["battery_curve"] = battery_curve;

    ordered_json tracked;
    if (last) {
        for (const auto& [item, cov] : last->item_coverage) tracked[item] = cov;
    }
    j["tracked_items"] = tracked;
    return j;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot open for writing: " + tmp.string());
        }
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) {
            throw std::runtime_error("write failed: " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

sim::RunResult simulate_to_dir(scenario::ScenarioConfig config, std::uint64_t seed,
                               const std::filesystem::path& out_dir, const SimulateOptions& opts) {
    if (opts.ticks_override) {
        config.duration_s = static_cast<double>(*opts.ticks_override) * config.tick_s;
    }
    std::filesystem::create_directories(out_dir);
    sim::RunResult result = sim::run(config, seed);
    write_file_atomic(out_dir / "metrics.csv", metrics_csv(result));
    write_file_atomic(out_dir / "events.jsonl", events_jsonl(result));
    write_file_atomic(out_dir / "summary.json", build_summary(result).dump(2) + "\n");
    if (opts.plots) {
        report::write_plots(out_dir);
    }
    return result;
}

namespace {

std::string dotted_to_pointer(const std::string& dotted) {
    std::string ptr;
    for (char c : dotted) {
        ptr += c == '.' ? '/' : c;
    }
    return "/" + ptr;
}

}  // namespace

void sweep_to_dir(const json& base_config, const SweepSpec& spec,
                  const std::filesystem::path& out_dir, unsigned workers) {
    std::filesystem::create_directories(out_dir);

    // Expand the grid in deterministic order: keys sorted (std::map),
    // values in their given order, seeds ascending within each point.
    struct Job {
        std::vector<std::pair<std::string, json>> assignment;
        std::uint64_t seed;
        scenario::ScenarioConfig config;
    };
    std::vector<Job> jobs;
    std::vector<std::vector<json>::size_type> cursor(spec.grid.size(), 0);
    std::vector<std::uint64_t> seeds = spec.seeds;
    if (seeds.empty()) seeds.push_back(0);

    std::vector<std::pair<std::string, std::vector<json>>> axes(spec.grid.begin(),
                                                                spec.grid.end());
    for (const auto& [key, values] : axes) {
        if (values.empty()) {
            throw scenario::ScenarioError({{key, "grid axis has no values"}});
        }
    }
    bool done = false;
    while (!done) {
        json combined = base_config;
        std::vector<std::pair<std::string, json>> assignment;
        for (std::size_t a = 0; a < axes.size(); ++a) {
            const auto& [key, values] = axes[a];
            combined[json::json_pointer(dotted_to_pointer(key))] = values[cursor[a]];
            assignment.emplace_back(key, values[cursor[a]]);
        }
        // Grid keys must be valid config paths: full validation runs on
        // every combined document.
        scenario::ScenarioConfig cfg = scenario::from_json(combined);
        for (std::uint64_t seed : seeds) {
            jobs.push_back(Job{assignment, seed, cfg});
        }
        done = true;
        for (std::size_t a = axes.size(); a-- > 0;) {
            if (++cursor[a] < axes[a].second.size()) {
                done = false;
                break;
            }
            cursor[a] = 0;
        }
        if (axes.empty()) break;
    }

    struct Row {
        std::string text;
    };
    std::vector<Row> rows(jobs.size());
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (std::size_t i = next.fetch_add(1); i < jobs.size(); i = next.fetch_add(1)) {
            const Job& job = jobs[i];
            sim::RunResult result = sim::run(job.config, job.seed);
            ordered_json summary = build_summary(result);
            std::ostringstream row;
            for (const auto& [key, value] : job.assignment) {
                (void)key;
                row << value.dump() << ',';
            }
            const auto& outcomes = summary["outcomes"];
            std::string flow_cell;
            if (summary["flow_ratio"].is_number()) {
                flow_cell = format_number(summary["flow_ratio"].get<double>());
            } else if (summary["flow_state"].get<std::string>() == "infinite") {
                flow_cell = "inf";
            }
            row << job.seed << ',' << summary["sessions_opened"].get<long>() << ','
                << outcomes["success"].get<long>() << ',' << outcomes["failed_range"].get<long>()
                << ',' << outcomes["failed_dwell"].get<long>() << ','
                << outcomes["failed_probabilistic"].get<long>() << ','
                << summary["exchanges"].get<long>() << ',' << summary["admissions"].get<long>()
                << ',' << summary["bytes_exchanged"].get<long>() << ','
                << format_number(summary["battery"]["mean"].get<double>()) << ','
                << format_number(summary["coverage_mean_final"].get<double>()) << ','
                << flow_cell << ',' << summary["relay_reachability"].get<long>();
            rows[i].text = row.str();
        }
    };
    unsigned n_workers = workers != 0 ? workers : std::thread::hardware_concurrency();
    n_workers = std::max(1u, std::min<unsigned>(n_workers, static_cast<unsigned>(jobs.size())));
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();

    std::ostringstream out;
    out << "# pf-sweep-v1\n";
    for (const auto& [key, values] : axes) {
        (void)values;
        out << key << ',';
    }
    out << "seed,sessions_opened,success,failed_range,failed_dwell,failed_probabilistic,"
           "exchanges,admissions,bytes_exchanged,battery_mean,coverage_mean,flow_ratio,"
           "relay_reachability\n";
    for (const auto& row : rows) out << row.text << "\n";
    write_file_atomic(out_dir / "sweep.csv", out.str());
}

}  // namespace pf::cli
