#include "pf/report.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "pf/artifacts.hpp"

namespace pf::report {

using nlohmann::json;

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("missing artifact: " + path.string());
    }
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

struct MetricsTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;  // NaN for non-numeric cells

    std::size_t column(const std::string& name) const {
        auto it = std::find(columns.begin(), columns.end(), name);
        if (it == columns.end()) {
            throw std::runtime_error("metrics.csv lacks column " + name);
        }
        return static_cast<std::size_t>(it - columns.begin());
    }
};

MetricsTable parse_metrics(const std::filesystem::path& path) {
    std::string text = read_file(path);
    MetricsTable t;
    std::istringstream in(text);
    std::string line;
    bool header_done = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true) {
            std::size_t comma = line.find(',', start);
            cells.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (!header_done) {
            t.columns = cells;
            header_done = true;
            continue;
        }
        std::vector<double> row(cells.size(), std::nan(""));
        for (std::size_t i = 0; i < cells.size(); ++i) {
            double v = 0.0;
            auto res = std::from_chars(cells[i].data(), cells[i].data() + cells[i].size(), v);
            if (res.ec == std::errc() && res.ptr == cells[i].data() + cells[i].size()) {
                row[i] = v;
            }
        }
        t.rows.push_back(std::move(row));
    }
    if (!header_done) {
        throw std::runtime_error("corrupt metrics.csv (no header): " + path.string());
    }
    return t;
}

struct Series {
    std::string label;
    std::string color;
    std::vector<std::pair<double, double>> points;
};

std::string svg_number(double v) {
    std::ostringstream out;
    out.precision(6);
    out << v;
    return out.str();
}

// Minimal line chart: axes, tick labels, one polyline per series, and a
// legend. Optional markers draw as filled circles.
std::string line_chart(const std::string& title, const std::string& x_label,
                       const std::string& y_label, const std::vector<Series>& series,
                       const std::vector<std::pair<double, double>>& markers = {}) {
    constexpr double width = 640, height = 400;
    constexpr double ml = 64, mr = 24, mt = 40, mb = 52;
    double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
    bool first = true;
    auto consider = [&](double x, double y) {
        if (first) {
            x_min = x_max = x;
            y_min = y_max = y;
            first = false;
            return;
        }
        x_min = std::min(x_min, x);
        x_max = std::max(x_max, x);
        y_min = std::min(y_min, y);
        y_max = std::max(y_max, y);
    };
    for (const auto& s : series) {
        for (const auto& [x, y] : s.points) consider(x, y);
    }
    for (const auto& [x, y] : markers) consider(x, y);
    if (first) {
        x_min = y_min = 0;
        x_max = y_max = 1;
    }
    if (x_max == x_min) x_max = x_min + 1;
    if (y_max == y_min) y_max = y_min + 1;
    double y_pad = 0.05 * (y_max - y_min);
    y_min = std::min(0.0, y_min - y_pad);
    y_max += y_pad;

    auto px = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * (width - ml - mr); };
    auto py = [&](double y) {
        return height - mb - (y - y_min) / (y_max - y_min) * (height - mt - mb);
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\" "
        << "font-family=\"sans-serif\">" << title << "</text>\n";
    // axes
    svg << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr
        << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
        << height - mb << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        double xv = x_min + (x_max - x_min) * i / 5.0;
        double yv = y_min + (y_max - y_min) * i / 5.0;
        svg << "<text x=\"" << px(xv) << "\" y=\"" << height - mb + 18
            << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">"
            << svg_number(xv) << "</text>\n";
        svg << "<text x=\"" << ml - 6 << "\" y=\"" << py(yv) + 4
            << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">"
            << svg_number(yv) << "</text>\n";
        svg << "<line x1=\"" << ml << "\" y1=\"" << py(yv) << "\" x2=\"" << width - mr
            << "\" y2=\"" << py(yv) << "\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n";
    }
    svg << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 10
        << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">" << x_label
        << "</text>\n";
    svg << "<text x=\"16\" y=\"" << (mt + height - mb) / 2
        << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\" "
        << "transform=\"rotate(-90 16 " << (mt + height - mb) / 2 << ")\">" << y_label
        << "</text>\n";

    double legend_y = mt + 4;
    for (const auto& s : series) {
        if (s.points.empty()) continue;
        svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& [x, y] : s.points) {
            svg << svg_number(px(x)) << ',' << svg_number(py(y)) << ' ';
        }
        svg << "\"/>\n";
        svg << "<rect x=\"" << width - mr - 150 << "\" y=\"" << legend_y - 9
            << "\" width=\"12\" height=\"3\" fill=\"" << s.color << "\"/>\n";
        svg << "<text x=\"" << width - mr - 132 << "\" y=\"" << legend_y - 3
            << "\" font-size=\"11\" font-family=\"sans-serif\">" << s.label << "</text>\n";
        legend_y += 16;
    }
    for (const auto& [x, y] : markers) {
        svg << "<circle cx=\"" << svg_number(px(x)) << "\" cy=\"" << svg_number(py(y))
            << "\" r=\"3.5\" fill=\"#222222\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

json load_summary(const std::filesystem::path& dir) {
    std::string text = read_file(dir / "summary.json");
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error("corrupt summary.json in " + dir.string() + ": " + e.what());
    }
}

radio::RadioParams radio_from_summary(const json& summary) {
    radio::RadioParams p;
    const json& rm = summary.at("radio_model");
    p.anchors.clear();
    for (const auto& a : rm.at("anchors")) {
        p.anchors.push_back({a.at("distance_m").get<double>(), a.at("p_clear").get<double>(),
                             a.at("p_obstructed").get<double>()});
    }
    p.delay_min_s = rm.at("delay_min_s").get<double>();
    p.delay_max_s = rm.at("delay_max_s").get<double>();
    p.drain_on_pct_per_h = rm.at("drain_on_pct_per_h").get<double>();
    p.drain_off_pct_per_h = rm.at("drain_off_pct_per_h").get<double>();
    p.effective_radius_m = rm.at("effective_radius_m").get<double>();
    return p;
}

}  // namespace

std::vector<std::pair<double, double>> success_curve(const radio::RadioParams& params,
                                                     bool obstacles, double step_m) {
    std::vector<std::pair<double, double>> out;
    double d_max = params.anchors.back().distance_m + 2.0;
    for (double d = 0.0; d <= d_max + 1e-9; d += step_m) {
        out.emplace_back(d, radio::success_probability(d, obstacles, params));
    }
    return out;
}

void write_plots(const std::filesystem::path& dir) {
    json summary = load_summary(dir);
    MetricsTable metrics = parse_metrics(dir / "metrics.csv");
    std::filesystem::create_directories(dir / "plots");

    double tick_s = summary.value("tick_s", 1.0);

    if (!metrics.rows.empty()) {
        std::size_t c_tick = metrics.column("tick");
        std::size_t c_cov = metrics.column("coverage_mean");
        std::size_t c_within = metrics.column("flow_within");
        std::size_t c_cross = metrics.column("flow_cross");
        Series cov{"coverage_mean", "#1f77b4", {}};
        Series within{"flow_within", "#2ca02c", {}};
        Series cross{"flow_cross", "#d62728", {}};
        for (const auto& row : metrics.rows) {
            double t = row[c_tick] * tick_s;
            cov.points.emplace_back(t, row[c_cov]);
            within.points.emplace_back(t, row[c_within]);
            cross.points.emplace_back(t, row[c_cross]);
        }
        cli::write_file_atomic(dir / "plots" / "coverage_vs_time.svg",
                               line_chart("Item coverage over time", "time [s]", "coverage",
                                          {cov, within, cross}));

        std::size_t c_bat = metrics.column("battery_mean");
        std::size_t c_bmin = metrics.column("battery_min");
        std::size_t c_bmax = metrics.column("battery_max");
        Series bmean{"battery_mean", "#1f77b4", {}};
        Series bmin{"battery_min", "#aec7e8", {}};
        Series bmax{"battery_max", "#9edae5", {}};
        for (const auto& row : metrics.rows) {
            double t = row[c_tick] * tick_s;
            bmean.points.emplace_back(t, row[c_bat]);
            bmin.points.emplace_back(t, row[c_bmin]);
            bmax.points.emplace_back(t, row[c_bmax]);
        }
        cli::write_file_atomic(dir / "plots" / "battery_vs_time.svg",
                               line_chart("Battery level over time", "time [s]", "battery [%]",
                                          {bmean, bmin, bmax}));
    }

    radio::RadioParams params = radio_from_summary(summary);
    Series clear{"no obstacles", "#1f77b4", success_curve(params, false)};
    Series obstructed{"with obstacles", "#d62728", success_curve(params, true)};
    std::vector<std::pair<double, double>> markers;
    for (const auto& a : params.anchors) {
        markers.emplace_back(a.distance_m, a.p_clear);
        markers.emplace_back(a.distance_m, a.p_obstructed);
    }
    cli::write_file_atomic(
        dir / "plots" / "success_vs_distance.svg",
        line_chart("Connection success vs distance", "distance [m]", "success probability",
                   {clear, obstructed}, markers));
}

void generate_report(const std::filesystem::path& dir) {
    json summary = load_summary(dir);
    MetricsTable metrics = parse_metrics(dir / "metrics.csv");

    std::ostringstream md;
    md << "# Run report: " << summary.value("scenario", std::string("?")) << " (seed "
       << summary.value("seed", 0ULL) << ")\n\n";
    if (metrics.rows.empty()) {
        md << "no data: the run produced no metrics rows.\n";
        cli::write_file_atomic(dir / "report.md", md.str());
        return;
    }
    write_plots(dir);

    md << "| metric | value |\n|---|---|\n";
    md << "| peers | " << summary.value("peers", 0) << " |\n";
    md << "| ticks | " << summary.value("ticks", 0) << " |\n";
    md << "| sessions opened | " << summary.value("sessions_opened", 0L) << " |\n";
    const json& outcomes = summary.at("outcomes");
    md << "| success | " << outcomes.value("success", 0L) << " |\n";
    md << "| failed (range) | " << outcomes.value("failed_range", 0L) << " |\n";
    md << "| failed (dwell) | " << outcomes.value("failed_dwell", 0L) << " |\n";
    md << "| failed (probabilistic) | " << outcomes.value("failed_probabilistic", 0L) << " |\n";
    md << "| exchanges | " << summary.value("exchanges", 0L) << " |\n";
    md << "| admissions | " << summary.value("admissions", 0L) << " |\n";
    md << "| bytes exchanged | " << summary.value("bytes_exchanged", 0L) << " |\n";
    md << "| coverage (mean, final) | " << summary.value("coverage_mean_final", 0.0) << " |\n";
    md << "| flow state | " << summary.value("flow_state", std::string("?")) << " |\n";
    if (summary.contains("flow_ratio") && summary["flow_ratio"].is_number()) {
        md << "| flow ratio | " << summary["flow_ratio"].get<double>() << " |\n";
    }
    md << "| relay reachability | " << summary.value("relay_reachability", 0L) << " |\n";
    const json& battery = summary.at("battery");
    md << "| battery final (mean/min/max) | " << battery.value("mean", 0.0) << " / "
       << battery.value("min", 0.0) << " / " << battery.value("max", 0.0) << " |\n";
    md << "\n";
    md << "![coverage](plots/coverage_vs_time.svg)\n\n";
    md << "![success](plots/success_vs_distance.svg)\n\n";
    md << "![battery](plots/battery_vs_time.svg)\n";
    cli::write_file_atomic(dir / "report.md", md.str());
}

}  // namespace pf::report
