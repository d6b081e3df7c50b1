#pragma once
// Post-hoc reporting: a markdown summary plus SVG plots (coverage vs
// time, connection success vs distance, battery vs time) generated from
// the artifacts a simulate run wrote. Plot data comes straight from
// metrics.csv and summary.json; nothing is recomputed.

#include <filesystem>
#include <utility>
#include <vector>

#include "pf/radio.hpp"

namespace pf::report {

// The success-vs-distance curve as plotted: a dense sample of the
// piecewise-linear model, which passes exactly through the anchors.
std::vector<std::pair<double, double>> success_curve(const radio::RadioParams& params,
                                                     bool obstacles, double step_m = 0.25);

// Writes plots/*.svg next to the run artifacts in dir. Throws
// std::runtime_error naming the path when artifacts are missing or
// corrupt.
void write_plots(const std::filesystem::path& dir);

// Writes report.md (and the plots) for one run directory.
void generate_report(const std::filesystem::path& dir);

}  // namespace pf::report
