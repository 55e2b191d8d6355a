#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "acs/appendix.hpp"
#include "acs/report.hpp"

namespace acs::appendix {

struct SuiteCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SuiteReport {
  std::vector<SuiteCheck> checks;
  double root = 0.0;
  double deviation_delta0 = 0.0;  // max |exact - approx| over the bin, x = x_hat
  double deviation_delta3 = 0.0;  // same with x = 4, x_hat = 1
  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const SuiteCheck& c) { return c.pass; });
  }
};

inline constexpr std::uint64_t kSuiteSeed = 20240501;
inline constexpr int kSuiteGridPoints = 201;

/// The two Fig. A2 probes: N = 1024, M = 512, f = 0.2, noiseless.
inline AppendixProbe suite_probe(double true_amp) {
  AppendixProbe p;
  p.true_amp = true_amp;
  p.est_amp = 1.0;
  return p;
}

inline double max_abs_deviation(const std::vector<CostComparisonRow>& rows) {
  double out = 0.0;
  for (const auto& r : rows) out = std::max(out, std::abs(r.deviation));
  return out;
}

/// Smallest centered second difference of g_k (x = x_hat = 1) on |theta| <= 1/(3.018 N).
inline double min_second_difference(Index n, int n_points = kSuiteGridPoints) {
  AppendixProbe p;
  p.n = n;
  const double half = 1.0 / (3.018 * static_cast<double>(n));
  const std::vector<double> grid = symmetric_grid(half, n_points);
  std::vector<double> g(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) g[i] = g_k(grid[i], p);
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) worst = std::min(worst, g[i + 1] - 2.0 * g[i] + g[i - 1]);
  return worst;
}

namespace detail {

inline std::string cost_table_csv(const std::vector<CostComparisonRow>& rows) {
  std::ostringstream out;
  out << "theta,exact_cost,approx_cost,deviation,predicted_order\n";
  for (const auto& r : rows) {
    out << format_double(r.theta) << ',' << format_double(r.exact_cost) << ',' << format_double(r.approx_cost) << ','
        << format_double(r.deviation) << ',' << format_double(r.predicted_order) << '\n';
  }
  return out.str();
}

inline SuiteCheck bracket_check(const std::string& name, double value, double order) {
  const bool pass = value >= order / 5.0 && value <= 5.0 * order;
  return {name, pass,
          "max |exact - approx| = " + format_double(value) + ", bracket [" + format_double(order / 5.0) + ", " +
              format_double(5.0 * order) + "]"};
}

}  // namespace detail

/// Runs the appendix checks. With a non-empty out_dir also writes g_profile.csv,
/// cost_compare_delta0.csv, cost_compare_delta3.csv, convexity_root.txt and summary.txt.
inline SuiteReport run_appendix_suite(const std::filesystem::path& out_dir = {}) {
  SuiteReport report;
  const AppendixProbe matched = suite_probe(1.0);
  const AppendixProbe mismatched = suite_probe(4.0);
  const double nd = static_cast<double>(matched.n);
  const std::vector<double> grid = symmetric_grid(0.5 / nd, kSuiteGridPoints);

  report.root = convexity_root();
  {
    char buf[64];
    std::snprintf(buf, sizeof buf, "Q = %.3f", report.root);
    report.checks.push_back({"convexity_root", std::abs(report.root - 1.509) <= 1e-3,
                             std::string(buf) + " (" + format_double(report.root) + ")"});
  }

  // N/2 delta^2 is exact when sum cos(4 pi f n) vanishes, e.g. f = 1/4.
  AppendixProbe on_grid = mismatched;
  on_grid.frequency = 0.25;
  const double g0 = g_k(0.0, on_grid);
  report.checks.push_back({"g_k(0) = N/2 delta^2", std::abs(g0 - 4608.0) <= 1e-9 * 4608.0,
                           "g_k(0) = " + format_double(g0) + " at f = 0.25"});

  const auto rows0 = approx_cost_compare(matched, grid, kSuiteSeed);
  const auto rows3 = approx_cost_compare(mismatched, grid, kSuiteSeed);
  report.deviation_delta0 = max_abs_deviation(rows0);
  report.deviation_delta3 = max_abs_deviation(rows3);
  const double root_m = std::sqrt(static_cast<double>(matched.m));
  report.checks.push_back(
      detail::bracket_check("deviation order, delta = 0", report.deviation_delta0, std::sqrt(2.0) * nd / root_m));
  report.checks.push_back(
      detail::bracket_check("deviation order, delta = 3", report.deviation_delta3, std::sqrt(2.0) * 8.5 * nd / root_m));

  double min_exact0 = std::numeric_limits<double>::infinity();
  for (const auto& r : rows0) min_exact0 = std::min(min_exact0, r.exact_cost);
  report.checks.push_back(
      {"delta = 0 minimum exact cost", min_exact0 <= 1e-9, "min exact cost = " + format_double(min_exact0)});

  double min_approx3 = std::numeric_limits<double>::infinity();
  for (const auto& r : rows3) min_approx3 = std::min(min_approx3, r.approx_cost);
  report.checks.push_back({"delta = 3 minimum approx cost", std::abs(min_approx3 - 4608.0) <= 1e-3 * 4608.0,
                           "min approx cost = " + format_double(min_approx3) + " at f = 0.2"});

  for (Index n : {Index{256}, Index{1024}}) {
    const double worst = min_second_difference(n);
    const double floor = -1e-6 * static_cast<double>(n);
    report.checks.push_back({"convexity N = " + std::to_string(n), worst >= floor,
                             "min second difference = " + format_double(worst) + ", floor " + format_double(floor)});
  }

  if (!out_dir.empty()) {
    std::ostringstream profile;
    profile << "theta,g_matched,h_matched,g_mismatched,h_mismatched\n";
    for (double t : grid) {
      profile << format_double(t) << ',' << format_double(g_k(t, matched)) << ',' << format_double(h_k(t, matched))
              << ',' << format_double(g_k(t, mismatched)) << ',' << format_double(h_k(t, mismatched)) << '\n';
    }
    write_text_file(out_dir / "g_profile.csv", profile.str());
    write_text_file(out_dir / "cost_compare_delta0.csv", detail::cost_table_csv(rows0));
    write_text_file(out_dir / "cost_compare_delta3.csv", detail::cost_table_csv(rows3));
    char buf[64];
    std::snprintf(buf, sizeof buf, "Q = %.3f\n", report.root);
    write_text_file(out_dir / "convexity_root.txt", buf);
    std::ostringstream summary;
    for (const auto& c : report.checks) summary << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    write_text_file(out_dir / "summary.txt", summary.str());
  }
  return report;
}

}  // namespace acs::appendix
