#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "acs/dictionary.hpp"
#include "acs/rng.hpp"

namespace acs::appendix {

/// Entry distribution of the random operator in the cost approximation.
enum class EntryDistribution { normal, uniform };

/// Excess kurtosis gamma(A): 0 for normal, -6/5 for uniform.
inline double kurtosis(EntryDistribution d) { return d == EntryDistribution::normal ? 0.0 : -1.2; }

/// Single sine tone with true amplitude x and estimate x_hat, observed through an
/// M x N random operator with entry std sigma_a and additive noise std sigma_noise.
struct AppendixProbe {
  Index n = 1024;
  Index m = 512;
  double sigma_a = 1.0;
  double sigma_noise = 0.0;
  EntryDistribution distribution = EntryDistribution::normal;
  double true_amp = 1.0;
  double est_amp = 1.0;
  double frequency = 0.2;

  double delta() const { return std::abs(true_amp - est_amp); }
  double kurtosis() const { return appendix::kurtosis(distribution); }
};

namespace detail {

inline void check_probe(const AppendixProbe& p) {
  if (p.n < 2) throw std::invalid_argument("appendix: n must be >= 2");
}

// x sin(2 pi f n) - x_hat sin(2 pi (f + theta) n)
inline double discrepancy(const AppendixProbe& p, double theta, Index n) {
  const double two_pi_n = 2.0 * std::numbers::pi * static_cast<double>(n);
  return p.true_amp * std::sin(two_pi_n * p.frequency) - p.est_amp * std::sin(two_pi_n * (p.frequency + theta));
}

}  // namespace detail

/// g_k(theta) = sum_n [x sin(2 pi f n) - x_hat sin(2 pi (f + theta) n)]^2
inline double g_k(double theta, const AppendixProbe& p) {
  detail::check_probe(p);
  double acc = 0.0;
  for (Index n = 0; n < p.n; ++n) {
    const double v = detail::discrepancy(p, theta, n);
    acc += v * v;
  }
  return acc;
}

/// h_k(theta) = sum_n [x sin(2 pi f n) - x_hat sin(2 pi (f + theta) n)]
inline double h_k(double theta, const AppendixProbe& p) {
  detail::check_probe(p);
  double acc = 0.0;
  for (Index n = 0; n < p.n; ++n) acc += detail::discrepancy(p, theta, n);
  return acc;
}

namespace detail {

inline double g_second_deriv_closed_form(double theta, double n) {
  const double pt = std::numbers::pi * theta;
  const double csc = 1.0 / std::sin(pt);
  const double cot = std::cos(pt) / std::sin(pt);
  const double c2 = std::cos(2.0 * std::numbers::pi * (n + 1.0) * theta);
  return 2.0 * n * n * csc * std::sin(std::numbers::pi * (2.0 * n + 1.0) * theta) + 2.0 * n * csc * csc * c2 +
         3.0 * csc * csc * c2 - csc * csc * csc * std::sin(std::numbers::pi * (2.0 * n + 3.0) * theta) - cot * cot +
         csc * csc;
}

}  // namespace detail

/// Large-N closed form whose zeros are the zeros of g''(theta). At theta = 0 the removable
/// singularity is bypassed by averaging theta = +-1e-3/N. Closer offsets lose everything to
/// cancellation between the csc^3 and csc terms (at 1e-9/N the result is exactly 0); the
/// symmetric average leaves an O(theta^2) error near 1e-5 relative.
inline double g_second_deriv_limit(double theta, Index n) {
  if (n < 2) throw std::invalid_argument("g_second_deriv_limit: n must be >= 2");
  const double nd = static_cast<double>(n);
  if (theta == 0.0) {
    const double h = 1e-3 / nd;
    return 0.5 * (detail::g_second_deriv_closed_form(h, nd) + detail::g_second_deriv_closed_form(-h, nd));
  }
  return detail::g_second_deriv_closed_form(theta, nd);
}

/// tan(pi/Q) - 4 Q pi / (4 Q^2 - 2 pi^2), as printed. Has poles at Q = 2 and Q = pi/sqrt(2).
inline double convexity_residual(double q) {
  const double pi = std::numbers::pi;
  return std::tan(pi / q) - 4.0 * q * pi / (4.0 * q * q - 2.0 * pi * pi);
}

/// The same equation multiplied through by cos(pi/Q) (4 Q^2 - 2 pi^2); continuous in Q.
inline double convexity_residual_pole_free(double q) {
  const double pi = std::numbers::pi;
  return std::sin(pi / q) * (4.0 * q * q - 2.0 * pi * pi) - 4.0 * q * pi * std::cos(pi / q);
}

/// Root of the convexity equation on Q in (1, 4]. A coarse scan locates the unique sign
/// change of the pole-free residual; bisection refines it to machine precision.
inline double convexity_root() {
  const double step = 1e-3;
  double lo = 1.0 + step;
  double f_lo = convexity_residual_pole_free(lo);
  for (double hi = lo + step; hi <= 4.0 + 0.5 * step; hi += step) {
    const double f_hi = convexity_residual_pole_free(hi);
    if ((f_lo < 0.0) != (f_hi < 0.0)) {
      double a = lo;
      double b = hi;
      double fa = f_lo;
      for (int it = 0; it < 200 && b - a > 0.0; ++it) {
        const double mid = 0.5 * (a + b);
        if (mid == a || mid == b) break;
        const double fm = convexity_residual_pole_free(mid);
        if ((fm < 0.0) == (fa < 0.0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      return 0.5 * (a + b);
    }
    lo = hi;
    f_lo = f_hi;
  }
  throw std::runtime_error("convexity_root: no sign change on (1, 4]");
}

struct CostComparisonRow {
  double theta = 0.0;
  double exact_cost = 0.0;       // (1/M) ||A v_theta + eta||^2 for one draw
  double approx_cost = 0.0;      // sigma_A^2 g(theta) + sigma^2
  double deviation = 0.0;        // exact - approx
  double predicted_order = 0.0;  // CLT error scale of the approximation
};

/// Draws one operator A (and noise) from seed and tabulates the exact stochastic cost
/// against its deterministic approximation over theta_grid.
inline std::vector<CostComparisonRow> approx_cost_compare(const AppendixProbe& p, std::span<const double> theta_grid,
                                                          std::uint64_t seed) {
  detail::check_probe(p);
  if (p.m < 1) throw std::invalid_argument("approx_cost_compare: m must be >= 1");
  Rng rng(seed);
  Matrix a(p.m, p.n);
  const double uniform_half_width = std::sqrt(3.0) * p.sigma_a;
  for (Index i = 0; i < p.m; ++i) {
    for (Index j = 0; j < p.n; ++j) {
      a(i, j) = p.distribution == EntryDistribution::normal ? p.sigma_a * rng.normal()
                                                             : rng.uniform(-uniform_half_width, uniform_half_width);
    }
  }
  Vector eta = Vector::Zero(p.m);
  if (p.sigma_noise > 0.0) {
    for (Index i = 0; i < p.m; ++i) eta[i] = p.sigma_noise * rng.normal();
  }

  const double md = static_cast<double>(p.m);
  const double root_m = std::sqrt(md);
  const double var_a = p.sigma_a * p.sigma_a;
  std::vector<CostComparisonRow> rows;
  rows.reserve(theta_grid.size());
  Vector v(p.n);
  for (double theta : theta_grid) {
    for (Index n = 0; n < p.n; ++n) v[n] = detail::discrepancy(p, theta, n);
    CostComparisonRow row;
    row.theta = theta;
    row.exact_cost = (a * v + eta).squaredNorm() / md;
    const double g = v.squaredNorm();
    const double h = v.sum();
    row.approx_cost = var_a * g + p.sigma_noise * p.sigma_noise;
    row.deviation = row.exact_cost - row.approx_cost;
    row.predicted_order = std::sqrt(2.0 + p.kurtosis()) * var_a * g / root_m +
                          2.0 * p.sigma_a * p.sigma_noise * std::abs(h) / root_m +
                          std::sqrt(2.0) * p.sigma_noise * p.sigma_noise / root_m;
    rows.push_back(row);
  }
  return rows;
}

/// n_points evenly spaced values on [-half_width, half_width].
inline std::vector<double> symmetric_grid(double half_width, int n_points) {
  if (n_points < 2) throw std::invalid_argument("symmetric_grid: need at least two points");
  std::vector<double> out(static_cast<std::size_t>(n_points));
  for (int i = 0; i < n_points; ++i) {
    out[static_cast<std::size_t>(i)] = -half_width + 2.0 * half_width * i / (n_points - 1);
  }
  return out;
}

}  // namespace acs::appendix
