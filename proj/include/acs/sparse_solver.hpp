#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "acs/dictionary.hpp"

namespace acs {

/// min_x ||target - design x||^2 + lambda ||x||_1
struct L1Problem {
  Eigen::Ref<const Matrix> design;
  Eigen::Ref<const Vector> target;
  double lambda;
};

struct SolverOptions {
  double tol = 1e-8;     // relative objective change
  int max_iter = 2000;
};

struct SolverReport {
  Vector x;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// alpha * ||design^T y||_inf
inline double compute_lambda(const Eigen::Ref<const Matrix>& design, const Eigen::Ref<const Vector>& y,
                             double alpha) {
  if (design.size() == 0 || y.size() == 0) throw std::invalid_argument("compute_lambda: empty input");
  if (design.rows() != y.size()) throw std::invalid_argument("compute_lambda: dimension mismatch");
  if (!(alpha > 0.0)) throw std::invalid_argument("compute_lambda: alpha must be positive");
  return alpha * (design.transpose() * y).cwiseAbs().maxCoeff();
}

inline double l2l1_objective(const L1Problem& p, const Vector& x) {
  return (p.target - p.design * x).squaredNorm() + p.lambda * x.lpNorm<1>();
}

/// Gradient projection on the split x = u - v (u, v >= 0) with Barzilai-Borwein steps.
///
/// Each iteration projects a BB step onto the nonnegative orthant and then takes the
/// exact minimizer of the (quadratic) objective along that direction, clipped to the
/// segment, so the objective never increases.
inline SolverReport solve_l2l1(const L1Problem& p, const Vector& init, SolverOptions opts = {}) {
  const Index m = p.design.rows();
  const Index k = p.design.cols();
  if (p.target.size() != m) throw std::invalid_argument("solve_l2l1: target length does not match design rows");
  if (init.size() != k) throw std::invalid_argument("solve_l2l1: init length does not match design columns");
  if (!(opts.tol > 0.0)) throw std::invalid_argument("solve_l2l1: tol must be positive");
  if (!(p.lambda >= 0.0) || !std::isfinite(p.lambda)) throw std::invalid_argument("solve_l2l1: invalid lambda");
  if (!p.design.allFinite() || !p.target.allFinite() || !init.allFinite()) {
    throw std::invalid_argument("solve_l2l1: non-finite input");
  }

  Vector u = init.cwiseMax(0.0);
  Vector v = (-init).cwiseMax(0.0);
  Vector residual = p.target - p.design * (u - v);
  Vector corr = p.design.transpose() * residual;  // B^T r; gradient wrt u is -2 corr + lambda
  double objective = residual.squaredNorm() + p.lambda * (u.sum() + v.sum());

  Vector du(k);
  Vector dv(k);
  double step = 1.0;
  SolverReport report;
  constexpr double kMinStep = 1e-30;
  constexpr double kMaxStep = 1e30;

  for (int it = 0; it < opts.max_iter; ++it) {
    report.iterations = it + 1;
    for (Index i = 0; i < k; ++i) {
      const double gu = -2.0 * corr[i] + p.lambda;
      const double gv = 2.0 * corr[i] + p.lambda;
      du[i] = std::max(u[i] - step * gu, 0.0) - u[i];
      dv[i] = std::max(v[i] - step * gv, 0.0) - v[i];
    }
    // Directional derivative along (du, dv).
    const double slope = -2.0 * corr.dot(du - dv) + p.lambda * (du.sum() + dv.sum());
    if (!(slope < 0.0)) {
      report.converged = true;  // projected gradient vanishes
      break;
    }
    const Vector bd = p.design * (du - dv);
    const double curvature = 2.0 * bd.squaredNorm();
    const double t = curvature > 0.0 ? std::min(1.0, -slope / curvature) : 1.0;

    u += t * du;
    v += t * dv;
    residual -= t * bd;
    corr = p.design.transpose() * residual;
    const double next = residual.squaredNorm() + p.lambda * (u.sum() + v.sum());

    const double dd = du.squaredNorm() + dv.squaredNorm();
    step = curvature > 0.0 ? std::clamp(dd / curvature, kMinStep, kMaxStep) : kMaxStep;

    const double change = std::abs(objective - next);
    objective = next;
    if (change <= opts.tol * std::max(objective, std::numeric_limits<double>::min())) {
      report.converged = true;
      break;
    }
  }

  report.x = u - v;
  report.objective = l2l1_objective(p, report.x);
  return report;
}

}  // namespace acs
