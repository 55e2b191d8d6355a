#pragma once

#include <chrono>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "acs/dictionary.hpp"
#include "acs/freq_search.hpp"
#include "acs/signals.hpp"
#include "acs/sparse_solver.hpp"

namespace acs {

struct AcsConfig {
  double alpha = 0.1;  // lambda = alpha ||(A Psi)^T y||_inf
  double beta = 0.1;   // kappa = beta ||x||_2
  double tol = 1e-5;   // relative change of the composite objective
  QFactor q{1, 1};
  int max_outer = 50;
  SolverOptions solver{};
  GoldenOptions search{};
  bool freeze_perturbations = false;  // skip the theta sweep (GPSR path)
  // Recomputing lambda from the current dictionary every outer iteration changes the
  // objective between iterations, so the cost trace is no longer monotone.
  bool recompute_lambda = false;

  void validate() const {
    if (!(alpha > 0.0)) throw std::invalid_argument("AcsConfig: alpha must be positive");
    if (!(beta > 0.0)) throw std::invalid_argument("AcsConfig: beta must be positive");
    if (!(tol > 0.0)) throw std::invalid_argument("AcsConfig: tol must be positive");
    if (max_outer < 1) throw std::invalid_argument("AcsConfig: max_outer must be >= 1");
    if (!(solver.tol > 0.0) || solver.max_iter < 1) throw std::invalid_argument("AcsConfig: invalid solver options");
    if (search.max_iter < 1) throw std::invalid_argument("AcsConfig: invalid search options");
  }
};

struct SupportSet {
  std::vector<Index> indices;      // coefficient indices with |x| >= kappa
  std::vector<Index> frequencies;  // owning frequency indices, ascending, DC excluded
  double kappa = 0.0;
};

/// kappa = beta ||x||_2 and {l : |x_l| >= kappa}. x = 0 gives an empty set.
inline SupportSet support_set(const Vector& x, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("support_set: beta must be positive");
  SupportSet out;
  out.kappa = beta * x.norm();
  if (out.kappa == 0.0) return out;
  std::set<Index> freqs;
  for (Index l = 0; l < x.size(); ++l) {
    if (std::abs(x[l]) >= out.kappa) {
      out.indices.push_back(l);
      const Index j = frequency_of_column(l, x.size());
      if (j != 0) freqs.insert(j);
    }
  }
  out.frequencies.assign(freqs.begin(), freqs.end());
  return out;
}

enum class Method { acs, gpsr, oc_gpsr };

inline std::string method_name(Method m) {
  switch (m) {
    case Method::acs: return "acs";
    case Method::gpsr: return "gpsr";
    case Method::oc_gpsr: return "oc-gpsr";
  }
  return "unknown";
}

struct RecoveryResult {
  Method method = Method::acs;
  Index n_samples = 0;
  QFactor q;
  Vector x_hat;
  Vector theta_hat;
  Vector z_hat;
  std::vector<double> cost_trace;  // entry 0 is ||y||^2, the objective at x = 0
  int outer_iterations = 0;
  bool converged = false;
  bool solver_converged = false;  // last l2-l1 solve
  double lambda = 0.0;            // from the last outer iteration
  double kappa = 0.0;             // beta ||x_hat||_2
  std::chrono::duration<double, std::milli> wall_time{0};

  PerturbedDictionary dictionary() const { return PerturbedDictionary(n_samples, q, theta_hat); }
};

namespace detail {

inline void check_inputs(const Vector& y, const SensingOperator& a) {
  if (y.size() != a.rows()) {
    throw std::invalid_argument("recovery: measurement length " + std::to_string(y.size()) + " does not match " +
                                std::to_string(a.rows()) + " operator rows");
  }
  if (!y.allFinite()) throw std::invalid_argument("recovery: non-finite measurements");
}

}  // namespace detail

/// Alternating convex search: l2-l1 coefficient solve with theta fixed, then one
/// golden-section pass over every supported frequency with x fixed, until the
/// composite objective changes by less than tol (relative) or max_outer is hit.
inline RecoveryResult run_acs(const Vector& y, const SensingOperator& a, const AcsConfig& config) {
  config.validate();
  detail::check_inputs(y, a);
  const auto start = std::chrono::steady_clock::now();

  PerturbedDictionary dict = PerturbedDictionary::unperturbed(a.cols(), config.q);
  Matrix design = a.apply(dict.atoms());
  Vector x = Vector::Zero(dict.n_atoms());

  RecoveryResult result;
  result.method = config.freeze_perturbations ? Method::gpsr : Method::acs;
  result.n_samples = a.cols();
  result.q = config.q;
  double previous = y.squaredNorm();
  result.cost_trace.push_back(previous);

  double lambda = compute_lambda(design, y, config.alpha);
  for (int t = 1; t <= config.max_outer; ++t) {
    result.outer_iterations = t;
    if (config.recompute_lambda && t > 1) lambda = compute_lambda(design, y, config.alpha);
    SolverReport solve = solve_l2l1({design, y, lambda}, x, config.solver);
    x = std::move(solve.x);
    result.solver_converged = solve.converged;
    const SupportSet support = support_set(x, config.beta);

    if (!config.freeze_perturbations && !support.frequencies.empty()) {
      SearchState state(a, std::move(dict), x, y);
      for (Index j : support.frequencies) state.accept(j, golden_search(state, j, config.search));
      dict = std::move(state).release_dictionary();
      design = a.apply(dict.atoms());
    }

    const double current = (y - design * x).squaredNorm() + lambda * x.lpNorm<1>();
    result.cost_trace.push_back(current);
    result.lambda = lambda;

    if (previous == 0.0 || std::abs((current - previous) / previous) < config.tol) {
      result.converged = true;
      break;
    }
    previous = current;
  }

  result.x_hat = x;
  result.theta_hat = dict.theta();
  result.z_hat = reconstruct(dict, x);
  result.kappa = config.beta * x.norm();
  result.wall_time = std::chrono::steady_clock::now() - start;
  return result;
}

/// One l2-l1 solve on the unperturbed dictionary at overcompleteness q. q = 1 is plain
/// GPSR on the Fourier basis, q > 1 is OC-GPSR.
inline RecoveryResult run_gpsr_baseline(const Vector& y, const SensingOperator& a, QFactor q,
                                        const AcsConfig& config) {
  AcsConfig cfg = config;
  cfg.q = q;
  cfg.max_outer = 1;
  cfg.freeze_perturbations = true;
  RecoveryResult result = run_acs(y, a, cfg);
  result.method = q == QFactor{1, 1} ? Method::gpsr : Method::oc_gpsr;
  result.converged = result.solver_converged;
  return result;
}

}  // namespace acs
