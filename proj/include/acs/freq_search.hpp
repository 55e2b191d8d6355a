#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "acs/dictionary.hpp"
#include "acs/signals.hpp"

namespace acs {

/// Coefficients, target and residual y - A Psi_theta x for the per-frequency searches.
/// The residual is kept in sync with the dictionary through rank-2 corrections.
class SearchState {
 public:
  SearchState(const SensingOperator& sensing, PerturbedDictionary dict, Vector coeffs, Vector target)
      : sensing_(&sensing), dict_(std::move(dict)), coeffs_(std::move(coeffs)), target_(std::move(target)) {
    if (sensing_->cols() != dict_.n_samples()) throw std::invalid_argument("SearchState: operator/dictionary mismatch");
    if (coeffs_.size() != dict_.n_atoms()) throw std::invalid_argument("SearchState: coefficient length mismatch");
    if (target_.size() != sensing_->rows()) throw std::invalid_argument("SearchState: target length mismatch");
    residual_ = full_residual();
  }

  const PerturbedDictionary& dictionary() const { return dict_; }
  PerturbedDictionary release_dictionary() && { return std::move(dict_); }
  const Vector& coefficients() const { return coeffs_; }
  const Vector& target() const { return target_; }
  const Vector& residual() const { return residual_; }
  const SensingOperator& sensing() const { return *sensing_; }

  /// y - A Psi_theta x recomputed from scratch.
  Vector full_residual() const { return target_ - sensing_->apply_vector(dict_.atoms() * coeffs_); }

  /// Residual with the pair of index j removed: r + A (c psi_c + s psi_s).
  Vector residual_without(Index j) const {
    const ColumnPair p = dict_.pair(j);
    const double c = coeffs_[p.cos_column];
    const double s = coeffs_[p.sin_column];
    if (c == 0.0 && s == 0.0) return residual_;
    const Vector contrib = c * dict_.column(p.cos_column) + s * dict_.column(p.sin_column);
    return residual_ + sensing_->apply_vector(contrib);
  }

  /// Residual vector after moving theta_j to candidate, computed from residual_without(j).
  Vector candidate_residual(const Vector& base, Index j, double theta) const {
    const ColumnPair p = dict_.pair(j);
    const double c = coeffs_[p.cos_column];
    const double s = coeffs_[p.sin_column];
    if (c == 0.0 && s == 0.0) return base;
    Vector cos_atom(dict_.n_samples());
    Vector sin_atom(dict_.n_samples());
    dict_.evaluate_pair(j, theta, cos_atom, sin_atom);
    return base - sensing_->apply_vector(c * cos_atom + s * sin_atom);
  }

  /// ||y - A Psi_theta' x||^2 where theta' differs from the current theta only at j.
  double cost_at(Index j, double theta) const {
    check_candidate(j, theta);
    const ColumnPair p = dict_.pair(j);
    if (coeffs_[p.cos_column] == 0.0 && coeffs_[p.sin_column] == 0.0) return residual_.squaredNorm();
    if (theta == dict_.theta()[j]) return residual_.squaredNorm();
    return candidate_residual(residual_without(j), j, theta).squaredNorm();
  }

  /// Moves theta_j and refreshes the residual.
  void accept(Index j, double theta) {
    check_candidate(j, theta);
    if (theta == dict_.theta()[j]) return;
    Vector base = residual_without(j);
    dict_.set_perturbation(j, theta);
    const ColumnPair p = dict_.pair(j);
    const Vector contrib = coeffs_[p.cos_column] * dict_.column(p.cos_column) +
                           coeffs_[p.sin_column] * dict_.column(p.sin_column);
    residual_ = base - sensing_->apply_vector(contrib);
  }

  void check_candidate(Index j, double theta) const {
    dict_.pair(j);
    if (j == 0) throw std::invalid_argument("SearchState: the DC perturbation is fixed");
    if (!std::isfinite(theta) || std::abs(theta) > dict_.half_bin()) {
      throw std::invalid_argument("SearchState: candidate perturbation " + std::to_string(theta) + " out of bounds");
    }
  }

 private:
  const SensingOperator* sensing_;
  PerturbedDictionary dict_;
  Vector coeffs_;
  Vector target_;
  Vector residual_;
};

struct GoldenOptions {
  double tol = 0.0;    // bracket width; <= 0 selects 1e-4/(QN)
  int max_iter = 60;
};

inline double default_search_tol(const PerturbedDictionary& dict) {
  return 1e-4 / static_cast<double>(dict.n_atoms());
}

/// Golden-section minimization of cost_at(j, .) over the full bin [-1/(2QN), 1/(2QN)].
/// Returns the incumbent theta_j when no evaluated candidate beats it.
inline double golden_search(const SearchState& state, Index j, GoldenOptions opts = {}) {
  const PerturbedDictionary& dict = state.dictionary();
  state.check_candidate(j, dict.theta()[j]);
  const double tol = opts.tol > 0.0 ? opts.tol : default_search_tol(dict);
  const double incumbent = dict.theta()[j];
  const double incumbent_cost = state.residual().squaredNorm();

  const ColumnPair p = dict.pair(j);
  if (state.coefficients()[p.cos_column] == 0.0 && state.coefficients()[p.sin_column] == 0.0) return incumbent;

  const Vector base = state.residual_without(j);
  auto cost = [&](double theta) { return state.candidate_residual(base, j, theta).squaredNorm(); };

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = -dict.half_bin();
  double b = dict.half_bin();
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = cost(c);
  double fd = cost(d);
  for (int it = 0; it < opts.max_iter && (b - a) > tol; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = cost(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = cost(d);
    }
  }
  const double best = fc < fd ? c : d;
  const double best_cost = std::min(fc, fd);
  return best_cost <= incumbent_cost ? best : incumbent;
}

}  // namespace acs
