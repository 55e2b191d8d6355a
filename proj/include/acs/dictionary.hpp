#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "acs/q_factor.hpp"

namespace acs {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Cosine and sine columns sharing one frequency parameter.
struct ColumnPair {
  Index cos_column;
  Index sin_column;
  friend bool operator==(const ColumnPair&, const ColumnPair&) = default;
};

/// Frequency index j (0-based, j < QN/2) owns columns j and QN-1-j.
inline ColumnPair pair_indices(Index j, Index n_atoms) {
  if (j < 0 || j >= n_atoms / 2) {
    throw std::out_of_range("pair_indices: frequency index " + std::to_string(j) + " outside [0, " +
                            std::to_string(n_atoms / 2) + ")");
  }
  return {j, n_atoms - 1 - j};
}

/// Frequency index that owns coefficient column k.
inline Index frequency_of_column(Index k, Index n_atoms) {
  if (k < 0 || k >= n_atoms) throw std::out_of_range("frequency_of_column: column out of range");
  return k < n_atoms / 2 ? k : n_atoms - 1 - k;
}

namespace detail {

inline double atom_scale(Index n_samples) { return std::sqrt(2.0 / static_cast<double>(n_samples)); }

// Every atom entry in the library goes through these two functions so that
// incremental updates reproduce a full build bit-for-bit.
inline double cos_atom(double scale, Index n, double freq) {
  return scale * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) * freq);
}
inline double sin_atom(double scale, Index n, double freq) {
  return -scale * std::sin(2.0 * std::numbers::pi * static_cast<double>(n) * freq);
}

}  // namespace detail

/// The N x QN harmonic dictionary with per-frequency perturbations theta.
///
/// Column j (j < QN/2) is sqrt(2/N) cos(2 pi n f_j), column QN-1-j is
/// -sqrt(2/N) sin(2 pi n f_j), with f_j = j/(QN) + theta_j. Both members of a pair
/// sit at the same perturbed frequency, so a tone cos(2 pi f n + phi) is exactly
/// cos(phi) * cos-atom + sin(phi) * sin-atom. theta_0 (DC) is pinned to zero.
class PerturbedDictionary {
 public:
  PerturbedDictionary(Index n_samples, QFactor q, Vector theta)
      : n_samples_(n_samples), q_(q), n_atoms_(q.atoms(n_samples)), theta_(std::move(theta)) {
    if (theta_.size() != n_atoms_ / 2) {
      throw std::invalid_argument("PerturbedDictionary: theta has length " + std::to_string(theta_.size()) +
                                  ", expected QN/2 = " + std::to_string(n_atoms_ / 2));
    }
    if (theta_[0] != 0.0) throw std::invalid_argument("PerturbedDictionary: DC perturbation must be zero");
    for (Index j = 0; j < theta_.size(); ++j) check_bounds(theta_[j]);
    atoms_.resize(n_samples_, n_atoms_);
    for (Index j = 0; j < theta_.size(); ++j) fill_pair(j);
  }

  /// Theta = 0: the standard (Q = 1) or overcomplete Fourier dictionary.
  static PerturbedDictionary unperturbed(Index n_samples, QFactor q = {}) {
    return PerturbedDictionary(n_samples, q, Vector::Zero(q.atoms(n_samples) / 2));
  }

  Index n_samples() const { return n_samples_; }
  QFactor q_factor() const { return q_; }
  Index n_atoms() const { return n_atoms_; }
  Index n_frequencies() const { return n_atoms_ / 2; }
  /// Largest admissible |theta|, 1/(2QN).
  double half_bin() const { return 0.5 / static_cast<double>(n_atoms_); }

  const Vector& theta() const { return theta_; }
  const Matrix& atoms() const { return atoms_; }
  auto column(Index k) const { return atoms_.col(k); }

  ColumnPair pair(Index j) const { return pair_indices(j, n_atoms_); }

  double base_frequency(Index j) const {
    pair(j);
    return static_cast<double>(j) / static_cast<double>(n_atoms_);
  }

  /// Perturbed frequency of index j in cycles/sample, in [0, 1/2).
  double frequency(Index j) const { return base_frequency(j) + theta_[j]; }

  /// In-place refresh of the two columns owned by j. Callers must hold exclusive access.
  void set_perturbation(Index j, double theta) {
    pair(j);
    if (j == 0) throw std::invalid_argument("PerturbedDictionary: the DC perturbation cannot be changed");
    check_bounds(theta);
    theta_[j] = theta;
    fill_pair(j);
  }

  PerturbedDictionary with_perturbation(Index j, double theta) const {
    PerturbedDictionary out = *this;
    out.set_perturbation(j, theta);
    return out;
  }

  /// Writes the two atoms of index j at an arbitrary perturbation into the given columns.
  template <typename Out>
  void evaluate_pair(Index j, double theta, Out&& cos_out, Out&& sin_out) const {
    const double freq = base_frequency(j) + theta;
    const double scale = detail::atom_scale(n_samples_);
    for (Index n = 0; n < n_samples_; ++n) {
      cos_out[n] = detail::cos_atom(scale, n, freq);
      sin_out[n] = detail::sin_atom(scale, n, freq);
    }
  }

 private:
  void check_bounds(double theta) const {
    if (!std::isfinite(theta) || std::abs(theta) > half_bin()) {
      throw std::invalid_argument("PerturbedDictionary: perturbation " + std::to_string(theta) +
                                  " outside [-1/(2QN), 1/(2QN)]");
    }
  }

  void fill_pair(Index j) {
    const ColumnPair p = pair(j);
    evaluate_pair(j, theta_[j], atoms_.col(p.cos_column), atoms_.col(p.sin_column));
  }

  Index n_samples_;
  QFactor q_;
  Index n_atoms_;
  Vector theta_;
  Matrix atoms_;
};

/// z = Psi_theta x.
inline Vector reconstruct(const PerturbedDictionary& dict, const Vector& x) {
  if (x.size() != dict.n_atoms()) {
    throw std::invalid_argument("reconstruct: coefficient length " + std::to_string(x.size()) +
                                " does not match " + std::to_string(dict.n_atoms()) + " atoms");
  }
  return dict.atoms() * x;
}

}  // namespace acs
