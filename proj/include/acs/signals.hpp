#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "acs/dictionary.hpp"
#include "acs/rng.hpp"

namespace acs {

/// One ground-truth tone: sqrt(2/N) cos(2 pi frequency tau + phase).
struct Tone {
  long bin = 0;               // k, base frequency k/(QN)
  double perturbation = 0.0;  // theta_s
  double frequency = 0.0;     // k/(QN) + theta_s, cycles/sample
  double phase = 0.0;         // radians, [0, 2 pi)
  double amplitude = 0.0;     // sqrt(2/N)
};

struct SceneOptions {
  bool exclude_dc_bin = false;
  bool zero_phase = false;  // phi_s = 0
  bool on_grid = false;     // theta_s = 0
};

struct HarmonicScene {
  Index n_samples = 0;
  int sparsity = 0;  // S real coefficients, S/2 tones
  QFactor q;
  std::vector<Tone> tones;
  Vector clean_signal;
};

/// Evaluates the analytic scene at sample time tau.
inline double scene_value(const std::vector<Tone>& tones, double tau) {
  double acc = 0.0;
  for (const Tone& t : tones) acc += t.amplitude * std::cos(2.0 * std::numbers::pi * t.frequency * tau + t.phase);
  return acc;
}

/// Draws S/2 tones on distinct bins of the 1/(QN) grid, each perturbed uniformly within
/// half a bin and given a uniform phase. Draw order: bins (partial Fisher-Yates), then
/// per tone perturbation followed by phase.
inline HarmonicScene generate_scene(Index n, int s, QFactor q, std::uint64_t seed, SceneOptions opts = {}) {
  if (s <= 0 || s % 2 != 0) throw std::invalid_argument("generate_scene: sparsity must be a positive even integer");
  const long n_bins = q.atoms(n) / 2;
  const long first_bin = opts.exclude_dc_bin ? 1 : 0;
  const long available = n_bins - first_bin;
  if (s / 2 > available) {
    throw std::invalid_argument("generate_scene: " + std::to_string(s / 2) + " tones exceed " +
                                std::to_string(available) + " available bins");
  }

  Rng rng(seed);
  std::vector<long> bins(static_cast<std::size_t>(available));
  std::iota(bins.begin(), bins.end(), first_bin);
  const std::size_t n_tones = static_cast<std::size_t>(s / 2);
  for (std::size_t i = 0; i < n_tones; ++i) {
    const std::size_t pick = i + static_cast<std::size_t>(rng.index(bins.size() - i));
    std::swap(bins[i], bins[pick]);
  }

  const double qn = static_cast<double>(q.atoms(n));
  const double half_bin = 0.5 / qn;
  HarmonicScene scene;
  scene.n_samples = n;
  scene.sparsity = s;
  scene.q = q;
  scene.tones.reserve(n_tones);
  for (std::size_t i = 0; i < n_tones; ++i) {
    Tone t;
    t.bin = bins[i];
    const double theta = rng.uniform(-half_bin, half_bin);
    const double phase = 2.0 * std::numbers::pi * rng.uniform();
    t.perturbation = opts.on_grid ? 0.0 : theta;
    t.phase = opts.zero_phase ? 0.0 : phase;
    t.frequency = static_cast<double>(t.bin) / qn + t.perturbation;
    t.amplitude = std::sqrt(2.0 / static_cast<double>(n));
    scene.tones.push_back(t);
  }

  scene.clean_signal.resize(n);
  for (Index i = 0; i < n; ++i) scene.clean_signal[i] = scene_value(scene.tones, static_cast<double>(i));
  return scene;
}

enum class SensingKind { gaussian, temporal_subsample };

inline std::string_view to_string(SensingKind k) {
  return k == SensingKind::gaussian ? "gaussian" : "subsample";
}

/// M x N measurement matrix. The subsample kind is a row selector and is applied by
/// gathering; its dense matrix is still materialized for inspection.
class SensingOperator {
 public:
  SensingOperator(SensingKind kind, Matrix matrix, std::vector<Index> selected = {})
      : kind_(kind), matrix_(std::move(matrix)), selected_(std::move(selected)) {
    if (kind_ == SensingKind::temporal_subsample && static_cast<Index>(selected_.size()) != matrix_.rows()) {
      throw std::invalid_argument("SensingOperator: selector needs one index per row");
    }
  }

  SensingKind kind() const { return kind_; }
  Index rows() const { return matrix_.rows(); }
  Index cols() const { return matrix_.cols(); }
  const Matrix& matrix() const { return matrix_; }
  const std::vector<Index>& selected_indices() const { return selected_; }

  /// A * v for a vector or a matrix with N rows.
  template <typename Derived>
  Matrix apply(const Eigen::MatrixBase<Derived>& v) const {
    check_cols(v.rows());
    if (kind_ == SensingKind::gaussian) return matrix_ * v;
    Matrix out(rows(), v.cols());
    for (Index i = 0; i < rows(); ++i) out.row(i) = v.row(selected_[static_cast<std::size_t>(i)]);
    return out;
  }

  template <typename Derived>
  Vector apply_vector(const Eigen::MatrixBase<Derived>& v) const {
    check_cols(v.rows());
    if (kind_ == SensingKind::gaussian) return matrix_ * v;
    Vector out(rows());
    for (Index i = 0; i < rows(); ++i) out[i] = v[selected_[static_cast<std::size_t>(i)]];
    return out;
  }

 private:
  void check_cols(Index n) const {
    if (n != cols()) {
      throw std::invalid_argument("SensingOperator: operand has " + std::to_string(n) + " rows, expected " +
                                  std::to_string(cols()));
    }
  }

  SensingKind kind_;
  Matrix matrix_;
  std::vector<Index> selected_;
};

/// Dense i.i.d. standard-normal matrix, drawn row by row.
inline SensingOperator gaussian_sensing(Index m, Index n, std::uint64_t seed) {
  if (m < 1 || n < 1 || m > n) throw std::invalid_argument("gaussian_sensing: need 1 <= m <= n");
  Rng rng(seed);
  Matrix a(m, n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) a(i, j) = rng.normal();
  return SensingOperator(SensingKind::gaussian, std::move(a));
}

/// Keeps m of the n samples, chosen without replacement; selected times are sorted.
inline SensingOperator temporal_subsample_sensing(Index m, Index n, std::uint64_t seed) {
  if (m < 1 || n < 1 || m > n) throw std::invalid_argument("temporal_subsample_sensing: need 1 <= m <= n");
  Rng rng(seed);
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  for (Index i = 0; i < m; ++i) {
    const Index pick = i + static_cast<Index>(rng.index(static_cast<std::uint64_t>(n - i)));
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(pick)]);
  }
  std::vector<Index> selected(perm.begin(), perm.begin() + m);
  std::sort(selected.begin(), selected.end());
  Matrix a = Matrix::Zero(m, n);
  for (Index i = 0; i < m; ++i) a(i, selected[static_cast<std::size_t>(i)]) = 1.0;
  return SensingOperator(SensingKind::temporal_subsample, std::move(a), std::move(selected));
}

inline SensingOperator make_sensing(SensingKind kind, Index m, Index n, std::uint64_t seed) {
  return kind == SensingKind::gaussian ? gaussian_sensing(m, n, seed) : temporal_subsample_sensing(m, n, seed);
}

struct Measurement {
  Vector y;
  double noise_sigma = 0.0;
  double snr_db = 0.0;
  Vector noise;
};

inline double rms(const Vector& v) {
  return v.size() == 0 ? 0.0 : std::sqrt(v.squaredNorm() / static_cast<double>(v.size()));
}

/// sigma = rms(z) / 10^(snr_db/20). snr_db = +infinity means noiseless.
inline double noise_sigma_for(const Vector& clean, double snr_db) {
  if (std::isinf(snr_db) && snr_db > 0) return 0.0;
  if (!std::isfinite(snr_db)) throw std::invalid_argument("noise_sigma_for: SNR must be finite or +inf");
  return rms(clean) / std::pow(10.0, snr_db / 20.0);
}

/// y = A z + eta with eta i.i.d. N(0, sigma^2).
inline Measurement measure(const HarmonicScene& scene, const SensingOperator& a, double snr_db, std::uint64_t seed) {
  if (a.cols() != scene.n_samples) {
    throw std::invalid_argument("measure: operator has " + std::to_string(a.cols()) + " columns, scene has " +
                                std::to_string(scene.n_samples) + " samples");
  }
  Measurement out;
  out.snr_db = snr_db;
  out.noise_sigma = noise_sigma_for(scene.clean_signal, snr_db);
  out.noise = Vector::Zero(a.rows());
  if (out.noise_sigma > 0.0) {
    Rng rng(seed);
    for (Index i = 0; i < a.rows(); ++i) out.noise[i] = out.noise_sigma * rng.normal();
  }
  out.y = a.apply_vector(scene.clean_signal) + out.noise;
  return out;
}

}  // namespace acs
