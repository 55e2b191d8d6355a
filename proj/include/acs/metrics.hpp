#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "acs/acs.hpp"
#include "acs/signals.hpp"

namespace acs {

/// A recovered or true spectral line with its complex amplitude c + i s.
struct SpectralLine {
  double frequency = 0.0;
  std::complex<double> amplitude;
};

struct ToneSet {
  std::vector<SpectralLine> lines;
  double epsilon = 0.0;  // closeness window for support_err
};

/// 1/(5QN), a fifth of a frequency bin.
inline double default_epsilon(Index n, QFactor q) { return 0.2 / static_cast<double>(q.atoms(n)); }

/// ||z - z_hat||^2 / ||z||^2 (a squared-norm ratio despite the name).
inline double normalized_rmse(const Vector& z, const Vector& z_hat) {
  if (z.size() != z_hat.size()) throw std::invalid_argument("normalized_rmse: length mismatch");
  const double ref = z.squaredNorm();
  if (!(ref > 0.0)) throw std::invalid_argument("normalized_rmse: zero reference signal");
  return (z - z_hat).squaredNorm() / ref;
}

/// True tones as unit-modulus amplitudes e^{i phi}, matching the (cos, -sin) atom pair.
inline ToneSet truth_tones(const HarmonicScene& scene, double epsilon) {
  ToneSet out;
  out.epsilon = epsilon;
  for (const Tone& t : scene.tones) out.lines.push_back({t.frequency, std::polar(1.0, t.phase)});
  return out;
}

/// Lines whose paired coefficients satisfy |c + i s| >= kappa.
inline ToneSet extract_tones(const PerturbedDictionary& dict, const Vector& x, double kappa, double epsilon) {
  if (x.size() != dict.n_atoms()) throw std::invalid_argument("extract_tones: coefficient length mismatch");
  ToneSet out;
  out.epsilon = epsilon;
  for (Index j = 0; j < dict.n_frequencies(); ++j) {
    const ColumnPair p = dict.pair(j);
    const std::complex<double> amp(x[p.cos_column], x[p.sin_column]);
    if (amp == 0.0) continue;
    if (std::abs(amp) >= kappa) out.lines.push_back({dict.frequency(j), amp});
  }
  return out;
}

inline ToneSet extract_tones(const RecoveryResult& result, double kappa, double epsilon) {
  return extract_tones(result.dictionary(), result.x_hat, kappa, epsilon);
}

/// Defaults: kappa from the result, epsilon = 1/(5QN) of the result's dictionary.
inline ToneSet extract_tones(const RecoveryResult& result) {
  return extract_tones(result, result.kappa, default_epsilon(result.n_samples, result.q));
}

/// sum_i |x_i - sum_{j : |f_j - f_i| < eps} x_hat_j| with eps taken from the truth set.
/// Estimated lines outside every window do not contribute.
inline double support_err(const ToneSet& truth, const ToneSet& estimate) {
  double err = 0.0;
  for (const SpectralLine& t : truth.lines) {
    std::complex<double> matched = 0.0;
    for (const SpectralLine& e : estimate.lines) {
      if (std::abs(e.frequency - t.frequency) < truth.epsilon) matched += e.amplitude;
    }
    err += std::abs(t.amplitude - matched);
  }
  return err;
}

/// True when every true line has at least one estimate within its window.
inline bool all_tones_located(const ToneSet& truth, const ToneSet& estimate) {
  for (const SpectralLine& t : truth.lines) {
    bool found = false;
    for (const SpectralLine& e : estimate.lines) found = found || std::abs(e.frequency - t.frequency) < truth.epsilon;
    if (!found) return false;
  }
  return true;
}

}  // namespace acs
