#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <exception>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "acs/acs.hpp"
#include "acs/metrics.hpp"
#include "acs/rng.hpp"
#include "acs/signals.hpp"

namespace acs {

/// Invalid experiment configuration; names the offending field.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct ExperimentConfig {
  Index n = 256;
  Index m = 128;
  std::vector<int> sparsity{6};
  double snr_db = 40.0;
  QFactor q_acs{1};
  std::vector<QFactor> q_oc{QFactor{4}};
  SensingKind sensing = SensingKind::gaussian;
  std::vector<Method> methods{Method::acs, Method::gpsr, Method::oc_gpsr};
  int trials = 50;
  std::uint64_t master_seed = 1;
  bool zero_phase = false;
  bool on_grid = false;
  bool exclude_dc = false;
  int jobs = 1;
  bool timing = true;
  std::string out = "acs_results";
  AcsConfig acs{};

  void validate() const {
    if (n < 2) throw ConfigError("n", "must be >= 2");
    if (m < 1 || m > n) throw ConfigError("m", "must satisfy 1 <= m <= n");
    if (sparsity.empty()) throw ConfigError("sparsity", "list is empty");
    for (int s : sparsity) {
      if (s <= 0 || s % 2 != 0) throw ConfigError("sparsity", "entries must be positive even integers");
    }
    try {
      const long bins = q_acs.atoms(n) / 2 - (exclude_dc ? 1 : 0);
      for (int s : sparsity) {
        if (s / 2 > bins) throw ConfigError("sparsity", std::to_string(s) + " exceeds the available bins");
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw ConfigError("q", e.what());
    }
    for (const QFactor& q : q_oc) {
      try {
        q.atoms(n);
      } catch (const std::invalid_argument& e) {
        throw ConfigError("q_oc", e.what());
      }
    }
    if (std::isnan(snr_db) || snr_db == -std::numeric_limits<double>::infinity()) {
      throw ConfigError("snr_db", "must be a number or inf");
    }
    if (methods.empty()) throw ConfigError("methods", "list is empty");
    if (std::count(methods.begin(), methods.end(), Method::oc_gpsr) > 0 && q_oc.empty()) {
      throw ConfigError("q_oc", "oc-gpsr requested without an overcompleteness");
    }
    if (trials < 1) throw ConfigError("trials", "must be >= 1");
    if (jobs < 1) throw ConfigError("jobs", "must be >= 1");
    try {
      acs.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError("acs", e.what());
    }
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

inline std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto item = trim(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
T parse_integer(const std::string& field, std::string_view text) {
  T v{};
  const std::string t = trim(text);
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size()) throw ConfigError(field, "expected an integer, got '" + t + "'");
  return v;
}

inline double parse_real(const std::string& field, std::string_view text) {
  const std::string t = trim(text);
  if (t == "inf" || t == "+inf" || t == "infinity") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    if (used != t.size()) throw std::invalid_argument(t);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(field, "expected a number, got '" + t + "'");
  }
}

inline bool parse_bool(const std::string& field, std::string_view text) {
  const std::string t = trim(text);
  if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
  if (t == "0" || t == "false" || t == "no" || t == "off") return false;
  throw ConfigError(field, "expected a boolean, got '" + t + "'");
}

inline QFactor parse_q(const std::string& field, std::string_view text) {
  try {
    return QFactor::parse(trim(text));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(field, e.what());
  }
}

inline Method parse_method(std::string_view text) {
  if (text == "acs") return Method::acs;
  if (text == "gpsr") return Method::gpsr;
  if (text == "oc-gpsr" || text == "oc_gpsr") return Method::oc_gpsr;
  throw ConfigError("methods", "unknown method '" + std::string(text) + "'");
}

}  // namespace detail

/// Sets one configuration key. Keys match the CLI flag names; '-' and '_' are interchangeable.
inline void apply_setting(ExperimentConfig& cfg, std::string_view raw_key, std::string_view value) {
  std::string key = detail::trim(raw_key);
  std::replace(key.begin(), key.end(), '-', '_');
  using namespace detail;
  if (key == "n") {
    cfg.n = parse_integer<Index>(key, value);
  } else if (key == "m") {
    cfg.m = parse_integer<Index>(key, value);
  } else if (key == "sparsity") {
    cfg.sparsity.clear();
    for (const auto& item : split_list(value)) cfg.sparsity.push_back(parse_integer<int>(key, item));
  } else if (key == "snr_db") {
    cfg.snr_db = parse_real(key, value);
  } else if (key == "q") {
    cfg.q_acs = parse_q(key, value);
  } else if (key == "q_oc") {
    cfg.q_oc.clear();
    for (const auto& item : split_list(value)) cfg.q_oc.push_back(parse_q(key, item));
  } else if (key == "sensing") {
    const std::string v = trim(value);
    if (v == "gaussian") {
      cfg.sensing = SensingKind::gaussian;
    } else if (v == "subsample" || v == "temporal") {
      cfg.sensing = SensingKind::temporal_subsample;
    } else {
      throw ConfigError(key, "expected 'gaussian' or 'subsample', got '" + v + "'");
    }
  } else if (key == "methods") {
    cfg.methods.clear();
    for (const auto& item : split_list(value)) {
      const Method m = parse_method(item);
      if (std::find(cfg.methods.begin(), cfg.methods.end(), m) == cfg.methods.end()) cfg.methods.push_back(m);
    }
  } else if (key == "trials") {
    cfg.trials = parse_integer<int>(key, value);
  } else if (key == "seed") {
    cfg.master_seed = parse_integer<std::uint64_t>(key, value);
  } else if (key == "jobs") {
    cfg.jobs = parse_integer<int>(key, value);
  } else if (key == "zero_phase") {
    cfg.zero_phase = parse_bool(key, value);
  } else if (key == "on_grid") {
    cfg.on_grid = parse_bool(key, value);
  } else if (key == "exclude_dc") {
    cfg.exclude_dc = parse_bool(key, value);
  } else if (key == "timing") {
    cfg.timing = parse_bool(key, value);
  } else if (key == "out") {
    cfg.out = trim(value);
  } else if (key == "alpha") {
    cfg.acs.alpha = parse_real(key, value);
  } else if (key == "beta") {
    cfg.acs.beta = parse_real(key, value);
  } else if (key == "tol") {
    cfg.acs.tol = parse_real(key, value);
  } else if (key == "max_outer") {
    cfg.acs.max_outer = parse_integer<int>(key, value);
  } else {
    throw ConfigError(key, "unknown configuration key");
  }
}

/// Reads a flat "key = value" file. '#' starts a comment; blank lines are ignored.
inline std::vector<std::pair<std::string, std::string>> read_settings(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = detail::trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no), "expected key = value");
    out.emplace_back(detail::trim(t.substr(0, eq)), detail::trim(t.substr(eq + 1)));
  }
  return out;
}

inline void load_config_file(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  for (const auto& [k, v] : read_settings(in)) apply_setting(cfg, k, v);
}

/// Everything needed to regenerate one trial's scene, operator and measurement.
struct ReplayBlob {
  Index n = 0;
  Index m = 0;
  int sparsity = 0;
  QFactor q_scene;
  SensingKind sensing = SensingKind::gaussian;
  double snr_db = 0.0;
  SceneOptions scene_options;
  std::uint64_t scene_seed = 0;
  std::uint64_t sensing_seed = 0;
  std::uint64_t noise_seed = 0;
};

/// Per-trial seed: the master seed mixed with the trial index, then with the sparsity.
/// Independent of execution order.
inline std::uint64_t trial_seed(std::uint64_t master, int trial, int sparsity) {
  return derive_seed(derive_seed(master, static_cast<std::uint64_t>(trial)), static_cast<std::uint64_t>(sparsity));
}

inline ReplayBlob make_replay(const ExperimentConfig& cfg, int trial, int sparsity) {
  const std::uint64_t seed = trial_seed(cfg.master_seed, trial, sparsity);
  ReplayBlob r;
  r.n = cfg.n;
  r.m = cfg.m;
  r.sparsity = sparsity;
  r.q_scene = cfg.q_acs;
  r.sensing = cfg.sensing;
  r.snr_db = cfg.snr_db;
  r.scene_options = {cfg.exclude_dc, cfg.zero_phase, cfg.on_grid};
  r.scene_seed = derive_seed(seed, kSceneStream);
  r.sensing_seed = derive_seed(seed, kSensingStream);
  r.noise_seed = derive_seed(seed, kNoiseStream);
  return r;
}

struct TrialInstance {
  HarmonicScene scene;
  SensingOperator sensing;
  Measurement measurement;
};

inline TrialInstance materialize(const ReplayBlob& r) {
  HarmonicScene scene = generate_scene(r.n, r.sparsity, r.q_scene, r.scene_seed, r.scene_options);
  SensingOperator a = make_sensing(r.sensing, r.m, r.n, r.sensing_seed);
  Measurement y = measure(scene, a, r.snr_db, r.noise_seed);
  return {std::move(scene), std::move(a), std::move(y)};
}

/// One method at one overcompleteness, as it appears in outputs ("acs", "gpsr", "oc-gpsr-q4").
struct MethodSpec {
  Method method;
  QFactor q;

  std::string label() const {
    if (method == Method::oc_gpsr) {
      std::string qs = q.str();
      std::replace(qs.begin(), qs.end(), '/', '_');
      return "oc-gpsr-q" + qs;
    }
    return method_name(method);
  }
};

inline std::vector<MethodSpec> method_specs(const ExperimentConfig& cfg) {
  std::vector<MethodSpec> out;
  for (Method m : cfg.methods) {
    switch (m) {
      case Method::acs: out.push_back({m, cfg.q_acs}); break;
      case Method::gpsr: out.push_back({m, QFactor{1}}); break;
      case Method::oc_gpsr:
        for (const QFactor& q : cfg.q_oc) out.push_back({m, q});
        break;
    }
  }
  return out;
}

inline RecoveryResult run_method(const MethodSpec& spec, const Measurement& y, const SensingOperator& a,
                                 const AcsConfig& base) {
  if (spec.method == Method::acs) {
    AcsConfig cfg = base;
    cfg.q = spec.q;
    return run_acs(y.y, a, cfg);
  }
  return run_gpsr_baseline(y.y, a, spec.q, base);
}

struct MethodOutcome {
  std::string label;
  double rmse = 0.0;
  double err = 0.0;
  double runtime_ms = 0.0;
  int outer_iters = 0;
  bool converged = false;
  bool tones_located = false;  // every true tone has an estimate within epsilon
  std::size_t n_lines = 0;     // extracted spectral lines
  std::vector<double> cost_trace;
};

struct TrialRecord {
  int trial = 0;
  int sparsity = 0;
  ReplayBlob replay;
  std::vector<MethodOutcome> outcomes;
};

/// Runs every configured method on the trial described by replay. Scores use
/// epsilon = 1/(5 Q N) with the scene's Q, shared by all methods.
inline TrialRecord run_replay(const ExperimentConfig& cfg, const ReplayBlob& replay, int trial) {
  const TrialInstance inst = materialize(replay);
  const ToneSet truth = truth_tones(inst.scene, default_epsilon(replay.n, replay.q_scene));
  TrialRecord rec;
  rec.trial = trial;
  rec.sparsity = replay.sparsity;
  rec.replay = replay;
  for (const MethodSpec& spec : method_specs(cfg)) {
    const RecoveryResult r = run_method(spec, inst.measurement, inst.sensing, cfg.acs);
    const ToneSet est = extract_tones(r, r.kappa, truth.epsilon);
    MethodOutcome o;
    o.label = spec.label();
    o.rmse = normalized_rmse(inst.scene.clean_signal, r.z_hat);
    o.err = support_err(truth, est);
    o.runtime_ms = cfg.timing ? r.wall_time.count() : 0.0;
    o.outer_iters = r.outer_iterations;
    o.converged = r.converged;
    o.tones_located = all_tones_located(truth, est);
    o.n_lines = est.lines.size();
    o.cost_trace = r.cost_trace;
    rec.outcomes.push_back(std::move(o));
  }
  return rec;
}

inline TrialRecord run_trial(const ExperimentConfig& cfg, int trial, int sparsity) {
  return run_replay(cfg, make_replay(cfg, trial, sparsity), trial);
}

struct SummaryRow {
  std::string label;
  int sparsity = 0;
  int count = 0;
  double rmse_mean = 0.0;
  double rmse_std = 0.0;
  double err_mean = 0.0;
  double err_std = 0.0;
  double runtime_ms_mean = 0.0;
  double outer_iters_mean = 0.0;
  double converged_fraction = 0.0;
  double located_fraction = 0.0;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<TrialRecord> records;  // ordered by sparsity (config order), then trial
  std::vector<SummaryRow> summary;   // ordered by sparsity, then method

  const SummaryRow& row(const std::string& label, int sparsity) const {
    for (const auto& r : summary)
      if (r.label == label && r.sparsity == sparsity) return r;
    throw std::out_of_range("ExperimentResult: no summary for " + label + " at S=" + std::to_string(sparsity));
  }
};

namespace detail {

inline void mean_std(const std::vector<double>& v, double& mean, double& stddev) {
  mean = 0.0;
  stddev = 0.0;
  if (v.empty()) return;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  if (v.size() < 2) return;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  stddev = std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace detail

inline std::vector<SummaryRow> summarize(const ExperimentConfig& cfg, const std::vector<TrialRecord>& records) {
  std::vector<SummaryRow> out;
  const auto specs = method_specs(cfg);
  for (int s : cfg.sparsity) {
    for (const MethodSpec& spec : specs) {
      const std::string label = spec.label();
      std::vector<double> rmse, err, runtime, iters;
      int converged = 0;
      int located = 0;
      for (const TrialRecord& rec : records) {
        if (rec.sparsity != s) continue;
        for (const MethodOutcome& o : rec.outcomes) {
          if (o.label != label) continue;
          rmse.push_back(o.rmse);
          err.push_back(o.err);
          runtime.push_back(o.runtime_ms);
          iters.push_back(o.outer_iters);
          converged += o.converged ? 1 : 0;
          located += o.tones_located ? 1 : 0;
        }
      }
      SummaryRow row;
      row.label = label;
      row.sparsity = s;
      row.count = static_cast<int>(rmse.size());
      detail::mean_std(rmse, row.rmse_mean, row.rmse_std);
      detail::mean_std(err, row.err_mean, row.err_std);
      double unused = 0.0;
      detail::mean_std(runtime, row.runtime_ms_mean, unused);
      detail::mean_std(iters, row.outer_iters_mean, unused);
      if (row.count > 0) {
        row.converged_fraction = static_cast<double>(converged) / row.count;
        row.located_fraction = static_cast<double>(located) / row.count;
      }
      out.push_back(row);
    }
  }
  return out;
}

/// Runs trials x sparsities on up to cfg.jobs threads. Each task owns its data and
/// writes only its own slot, so the output does not depend on scheduling.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  struct Task {
    int trial;
    int sparsity;
  };
  std::vector<Task> tasks;
  for (int s : cfg.sparsity)
    for (int t = 0; t < cfg.trials; ++t) tasks.push_back({t, s});

  std::vector<TrialRecord> records(tasks.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        records[i] = run_trial(cfg, tasks[i].trial, tasks[i].sparsity);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = tasks.size();
      }
    }
  };
  const int n_threads = std::min<int>(cfg.jobs, static_cast<int>(tasks.size()));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  ExperimentResult result;
  result.config = cfg;
  result.records = std::move(records);
  result.summary = summarize(cfg, result.records);
  return result;
}

}  // namespace acs
