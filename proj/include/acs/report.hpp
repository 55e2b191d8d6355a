#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "acs/experiment.hpp"
#include "json.hpp"

namespace acs {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kCsvHeader = "trial,method,sparsity,rmse,err,runtime_ms,outer_iters,converged";

/// Shortest round-trip text for a double; identical bits give identical bytes.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, ptr);
}

inline void write_csv(std::ostream& out, const ExperimentResult& result) {
  out << kCsvHeader << '\n';
  for (const TrialRecord& rec : result.records) {
    for (const MethodOutcome& o : rec.outcomes) {
      out << rec.trial << ',' << o.label << ',' << rec.sparsity << ',' << format_double(o.rmse) << ','
          << format_double(o.err) << ',' << format_double(o.runtime_ms) << ',' << o.outer_iters << ','
          << (o.converged ? 1 : 0) << '\n';
    }
  }
}

namespace detail {

// JSON has no inf; the noiseless sentinel is written as the string "inf".
inline nlohmann::json json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

}  // namespace detail

inline nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["n"] = cfg.n;
  j["m"] = cfg.m;
  j["sparsity"] = cfg.sparsity;
  j["snr_db"] = detail::json_number(cfg.snr_db);
  j["q"] = cfg.q_acs.str();
  auto q_oc = nlohmann::json::array();
  for (const QFactor& q : cfg.q_oc) q_oc.push_back(q.str());
  j["q_oc"] = q_oc;
  j["sensing"] = std::string(to_string(cfg.sensing));
  auto methods = nlohmann::json::array();
  for (Method m : cfg.methods) methods.push_back(method_name(m));
  j["methods"] = methods;
  j["trials"] = cfg.trials;
  j["seed"] = cfg.master_seed;
  j["zero_phase"] = cfg.zero_phase;
  j["on_grid"] = cfg.on_grid;
  j["exclude_dc"] = cfg.exclude_dc;
  j["timing"] = cfg.timing;
  j["alpha"] = cfg.acs.alpha;
  j["beta"] = cfg.acs.beta;
  j["tol"] = cfg.acs.tol;
  j["max_outer"] = cfg.acs.max_outer;
  // jobs and out are deliberately omitted: they must not change the output bytes.
  return j;
}

inline nlohmann::json replay_to_json(const ReplayBlob& r) {
  return {{"n", r.n},
          {"m", r.m},
          {"sparsity", r.sparsity},
          {"q", r.q_scene.str()},
          {"sensing", std::string(to_string(r.sensing))},
          {"snr_db", detail::json_number(r.snr_db)},
          {"zero_phase", r.scene_options.zero_phase},
          {"on_grid", r.scene_options.on_grid},
          {"exclude_dc", r.scene_options.exclude_dc_bin},
          {"scene_seed", r.scene_seed},
          {"sensing_seed", r.sensing_seed},
          {"noise_seed", r.noise_seed}};
}

inline ReplayBlob replay_from_json(const nlohmann::json& j) {
  ReplayBlob r;
  r.n = j.at("n").get<Index>();
  r.m = j.at("m").get<Index>();
  r.sparsity = j.at("sparsity").get<int>();
  r.q_scene = QFactor::parse(j.at("q").get<std::string>());
  r.sensing = j.at("sensing").get<std::string>() == "gaussian" ? SensingKind::gaussian : SensingKind::temporal_subsample;
  const auto& snr = j.at("snr_db");
  r.snr_db = snr.is_string() ? detail::parse_real("snr_db", snr.get<std::string>()) : snr.get<double>();
  r.scene_options.zero_phase = j.at("zero_phase").get<bool>();
  r.scene_options.on_grid = j.at("on_grid").get<bool>();
  r.scene_options.exclude_dc_bin = j.at("exclude_dc").get<bool>();
  r.scene_seed = j.at("scene_seed").get<std::uint64_t>();
  r.sensing_seed = j.at("sensing_seed").get<std::uint64_t>();
  r.noise_seed = j.at("noise_seed").get<std::uint64_t>();
  return r;
}

inline nlohmann::json result_to_json(const ExperimentResult& result) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["config"] = config_to_json(result.config);
  auto trials = nlohmann::json::array();
  for (const TrialRecord& rec : result.records) {
    nlohmann::json t;
    t["trial"] = rec.trial;
    t["sparsity"] = rec.sparsity;
    t["replay"] = replay_to_json(rec.replay);
    auto methods = nlohmann::json::array();
    for (const MethodOutcome& o : rec.outcomes) {
      methods.push_back({{"method", o.label},
                         {"rmse", o.rmse},
                         {"err", o.err},
                         {"runtime_ms", o.runtime_ms},
                         {"outer_iters", o.outer_iters},
                         {"converged", o.converged},
                         {"tones_located", o.tones_located},
                         {"n_lines", o.n_lines}});
    }
    t["methods"] = methods;
    trials.push_back(std::move(t));
  }
  j["trials"] = trials;
  auto summary = nlohmann::json::array();
  for (const SummaryRow& r : result.summary) {
    summary.push_back({{"method", r.label},
                       {"sparsity", r.sparsity},
                       {"count", r.count},
                       {"rmse_mean", r.rmse_mean},
                       {"rmse_std", r.rmse_std},
                       {"err_mean", r.err_mean},
                       {"err_std", r.err_std},
                       {"runtime_ms_mean", r.runtime_ms_mean},
                       {"outer_iters_mean", r.outer_iters_mean},
                       {"converged_fraction", r.converged_fraction},
                       {"located_fraction", r.located_fraction}});
  }
  j["summary"] = summary;
  return j;
}

/// JSON for a single recovery (the `recover` subcommand).
inline nlohmann::json recovery_to_json(const RecoveryResult& r, const ToneSet& lines) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["method"] = method_name(r.method);
  j["n"] = r.n_samples;
  j["q"] = r.q.str();
  j["lambda"] = r.lambda;
  j["kappa"] = r.kappa;
  j["outer_iterations"] = r.outer_iterations;
  j["converged"] = r.converged;
  j["cost_trace"] = r.cost_trace;
  auto tones = nlohmann::json::array();
  for (const SpectralLine& l : lines.lines) {
    tones.push_back({{"frequency", l.frequency}, {"re", l.amplitude.real()}, {"im", l.amplitude.imag()}});
  }
  j["lines"] = tones;
  return j;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

/// Writes <stem>.csv and <stem>.json.
inline void write_experiment(const ExperimentResult& result, const std::filesystem::path& stem) {
  std::ostringstream csv;
  write_csv(csv, result);
  write_text_file(std::filesystem::path(stem.string() + ".csv"), csv.str());
  write_text_file(std::filesystem::path(stem.string() + ".json"), result_to_json(result).dump(2) + "\n");
}

}  // namespace acs
