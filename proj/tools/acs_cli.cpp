// acs_cli: single recoveries, Monte Carlo sweeps and the appendix checks.
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "acs/appendix_suite.hpp"
#include "acs/experiment.hpp"
#include "acs/report.hpp"

namespace {

struct SharedFlags {
  std::string config_path;
  std::vector<std::pair<std::string, std::optional<std::string>>> values;
  std::vector<std::pair<std::string, CLI::Option*>> switches;

  void add(CLI::App& app) {
    app.add_option("--config", config_path, "flat key = value config file; flags override it");
    for (const char* name : {"n", "m", "sparsity", "snr-db", "q", "q-oc", "sensing", "methods", "trials", "seed",
                             "jobs", "out", "alpha", "beta", "tol", "max-outer"}) {
      values.emplace_back(name, std::nullopt);
    }
    for (auto& [name, slot] : values) app.add_option("--" + name, slot);
    for (const char* name : {"zero-phase", "on-grid", "exclude-dc", "no-timing"})
      switches.emplace_back(name, app.add_flag(std::string("--") + name));
  }

  acs::ExperimentConfig resolve() const {
    acs::ExperimentConfig cfg;
    if (!config_path.empty()) acs::load_config_file(cfg, config_path);
    for (const auto& [name, slot] : values)
      if (slot) acs::apply_setting(cfg, name, *slot);
    for (const auto& [name, opt] : switches) {
      if (opt->count() == 0) continue;
      if (name == "no-timing")
        cfg.timing = false;
      else
        acs::apply_setting(cfg, name, "true");
    }
    cfg.validate();
    return cfg;
  }
};

int run_recover(const acs::ExperimentConfig& cfg) {
  const int s = cfg.sparsity.front();
  const acs::TrialInstance inst = acs::materialize(acs::make_replay(cfg, 0, s));
  nlohmann::json out;
  out["config"] = acs::config_to_json(cfg);
  auto runs = nlohmann::json::array();
  for (const acs::MethodSpec& spec : acs::method_specs(cfg)) {
    const acs::RecoveryResult r = acs::run_method(spec, inst.measurement, inst.sensing, cfg.acs);
    nlohmann::json j = acs::recovery_to_json(r, acs::extract_tones(r));
    j["label"] = spec.label();
    j["rmse"] = acs::normalized_rmse(inst.scene.clean_signal, r.z_hat);
    runs.push_back(std::move(j));
  }
  out["runs"] = runs;
  auto truth = nlohmann::json::array();
  for (const acs::Tone& t : inst.scene.tones) truth.push_back({{"frequency", t.frequency}, {"phase", t.phase}});
  out["truth"] = truth;
  acs::write_text_file(cfg.out + ".json", out.dump(2) + "\n");
  std::cout << "wrote " << cfg.out << ".json\n";
  return 0;
}

int run_bench(const acs::ExperimentConfig& cfg) {
  const acs::ExperimentResult result = acs::run_experiment(cfg);
  acs::write_experiment(result, cfg.out);
  for (const acs::SummaryRow& r : result.summary) {
    std::cout << r.label << " S=" << r.sparsity << " rmse=" << r.rmse_mean << " err=" << r.err_mean
              << " located=" << r.located_fraction << '\n';
  }
  std::cout << "wrote " << cfg.out << ".csv and " << cfg.out << ".json\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Alternating convex search for off-grid line spectra"};
  app.require_subcommand(1);

  SharedFlags recover_flags;
  auto* recover = app.add_subcommand("recover", "recover one seeded instance, JSON out");
  recover_flags.add(*recover);

  SharedFlags bench_flags;
  auto* bench = app.add_subcommand("bench", "Monte Carlo sweep, CSV + JSON out");
  bench_flags.add(*bench);

  std::string appendix_dir = "appendix_out";
  auto* appendix = app.add_subcommand("appendix", "appendix verification suite");
  appendix->add_option("--out", appendix_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*recover) return run_recover(recover_flags.resolve());
    if (*bench) return run_bench(bench_flags.resolve());
    if (*appendix) {
      const auto report = acs::appendix::run_appendix_suite(appendix_dir);
      for (const auto& c : report.checks) std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
      return report.all_pass() ? 0 : 1;
    }
  } catch (const acs::ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
