#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <omp.h>

#include "fchv/config.hpp"
#include "fchv/error.hpp"
#include "fchv/experiments.hpp"

namespace {

struct Options {
  std::string config;
  std::string out;
  int threads = 0;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
};

void print_checks(const nlohmann::json& report) {
  if (report.contains("checks")) {
    for (const auto& c : report["checks"]) {
      const char* tag = c.value("informational", false) ? "INFO" : (c["passed"].get<bool>() ? "PASS" : "FAIL");
      std::printf("%-4s %s\n", tag, c["name"].get<std::string>().c_str());
    }
  }
  if (report.contains("failure"))
    std::printf("FAIL %s: %s\n", report["failure"]["kind"].get<std::string>().c_str(),
                report["failure"]["message"].get<std::string>().c_str());
}

int execute(const std::string& scenario, const Options& opt) {
  fchv::ExperimentConfig cfg = fchv::default_config(scenario);
  if (!opt.config.empty()) fchv::apply_ini_file(cfg, opt.config);
  for (const auto& o : opt.overrides) fchv::apply_override(cfg, o);
  if (opt.seed) cfg.datum.seed = *opt.seed;
  if (!opt.out.empty()) cfg.output_dir = opt.out;
  if (opt.threads > 0) omp_set_num_threads(opt.threads);
  for (const auto& w : fchv::validate(cfg)) std::cerr << "warning: " << w << '\n';

  const auto report = fchv::run_experiment(cfg);
  print_checks(report.json);
  std::printf("report: %s/report.json\n", cfg.output_dir.c_str());
  return fchv::exit_code(report.outcome);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional-viscosity Camassa-Holm solver and experiment harness"};
  app.set_version_flag("--version", FCHV_VERSION);
  app.require_subcommand(1);

  Options opt;
  const std::vector<std::pair<std::string, std::string>> scenarios{
      {"simulate", "Integrate a datum and stream energy records"},
      {"decay", "Windowed algebraic decay fits of the energy"},
      {"gradient-decay", "Windowed decay fits of the velocity gradients"},
      {"scaled-family", "Scaled initial data and the energy lower bound"},
      {"alpha-sweep", "Convergence to the fractional Navier-Stokes solution as alpha shrinks"},
      {"filter-check", "Helmholtz filter identities and rates"},
      {"kernel-check", "Fractional heat kernel oracles"},
      {"selftest", "Fast cross-module consistency checks"}};
  std::vector<CLI::App*> subs;
  for (const auto& [name, help] : scenarios) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config, "INI configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "Output directory");
    sub->add_option("--threads", opt.threads, "OpenMP thread count")->check(CLI::PositiveNumber);
    sub->add_option("--seed", opt.seed, "Seed of random data");
    sub->add_option("--override", opt.overrides, "section.key=value (repeatable)");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    for (auto* sub : subs)
      if (sub->parsed()) return execute(sub->get_name(), opt);
  } catch (const fchv::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const fchv::ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return 2;
  } catch (const fchv::CheckpointError& e) {
    std::cerr << "checkpoint error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
