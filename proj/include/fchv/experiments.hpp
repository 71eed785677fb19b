#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "fchv/config.hpp"
#include "fchv/grid.hpp"

namespace fchv {

/// Named pass/fail entries of a report. Informational entries are recorded
/// but do not affect the verdict.
class CheckList {
 public:
  void add(const std::string& name, bool passed, nlohmann::json detail = nlohmann::json::object());
  void info(const std::string& name, nlohmann::json detail);
  bool passed() const noexcept { return passed_; }
  const nlohmann::json& json() const noexcept { return entries_; }
  void merge(const CheckList& other);

 private:
  nlohmann::json entries_ = nlohmann::json::array();
  bool passed_ = true;
};

enum class Outcome { pass, fail, blow_up };

struct Report {
  nlohmann::json json;
  Outcome outcome = Outcome::pass;
};

/// Process exit code for an outcome: 0 pass, 1 failed check, 3 blow-up.
int exit_code(Outcome outcome);

/// Dispatches on cfg.scenario, writes CSV streams and checkpoints under
/// cfg.output_dir, and returns the summary (also written as report.json).
Report run_experiment(const ExperimentConfig& cfg);

Report run_simulate(const ExperimentConfig& cfg);
Report run_decay_experiment(const ExperimentConfig& cfg);
Report run_scaled_family(const ExperimentConfig& cfg);
Report run_alpha_sweep(const ExperimentConfig& cfg);
Report run_filter_check(const ExperimentConfig& cfg);
Report run_kernel_check(const ExperimentConfig& cfg);
Report run_selftest(const ExperimentConfig& cfg);

/// %g rendering used in check names and file names.
std::string short_number(double x);

/// Velocity datum v0 described by cfg.datum (physical or spectral).
Field make_datum(const ExperimentConfig& cfg, const GridPtr& grid);

/// Fixed-size invariant suites behind filter-check, kernel-check and selftest.
CheckList filter_suite(const ExperimentConfig& cfg);
CheckList kernel_suite(const ExperimentConfig& cfg);
CheckList selftest_suite(const ExperimentConfig& cfg);

}  // namespace fchv
