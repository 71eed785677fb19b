#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fchv/time_integrator.hpp"

namespace fchv {

struct GridConfig {
  int dim = 2;
  int n = 64;
  double length = 6.283185307179586;
};

struct DatumConfig {
  /// stream-bump, projected-bump, band-random, taylor-green, scaled
  std::string kind = "stream-bump";
  double amplitude = 1.0;
  double sigma = 1.0;
  std::uint64_t seed = 1;
  double band_lo = 1.0;
  double band_hi = 4.0;
  /// Member of the scaled family for kind = scaled.
  double epsilon = 1.0;
};

struct ExperimentConfig {
  std::string scenario = "simulate";
  GridConfig grid;
  SolverParams params;
  /// dt = c dx / max|u| when dt_auto is set.
  bool dt_auto = false;
  double cfl = 0.5;
  DatumConfig datum;

  std::string output_dir = "out";
  std::uint64_t sample_stride = 10;
  /// Write a checkpoint every this many steps (0 = only the final state).
  std::uint64_t checkpoint_every = 0;
  /// Start from this checkpoint instead of the datum (simulate only).
  std::string resume;

  /// Decay fit window; NaN selects the default window.
  double fit_t_lo;
  double fit_t_hi;
  int gradient_order = 2;

  std::vector<double> alphas;
  std::optional<double> q_exponent;
  std::optional<double> l_exponent;
  double p_exponent = 2.0;
  /// Smallest acceptable fitted order of the alpha-sweep distance.
  double min_order = 1.5;

  std::vector<double> epsilons;
  double family_horizon = 20.0;

  std::vector<double> kernel_gammas;
  std::vector<double> kernel_times;

  ExperimentConfig();
};

/// Built-in defaults for a scenario (decay runs on the large box, etc.).
ExperimentConfig default_config(const std::string& scenario);

/// Reads an INI file with sections [grid], [solver], [datum], [output],
/// [fit], [sweep], [family], [kernel]. Unknown sections or keys are errors.
void apply_ini_file(ExperimentConfig& cfg, const std::string& path);
void apply_ini_text(ExperimentConfig& cfg, const std::string& text);

/// "section.key=value"
void apply_override(ExperimentConfig& cfg, const std::string& assignment);

/// Scenario-specific consistency checks. Throws ConfigError; returns warnings.
std::vector<std::string> validate(const ExperimentConfig& cfg);

/// Exponents of the alpha-sweep: q from l when only l is given.
struct SweepExponents {
  double l;
  double s;
  double q;
  double p;
  double gamma;
};
SweepExponents sweep_exponents(const ExperimentConfig& cfg);

nlohmann::json to_json(const ExperimentConfig& cfg);

/// Every settable key as "section.key".
std::vector<std::string> config_keys();

}  // namespace fchv
