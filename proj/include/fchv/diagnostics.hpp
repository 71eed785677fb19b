#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fchv/field.hpp"
#include "fchv/time_integrator.hpp"

namespace fchv {

struct EnergyRecord {
  double t = 0.0;
  /// ||u||^2 + alpha^2 ||grad u||^2
  double E = 0.0;
  /// ||Lambda^beta u||^2 + alpha^2 ||grad Lambda^beta u||^2
  double D = 0.0;
  double v_l2 = 0.0;
  double gradv_l2 = 0.0;
  /// max over wavenumbers of |F v|, continuous transform approximated by
  /// the DFT times the cell volume.
  double fhat_max = 0.0;
  /// ||u||^2, kept for the Fourier amplitude bound; not part of the CSV.
  double u_l2 = 0.0;
};

EnergyRecord record_energy(double t, const Field& v, double alpha, double beta);
EnergyRecord record_energy(const SimState& state, const SolverParams& params);

/// Fixed CSV layout: t,E,D,v_l2,gradv_l2,fhat_max.
std::string energy_csv_header();
std::string energy_csv_row(const EnergyRecord& r);

/// (sum_x |f(x)|^p (L/N)^n)^(1/p) with |.| Euclidean over components;
/// p = infinity gives the max norm.
double lp_norm(const Field& field, double p);

/// ||a - b||_{L^q}
double solution_distance(const Field& a, const Field& b, double q);

struct DecayWindow {
  double t_lo;
  double t_hi;
};

struct DecayFit {
  double t_lo = 0.0;
  double t_hi = 0.0;
  double exponent = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t samples = 0;
  /// r_squared >= algebraic_threshold
  bool algebraic = false;
};

inline constexpr double algebraic_threshold = 0.98;

/// Least squares of log value against log(1 + t) over the samples inside
/// the window. Needs at least ten samples, all positive.
DecayFit fit_decay(std::span<const std::pair<double, double>> series, DecayWindow window);

/// Window [max(5, t0), t_end - 10% of the span].
DecayWindow default_decay_window(double t_start, double t_end);

struct AmplitudeBoundReport {
  std::vector<double> ratios;
  double max_ratio = 0.0;
  double first_half_max = 0.0;
  double second_half_max = 0.0;
  /// No growth: second-half maximum within 1% of the first-half maximum.
  bool bounded = true;
};

/// Running ratio fhat_max / (1 + sqrt(int ||u||^2) sqrt(int ||grad v||^2)),
/// time integrals by the trapezoid rule.
AmplitudeBoundReport fourier_amplitude_bound_check(std::span<const EnergyRecord> trajectory);

struct TimeAverageReport {
  std::vector<double> times;
  std::vector<double> means;
  /// Strictly decreasing mean at every sample in the final half.
  bool decreasing = false;
};

/// Running mean (1/t) int_0^t ||v|| over a series of (t, ||v||).
TimeAverageReport time_average_decay_check(std::span<const std::pair<double, double>> norms);
TimeAverageReport time_average_decay_check(std::span<const EnergyRecord> trajectory);

}  // namespace fchv
