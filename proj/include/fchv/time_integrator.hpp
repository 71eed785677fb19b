#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "fchv/field.hpp"
#include "fchv/field_ops.hpp"

namespace fchv {

enum class Model { ch_alpha, fractional_nse };

struct SolverParams {
  double nu = 1.0;
  double beta = 0.75;
  double alpha = 0.0;
  double dt = 1e-3;
  double t_end = 1.0;
  bool dealias = true;
  bool nonlinear = true;
  Model model = Model::ch_alpha;
  /// Accept beta outside [n/4, 1] with a warning instead of an error.
  bool allow_exploratory_beta = false;
  /// Blow-up is declared when E exceeds this multiple of E(0).
  double blowup_factor = 10.0;

  /// Throws ParameterError; returns warnings for accepted but unusual values.
  std::vector<std::string> validate(int dim) const;
  /// FNV-1a over the numeric fields, stable across platforms with IEEE doubles.
  std::uint64_t hash() const;
};

struct SimState {
  double t = 0.0;
  std::uint64_t step = 0;
  /// Spectral, dealiased, divergence free.
  ProjectedField v;
};

/// Filtered velocity u = filter(v, alpha), spectral.
Field filtered_velocity(const SimState& state, double alpha);

/// Dealias (when enabled), remove the mean and project an initial velocity.
SimState make_initial_state(const Field& v0, const SolverParams& params);

/// Integrating-factor RK4: the dissipation exp(-nu |k|^(2 beta) dt) is applied
/// exactly, the projected nonlinearity by classical RK4.
class Stepper {
 public:
  Stepper(GridPtr grid, SolverParams params);

  /// Advance by params().dt, or by `dt` when given.
  SimState step(const SimState& state) const;
  SimState step(const SimState& state, double dt) const;

  /// -P[N(v)] for the configured model (spectral in, spectral out).
  Field nonlinear(const Field& v_hat) const;

  const SolverParams& params() const noexcept { return params_; }
  const SpectralGrid& grid() const noexcept { return *grid_; }

 private:
  struct Factors {
    std::vector<double> half;
    std::vector<double> full;
  };
  const Factors& factors(double dt) const;

  GridPtr grid_;
  SolverParams params_;
  std::vector<double> symbol_;
  std::vector<double> helmholtz_;
  mutable std::map<double, Factors> cache_;
};

SimState step_ch_alpha(const SimState& state, const SolverParams& params);
SimState step_fractional_nse(const SimState& state, const SolverParams& params);

using Observer = std::function<void(const SimState&)>;

struct RunSummary {
  SimState final_state;
  std::uint64_t steps = 0;
  std::uint64_t observations = 0;
  double wall_seconds = 0.0;
};

/// Steps from initial.t to params.t_end. Observers see the initial state,
/// every state whose global step count is a multiple of `stride`, and the
/// final state. The last step is shortened to
/// land on t_end exactly.
RunSummary run(const SimState& initial, const SolverParams& params,
               const std::vector<Observer>& observers, std::uint64_t stride = 1);

/// c * dx / max|u|, u the filtered velocity; infinity for a zero field.
double cfl_time_step(const SimState& state, double alpha, double c = 0.5);

}  // namespace fchv
