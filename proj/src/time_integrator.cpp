#include "fchv/time_integrator.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <limits>

#include "fchv/error.hpp"
#include "fchv/helmholtz.hpp"
#include "fchv/kernels.hpp"
#include "fchv/spectral.hpp"

namespace fchv {

std::vector<std::string> SolverParams::validate(int dim) const {
  std::vector<std::string> warnings;
  if (!(nu > 0.0) || !std::isfinite(nu)) throw ParameterError("nu must be positive");
  if (!(beta > 0.0 && beta <= 1.0)) throw ParameterError("beta must lie in (0, 1]");
  const double lower = dim / 4.0;
  if (beta < lower) {
    const std::string msg = "beta=" + std::to_string(beta) + " is below n/4=" + std::to_string(lower);
    if (!allow_exploratory_beta) throw ParameterError(msg + " (set allow_exploratory_beta to run anyway)");
    warnings.push_back(msg + ", running in exploratory mode");
  }
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ParameterError("alpha must be >= 0");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("dt must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ParameterError("t_end must be >= 0");
  if (t_end > 0.0 && dt > t_end) throw ParameterError("dt must not exceed t_end");
  if (!(blowup_factor > 1.0)) throw ParameterError("blowup_factor must exceed 1");
  return warnings;
}

std::uint64_t SolverParams::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 1099511628211ULL;
    }
  };
  for (double x : {nu, beta, alpha, dt, t_end, blowup_factor}) {
    std::uint64_t bits;
    std::memcpy(&bits, &x, sizeof bits);
    unsigned char le[8];
    for (int i = 0; i < 8; ++i) le[i] = static_cast<unsigned char>(bits >> (8 * i));
    mix(le, 8);
  }
  const unsigned char flags[4] = {static_cast<unsigned char>(dealias), static_cast<unsigned char>(nonlinear),
                                  static_cast<unsigned char>(model), static_cast<unsigned char>(allow_exploratory_beta)};
  mix(flags, 4);
  return h;
}

Field filtered_velocity(const SimState& state, double alpha) {
  return filter(to_spectral(state.v.field), alpha);
}

SimState make_initial_state(const Field& v0, const SolverParams& params) {
  require_vector(v0, "make_initial_state");
  Field v = to_spectral(v0);
  remove_mean(v);
  if (params.dealias) v = dealias(v);
  return SimState{0.0, 0, leray_project(v)};
}

Stepper::Stepper(GridPtr grid, SolverParams params)
    : grid_(std::move(grid)), params_(params) {
  const auto k2 = grid_->k_squared();
  symbol_.resize(k2.size());
  helmholtz_.resize(k2.size());
  const double a2 = params_.alpha * params_.alpha;
  for (std::size_t s = 0; s < k2.size(); ++s) {
    symbol_[s] = k2[s] == 0.0 ? 0.0 : params_.nu * std::pow(k2[s], params_.beta);
    helmholtz_[s] = 1.0 / (1.0 + a2 * k2[s]);
  }
}

const Stepper::Factors& Stepper::factors(double dt) const {
  auto it = cache_.find(dt);
  if (it != cache_.end()) return it->second;
  if (cache_.size() > 4) cache_.clear();
  Factors f;
  f.half.resize(symbol_.size());
  f.full.resize(symbol_.size());
  for (std::size_t s = 0; s < symbol_.size(); ++s) {
    f.half[s] = std::exp(-0.5 * dt * symbol_[s]);
    f.full[s] = std::exp(-dt * symbol_[s]);
  }
  return cache_.emplace(dt, std::move(f)).first->second;
}

Field Stepper::nonlinear(const Field& v_hat) const {
  if (!params_.nonlinear) return v_hat.zeros_like();
  Field f = [&] {
    if (params_.model == Model::fractional_nse) return nse_nonlinear_term(v_hat, params_.dealias);
    Field u = v_hat;
    for (int c = 0; c < u.components(); ++c) kernels::scale(*grid_, u.spectral(c), helmholtz_);
    return ch_rotational_term(u, v_hat, params_.dealias);
  }();
  std::vector<kernels::ComplexSpan> spans;
  for (int c = 0; c < f.components(); ++c) spans.push_back(f.spectral(c));
  kernels::leray_project(*grid_, spans);
  for (auto& sp : spans)
    for (auto& x : sp) x = -x;
  return f;
}

SimState Stepper::step(const SimState& state) const { return step(state, params_.dt); }

SimState Stepper::step(const SimState& state, double dt) const {
  const Factors& ef = factors(dt);
  const auto& e1 = ef.half;
  const auto& e2 = ef.full;
  const Field& v = state.v.field;
  if (!v.is_spectral()) throw ContractError("Stepper::step: state must be spectral");
  const int nc = v.components();
  const auto size = static_cast<std::ptrdiff_t>(grid_->spectral_size());

  const Field k1 = nonlinear(v);
  Field a = v.zeros_like();
  for (int c = 0; c < nc; ++c) {
    const auto vv = v.spectral(c);
    const auto kk = k1.spectral(c);
    auto out = a.spectral(c);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < size; ++ii) {
      const auto s = static_cast<std::size_t>(ii);
      out[s] = e1[s] * (vv[s] + 0.5 * dt * kk[s]);
    }
  }
  const Field k2 = nonlinear(a);
  for (int c = 0; c < nc; ++c) {
    const auto vv = v.spectral(c);
    const auto kk = k2.spectral(c);
    auto out = a.spectral(c);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < size; ++ii) {
      const auto s = static_cast<std::size_t>(ii);
      out[s] = e1[s] * vv[s] + 0.5 * dt * kk[s];
    }
  }
  const Field k3 = nonlinear(a);
  for (int c = 0; c < nc; ++c) {
    const auto vv = v.spectral(c);
    const auto kk = k3.spectral(c);
    auto out = a.spectral(c);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < size; ++ii) {
      const auto s = static_cast<std::size_t>(ii);
      out[s] = e2[s] * vv[s] + dt * e1[s] * kk[s];
    }
  }
  const Field k4 = nonlinear(a);

  Field next = v.zeros_like();
  bool finite = true;
  for (int c = 0; c < nc; ++c) {
    const auto vv = v.spectral(c);
    const auto q1 = k1.spectral(c);
    const auto q2 = k2.spectral(c);
    const auto q3 = k3.spectral(c);
    const auto q4 = k4.spectral(c);
    auto out = next.spectral(c);
#pragma omp parallel for schedule(static) reduction(&& : finite)
    for (std::ptrdiff_t ii = 0; ii < size; ++ii) {
      const auto s = static_cast<std::size_t>(ii);
      out[s] = e2[s] * vv[s] + (dt / 6.0) * (e2[s] * q1[s] + 2.0 * e1[s] * (q2[s] + q3[s]) + q4[s]);
      finite = finite && std::isfinite(out[s].real()) && std::isfinite(out[s].imag());
    }
  }
  if (!finite) throw BlowUpError("non-finite spectral coefficient", state.t + dt);

  return SimState{state.t + dt, state.step + 1, leray_project(next)};
}

namespace {

SimState step_with_model(const SimState& state, SolverParams params, Model model) {
  params.model = model;
  return Stepper(state.v.field.grid_ptr(), params).step(state);
}

}  // namespace

SimState step_ch_alpha(const SimState& state, const SolverParams& params) {
  return step_with_model(state, params, Model::ch_alpha);
}

SimState step_fractional_nse(const SimState& state, const SolverParams& params) {
  return step_with_model(state, params, Model::fractional_nse);
}

RunSummary run(const SimState& initial, const SolverParams& params,
               const std::vector<Observer>& observers, std::uint64_t stride) {
  const auto start = std::chrono::steady_clock::now();
  const auto& grid = initial.v.field.grid();
  params.validate(grid.dim());
  if (stride == 0) stride = 1;

  const Stepper stepper(initial.v.field.grid_ptr(), params);
  const auto helm = Multiplier::helmholtz_inverse(initial.v.field.grid_ptr(), params.alpha);
  auto energy = [&](const SimState& s) {
    std::vector<kernels::ConstComplexSpan> spans;
    for (int c = 0; c < s.v.field.components(); ++c) spans.push_back(s.v.field.spectral(c));
    return kernels::weighted_energy(grid, spans, helm.table());
  };

  RunSummary summary{initial};
  auto notify = [&](const SimState& s) {
    for (const auto& obs : observers) obs(s);
    ++summary.observations;
  };
  notify(initial);

  const double t0 = initial.t;
  const double span = params.t_end - t0;
  if (span > 0.0) {
    const double e0 = energy(initial);
    const auto nsteps = static_cast<std::uint64_t>(std::ceil(span / params.dt - 1e-9));
    SimState& state = summary.final_state;
    for (std::uint64_t j = 1; j <= nsteps; ++j) {
      const bool last = j == nsteps;
      const double target = last ? params.t_end : t0 + static_cast<double>(j) * params.dt;
      state = stepper.step(state, last ? target - state.t : params.dt);
      state.t = target;
      ++summary.steps;
      const double e = energy(state);
      if (!std::isfinite(e) || (e0 > 0.0 && e > params.blowup_factor * e0))
        throw BlowUpError("energy exceeded " + std::to_string(params.blowup_factor) + " x E(0)", state.t);
      if (state.step % stride == 0 || last) notify(state);
    }
  }
  summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return summary;
}

double cfl_time_step(const SimState& state, double alpha, double c) {
  const Field u = to_physical(filtered_velocity(state, alpha));
  double m2 = 0.0;
  for (std::size_t i = 0; i < u.grid().physical_size(); ++i) {
    double s = 0.0;
    for (int k = 0; k < u.components(); ++k) s += u.physical(k)[i] * u.physical(k)[i];
    m2 = std::max(m2, s);
  }
  if (m2 == 0.0) return std::numeric_limits<double>::infinity();
  return c * u.grid().spacing() / std::sqrt(m2);
}

}  // namespace fchv
