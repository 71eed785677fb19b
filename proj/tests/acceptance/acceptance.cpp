// Prints one PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
// Usage: fchv_acceptance [output-dir] [criterion ids...]
#include <algorithm>
#include <array>
#include <cstdlib>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "fchv/checkpoint.hpp"
#include "fchv/diagnostics.hpp"
#include "fchv/experiments.hpp"
#include "fchv/field_ops.hpp"
#include "fchv/helmholtz.hpp"
#include "fchv/initial_data.hpp"
#include "fchv/oracle.hpp"
#include "fchv/spectral.hpp"
#include "fchv/time_integrator.hpp"
#include "test_support.hpp"

using namespace fchv;
using nlohmann::json;

namespace {

constexpr double pi = std::numbers::pi;

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[2048];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::filesystem::path g_out;
std::FILE* g_log = nullptr;

void emit(const std::string& line) {
  std::fputs(line.c_str(), stdout);
  std::fflush(stdout);
  if (g_log) {
    std::fputs(line.c_str(), g_log);
    std::fflush(g_log);
  }
}

std::string dir(const std::string& name) {
  const auto p = g_out / name;
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p.string();
}

const json* find_check(const json& report, const std::string& name) {
  for (const auto& c : report["checks"])
    if (c["name"] == name) return &c;
  return nullptr;
}

Verdict spectral_exactness() {
  double worst = 0.0;
  for (int dim : {2, 3}) {
    auto g = SpectralGrid::create(dim, dim == 2 ? 64 : 16, 2.0 * pi);
    const std::array<std::array<int, 3>, 4> modes{{{1, 0, 0}, {3, -4, 2}, {0, 7, -1}, {5, 5, 5}}};
    for (const auto& m : modes) {
      Field f = Field::scalar(g);
      double k2 = 0.0;
      for (int a = 0; a < dim; ++a) k2 += m[static_cast<std::size_t>(a)] * m[static_cast<std::size_t>(a)];
      for (std::size_t i = 0; i < g->physical_size(); ++i) {
        const auto idx = g->physical_index(i);
        double ph = 0.0;
        for (int a = 0; a < dim; ++a) ph += m[static_cast<std::size_t>(a)] * g->coordinate(idx[static_cast<std::size_t>(a)]);
        f.physical(0)[i] = std::sin(ph + 0.3);
      }
      for (double beta : {0.1, 0.5, 0.75, 1.0}) {
        const double factor = std::pow(k2, beta);
        const Field lf = to_physical(fractional_laplacian(f, beta));
        for (std::size_t i = 0; i < g->physical_size(); ++i)
          worst = std::max(worst, std::abs(lf.physical(0)[i] - factor * f.physical(0)[i]) / factor);
      }
    }
  }
  return {worst <= 1e-12, fmt("max rel err %.2e", worst)};
}

Verdict filter_identity() {
  auto g = SpectralGrid::create(2, 64, 2.0 * pi);
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Field v = band_random(g, 1000 + seed, 0.0, 30.0, 1.0);
    for (double a : {0.1, 1.0})
      for (int m = 0; m <= 2; ++m) worst = std::max(worst, filter_identity_residual(v, a, m));
  }
  return {worst <= 1e-12, fmt("max residual %.2e over 100 fields", worst)};
}

Verdict orthogonality() {
  auto g = SpectralGrid::create(2, 64, 2.0 * pi);
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Field u = dealias(band_random(g, 2000 + seed, 1.0, 21.0, 1.0));
    const Field v = dealias(band_random(g, 3000 + seed, 1.0, 21.0, 1.0));
    const double lhs = std::abs(inner_product(ch_nonlinear_term(u, v), u));
    const double nu = testing::l2(u);
    const double h1 = std::sqrt(sobolev_seminorm_sq(v, 0.0) + sobolev_seminorm_sq(v, 1.0));
    worst = std::max(worst, lhs / (nu * h1 * nu));
  }
  return {worst <= 1e-9, fmt("max normalized inner product %.2e", worst)};
}

struct EnergyLaw {
  double max_step_residual;
  double drift;
  double e0;
};

EnergyLaw energy_law_run(double dt) {
  auto g = SpectralGrid::create(2, 64, 2.0 * pi);
  SolverParams p;
  p.nu = 0.05;
  p.beta = 0.75;
  p.alpha = 0.1;
  p.dt = dt;
  p.t_end = 1.0;
  const SimState start = make_initial_state(band_random(g, 17, 1.0, 4.0, 1.0), p);
  std::vector<EnergyRecord> recs;
  run(start, p, {[&](const SimState& s) { recs.push_back(record_energy(s, p)); }});
  EnergyLaw law{0.0, 0.0, recs.front().E};
  for (std::size_t j = 1; j < recs.size(); ++j) {
    const double h = recs[j].t - recs[j - 1].t;
    const double r = recs[j].E - recs[j - 1].E + p.nu * h * (recs[j].D + recs[j - 1].D);
    law.max_step_residual = std::max(law.max_step_residual, std::abs(r));
    law.drift += r;
  }
  law.drift = std::abs(law.drift);
  return law;
}

Verdict energy_law() {
  const auto a = energy_law_run(1e-2);
  const auto b = energy_law_run(5e-3);
  const auto c = energy_law_run(2.5e-3);
  const double o1 = std::log2(a.max_step_residual / b.max_step_residual);
  const double o2 = std::log2(b.max_step_residual / c.max_step_residual);
  const double drift = c.drift / c.e0;
  return {o1 >= 2.0 && o2 >= 2.0 && drift <= 1e-6,
          fmt("per-step orders %.2f, %.2f; drift %.2e E(0) at dt=2.5e-3", o1, o2, drift)};
}

Verdict mild_form() {
  auto g = SpectralGrid::create(2, 32, 2.0 * pi);
  SolverParams p;
  p.nu = 1.0;
  p.beta = 0.75;
  p.alpha = 0.2;
  p.dt = 1e-3;
  p.t_end = 0.01;
  const SimState start = make_initial_state(band_random(g, 5, 1.0, 6.0, 1.0), p);
  const auto summary = run(start, p, {});
  const Field oracle = testing::PicardOracle(p).solve(start.v.field, p.t_end);
  const double rel = testing::l2(testing::axpy(-1.0, oracle, summary.final_state.v.field)) / testing::l2(oracle);
  const Field linear = apply_multiplier(start.v.field, Multiplier::heat(g, 2.0 * p.beta, p.nu * p.t_end));
  const double nonlinear = testing::l2(testing::axpy(-1.0, linear, oracle)) / testing::l2(oracle);
  return {rel <= 1e-6 && nonlinear > 1e3 * rel,
          fmt("relative L2 difference %.2e (nonlinear contribution %.2e)", rel, nonlinear)};
}

json g_decay;

Verdict decay_energy() {
  ExperimentConfig cfg = default_config("decay");
  cfg.output_dir = dir("decay");
  g_decay = run_experiment(cfg).json;
  const json* c = find_check(g_decay, "energy decay exponent");
  if (!c) return {false, "no energy fit in report"};
  const auto& d = (*c)["detail"];
  if (!d.contains("exponent")) return {false, d.dump()};
  const double e = d["exponent"], r2 = d["r_squared"];
  return {e >= -2.5 && e <= -1.5 && r2 >= 0.98 && g_decay.contains("caveat"),
          fmt("%s datum, exponent %.3f, r2 %.4f on [10, 80]", cfg.datum.kind.c_str(), e, r2)};
}

Verdict decay_gradient() {
  const json* c = find_check(g_decay, "grad^1 v decay exponent");
  if (!c) return {false, "no gradient fit in report"};
  const auto& d = (*c)["detail"];
  if (!d.contains("exponent")) return {false, d.dump()};
  const double e = d["exponent"], r2 = d["r_squared"];
  return {e >= -5.0 && e <= -3.0 && r2 >= 0.95, fmt("exponent %.3f, r2 %.4f", e, r2)};
}

void stream_bump_note() {
  ExperimentConfig cfg = default_config("decay");
  cfg.datum.kind = "stream-bump";
  cfg.output_dir = dir("decay_stream_bump");
  const auto r = run_experiment(cfg).json;
  const json* e = find_check(r, "energy decay exponent");
  const json* gr = find_check(r, "grad^1 v decay exponent");
  if (e && gr && (*e)["detail"].contains("exponent") && (*gr)["detail"].contains("exponent"))
    emit(fmt("INFO [6/7] Gaussian stream-function datum (vanishing transform at the origin): energy exponent %.3f, "
             "gradient exponent %.3f; faster than the bound, as expected\n",
             (*e)["detail"]["exponent"].get<double>(), (*gr)["detail"]["exponent"].get<double>()));
}

Verdict scaled_family() {
  ExperimentConfig cfg = default_config("scaled-family");
  cfg.output_dir = dir("scaled_family");
  const auto r = run_experiment(cfg).json;
  if (!r.value("passed", false)) return {false, r.contains("failure") ? r["failure"].dump() : r["checks"].dump()};
  std::string consts;
  for (const auto& m : r["members"])
    consts += fmt(" eps=%.3g:C=%.3g,t1/2=%.3g", m["epsilon"].get<double>(), m["fitted_constant"].get<double>(),
                  m["half_life"].is_null() ? INFINITY : m["half_life"].get<double>());
  return {true, fmt("fitted C %.4g;", r["fitted_C"].get<double>()) + consts};
}

Verdict alpha_sweep() {
  ExperimentConfig cfg = default_config("alpha-sweep");
  cfg.output_dir = dir("alpha_sweep");
  const auto r = run_experiment(cfg).json;
  if (r.contains("failure")) return {false, r["failure"].dump()};
  std::string dists;
  for (const auto& row : r["sweep"]) dists += fmt(" %.3g", row["distance"].get<double>());
  const double order = r["fitted_order"].is_null() ? NAN : r["fitted_order"].get<double>();
  return {r.value("passed", false),
          fmt("q=%.4g, order %.3f (bound %.3f), distances", r["exponents"]["q"].get<double>(), order,
              r["exponents"]["rate_bound"].get<double>()) + dists};
}

Verdict kernel_scaling() {
  double worst = 0.0;
  const std::array<double, 8> radii{0.0, 0.05, 0.3, 0.9, 1.7, 3.0, 5.5, 9.0};
  for (double g : {1.0, 1.5, 2.0})
    for (double t : {0.1, 0.5, 2.0, 8.0})
      for (double r : radii) {
        const double lhs = heat_kernel_profile({g, 2}, t, r);
        const double rhs = std::pow(t, -2.0 / g) * heat_kernel_profile({g, 2}, 1.0, std::pow(t, -1.0 / g) * r);
        worst = std::max(worst, std::abs(lhs - rhs));
      }
  return {worst <= 1e-10, fmt("max abs deviation %.2e", worst)};
}

Verdict kernel_slopes() {
  const double beta = 0.75;
  const HeatKernelSpec spec{2.0 * beta, 2};
  const std::array<double, 5> times{0.1, 0.3, 1.0, 3.0, 10.0};
  bool ok = true;
  double worst = 0.0;
  for (const auto& [k, a] : std::array<std::pair<int, double>, 3>{{{0, 0.0}, {1, 0.0}, {0, beta}}})
    for (double p : {1.0, 2.0, std::numeric_limits<double>::infinity()}) {
      const auto s = kernel_lp_norm_slope(spec, k, a, p, times);
      const double err = std::abs(s.slope - s.expected);
      const bool pass = s.expected == 0.0 ? err <= 0.02 : err <= 0.02 * std::abs(s.expected);
      if (s.expected != 0.0) worst = std::max(worst, err / std::abs(s.expected));
      ok = ok && pass;
    }
  return {ok, fmt("9 slopes, worst relative deviation %.2e", worst)};
}

Verdict closure() {
  const double beta = 0.75;
  const int n = 16384;
  const double length = 400.0, h = length / n;
  std::vector<double> samples(n);
  for (int i = 0; i < n; ++i) {
    const double x = (i - n / 2) * h;
    samples[static_cast<std::size_t>(i)] = std::exp(-x * x);
  }
  const auto spectral = fractional_laplacian_1d(samples, length, beta);
  const ScalarFunction f = [](std::span<const double> x) { return std::exp(-x[0] * x[0]); };
  double worst = 0.0;
  for (int off : {0, 20, 41, 63, 82, 123, 164}) {
    const double x = off * h;
    const double integral = integral_fractional_laplacian(f, 1, beta, std::array{x});
    const double mult = spectral[static_cast<std::size_t>(n / 2 + off)];
    worst = std::max(worst, std::abs(integral - mult) / std::abs(spectral[static_cast<std::size_t>(n / 2)]));
  }
  return {worst <= 1e-3, fmt("max rel err %.2e, C(1,%.2f)=%.10f", worst, beta, normalization_constant(1, beta))};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict determinism() {
  auto base = [](const std::string& name) {
    ExperimentConfig cfg = default_config("simulate");
    cfg.datum.seed = 1234;
    cfg.output_dir = dir(name);
    return cfg;
  };
  const auto a = base("det_a"), b = base("det_b");
  run_experiment(a);
  run_experiment(b);
  const bool same_csv = slurp(a.output_dir + "/energy.csv") == slurp(b.output_dir + "/energy.csv");

  auto first = base("det_first");
  first.params.t_end = 0.5 * a.params.t_end;
  run_experiment(first);
  auto resumed = base("det_resumed");
  resumed.resume = first.output_dir + "/final.bin";
  run_experiment(resumed);
  const auto whole = load_checkpoint(a.output_dir + "/final.bin");
  const auto split = load_checkpoint(resumed.output_dir + "/final.bin");
  const double diff = testing::max_abs_diff(whole.state.v.field, split.state.v.field) /
                      testing::max_abs(whole.state.v.field);
  return {same_csv && diff <= 1e-13, fmt("CSV %s, restart rel diff %.2e", same_csv ? "bitwise equal" : "DIFFERS", diff)};
}

}  // namespace

int main(int argc, char** argv) {
  g_out = argc > 1 ? argv[1] : "acceptance_out";
  std::filesystem::create_directories(g_out);
  g_log = std::fopen((g_out / "acceptance.log").c_str(), "w");

  struct Criterion {
    int id;
    const char* name;
    double budget;
    std::function<Verdict()> fn;
  };
  const std::vector<Criterion> criteria{
      {1, "spectral exactness of the fractional Laplacian", 1.0, spectral_exactness},
      {2, "Helmholtz filter energy identity", 10.0, filter_identity},
      {3, "nonlinear term orthogonality", 30.0, orthogonality},
      {4, "discrete energy law", 120.0, energy_law},
      {5, "stepper vs Picard mild-form oracle", 60.0, mild_form},
      {6, "algebraic energy decay", 900.0, decay_energy},
      {7, "gradient decay", 900.0, decay_gradient},
      {8, "scaled-family identities and lower bound", 600.0, scaled_family},
      {9, "alpha -> 0 convergence", 600.0, alpha_sweep},
      {10, "heat kernel self-similarity", 60.0, kernel_scaling},
      {11, "kernel Lp decay slopes", 120.0, kernel_slopes},
      {12, "integral vs multiplier fractional Laplacian", 60.0, closure},
      {13, "determinism and restart", 120.0, determinism},
  };

  std::vector<int> only;
  for (int i = 2; i < argc; ++i) only.push_back(std::atoi(argv[i]));

  int failures = 0;
  int ran = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    if (c.id == 7 && g_decay.is_null()) decay_energy();
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v{false, ""};
    try {
      v = c.fn();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_budget = c.id == 7 || secs <= c.budget;
    const bool pass = v.pass && in_budget;
    failures += pass ? 0 : 1;
    emit(fmt("%s [%d] %s: %s (%.2f s%s)\n", pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(), secs,
             in_budget ? "" : ", over budget"));
    if (c.id == 7) stream_bump_note();
  }
  emit(fmt("%d of %d criteria passed\n", ran - failures, ran));
  std::fclose(g_log);
  return failures == 0 ? 0 : 1;
}
