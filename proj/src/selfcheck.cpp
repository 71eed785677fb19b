#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>

#include "fchv/checkpoint.hpp"
#include "fchv/diagnostics.hpp"
#include "fchv/experiments.hpp"
#include "fchv/field_ops.hpp"
#include "fchv/helmholtz.hpp"
#include "fchv/initial_data.hpp"
#include "fchv/oracle.hpp"
#include "fchv/spectral.hpp"

namespace fchv {

using nlohmann::json;

namespace {

constexpr double pi = std::numbers::pi;

double closed_form_constant(int n, double beta) {
  using boost::math::tgamma;
  return beta * std::pow(4.0, beta) * tgamma(0.5 * n + beta) / (std::pow(pi, 0.5 * n) * tgamma(1.0 - beta));
}

double sphere_area(int n) { return 2.0 * std::pow(pi, 0.5 * n) / boost::math::tgamma(0.5 * n); }

Field single_mode(const GridPtr& grid, std::array<int, 3> m) {
  Field f = Field::scalar(grid);
  auto d = f.physical(0);
  for (std::size_t i = 0; i < grid->physical_size(); ++i) {
    const auto idx = grid->physical_index(i);
    double phase = 0.0;
    for (int a = 0; a < grid->dim(); ++a)
      phase += m[static_cast<std::size_t>(a)] * grid->fundamental() * grid->coordinate(idx[static_cast<std::size_t>(a)]);
    d[i] = std::cos(phase);
  }
  return f;
}

double max_abs_diff(const Field& a, const Field& b) {
  const Field pa = to_physical(a), pb = to_physical(b);
  double m = 0.0;
  for (int c = 0; c < pa.components(); ++c)
    for (std::size_t i = 0; i < pa.grid().physical_size(); ++i)
      m = std::max(m, std::abs(pa.physical(c)[i] - pb.physical(c)[i]));
  return m;
}

double max_abs(const Field& a) {
  const Field pa = to_physical(a);
  double m = 0.0;
  for (int c = 0; c < pa.components(); ++c)
    for (double x : pa.physical(c)) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

CheckList filter_suite(const ExperimentConfig& cfg) {
  CheckList checks;
  auto grid = SpectralGrid::create(cfg.grid.dim, cfg.grid.n, cfg.grid.length);
  const std::array<double, 2> alphas{cfg.params.alpha, 1.0};

  double worst_identity = 0.0;
  bool contractive = true;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Field v = band_random(grid, cfg.datum.seed + seed, 1.0, 12.0, 1.0);
    for (double a : alphas) {
      for (int m = 0; m <= 2; ++m) worst_identity = std::max(worst_identity, filter_identity_residual(v, a, m));
      contractive = contractive && sobolev_seminorm_sq(filter(v, a), 0.0) <= sobolev_seminorm_sq(v, 0.0);
    }
  }
  checks.add("filter energy identity m=0..2", worst_identity <= 1e-12, {{"max_residual", worst_identity}});
  checks.add("filter L2 contraction", contractive);
  checks.add("alpha=0 filter is the identity",
             max_abs_diff(filter(band_random(grid, cfg.datum.seed, 1.0, 8.0, 1.0), 0.0),
                          band_random(grid, cfg.datum.seed, 1.0, 8.0, 1.0)) == 0.0);

  const Field smooth = stream_bump(grid, 1.0, 0.1 * grid->length());
  std::vector<double> sweep = cfg.alphas;
  std::sort(sweep.begin(), sweep.end(), std::greater<>());
  const auto curve = filter_convergence_curve(smooth, sweep, 2.0);
  bool monotone = true;
  json pts = json::array();
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    pts.push_back({curve.points[i].alpha, curve.points[i].distance});
    if (i > 0 && curve.points[i].distance > curve.points[i - 1].distance) monotone = false;
  }
  checks.add("filter distance monotone in alpha", monotone, {{"points", pts}});

  const std::array<double, 4> small{0.04, 0.02, 0.01, 0.005};
  const auto fine = filter_convergence_curve(smooth, small, 2.0);
  checks.add("smooth-datum filter slope near 2", std::abs(fine.slope - 2.0) <= 0.1, {{"slope", fine.slope}});

  ExperimentConfig exc = cfg;
  if (!exc.q_exponent && !exc.l_exponent) exc.l_exponent = 2.0;
  const auto ex = sweep_exponents(exc);
  const Field rough = band_random(grid, cfg.datum.seed, 1.0, static_cast<double>(cfg.grid.n) / 3.0, 1.0);
  const auto rate = filter_convergence_curve(rough, sweep, ex.q);
  const double bound = 0.5 * cfg.params.beta - ex.gamma;
  checks.add("filter rate at least beta/2 - gamma", rate.slope >= bound,
             {{"slope", rate.slope}, {"bound", bound}, {"q", ex.q}});

  const auto mon = filter_smoothing_monitor(rough, sweep, ex.p, ex.q);
  checks.add("smoothing monitor contraction", mon.all_contractive, {{"max_constant", mon.max_constant}, {"gamma1", mon.gamma1}});
  return checks;
}

CheckList kernel_suite(const ExperimentConfig& cfg) {
  CheckList checks;
  const int n = 2;
  const std::array<double, 7> radii{0.0, 0.1, 0.5, 1.0, 2.0, 3.5, 6.0};

  for (double t : cfg.kernel_times) {
    double worst = 0.0;
    const double peak = 1.0 / (4.0 * pi * t);
    for (double r : radii)
      worst = std::max(worst, std::abs(heat_kernel_profile({2.0, n}, t, r) - peak * std::exp(-r * r / (4.0 * t))));
    checks.add("Gaussian kernel t=" + short_number(t), worst <= 1e-10 * peak, {{"max_abs_error", worst}});
  }

  for (double g : cfg.kernel_gammas) {
    double worst_scale = 0.0;
    double worst_origin = 0.0;
    for (double t : cfg.kernel_times) {
      const double f = std::pow(t, -1.0 / g);
      for (double r : radii) {
        const double lhs = heat_kernel_profile({g, n}, t, r);
        const double rhs = std::pow(t, -n / g) * heat_kernel_profile({g, n}, 1.0, f * r);
        worst_scale = std::max(worst_scale, std::abs(lhs - rhs));
      }
      const double origin = sphere_area(n) * boost::math::tgamma(n / g) / (g * std::pow(2.0 * pi, n) * std::pow(t, n / g));
      worst_origin = std::max(worst_origin, std::abs(heat_kernel_profile({g, n}, t, 0.0) / origin - 1.0));
    }
    checks.add("kernel scaling gamma0=" + short_number(g), worst_scale <= 1e-10, {{"max_abs_deviation", worst_scale}});
    checks.add("kernel value at origin gamma0=" + short_number(g), worst_origin <= 1e-10,
               {{"max_rel_error", worst_origin}});
  }

  const double beta = cfg.params.beta;
  const HeatKernelSpec spec{2.0 * beta, n};
  const std::array<double, 5> times{0.1, 0.3, 1.0, 3.0, 10.0};
  const std::array<std::pair<int, double>, 3> orders{{{0, 0.0}, {1, 0.0}, {0, beta}}};
  const std::array<double, 3> ps{1.0, 2.0, std::numeric_limits<double>::infinity()};
  for (const auto& [k, a] : orders) {
    for (double p : ps) {
      const auto s = kernel_lp_norm_slope(spec, k, a, p, times);
      const double tol = s.expected == 0.0 ? 0.02 : 0.02 * std::abs(s.expected);
      checks.add("kernel slope k=" + std::to_string(k) + " a=" + short_number(a) + " p=" + short_number(p),
                 std::abs(s.slope - s.expected) <= tol, {{"slope", s.slope}, {"expected", s.expected}, {"tolerance", tol}});
    }
  }

  for (int dim = 1; dim <= 3; ++dim) {
    const double c = normalization_constant(dim, beta);
    const double exact = closed_form_constant(dim, beta);
    checks.add("normalization constant n=" + std::to_string(dim), std::abs(c / exact - 1.0) <= 1e-9,
               {{"quadrature", c}, {"closed_form", exact}});
  }

  // Integral and multiplier forms on a Gaussian; the box is wide enough that
  // periodic images are negligible.
  {
    const int pts = 16384;
    const double length = 400.0;
    const double h = length / pts;
    std::vector<double> samples(pts);
    for (int i = 0; i < pts; ++i) {
      const double x = (i - pts / 2) * h;
      samples[static_cast<std::size_t>(i)] = std::exp(-x * x);
    }
    const auto spectral = fractional_laplacian_1d(samples, length, beta);
    const ScalarFunction gauss = [](std::span<const double> x) { return std::exp(-x[0] * x[0]); };
    double err = 0.0, scale = 0.0;
    for (int off : {0, 40, 80, 120, 160, 240}) {
      const double x = off * h;
      const double integral = integral_fractional_laplacian(gauss, 1, beta, std::array{x});
      const double multiplier = spectral[static_cast<std::size_t>(pts / 2 + off)];
      err = std::max(err, std::abs(integral - multiplier));
      scale = std::max(scale, std::abs(multiplier));
    }
    checks.add("integral and multiplier fractional Laplacian agree", err <= 1e-3 * scale,
               {{"max_abs_difference", err}, {"scale", scale}});
  }

  {
    auto grid = SpectralGrid::create(2, 32, 2.0 * pi);
    const Field v = band_random(grid, cfg.datum.seed, 1.0, 8.0, 1.0);
    const double g0 = 2.0 * beta;
    const Field twice = apply_multiplier(apply_multiplier(v, Multiplier::heat(grid, g0, 0.3)), Multiplier::heat(grid, g0, 0.2));
    const Field once = apply_multiplier(v, Multiplier::heat(grid, g0, 0.5));
    const double d = max_abs_diff(twice, once);
    checks.add("heat semigroup", d <= 1e-13 * max_abs(v), {{"max_abs_difference", d}});
  }
  return checks;
}

CheckList selftest_suite(const ExperimentConfig& cfg) {
  CheckList checks;
  auto grid = SpectralGrid::create(cfg.grid.dim, cfg.grid.n, cfg.grid.length);
  const double beta = cfg.params.beta;

  {
    std::array<int, 3> m{3, -2, 1};
    const Field f = single_mode(grid, m);
    double k2 = 0.0;
    for (int a = 0; a < grid->dim(); ++a) k2 += std::pow(m[static_cast<std::size_t>(a)] * grid->fundamental(), 2);
    const Field lf = fractional_laplacian(f, beta);
    const Field pf = to_physical(lf);
    double err = 0.0;
    for (std::size_t i = 0; i < grid->physical_size(); ++i)
      err = std::max(err, std::abs(pf.physical(0)[i] - std::pow(k2, beta) * f.physical(0)[i]));
    checks.add("single-mode fractional Laplacian", err <= 1e-12 * std::pow(k2, beta), {{"max_abs_error", err}});
  }

  const Field v = band_random(grid, cfg.datum.seed, 1.0, static_cast<double>(cfg.grid.n) / 4.0, 1.0);
  const Field w = band_random(grid, cfg.datum.seed + 1, 1.0, static_cast<double>(cfg.grid.n) / 4.0, 1.0);
  checks.add("projection certificate", leray_project(v).divergence_free && divergence_certificate(v));
  checks.add("filter identity", filter_identity_residual(v, 0.3, 1) <= 1e-12);

  {
    const Field u = filter(w, 0.3);
    const double lhs = std::abs(inner_product(to_physical(ch_nonlinear_term(u, v)), u));
    const double scale = std::sqrt(sobolev_seminorm_sq(u, 0.0)) * std::sqrt(sobolev_seminorm_sq(u, 0.0)) *
                         std::sqrt(sobolev_seminorm_sq(v, 0.0) + sobolev_seminorm_sq(v, 1.0));
    checks.add("nonlinear term orthogonal to u", lhs <= 1e-9 * scale, {{"ratio", lhs / scale}});
    const auto r = symmetrized_identity_residual(u, v);
    checks.add("symmetrized gradient identity", r.relative <= 1e-10, {{"relative", r.relative}});
  }

  SolverParams p = cfg.params;
  p.alpha = 0.2;
  p.dt = 5e-3;
  p.t_end = 0.05;
  const SimState start = make_initial_state(v, p);
  std::vector<double> energies;
  const auto summary = run(start, p, {[&](const SimState& s) { energies.push_back(record_energy(s, p).E); }}, 1);
  bool monotone = true;
  for (std::size_t i = 1; i < energies.size(); ++i)
    monotone = monotone && energies[i] <= energies[i - 1] + 1e-12 * energies.front();
  checks.add("energy nonincreasing over a short run", monotone);
  checks.add("stepped state divergence free", summary.final_state.v.divergence_free);

  const auto path = std::filesystem::path(cfg.output_dir) / "selftest_checkpoint.bin";
  std::filesystem::create_directories(cfg.output_dir);
  save_checkpoint(summary.final_state, p, path.string());
  const auto cp = load_checkpoint(path.string(), grid);
  std::filesystem::remove(path);
  bool same = cp.state.t == summary.final_state.t;
  for (int c = 0; c < grid->dim(); ++c) {
    const auto a = cp.state.v.field.spectral(c);
    const auto b = summary.final_state.v.field.spectral(c);
    same = same && std::equal(a.begin(), a.end(), b.begin());
  }
  checks.add("checkpoint round trip bitwise", same);
  return checks;
}

}  // namespace fchv
