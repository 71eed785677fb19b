#include "fchv/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>

#include "fchv/checkpoint.hpp"
#include "fchv/diagnostics.hpp"
#include "fchv/error.hpp"
#include "fchv/helmholtz.hpp"
#include "fchv/initial_data.hpp"
#include "fchv/spectral.hpp"

namespace fchv {

using nlohmann::json;

void CheckList::add(const std::string& name, bool passed, nlohmann::json detail) {
  entries_.push_back({{"name", name}, {"passed", passed}, {"detail", std::move(detail)}});
  passed_ = passed_ && passed;
}

void CheckList::info(const std::string& name, nlohmann::json detail) {
  entries_.push_back({{"name", name}, {"informational", true}, {"detail", std::move(detail)}});
}

void CheckList::merge(const CheckList& other) {
  for (const auto& e : other.entries_) entries_.push_back(e);
  passed_ = passed_ && other.passed_;
}

std::string short_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

int exit_code(Outcome outcome) {
  switch (outcome) {
    case Outcome::pass:
      return 0;
    case Outcome::fail:
      return 1;
    case Outcome::blow_up:
      return 3;
  }
  return 1;
}

namespace {

constexpr double infinity = std::numeric_limits<double>::infinity();

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::filesystem::path output_path(const ExperimentConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.output_dir);
  return std::filesystem::path(cfg.output_dir) / name;
}

json base_report(const ExperimentConfig& cfg) {
  json j;
  j["scenario"] = cfg.scenario;
  j["version"] = FCHV_VERSION;
  j["config"] = to_json(cfg);
  const double dx = cfg.grid.length / cfg.grid.n;
  j["grid"] = {{"dim", cfg.grid.dim},
               {"n", cfg.grid.n},
               {"length", cfg.grid.length},
               {"spacing", dx},
               {"lowest_wavenumber", 2.0 * std::numbers::pi / cfg.grid.length}};
  return j;
}

Report finish(json j, const CheckList& checks) {
  j["checks"] = checks.json();
  j["passed"] = checks.passed();
  return {std::move(j), checks.passed() ? Outcome::pass : Outcome::fail};
}

class EnergyCsv {
 public:
  explicit EnergyCsv(const std::filesystem::path& path) : out_(path) {
    if (!out_) throw Error("cannot open " + path.string());
    out_ << energy_csv_header() << '\n';
  }
  void write(const EnergyRecord& r) { out_ << energy_csv_row(r) << '\n'; }

 private:
  std::ofstream out_;
};

SolverParams resolved_params(const ExperimentConfig& cfg, const SimState& initial) {
  SolverParams p = cfg.params;
  if (cfg.dt_auto) {
    const double dt = cfl_time_step(initial, p.alpha, cfg.cfl);
    p.dt = std::isfinite(dt) ? std::min(dt, p.t_end > 0.0 ? p.t_end : dt) : (p.t_end > 0.0 ? p.t_end : 1.0);
  }
  return p;
}

bool energy_monotone(std::span<const EnergyRecord> recs) {
  if (recs.empty()) return true;
  const double slack = 1e-12 * recs.front().E;
  for (std::size_t i = 1; i < recs.size(); ++i)
    if (recs[i].E > recs[i - 1].E + slack) return false;
  return true;
}

json fit_json(const DecayFit& f, double theory) {
  return {{"t_lo", f.t_lo},          {"t_hi", f.t_hi},           {"exponent", f.exponent},
          {"intercept", f.intercept}, {"r_squared", f.r_squared}, {"samples", f.samples},
          {"algebraic", f.algebraic}, {"theory", theory}};
}

}  // namespace

Field make_datum(const ExperimentConfig& cfg, const GridPtr& grid) {
  const auto& d = cfg.datum;
  if (d.kind == "stream-bump") return stream_bump(grid, d.amplitude, d.sigma);
  if (d.kind == "projected-bump") return projected_bump(grid, d.amplitude, d.sigma);
  if (d.kind == "band-random") return band_random(grid, d.seed, d.band_lo, d.band_hi, d.amplitude);
  if (d.kind == "taylor-green") return taylor_green(grid, d.amplitude);
  if (d.kind == "scaled")
    return unfilter(scaled_stream_bump(grid, d.amplitude, d.sigma, d.epsilon), cfg.params.alpha);
  throw ConfigError("unknown datum '" + d.kind + "'");
}

Report run_simulate(const ExperimentConfig& cfg) {
  auto grid = SpectralGrid::create(cfg.grid.dim, cfg.grid.n, cfg.grid.length);
  std::optional<SimState> start;
  json j = base_report(cfg);
  if (!cfg.resume.empty()) {
    auto cp = load_checkpoint(cfg.resume, grid);
    start.emplace(std::move(cp.state));
    j["resumed_from"] = {{"path", cfg.resume}, {"t", start->t}};
  } else {
    start.emplace(make_initial_state(make_datum(cfg, grid), cfg.params));
  }
  SolverParams params = resolved_params(cfg, *start);
  if (!cfg.resume.empty()) start->step = static_cast<std::uint64_t>(std::llround(start->t / params.dt));
  j["dt"] = params.dt;
  j["params_hash"] = params.hash();

  EnergyCsv csv(output_path(cfg, "energy.csv"));
  std::vector<EnergyRecord> records;
  const std::uint64_t every = cfg.checkpoint_every;
  const Observer obs = [&](const SimState& s) {
    if (s.step % cfg.sample_stride == 0) {
      records.push_back(record_energy(s, params));
      csv.write(records.back());
    }
    if (every > 0 && s.step > 0 && s.step % every == 0)
      save_checkpoint(s, params, output_path(cfg, "checkpoint_" + std::to_string(s.step) + ".bin").string());
  };
  const std::uint64_t stride = every > 0 ? std::gcd(cfg.sample_stride, every) : cfg.sample_stride;
  const auto summary = run(*start, params, {obs}, stride);
  if (records.empty() || records.back().t != summary.final_state.t) {
    records.push_back(record_energy(summary.final_state, params));
    csv.write(records.back());
  }
  save_checkpoint(summary.final_state, params, output_path(cfg, "final.bin").string());

  CheckList checks;
  checks.add("energy nonincreasing", energy_monotone(records));
  checks.add("divergence free", summary.final_state.v.divergence_free);
  j["steps"] = summary.steps;
  j["wall_seconds"] = summary.wall_seconds;
  j["final"] = {{"t", summary.final_state.t}, {"E", records.back().E}, {"D", records.back().D}};
  return finish(std::move(j), checks);
}

Report run_decay_experiment(const ExperimentConfig& cfg) {
  auto grid = SpectralGrid::create(cfg.grid.dim, cfg.grid.n, cfg.grid.length);
  const SimState start = make_initial_state(make_datum(cfg, grid), cfg.params);
  const SolverParams params = resolved_params(cfg, start);
  const int order = std::max(1, cfg.gradient_order);
  json j = base_report(cfg);
  j["dt"] = params.dt;

  EnergyCsv csv(output_path(cfg, "energy.csv"));
  std::ofstream grad_csv(output_path(cfg, "gradients.csv"));
  grad_csv << "t";
  for (int m = 1; m <= order; ++m) grad_csv << ",grad" << m << "_v_l2";
  grad_csv << '\n';
  grad_csv.precision(17);

  std::vector<EnergyRecord> records;
  std::vector<std::vector<std::pair<double, double>>> grads(static_cast<std::size_t>(order));
  const Observer obs = [&](const SimState& s) {
    records.push_back(record_energy(s, params));
    csv.write(records.back());
    grad_csv << s.t;
    for (int m = 1; m <= order; ++m) {
      const double g = m == 1 ? records.back().gradv_l2 : sobolev_seminorm_sq(s.v.field, m);
      grads[static_cast<std::size_t>(m - 1)].emplace_back(s.t, g);
      grad_csv << ',' << g;
    }
    grad_csv << '\n';
  };
  const auto summary = run(start, params, {obs}, cfg.sample_stride);
  j["steps"] = summary.steps;
  j["wall_seconds"] = summary.wall_seconds;

  DecayWindow window = default_decay_window(0.0, params.t_end);
  if (std::isfinite(cfg.fit_t_lo)) window.t_lo = cfg.fit_t_lo;
  if (std::isfinite(cfg.fit_t_hi)) window.t_hi = cfg.fit_t_hi;
  const double n = cfg.grid.dim;
  const double beta = params.beta;
  const double base_rate = -n / (2.0 * beta);
  j["fit_window"] = {{"t_lo", window.t_lo}, {"t_hi", window.t_hi}, {"sample_stride", cfg.sample_stride}};
  j["caveat"] =
      "periodic box of side L: wavenumbers below 2*pi/L are absent, so the algebraic regime is transient "
      "and late-time decay turns exponential; exponents are windowed fits";

  // The rates are upper bounds; a datum whose transform vanishes at the
  // origin decays faster, so only the projected bump is held to a band.
  const bool sharp = cfg.datum.kind == "projected-bump";
  const bool gradient_only = cfg.scenario == "gradient-decay";
  CheckList checks;
  auto assess = [&](const std::string& name, std::span<const std::pair<double, double>> series, double theory,
                    double min_r2, bool asserted) {
    try {
      const DecayFit f = fit_decay(series, window);
      json d = fit_json(f, theory);
      const double tol = 0.25 * std::abs(theory);
      const bool ok = (sharp ? std::abs(f.exponent - theory) <= tol : f.exponent <= theory + tol) &&
                      f.r_squared >= min_r2;
      d["tolerance"] = tol;
      d["min_r_squared"] = min_r2;
      d["mode"] = sharp ? "two-sided" : "one-sided";
      if (asserted)
        checks.add(name, ok, d);
      else
        checks.info(name, d);
    } catch (const FitError& e) {
      if (asserted)
        checks.add(name, false, {{"error", e.what()}});
      else
        checks.info(name, {{"error", e.what()}});
    }
  };
  std::vector<std::pair<double, double>> e_series, v_series;
  for (const auto& r : records) {
    e_series.emplace_back(r.t, r.E);
    v_series.emplace_back(r.t, r.v_l2);
  }
  assess("energy decay exponent", e_series, base_rate, algebraic_threshold, !gradient_only);
  assess("velocity L2 decay exponent", v_series, base_rate, algebraic_threshold, false);
  for (int m = 1; m <= order; ++m)
    assess("grad^" + std::to_string(m) + " v decay exponent", grads[static_cast<std::size_t>(m - 1)],
           -m / beta + base_rate, 0.95, m == 1);

  checks.add("energy nonincreasing", energy_monotone(records));
  const auto amp = fourier_amplitude_bound_check(records);
  checks.add("Fourier amplitude ratio bounded", amp.bounded,
             {{"max_ratio", amp.max_ratio}, {"first_half_max", amp.first_half_max},
              {"second_half_max", amp.second_half_max}});
  const auto avg = time_average_decay_check(records);
  checks.add("time-averaged norm decreasing", avg.decreasing,
             {{"final_mean", avg.means.empty() ? json(nullptr) : json(avg.means.back())}});
  return finish(std::move(j), checks);
}

Report run_scaled_family(const ExperimentConfig& cfg) {
  auto grid = SpectralGrid::create(cfg.grid.dim, cfg.grid.n, cfg.grid.length);
  json j = base_report(cfg);
  CheckList checks;
  const double alpha = cfg.params.alpha;

  struct Member {
    double eps;
    double u_l2, grad_u, grad2_u, grad_v0_sq;
    std::vector<EnergyRecord> records;
    double half_life = infinity;
  };
  std::vector<Member> members;

  for (double eps : cfg.epsilons) {
    const Field u0 = to_spectral(scaled_stream_bump(grid, cfg.datum.amplitude, cfg.datum.sigma, eps));
    // Resolution: spectral tail beyond the dealiasing cut and mass near the box edge.
    const auto keep = grid->dealias_mask();
    Field tail = u0;
    for (int c = 0; c < tail.components(); ++c)
      for (std::size_t s = 0; s < grid->spectral_size(); ++s)
        if (keep[s]) tail.spectral(c)[s] = Complex{};
    const double total = sobolev_seminorm_sq(u0, 0.0);
    const double tail_frac = sobolev_seminorm_sq(tail, 0.0) / total;
    const Field up = to_physical(u0);
    double edge = 0.0;
    for (std::size_t i = 0; i < grid->physical_size(); ++i) {
      const auto idx = grid->physical_index(i);
      bool outer = false;
      for (int a = 0; a < grid->dim(); ++a)
        outer = outer || std::abs(grid->coordinate(idx[static_cast<std::size_t>(a)])) > 0.4 * grid->length();
      if (!outer) continue;
      for (int c = 0; c < up.components(); ++c) edge += up.physical(c)[i] * up.physical(c)[i];
    }
    const double edge_frac = edge * grid->cell_volume() / total;
    if (tail_frac > 1e-12 || edge_frac > 1e-12)
      throw ResolutionError("scaled member eps=" + short_number(eps) + " is under-resolved (tail " +
                            short_number(tail_frac) + ", edge mass " + short_number(edge_frac) + ")");

    Member m{eps, std::sqrt(total), std::sqrt(sobolev_seminorm_sq(u0, 1.0)), std::sqrt(sobolev_seminorm_sq(u0, 2.0)),
             sobolev_seminorm_sq(unfilter(u0, alpha), 1.0), {}, infinity};

    SolverParams p = cfg.params;
    p.t_end = cfg.family_horizon;
    const SimState start = make_initial_state(unfilter(u0, alpha), p);
    run(start, p, {[&](const SimState& s) { m.records.push_back(record_energy(s, p)); }}, 1);
    const double e0 = m.records.front().E;
    for (std::size_t i = 1; i < m.records.size(); ++i) {
      const auto& a = m.records[i - 1];
      const auto& b = m.records[i];
      if (b.E <= 0.5 * e0) {
        m.half_life = a.t + (b.t - a.t) * (a.E - 0.5 * e0) / (a.E - b.E);
        break;
      }
    }
    EnergyCsv csv(output_path(cfg, "energy_eps_" + short_number(eps) + ".csv"));
    for (std::size_t i = 0; i < m.records.size(); i += cfg.sample_stride) csv.write(m.records[i]);
    members.push_back(std::move(m));
  }

  const Member* base = nullptr;
  for (const auto& m : members)
    if (m.eps == 1.0) base = &m;
  if (!base) base = &members.front();
  const double base_eps = base->eps;

  // C-hat bounds the loss rate 2 nu D / eps^2 over every member and step; the
  // integrated lower bound is then checked against E on every step.
  const double nu = cfg.params.nu;
  double c_hat = 0.0;
  json per_member = json::array();
  for (const auto& m : members) {
    const double u2 = m.u_l2 * m.u_l2;
    const double e2 = m.eps * m.eps;
    double rate = 0.0;
    double integrated = -infinity;
    for (const auto& r : m.records) {
      rate = std::max(rate, 2.0 * nu * r.D / e2);
      if (r.t > 0.0) integrated = std::max(integrated, (u2 - r.E) / (e2 * r.t));
    }
    c_hat = std::max(c_hat, rate);
    per_member.push_back({{"epsilon", m.eps},
                          {"fitted_constant", rate},
                          {"max_integrated_ratio", finite_or_null(integrated)},
                          {"half_life", finite_or_null(m.half_life)},
                          {"grad_v0_sq", m.grad_v0_sq},
                          {"grad_v0_sq_over_eps2", m.grad_v0_sq / e2}});
  }
  j["members"] = per_member;
  j["fitted_C"] = c_hat;

  for (const auto& m : members) {
    const std::string tag = "eps=" + short_number(m.eps);
    const double l2_ratio = m.u_l2 / base->u_l2;
    checks.add("L2 invariance " + tag, std::abs(l2_ratio - 1.0) <= 1e-6, {{"ratio", l2_ratio}});
    const double g_ratio = m.grad_u / base->grad_u;
    const double expect = m.eps / base_eps;
    checks.add("gradient scaling " + tag, std::abs(g_ratio - expect) <= 1e-4, {{"ratio", g_ratio}, {"expected", expect}});
    const double g2_ratio = m.grad2_u / base->grad2_u;
    checks.info("second-gradient scaling " + tag, {{"ratio", g2_ratio}, {"expected", expect * expect}});
    const double bound_ratio = m.grad_v0_sq / (m.eps * m.eps);
    checks.add("grad v0 bounded by C eps^2 " + tag,
               bound_ratio <= base->grad_v0_sq / (base_eps * base_eps) * (1.0 + 1e-9), {{"ratio", bound_ratio}});

    const double u2 = m.u_l2 * m.u_l2;
    double worst = infinity;
    for (const auto& r : m.records) worst = std::min(worst, r.E - (u2 - c_hat * m.eps * m.eps * r.t));
    checks.add("energy lower bound " + tag, worst >= -1e-12 * u2, {{"min_margin", worst}});
  }
  bool increasing = true;
  for (std::size_t i = 1; i < members.size(); ++i) {
    const double a = members[i - 1].half_life;
    const double b = members[i].half_life;
    if (!(b > a)) increasing = false;
  }
  json hl = json::array();
  for (const auto& m : members) hl.push_back(finite_or_null(m.half_life));
  checks.add("half-life increases as eps decreases", increasing, {{"half_lives", hl}});
  j["note"] = "fitted_constant = max 2 nu D / eps^2 per member; its growth as eps shrinks follows the eps^(2 beta) scaling of the loss rate";
  return finish(std::move(j), checks);
}

Report run_alpha_sweep(const ExperimentConfig& cfg) {
  auto grid = SpectralGrid::create(cfg.grid.dim, cfg.grid.n, cfg.grid.length);
  json j = base_report(cfg);
  const auto ex = sweep_exponents(cfg);
  j["exponents"] = {{"l", finite_or_null(ex.l)}, {"s", finite_or_null(ex.s)}, {"q", ex.q},
                    {"p", ex.p},                 {"gamma", ex.gamma},        {"rate_bound", 0.5 * cfg.params.beta - ex.gamma}};
  const Field w0 = make_datum(cfg, grid);

  SolverParams ref_params = cfg.params;
  ref_params.model = Model::fractional_nse;
  ref_params.alpha = 0.0;
  const SimState ref_start = make_initial_state(w0, ref_params);
  std::vector<Field> reference;
  std::vector<double> times;
  const auto ref_summary = run(ref_start, ref_params, {[&](const SimState& s) {
                                 reference.push_back(to_physical(s.v.field));
                                 times.push_back(s.t);
                               }},
                               cfg.sample_stride);
  j["reference"] = {{"steps", ref_summary.steps}, {"samples", times.size()}};

  struct Entry {
    double alpha;
    double distance;
    double uniform_bound;
  };
  auto sweep_member = [&](double alpha) {
    SolverParams p = cfg.params;
    p.model = Model::ch_alpha;
    p.alpha = alpha;
    const SimState start = make_initial_state(w0, p);
    Entry e{alpha, 0.0, 0.0};
    std::size_t k = 0;
    run(start, p, {[&](const SimState& s) {
          const Field v = to_physical(s.v.field);
          e.distance = std::max(e.distance, solution_distance(v, reference.at(k), ex.q));
          if (std::isfinite(ex.l))
            e.uniform_bound = std::max(
                e.uniform_bound, lp_norm(v, ex.l) + lp_norm(fractional_laplacian(v, 0.5 * p.beta), ex.l));
          ++k;
        }},
        cfg.sample_stride);
    return e;
  };

  CheckList checks;
  const Entry zero = sweep_member(0.0);
  const double w_scale = lp_norm(reference.front(), ex.q);
  checks.add("alpha=0 matches the reference solver", zero.distance <= 1e-10 * w_scale,
             {{"distance", zero.distance}, {"reference_norm", w_scale}});

  std::vector<Entry> entries;
  for (double a : cfg.alphas)
    if (a > 0.0) entries.push_back(sweep_member(a));
  json rows = json::array();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  bool monotone = true;
  double sup_bound = 0.0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    rows.push_back({{"alpha", e.alpha}, {"distance", e.distance}, {"uniform_bound", finite_or_null(e.uniform_bound)}});
    sup_bound = std::max(sup_bound, e.uniform_bound);
    if (i > 0 && e.distance > entries[i - 1].distance) monotone = false;
    if (e.distance > 0.0) {
      const double x = std::log(e.alpha), y = std::log(e.distance);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++count;
    }
  }
  const double den = count * sxx - sx * sx;
  const double order = count >= 2 && den > 0.0 ? (count * sxy - sx * sy) / den : std::numeric_limits<double>::quiet_NaN();
  {
    std::ofstream out(output_path(cfg, "alpha_sweep.csv"));
    out.precision(17);
    out << "alpha,distance,uniform_bound\n";
    for (const auto& e : entries) out << e.alpha << ',' << e.distance << ',' << e.uniform_bound << '\n';
  }
  j["sweep"] = rows;
  j["fitted_order"] = finite_or_null(order);
  j["uniform_bound_sup"] = sup_bound;
  j["sampling"] = {{"stride_steps", cfg.sample_stride}, {"samples", times.size()}};

  const double rate_bound = 0.5 * cfg.params.beta - ex.gamma;
  checks.add("distance nonincreasing as alpha decreases", monotone);
  checks.add("fitted order >= " + short_number(cfg.min_order), std::isfinite(order) && order >= cfg.min_order,
             {{"order", finite_or_null(order)}});
  checks.add("fitted order >= beta/2 - gamma", std::isfinite(order) && order >= rate_bound,
             {{"order", finite_or_null(order)}, {"bound", rate_bound}});
  checks.info("uniform bound hypothesis", {{"sup_alpha_sup_t", sup_bound}, {"l", finite_or_null(ex.l)}});
  return finish(std::move(j), checks);
}

Report run_filter_check(const ExperimentConfig& cfg) {
  return finish(base_report(cfg), filter_suite(cfg));
}

Report run_kernel_check(const ExperimentConfig& cfg) {
  return finish(base_report(cfg), kernel_suite(cfg));
}

Report run_selftest(const ExperimentConfig& cfg) {
  return finish(base_report(cfg), selftest_suite(cfg));
}

Report run_experiment(const ExperimentConfig& cfg) {
  Report report;
  try {
    const auto& s = cfg.scenario;
    if (s == "simulate")
      report = run_simulate(cfg);
    else if (s == "decay" || s == "gradient-decay")
      report = run_decay_experiment(cfg);
    else if (s == "scaled-family")
      report = run_scaled_family(cfg);
    else if (s == "alpha-sweep")
      report = run_alpha_sweep(cfg);
    else if (s == "filter-check")
      report = run_filter_check(cfg);
    else if (s == "kernel-check")
      report = run_kernel_check(cfg);
    else if (s == "selftest")
      report = run_selftest(cfg);
    else
      throw ConfigError("unknown scenario '" + s + "'");
  } catch (const BlowUpError& e) {
    report.json = base_report(cfg);
    report.json["passed"] = false;
    report.json["failure"] = {{"kind", "blow-up"}, {"time", e.time()}, {"message", e.what()}};
    report.outcome = Outcome::blow_up;
  } catch (const ResolutionError& e) {
    report.json = base_report(cfg);
    report.json["passed"] = false;
    report.json["failure"] = {{"kind", "resolution"}, {"message", e.what()}};
    report.outcome = Outcome::fail;
  }
  std::ofstream out(output_path(cfg, "report.json"));
  out << report.json.dump(2) << '\n';
  return report;
}

}  // namespace fchv
