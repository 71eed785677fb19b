#include "fchv/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "fchv/error.hpp"
#include "fchv/kernels.hpp"

namespace fchv {

EnergyRecord record_energy(double t, const Field& v, double alpha, double beta) {
  const Field vs = to_spectral(v);
  const auto& g = vs.grid();
  const auto k2 = g.k_squared();
  const auto mult = g.mode_multiplicity();
  const std::size_t half = g.half_length();
  const std::size_t rows = g.spectral_rows();
  const double a2 = alpha * alpha;

  struct Sums {
    double e = 0, d = 0, v = 0, gv = 0, u = 0, peak = 0;
  };
  std::vector<Sums> partial(rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t rr = 0; rr < static_cast<std::ptrdiff_t>(rows); ++rr) {
    const auto r = static_cast<std::size_t>(rr);
    Sums acc;
    for (std::size_t j = 0; j < half; ++j) {
      const std::size_t s = r * half + j;
      double c2 = 0.0;
      for (int c = 0; c < vs.components(); ++c) c2 += std::norm(vs.spectral(c)[s]);
      const double h = 1.0 / (1.0 + a2 * k2[s]);
      const double frac = k2[s] == 0.0 ? 0.0 : std::pow(k2[s], beta);
      const double w = mult[s] * c2;
      acc.e += w * h;
      acc.d += w * h * frac;
      acc.v += w;
      acc.gv += w * k2[s];
      acc.u += w * h * h;
      acc.peak = std::max(acc.peak, c2);
    }
    partial[r] = acc;
  }
  Sums tot;
  for (const auto& p : partial) {
    tot.e += p.e;
    tot.d += p.d;
    tot.v += p.v;
    tot.gv += p.gv;
    tot.u += p.u;
    tot.peak = std::max(tot.peak, p.peak);
  }
  const double w = g.parseval_weight();
  return {t, tot.e * w, tot.d * w, tot.v * w, tot.gv * w, std::sqrt(tot.peak) * g.cell_volume(), tot.u * w};
}

EnergyRecord record_energy(const SimState& state, const SolverParams& params) {
  return record_energy(state.t, state.v.field, params.alpha, params.beta);
}

std::string energy_csv_header() { return "t,E,D,v_l2,gradv_l2,fhat_max"; }

std::string energy_csv_row(const EnergyRecord& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g", r.t, r.E, r.D, r.v_l2,
                r.gradv_l2, r.fhat_max);
  return buf;
}

double lp_norm(const Field& field, double p) {
  if (!(p >= 1.0)) throw ParameterError("lp_norm: p must lie in [1, inf]");
  const Field f = to_physical(field);
  const std::size_t n = static_cast<std::size_t>(f.grid().n());
  const std::size_t rows = f.grid().physical_rows();
  const bool inf = std::isinf(p);
  std::vector<double> partial(rows, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t rr = 0; rr < static_cast<std::ptrdiff_t>(rows); ++rr) {
    const auto r = static_cast<std::size_t>(rr);
    double acc = 0.0;
    for (std::size_t i = r * n; i < (r + 1) * n; ++i) {
      double m2 = 0.0;
      for (int c = 0; c < f.components(); ++c) m2 += f.physical(c)[i] * f.physical(c)[i];
      if (inf)
        acc = std::max(acc, m2);
      else
        acc += p == 2.0 ? m2 : std::pow(m2, 0.5 * p);
    }
    partial[r] = acc;
  }
  if (inf) return std::sqrt(*std::max_element(partial.begin(), partial.end()));
  double total = 0.0;
  for (double x : partial) total += x;
  return std::pow(total * f.grid().cell_volume(), 1.0 / p);
}

double solution_distance(const Field& a, const Field& b, double q) {
  require_same_grid(a, b, "solution_distance");
  if (a.components() != b.components()) throw ContractError("solution_distance: component mismatch");
  Field d = to_physical(a);
  const Field pb = to_physical(b);
  for (int c = 0; c < d.components(); ++c) {
    auto x = d.physical(c);
    const auto y = pb.physical(c);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= y[i];
  }
  return lp_norm(d, q);
}

DecayFit fit_decay(std::span<const std::pair<double, double>> series, DecayWindow window) {
  if (!(window.t_lo < window.t_hi)) throw FitError("fit_decay: empty window");
  std::vector<double> xs, ys;
  for (const auto& [t, value] : series) {
    if (t < window.t_lo || t > window.t_hi) continue;
    if (!(value > 0.0) || !std::isfinite(value))
      throw FitError("fit_decay: nonpositive value at t=" + std::to_string(t));
    xs.push_back(std::log1p(t));
    ys.push_back(std::log(value));
  }
  if (xs.size() < 10) throw FitError("fit_decay: fewer than 10 samples in window");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw FitError("fit_decay: degenerate time samples");
  DecayFit fit;
  fit.t_lo = window.t_lo;
  fit.t_hi = window.t_hi;
  fit.samples = xs.size();
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  fit.algebraic = fit.r_squared >= algebraic_threshold;
  return fit;
}

DecayWindow default_decay_window(double t_start, double t_end) {
  return {std::max(5.0, t_start), t_end - 0.1 * (t_end - t_start)};
}

AmplitudeBoundReport fourier_amplitude_bound_check(std::span<const EnergyRecord> trajectory) {
  AmplitudeBoundReport rep;
  double iu = 0.0, igv = 0.0;
  for (std::size_t j = 0; j < trajectory.size(); ++j) {
    if (j > 0) {
      const auto& a = trajectory[j - 1];
      const auto& b = trajectory[j];
      const double h = b.t - a.t;
      iu += 0.5 * h * (a.u_l2 + b.u_l2);
      igv += 0.5 * h * (a.gradv_l2 + b.gradv_l2);
    }
    rep.ratios.push_back(trajectory[j].fhat_max / (1.0 + std::sqrt(iu) * std::sqrt(igv)));
  }
  const std::size_t mid = rep.ratios.size() / 2;
  for (std::size_t j = 0; j < rep.ratios.size(); ++j) {
    rep.max_ratio = std::max(rep.max_ratio, rep.ratios[j]);
    if (j < mid)
      rep.first_half_max = std::max(rep.first_half_max, rep.ratios[j]);
    else
      rep.second_half_max = std::max(rep.second_half_max, rep.ratios[j]);
  }
  rep.bounded = std::isfinite(rep.max_ratio) &&
                (mid == 0 || rep.second_half_max <= 1.01 * rep.first_half_max);
  return rep;
}

TimeAverageReport time_average_decay_check(std::span<const std::pair<double, double>> norms) {
  TimeAverageReport rep;
  double integral = 0.0;
  for (std::size_t j = 0; j < norms.size(); ++j) {
    if (j > 0) integral += 0.5 * (norms[j].first - norms[j - 1].first) * (norms[j].second + norms[j - 1].second);
    const double t = norms[j].first;
    if (t <= 0.0) continue;
    rep.times.push_back(t);
    rep.means.push_back(integral / t);
  }
  if (rep.means.size() < 2) return rep;
  rep.decreasing = true;
  for (std::size_t j = rep.means.size() / 2 + 1; j < rep.means.size(); ++j)
    if (!(rep.means[j] < rep.means[j - 1])) rep.decreasing = false;
  return rep;
}

TimeAverageReport time_average_decay_check(std::span<const EnergyRecord> trajectory) {
  std::vector<std::pair<double, double>> norms;
  for (const auto& r : trajectory) norms.emplace_back(r.t, std::sqrt(r.v_l2));
  return time_average_decay_check(norms);
}

}  // namespace fchv
