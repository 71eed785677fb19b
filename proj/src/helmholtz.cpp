#include "fchv/helmholtz.hpp"

#include <cmath>
#include <limits>

#include "fchv/diagnostics.hpp"
#include "fchv/error.hpp"
#include "fchv/spectral.hpp"

namespace fchv {

Field filter(const Field& v, double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ParameterError("filter: alpha must be >= 0");
  if (alpha == 0.0) return v;
  const Field u = apply_multiplier(to_spectral(v), Multiplier::helmholtz_inverse(v.grid_ptr(), alpha));
  return v.is_spectral() ? u : to_physical(u);
}

double filter_identity_residual(const Field& v, double alpha, int m) {
  if (m < 0) throw ParameterError("filter_identity_residual: m must be >= 0");
  const Field vs = to_spectral(v);
  const Field u = filter(vs, alpha);
  const double a2 = alpha * alpha;
  const double lhs = sobolev_seminorm_sq(u, m) + 2.0 * a2 * sobolev_seminorm_sq(u, m + 1) +
                     a2 * a2 * sobolev_seminorm_sq(u, m + 2);
  const double rhs = sobolev_seminorm_sq(vs, m);
  if (rhs == 0.0) return std::abs(lhs);
  return std::abs(lhs - rhs) / rhs;
}

FilterCurve filter_convergence_curve(const Field& v, std::span<const double> alphas, double q) {
  if (alphas.empty()) throw ParameterError("filter_convergence_curve: empty alpha list");
  FilterCurve curve;
  const Field vs = to_spectral(v);
  const Field vp = to_physical(vs);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int count = 0;
  for (double a : alphas) {
    if (!(a > 0.0)) throw ParameterError("filter_convergence_curve: alphas must be positive");
    const double d = solution_distance(to_physical(filter(vs, a)), vp, q);
    curve.points.push_back({a, d});
    if (d > 0.0) {
      const double x = std::log(a);
      const double y = std::log(d);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++count;
    }
  }
  const double den = count * sxx - sx * sx;
  curve.slope = count >= 2 && den > 0.0 ? (count * sxy - sx * sy) / den
                                        : std::numeric_limits<double>::quiet_NaN();
  return curve;
}

SmoothingReport filter_smoothing_monitor(const Field& v, std::span<const double> alphas, double p,
                                         double q) {
  if (!(p >= 1.0) || !(q >= p)) throw ParameterError("filter_smoothing_monitor: need 1 <= p <= q");
  SmoothingReport rep{p, q, 0.0, {}, 0.0, true};
  const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
  rep.gamma1 = 0.5 * v.grid().dim() * (1.0 / p - inv_q);
  const Field vs = to_spectral(v);
  const double vp = lp_norm(vs, p);
  for (double a : alphas) {
    if (!(a > 0.0)) throw ParameterError("filter_smoothing_monitor: alphas must be positive");
    const Field u = filter(vs, a);
    const double c = vp > 0.0 ? std::pow(a, 2.0 * rep.gamma1) * lp_norm(u, q) / vp : 0.0;
    const bool contraction = lp_norm(u, p) <= vp * (1.0 + 1e-12);
    rep.samples.push_back({a, c, contraction});
    rep.max_constant = std::max(rep.max_constant, c);
    rep.all_contractive = rep.all_contractive && contraction;
  }
  return rep;
}

}  // namespace fchv
