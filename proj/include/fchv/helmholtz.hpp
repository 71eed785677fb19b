#pragma once

#include <span>
#include <vector>

#include "fchv/field.hpp"

namespace fchv {

/// Solves u - alpha^2 Lap u = v mode by mode. alpha = 0 returns v.
/// Output keeps the input representation.
Field filter(const Field& v, double alpha);

/// Relative mismatch of
///   ||grad^m u||^2 + 2 alpha^2 ||grad^(m+1) u||^2 + alpha^4 ||grad^(m+2) u||^2 = ||grad^m v||^2
/// with u = filter(v, alpha).
double filter_identity_residual(const Field& v, double alpha, int m);

struct FilterCurvePoint {
  double alpha;
  double distance;
};

struct FilterCurve {
  std::vector<FilterCurvePoint> points;
  /// Least-squares slope of log distance against log alpha over the points
  /// with positive distance; NaN when fewer than two such points.
  double slope;
};

/// ||filter(v, alpha) - v||_{L^q} for each alpha.
FilterCurve filter_convergence_curve(const Field& v, std::span<const double> alphas, double q);

struct SmoothingSample {
  double alpha;
  /// alpha^(2 gamma1) ||u||_q / ||v||_p, the smallest admissible constant.
  double constant;
  /// ||u||_p <= ||v||_p
  bool contraction;
};

struct SmoothingReport {
  double p;
  double q;
  double gamma1;
  std::vector<SmoothingSample> samples;
  double max_constant;
  bool all_contractive;
};

/// Empirical constants for the L^p -> L^q bound ||u||_q <= C alpha^(-2 gamma1) ||v||_p,
/// gamma1 = (n/2)(1/p - 1/q), plus the L^p contraction check.
SmoothingReport filter_smoothing_monitor(const Field& v, std::span<const double> alphas, double p,
                                         double q);

}  // namespace fchv
