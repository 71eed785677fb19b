#pragma once

#include <functional>
#include <span>
#include <vector>

#include "fchv/field.hpp"

namespace fchv {

/// Kernel of d/dt + (-Lap)^(gamma0/2) in `dim` dimensions, defined by its
/// Fourier transform exp(-t |xi|^gamma0).
struct HeatKernelSpec {
  double gamma0 = 2.0;
  int dim = 2;
};

/// Radial profile of D^k Lambda^a G(t, .) at radius r, k in {0, 1}
/// (k = 1 gives the radial derivative), by panel Gauss quadrature of the
/// Hankel integral truncated where exp(-t rho^gamma0) < 1e-17.
double heat_kernel_profile(const HeatKernelSpec& spec, double t, double r, int k = 0, double a = 0.0);

std::vector<double> heat_kernel_values(const HeatKernelSpec& spec, double t, std::span<const double> radii);

/// ||D^k Lambda^a G(t)||_{L^p(R^n)} by radial quadrature.
double kernel_lp_norm(const HeatKernelSpec& spec, double t, int k, double a, double p);

struct KernelSlope {
  std::vector<double> times;
  std::vector<double> norms;
  double slope;
  /// -(k+a)/gamma0 - (n/gamma0)(1 - 1/p)
  double expected;
};

/// Log-log slope of t -> ||D^k Lambda^a G(t)||_p. Needs at least three times.
KernelSlope kernel_lp_norm_slope(const HeatKernelSpec& spec, int k, double a, double p,
                                 std::span<const double> times);

/// C_{n,beta} = ( int (1 - cos z_1) / |z|^(n + 2 beta) dz )^(-1), 0 < beta < 1.
double normalization_constant(int n, double beta);

struct IntegralOptions {
  double tolerance = 1e-7;
  /// Below this radius the second difference is replaced by its quadratic term.
  double inner_radius = 1e-3;
  /// Uniform panels of this width up to support_radius, geometric beyond.
  double panel_width = 0.25;
  double support_radius = 12.0;
  /// Angular points on the half circle (n = 2) or per polar node (n = 3).
  int angular_points = 64;
};

using ScalarFunction = std::function<double(std::span<const double> x)>;

/// (C_{n,beta}/2) int (2 f(x) - f(x+y) - f(x-y)) / |y|^(n+2 beta) dy.
/// Throws AccuracyError when the quadrature's own error estimate exceeds
/// options.tolerance relative to max(|result|, |f(x)|).
double integral_fractional_laplacian(const ScalarFunction& f, int n, double beta,
                                     std::span<const double> point, const IntegralOptions& options = {});

/// One-dimensional samples f(x0 + i h), zero outside the mesh, interpolated by
/// cubic B-splines. The error estimate also includes the change when the
/// mesh is coarsened by two.
double integral_fractional_laplacian(std::span<const double> samples, double x0, double h, double beta,
                                     double point, const IntegralOptions& options = {});

/// 2 C_{n,beta}^(-1) int |xi|^(2 beta) |F u|^2 d xi with the unitary
/// transform, evaluated on the grid's spectrum.
double gagliardo_seminorm_fourier(const Field& f, double beta);
/// Periodic one-dimensional samples on a box of the given length.
double gagliardo_seminorm_fourier(std::span<const double> samples, double length, double beta);

}  // namespace fchv
