#include "fchv/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "fchv/error.hpp"
#include "fchv/spectral.hpp"

namespace fchv {

namespace {

using boost::math::quadrature::gauss;
using boost::math::quadrature::gauss_kronrod;

constexpr double pi = std::numbers::pi;
// exp(-40) ~ 4e-18
constexpr double exponent_cutoff = 40.0;

double sphere_area(int n) { return 2.0 * std::pow(pi, 0.5 * n) / std::tgamma(0.5 * n); }

double bessel_j(double order, double x) {
  if (order == 0.0) return boost::math::cyl_bessel_j(0, x);
  if (order == 1.0) return boost::math::cyl_bessel_j(1, x);
  if (order == 2.0) return boost::math::cyl_bessel_j(2, x);
  return boost::math::cyl_bessel_j(order, x);
}

// r^(-nu) J_(nu+j)(rho r), continuous at r = 0.
double reduced_bessel(double nu, int j, double rho, double r) {
  if (r == 0.0) return j == 0 ? std::pow(0.5 * rho, nu) / std::tgamma(nu + 1.0) : 0.0;
  return bessel_j(nu + j, rho * r) * std::pow(r, -nu);
}

template <class F>
double gauss20(F&& f, double a, double b) {
  return gauss<double, 20>::integrate(f, a, b);
}

void check_spec(const HeatKernelSpec& spec) {
  if (!(spec.gamma0 > 0.0 && spec.gamma0 <= 2.0)) throw ParameterError("heat kernel: gamma0 must lie in (0, 2]");
  if (spec.dim < 1 || spec.dim > 3) throw ParameterError("heat kernel: dim must be 1, 2 or 3");
}

// int_0^inf exp(-t rho^gamma) rho^power r^(-nu) J_(nu+j)(rho r) d rho
double hankel(const HeatKernelSpec& spec, double t, double r, int j, double power) {
  const double nu = 0.5 * spec.dim - 1.0;
  const double g = spec.gamma0;
  const double rho_max = std::pow(exponent_cutoff / t, 1.0 / g);
  double w = rho_max / 16.0;
  if (r > 0.0) w = std::min(w, pi / r);
  auto integrand = [&](double rho) {
    return std::exp(-t * std::pow(rho, g)) * std::pow(rho, power) * reduced_bessel(nu, j, rho, r);
  };
  double sum = 0.0;
  double hi = w;
  for (int i = 0; i < 48; ++i) {
    sum += gauss20(integrand, 0.5 * hi, hi);
    hi *= 0.5;
  }
  const auto panels = static_cast<long>(std::ceil(rho_max / w));
  for (long i = 1; i < panels; ++i) sum += gauss20(integrand, i * w, std::min((i + 1) * w, rho_max));
  return sum;
}

double fit_slope(std::span<const double> xs, std::span<const double> ys) {
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  return sxy / sxx;
}

}  // namespace

double heat_kernel_profile(const HeatKernelSpec& spec, double t, double r, int k, double a) {
  check_spec(spec);
  if (!(t > 0.0)) throw ParameterError("heat kernel: t must be positive");
  if (k != 0 && k != 1) throw ParameterError("heat kernel: derivative order must be 0 or 1");
  if (!(a >= 0.0)) throw ParameterError("heat kernel: fractional order must be >= 0");
  r = std::abs(r);
  const double nu = 0.5 * spec.dim - 1.0;
  const double pref = std::pow(2.0 * pi, -0.5 * spec.dim);
  if (k == 0) return pref * hankel(spec, t, r, 0, a + nu + 1.0);
  return -pref * hankel(spec, t, r, 1, a + nu + 2.0);
}

std::vector<double> heat_kernel_values(const HeatKernelSpec& spec, double t, std::span<const double> radii) {
  if (!(t > 0.0)) throw ParameterError("heat_kernel_values: t must be positive");
  std::vector<double> out(radii.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(radii.size()); ++i)
    out[static_cast<std::size_t>(i)] = heat_kernel_profile(spec, t, radii[static_cast<std::size_t>(i)]);
  return out;
}

double kernel_lp_norm(const HeatKernelSpec& spec, double t, int k, double a, double p) {
  if (!(p >= 1.0)) throw ParameterError("kernel_lp_norm: p must lie in [1, inf]");
  const double scale = std::pow(t, 1.0 / spec.gamma0);
  auto f = [&](double r) { return heat_kernel_profile(spec, t, r, k, a); };

  if (std::isinf(p)) {
    const int samples = 240;
    const double r_max = 8.0 * scale;
    double best = std::abs(f(0.0));
    int best_i = 0;
    for (int i = 1; i <= samples; ++i) {
      const double v = std::abs(f(r_max * i / samples));
      if (v > best) {
        best = v;
        best_i = i;
      }
    }
    if (best_i == 0) return best;
    const double lo = r_max * (best_i - 1) / samples;
    const double hi = r_max * std::min(best_i + 1, samples) / samples;
    const auto res = boost::math::tools::brent_find_minima([&](double r) { return -std::abs(f(r)); }, lo, hi, 52);
    return std::max(best, -res.second);
  }

  const int n = spec.dim;
  auto weight = [&](double r) { return std::pow(std::abs(f(r)), p) * std::pow(r, n - 1); };
  std::vector<double> edges = {0.0};
  for (double e = 0.25; e <= 64.0; e *= 2.0) edges.push_back(e * scale);

  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    // Split the panel at sign changes so the rule never straddles a kink of |f|.
    std::vector<double> cuts = {edges[i]};
    const int probes = 16;
    double prev_x = edges[i];
    double prev_f = f(prev_x);
    for (int j = 1; j <= probes; ++j) {
      const double x = edges[i] + (edges[i + 1] - edges[i]) * j / probes;
      const double fx = f(x);
      if (prev_f != 0.0 && fx != 0.0 && (prev_f < 0.0) != (fx < 0.0)) {
        boost::uintmax_t iters = 200;
        const auto root = boost::math::tools::toms748_solve(
            f, prev_x, x, prev_f, fx, boost::math::tools::eps_tolerance<double>(50), iters);
        cuts.push_back(0.5 * (root.first + root.second));
      }
      prev_x = x;
      prev_f = fx;
    }
    cuts.push_back(edges[i + 1]);
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) sum += gauss20(weight, cuts[c], cuts[c + 1]);
  }

  // Power-law tail beyond the last radius.
  const double big_r = edges.back();
  const double f_r = f(big_r);
  const double f_h = f(0.5 * big_r);
  if (f_r != 0.0 && f_h != 0.0 && (f_r < 0.0) == (f_h < 0.0)) {
    const double m = std::log(f_h / f_r) / std::log(2.0);
    if (m * p > n) sum += std::pow(std::abs(f_r), p) * std::pow(big_r, n) / (m * p - n);
  }
  return std::pow(sphere_area(n) * sum, 1.0 / p);
}

KernelSlope kernel_lp_norm_slope(const HeatKernelSpec& spec, int k, double a, double p,
                                 std::span<const double> times) {
  check_spec(spec);
  if (times.size() < 3) throw ParameterError("kernel_lp_norm_slope: need at least three times");
  const auto [lo, hi] = std::minmax_element(times.begin(), times.end());
  if (!(*lo > 0.0)) throw ParameterError("kernel_lp_norm_slope: times must be positive");
  if (*hi < 10.0 * *lo) throw ParameterError("kernel_lp_norm_slope: times must span a decade");
  KernelSlope out;
  out.times.assign(times.begin(), times.end());
  std::vector<double> lx, ly;
  for (double t : times) {
    const double v = kernel_lp_norm(spec, t, k, a, p);
    out.norms.push_back(v);
    lx.push_back(std::log(t));
    ly.push_back(std::log(v));
  }
  out.slope = fit_slope(lx, ly);
  const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
  out.expected = -(k + a) / spec.gamma0 - (spec.dim / spec.gamma0) * (1.0 - inv_p);
  return out;
}

double normalization_constant(int n, double beta) {
  if (n < 1 || n > 3) throw ParameterError("normalization_constant: n must be 1, 2 or 3");
  if (!(beta > 0.0 && beta < 1.0))
    throw ParameterError("normalization_constant: the defining integral diverges unless 0 < beta < 1");
  const double nu = 0.5 * n - 1.0;
  const double gn = std::tgamma(0.5 * n);
  // 1 - (average of cos(rho e.theta) over the sphere)
  auto one_minus_avg = [&](double rho) {
    if (rho < 0.5) {
      const double z = 0.25 * rho * rho;
      double term = 1.0;
      double sum = 0.0;
      for (int k = 1; k <= 10; ++k) {
        term *= -z / (k * (k - 1 + 0.5 * n));
        sum -= term;
      }
      return sum;
    }
    if (n == 1) return 1.0 - std::cos(rho);
    return 1.0 - gn * std::pow(2.0 / rho, nu) * bessel_j(nu, rho);
  };
  auto h = [&](double rho) { return one_minus_avg(rho) * std::pow(rho, -1.0 - 2.0 * beta); };

  // On [0, 1/2] integrate the power series of 1 - avg term by term.
  double head = 0.0;
  {
    double coeff = 1.0;
    for (int k = 1; k <= 12; ++k) {
      coeff *= -0.25 / (k * (k - 1 + 0.5 * n));
      const double e = 2.0 * k - 2.0 * beta;
      head -= coeff * std::pow(0.5, e) / e;
    }
  }
  head += gauss_kronrod<double, 61>::integrate(h, 0.5, 1.0, 5, 1e-14);
  auto partial = [&](double upper) {
    double s = head;
    const auto panels = static_cast<long>(std::ceil((upper - 1.0) / pi));
    for (long i = 0; i < panels; ++i) {
      const double a = 1.0 + i * pi;
      const double b = std::min(a + pi, upper);
      s += gauss_kronrod<double, 61>::integrate(h, a, b, 5, 1e-14);
    }
    return s + std::pow(upper, -2.0 * beta) / (2.0 * beta);
  };

  double integral;
  if (n == 1) {
    const double big_a = 2.0 * pi * 64.0;
    // int_A^inf cos(rho) rho^(-1-2beta) = cos A Ic - sin A Is over s = rho - A
    auto g = [&](double s) { return std::pow(big_a + s, -1.0 - 2.0 * beta); };
    boost::math::quadrature::ooura_fourier_cos<double> oc;
    boost::math::quadrature::ooura_fourier_sin<double> os;
    const double ic = oc.integrate(g, 1.0).first;
    const double is = os.integrate(g, 1.0).first;
    integral = partial(big_a) - (std::cos(big_a) * ic - std::sin(big_a) * is);
  } else {
    // The neglected tail oscillates with period 2 pi; averaging partial sums
    // half a period apart cancels its leading term.
    const double big_a = 1.0 + 800.0 * pi;
    integral = 0.5 * (partial(big_a) + partial(big_a + pi));
  }
  return 1.0 / (sphere_area(n) * integral);
}

namespace {

struct RadialResult {
  double value;
  double error;
};

// int_0^inf (2 f(x) - f(x + rho e) - f(x - rho e)) rho^(-1-2beta) d rho
RadialResult radial_second_difference(const ScalarFunction& f, int n, double beta, std::span<const double> x,
                                      std::span<const double> e, double fx, const IntegralOptions& opt) {
  std::array<double, 3> plus{};
  std::array<double, 3> minus{};
  auto a_of = [&](double rho) {
    for (int i = 0; i < n; ++i) {
      plus[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] + rho * e[static_cast<std::size_t>(i)];
      minus[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] - rho * e[static_cast<std::size_t>(i)];
    }
    const std::span<const double> ps(plus.data(), static_cast<std::size_t>(n));
    const std::span<const double> ms(minus.data(), static_cast<std::size_t>(n));
    return 2.0 * fx - f(ps) - f(ms);
  };
  const double s = 2.0 * beta;
  auto integrand = [&](double rho) { return a_of(rho) * std::pow(rho, -1.0 - s); };

  // A(rho) = a2 rho^2 + a4 rho^4 + O(rho^6) near the origin.
  const double h0 = opt.inner_radius;
  const double q1 = a_of(h0) / (h0 * h0);
  const double q2 = a_of(0.5 * h0) / (0.25 * h0 * h0);
  const double a4 = (q1 - q2) / (0.75 * h0 * h0);
  const double a2 = q2 - a4 * 0.25 * h0 * h0;
  RadialResult out{a2 * std::pow(h0, 2.0 - s) / (2.0 - s) + a4 * std::pow(h0, 4.0 - s) / (4.0 - s),
                   std::abs(a4) * std::pow(h0, 4.0 - s)};

  auto add = [&](double lo, double hi) {
    double err = 0.0;
    out.value += gauss_kronrod<double, 21>::integrate(integrand, lo, hi, 0, 0.0, &err);
    out.error += err;
  };
  double lo = h0;
  while (2.0 * lo < opt.panel_width) {
    add(lo, 2.0 * lo);
    lo *= 2.0;
  }
  add(lo, opt.panel_width);
  const auto uniform = static_cast<long>(std::ceil(opt.support_radius / opt.panel_width));
  for (long i = 1; i < uniform; ++i) add(i * opt.panel_width, (i + 1) * opt.panel_width);
  double r = uniform * opt.panel_width;
  for (int i = 0; i < 12; ++i) {
    add(r, 2.0 * r);
    r *= 2.0;
  }
  out.value += 2.0 * fx * std::pow(r, -s) / s;
  return out;
}

}  // namespace

double integral_fractional_laplacian(const ScalarFunction& f, int n, double beta, std::span<const double> point,
                                     const IntegralOptions& options) {
  if (n < 1 || n > 3 || point.size() != static_cast<std::size_t>(n))
    throw ParameterError("integral_fractional_laplacian: point must have n = 1, 2 or 3 coordinates");
  const double c = normalization_constant(n, beta);
  const double fx = f(point);

  double total = 0.0;
  double error = 0.0;
  if (n == 1) {
    const double e[1] = {1.0};
    const auto r = radial_second_difference(f, n, beta, point, e, fx, options);
    total = 2.0 * r.value;
    error = 2.0 * r.error;
  } else {
    // Antipodal directions give the same radial integral.
    const int m = std::max(4, options.angular_points + options.angular_points % 2);
    std::vector<double> dir_values;
    std::vector<double> dir_weights;
    if (n == 2) {
      for (int j = 0; j < m; ++j) {
        const double th = pi * j / m;
        const double e[2] = {std::cos(th), std::sin(th)};
        const auto r = radial_second_difference(f, n, beta, point, e, fx, options);
        dir_values.push_back(r.value);
        dir_weights.push_back(2.0 * pi / m);
        error += 2.0 * pi / m * r.error;
      }
    } else {
      // 20-point Gauss-Legendre in cos(theta): ten symmetric node pairs.
      using rule = gauss<double, 20>;
      const auto& nodes = rule::abscissa();
      const auto& wts = rule::weights();
      for (std::size_t q = 0; q < nodes.size(); ++q) {
        for (double mu : {nodes[q], -nodes[q]}) {
          const double sin_t = std::sqrt(1.0 - mu * mu);
          for (int j = 0; j < m; ++j) {
            const double ph = 2.0 * pi * j / m;
            const double e[3] = {sin_t * std::cos(ph), sin_t * std::sin(ph), mu};
            const auto r = radial_second_difference(f, n, beta, point, e, fx, options);
            const double w = wts[q] * 2.0 * pi / m;
            dir_values.push_back(r.value);
            dir_weights.push_back(w);
            error += w * r.error;
          }
        }
      }
    }
    double coarse = 0.0;
    for (std::size_t i = 0; i < dir_values.size(); ++i) {
      total += dir_weights[i] * dir_values[i];
      if (i % 2 == 0) coarse += 2.0 * dir_weights[i] * dir_values[i];
    }
    error += std::abs(total - coarse);
  }

  const double result = 0.5 * c * total;
  const double est = 0.5 * c * error;
  if (est > options.tolerance * std::max({std::abs(result), std::abs(fx), 1e-300}))
    throw AccuracyError("integral_fractional_laplacian: error estimate above tolerance", est);
  return result;
}

double integral_fractional_laplacian(std::span<const double> samples, double x0, double h, double beta,
                                     double point, const IntegralOptions& options) {
  if (samples.size() < 8 || !(h > 0.0)) throw ParameterError("integral_fractional_laplacian: mesh too small");
  using spline = boost::math::interpolators::cardinal_cubic_b_spline<double>;
  auto make = [&](std::size_t stride) {
    std::vector<double> s;
    for (std::size_t i = 0; i < samples.size(); i += stride) s.push_back(samples[i]);
    const double x_last = x0 + static_cast<double>(s.size() - 1) * h * static_cast<double>(stride);
    auto sp = std::make_shared<spline>(s.begin(), s.end(), x0, h * static_cast<double>(stride));
    return ScalarFunction([sp, x0, x_last](std::span<const double> x) {
      return x[0] < x0 || x[0] > x_last ? 0.0 : (*sp)(x[0]);
    });
  };
  const double pt[1] = {point};
  IntegralOptions loose = options;
  loose.tolerance = std::max(options.tolerance, 1e-6);
  const double fine = integral_fractional_laplacian(make(1), 1, beta, pt, loose);
  const double coarse = integral_fractional_laplacian(make(2), 1, beta, pt, loose);
  const double est = std::abs(fine - coarse);
  const double fx = make(1)(std::span<const double>(pt, 1));
  if (est > options.tolerance * std::max({std::abs(fine), std::abs(fx), 1e-300}))
    throw AccuracyError("integral_fractional_laplacian: mesh too coarse for the requested tolerance", est);
  return fine;
}

double gagliardo_seminorm_fourier(const Field& f, double beta) {
  return 2.0 / normalization_constant(f.grid().dim(), beta) * sobolev_seminorm_sq(f, beta);
}

double gagliardo_seminorm_fourier(std::span<const double> samples, double length, double beta) {
  if (samples.size() < 2 || samples.size() % 2 != 0)
    throw ParameterError("gagliardo_seminorm_fourier: need an even number of samples");
  const auto c = fft_forward_1d(samples);
  const std::size_t n = samples.size();
  const double k0 = 2.0 * pi / length;
  double sum = 0.0;
  for (std::size_t m = 1; m < c.size(); ++m) {
    const double mult = (m == n / 2) ? 1.0 : 2.0;
    sum += mult * std::pow(k0 * static_cast<double>(m), 2.0 * beta) * std::norm(c[m]);
  }
  const double weight = length / (static_cast<double>(n) * static_cast<double>(n));
  return 2.0 / normalization_constant(1, beta) * sum * weight;
}

}  // namespace fchv
