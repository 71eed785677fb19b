#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/hypergeometric_1F1.hpp>

#include "fchv/error.hpp"
#include "fchv/oracle.hpp"
#include "fchv/spectral.hpp"
#include "test_support.hpp"

using namespace fchv;

namespace {

constexpr double pi = std::numbers::pi;

double closed_form_constant(int n, double s) {
  using boost::math::tgamma;
  return s * std::pow(4.0, s) * tgamma(0.5 * n + s) / (std::pow(pi, 0.5 * n) * tgamma(1.0 - s));
}

// (-Lap)^s exp(-|x|^2) in n dimensions.
double gaussian_fractional_laplacian(int n, double s, double r) {
  using boost::math::tgamma;
  return std::pow(4.0, s) * tgamma(0.5 * n + s) / tgamma(0.5 * n) *
         boost::math::hypergeometric_1F1(0.5 * n + s, 0.5 * n, -r * r);
}

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("normalization constant against the Gamma-function form") {
    for (int n = 1; n <= 3; ++n)
      for (double beta : {0.25, 0.5, 0.75, 0.9})
        CHECK(normalization_constant(n, beta) == doctest::Approx(closed_form_constant(n, beta)).epsilon(1e-9));
    CHECK_THROWS_AS(normalization_constant(2, 1.0), ParameterError);
    CHECK_THROWS_AS(normalization_constant(2, 0.0), ParameterError);
  }

  TEST_CASE("gamma0 = 2 kernel is the Gaussian") {
    for (int n : {1, 2, 3})
      for (double t : {0.1, 1.0, 3.0})
        for (double r : {0.0, 0.3, 1.0, 2.5}) {
          const double g = std::pow(4.0 * pi * t, -0.5 * n) * std::exp(-r * r / (4.0 * t));
          CHECK(std::abs(heat_kernel_profile({2.0, n}, t, r) - g) <= 1e-10 * std::pow(4.0 * pi * t, -0.5 * n));
        }
  }

  TEST_CASE("kernel self-similarity") {
    for (double gamma : {1.0, 1.5}) {
      for (double t : {0.3, 2.0}) {
        for (double r : {0.0, 0.7, 3.0}) {
          const double lhs = heat_kernel_profile({gamma, 2}, t, r);
          const double rhs = std::pow(t, -2.0 / gamma) * heat_kernel_profile({gamma, 2}, 1.0, std::pow(t, -1.0 / gamma) * r);
          CHECK(std::abs(lhs - rhs) <= 1e-12);
        }
      }
    }
  }

  TEST_CASE("kernel L1 norm is one") {
    CHECK(kernel_lp_norm({1.5, 2}, 1.0, 0, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(kernel_lp_norm({2.0, 3}, 0.5, 0, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-6));
  }

  TEST_CASE("grid heat multiplier equals direct convolution with the kernel") {
    const double gamma = 1.5, t = 0.5, length = 40.0;
    const int n = 64;
    auto g = SpectralGrid::create(2, n, length);
    Field f = Field::scalar(g);
    for (std::size_t i = 0; i < g->physical_size(); ++i) {
      const auto idx = g->physical_index(i);
      const double x = g->coordinate(idx[0]), y = g->coordinate(idx[1]);
      f.physical(0)[i] = std::exp(-(x * x + y * y));
    }
    const Field smoothed = to_physical(apply_multiplier(to_spectral(f), Multiplier::heat(g, gamma, t)));
    for (std::size_t target : {std::size_t(32 * n + 32), std::size_t(33 * n + 35)}) {
      const auto ti = g->physical_index(target);
      double conv = 0.0;
      for (std::size_t j = 0; j < g->physical_size(); ++j) {
        if (f.physical(0)[j] < 1e-18) continue;
        const auto tj = g->physical_index(j);
        const double dx = g->coordinate(ti[0]) - g->coordinate(tj[0]);
        const double dy = g->coordinate(ti[1]) - g->coordinate(tj[1]);
        conv += heat_kernel_profile({gamma, 2}, t, std::hypot(dx, dy)) * f.physical(0)[j];
      }
      conv *= g->cell_volume();
      CHECK(smoothed.physical(0)[target] == doctest::Approx(conv).epsilon(1e-4));
    }
  }

  TEST_CASE("kernel slopes need a decade of times") {
    const std::array<double, 2> few{1.0, 10.0};
    CHECK_THROWS_AS(kernel_lp_norm_slope({1.5, 2}, 0, 0.0, 2.0, few), ParameterError);
    const std::array<double, 3> narrow{1.0, 2.0, 3.0};
    CHECK_THROWS_AS(kernel_lp_norm_slope({1.5, 2}, 0, 0.0, 2.0, narrow), ParameterError);
  }

  TEST_CASE("integral fractional Laplacian of a Gaussian") {
    for (int n = 1; n <= 3; ++n) {
      const ScalarFunction f = [](std::span<const double> x) {
        double r2 = 0.0;
        for (double c : x) r2 += c * c;
        return std::exp(-r2);
      };
      for (double beta : {0.3, 0.75}) {
        const double scale = std::abs(gaussian_fractional_laplacian(n, beta, 0.0));
        for (double r : {0.0, 0.8, 1.7}) {
          std::vector<double> x(static_cast<std::size_t>(n), 0.0);
          x[0] = r;
          const double got = integral_fractional_laplacian(f, n, beta, x);
          CHECK(std::abs(got - gaussian_fractional_laplacian(n, beta, r)) <= 1e-6 * scale);
        }
      }
    }
  }

  TEST_CASE("sampled one-dimensional integral form") {
    const double h = 0.01, x0 = -12.0;
    std::vector<double> samples(2401);
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const double x = x0 + static_cast<double>(i) * h;
      samples[i] = std::exp(-x * x);
    }
    for (double pt : {0.0, 0.5, 1.3}) {
      const double got = integral_fractional_laplacian(samples, x0, h, 0.6, pt, {.tolerance = 1e-4});
      CHECK(got == doctest::Approx(gaussian_fractional_laplacian(1, 0.6, pt)).epsilon(1e-4).scale(1.0));
    }
  }

  TEST_CASE("unreachable tolerance raises an accuracy error") {
    const ScalarFunction f = [](std::span<const double> x) { return std::exp(-x[0] * x[0]) * (1.0 + std::abs(x[0])); };
    CHECK_THROWS_AS(integral_fractional_laplacian(f, 1, 0.5, std::array{0.0}, {.tolerance = 1e-15}), AccuracyError);
  }

  TEST_CASE("Fourier Gagliardo seminorm against the double integral") {
    // For f = exp(-x^2): int |f(x+h) - f(x)|^2 dx = 2 sqrt(pi/2) (1 - exp(-h^2/2)).
    const double beta = 0.6;
    boost::math::quadrature::exp_sinh<double> integrator;
    const double direct = 2.0 * integrator.integrate([&](double h) {
      const double ratio = h < 1e-4 ? 0.5 - h * h / 8.0 : -std::expm1(-0.5 * h * h) / (h * h);
      return 2.0 * std::sqrt(pi / 2.0) * ratio * std::pow(h, 1.0 - 2.0 * beta);
    });
    // The |xi|^(2 beta) kink at the origin limits the Riemann sum to O(dk^(1+2 beta)).
    const int n = 32768;
    const double length = 640.0;
    std::vector<double> samples(n);
    for (int i = 0; i < n; ++i) {
      const double x = (i - n / 2) * length / n;
      samples[static_cast<std::size_t>(i)] = std::exp(-x * x);
    }
    CHECK(gagliardo_seminorm_fourier(samples, length, beta) == doctest::Approx(direct).epsilon(1e-5));
  }
}
