#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fchv/error.hpp"
#include "fchv/helmholtz.hpp"
#include "fchv/initial_data.hpp"
#include "fchv/spectral.hpp"
#include "test_support.hpp"

using namespace fchv;

TEST_SUITE("helmholtz") {
  TEST_CASE("single mode is divided by 1 + alpha^2 |k|^2") {
    auto g = SpectralGrid::create(2, 16, 2.0 * std::numbers::pi);
    Field v = Field::scalar(g);
    for (std::size_t i = 0; i < g->physical_size(); ++i)
      v.physical(0)[i] = std::cos(2.0 * g->coordinate(g->physical_index(i)[0]));
    const Field u = filter(v, 1.0);
    Field expect = v;
    for (double& x : expect.physical(0)) x /= 5.0;
    CHECK(testing::max_abs_diff(u, expect) <= 1e-15);
    CHECK(testing::max_abs_diff(filter(v, 0.0), v) == 0.0);
    CHECK_THROWS_AS(filter(v, -1.0), ParameterError);
  }

  TEST_CASE("filter energy identity") {
    auto g = SpectralGrid::create(2, 64, 2.0 * std::numbers::pi);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const Field v = band_random(g, seed, 0.0, 30.0, 1.0);
      for (double a : {0.0, 0.1, 0.3, 1.0})
        for (int m = 0; m <= 2; ++m) CHECK(filter_identity_residual(v, a, m) <= 1e-12);
    }
  }

  TEST_CASE("convergence curve of a single mode is exact") {
    auto g = SpectralGrid::create(2, 16, 2.0 * std::numbers::pi);
    Field v = Field::vector(g);
    for (std::size_t i = 0; i < g->physical_size(); ++i)
      v.physical(0)[i] = std::cos(3.0 * g->coordinate(g->physical_index(i)[1]));
    const double norm = testing::l2(v);
    const std::array<double, 3> alphas{0.5, 0.2, 0.1};
    const auto curve = filter_convergence_curve(v, alphas, 2.0);
    for (const auto& pt : curve.points) {
      const double f = pt.alpha * pt.alpha * 9.0;
      CHECK(pt.distance == doctest::Approx(f / (1.0 + f) * norm).epsilon(1e-12));
    }
    CHECK_THROWS_AS(filter_convergence_curve(v, std::span<const double>{}, 2.0), ParameterError);
  }

  TEST_CASE("distance shrinks with alpha and the L2 norm contracts") {
    auto g = SpectralGrid::create(2, 32, 2.0 * std::numbers::pi);
    const Field v = band_random(g, 11, 1.0, 10.0, 1.0);
    const std::array<double, 4> alphas{0.4, 0.2, 0.1, 0.05};
    const auto curve = filter_convergence_curve(v, alphas, 2.0);
    for (std::size_t i = 1; i < curve.points.size(); ++i)
      CHECK(curve.points[i].distance <= curve.points[i - 1].distance);
    const auto mon = filter_smoothing_monitor(v, alphas, 2.0, 4.0);
    CHECK(mon.all_contractive);
    CHECK(mon.gamma1 == doctest::Approx(0.25));
  }
}
