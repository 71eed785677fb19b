#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fchv/error.hpp"
#include "fchv/field.hpp"
#include "fchv/spectral.hpp"
#include "test_support.hpp"

using namespace fchv;

TEST_SUITE("grid_fft") {
  TEST_CASE("grid rejects invalid shapes") {
    CHECK_THROWS_AS(SpectralGrid::create(1, 32, 1.0), ParameterError);
    CHECK_THROWS_AS(SpectralGrid::create(2, 33, 1.0), ParameterError);
    CHECK_THROWS_AS(SpectralGrid::create(2, 32, -1.0), ParameterError);
  }

  TEST_CASE("spectral layout and wavenumber tables") {
    for (int dim : {2, 3}) {
      const int n = 16;
      auto g = SpectralGrid::create(dim, n, 4.0 * std::numbers::pi);
      CHECK(g->spectral_size() == g->spectral_rows() * g->half_length());
      CHECK(g->fundamental() == doctest::Approx(0.5));
      double total = 0.0;
      for (double m : g->mode_multiplicity()) total += m;
      CHECK(total == doctest::Approx(std::pow(n, dim)));
      const auto keep = g->dealias_mask();
      for (std::size_t s = 0; s < g->spectral_size(); ++s) {
        bool inside = true;
        for (int a = 0; a < dim; ++a) inside = inside && std::abs(g->lattice_index(a, s)) <= n / 3;
        CHECK(static_cast<bool>(keep[s]) == inside);
      }
    }
  }

  TEST_CASE("transform round trip and Parseval") {
    for (int dim : {2, 3}) {
      auto g = SpectralGrid::create(dim, 16, 3.0);
      Field f = Field::vector(g);
      std::mt19937_64 rng(7);
      std::normal_distribution<double> normal;
      for (int c = 0; c < dim; ++c)
        for (double& x : f.physical(c)) x = normal(rng);
      const Field back = to_physical(to_spectral(f));
      CHECK(testing::max_abs_diff(f, back) <= 1e-13);
      double phys = 0.0;
      for (int c = 0; c < dim; ++c)
        for (double x : f.physical(c)) phys += x * x;
      phys *= g->cell_volume();
      CHECK(sobolev_seminorm_sq(f, 0.0) == doctest::Approx(phys).epsilon(1e-12));
    }
  }

  TEST_CASE("accessing the wrong representation is a contract error") {
    auto g = SpectralGrid::create(2, 8, 1.0);
    Field f = Field::scalar(g);
    CHECK_THROWS_AS(f.spectral(0), ContractError);
    const Field s = to_spectral(f);
    CHECK_THROWS_AS(s.physical(0), ContractError);
  }
}
