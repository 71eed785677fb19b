#include <doctest.h>

#include <random>

#include "fchv/kernels.hpp"

using namespace fchv;

namespace {

std::vector<ComplexBuffer> random_spectrum(const SpectralGrid& g, int comps, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<ComplexBuffer> out;
  for (int c = 0; c < comps; ++c) {
    ComplexBuffer b(g.spectral_size());
    for (std::size_t s = 0; s < g.spectral_size(); ++s) b[s] = {normal(rng), normal(rng)};
    out.push_back(std::move(b));
  }
  return out;
}

bool identical(std::span<const Complex> a, std::span<const Complex> b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("parallel and reference kernels agree bitwise") {
    for (int dim : {2, 3}) {
      auto g = SpectralGrid::create(dim, 12, 5.0);
      auto a = random_spectrum(*g, dim, 1);
      auto b = random_spectrum(*g, dim, 1);
      std::vector<double> table(g->spectral_size());
      for (std::size_t s = 0; s < table.size(); ++s) table[s] = 1.0 / (1.0 + g->k_squared()[s]);

      kernels::parallel::scale(*g, a[0], table);
      kernels::reference::scale(*g, b[0], table);
      CHECK(identical(a[0], b[0]));

      ComplexBuffer da(g->spectral_size()), db(g->spectral_size());
      for (int axis = 0; axis < dim; ++axis) {
        kernels::parallel::derivative(*g, axis, a[1], da);
        kernels::reference::derivative(*g, axis, b[1], db);
        CHECK(identical(da, db));
      }

      std::vector<kernels::ComplexSpan> sa, sb;
      for (int c = 0; c < dim; ++c) {
        sa.emplace_back(a[static_cast<std::size_t>(c)]);
        sb.emplace_back(b[static_cast<std::size_t>(c)]);
      }
      kernels::parallel::leray_project(*g, sa);
      kernels::reference::leray_project(*g, sb);
      for (int c = 0; c < dim; ++c) CHECK(identical(a[static_cast<std::size_t>(c)], b[static_cast<std::size_t>(c)]));

      std::vector<kernels::ConstComplexSpan> ca(sa.begin(), sa.end()), cb(sb.begin(), sb.end());
      CHECK(kernels::parallel::weighted_energy(*g, ca, table) == kernels::reference::weighted_energy(*g, cb, table));
      CHECK(kernels::parallel::weighted_energy(*g, ca, {}) == kernels::reference::weighted_energy(*g, cb, {}));
      CHECK(kernels::parallel::max_divergence(*g, ca) == kernels::reference::max_divergence(*g, cb));

      kernels::parallel::dealias(*g, a[0]);
      kernels::reference::dealias(*g, b[0]);
      CHECK(identical(a[0], b[0]));
    }
  }

  TEST_CASE("multiply_add") {
    std::vector<double> acc1{1, 2, 3}, acc2{1, 2, 3};
    const std::vector<double> x{2, 3, 4}, y{5, 6, 7};
    kernels::parallel::multiply_add(acc1, x, y);
    kernels::reference::multiply_add(acc2, x, y);
    CHECK(acc1 == acc2);
    CHECK(acc1[2] == 31.0);
  }

  TEST_CASE("projected spectrum has no divergence") {
    auto g = SpectralGrid::create(2, 16, 2.0);
    auto a = random_spectrum(*g, 2, 3);
    std::vector<kernels::ComplexSpan> sa{a[0], a[1]};
    kernels::leray_project(*g, sa);
    std::vector<kernels::ConstComplexSpan> ca{a[0], a[1]};
    CHECK(kernels::max_divergence(*g, ca) <= 1e-12);
  }
}
