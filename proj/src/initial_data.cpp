#include "fchv/initial_data.hpp"

#include <cmath>
#include <random>

#include "fchv/error.hpp"
#include "fchv/field_ops.hpp"
#include "fchv/spectral.hpp"

namespace fchv {

namespace {

template <class Fn>
void fill_points(Field& f, Fn&& fn) {
  const auto& g = f.grid();
  std::array<double, 3> x{};
  for (std::size_t i = 0; i < g.physical_size(); ++i) {
    const auto idx = g.physical_index(i);
    for (int a = 0; a < g.dim(); ++a) x[static_cast<std::size_t>(a)] = g.coordinate(idx[static_cast<std::size_t>(a)]);
    fn(i, x);
  }
}

}  // namespace

Field stream_bump(const GridPtr& grid, double amplitude, double sigma) {
  if (!(sigma > 0.0)) throw ParameterError("stream_bump: sigma must be positive");
  Field v = Field::vector(grid);
  const double s2 = sigma * sigma;
  auto v0 = v.physical(0);
  auto v1 = v.physical(1);
  fill_points(v, [&](std::size_t i, const std::array<double, 3>& x) {
    const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    const double psi = amplitude * std::exp(-r2 / s2);
    v0[i] = 2.0 * x[1] / s2 * psi;
    v1[i] = -2.0 * x[0] / s2 * psi;
  });
  return v;
}

Field projected_bump(const GridPtr& grid, double amplitude, double sigma) {
  if (!(sigma > 0.0)) throw ParameterError("projected_bump: sigma must be positive");
  Field g = Field::vector(grid);
  const double s2 = sigma * sigma;
  auto g0 = g.physical(0);
  fill_points(g, [&](std::size_t i, const std::array<double, 3>& x) {
    g0[i] = amplitude * std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / s2);
  });
  return leray_project(g).field;
}

Field band_random(const GridPtr& grid, std::uint64_t seed, double band_lo, double band_hi,
                  double amplitude) {
  if (!(band_lo >= 0.0 && band_hi > band_lo)) throw ParameterError("band_random: invalid band");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Field noise = Field::vector(grid);
  for (int c = 0; c < noise.components(); ++c)
    for (double& x : noise.physical(c)) x = normal(rng);
  Field v = to_spectral(noise);
  const auto& g = v.grid();
  for (std::size_t s = 0; s < g.spectral_size(); ++s) {
    double m2 = 0.0;
    for (int a = 0; a < g.dim(); ++a) m2 += static_cast<double>(g.lattice_index(a, s)) * g.lattice_index(a, s);
    const double m = std::sqrt(m2);
    if (m < band_lo || m > band_hi || g.nyquist_mask()[s])
      for (int c = 0; c < v.components(); ++c) v.spectral(c)[s] = Complex{};
  }
  v = leray_project(v).field;
  const double norm = std::sqrt(sobolev_seminorm_sq(v, 0.0));
  if (norm == 0.0) throw ParameterError("band_random: band contains no modes");
  for (int c = 0; c < v.components(); ++c)
    for (auto& x : v.spectral(c)) x *= amplitude / norm;
  return v;
}

Field taylor_green(const GridPtr& grid, double amplitude) {
  if (grid->dim() != 2) throw ParameterError("taylor_green: 2D only");
  Field v = Field::vector(grid);
  const double k = grid->fundamental();
  auto v0 = v.physical(0);
  auto v1 = v.physical(1);
  fill_points(v, [&](std::size_t i, const std::array<double, 3>& x) {
    v0[i] = amplitude * std::cos(k * x[0]) * std::sin(k * x[1]);
    v1[i] = -amplitude * std::sin(k * x[0]) * std::cos(k * x[1]);
  });
  return v;
}

Field scaled_stream_bump(const GridPtr& grid, double amplitude, double sigma, double eps) {
  if (!(eps > 0.0)) throw ParameterError("scaled_stream_bump: eps must be positive");
  const double n = grid->dim();
  return stream_bump(grid, amplitude * std::pow(eps, 0.5 * n - 1.0), sigma / eps);
}

Field unfilter(const Field& u, double alpha) {
  if (!(alpha >= 0.0)) throw ParameterError("unfilter: alpha must be >= 0");
  Field s = to_spectral(u);
  const auto k2 = s.grid().k_squared();
  const double a2 = alpha * alpha;
  for (int c = 0; c < s.components(); ++c) {
    auto d = s.spectral(c);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] *= 1.0 + a2 * k2[i];
  }
  return u.is_spectral() ? s : to_physical(s);
}

}  // namespace fchv
