#include <algorithm>
#include <cmath>
#include <vector>

#include "fchv/kernels.hpp"

namespace fchv::kernels::parallel {

namespace {

std::ptrdiff_t signed_size(std::size_t n) { return static_cast<std::ptrdiff_t>(n); }

}  // namespace

void scale(const SpectralGrid& grid, ComplexSpan data, std::span<const double> table) {
  (void)grid;
  const auto n = signed_size(data.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t s = 0; s < n; ++s) data[static_cast<std::size_t>(s)] *= table[static_cast<std::size_t>(s)];
}

void derivative(const SpectralGrid& grid, int axis, ConstComplexSpan in, ComplexSpan out) {
  const auto k = grid.wavenumbers(axis);
  const int nyq = -grid.n() / 2;
  const int nyq_last = grid.n() / 2;
  const auto n = signed_size(in.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ss = 0; ss < n; ++ss) {
    const auto s = static_cast<std::size_t>(ss);
    const int m = grid.lattice_index(axis, s);
    if (m == nyq || m == nyq_last) {
      out[s] = Complex{};
    } else {
      out[s] = Complex(-k[s] * in[s].imag(), k[s] * in[s].real());
    }
  }
}

void leray_project(const SpectralGrid& grid, std::span<const ComplexSpan> comps) {
  const int dim = grid.dim();
  const auto k2 = grid.k_squared();
  const auto nyq = grid.nyquist_mask();
  const double* kk[3] = {grid.wavenumbers(0).data(), grid.wavenumbers(1).data(),
                         dim == 3 ? grid.wavenumbers(2).data() : nullptr};
  const auto n = signed_size(grid.spectral_size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ss = 0; ss < n; ++ss) {
    const auto s = static_cast<std::size_t>(ss);
    if (nyq[s] || k2[s] == 0.0) {
      for (int c = 0; c < dim; ++c) comps[static_cast<std::size_t>(c)][s] = Complex{};
      continue;
    }
    Complex dot{};
    for (int c = 0; c < dim; ++c) dot += kk[c][s] * comps[static_cast<std::size_t>(c)][s];
    const Complex f = dot / k2[s];
    for (int c = 0; c < dim; ++c) comps[static_cast<std::size_t>(c)][s] -= kk[c][s] * f;
  }
}

void dealias(const SpectralGrid& grid, ComplexSpan data) {
  const auto keep = grid.dealias_mask();
  const auto n = signed_size(data.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t s = 0; s < n; ++s)
    if (!keep[static_cast<std::size_t>(s)]) data[static_cast<std::size_t>(s)] = Complex{};
}

double weighted_energy(const SpectralGrid& grid, std::span<const ConstComplexSpan> comps,
                       std::span<const double> table) {
  const std::size_t half = grid.half_length();
  const std::size_t rows = grid.spectral_rows();
  const auto mult = grid.mode_multiplicity();
  std::vector<double> partial(rows, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t rr = 0; rr < signed_size(rows); ++rr) {
    const auto r = static_cast<std::size_t>(rr);
    double acc = 0.0;
    for (std::size_t j = 0; j < half; ++j) {
      const std::size_t s = r * half + j;
      double e = 0.0;
      for (const auto& c : comps) e += std::norm(c[s]);
      acc += mult[s] * (table.empty() ? e : table[s] * e);
    }
    partial[r] = acc;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

double max_divergence(const SpectralGrid& grid, std::span<const ConstComplexSpan> comps) {
  const std::size_t half = grid.half_length();
  const std::size_t rows = grid.spectral_rows();
  std::vector<double> partial(rows, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t rr = 0; rr < signed_size(rows); ++rr) {
    const auto r = static_cast<std::size_t>(rr);
    double m = 0.0;
    for (std::size_t j = 0; j < half; ++j) {
      const std::size_t s = r * half + j;
      Complex dot{};
      for (std::size_t c = 0; c < comps.size(); ++c)
        dot += grid.wavenumbers(static_cast<int>(c))[s] * comps[c][s];
      m = std::max(m, std::abs(dot));
    }
    partial[r] = m;
  }
  double total = 0.0;
  for (double p : partial) total = std::max(total, p);
  return total;
}

void multiply_add(std::span<double> acc, std::span<const double> a, std::span<const double> b) {
  const auto n = signed_size(acc.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < n; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    acc[i] += a[i] * b[i];
  }
}

}  // namespace fchv::kernels::parallel
