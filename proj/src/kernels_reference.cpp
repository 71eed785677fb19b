#include <algorithm>
#include <cmath>

#include "fchv/kernels.hpp"

namespace fchv::kernels::reference {

namespace {

double wavenumber(const SpectralGrid& grid, int axis, std::size_t s) {
  return grid.fundamental() * grid.lattice_index(axis, s);
}

bool at_nyquist(const SpectralGrid& grid, int axis, std::size_t s) {
  return std::abs(grid.lattice_index(axis, s)) == grid.n() / 2;
}

}  // namespace

void scale(const SpectralGrid&, ComplexSpan data, std::span<const double> table) {
  for (std::size_t s = 0; s < data.size(); ++s) data[s] *= table[s];
}

void derivative(const SpectralGrid& grid, int axis, ConstComplexSpan in, ComplexSpan out) {
  for (std::size_t s = 0; s < in.size(); ++s) {
    if (at_nyquist(grid, axis, s)) {
      out[s] = Complex{};
      continue;
    }
    const double k = wavenumber(grid, axis, s);
    out[s] = Complex(-k * in[s].imag(), k * in[s].real());
  }
}

void leray_project(const SpectralGrid& grid, std::span<const ComplexSpan> comps) {
  const int dim = grid.dim();
  for (std::size_t s = 0; s < grid.spectral_size(); ++s) {
    double k[3] = {0.0, 0.0, 0.0};
    double k2 = 0.0;
    bool nyq = false;
    for (int a = 0; a < dim; ++a) {
      k[a] = wavenumber(grid, a, s);
      k2 += k[a] * k[a];
      nyq = nyq || at_nyquist(grid, a, s);
    }
    if (nyq || k2 == 0.0) {
      for (int c = 0; c < dim; ++c) comps[static_cast<std::size_t>(c)][s] = Complex{};
      continue;
    }
    Complex dot{};
    for (int c = 0; c < dim; ++c) dot += k[c] * comps[static_cast<std::size_t>(c)][s];
    const Complex f = dot / k2;
    for (int c = 0; c < dim; ++c) comps[static_cast<std::size_t>(c)][s] -= k[c] * f;
  }
}

void dealias(const SpectralGrid& grid, ComplexSpan data) {
  for (std::size_t s = 0; s < data.size(); ++s) {
    for (int a = 0; a < grid.dim(); ++a) {
      if (3 * std::abs(grid.lattice_index(a, s)) > grid.n()) {
        data[s] = Complex{};
        break;
      }
    }
  }
}

double weighted_energy(const SpectralGrid& grid, std::span<const ConstComplexSpan> comps,
                       std::span<const double> table) {
  const std::size_t half = grid.half_length();
  const int last = grid.n() / 2;
  double total = 0.0;
  for (std::size_t r = 0; r < grid.spectral_rows(); ++r) {
    double acc = 0.0;
    for (std::size_t j = 0; j < half; ++j) {
      const std::size_t s = r * half + j;
      double e = 0.0;
      for (const auto& c : comps) e += std::norm(c[s]);
      const double mult = (j == 0 || static_cast<int>(j) == last) ? 1.0 : 2.0;
      acc += mult * (table.empty() ? e : table[s] * e);
    }
    total += acc;
  }
  return total;
}

double max_divergence(const SpectralGrid& grid, std::span<const ConstComplexSpan> comps) {
  double m = 0.0;
  for (std::size_t s = 0; s < grid.spectral_size(); ++s) {
    Complex dot{};
    for (std::size_t c = 0; c < comps.size(); ++c)
      dot += wavenumber(grid, static_cast<int>(c), s) * comps[c][s];
    m = std::max(m, std::abs(dot));
  }
  return m;
}

void multiply_add(std::span<double> acc, std::span<const double> a, std::span<const double> b) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += a[i] * b[i];
}

}  // namespace fchv::kernels::reference
