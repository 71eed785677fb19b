#pragma once

// Per-mode and per-sample loops that dominate solver time. Each kernel has an
// OpenMP version (namespace parallel) and a plain serial version (namespace
// reference) that recomputes wavenumbers from lattice indices instead of
// reading the grid's cached tables. The reference versions exist for tests
// and for the benchmark; library code calls the parallel ones.
//
// Reductions are summed per spectral row and the row partials are added in
// row order, so results are bitwise independent of the thread count.

#include <span>

#include "fchv/fft.hpp"
#include "fchv/grid.hpp"

namespace fchv::kernels {

using ComplexSpan = std::span<Complex>;
using ConstComplexSpan = std::span<const Complex>;

namespace parallel {

/// data[s] *= table[s]
void scale(const SpectralGrid& grid, ComplexSpan data, std::span<const double> table);
/// out = i * k_axis * in, with the Nyquist index of `axis` set to zero.
void derivative(const SpectralGrid& grid, int axis, ConstComplexSpan in, ComplexSpan out);
/// v <- (I - k k^T / |k|^2) v per mode; zero mode and Nyquist modes zeroed.
void leray_project(const SpectralGrid& grid, std::span<const ComplexSpan> comps);
/// Zero every mode with some |m| > N/3.
void dealias(const SpectralGrid& grid, ComplexSpan data);
/// sum over the full spectrum of table[s] * |c_s|^2 (table may be empty = 1).
double weighted_energy(const SpectralGrid& grid, std::span<const ConstComplexSpan> comps,
                       std::span<const double> table);
/// max_s |k . c_s|
double max_divergence(const SpectralGrid& grid, std::span<const ConstComplexSpan> comps);
/// acc[i] += a[i] * b[i]
void multiply_add(std::span<double> acc, std::span<const double> a, std::span<const double> b);

}  // namespace parallel

namespace reference {

void scale(const SpectralGrid& grid, ComplexSpan data, std::span<const double> table);
void derivative(const SpectralGrid& grid, int axis, ConstComplexSpan in, ComplexSpan out);
void leray_project(const SpectralGrid& grid, std::span<const ComplexSpan> comps);
void dealias(const SpectralGrid& grid, ComplexSpan data);
double weighted_energy(const SpectralGrid& grid, std::span<const ConstComplexSpan> comps,
                       std::span<const double> table);
double max_divergence(const SpectralGrid& grid, std::span<const ConstComplexSpan> comps);
void multiply_add(std::span<double> acc, std::span<const double> a, std::span<const double> b);

}  // namespace reference

using namespace parallel;

}  // namespace fchv::kernels
