#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "fchv/fft.hpp"

namespace fchv {

/// Periodic box [-L/2, L/2)^dim sampled with N points per axis.
///
/// Spectral coefficients use the real-to-complex half layout: the last axis
/// stores m = 0..N/2, every other axis stores m = 0..N/2-1, -N/2..-1 in FFT
/// order. The wavenumber of lattice index m is k = (2*pi/L) * m. The index
/// m = -N/2 (and m = N/2 on the last axis) is the Nyquist index of that axis;
/// it has no mirror partner on the lattice.
class SpectralGrid {
 public:
  static std::shared_ptr<const SpectralGrid> create(int dim, int n, double length);

  SpectralGrid(int dim, int n, double length);

  int dim() const noexcept { return dim_; }
  int n() const noexcept { return n_; }
  double length() const noexcept { return length_; }
  double spacing() const noexcept { return length_ / n_; }
  double fundamental() const noexcept { return fundamental_; }
  /// (L/N)^dim, the Riemann-sum weight of a physical sample.
  double cell_volume() const noexcept { return cell_volume_; }
  /// L^dim / N^(2 dim): sum_k |c_k|^2 * weight equals the physical L2 norm.
  double parseval_weight() const noexcept { return parseval_weight_; }

  std::size_t physical_size() const noexcept { return physical_size_; }
  std::size_t spectral_size() const noexcept { return spectral_size_; }
  /// Length of the contiguous last (half) axis of the spectral array.
  std::size_t half_length() const noexcept { return static_cast<std::size_t>(n_ / 2 + 1); }
  std::size_t spectral_rows() const noexcept { return spectral_size_ / half_length(); }
  std::size_t physical_rows() const noexcept { return physical_size_ / static_cast<std::size_t>(n_); }

  /// Signed lattice index of `mode` along `axis`.
  int lattice_index(int axis, std::size_t mode) const noexcept {
    return index_[static_cast<std::size_t>(axis)][mode];
  }
  std::span<const double> wavenumbers(int axis) const noexcept {
    return k_[static_cast<std::size_t>(axis)];
  }
  std::span<const double> k_squared() const noexcept { return k2_; }
  /// 1 where every axis index has |m| <= N/3 (two-thirds rule).
  std::span<const unsigned char> dealias_mask() const noexcept { return keep_; }
  /// 1 where some axis sits at its Nyquist index.
  std::span<const unsigned char> nyquist_mask() const noexcept { return nyquist_; }
  /// Multiplicity of a stored mode in the full spectrum (1 or 2).
  std::span<const double> mode_multiplicity() const noexcept { return multiplicity_; }

  /// Physical coordinate of sample index i along any axis: (i - N/2) * L/N.
  double coordinate(int i) const noexcept { return (i - n_ / 2) * spacing(); }
  std::array<int, 3> physical_index(std::size_t flat) const noexcept;

  const FftPlans& fft() const noexcept { return *plans_; }

  bool same_shape(const SpectralGrid& other) const noexcept {
    return dim_ == other.dim_ && n_ == other.n_ && length_ == other.length_;
  }

 private:
  int dim_;
  int n_;
  double length_;
  double fundamental_;
  double cell_volume_;
  double parseval_weight_;
  std::size_t physical_size_;
  std::size_t spectral_size_;
  std::array<std::vector<int>, 3> index_;
  std::array<std::vector<double>, 3> k_;
  std::vector<double> k2_;
  std::vector<unsigned char> keep_;
  std::vector<unsigned char> nyquist_;
  std::vector<double> multiplicity_;
  std::unique_ptr<FftPlans> plans_;
};

using GridPtr = std::shared_ptr<const SpectralGrid>;

}  // namespace fchv
