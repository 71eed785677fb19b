#include "fchv/grid.hpp"

#include <cmath>
#include <numbers>

#include "fchv/error.hpp"

namespace fchv {

std::shared_ptr<const SpectralGrid> SpectralGrid::create(int dim, int n, double length) {
  return std::make_shared<const SpectralGrid>(dim, n, length);
}

SpectralGrid::SpectralGrid(int dim, int n, double length)
    : dim_(dim), n_(n), length_(length) {
  if (dim != 2 && dim != 3) throw ParameterError("SpectralGrid: dim must be 2 or 3");
  if (n < 8 || n % 2 != 0) throw ParameterError("SpectralGrid: N must be even and >= 8");
  if (!(length > 0.0) || !std::isfinite(length))
    throw ParameterError("SpectralGrid: box length must be positive");

  fundamental_ = 2.0 * std::numbers::pi / length;
  cell_volume_ = std::pow(length / n, dim);
  parseval_weight_ = std::pow(length, dim) / std::pow(static_cast<double>(n), 2 * dim);

  const std::size_t un = static_cast<std::size_t>(n);
  const std::size_t half = un / 2 + 1;
  physical_size_ = dim == 2 ? un * un : un * un * un;
  spectral_size_ = physical_size_ / un * half;

  for (int a = 0; a < dim; ++a) {
    index_[static_cast<std::size_t>(a)].resize(spectral_size_);
    k_[static_cast<std::size_t>(a)].resize(spectral_size_);
  }
  k2_.resize(spectral_size_);
  keep_.resize(spectral_size_);
  nyquist_.resize(spectral_size_);
  multiplicity_.resize(spectral_size_);

  auto full_axis = [n](std::size_t i) {
    const int ii = static_cast<int>(i);
    return ii < n / 2 ? ii : ii - n;
  };

  for (std::size_t s = 0; s < spectral_size_; ++s) {
    std::array<int, 3> m{};
    const std::size_t j = s % half;
    const std::size_t row = s / half;
    if (dim == 2) {
      m[0] = full_axis(row);
      m[1] = static_cast<int>(j);
    } else {
      m[0] = full_axis(row / un);
      m[1] = full_axis(row % un);
      m[2] = static_cast<int>(j);
    }
    double k2 = 0.0;
    bool keep = true;
    bool nyq = false;
    for (int a = 0; a < dim; ++a) {
      const auto ua = static_cast<std::size_t>(a);
      index_[ua][s] = m[ua];
      const double k = fundamental_ * m[ua];
      k_[ua][s] = k;
      k2 += k * k;
      if (3 * std::abs(m[ua]) > n) keep = false;
      if (std::abs(m[ua]) == n / 2) nyq = true;
    }
    k2_[s] = k2;
    keep_[s] = keep ? 1 : 0;
    nyquist_[s] = nyq ? 1 : 0;
    multiplicity_[s] = (j == 0 || static_cast<int>(j) == n / 2) ? 1.0 : 2.0;
  }

  plans_ = std::make_unique<FftPlans>(dim, n);
}

std::array<int, 3> SpectralGrid::physical_index(std::size_t flat) const noexcept {
  const std::size_t un = static_cast<std::size_t>(n_);
  std::array<int, 3> idx{};
  for (int a = dim_ - 1; a >= 0; --a) {
    idx[static_cast<std::size_t>(a)] = static_cast<int>(flat % un);
    flat /= un;
  }
  return idx;
}

}  // namespace fchv
