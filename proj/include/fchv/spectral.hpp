#pragma once

#include <functional>
#include <span>
#include <vector>

#include "fchv/field.hpp"

namespace fchv {

/// Real Fourier symbol tabulated on a grid's half spectrum.
///
/// The symbol must be even (sigma(-k) == sigma(k)) and finite on every lattice
/// point, otherwise applying it would break the realness of the field; both
/// are checked at construction. The value at k = 0 is passed explicitly since
/// symbols like |k|^(2s) or k k^T/|k|^2 are not defined there by formula.
class Multiplier {
 public:
  using Symbol = std::function<double(std::span<const double> k)>;

  Multiplier(const GridPtr& grid, const Symbol& symbol, double value_at_zero);

  static Multiplier identity(const GridPtr& grid);
  /// |k|^(2 beta)
  static Multiplier fractional_laplacian(const GridPtr& grid, double beta);
  /// 1 / (1 + alpha^2 |k|^2)
  static Multiplier helmholtz_inverse(const GridPtr& grid, double alpha);
  /// exp(-t |k|^gamma0)
  static Multiplier heat(const GridPtr& grid, double gamma0, double t);

  const SpectralGrid& grid() const noexcept { return *grid_; }
  std::span<const double> table() const noexcept { return table_; }

 private:
  Multiplier(GridPtr grid, std::vector<double> table);
  GridPtr grid_;
  std::vector<double> table_;
};

Field apply_multiplier(const Field& field, const Multiplier& mult);

/// (-Delta)^beta via the symbol |k|^(2 beta), beta in (0, 1]. The result
/// has the input's representation.
Field fractional_laplacian(const Field& field, double beta);

/// Entry j holds d/dx_j of every component of `field`.
std::vector<Field> gradient(const Field& field);
Field divergence(const Field& field);
Field laplacian(const Field& field);
/// Scalar vorticity in 2D, vector curl in 3D.
Field curl(const Field& field);

/// Two-thirds rule; spectral input only.
Field dealias(const Field& field);
/// Zero the k = 0 coefficient of every component (spectral input only).
void remove_mean(Field& field);

/// Discrete L2 inner product sum_i a_i b_i (L/N)^dim, any representations.
double inner_product(const Field& a, const Field& b);
/// sum_k |k|^(2 s) |f_k|^2 * parseval weight: ||Lambda^s f||^2, also
/// ||grad^m f||^2 for s = m.
double sobolev_seminorm_sq(const Field& field, double s);
/// Largest deviation from Hermitian symmetry on the self-conjugate planes of
/// the half spectrum (zero for any spectrum of a real field).
double hermitian_defect(const Field& field);
/// max_k |f_k| over the stored modes, Euclidean over components.
double max_coefficient(const Field& field);

/// (-Delta)^beta of periodic samples on [-L/2, L/2) in one dimension.
std::vector<double> fractional_laplacian_1d(std::span<const double> samples, double length,
                                            double beta);

}  // namespace fchv
