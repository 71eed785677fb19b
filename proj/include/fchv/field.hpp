#pragma once

#include <span>
#include <vector>

#include "fchv/fft.hpp"
#include "fchv/grid.hpp"

namespace fchv {

enum class Representation { physical, spectral };
enum class Direction { forward, inverse };

/// Real multi-component field on a SpectralGrid, held either as physical
/// samples or as half-spectrum coefficients. A vector field has
/// grid.dim() components, a scalar field one.
class Field {
 public:
  Field(GridPtr grid, int components, Representation rep);

  static Field vector(GridPtr grid, Representation rep = Representation::physical);
  static Field scalar(GridPtr grid, Representation rep = Representation::physical);

  const SpectralGrid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  int components() const noexcept { return components_; }
  bool is_vector() const noexcept { return components_ == grid_->dim(); }
  Representation representation() const noexcept { return rep_; }
  bool is_spectral() const noexcept { return rep_ == Representation::spectral; }

  std::span<double> physical(int c);
  std::span<const double> physical(int c) const;
  std::span<Complex> spectral(int c);
  std::span<const Complex> spectral(int c) const;

  /// Zero copy of the same shape and representation.
  Field zeros_like() const { return Field(grid_, components_, rep_); }

 private:
  GridPtr grid_;
  int components_;
  Representation rep_;
  std::vector<RealBuffer> phys_;
  std::vector<ComplexBuffer> spec_;
};

/// Forward maps physical -> spectral, inverse maps spectral -> physical.
/// Throws ContractError when the field is not in the direction's source
/// representation.
Field transform(const Field& field, Direction direction);

/// Representation-agnostic conversions (copy when already there).
Field to_spectral(const Field& field);
Field to_physical(const Field& field);

void require_same_grid(const Field& a, const Field& b, const char* op);
void require_vector(const Field& f, const char* op);

}  // namespace fchv
