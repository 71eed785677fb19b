#include "fchv/field.hpp"

#include <string>

#include "fchv/error.hpp"

namespace fchv {

Field::Field(GridPtr grid, int components, Representation rep)
    : grid_(std::move(grid)), components_(components), rep_(rep) {
  if (!grid_) throw ContractError("Field: null grid");
  if (components < 1) throw ContractError("Field: need at least one component");
  const auto count = static_cast<std::size_t>(components);
  if (rep == Representation::physical) {
    phys_.assign(count, RealBuffer(grid_->physical_size(), 0.0));
  } else {
    spec_.assign(count, ComplexBuffer(grid_->spectral_size(), Complex{}));
  }
}

Field Field::vector(GridPtr grid, Representation rep) {
  const int dim = grid->dim();
  return Field(std::move(grid), dim, rep);
}

Field Field::scalar(GridPtr grid, Representation rep) { return Field(std::move(grid), 1, rep); }

std::span<double> Field::physical(int c) {
  if (rep_ != Representation::physical) throw ContractError("Field::physical on spectral field");
  return phys_.at(static_cast<std::size_t>(c));
}

std::span<const double> Field::physical(int c) const {
  if (rep_ != Representation::physical) throw ContractError("Field::physical on spectral field");
  return phys_.at(static_cast<std::size_t>(c));
}

std::span<Complex> Field::spectral(int c) {
  if (rep_ != Representation::spectral) throw ContractError("Field::spectral on physical field");
  return spec_.at(static_cast<std::size_t>(c));
}

std::span<const Complex> Field::spectral(int c) const {
  if (rep_ != Representation::spectral) throw ContractError("Field::spectral on physical field");
  return spec_.at(static_cast<std::size_t>(c));
}

Field transform(const Field& field, Direction direction) {
  const auto& plans = field.grid().fft();
  if (direction == Direction::forward) {
    if (field.is_spectral()) throw ContractError("transform(forward): field already spectral");
    Field out(field.grid_ptr(), field.components(), Representation::spectral);
    for (int c = 0; c < field.components(); ++c) plans.forward(field.physical(c), out.spectral(c));
    return out;
  }
  if (!field.is_spectral()) throw ContractError("transform(inverse): field already physical");
  Field out(field.grid_ptr(), field.components(), Representation::physical);
  for (int c = 0; c < field.components(); ++c) plans.inverse(field.spectral(c), out.physical(c));
  return out;
}

Field to_spectral(const Field& field) {
  return field.is_spectral() ? field : transform(field, Direction::forward);
}

Field to_physical(const Field& field) {
  return field.is_spectral() ? transform(field, Direction::inverse) : field;
}

void require_same_grid(const Field& a, const Field& b, const char* op) {
  if (a.grid_ptr() != b.grid_ptr() && !a.grid().same_shape(b.grid()))
    throw ContractError(std::string(op) + ": fields live on different grids");
}

void require_vector(const Field& f, const char* op) {
  if (!f.is_vector())
    throw ContractError(std::string(op) + ": expected a vector field with dim components");
}

}  // namespace fchv
