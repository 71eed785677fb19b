#pragma once

#include <string>

#include "fchv/grid.hpp"
#include "fchv/time_integrator.hpp"

namespace fchv {

// Layout, all little endian:
//   "FCHV"  u8 version  u32 dim  u32 N  f64 L  f64 nu  f64 beta  f64 alpha  f64 t
//   then for each component the half-spectrum coefficients in storage order
//   as interleaved (re, im) f64 pairs.
inline constexpr unsigned char checkpoint_version = 1;

struct Checkpoint {
  GridPtr grid;
  SimState state;
  double nu = 0.0;
  double beta = 0.0;
  double alpha = 0.0;
};

void save_checkpoint(const SimState& state, const SolverParams& params, const std::string& path);

/// When `expected` is given the stored grid must match its shape, and the
/// returned state lives on that grid.
Checkpoint load_checkpoint(const std::string& path, const GridPtr& expected = nullptr);

}  // namespace fchv
