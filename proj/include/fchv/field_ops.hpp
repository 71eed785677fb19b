#pragma once

#include "fchv/field.hpp"

namespace fchv {

/// A vector field together with the outcome of a spectral divergence test.
struct ProjectedField {
  Field field;
  bool divergence_free = false;
};

/// max |k . v_k| <= 1e-10 * max|v_k| * max|k|
bool divergence_certificate(const Field& v);

/// Per-mode (I - k k^T/|k|^2). Output keeps the input representation.
ProjectedField leray_project(const Field& v);

/// u.grad v + v.grad u^T with (v.grad u^T)_i = sum_j v_j d_i u_j, products
/// formed on the grid. Spectral result; dealiased unless `dealias` is false.
Field ch_nonlinear_term(const Field& u, const Field& v, bool dealias = true);

/// w.grad w, spectral result.
Field nse_nonlinear_term(const Field& w, bool dealias = true);

/// u.grad v - u.grad v^T, which differs from ch_nonlinear_term by grad(u.v).
Field ch_rotational_term(const Field& u, const Field& v, bool dealias = true);

struct Residual {
  double absolute = 0.0;
  double relative = 0.0;
};

/// Max-norm mismatch between grad(sum_i u_i v_i) and u.grad v^T + v.grad u^T,
/// both sides dealiased. Relative to the max norm of the right side.
Residual symmetrized_identity_residual(const Field& u, const Field& v);

/// Pressure p with zero mean solving
///   -Lap(p + u.v) = div(u.grad v - u.grad v^T).
/// Spectral scalar result. Velocities with a mean component are rejected.
Field recover_pressure(const Field& u, const Field& v);

}  // namespace fchv
