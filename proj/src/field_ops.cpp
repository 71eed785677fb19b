#include "fchv/field_ops.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "fchv/error.hpp"
#include "fchv/kernels.hpp"
#include "fchv/spectral.hpp"

namespace fchv {

namespace {

std::vector<kernels::ConstComplexSpan> const_spans(const Field& f) {
  std::vector<kernels::ConstComplexSpan> out;
  for (int c = 0; c < f.components(); ++c) out.push_back(f.spectral(c));
  return out;
}

// grad[j].physical(i) = d_j f_i on the grid.
std::vector<Field> physical_gradient(const Field& spec) {
  std::vector<Field> out;
  const auto& g = spec.grid();
  Field d = spec.zeros_like();
  for (int j = 0; j < g.dim(); ++j) {
    for (int c = 0; c < spec.components(); ++c) kernels::derivative(g, j, spec.spectral(c), d.spectral(c));
    out.push_back(to_physical(d));
  }
  return out;
}

Field finish(Field&& phys, bool dealias) {
  Field spec = to_spectral(phys);
  if (dealias)
    for (int c = 0; c < spec.components(); ++c) kernels::dealias(spec.grid(), spec.spectral(c));
  return spec;
}

void check_pair(const Field& u, const Field& v, const char* op) {
  require_same_grid(u, v, op);
  require_vector(u, op);
  require_vector(v, op);
}

// out_i += sum_j a_j d_j b_i
void add_advection(Field& out, const Field& a, const std::vector<Field>& grad_b) {
  for (int i = 0; i < out.components(); ++i)
    for (int j = 0; j < out.components(); ++j)
      kernels::multiply_add(out.physical(i), a.physical(j), grad_b[static_cast<std::size_t>(j)].physical(i));
}

// out_i += sign * sum_j a_j d_i b_j
void add_transpose(Field& out, const Field& a, const std::vector<Field>& grad_b, double sign) {
  std::vector<double> tmp(out.grid().physical_size());
  for (int i = 0; i < out.components(); ++i) {
    std::fill(tmp.begin(), tmp.end(), 0.0);
    for (int j = 0; j < out.components(); ++j)
      kernels::multiply_add(tmp, a.physical(j), grad_b[static_cast<std::size_t>(i)].physical(j));
    auto o = out.physical(i);
    for (std::size_t s = 0; s < tmp.size(); ++s) o[s] += sign * tmp[s];
  }
}

}  // namespace

bool divergence_certificate(const Field& v) {
  require_vector(v, "divergence_certificate");
  const Field spec = to_spectral(v);
  const auto& g = spec.grid();
  const double div = kernels::max_divergence(g, const_spans(spec));
  const double kmax = std::sqrt(*std::max_element(g.k_squared().begin(), g.k_squared().end()));
  return div <= 1e-10 * max_coefficient(spec) * kmax;
}

ProjectedField leray_project(const Field& v) {
  require_vector(v, "leray_project");
  Field spec = to_spectral(v);
  std::vector<kernels::ComplexSpan> spans;
  for (int c = 0; c < spec.components(); ++c) spans.push_back(spec.spectral(c));
  kernels::leray_project(spec.grid(), spans);
  const bool ok = divergence_certificate(spec);
  return {v.is_spectral() ? std::move(spec) : to_physical(spec), ok};
}

Field ch_nonlinear_term(const Field& u, const Field& v, bool dealias) {
  check_pair(u, v, "ch_nonlinear_term");
  const Field us = to_spectral(u);
  const Field vs = to_spectral(v);
  const Field up = to_physical(u);
  const Field vp = to_physical(v);
  const auto grad_u = physical_gradient(us);
  const auto grad_v = physical_gradient(vs);
  Field out = Field::vector(u.grid_ptr());
  add_advection(out, up, grad_v);
  add_transpose(out, vp, grad_u, 1.0);
  return finish(std::move(out), dealias);
}

Field nse_nonlinear_term(const Field& w, bool dealias) {
  require_vector(w, "nse_nonlinear_term");
  const Field ws = to_spectral(w);
  const Field wp = to_physical(w);
  const auto grad_w = physical_gradient(ws);
  Field out = Field::vector(w.grid_ptr());
  add_advection(out, wp, grad_w);
  return finish(std::move(out), dealias);
}

Field ch_rotational_term(const Field& u, const Field& v, bool dealias) {
  check_pair(u, v, "ch_rotational_term");
  const Field vs = to_spectral(v);
  const Field up = to_physical(u);
  const auto grad_v = physical_gradient(vs);
  Field out = Field::vector(u.grid_ptr());
  add_advection(out, up, grad_v);
  add_transpose(out, up, grad_v, -1.0);
  return finish(std::move(out), dealias);
}

Residual symmetrized_identity_residual(const Field& u, const Field& v) {
  check_pair(u, v, "symmetrized_identity_residual");
  const Field us = to_spectral(u);
  const Field vs = to_spectral(v);
  const Field up = to_physical(u);
  const Field vp = to_physical(v);

  Field dot = Field::scalar(u.grid_ptr());
  for (int i = 0; i < up.components(); ++i) kernels::multiply_add(dot.physical(0), up.physical(i), vp.physical(i));
  const Field dot_hat = finish(std::move(dot), true);
  const auto grad_dot = gradient(dot_hat);

  Field rhs = Field::vector(u.grid_ptr());
  add_transpose(rhs, up, physical_gradient(vs), 1.0);
  add_transpose(rhs, vp, physical_gradient(us), 1.0);
  const Field rhs_p = to_physical(finish(std::move(rhs), true));

  double diff = 0.0;
  double scale = 0.0;
  for (int i = 0; i < rhs_p.components(); ++i) {
    const Field gi = to_physical(grad_dot[static_cast<std::size_t>(i)]);
    const auto a = gi.physical(0);
    const auto b = rhs_p.physical(i);
    for (std::size_t s = 0; s < a.size(); ++s) {
      diff = std::max(diff, std::abs(a[s] - b[s]));
      scale = std::max(scale, std::abs(b[s]));
    }
  }
  return {diff, scale > 0.0 ? diff / scale : diff};
}

Field recover_pressure(const Field& u, const Field& v) {
  check_pair(u, v, "recover_pressure");
  const Field us = to_spectral(u);
  const Field vs = to_spectral(v);
  for (const Field* f : {&us, &vs}) {
    const double peak = max_coefficient(*f);
    for (int c = 0; c < f->components(); ++c)
      if (std::abs(f->spectral(c)[0]) > 1e-12 * peak)
        throw ParameterError("recover_pressure: velocity has a nonzero mean, source does not decay");
  }
  const Field f = ch_rotational_term(us, vs, true);
  Field big_p = divergence(f);
  const auto k2 = big_p.grid().k_squared();
  auto ph = big_p.spectral(0);
  for (std::size_t s = 0; s < ph.size(); ++s) ph[s] = k2[s] == 0.0 ? Complex{} : ph[s] / k2[s];

  const Field up = to_physical(us);
  const Field vp = to_physical(vs);
  Field dot = Field::scalar(u.grid_ptr());
  for (int i = 0; i < up.components(); ++i) kernels::multiply_add(dot.physical(0), up.physical(i), vp.physical(i));
  const Field dot_hat = finish(std::move(dot), true);
  const auto dh = dot_hat.spectral(0);
  for (std::size_t s = 0; s < ph.size(); ++s) ph[s] -= dh[s];
  remove_mean(big_p);
  return big_p;
}

}  // namespace fchv
