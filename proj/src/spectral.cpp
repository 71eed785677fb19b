#include "fchv/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "fchv/error.hpp"
#include "fchv/kernels.hpp"

namespace fchv {

namespace {

std::vector<kernels::ConstComplexSpan> const_spans(const Field& f) {
  std::vector<kernels::ConstComplexSpan> out;
  for (int c = 0; c < f.components(); ++c) out.push_back(f.spectral(c));
  return out;
}

Field restore(const Field& spectral_result, Representation rep) {
  return rep == Representation::spectral ? spectral_result : to_physical(spectral_result);
}

}  // namespace

Multiplier::Multiplier(GridPtr grid, std::vector<double> table)
    : grid_(std::move(grid)), table_(std::move(table)) {}

Multiplier::Multiplier(const GridPtr& grid, const Symbol& symbol, double value_at_zero)
    : grid_(grid), table_(grid->spectral_size()) {
  const int dim = grid->dim();
  std::array<double, 3> k{};
  std::array<double, 3> mk{};
  for (std::size_t s = 0; s < table_.size(); ++s) {
    bool zero = true;
    for (int a = 0; a < dim; ++a) {
      k[static_cast<std::size_t>(a)] = grid->wavenumbers(a)[s];
      mk[static_cast<std::size_t>(a)] = -k[static_cast<std::size_t>(a)];
      zero = zero && k[static_cast<std::size_t>(a)] == 0.0;
    }
    if (zero) {
      if (!std::isfinite(value_at_zero)) throw ParameterError("Multiplier: non-finite value at k=0");
      table_[s] = value_at_zero;
      continue;
    }
    const std::span<const double> ks(k.data(), static_cast<std::size_t>(dim));
    const std::span<const double> mks(mk.data(), static_cast<std::size_t>(dim));
    const double v = symbol(ks);
    const double w = symbol(mks);
    if (!std::isfinite(v)) throw ParameterError("Multiplier: symbol not finite on the lattice");
    if (std::abs(v - w) > 1e-14 * std::max(1.0, std::abs(v)))
      throw ParameterError("Multiplier: symbol is not even in k");
    table_[s] = v;
  }
}

Multiplier Multiplier::identity(const GridPtr& grid) {
  return Multiplier(grid, std::vector<double>(grid->spectral_size(), 1.0));
}

Multiplier Multiplier::fractional_laplacian(const GridPtr& grid, double beta) {
  std::vector<double> t(grid->spectral_size());
  const auto k2 = grid->k_squared();
  for (std::size_t s = 0; s < t.size(); ++s) t[s] = k2[s] == 0.0 ? 0.0 : std::pow(k2[s], beta);
  return Multiplier(grid, std::move(t));
}

Multiplier Multiplier::helmholtz_inverse(const GridPtr& grid, double alpha) {
  std::vector<double> t(grid->spectral_size());
  const auto k2 = grid->k_squared();
  const double a2 = alpha * alpha;
  for (std::size_t s = 0; s < t.size(); ++s) t[s] = 1.0 / (1.0 + a2 * k2[s]);
  return Multiplier(grid, std::move(t));
}

Multiplier Multiplier::heat(const GridPtr& grid, double gamma0, double t) {
  std::vector<double> tab(grid->spectral_size());
  const auto k2 = grid->k_squared();
  for (std::size_t s = 0; s < tab.size(); ++s)
    tab[s] = std::exp(-t * std::pow(std::sqrt(k2[s]), gamma0));
  return Multiplier(grid, std::move(tab));
}

Field apply_multiplier(const Field& field, const Multiplier& mult) {
  if (!field.is_spectral()) throw ContractError("apply_multiplier: spectral field required");
  if (!field.grid().same_shape(mult.grid()))
    throw ContractError("apply_multiplier: multiplier built for another grid");
  Field out = field;
  for (int c = 0; c < out.components(); ++c) kernels::scale(out.grid(), out.spectral(c), mult.table());
  return out;
}

Field fractional_laplacian(const Field& field, double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) throw ParameterError("fractional_laplacian: beta must lie in (0, 1]");
  const Field spec = to_spectral(field);
  return restore(apply_multiplier(spec, Multiplier::fractional_laplacian(field.grid_ptr(), beta)),
                 field.representation());
}

std::vector<Field> gradient(const Field& field) {
  const Field spec = to_spectral(field);
  std::vector<Field> out;
  for (int j = 0; j < field.grid().dim(); ++j) {
    Field d = spec.zeros_like();
    for (int c = 0; c < spec.components(); ++c)
      kernels::derivative(spec.grid(), j, spec.spectral(c), d.spectral(c));
    out.push_back(restore(d, field.representation()));
  }
  return out;
}

Field divergence(const Field& field) {
  require_vector(field, "divergence");
  const Field spec = to_spectral(field);
  Field out = Field::scalar(field.grid_ptr(), Representation::spectral);
  ComplexBuffer tmp(spec.grid().spectral_size());
  auto acc = out.spectral(0);
  for (int j = 0; j < spec.components(); ++j) {
    kernels::derivative(spec.grid(), j, spec.spectral(j), tmp);
    for (std::size_t s = 0; s < acc.size(); ++s) acc[s] += tmp[s];
  }
  return restore(out, field.representation());
}

Field laplacian(const Field& field) {
  Field spec = to_spectral(field);
  const auto k2 = spec.grid().k_squared();
  for (int c = 0; c < spec.components(); ++c) {
    auto d = spec.spectral(c);
    for (std::size_t s = 0; s < d.size(); ++s) d[s] *= -k2[s];
  }
  return restore(spec, field.representation());
}

Field curl(const Field& field) {
  require_vector(field, "curl");
  const Field spec = to_spectral(field);
  const auto& g = spec.grid();
  ComplexBuffer a(g.spectral_size());
  ComplexBuffer b(g.spectral_size());
  auto diff = [&](int i, int j, std::span<Complex> out) {
    // d_i v_j - d_j v_i
    kernels::derivative(g, i, spec.spectral(j), a);
    kernels::derivative(g, j, spec.spectral(i), b);
    for (std::size_t s = 0; s < out.size(); ++s) out[s] = a[s] - b[s];
  };
  if (g.dim() == 2) {
    Field out = Field::scalar(field.grid_ptr(), Representation::spectral);
    diff(0, 1, out.spectral(0));
    return restore(out, field.representation());
  }
  Field out = Field::vector(field.grid_ptr(), Representation::spectral);
  diff(1, 2, out.spectral(0));
  diff(2, 0, out.spectral(1));
  diff(0, 1, out.spectral(2));
  return restore(out, field.representation());
}

Field dealias(const Field& field) {
  if (!field.is_spectral()) throw ContractError("dealias: spectral field required");
  Field out = field;
  for (int c = 0; c < out.components(); ++c) kernels::dealias(out.grid(), out.spectral(c));
  return out;
}

void remove_mean(Field& field) {
  if (!field.is_spectral()) throw ContractError("remove_mean: spectral field required");
  for (int c = 0; c < field.components(); ++c) field.spectral(c)[0] = Complex{};
}

double inner_product(const Field& a, const Field& b) {
  require_same_grid(a, b, "inner_product");
  if (a.components() != b.components()) throw ContractError("inner_product: component mismatch");
  const Field pa = to_physical(a);
  const Field pb = to_physical(b);
  const std::size_t rows = pa.grid().physical_rows();
  const auto n = static_cast<std::size_t>(pa.grid().n());
  std::vector<double> partial(rows, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t rr = 0; rr < static_cast<std::ptrdiff_t>(rows); ++rr) {
    const auto r = static_cast<std::size_t>(rr);
    double acc = 0.0;
    for (int c = 0; c < pa.components(); ++c) {
      const auto x = pa.physical(c);
      const auto y = pb.physical(c);
      for (std::size_t i = r * n; i < (r + 1) * n; ++i) acc += x[i] * y[i];
    }
    partial[r] = acc;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total * pa.grid().cell_volume();
}

double sobolev_seminorm_sq(const Field& field, double s) {
  const Field spec = to_spectral(field);
  const auto& g = spec.grid();
  const auto k2 = g.k_squared();
  std::vector<double> table(g.spectral_size());
  for (std::size_t i = 0; i < table.size(); ++i)
    table[i] = k2[i] == 0.0 ? (s == 0.0 ? 1.0 : 0.0) : std::pow(k2[i], s);
  const auto spans = const_spans(spec);
  return kernels::weighted_energy(g, spans, table) * g.parseval_weight();
}

double hermitian_defect(const Field& field) {
  if (!field.is_spectral()) throw ContractError("hermitian_defect: spectral field required");
  const auto& g = field.grid();
  const std::size_t n = static_cast<std::size_t>(g.n());
  const std::size_t half = g.half_length();
  const std::size_t rows = g.spectral_rows();
  auto mirror_row = [&](std::size_t r) {
    if (g.dim() == 2) return (n - r) % n;
    const std::size_t i0 = r / n;
    const std::size_t i1 = r % n;
    return ((n - i0) % n) * n + (n - i1) % n;
  };
  double defect = 0.0;
  for (int c = 0; c < field.components(); ++c) {
    const auto d = field.spectral(c);
    for (std::size_t r = 0; r < rows; ++r) {
      const std::size_t mr = mirror_row(r);
      for (std::size_t j : {std::size_t{0}, half - 1}) {
        defect = std::max(defect, std::abs(d[r * half + j] - std::conj(d[mr * half + j])));
      }
    }
  }
  return defect;
}

double max_coefficient(const Field& field) {
  const Field spec = to_spectral(field);
  double m = 0.0;
  for (std::size_t s = 0; s < spec.grid().spectral_size(); ++s) {
    double e = 0.0;
    for (int c = 0; c < spec.components(); ++c) e += std::norm(spec.spectral(c)[s]);
    m = std::max(m, e);
  }
  return std::sqrt(m);
}

std::vector<double> fractional_laplacian_1d(std::span<const double> samples, double length,
                                            double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) throw ParameterError("fractional_laplacian_1d: beta must lie in (0, 1]");
  if (samples.size() < 2 || samples.size() % 2 != 0)
    throw ParameterError("fractional_laplacian_1d: need an even number of samples");
  auto c = fft_forward_1d(samples);
  const double k0 = 2.0 * std::numbers::pi / length;
  for (std::size_t m = 0; m < c.size(); ++m) c[m] *= m == 0 ? 0.0 : std::pow(k0 * static_cast<double>(m), 2.0 * beta);
  return fft_inverse_1d(c, samples.size());
}

}  // namespace fchv
