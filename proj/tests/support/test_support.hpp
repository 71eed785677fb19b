#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "fchv/field.hpp"
#include "fchv/field_ops.hpp"
#include "fchv/helmholtz.hpp"
#include "fchv/spectral.hpp"
#include "fchv/time_integrator.hpp"

namespace fchv::testing {

inline double max_abs_diff(const Field& a, const Field& b) {
  const Field pa = to_physical(a), pb = to_physical(b);
  double m = 0.0;
  for (int c = 0; c < pa.components(); ++c)
    for (std::size_t i = 0; i < pa.grid().physical_size(); ++i)
      m = std::max(m, std::abs(pa.physical(c)[i] - pb.physical(c)[i]));
  return m;
}

inline double max_abs(const Field& a) {
  const Field pa = to_physical(a);
  double m = 0.0;
  for (int c = 0; c < pa.components(); ++c)
    for (double x : pa.physical(c)) m = std::max(m, std::abs(x));
  return m;
}

inline double l2(const Field& f) { return std::sqrt(sobolev_seminorm_sq(f, 0.0)); }

inline Field axpy(double a, const Field& x, const Field& y) {
  Field out = to_spectral(y);
  const Field xs = to_spectral(x);
  for (int c = 0; c < out.components(); ++c)
    for (std::size_t s = 0; s < out.grid().spectral_size(); ++s) out.spectral(c)[s] += a * xs.spectral(c)[s];
  return out;
}

/// Mild-form solution by Picard iteration in integrating-factor variables:
/// w = e^{s A} v solves w(t) = v0 + int_0^t e^{s A} N(e^{-s A} w(s)) ds with
/// A = nu (-Lap)^beta and N = -P[u.grad v + v.grad u^T], u the filtered v.
/// The time integral is taken on Chebyshev nodes with exact polynomial weights.
class PicardOracle {
 public:
  PicardOracle(const SolverParams& params, int nodes = 14) : p_(params), m_(nodes) {}

  Field solve(const Field& v0, double t_end, int iterations = 40) const {
    std::vector<double> s(static_cast<std::size_t>(m_));
    for (int i = 0; i < m_; ++i)
      s[static_cast<std::size_t>(i)] = 0.5 * t_end * (1.0 - std::cos(M_PI * (i + 0.5) / m_));
    std::vector<double> nodes_full(s);
    nodes_full.push_back(t_end);
    const auto weights = integration_weights(s, nodes_full);

    const Field v0s = to_spectral(v0);
    std::vector<Field> w(static_cast<std::size_t>(m_), v0s);
    Field result = v0s;
    for (int it = 0; it < iterations; ++it) {
      std::vector<Field> g;
      g.reserve(w.size());
      for (int j = 0; j < m_; ++j) {
        const double sj = s[static_cast<std::size_t>(j)];
        const Field v = propagate(w[static_cast<std::size_t>(j)], sj);
        const Field u = filter(v, p_.alpha);
        Field nl = ch_nonlinear_term(u, v, p_.dealias);
        nl = leray_project(nl).field;
        g.push_back(propagate(nl, -sj));
      }
      std::vector<Field> next;
      for (std::size_t i = 0; i < nodes_full.size(); ++i) {
        Field acc = v0s;
        for (int j = 0; j < m_; ++j) acc = axpy(-weights[i][static_cast<std::size_t>(j)], g[static_cast<std::size_t>(j)], acc);
        next.push_back(std::move(acc));
      }
      result = propagate(next.back(), t_end);
      next.pop_back();
      w = std::move(next);
    }
    return result;
  }

 private:
  Field propagate(const Field& f, double t) const {
    return apply_multiplier(f, Multiplier::heat(f.grid_ptr(), 2.0 * p_.beta, p_.nu * t));
  }

  // weights[i][j] = int_0^{x_i} l_j(s) ds for the Lagrange basis on `s`.
  static std::vector<std::vector<double>> integration_weights(const std::vector<double>& s,
                                                              const std::vector<double>& x) {
    static const double gx[] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
                                0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
    static const double gw[] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
                                0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
    auto lagrange = [&](std::size_t j, double t) {
      double v = 1.0;
      for (std::size_t k = 0; k < s.size(); ++k)
        if (k != j) v *= (t - s[k]) / (s[j] - s[k]);
      return v;
    };
    std::vector<std::vector<double>> w(x.size(), std::vector<double>(s.size(), 0.0));
    for (std::size_t i = 0; i < x.size(); ++i) {
      const int panels = 4;
      const double h = x[i] / panels;
      for (int pnl = 0; pnl < panels; ++pnl) {
        const double a = pnl * h;
        for (int q = 0; q < 8; ++q) {
          const double t = a + 0.5 * h * (gx[q] + 1.0);
          for (std::size_t j = 0; j < s.size(); ++j) w[i][j] += 0.5 * h * gw[q] * lagrange(j, t);
        }
      }
    }
    return w;
  }

  SolverParams p_;
  int m_;
};

}  // namespace fchv::testing
