#pragma once

#include <cstdint>
#include <string>

#include "fchv/field.hpp"

namespace fchv {

/// v = (-d2 psi, d1 psi[, 0]) with psi = amplitude * exp(-|x|^2 / sigma^2).
/// Physical representation, divergence free analytically.
Field stream_bump(const GridPtr& grid, double amplitude, double sigma);

/// Leray projection of amplitude * exp(-|x|^2 / sigma^2) e_1. Its transform
/// does not vanish at k = 0 along every direction, unlike the stream bump.
Field projected_bump(const GridPtr& grid, double amplitude, double sigma);

/// Divergence-free random field with |m| in [band_lo, band_hi] (lattice
/// units), flat spectrum, rescaled to ||v||_2 = amplitude. Spectral.
Field band_random(const GridPtr& grid, std::uint64_t seed, double band_lo, double band_hi,
                  double amplitude);

/// 2D cellular flow amplitude * (cos kx sin ky, -sin kx cos ky), k = 2 pi / L.
Field taylor_green(const GridPtr& grid, double amplitude);

/// eps^(n/2) u0(eps x) for the stream bump u0: a stream bump with width
/// sigma/eps and amplitude amplitude*eps^(n/2-1).
Field scaled_stream_bump(const GridPtr& grid, double amplitude, double sigma, double eps);

/// v = u - alpha^2 Lap u, the inverse of the filter. Keeps the representation.
Field unfilter(const Field& u, double alpha);

}  // namespace fchv
