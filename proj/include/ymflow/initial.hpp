#pragma once

#include <cstdint>

#include "ymflow/covariant.hpp"

namespace ymflow {

Connection zero_connection(const GridSpec& grid, const GroupSpec& group);

/// Deterministic low-mode trig series sampled at edge midpoints; the same
/// (seed, extent) gives the same continuum field on every grid resolution.
Connection fourier_smooth_connection(const GridSpec& grid, const GroupSpec& group,
                                     std::uint64_t seed, double amplitude, int max_mode = 2);

/// Single real plane-wave mode amp*cos(k.x) in component pol_axis; with
/// m[pol_axis] == 0 this is an exact divergence-free eigenvector of d*d with
/// eigenvalue sum_i (2/h sin(k_i h/2))^2.
Connection u1_single_mode(const GridSpec& grid, const std::array<int, 3>& m, int pol_axis,
                          double amplitude);

/// The eigenvalue of the mode above.
double u1_mode_eigenvalue(const GridSpec& grid, const std::array<int, 3>& m);

}  // namespace ymflow
