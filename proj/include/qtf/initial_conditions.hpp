#pragma once

#include <cstdint>

#include "qtf/field.hpp"

namespace qtf {

// Seeded band-limited random fields with power-law spectrum
// amplitude ~ (1 + |k|)^(-slope) and random phases; Hermitian-symmetrized and
// normalized to the requested L2 norm. kmax bounds the active integer band
// (kmax <= 0 means the full dealiased band).
Field random_scalar(GridPtr grid, std::uint64_t seed, double l2_norm,
                    double slope = 2.0, int kmax = 0);

// divergence-free d-vector
Field random_velocity(GridPtr grid, std::uint64_t seed, double l2_norm,
                      double slope = 2.0, int kmax = 0);

// symmetric trace-free dt x dt tensor
Field random_qtensor(GridPtr grid, int d_target, std::uint64_t seed,
                     double l2_norm, double slope = 2.0, int kmax = 0);

// u = A (sin x1 cos x2, -cos x1 sin x2, [0]) on box_scale 1 grids
Field taylor_green_velocity(GridPtr grid, double amplitude);

// Q = s0 (n(x) otimes n(x) - Id/dt) with planar director
// n = (cos theta, sin theta, [0]), theta(x) = angle0 + modulation * x1/box_scale
Field uniaxial_stripe_q(GridPtr grid, int d_target, double s0, int modulation,
                        double angle0);

// gradient of a random scalar potential (NOT divergence-free); negative
// control input for the audits
Field random_gradient_velocity(GridPtr grid, std::uint64_t seed, double l2_norm,
                               double slope = 2.0, int kmax = 0);

}  // namespace qtf
