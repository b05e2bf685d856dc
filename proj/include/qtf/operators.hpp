#pragma once

#include "qtf/field.hpp"

namespace qtf {

// Spectral differential operators. The derivative index is appended LAST,
// so gradient(u) of a vector u gives (grad u)_{a,b} = d_b u_a, matching the
// index convention u_{a,b} = \partial_b u_a used throughout the model terms.
Field gradient(const Field& f);

// Contracts the last index against the derivative: (div T)_... = d_j T_...j.
Field divergence(const Field& f);

Field laplacian(const Field& f);

// Leray projection onto divergence-free vector fields; k = 0 is untouched.
Field leray_project(const Field& v);

// Sharp annular cutoff J_n: keeps coefficients with 2^-n <= |k| <= 2^n; the
// zero mode is always removed by the indicator.
Field spectral_cutoff(const Field& f, int n);

// Mollifier R_eps: multiplication by chihat(eps*k) for a fixed smooth radial
// bump chi with unit mass supported in the unit ball.
Field mollify(const Field& f, double eps);

// Radial Fourier multiplier of the mollifier kernel, normalized so that
// mollifier_multiplier(0, dim) == 1. Exposed for direct inspection in tests.
double mollifier_multiplier(double rho, int dim);

}  // namespace qtf
