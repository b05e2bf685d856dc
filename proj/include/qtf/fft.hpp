#pragma once

#include <complex>

#include "qtf/grid.hpp"

namespace qtf::fft {

// In-place complex transforms over the grid layout (row-major).
//
// Conventions: a field f(x) = sum_k c_k exp(+i k.x / box_scale) has
// forward(f) == {c_k}; forward applies the 1/num_points scaling, so the
// constant field 1 maps to coefficient 1 at k = 0.
void forward(const Grid& grid, std::complex<double>* data);
void inverse(const Grid& grid, std::complex<double>* data);

}  // namespace qtf::fft
