#pragma once

#include <functional>
#include <vector>

namespace qtf {

// mu(r) = r + r ln(1+e+1/r) + r ln(1+e+1/r) lnln(1+e+1/r); mu(0) = 0.
double osgood_mu(double r);

// Forward-Euler (sub-stepped) upper envelope for  y' = chi(t) * modulus(y),
// chi piecewise constant over intervals of length dt. Returns the envelope at
// the interval endpoints (size chi.size()+1). By monotonicity of the modulus
// the discrete envelope dominates any series with
// (y_{i+1}-y_i)/dt <= chi_i * modulus(y_i). phi0 == 0 stays exactly 0.
std::vector<double> osgood_integrate(
    double phi0, const std::vector<double>& chi, double dt, int substeps = 100,
    std::function<double(double)> modulus = {});

}  // namespace qtf
