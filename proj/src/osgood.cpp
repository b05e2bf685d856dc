#include "qtf/osgood.hpp"

#include <cmath>
#include <stdexcept>

namespace qtf {

double osgood_mu(double r) {
    if (r < 0.0) throw std::invalid_argument("osgood_mu: r must be >= 0");
    if (r == 0.0) return 0.0;
    const double w = std::log1p(std::exp(1.0) + 1.0 / r);
    return r * (1.0 + w + w * std::log(w));
}

std::vector<double> osgood_integrate(double phi0,
                                     const std::vector<double>& chi, double dt,
                                     int substeps,
                                     std::function<double(double)> modulus) {
    if (phi0 < 0.0) throw std::invalid_argument("osgood_integrate: phi0 >= 0");
    if (dt <= 0.0) throw std::invalid_argument("osgood_integrate: dt > 0");
    if (substeps < 1) substeps = 1;
    if (!modulus) modulus = [](double r) { return osgood_mu(r); };

    std::vector<double> env;
    env.reserve(chi.size() + 1);
    env.push_back(phi0);
    double y = phi0;
    const double h = dt / substeps;
    for (double c : chi) {
        if (y > 0.0) {
            for (int s = 0; s < substeps; ++s) y += h * c * modulus(y);
        }
        // y == 0 is a fixed point of the modulus; keep it exact
        env.push_back(y);
    }
    return env;
}

}  // namespace qtf
