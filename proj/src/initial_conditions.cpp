#include "qtf/initial_conditions.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "qtf/model.hpp"
#include "qtf/operators.hpp"

namespace qtf {

namespace {

void fill_random_spectrum(Field& f, std::uint64_t seed, double slope, int kmax) {
    const auto& g = *f.grid();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int limit = kmax > 0 ? std::min(kmax, g.dealias_limit()) : g.dealias_limit();
    int m[3];
    for (int c = 0; c < f.ncomp(); ++c) {
        auto* dst = f.comp(c);
        for (std::size_t i = 0; i < f.num_modes(); ++i) {
            g.mode_ints(i, m);
            bool active = g.k_squared(i) > 0.0;
            for (int a = 0; a < g.dim(); ++a)
                if (std::abs(m[a]) > limit) active = false;
            if (!active) {
                dst[i] = 0.0;
                continue;
            }
            const double amp = std::pow(1.0 + std::sqrt(g.k_squared(i)), -slope);
            dst[i] = std::complex<double>(gauss(rng), gauss(rng)) * amp;
        }
    }
    f.enforce_hermitian();
}

void normalize_l2(Field& f, double target) {
    const double n = f.norm_l2();
    if (n > 0.0) f *= target / n;
}

}  // namespace

Field random_scalar(GridPtr grid, std::uint64_t seed, double l2_norm,
                    double slope, int kmax) {
    Field f = Field::scalar(grid);
    fill_random_spectrum(f, seed, slope, kmax);
    normalize_l2(f, l2_norm);
    return f;
}

Field random_velocity(GridPtr grid, std::uint64_t seed, double l2_norm,
                      double slope, int kmax) {
    Field f = Field::vector(grid);
    fill_random_spectrum(f, seed, slope, kmax);
    f = leray_project(f);
    normalize_l2(f, l2_norm);
    return f;
}

Field random_qtensor(GridPtr grid, int d_target, std::uint64_t seed,
                     double l2_norm, double slope, int kmax) {
    Field f = Field::matrix(grid, d_target, d_target);
    fill_random_spectrum(f, seed, slope, kmax);
    f = symmetrize_tracefree(f);
    normalize_l2(f, l2_norm);
    return f;
}

Field taylor_green_velocity(GridPtr grid, double amplitude) {
    const auto& g = *grid;
    std::vector<std::vector<double>> vals(g.dim(),
                                          std::vector<double>(g.num_points()));
    double x[3];
    for (std::size_t i = 0; i < g.num_points(); ++i) {
        g.point(i, x);
        const double s = 1.0 / g.box_scale();
        vals[0][i] = amplitude * std::sin(s * x[0]) * std::cos(s * x[1]);
        vals[1][i] = -amplitude * std::cos(s * x[0]) * std::sin(s * x[1]);
        if (g.dim() == 3) vals[2][i] = 0.0;
    }
    Field u = Field::from_physical(grid, {g.dim()}, vals);
    u.apply_dealias();
    return u;
}

Field uniaxial_stripe_q(GridPtr grid, int d_target, double s0, int modulation,
                        double angle0) {
    const auto& g = *grid;
    const int dt = d_target;
    std::vector<std::vector<double>> vals(dt * dt,
                                          std::vector<double>(g.num_points()));
    double x[3];
    for (std::size_t i = 0; i < g.num_points(); ++i) {
        g.point(i, x);
        const double theta = angle0 + modulation * x[0] / g.box_scale();
        double n[3] = {std::cos(theta), std::sin(theta), 0.0};
        for (int a = 0; a < dt; ++a)
            for (int b = 0; b < dt; ++b)
                vals[a * dt + b][i] = s0 * (n[a] * n[b] - (a == b ? 1.0 / dt : 0.0));
    }
    Field q = Field::from_physical(grid, {dt, dt}, vals);
    q.apply_dealias();
    return symmetrize_tracefree(q);
}

Field random_gradient_velocity(GridPtr grid, std::uint64_t seed, double l2_norm,
                               double slope, int kmax) {
    Field phi = random_scalar(grid, seed, 1.0, slope, kmax);
    Field v = gradient(phi);
    const double n = v.norm_l2();
    if (n > 0.0) v *= l2_norm / n;
    return v;
}

}  // namespace qtf
