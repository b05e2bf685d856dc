#include "qtf/littlewood_paley.hpp"

#include <cmath>
#include <stdexcept>

#include "qtf/pointwise.hpp"

namespace qtf {

namespace {

double smooth_step(double t) {
    // 0 at t<=0, 1 at t>=1, C-infinity monotone in between
    auto psi = [](double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; };
    const double a = psi(t);
    const double b = psi(1.0 - t);
    return a / (a + b);
}

double min_nonzero_k(const Grid& g) { return 1.0 / g.box_scale(); }

double max_retained_k(const Grid& g) {
    double best = 0.0;
    for (std::size_t i = 0; i < g.num_points(); ++i)
        if (g.dealias_keep(i)) best = std::max(best, g.k_squared(i));
    return std::sqrt(best);
}

Field apply_radial_multiplier(const Field& f, double (*profile)(double),
                              double scale) {
    Field out = f;
    const auto& g = *f.grid();
    for (std::size_t i = 0; i < f.num_modes(); ++i) {
        const double m = profile(scale * std::sqrt(g.k_squared(i)));
        for (int c = 0; c < out.ncomp(); ++c) out.comp(c)[i] *= m;
    }
    return out;
}

}  // namespace

double DyadicDecomposition::chi(double rho) {
    rho = std::abs(rho);
    if (rho <= 0.5) return 1.0;
    if (rho >= 1.0) return 0.0;
    return 1.0 - smooth_step(2.0 * rho - 1.0);
}

DyadicDecomposition::DyadicDecomposition(GridPtr grid) : grid_(std::move(grid)) {
    const double lo = min_nonzero_k(*grid_);
    const double hi = max_retained_k(*grid_);
    q_min_ = static_cast<int>(std::floor(std::log2(lo)));
    q_max_ = static_cast<int>(std::ceil(std::log2(hi)));
}

Field DyadicDecomposition::block(const Field& f, int q) const {
    return apply_radial_multiplier(f, &DyadicDecomposition::phi,
                                   std::pow(2.0, -q));
}

Field DyadicDecomposition::lowpass(const Field& f, int q) const {
    return apply_radial_multiplier(f, &DyadicDecomposition::chi,
                                   std::pow(2.0, -q));
}

double DyadicDecomposition::partition_defect() const {
    const auto& g = *grid_;
    double worst = 0.0;
    for (std::size_t i = 0; i < g.num_points(); ++i) {
        if (!g.dealias_keep(i)) continue;
        const double rho = std::sqrt(g.k_squared(i));
        double s = chi(rho);
        for (int q = 0; q <= q_max_ + 1; ++q) s += phi(std::pow(2.0, -q) * rho);
        worst = std::max(worst, std::abs(s - 1.0));
    }
    return worst;
}

double DyadicDecomposition::homogeneous_defect() const {
    const auto& g = *grid_;
    double worst = 0.0;
    for (std::size_t i = 0; i < g.num_points(); ++i) {
        if (!g.dealias_keep(i) || g.k_squared(i) == 0.0) continue;
        const double rho = std::sqrt(g.k_squared(i));
        double s = 0.0;
        for (int q = q_min_; q <= q_max_; ++q) s += phi(std::pow(2.0, -q) * rho);
        worst = std::max(worst, std::abs(s - 1.0));
    }
    return worst;
}

double DyadicDecomposition::support_overlap(int p, int q) const {
    const auto& g = *grid_;
    double worst = 0.0;
    for (std::size_t i = 0; i < g.num_points(); ++i) {
        const double rho = std::sqrt(g.k_squared(i));
        worst = std::max(worst, std::abs(phi(std::pow(2.0, -p) * rho) *
                                         phi(std::pow(2.0, -q) * rho)));
    }
    return worst;
}

double lp_norm(const Field& f, double p) {
    const auto phys = f.to_physical();
    const auto& g = *f.grid();
    if (std::isinf(p)) {
        double best = 0.0;
        for (std::size_t i = 0; i < g.num_points(); ++i) {
            double s = 0.0;
            for (const auto& c : phys) s += c[i] * c[i];
            best = std::max(best, s);
        }
        return std::sqrt(best);
    }
    if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
    double acc = 0.0;
    for (std::size_t i = 0; i < g.num_points(); ++i) {
        double s = 0.0;
        for (const auto& c : phys) s += c[i] * c[i];
        acc += std::pow(s, 0.5 * p);
    }
    return std::pow(acc * g.volume() / double(g.num_points()), 1.0 / p);
}

double sobolev_norm_direct(const Field& f, double s) {
    const auto& g = *f.grid();
    double acc = 0.0;
    for (std::size_t i = 0; i < f.num_modes(); ++i) {
        const double ksq = g.k_squared(i);
        if (ksq == 0.0) continue;
        double coeff = 0.0;
        for (int c = 0; c < f.ncomp(); ++c) coeff += std::norm(f.comp(c)[i]);
        acc += std::pow(ksq, s) * coeff;
    }
    return std::sqrt(g.volume() * acc);
}

double sobolev_norm_nonhom_direct(const Field& f, double s) {
    const auto& g = *f.grid();
    double acc = 0.0;
    for (std::size_t i = 0; i < f.num_modes(); ++i) {
        double coeff = 0.0;
        for (int c = 0; c < f.ncomp(); ++c) coeff += std::norm(f.comp(c)[i]);
        acc += std::pow(1.0 + g.k_squared(i), s) * coeff;
    }
    return std::sqrt(g.volume() * acc);
}

double sobolev_norm_dyadic(const Field& f, double s,
                           const DyadicDecomposition& dd) {
    double acc = 0.0;
    for (int q = dd.q_min(); q <= dd.q_max(); ++q) {
        const double bn = dd.block(f, q).norm_l2();
        acc += std::pow(2.0, 2.0 * q * s) * bn * bn;
    }
    return std::sqrt(acc);
}

double sobolev_norm_nonhom_dyadic(const Field& f, double s,
                                  const DyadicDecomposition& dd) {
    const double low = dd.lowpass(f, 0).norm_l2();
    double acc = low * low;
    for (int q = 0; q <= dd.q_max(); ++q) {
        const double bn = dd.block(f, q).norm_l2();
        acc += std::pow(2.0, 2.0 * q * s) * bn * bn;
    }
    return std::sqrt(acc);
}

double sobolev_pairing(const Field& a, const Field& b, double s) {
    if (!(*a.grid() == *b.grid()) || a.shape() != b.shape())
        throw std::invalid_argument("sobolev_pairing: incompatible fields");
    const auto& g = *a.grid();
    double acc = 0.0;
    for (std::size_t i = 0; i < a.num_modes(); ++i) {
        const double ksq = g.k_squared(i);
        if (ksq == 0.0) continue;
        double re = 0.0;
        for (int c = 0; c < a.ncomp(); ++c)
            re += (a.comp(c)[i] * std::conj(b.comp(c)[i])).real();
        acc += std::pow(ksq, s) * re;
    }
    return g.volume() * acc;
}

namespace {

double ell_r_accumulate(const std::vector<double>& terms, double r) {
    if (std::isinf(r)) {
        double best = 0.0;
        for (double t : terms) best = std::max(best, t);
        return best;
    }
    double acc = 0.0;
    for (double t : terms) acc += std::pow(t, r);
    return std::pow(acc, 1.0 / r);
}

}  // namespace

double besov_norm(const Field& f, const BesovIndex& idx,
                  const DyadicDecomposition& dd) {
    std::vector<double> terms;
    const int q_lo = idx.homogeneous ? dd.q_min() : 0;
    for (int q = q_lo; q <= dd.q_max(); ++q)
        terms.push_back(std::pow(2.0, q * idx.s) * lp_norm(dd.block(f, q), idx.p));
    if (!idx.homogeneous) terms.push_back(lp_norm(dd.lowpass(f, 0), idx.p));
    return ell_r_accumulate(terms, idx.r);
}

double besov_lowpass_characterization(const Field& f, const BesovIndex& idx,
                                      const DyadicDecomposition& dd) {
    if (idx.s >= 0.0)
        throw std::invalid_argument("lowpass characterization needs s < 0");
    std::vector<double> terms;
    for (int q = dd.q_min(); q <= dd.q_max() + 1; ++q)
        terms.push_back(std::pow(2.0, q * idx.s) * lp_norm(dd.lowpass(f, q), idx.p));
    // for q >= q_max + 2 the lowpass is the identity on the band
    const double full = lp_norm(f, idx.p);
    if (std::isinf(idx.r)) {
        terms.push_back(std::pow(2.0, (dd.q_max() + 2) * idx.s) * full);
        return ell_r_accumulate(terms, idx.r);
    }
    const double ratio = std::pow(2.0, idx.s * idx.r);
    const double tail = std::pow(std::pow(2.0, (dd.q_max() + 2) * idx.s) * full,
                                 idx.r) /
                        (1.0 - ratio);
    double acc = tail;
    for (double t : terms) acc += std::pow(t, idx.r);
    return std::pow(acc, 1.0 / idx.r);
}

namespace {

// pointwise multiply of two scalar physical arrays into an accumulator
void accumulate_product(std::vector<double>& acc, const std::vector<double>& a,
                        const std::vector<double>& b) {
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += a[i] * b[i];
}

}  // namespace

BonyParts bony_decompose(const Field& a, const Field& b,
                         const DyadicDecomposition& dd) {
    if (a.rank() != 0 || b.rank() != 0)
        throw std::invalid_argument("bony_decompose: scalar fields expected");
    const auto grid = a.grid();
    const std::size_t n = grid->num_points();

    std::vector<std::vector<double>> blocks_a, blocks_b, low_a, low_b;
    for (int q = dd.q_min(); q <= dd.q_max(); ++q) {
        blocks_a.push_back(dd.block(a, q).to_physical()[0]);
        blocks_b.push_back(dd.block(b, q).to_physical()[0]);
        low_a.push_back(dd.lowpass(a, q - 1).to_physical()[0]);
        low_b.push_back(dd.lowpass(b, q - 1).to_physical()[0]);
    }

    std::vector<double> t_ab(n, 0.0), t_ba(n, 0.0), res(n, 0.0);
    const int nq = static_cast<int>(blocks_a.size());
    for (int j = 0; j < nq; ++j) {
        accumulate_product(t_ab, low_a[j], blocks_b[j]);
        accumulate_product(t_ba, low_b[j], blocks_a[j]);
        for (int i = -1; i <= 1; ++i) {
            const int jj = j + i;
            if (jj < 0 || jj >= nq) continue;
            accumulate_product(res, blocks_a[j], blocks_b[jj]);
        }
    }
    // zero-mode pair, assigned to the resonant part
    const double mean_ab = a.comp(0)[0].real() * b.comp(0)[0].real();
    for (auto& v : res) v += mean_ab;

    auto pack = [&](std::vector<double>& vals) {
        PhysArray p;
        p.grid = grid;
        p.shape = {};
        p.comp = {std::move(vals)};
        return to_spectral(p);
    };
    return {pack(t_ab), pack(t_ba), pack(res)};
}

JqParts jq_decompose(const Field& A, const Field& B, int q,
                     const DyadicDecomposition& dd) {
    if (A.rank() != 2 || B.rank() != 2 || A.shape()[1] != B.shape()[0])
        throw std::invalid_argument("jq_decompose: matrix shape mismatch");

    auto product = [&](const Field& x, const Field& y) {
        return to_spectral(pw::matmul(to_phys(x), to_phys(y)));
    };

    Field j1(A.grid(), {A.shape()[0], B.shape()[1]});
    Field j2 = j1;
    Field j4 = j1;

    const Field low_q = dd.lowpass(A, q - 1);
    for (int qp = q - 5; qp <= q + 5; ++qp) {
        const Field low_qp = dd.lowpass(A, qp - 1);
        const Field blk_b = dd.block(B, qp);
        // J1 summand: Delta_q(S_{q'-1}A Delta_q' B) - S_{q'-1}A Delta_q Delta_q' B
        j1 += dd.block(product(low_qp, blk_b), q);
        const Field blk_qb = dd.block(blk_b, q);
        j1 -= product(low_qp, blk_qb);
        // J2 summand: (S_{q'-1}A - S_{q-1}A) Delta_q Delta_q' B
        j2 += product(low_qp - low_q, blk_qb);
    }

    const Field j3 = product(low_q, dd.block(B, q));

    for (int qp = q - 5; qp <= dd.q_max() + 1; ++qp)
        j4 += dd.block(product(dd.block(A, qp), dd.lowpass(B, qp + 2)), q);

    return {std::move(j1), std::move(j2), j3, std::move(j4)};
}

Field commutator(int q, const Field& u, const Field& v,
                 const DyadicDecomposition& dd) {
    if (u.rank() != 0 || v.rank() != 0)
        throw std::invalid_argument("commutator: scalar fields expected");
    auto product = [&](const Field& x, const Field& y) {
        PhysArray px = to_phys(x), py = to_phys(y);
        for (std::size_t i = 0; i < px.comp[0].size(); ++i)
            px.comp[0][i] *= py.comp[0][i];
        return to_spectral(px);
    };
    return dd.block(product(u, v), q) - product(u, dd.block(v, q));
}

}  // namespace qtf
