#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "qtf/initial_conditions.hpp"
#include "qtf/littlewood_paley.hpp"
#include "qtf/operators.hpp"
#include "qtf/pointwise.hpp"

using namespace qtf;

namespace {

// dyadic-vs-direct equivalence window for profile v1, measured once over
// single modes and random ensembles at 64^2 and 128^2 (observed range
// [0.68, 1.08]); frozen with margin
constexpr double kEquivK = 1.6;

constexpr double kInf = std::numeric_limits<double>::infinity();

Field single_mode(GridPtr grid, int k1, int k2, double amp = 1.0) {
    Field f(grid, {});
    const int n = grid->n_axis();
    const std::size_t plus = static_cast<std::size_t>(((k1 % n) + n) % n) * n +
                             static_cast<std::size_t>(((k2 % n) + n) % n);
    const std::size_t minus =
        static_cast<std::size_t>(((-k1 % n) + n) % n) * n +
        static_cast<std::size_t>(((-k2 % n) + n) % n);
    f.comp(0)[plus] += 0.5 * amp;
    f.comp(0)[minus] += 0.5 * amp;
    return f;
}

double rel_err(const Field& got, const Field& want) {
    const double d = want.norm_l2();
    return (got - want).norm_l2() / (d > 0 ? d : 1.0);
}

}  // namespace

TEST_CASE("partition of unity and homogeneous completeness are exact") {
    for (int n : {64, 128}) {
        DyadicDecomposition dd(make_grid(2, n));
        CHECK(dd.partition_defect() <= 1e-12);
        CHECK(dd.homogeneous_defect() <= 1e-12);
    }
}

TEST_CASE("ring supports are disjoint for |p-q| >= 5") {
    DyadicDecomposition dd(make_grid(2, 64));
    for (int q = dd.q_min(); q <= dd.q_max(); ++q)
        for (int p = q + 5; p <= dd.q_max() + 5; ++p)
            CHECK(dd.support_overlap(p, q) == 0.0);
}

TEST_CASE("blocks: single mode lands in neighboring shells and reconstructs") {
    auto grid = make_grid(2, 64);
    DyadicDecomposition dd(grid);
    const int q = 3;  // |k| = 8
    Field f = single_mode(grid, 8, 0);
    Field recon(grid, {});
    for (int qq = q - 1; qq <= q + 1; ++qq) recon += dd.block(f, qq);
    CHECK(rel_err(recon, f) <= 1e-12);
    // shells far away see nothing
    CHECK(dd.block(f, q + 3).norm_l2() == 0.0);
    CHECK(dd.block(f, q - 3).norm_l2() == 0.0);
}

TEST_CASE("blocks annihilate constants; full shell sum reconstructs") {
    auto grid = make_grid(2, 64);
    DyadicDecomposition dd(grid);
    std::vector<std::vector<double>> ones(1,
                                          std::vector<double>(grid->num_points(), 1.0));
    Field c = Field::from_physical(grid, {}, ones);
    for (int q = dd.q_min(); q <= dd.q_max(); ++q)
        CHECK(dd.block(c, q).norm_l2() == 0.0);

    Field f = random_scalar(grid, 5, 1.0, 1.0);
    f.comp(0)[0] = 0.83;  // nonzero mean
    Field sum(grid, {});
    for (int q = dd.q_min(); q <= dd.q_max(); ++q) sum += dd.block(f, q);
    sum.comp(0)[0] += f.comp(0)[0];  // add back the zero mode
    CHECK(rel_err(sum, f) <= 1e-12);
}

TEST_CASE("lowpass: constants pass, zero-mean content vanishes as q -> -inf") {
    auto grid = make_grid(2, 64);
    DyadicDecomposition dd(grid);
    std::vector<std::vector<double>> ones(1,
                                          std::vector<double>(grid->num_points(), 3.0));
    Field c = Field::from_physical(grid, {}, ones);
    CHECK(rel_err(dd.lowpass(c, dd.q_max() + 2), c) < 1e-14);
    CHECK(rel_err(dd.lowpass(c, dd.q_min() - 10), c) < 1e-14);  // mean survives

    Field f = random_scalar(grid, 6, 1.0, 1.0);  // zero-mean by construction
    CHECK(dd.lowpass(f, dd.q_min() - 1).norm_l2() < 1e-14);
    CHECK(rel_err(dd.lowpass(f, dd.q_max() + 2), f) < 1e-14);

    // single-mode cutoff: |k| = 8 passes S_q iff 2^-q * 8 < 1 boundary-wise
    Field m = single_mode(grid, 8, 0);
    CHECK(dd.lowpass(m, 5).norm_l2() ==
          doctest::Approx(m.norm_l2()).epsilon(1e-12));
    CHECK(dd.lowpass(m, 3).norm_l2() == 0.0);
}

TEST_CASE("sobolev norms: Parseval anchor and both backends within the window") {
    auto grid = make_grid(2, 64);
    DyadicDecomposition dd(grid);
    Field f = random_scalar(grid, 9, 1.0, 1.0);

    CHECK(sobolev_norm_direct(f, 0.0) ==
          doctest::Approx(f.norm_l2()).epsilon(1e-12));

    for (double s : {-0.5, 0.5, 1.0}) {
        const double dir = sobolev_norm_direct(f, s);
        const double dya = sobolev_norm_dyadic(f, s, dd);
        CHECK(dya <= kEquivK * dir);
        CHECK(dir <= kEquivK * dya);
    }

    // single mode |k| = k0: direct backend gives k0^s * amplitude * sqrt(V)/sqrt(2)
    Field m = single_mode(grid, 5, 0, 2.0);
    const double l2 = m.norm_l2();
    CHECK(sobolev_norm_direct(m, 0.5) ==
          doctest::Approx(std::sqrt(5.0) * l2).epsilon(1e-12));

    // |grad f|_{H^-1/2} = |f|_{H^1/2} for zero-mean f
    CHECK(sobolev_norm_direct(gradient(f), -0.5) ==
          doctest::Approx(sobolev_norm_direct(f, 0.5)).epsilon(1e-12));
}

TEST_CASE("besov norms: B^0_22 close to L2, weights explicit on single modes") {
    auto grid = make_grid(2, 64);
    DyadicDecomposition dd(grid);
    Field f = random_scalar(grid, 10, 1.0, 1.0);

    BesovIndex b022{0.0, 2.0, 2.0, false};
    const double bn = besov_norm(f, b022, dd);
    CHECK(bn <= kEquivK * f.norm_l2());
    CHECK(f.norm_l2() <= kEquivK * bn);

    // single mode in one shell: the 2^{qs} weight is explicit
    Field m = single_mode(grid, 8, 0);  // exactly shell q=3 boundary-centered
    BesovIndex idx{-0.5, 2.0, kInf, true};
    const double got = besov_norm(m, idx, dd);
    // sup over shells of 2^{-q/2} |Delta_q m|; shells 2..4 can contribute
    double want = 0.0;
    for (int q = 2; q <= 4; ++q)
        want = std::max(want,
                        std::pow(2.0, -0.5 * q) * dd.block(m, q).norm_l2());
    CHECK(got == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("besov low-frequency characterization stays in the frozen window") {
    // Prop-2.33-style two-sided equivalence, measured window [1.03, 1.11]
    for (int n : {64, 128}) {
        auto grid = make_grid(2, n);
        DyadicDecomposition dd(grid);
        BesovIndex idx{-0.5, 2.0, 2.0, true};
        for (int t = 0; t < 10; ++t) {
            Field f = random_scalar(grid, 100 + t, 1.0, 1.0);
            const double a = besov_lowpass_characterization(f, idx, dd);
            const double b = besov_norm(f, idx, dd);
            CHECK(a / b > 0.8);
            CHECK(a / b < 1.5);
        }
    }
    DyadicDecomposition dd(make_grid(2, 64));
    BesovIndex bad{0.5, 2.0, 2.0, true};
    Field f = random_scalar(dd.grid(), 1, 1.0, 1.0);
    CHECK_THROWS_AS(besov_lowpass_characterization(f, bad, dd),
                    std::invalid_argument);
}

TEST_CASE("bony decomposition reconstructs the dealiased product") {
    auto grid = make_grid(2, 64);
    DyadicDecomposition dd(grid);

    auto product = [&](const Field& a, const Field& b) {
        PhysArray pa = to_phys(a), pb = to_phys(b);
        for (std::size_t i = 0; i < pa.comp[0].size(); ++i)
            pa.comp[0][i] *= pb.comp[0][i];
        return to_spectral(pa);
    };

    SUBCASE("constant times field: low-high carries everything") {
        std::vector<std::vector<double>> ones(
            1, std::vector<double>(grid->num_points(), 2.0));
        Field a = Field::from_physical(grid, {}, ones);
        Field b = random_scalar(grid, 11, 1.0, 1.0);
        auto parts = bony_decompose(a, b, dd);
        Field sum = parts.low_high + parts.high_low + parts.resonant;
        CHECK(rel_err(sum, product(a, b)) <= 1e-10);
        CHECK(parts.low_high.norm_l2() >
              10.0 * (parts.high_low.norm_l2() + parts.resonant.norm_l2()));
    }

    SUBCASE("six-shell gap: high-low and resonant vanish by support") {
        Field a = single_mode(grid, 1, 0);        // shell 0
        Field b = single_mode(grid, 0, 24, 1.0);  // |k| = 24, shell ~4.6
        auto parts = bony_decompose(a, b, dd);
        CHECK(parts.high_low.norm_l2() <= 1e-14);
        CHECK(parts.resonant.norm_l2() <= 1e-14);
        Field sum = parts.low_high + parts.high_low + parts.resonant;
        CHECK(rel_err(sum, product(a, b)) <= 1e-10);
    }

    SUBCASE("random fields reconstruct") {
        for (int t = 0; t < 5; ++t) {
            Field a = random_scalar(grid, 200 + t, 1.0, 1.0);
            Field b = random_scalar(grid, 300 + t, 1.0, 1.0);
            a.comp(0)[0] = 0.3;  // exercise the zero-mode bookkeeping
            b.comp(0)[0] = -0.2;
            auto parts = bony_decompose(a, b, dd);
            Field sum = parts.low_high + parts.high_low + parts.resonant;
            CHECK(rel_err(sum, product(a, b)) <= 1e-10);
        }
    }
}

TEST_CASE("J_q product decomposition reconstructs Delta_q(AB)") {
    auto grid = make_grid(2, 64);
    DyadicDecomposition dd(grid);

    auto matprod = [&](const Field& A, const Field& B) {
        return to_spectral(pw::matmul(to_phys(A), to_phys(B)));
    };

    SUBCASE("constant A kills the commutator and difference terms") {
        std::vector<std::vector<double>> vals(4,
                                              std::vector<double>(grid->num_points()));
        vals[0].assign(grid->num_points(), 1.0);
        vals[1].assign(grid->num_points(), -0.5);
        vals[2].assign(grid->num_points(), 0.25);
        vals[3].assign(grid->num_points(), 2.0);
        Field A = Field::from_physical(grid, {2, 2}, vals);
        Field B = random_qtensor(grid, 2, 21, 1.0);
        const int q = 3;
        auto parts = jq_decompose(A, B, q, dd);
        CHECK(parts.j1.norm_l2() <= 1e-12);
        CHECK(parts.j2.norm_l2() <= 1e-12);
        Field sum = parts.j1 + parts.j2 + parts.j3 + parts.j4;
        CHECK(rel_err(sum, dd.block(matprod(A, B), q)) <= 1e-10);
    }

    SUBCASE("B in shell q with far-low A: J3 dominates") {
        Field A(grid, {2, 2});
        {
            Field low = single_mode(grid, 1, 0, 0.8);
            A.comp_vec(A.cidx(0, 0)) = low.comp_vec(0);
            Field low2 = single_mode(grid, 0, 1, 0.6);
            A.comp_vec(A.cidx(1, 1)) = low2.comp_vec(0);
        }
        Field B(grid, {2, 2});
        {
            Field hi = single_mode(grid, 16, 0);
            for (int c = 0; c < 4; ++c) B.comp_vec(c) = hi.comp_vec(0);
        }
        const int q = 4;  // |k| = 16
        auto parts = jq_decompose(A, B, q, dd);
        Field sum = parts.j1 + parts.j2 + parts.j3 + parts.j4;
        CHECK(rel_err(sum, dd.block(matprod(A, B), q)) <= 1e-10);
        CHECK(parts.j3.norm_l2() > parts.j4.norm_l2());
    }

    SUBCASE("random matrices reconstruct across the band") {
        Field A = random_qtensor(grid, 2, 31, 1.0);
        Field B = random_qtensor(grid, 2, 32, 1.0);
        Field AB = matprod(A, B);
        for (int q = dd.q_min(); q <= dd.q_max(); ++q) {
            auto parts = jq_decompose(A, B, q, dd);
            Field sum = parts.j1 + parts.j2 + parts.j3 + parts.j4;
            Field want = dd.block(AB, q);
            const double scale = std::max(want.norm_l2(), AB.norm_l2() * 1e-3);
            CHECK((sum - want).norm_l2() <= 1e-10 * scale);
        }
    }
}

TEST_CASE("commutator: constants vanish, single-mode value, scaling bound") {
    auto grid = make_grid(2, 64);
    DyadicDecomposition dd(grid);

    std::vector<std::vector<double>> ones(1,
                                          std::vector<double>(grid->num_points(), 4.0));
    Field c = Field::from_physical(grid, {}, ones);
    Field v = random_scalar(grid, 41, 1.0, 1.0);
    CHECK(commutator(3, c, v, dd).norm_l2() <= 1e-13);

    // u = v a single identical mode: compare against the direct multiplier
    // evaluation of Delta_q(u^2) - u Delta_q u
    Field m = single_mode(grid, 2, 0);
    const int q = 1;
    Field direct;
    {
        PhysArray pm = to_phys(m);
        PhysArray sq = pm;
        for (std::size_t i = 0; i < sq.comp[0].size(); ++i)
            sq.comp[0][i] *= pm.comp[0][i];
        Field m2 = to_spectral(sq);
        Field t1 = dd.block(m2, q);
        Field bq = dd.block(m, q);
        PhysArray pb = to_phys(bq);
        for (std::size_t i = 0; i < pb.comp[0].size(); ++i)
            pb.comp[0][i] *= pm.comp[0][i];
        direct = t1 - to_spectral(pb);
    }
    CHECK(rel_err(commutator(q, m, m, dd), direct) <= 1e-12);

    // statistical bound with the 2^-q scaling
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        Field u = random_scalar(grid, 500 + t, 1.0, 2.0);
        Field w = random_scalar(grid, 600 + t, 1.0, 1.0);
        const int qq = dd.q_min() + (t % (dd.q_max() - dd.q_min() + 1));
        const double lhs = lp_norm(commutator(qq, u, w, dd), 2.0);
        const double rhs = std::pow(2.0, -qq) * lp_norm(gradient(u), 4.0) *
                           lp_norm(w, 4.0);
        if (rhs > 0) worst = std::max(worst, lhs / rhs);
    }
    CHECK(worst < 1.2);  // frozen threshold, profile v1
    CHECK(worst > 0.0);
}

TEST_CASE("lp_norm: quadrature matches closed forms") {
    auto grid = make_grid(2, 64);
    Field m = single_mode(grid, 3, 0, 2.0);  // 2 cos(3 x1)
    const double V = grid->volume();
    CHECK(lp_norm(m, 2.0) == doctest::Approx(std::sqrt(2.0 * V)).epsilon(1e-12));
    CHECK(lp_norm(m, kInf) == doctest::Approx(2.0).epsilon(1e-12));
    // |cos|^4 mean = 3/8
    CHECK(lp_norm(m, 4.0) ==
          doctest::Approx(std::pow(16.0 * V * 3.0 / 8.0, 0.25)).epsilon(1e-12));
    CHECK_THROWS_AS(lp_norm(m, 0.5), std::invalid_argument);
}

TEST_CASE("bernstein exponent arithmetic: d=2, a=2, b=inf, q=3 gives 8") {
    const int d = 2, q = 3;
    const double a = 2.0;
    const double factor = std::pow(2.0, d * (1.0 / a - 0.0) * q);
    CHECK(factor == doctest::Approx(8.0));
}
