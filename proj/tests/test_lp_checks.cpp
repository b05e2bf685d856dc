#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <limits>

#include "qtf/initial_conditions.hpp"
#include "qtf/lp_checks.hpp"
#include "qtf/operators.hpp"

using namespace qtf;

namespace {

double named_max(const std::vector<RatioReport>& rows, const std::string& name) {
    double best = 0.0;
    for (const auto& r : rows)
        if (r.check == name) best = std::max(best, r.ratio);
    return best;
}

}  // namespace

TEST_CASE("bernstein ensemble: ratios finite and under the frozen thresholds") {
    auto rows = check_bernstein(make_grid(2, 64), 60, 1);
    CHECK(!rows.empty());
    for (const auto& r : rows) CHECK(std::isfinite(r.ratio));
    CHECK(named_max(rows, "bernstein-lift") <= 0.6);
    CHECK(named_max(rows, "bernstein-deriv-upper") <= 1.7);
    CHECK(named_max(rows, "bernstein-deriv-lower") <= 1.3);
    CHECK(named_max(rows, "bernstein-lowpass-upper") <= 0.9);
    CHECK(named_max(rows, "bernstein-lowpass-lower") <= 18.0);
}

TEST_CASE("commutator ensemble bounded and grid-stable within 20%") {
    auto r64 = check_commutator(make_grid(2, 64), 60, 1);
    auto r128 = check_commutator(make_grid(2, 128), 60, 1);
    const double m64 = max_ratio(r64);
    const double m128 = max_ratio(r128);
    CHECK(m64 <= 0.8);
    CHECK(m128 <= 0.8);
    CHECK(std::abs(m64 - m128) / m64 < 0.2);
}

TEST_CASE("product law: precondition enforcement and bounded ensemble") {
    auto grid = make_grid(2, 64);
    CHECK_THROWS_AS(check_product_law(grid, 0.5, -0.5, 3, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(check_product_law(grid, 1.2, 0.5, 3, 1),
                    std::invalid_argument);
    auto rows = check_product_law(grid, 0.5, 0.5, 60, 1);
    CHECK(!rows.empty());
    CHECK(max_ratio(rows) <= 0.1);
}

TEST_CASE("sqrtN: flat-spectrum fields stay under the bound across N") {
    auto rows = check_sqrt_n(make_grid(2, 64), 60, 1);
    CHECK(!rows.empty());
    CHECK(max_ratio(rows) <= 0.05);
}

TEST_CASE("L2p: the p=1 anchor is the extremal ratio") {
    auto rows = check_l2p(make_grid(2, 64), 60, 1);
    CHECK(!rows.empty());
    const double m = max_ratio(rows);
    CHECK(m <= 1.3);
    CHECK(m >= 0.99);  // p = 1 reduces to equality
    CHECK_THROWS_AS(check_l2p(make_grid(3, 16), 3, 1), std::invalid_argument);
}

TEST_CASE("ratio stability across 64^2 and 128^2 for every checker") {
    auto g64 = make_grid(2, 64);
    auto g128 = make_grid(2, 128);
    auto stable = [](double a, double b) {
        return std::abs(a - b) / std::max(a, b) < 0.2;
    };
    CHECK(stable(max_ratio(check_bernstein(g64, 40, 9)),
                 max_ratio(check_bernstein(g128, 40, 9))));
    CHECK(stable(max_ratio(check_l2p(g64, 40, 9)),
                 max_ratio(check_l2p(g128, 40, 9))));
}

TEST_CASE("sqrtN saturating example: aligned full shells keep the ratio flat") {
    // equal gradient mass per shell with phase-aligned (real, positive)
    // coefficients nearly saturates the sqrt(N) growth: the measured ratio
    // should not decay as N grows, unlike for generic random fields
    auto grid = make_grid(2, 128);
    DyadicDecomposition dd(grid);
    Field f(grid, {});
    const int q_top = 6;
    for (int q = 0; q <= q_top; ++q) {
        // collect shell modes and weight them to unit gradient mass
        double mass = 0.0;
        const double lo = std::pow(2.0, q - 1), hi = std::pow(2.0, q + 1);
        for (std::size_t i = 0; i < f.num_modes(); ++i) {
            if (!grid->dealias_keep(i)) continue;
            const double k = std::sqrt(grid->k_squared(i));
            if (k > lo && k <= hi) mass += grid->k_squared(i);
        }
        if (mass == 0.0) continue;
        const double c = 1.0 / std::sqrt(grid->volume() * mass);
        for (std::size_t i = 0; i < f.num_modes(); ++i) {
            if (!grid->dealias_keep(i)) continue;
            const double k = std::sqrt(grid->k_squared(i));
            if (k > lo && k <= hi) f.comp(0)[i] += c;
        }
    }
    f.enforce_hermitian();

    auto ratio_at = [&](int N) {
        const double lhs = lp_norm(dd.lowpass(f, N), std::numeric_limits<double>::infinity());
        const double rhs = lp_norm(f, 2.0) +
                           std::sqrt(double(N)) * lp_norm(gradient(f), 2.0);
        return lhs / rhs;
    };
    const double r2 = ratio_at(2);
    const double r6 = ratio_at(6);
    CHECK(r6 > 0.5 * r2);  // no sqrt(N) decay for the saturating profile
    CHECK(r6 > 0.0);
}

TEST_CASE("bernstein two-sided constants come from the shell geometry") {
    // single modes at the inner and outer edges of shell q give the extreme
    // values of 2^-q |grad block| / |block|
    auto grid = make_grid(2, 64);
    DyadicDecomposition dd(grid);
    const int q = 3;  // ring (4, 16)
    auto ratio_for_mode = [&](int k) {
        Field f(grid, {});
        f.comp(0)[static_cast<std::size_t>(k)] = 0.5;  // mode (0, k)
        f.comp(0)[static_cast<std::size_t>((64 - k) % 64)] += 0.5;
        Field blk = dd.block(f, q);
        if (blk.norm_l2() < 1e-14) return -1.0;
        return std::pow(2.0, -q) * gradient(blk).norm_l2() / blk.norm_l2();
    };
    // a single mode passes the multiplier untouched: ratio = |k| 2^-q exactly
    const double r5 = ratio_for_mode(5);
    const double r15 = ratio_for_mode(15);
    CHECK(r5 == doctest::Approx(5.0 / 8.0).epsilon(1e-12));
    CHECK(r15 == doctest::Approx(15.0 / 8.0).epsilon(1e-12));
}
