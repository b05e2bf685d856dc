#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qtf/osgood.hpp"

using namespace qtf;

TEST_CASE("osgood modulus: frozen value at 1, limits, monotonicity") {
    // high-precision reference: mu(1) = 1 + ln(2+e) + ln(2+e) lnln(2+e)
    CHECK(osgood_mu(1.0) ==
          doctest::Approx(3.232818396892600248585232).epsilon(1e-14));
    CHECK(osgood_mu(0.0) == 0.0);
    CHECK(osgood_mu(1e-12) <= 1e-9);
    CHECK(osgood_mu(1e-12) ==
          doctest::Approx(1.203366973333676e-10).epsilon(1e-12));
    CHECK(osgood_mu(1e-2) ==
          doctest::Approx(0.1276700760997407670662833).epsilon(1e-14));
    for (double r : {1e-8, 1e-4, 1e-2, 0.5, 1.0, 2.0, 10.0}) {
        CHECK(osgood_mu(r) > r);                // the added logs are positive
        CHECK(osgood_mu(2.0 * r) > osgood_mu(r));  // monotone
    }
    CHECK_THROWS_AS(osgood_mu(-1.0), std::invalid_argument);
}

TEST_CASE("envelope: zero data stays identically zero") {
    std::vector<double> chi(50, 3.7);
    auto env = osgood_integrate(0.0, chi, 0.02);
    REQUIRE(env.size() == 51);
    for (double v : env) CHECK(v == 0.0);
}

TEST_CASE("envelope: chi = 0 freezes the initial value") {
    std::vector<double> chi(20, 0.0);
    auto env = osgood_integrate(0.42, chi, 0.05);
    for (double v : env) CHECK(v == doctest::Approx(0.42));
}

TEST_CASE("envelope with linear modulus reproduces the exponential") {
    std::vector<double> chi(100, 1.0);
    auto env = osgood_integrate(1e-3, chi, 0.01, 200,
                                [](double r) { return r; });
    CHECK(env.back() ==
          doctest::Approx(1e-3 * std::exp(1.0)).epsilon(1e-3));
}

TEST_CASE("full modulus dominates the Gronwall envelope pointwise") {
    std::vector<double> chi(100, 1.0);
    for (double phi0 : {1e-12, 1e-6, 1e-2}) {
        auto full = osgood_integrate(phi0, chi, 0.01, 100);
        auto gron = osgood_integrate(phi0, chi, 0.01, 100,
                                     [](double r) { return r; });
        REQUIRE(full.size() == gron.size());
        for (std::size_t i = 0; i < full.size(); ++i)
            CHECK(full[i] >= gron[i]);
        CHECK(full.back() > gron.back());  // strictly larger once time passes
    }
}

TEST_CASE("envelope dominates any discrete series satisfying the inequality") {
    // manufacture a series with phi' <= chi mu(phi), then check domination
    const double dt = 0.01;
    std::vector<double> phi{1e-4};
    std::vector<double> chi;
    for (int i = 0; i < 80; ++i) {
        const double c = 0.5 + 0.4 * std::sin(0.3 * i);
        chi.push_back(c);
        phi.push_back(phi.back() + 0.9 * dt * c * osgood_mu(phi.back()));
    }
    auto env = osgood_integrate(phi[0], chi, dt, 50);
    for (std::size_t i = 0; i < phi.size(); ++i) CHECK(phi[i] <= env[i] + 1e-18);
}

TEST_CASE("envelope argument validation") {
    CHECK_THROWS_AS(osgood_integrate(-1.0, {1.0}, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(osgood_integrate(1.0, {1.0}, 0.0), std::invalid_argument);
}
