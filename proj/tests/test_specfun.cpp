#include <cmath>
#include <numbers>

#include "doctest.h"

#include "rpp/errors.hpp"
#include "rpp/specfun.hpp"

using namespace rpp;

TEST_SUITE("specfun") {

TEST_CASE("psi and Psi at reference points") {
    CHECK(psi(0.0) == 0.0);
    CHECK(Psi(0.0) == 0.0);
    CHECK(psi(1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(Psi(1.0) == doctest::Approx(std::exp(1.0) - 2.0).epsilon(1e-15));
}

TEST_CASE("series branch continuity and leading order") {
    // the quadratic bracket lambda^2/2 - lambda^3/6 <= psi <= lambda^2/2
    for (double l : {1e-8, 1e-6, 5e-5, 1e-4}) {
        const double v = psi(l);
        CHECK(v <= 0.5 * l * l);
        CHECK(v >= 0.5 * l * l - l * l * l / 6.0);
        const double w = Psi(l);
        CHECK(w >= 0.5 * l * l);
        CHECK(w <= 0.5 * l * l + l * l * l); // e^l/6 < 1 here
    }
    // continuity across the series/direct switch
    const double below = psi(kPsiSeriesCut * (1.0 - 1e-9));
    const double above = psi(kPsiSeriesCut * (1.0 + 1e-9));
    CHECK(std::fabs(above - below) / below < 1e-6);
}

TEST_CASE("unit ball volumes") {
    CHECK(unit_ball_volume(1) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(unit_ball_volume(2) == doctest::Approx(std::numbers::pi).epsilon(1e-15));
    CHECK(unit_ball_volume(3) ==
          doctest::Approx(4.0 * std::numbers::pi / 3.0).epsilon(1e-15));
}

TEST_CASE("gamma function reference values") {
    CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-13));
    CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(gamma_fn(1.5) ==
          doctest::Approx(0.5 * std::sqrt(std::numbers::pi)).epsilon(1e-13));
    CHECK(gamma_fn(5.0) == doctest::Approx(24.0).epsilon(1e-13));
    // recurrence away from the reference points
    CHECK(gamma_fn(3.7) == doctest::Approx(2.7 * gamma_fn(2.7)).epsilon(1e-12));
}

TEST_CASE("whole-space psi integral closed form") {
    // independent high-precision evaluations of omega_d p/(d-p) Gamma((2p-d)/p)
    CHECK(psi_riesz_integral(1, 0.75) ==
          doctest::Approx(8.12470763655840250).epsilon(1e-14));
    CHECK(psi_riesz_integral(2, 1.5) ==
          doctest::Approx(12.762260911788384567).epsilon(1e-14));
    CHECK(psi_riesz_integral(3, 2.0) ==
          doctest::Approx(14.848874658217887587).epsilon(1e-14));
    CHECK(psi_riesz_integral(3, 2.5) ==
          doctest::Approx(24.383570104869074347).epsilon(1e-14));
}

TEST_CASE("quadrature route matches the closed form") {
    const std::pair<int, double> cases[] = {{1, 0.75}, {2, 1.5}, {3, 2.0}, {3, 2.5}};
    for (auto [d, p] : cases) {
        const double closed = psi_riesz_integral(d, p);
        const double quad = psi_riesz_by_quadrature(d, p);
        CHECK(std::fabs(quad - closed) / closed < 1e-8);
    }
}

TEST_CASE("regime guards") {
    CHECK_THROWS_AS(psi_riesz_integral(3, 1.4), regime_error); // p <= d/2
    CHECK_THROWS_AS(psi_riesz_integral(3, 3.0), regime_error); // p >= d
}

TEST_CASE("one-dimensional step identity") {
    // rhs closed forms evaluated independently at high precision
    struct Row {
        int d;
        double p;
        double rhs;
    };
    const Row rows[] = {
        {1, 0.75, 3.0467653637094009381},
        {3, 2.0, 2.3632718012073547031},
        {3, 2.5, 4.8509571405220973902},
    };
    for (const auto& r : rows) {
        const auto chk = gamma_step_identity_check(r.d, r.p);
        CHECK(chk.rhs == doctest::Approx(r.rhs).epsilon(1e-13));
        CHECK(std::fabs(chk.gap) < 1e-8);
        CHECK(chk.lhs == doctest::Approx(chk.rhs).epsilon(1e-7));
    }
}

} // TEST_SUITE
