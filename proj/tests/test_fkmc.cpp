#include <cmath>
#include <cstdlib>

#include "doctest.h"

#include "rpp/fkmc.hpp"

using namespace rpp;

TEST_SUITE("fkmc") {

TEST_CASE("paths are deterministic and start at the origin") {
    const PathSample a = simulate_path(1.0, 1.0 / 128.0, 2, 33, 4);
    const PathSample b = simulate_path(1.0, 1.0 / 128.0, 2, 33, 4);
    REQUIRE(a.positions.size() == b.positions.size());
    CHECK(a.positions == b.positions);
    CHECK(a.steps() == 128);
    CHECK(a.pos(0)[0] == 0.0);
    CHECK(a.pos(0)[1] == 0.0);
    const PathSample c = simulate_path(1.0, 1.0 / 128.0, 2, 33, 5);
    CHECK(a.positions != c.positions);
}

TEST_CASE("increment variance matches the time step") {
    const double dt = 1.0 / 1024.0;
    const PathSample p = simulate_path(4.0, dt, 1, 101, 0);
    const long n = p.steps();
    double s = 0.0;
    for (long k = 0; k < n; ++k) {
        const double d = p.pos(k + 1)[0] - p.pos(k)[0];
        s += d * d;
    }
    const double ratio = s / (static_cast<double>(n) * dt);
    CHECK(std::fabs(ratio - 1.0) < 4.0 * std::sqrt(2.0 / static_cast<double>(n)));
}

TEST_CASE("bridge refinement keeps the coarse skeleton") {
    const PathSample p = simulate_path(0.5, 1.0 / 64.0, 1, 7, 2);
    const PathSample r = refine_path(p, 7, 3);
    CHECK(r.dt == doctest::Approx(p.dt / 2.0).epsilon(1e-15));
    CHECK(r.t_final == doctest::Approx(p.t_final).epsilon(1e-15));
    REQUIRE(r.steps() == 2 * p.steps());
    for (long k = 0; k <= p.steps(); ++k) CHECK(r.pos(2 * k)[0] == p.pos(k)[0]);
}

TEST_CASE("interval survival series reference values") {
    // independent high-precision evaluations of the alternating series
    CHECK(interval_survival_series(2.0, 1.0) ==
          doctest::Approx(0.10797704444410901349).epsilon(1e-13));
    CHECK(interval_survival_series(4.0, 1.0) ==
          doctest::Approx(0.0091569902897607557542).epsilon(1e-13));
    // diffusive scaling: survival depends on t/r^2 only
    CHECK(interval_survival_series(8.0, 2.0) ==
          doctest::Approx(interval_survival_series(2.0, 1.0)).epsilon(1e-13));
}

TEST_CASE("confinement estimate agrees with the series") {
    const double t = 2.0, r = 1.0;
    const Estimate e = confinement_probability(t, r, 1, 10000, 1.0 / 256.0, 61);
    const double z = (e.value - 0.10797704444410901349) / e.std_error;
    CHECK(std::fabs(z) < 4.0);

    // dropping the crossing correction inflates survival on the same draws
    ConfinementOptions off;
    off.crossing_correction = false;
    const Estimate raw = confinement_probability(t, r, 1, 10000, 1.0 / 256.0, 61, off);
    CHECK(raw.value > e.value);
}

TEST_CASE("path potential integral follows the midpoint rule") {
    PoissonSample field;
    field.d = 1;
    field.intensity = 1.0;
    field.window = Window::cube(1, 9.0);
    field.points = {0.7};
    const PotentialEvaluator ev = PotentialEvaluator::with_radius(1, 0.75, 1.0, 5.0);
    const PathSample p = simulate_path(0.25, 1.0 / 64.0, 1, 13, 0);
    const auto got = path_potential_integral(p, ev, field);
    double sum = 0.0;
    for (long k = 0; k < p.steps(); ++k) {
        const double mid = 0.5 * (p.pos(k)[0] + p.pos(k + 1)[0]);
        sum += p.dt * ev.evaluate(field, &mid).value;
    }
    CHECK(got.value == doctest::Approx(sum).epsilon(1e-12));
    CHECK(got.floor_radius == ev.r_min);
}

TEST_CASE("killed moment of the zero potential is the survival probability") {
    const GridFunction xi =
        GridFunction::zeros(1, {{-1, 0, 0}}, {{1, 0, 0}}, {{32, 1, 1}});
    RestrictedConfig cfg;
    cfg.t = 1.0;
    cfg.dt = 1.0 / 256.0;
    cfg.n_paths = 4000;
    cfg.seed = 19;
    const Estimate e = restricted_moment(xi, {{0, 0, 0}}, cfg);
    const double target = interval_survival_series(1.0, 1.0);
    CHECK(std::fabs(e.value - target) / e.std_error < 4.0);
}

TEST_CASE("annealed moment two ways at reduced size") {
    AnnealedConfig cfg;
    cfg.n_paths = 256;
    cfg.y_nodes = 512;
    cfg.dt = 1.0 / 128.0;
    cfg.seed = 21;
    const AnnealedPair pair = annealed_two_ways(cfg);
    CHECK(std::fabs(pair.z) < 4.0);
    // averaging the field out exactly must reduce the spread
    CHECK(pair.reduced.std_error < pair.direct.std_error);
}

TEST_CASE("exit-time moment inequalities on a smooth potential") {
    const GridFunction xi = GridFunction::sample(
        1, {{-1, 0, 0}}, {{1, 0, 0}}, {{64, 1, 1}}, [](const double* x) {
            return 0.8 * std::sin(1.5707963267948966 * (x[0] + 1.0)) +
                   0.3 * std::cos(3.0 * x[0]);
        });
    const FkBoundReport rep = fk_bound_suite(xi, 1.0, 0.5, 2.0, 2.0, 1500, 1.0 / 128.0, 5);
    REQUIRE(rep.checks.size() == 4);
    CHECK(rep.checks[0].name == "average-moment-upper");
    CHECK(rep.checks[1].name == "average-moment-lower");
    CHECK(rep.checks[2].name == "origin-split-upper");
    CHECK(rep.checks[3].name == "free-moment-lower");
    CHECK_FALSE(rep.any_violation());
    CHECK(std::isfinite(rep.lambda_xi));
    CHECK(std::isfinite(rep.lambda_scaled_up));
    CHECK(std::isfinite(rep.lambda_scaled_down));
    for (const auto& c : rep.checks) {
        CHECK(std::isfinite(c.log_lhs));
        CHECK(std::isfinite(c.log_rhs));
        CHECK(c.sigma >= 0.0);
    }
}

} // TEST_SUITE
