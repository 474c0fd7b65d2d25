#include <cmath>
#include <numbers>

#include "doctest.h"

#include "rpp/cutoff.hpp"
#include "rpp/errors.hpp"
#include "rpp/quadrature.hpp"

using namespace rpp;

TEST_SUITE("cutoff") {

TEST_CASE("profile plateau, support, midpoint") {
    CHECK(CutoffProfile::value(0.0) == 1.0);
    CHECK(CutoffProfile::value(0.5) == 1.0);
    CHECK(CutoffProfile::value(1.0) == 1.0);
    CHECK(CutoffProfile::value(3.0) == 0.0);
    CHECK(CutoffProfile::value(7.5) == 0.0);
    CHECK(CutoffProfile::value(2.0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("profile slope bounds and smoothness") {
    for (int i = 0; i <= 2000; ++i) {
        const double l = 4.0 * i / 2000.0;
        const double d = CutoffProfile::derivative(l);
        CHECK(d <= 0.0);
        CHECK(d >= -0.75 - 1e-12);
    }
    CHECK(CutoffProfile::derivative(0.9) == 0.0);
    CHECK(CutoffProfile::derivative(3.1) == 0.0);
    // central difference against the analytic derivative inside the ramp
    for (double l : {1.2, 1.8, 2.0, 2.6}) {
        const double h = 1e-6;
        const double fd = (CutoffProfile::value(l + h) - CutoffProfile::value(l - h)) / (2.0 * h);
        CHECK(fd == doctest::Approx(CutoffProfile::derivative(l)).epsilon(1e-7));
    }
}

TEST_CASE("kernel scale of the two truncation families") {
    KernelSpec f0{3, 2.0, KernelKind::Near, 1.0, 0.3, 0};
    // exponent (2+d-p)/(d(d-p)) = 1 at d=3, p=2
    CHECK(f0.cutoff_scale() == doctest::Approx(1.0 / 0.3).epsilon(1e-15));

    KernelSpec f1{3, 2.0, KernelKind::Near, 1.2, 0.3, 1};
    CHECK(f1.cutoff_scale() ==
          doctest::Approx(1.2 * std::sqrt(std::log(1.0 / 0.3))).epsilon(1e-14));

    // the scale scales linearly in a
    KernelSpec f0b = f0;
    f0b.a = 2.5;
    CHECK(f0b.cutoff_scale() == doctest::Approx(2.5 * f0.cutoff_scale()).epsilon(1e-15));
}

TEST_CASE("near/far partition reassembles the full kernel") {
    for (int family : {0, 1}) {
        KernelSpec full{3, 2.0, KernelKind::Full, 1.0, 0.3, family};
        KernelSpec near = full;
        near.kind = KernelKind::Near;
        KernelSpec far = full;
        far.kind = KernelKind::Far;
        const double s = near.cutoff_scale();
        for (int i = 1; i <= 400; ++i) {
            const double r = 4.0 * s * i / 400.0;
            const double whole = kernel_value(full, r);
            const double parts = kernel_value(near, r) + kernel_value(far, r);
            CHECK(std::fabs(parts - whole) <= 1e-12 * whole);
        }
        // far vanishes on the plateau, near beyond the ramp
        CHECK(kernel_value(far, 0.5 * s) == 0.0);
        CHECK(kernel_value(far, s) == 0.0);
        CHECK(kernel_value(near, 3.0 * s) == 0.0);
        CHECK(kernel_value(near, 10.0 * s) == 0.0);
    }
}

TEST_CASE("kernel values and the singular origin") {
    KernelSpec full{1, 0.75, KernelKind::Full, 1.0, 0.5, 0};
    CHECK(kernel_value(full, 2.0) == doctest::Approx(std::pow(2.0, -0.75)).epsilon(1e-15));
    CHECK_THROWS_AS(kernel_value(full, 0.0), singularity_error);
    KernelSpec near = full;
    near.kind = KernelKind::Near;
    CHECK_THROWS_AS(kernel_value(near, 0.0), singularity_error);
    KernelSpec far = full;
    far.kind = KernelKind::Far;
    CHECK(kernel_value(far, 0.0) == 0.0);
}

TEST_CASE("spec validation rejects bad parameters") {
    KernelSpec s{3, 2.0, KernelKind::Full, 1.0, 0.5, 0};
    CHECK_NOTHROW(s.validate());
    // the full kernel ignores the cutoff knobs entirely, so the eps and
    // family checks only bite on the split kinds
    KernelSpec near{3, 2.0, KernelKind::Near, 1.0, 0.5, 0};
    CHECK_NOTHROW(near.validate());
    KernelSpec bad_eps = near;
    bad_eps.eps = 1.0;
    CHECK_THROWS_AS(bad_eps.validate(), domain_error);
    bad_eps.eps = 0.0;
    CHECK_THROWS_AS(bad_eps.validate(), domain_error);
    KernelSpec bad_p = s;
    bad_p.p = 3.0;
    CHECK_THROWS_AS(bad_p.validate(), domain_error);
    KernelSpec bad_family = near;
    bad_family.family = 2;
    CHECK_THROWS_AS(bad_family.validate(), domain_error);
    CHECK_THROWS_AS(s.cutoff_scale(), domain_error); // full kernel has no scale
}

TEST_CASE("near kernel mass brackets and quadrature consistency") {
    KernelSpec near{3, 2.0, KernelKind::Near, 1.0, 0.4, 0};
    const double s = near.cutoff_scale();
    const double mass = near_kernel_mass(near);
    // plateau alone underestimates, full support overestimates
    const double lo = 4.0 * std::numbers::pi * s; // 3 omega_3 s^{d-p}/(d-p), d=3 p=2
    const double hi = 4.0 * std::numbers::pi * 3.0 * s;
    CHECK(mass > lo);
    CHECK(mass < hi);
    // independent route through the generic radial integrator
    RadialOptions opts;
    opts.singular_power = 2.0;
    const double direct = radial_integral(
        [&](double r) { return kernel_value(near, r); }, 3, 0.0, 3.0 * s, {}, opts);
    CHECK(mass == doctest::Approx(direct).epsilon(1e-9));
}

} // TEST_SUITE
