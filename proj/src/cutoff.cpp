#include "rpp/cutoff.hpp"

#include <cmath>

#include "rpp/errors.hpp"
#include "rpp/specfun.hpp"

namespace rpp {

double CutoffProfile::value(double lambda) {
    if (lambda <= 1.0) return 1.0;
    if (lambda >= 3.0) return 0.0;
    const double s = 0.5 * (3.0 - lambda);
    return s * s * (3.0 - 2.0 * s);
}

double CutoffProfile::derivative(double lambda) {
    if (lambda <= 1.0 || lambda >= 3.0) return 0.0;
    const double s = 0.5 * (3.0 - lambda);
    return -3.0 * s * (1.0 - s);
}

void KernelSpec::validate() const {
    if (d < 1) throw domain_error("KernelSpec: dimension must be >= 1");
    if (!(p > 0.0 && p < d)) throw domain_error("KernelSpec: requires 0 < p < d");
    if (kind == KernelKind::Full) return;
    if (!(a > 0.0)) throw domain_error("KernelSpec: cutoff parameter a must be positive");
    if (!(eps > 0.0 && eps < 1.0)) throw domain_error("KernelSpec: requires 0 < eps < 1");
    if (family != 0 && family != 1) throw domain_error("KernelSpec: family must be 0 or 1");
}

double KernelSpec::cutoff_scale() const {
    validate();
    if (kind == KernelKind::Full)
        throw domain_error("KernelSpec: full kernel has no cutoff scale");
    if (family == 0) {
        const double expo = (2.0 + d - p) / (d * (d - p));
        return a * std::pow(eps, -expo);
    }
    return a * std::pow(std::log(1.0 / eps), 1.0 / p);
}

double kernel_value(const KernelSpec& spec, double r) {
    spec.validate();
    if (!(r >= 0.0)) throw domain_error("kernel_value: radius must be >= 0");
    switch (spec.kind) {
        case KernelKind::Full:
            if (r == 0.0) throw singularity_error("kernel_value: full kernel at r = 0");
            return std::pow(r, -spec.p);
        case KernelKind::Near: {
            if (r == 0.0) throw singularity_error("kernel_value: near kernel at r = 0");
            const double s = spec.cutoff_scale();
            if (r >= 3.0 * s) return 0.0;
            return std::pow(r, -spec.p) * CutoffProfile::value(r / s);
        }
        case KernelKind::Far: {
            const double s = spec.cutoff_scale();
            if (r <= s) return 0.0;
            return std::pow(r, -spec.p) * (1.0 - CutoffProfile::value(r / s));
        }
    }
    throw domain_error("kernel_value: bad kind");
}

double near_kernel_mass(const KernelSpec& spec, const QuadratureSpec& quad) {
    spec.validate();
    if (spec.kind != KernelKind::Near)
        throw domain_error("near_kernel_mass: only the near kernel has finite mass");
    const double s = spec.cutoff_scale();
    // factor the scale out so the quadrature runs on the unit profile
    auto f = [&](double u) {
        if (u == 0.0) return 0.0; // irrelevant under the singular substitution
        return std::pow(u, -spec.p) * CutoffProfile::value(u);
    };
    RadialOptions opts;
    opts.singular_power = spec.p;
    const double unit = radial_integral(f, spec.d, 0.0, 3.0, quad, opts);
    return unit * std::pow(s, spec.d - spec.p);
}

} // namespace rpp
