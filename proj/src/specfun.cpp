#include "rpp/specfun.hpp"

#include <cmath>
#include <numbers>

#include "rpp/errors.hpp"

namespace rpp {

double psi(double lambda) {
    if (!(lambda >= 0.0)) throw domain_error("psi: negative argument");
    if (lambda < kPsiSeriesCut) {
        return lambda * lambda *
               (0.5 + lambda * (-1.0 / 6.0 +
                                lambda * (1.0 / 24.0 +
                                          lambda * (-1.0 / 120.0 + lambda / 720.0))));
    }
    return std::expm1(-lambda) + lambda;
}

double Psi(double lambda) {
    if (!(lambda >= 0.0)) throw domain_error("Psi: negative argument");
    if (lambda < kPsiSeriesCut) {
        return lambda * lambda *
               (0.5 + lambda * (1.0 / 6.0 +
                                lambda * (1.0 / 24.0 +
                                          lambda * (1.0 / 120.0 + lambda / 720.0))));
    }
    return std::expm1(lambda) - lambda;
}

double gamma_fn(double x) {
    if (!(x > 0.0)) throw domain_error("gamma_fn: argument must be positive");
    // Lanczos, g = 7, 9 terms.
    static constexpr double kCoef[9] = {
        0.99999999999980993,     676.5203681218851,      -1259.1392167224028,
        771.32342877765313,      -176.61502916214059,    12.507343278686905,
        -0.13857109526572012,    9.9843695780195716e-6,  1.5056327351493116e-7};
    if (x < 0.5) {
        // reflection keeps the approximation in its accurate range
        return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma_fn(1.0 - x));
    }
    const double z = x - 1.0;
    double a = kCoef[0];
    for (int i = 1; i < 9; ++i) a += kCoef[i] / (z + i);
    const double t = z + 7.5;
    return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, z + 0.5) * std::exp(-t) * a;
}

double unit_ball_volume(int d) {
    if (d < 1) throw domain_error("unit_ball_volume: dimension must be >= 1");
    return std::pow(std::numbers::pi, 0.5 * d) / gamma_fn(0.5 * d + 1.0);
}

double psi_riesz_integral(int d, double p) {
    if (d < 1) throw domain_error("psi_riesz_integral: dimension must be >= 1");
    if (!(p > 0.5 * d && p < d))
        throw regime_error("psi_riesz_integral: requires d/2 < p < d");
    return unit_ball_volume(d) * p / (d - p) * gamma_fn((2.0 * p - d) / p);
}

double psi_riesz_by_quadrature(int d, double p, const QuadratureSpec& spec) {
    if (d < 1) throw domain_error("psi_riesz_by_quadrature: dimension must be >= 1");
    if (!(p > 0.5 * d && p < d))
        throw regime_error("psi_riesz_by_quadrature: requires d/2 < p < d");
    auto f = [p](double r) { return psi(std::pow(r, -p)); };
    RadialOptions opts;
    opts.singular_power = p;      // psi(r^-p) ~ r^-p near zero
    opts.tail_power = 2.0 * p;    // psi(r^-p) ~ r^-2p / 2 at infinity
    const double scale = psi_riesz_integral(d, p);
    QuadratureSpec scaled = spec;
    scaled.abs_tol = std::min(spec.abs_tol, spec.rel_tol * scale);
    return radial_integral(f, d, 0.0, std::numeric_limits<double>::infinity(), scaled, opts);
}

GammaStepCheck gamma_step_identity_check(int d, double p, const QuadratureSpec& spec) {
    if (!(p > 0.5 * d && p < d))
        throw regime_error("gamma_step_identity_check: requires d/2 < p < d");
    const double s = (d + p) / p; // in (2, 3)

    // 0..1 after the substitution g = u^m flattening the g^(2-s) singularity
    const double m = 2.0 / (3.0 - s);
    auto near = [&](double u) {
        const double g = std::pow(u, m);
        return psi(g) * std::pow(g, -s) * m * std::pow(u, m - 1.0);
    };
    const double part_near = integrate(near, 0.0, 1.0, spec);

    // 1..R directly; beyond R the exp part is below 1e-26 and the polynomial
    // part integrates in closed form
    const double big = 60.0;
    auto far = [&](double g) { return psi(g) * std::pow(g, -s); };
    double part_far = 0.0;
    double a = 1.0;
    while (a < big) {
        const double b = std::min(big, a * 4.0);
        part_far += integrate(far, a, b, spec);
        a = b;
    }
    const double tail = std::pow(big, 2.0 - s) / (s - 2.0) - std::pow(big, 1.0 - s) / (s - 1.0);

    GammaStepCheck out;
    out.lhs = part_near + part_far + tail;
    out.rhs = p * p / (d * (d - p)) * gamma_fn((2.0 * p - d) / p);
    out.gap = std::fabs(out.lhs - out.rhs) / std::fabs(out.rhs);
    return out;
}

} // namespace rpp
