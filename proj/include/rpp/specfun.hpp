#pragma once

#include "rpp/quadrature.hpp"

namespace rpp {

// psi(l) = exp(-l) - 1 + l and Psi(l) = exp(l) - 1 - l on l >= 0, with a
// series branch below 1e-4 so the quadratic leading order survives rounding.
double psi(double lambda);
double Psi(double lambda);

// Series/direct switch point, exposed for the continuity check.
inline constexpr double kPsiSeriesCut = 1e-4;

// Volume of the unit ball in R^d.
double unit_ball_volume(int d);

// Gamma function on (0, inf) by Lanczos approximation.
double gamma_fn(double x);

// Closed form of the whole-space integral of psi(|x|^-p) in dimension d:
//   omega_d * p/(d-p) * Gamma((2p-d)/p),  valid for d/2 < p < d.
double psi_riesz_integral(int d, double p);

// Same quantity by adaptive radial quadrature (independent evaluation route).
double psi_riesz_by_quadrature(int d, double p, const QuadratureSpec& spec = {});

// Both sides of the one-dimensional step identity
//   int_0^inf [exp(-g) - 1 + g] g^(-(d+p)/p) dg = p^2/(d(d-p)) * Gamma((2p-d)/p).
struct GammaStepCheck {
    double lhs;
    double rhs;
    double gap; // relative
};
GammaStepCheck gamma_step_identity_check(int d, double p, const QuadratureSpec& spec = {});

} // namespace rpp
