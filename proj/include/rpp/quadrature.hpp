#pragma once

#include <functional>
#include <limits>

namespace rpp {

struct QuadratureSpec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-13;
    int max_subdiv = 4000;
};

// Hints for radial integrals with power-law behaviour at the endpoints.
//   singular_power s: integrand profile f(r) ~ r^-s as r -> 0+ (requires s < d);
//       a power substitution flattens the singularity before subdivision.
//   tail_power q: |f(r)| decays at least like r^-q for large r (requires q > d);
//       an infinite upper limit is truncated where the implied tail bound of
//       the remaining mass falls below a tenth of the absolute tolerance.
struct RadialOptions {
    double singular_power = 0.0;
    double tail_power = std::numeric_limits<double>::infinity();
};

// Adaptive Gauss-Kronrod (7, 15) on a finite interval.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec = {});

// Integral of f(|x|) over the radial shell r_lo <= |x| <= r_hi in dimension d:
//   d * omega_d * int f(r) r^(d-1) dr.
// r_hi may be infinity if opts.tail_power > d.
double radial_integral(const std::function<double(double)>& f, int d, double r_lo,
                       double r_hi, const QuadratureSpec& spec = {},
                       const RadialOptions& opts = {});

} // namespace rpp
