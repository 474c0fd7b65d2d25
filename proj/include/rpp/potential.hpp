#pragma once

#include <limits>

#include "rpp/cutoff.hpp"
#include "rpp/field.hpp"
#include "rpp/grid.hpp"

namespace rpp {

// int_{|u| <= R} |u|^-p du = d * omega_d * R^(d-p) / (d-p)
double riesz_ball_mass(int d, double p, double R);

struct PotentialValue {
    double value = 0.0;
    double tail_std = 0.0; // std of the compensated mass omitted beyond the window radius
    long floored = 0;      // evaluations clipped at the r_min floor
};

// Evaluates the compensated singular potential
//   sum_{|y_i - x| <= R} |y_i - x|^-p  -  density * riesz_ball_mass(R)
// on point samples.  R is either given or sized so the omitted tail standard
// deviation is below tail_ratio times the compensator.
struct PotentialEvaluator {
    int d = 1;
    double p = 0.75;
    double density = 1.0;
    double window_radius = 0.0;
    double r_min = 0.0; // singular floor, defaults to 1e-6 * window_radius

    static PotentialEvaluator make(int d, double p, double density, double tail_ratio = 1e-3);
    static PotentialEvaluator with_radius(int d, double p, double density, double R);

    double compensator() const;
    double tail_std() const;

    // Requires the sample window to cover the ball B(x, window_radius).
    PotentialValue evaluate(const PoissonSample& sample, const double* x) const;
};

// Compensated integral of a Far kernel against the point sample, truncated at
// trunc_radius:
//   sum_{|y_i - x| <= T} L(|y_i - x|)  -  intensity * int_{|u| <= T} L(|u|) du.
PotentialValue far_potential(const PoissonSample& sample, const double* x,
                             const KernelSpec& far_kernel, double trunc_radius,
                             const QuadratureSpec& quad = {});

// int g(y)^2 k(|y - x|) dy by the midpoint rule over g's cells.  The cell
// containing x contributes the exact integral of the kernel over the ball of
// the cell's inradius times the local g^2 value (the kernel is radial and
// integrable, so the singular cell has a closed form).  An optional truncation
// radius drops cells with |y_c - x| > trunc_radius.
double inner_riesz(const GridFunction& g, const double* x, const KernelSpec& kernel,
                   double trunc_radius = std::numeric_limits<double>::infinity());

// Compensated Poisson functional of the profile x -> inner_riesz(g, x) with
// kernel truncation radius L:
//   sum_i phi(y_i) - intensity * |g|_2^2 * riesz_ball_mass(L)
// (the compensator uses the exact interchange of the two integrals).
// Requires the sample window to cover the support of g fattened by L.
double zeta_epsilon(const GridFunction& g, const PoissonSample& sample, double p,
                    double trunc_radius);

struct SplitFunctionals {
    double near_part = 0.0; // singular piece, compact support
    double far_part = 0.0;  // bounded piece, truncated at the same L as zeta
    double zeta = 0.0;
};

// zeta split along the Near/Far kernel partition at cutoff parameters (a, eps,
// family); near + far reproduces zeta exactly.
SplitFunctionals split_functionals(const GridFunction& g, const PoissonSample& sample,
                                   double p, double a, double eps, int family,
                                   double trunc_radius, const QuadratureSpec& quad = {});

} // namespace rpp
