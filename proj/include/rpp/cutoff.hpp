#pragma once

#include "rpp/quadrature.hpp"

namespace rpp {

// Smooth transition profile: 1 on [0, 1], 0 on [3, inf), cubic in between,
// with derivative in [-3/4, 0].
struct CutoffProfile {
    static double value(double lambda);
    static double derivative(double lambda);
};

enum class KernelKind { Full, Near, Far };

// Radial kernel family around the Riesz kernel r^-p.
//   Full:  r^-p
//   Near:  r^-p * alpha(r / scale)   (compactly supported, keeps the singularity)
//   Far :  r^-p * (1 - alpha(r / scale))  (bounded, carries the far tail)
// The cutoff radius depends on the truncation family:
//   family 0: scale = a * eps^-((2+d-p)/(d(d-p)))
//   family 1: scale = a * log(1/eps)^(1/p)
struct KernelSpec {
    int d = 1;
    double p = 0.75;
    KernelKind kind = KernelKind::Full;
    double a = 1.0;
    double eps = 0.5;
    int family = 0;

    void validate() const;
    double cutoff_scale() const; // plateau radius of the Near part
};

// Kernel value at radius r >= 0.  r = 0 raises a singularity error for Full
// and Near; the Far kernel vanishes on the whole plateau.
double kernel_value(const KernelSpec& spec, double r);

// Total mass of the Near kernel over R^d (finite: compact support, p < d).
double near_kernel_mass(const KernelSpec& spec, const QuadratureSpec& quad = {});

} // namespace rpp
