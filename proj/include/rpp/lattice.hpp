#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace rpp {

// Dirichlet lattice Schroedinger operator H = (1/2) Delta_h + xi on the
// interior nodes of a box, node spacing h on every axis.  Interior node
// (i0,i1,i2) sits at lo + (i+1) h; values on the boundary are zero.
struct LatticeOperatorSpec {
    int d = 1;
    std::array<double, 3> lo{{-1, 0, 0}};
    std::array<double, 3> hi{{1, 0, 0}};
    double h = 1.0 / 64.0;
    std::vector<double> xi; // interior node potential, size m0*m1*m2

    std::array<int, 3> interior_nodes() const;
    std::size_t size() const;
    void validate() const;
    void node_coord(std::size_t idx, double* x) const;
};

// out = (H + shift) v, matrix-free.
void apply_shifted(const LatticeOperatorSpec& spec, double shift,
                   const std::vector<double>& v, std::vector<double>& out);

struct EigenResult {
    double lambda = 0.0;
    long iterations = 0;
    double shift = 0.0;
    std::vector<double> vec;
};

// Largest eigenvalue of H by power iteration on H + shift, with
// shift = 2d/h^2 - min(xi) making the shifted operator positive
// semidefinite.  Stops when successive Rayleigh quotients differ by less
// than rq_tol.
EigenResult principal_eigenvalue(const LatticeOperatorSpec& spec, double rq_tol = 1e-10,
                                 long max_iter = 2000000);

// Ground state energy inf (1/2)|grad g|^2 / |g|^2 of the Dirichlet Laplacian
// on the centered ball of radius R, via the radial finite-difference operator
// (inverse iteration on the tridiagonal system).  Equals -principal
// eigenvalue at zero potential.
double ball_ground_energy_radial(int d, double R, int cells);

// Largest value of int g^2 w / (int g^2 + (1/2) int |grad g|^2) over radial
// profiles on [0, R] (Dirichlet at R), with the attraction weight
// w(r) = r^-p averaged exactly over the singular cell.  Power iteration on
// the tridiagonal generalized problem.
double radial_riesz_optimum(int d, double p, double R, int cells);

// Same optimum on the full 1-d lattice over [-R, R] (independent
// discretization used as a cross-check), optionally with the singularity
// shifted to x0.
double lattice_riesz_optimum_1d(double p, double R, int cells, double x0 = 0.0);

// Cell-averaged |x - x0|^-p on a 1-d interior-node lattice (the potential fed
// to eigen solves; the singular node takes the exact average over its cell).
std::vector<double> riesz_potential_nodes_1d(double p, double lo, double hi, double h,
                                             double theta = 1.0, double x0 = 0.0);

} // namespace rpp
