#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "rpp/field.hpp"
#include "rpp/grid.hpp"
#include "rpp/potential.hpp"

namespace rpp {

struct PathSample {
    int d = 1;
    double dt = 0.0;
    double t_final = 0.0;
    std::vector<double> positions; // (steps+1) * d, row-major, starts at the origin

    long steps() const { return static_cast<long>(positions.size()) / d - 1; }
    const double* pos(long k) const { return positions.data() + static_cast<std::size_t>(k) * d; }
};

// Brownian path from the origin; increments N(0, dt I); deterministic in
// (seed, stream).
PathSample simulate_path(double t, double dt, int d, std::uint64_t seed,
                         std::uint64_t stream = 0);

// Bridge refinement: inserts the conditional midpoints, halving dt.
PathSample refine_path(const PathSample& path, std::uint64_t seed, std::uint64_t stream = 0);

struct ConfinementOptions {
    bool crossing_correction = true; // per-step boundary-crossing weight, see below
};

// P{ sup_{s<=t} |B_s| <= r } by weighted MC.  The discrete check alone
// overestimates survival by O(sqrt(dt)); by default every step carries the
// Brownian-bridge crossing weight 1 - exp(-2 d1 d2 / dt) per boundary (exact
// for the two interval endpoints at d = 1, radial approximation for d >= 2).
Estimate confinement_probability(double t, double r, int d, long n_paths, double dt,
                                 std::uint64_t seed, const ConfinementOptions& opts = {});

// Exact interval survival probability P{sup_{s<=t}|B_s| <= r} at d = 1:
//   (4/pi) sum_k (-1)^k (2k+1)^{-1} exp{-(2k+1)^2 pi^2 t / (8 r^2)}
double interval_survival_series(double t, double r, int terms = 64);

struct PathIntegralResult {
    double value = 0.0;
    long floored = 0;       // midpoint evaluations clipped at the potential floor
    double floor_radius = 0.0;
    double refine_error = 0.0; // conservative midpoint-rule error estimate
};

// Midpoint time quadrature of the compensated potential along the path:
//   sum_k dt * V((B_k + B_{k+1})/2).
// The error estimate compares against the coarsened (2 dt) rule.
PathIntegralResult path_potential_integral(const PathSample& path,
                                           const PotentialEvaluator& ev,
                                           const PoissonSample& field);

struct FKConfig {
    double theta = 1.0;
    int sign = -1; // +1 requires p < 2 (positive-sign moments blow up otherwise)
    double t = 1.0;
    double dt = 0.0; // 0 -> t/2048
    long n_paths = 1024;
    int d = 1;
    double p = 0.75;
    double kernel_radius = 0.0; // 0 -> sized from tail_ratio
    double tail_ratio = 1e-3;
    double window_pad = 0.0;    // 0 -> 8 sqrt(t), beyond the 99.9% path-range quantile
    std::uint64_t seed = 1;

    void validate() const;
    double step() const { return dt > 0.0 ? dt : t / 2048.0; }
    double resolved_radius() const;
    Window field_window() const; // cube of half-side resolved_radius() + pad
};

struct PartitionResult {
    Estimate mean;          // of exp{sign * theta * path integral}
    double log_mean = 0.0;  // log-mean-exp, finite even when the mean overflows
    double log_se = 0.0;    // delta-method std error of log_mean
    long floored = 0;
    double max_exponent = 0.0;
};

// Quenched partition estimator for one fixed field realization.
PartitionResult partition_estimator(const FKConfig& cfg, const PoissonSample& field);

struct PathChunkRow {
    long index = 0;
    double log_mean = 0.0;     // log-mean-exp over the chunk
    double exponent_var = 0.0; // sample variance of the exponent
    long floored = 0;
};

std::vector<PathChunkRow> partition_chunks(const FKConfig& cfg, const PoissonSample& field,
                                           long chunk);
std::string chunks_csv(const std::vector<PathChunkRow>& rows);

struct AnnealedConfig {
    double theta = 0.5;
    double t = 1.0;
    double dt = 1.0 / 256;
    long n_paths = 2048; // per estimator
    double p = 0.75;
    double kernel_radius = 8.0; // truncation; both estimators target the same functional
    int y_nodes = 1024;         // quadrature grid for the reduced estimator
    std::uint64_t seed = 7;
};

struct AnnealedPair {
    Estimate direct;  // fresh field per path, double MC
    Estimate reduced; // field averaged out exactly, path-only MC
    double z = 0.0;   // two-sample z score between the estimators
    double floor_radius = 0.0;
};

// One-dimensional annealed mean E exp{-theta int_0^t V(B_s) ds} two ways.
// The kernel is truncated at kernel_radius and floored at the quadrature
// resolution, so both estimators target exactly the same discrete functional;
// the reduced form replaces the field average by its closed form per path.
AnnealedPair annealed_two_ways(const AnnealedConfig& cfg);

struct RestrictedConfig {
    double t = 1.0;
    double dt = 1.0 / 512;
    long n_paths = 10000;
    std::uint64_t seed = 3;
    bool crossing_correction = true;
};

// E_x[ exp{int_0^t xi(B_s) ds}; tau_D >= t ] with D = the grid box and xi
// interpolated from the grid (zero outside).
Estimate restricted_moment(const GridFunction& xi, const std::array<double, 3>& x0,
                           const RestrictedConfig& cfg);

enum class BoundVerdict { pass, inconclusive, violated };

struct BoundCheck {
    std::string name;
    double log_lhs = 0.0;
    double log_rhs = 0.0;
    double sigma = 0.0; // combined log-space std error
    double slack = 0.0; // oriented so slack >= 0 means the inequality holds
    BoundVerdict verdict = BoundVerdict::inconclusive;
};

struct FkBoundReport {
    double t = 0.0, delta = 0.0, alpha = 0.0, beta = 0.0, dt = 0.0;
    long n_paths = 0;
    double lambda_xi = 0.0;          // lattice eigenvalue of (1/2)Lap + xi
    double lambda_scaled_up = 0.0;   // potential (beta/alpha) xi
    double lambda_scaled_down = 0.0; // potential xi/alpha
    std::vector<BoundCheck> checks;  // average-moment upper/lower, origin-split
                                     // upper, free-moment lower
    bool any_violation() const;
};

// Numerical check of the four exit-time moment inequalities relating killed
// and free exponential moments to the lattice eigenvalues; 1/alpha + 1/beta
// = 1, 0 < delta < t, origin inside the grid box.
FkBoundReport fk_bound_suite(const GridFunction& xi, double t, double delta, double alpha,
                             double beta, long n_paths, double dt, std::uint64_t seed,
                             double eigen_h = 1.0 / 128);

} // namespace rpp
