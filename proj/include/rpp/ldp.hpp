#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rpp/cutoff.hpp"
#include "rpp/field.hpp"
#include "rpp/grid.hpp"
#include "rpp/quadrature.hpp"

namespace rpp {

// Epsilon ladder for the scaling-limit checks, strictly decreasing in (0, 1).
struct ScalingSchedule {
    std::vector<double> eps;

    static ScalingSchedule standard(); // 1e-1 .. 1e-6
    void validate() const;
};

// eps^{-(2-p)/d}: the level at which the compensated attraction functional
// develops its deviations.
double deviation_scale(double eps, int d, double p);

// deviation_scale * log(1/eps): the speed of the upper-tail rate.
double l_rate(double eps, int d, double p);

// eps^{-p(2+d-p)/(d(d-p))}: the tilt that renders the far-field log-MGF
// eps-independent under the matched kernel scale.
double mgf_exponent_scale(double eps, int d, double p);

// One row of a scaling-limit table.  "scale" is the experiment's own running
// scale (kernel scale for the MGF check, l_rate for the count check,
// deviation_scale for the tail experiment); value/target are both on the
// normalized axis and gap = value - target.
struct TailRow {
    double eps = 0.0;
    double scale = 0.0;
    double value = 0.0;
    double target = 0.0;
    double gap = 0.0;
};

struct TailReport {
    std::string name;
    std::vector<TailRow> rows;

    double final_abs_gap() const;
    bool gaps_decreasing() const; // strictly, in |gap|
};

std::string tail_csv(const TailReport& report);
std::string tail_json(const TailReport& report);

// Normalized far-field log-MGF along the schedule:
//   value(eps) = eps^{2/(d-p)} * log E exp{ sign * theta_eps * <far kernel, omega - eps dx> }
// with the family-0 kernel scale a * eps^{-(2+d-p)/(d(d-p))} and
// theta_eps = theta * mgf_exponent_scale(eps).  The change of variables that
// drives the limit is exact here, so the gap to the eps-free target integral
// is pure quadrature error.
TailReport mgf_limit_check(double theta, double a, int d, double p,
                           const ScalingSchedule& schedule, int sign,
                           const QuadratureSpec& quad = {});

// Upper-tail rate surrogate: P{N >= ceil(gamma * deviation_scale)} for N
// Poisson with mean eps * |B(0, delta)|, normalized by l_rate.  The limit is
// -(2+d-p) gamma / d; convergence is logarithmic, so the table is judged on
// monotone gap decay rather than a small final gap.
TailReport count_rate_check(double gamma, int d, double p,
                            const ScalingSchedule& schedule, double delta = 0.5);

// Dictionary of bump profiles on (-halfwidth, halfwidth), normalized to unit
// energy ||g||_2^2 + (1/2)||grad g||_2^2 = 1: sine modes plus truncated
// Gaussians of assorted centers and widths.  Only g^2 enters the functionals,
// so sign changes in the higher modes are immaterial.
std::vector<GridFunction> bump_dictionary(int count, int cells, double halfwidth);

// Lower-tail experiment for the compensated attraction functional
//   zeta_eps(g) = sum_i phi_g(x_i) - eps * int phi_g,
//   phi_g(x) = int g(y)^2 |y - x|^{-p} dy  (kernel truncated at trunc_radius),
// with phi_g replaced by its piecewise-linear interpolant on x_nodes nodes.
// The interpolated profile is the functional on both sides: the empirical
// frequency of {zeta <= -gamma * deviation_scale} per dictionary entry is
// held against its own optimized exponential-Chebyshev bound
//   min_theta exp{-theta * level + eps * int psi(theta * phi~_g)},
// the psi integral evaluated by the trapezoid rule, which overshoots the
// exact integral segment by segment (psi is convex), so the bound stays a
// bound.  Zero events across the board is reported as inconclusive, not
// failure: the event is unreachable once eps * mass(trunc_radius) falls
// below the deviation level.
struct ZetaExperimentConfig {
    double gamma = 0.02;
    int d = 1;
    double p = 0.75;
    double halfwidth = 1.0;    // g supported on (-halfwidth, halfwidth)
    double trunc_radius = 32.0;
    int dictionary_size = 32;
    int g_cells = 256;
    int x_nodes = 4096;        // interpolation nodes across the fattened window
    long n_fields = 4000;
    std::vector<double> eps = {0.5, 0.25, 0.125, 0.0625};
    std::uint64_t seed = 2024;
    // non-empty: used verbatim (must live on the domain with unit energy)
    std::vector<GridFunction> dictionary;
};

struct ZetaGCheck {
    int g_index = 0;
    long events = 0;
    double freq = 0.0;
    double se = 0.0;    // binomial
    double bound = 0.0; // optimized Chebyshev
    bool violated = false; // freq - 4 se > bound
};

struct ZetaEpsResult {
    double eps = 0.0;
    double level = 0.0;       // gamma * deviation_scale
    double reach = 0.0;       // eps * max_g |g|_2^2 * mass(trunc_radius)
    long events_any = 0;      // fields where some dictionary entry dips below
    std::vector<ZetaGCheck> per_g;
};

struct ZetaExperimentResult {
    ZetaExperimentConfig config;
    std::vector<ZetaEpsResult> by_eps;
    TailReport report;        // normalized log-frequency vs -deviation_rate(gamma)
    double rate_target = 0.0; // -deviation_rate at the dictionary's domain
    bool any_violation = false;
    bool inconclusive = false; // no events at any eps
};

ZetaExperimentResult zeta_tail_experiment(const ZetaExperimentConfig& config);

// Smallest m with P{max of n_cells iid Poisson(mu) <= m} >= 1/2.
long max_count_median(double n_cells, double mu);

// Median growth of the maximal cell count over a box of side t partitioned
// into delta-cells, normalized by log t / loglog t (the law-of-large-numbers
// scale for the max): rows report the raw median and the normalized value.
struct MaxCountRow {
    double t = 0.0;
    double n_cells = 0.0;
    double mu = 0.0;
    long median = 0;
    double normalized = 0.0; // median * loglog t / log t
};

struct MaxCountTable {
    int d = 3;
    double delta = 0.5;
    std::vector<MaxCountRow> rows;
};

MaxCountTable max_count_law_table(const std::vector<double>& ts, double delta = 0.5,
                                  int d = 3);

std::string max_count_csv(const MaxCountTable& table);

// Monte Carlo frequency of {max of n_cells iid Poisson(mu) >= threshold},
// for spot-checking the exact tail at a reduced cell count.
Estimate max_count_mc(long n_cells, double mu, long threshold, long reps,
                      std::uint64_t seed);

} // namespace rpp
