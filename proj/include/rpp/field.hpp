#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rpp/quadrature.hpp"
#include "rpp/rng.hpp"

namespace rpp {

struct Window {
    enum class Shape { Box, Ball };

    Shape shape = Shape::Box;
    int d = 1;
    std::array<double, 3> lo{{0, 0, 0}};     // box corners
    std::array<double, 3> hi{{0, 0, 0}};
    std::array<double, 3> center{{0, 0, 0}}; // ball
    double radius = 0.0;

    static Window box(int d, const std::array<double, 3>& lo, const std::array<double, 3>& hi);
    static Window cube(int d, double half_side); // [-h, h]^d
    static Window ball(int d, const std::array<double, 3>& center, double radius);

    double volume() const;
    bool contains(const double* x) const;
};

// One realization of a unit-rate-scaled Poisson point set on a window.
struct PoissonSample {
    int d = 1;
    double intensity = 1.0;
    Window window;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::vector<double> points; // row-major, count() * d entries

    long count() const { return static_cast<long>(points.size()) / d; }
    const double* point(long i) const { return points.data() + static_cast<std::size_t>(i) * d; }
};

PoissonSample sample_field(const Window& window, double intensity, std::uint64_t seed,
                           std::uint64_t stream = 0);

// Field of intensity eps on the window (the small-density regime uses the
// same sampler; the name marks intent at call sites).
PoissonSample scaled_sample(const Window& window, double eps, std::uint64_t seed,
                            std::uint64_t stream = 0);

std::string to_csv(const PoissonSample& sample);
PoissonSample from_csv(const std::string& text);
void write_csv_file(const PoissonSample& sample, const std::string& path);
PoissonSample read_csv_file(const std::string& path);

// Monte Carlo estimate with the seed that produced it.
struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
    long n = 0;
    std::uint64_t seed = 0;
};

// Mean of per_rep(stream, i) over i = 0..n-1, each replicate on its own
// counter-based stream; deterministic for any thread count.
Estimate mc_estimate(std::int64_t n, std::uint64_t seed, std::uint64_t stream_base,
                     const std::function<double(rng::Stream&, std::int64_t)>& per_rep);

double point_sum(const PoissonSample& sample,
                 const std::function<double(const double*)>& f);

// sum_i f(x_i) - intensity * f_window_integral  (the caller supplies the
// exact window integral of f; closed forms exist for every kernel used here).
double compensated_integral(const PoissonSample& sample,
                            const std::function<double(const double*)>& f,
                            double f_window_integral);

// Exact log-MGF of a compensated Poisson integral with radial profile f:
//   log E exp{ sign * theta * int f d(omega - intensity dx) }
//     = intensity * int G(theta f(|x|)) dx,   G = Psi (sign +) or psi (sign -),
// integrated over the shell r_lo <= |x| <= r_hi.
double campbell_log_mgf_radial(const std::function<double(double)>& profile, int d,
                               double r_lo, double r_hi, double intensity, int sign,
                               double theta, const QuadratureSpec& quad = {},
                               const RadialOptions& opts = {});

// Same for f = level * indicator of a region of the given volume.
double campbell_log_mgf_indicator(double region_volume, double intensity, int sign,
                                  double theta, double level = 1.0);

struct TailProb {
    double p = 0.0;
    double log_p = 0.0;
};

// P{Z >= k} for Z Poisson(mu), exact, stable in log space for deep tails.
TailProb poisson_tail_exact(double mu, long k);

// P{max of n iid Poisson(mu) >= k} = 1 - (1 - q)^n with q the exact tail.
TailProb max_count_tail(double n_cells, double mu, long k);

} // namespace rpp
