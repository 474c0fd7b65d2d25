#include "rpp/fkmc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "rpp/errors.hpp"
#include "rpp/lattice.hpp"
#include "rpp/parallel.hpp"

namespace rpp {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

long step_count(double t, double dt, const char* who) {
    if (!(dt > 0.0) || !(t >= dt))
        throw domain_error(std::string(who) + ": need 0 < dt <= t");
    const long steps = std::lround(t / dt);
    if (steps < 1 || std::fabs(steps * dt - t) > 1e-6 * t)
        throw domain_error(std::string(who) + ": t must be an integer number of steps");
    return steps;
}

} // namespace

PathSample simulate_path(double t, double dt, int d, std::uint64_t seed, std::uint64_t stream) {
    if (d < 1 || d > 3) throw domain_error("simulate_path: dimension must be 1..3");
    const long steps = step_count(t, dt, "simulate_path");
    PathSample path;
    path.d = d;
    path.dt = dt;
    path.t_final = t;
    path.positions.assign(static_cast<std::size_t>(steps + 1) * d, 0.0);
    rng::Stream rs(seed, stream);
    const double sd = std::sqrt(dt);
    for (long k = 0; k < steps; ++k) {
        const double* prev = path.pos(k);
        double* next = path.positions.data() + static_cast<std::size_t>(k + 1) * d;
        for (int c = 0; c < d; ++c) next[c] = prev[c] + sd * rs.normal();
    }
    return path;
}

PathSample refine_path(const PathSample& path, std::uint64_t seed, std::uint64_t stream) {
    const long steps = path.steps();
    PathSample fine;
    fine.d = path.d;
    fine.dt = path.dt / 2.0;
    fine.t_final = path.t_final;
    fine.positions.assign(static_cast<std::size_t>(2 * steps + 1) * path.d, 0.0);
    rng::Stream rs(seed, stream);
    const double sd = std::sqrt(path.dt / 4.0); // bridge midpoint variance dt/4
    for (long k = 0; k < steps; ++k) {
        const double* a = path.pos(k);
        const double* b = path.pos(k + 1);
        double* out = fine.positions.data() + static_cast<std::size_t>(2 * k) * path.d;
        for (int c = 0; c < path.d; ++c) {
            out[c] = a[c];
            out[path.d + c] = 0.5 * (a[c] + b[c]) + sd * rs.normal();
        }
    }
    const double* last = path.pos(steps);
    double* out = fine.positions.data() + static_cast<std::size_t>(2 * steps) * path.d;
    for (int c = 0; c < path.d; ++c) out[c] = last[c];
    return fine;
}

Estimate confinement_probability(double t, double r, int d, long n_paths, double dt,
                                 std::uint64_t seed, const ConfinementOptions& opts) {
    if (!(r > 0.0)) throw domain_error("confinement_probability: radius must be positive");
    if (d < 1 || d > 3) throw domain_error("confinement_probability: dimension must be 1..3");
    const long steps = step_count(t, dt, "confinement_probability");
    const double sd = std::sqrt(dt);
    return mc_estimate(n_paths, seed, 0, [&](rng::Stream& rs, std::int64_t) {
        double x[3] = {0, 0, 0};
        double w = 1.0;
        for (long k = 0; k < steps; ++k) {
            double y[3];
            double norm2 = 0.0;
            for (int c = 0; c < d; ++c) {
                y[c] = x[c] + sd * rs.normal();
                norm2 += y[c] * y[c];
            }
            if (norm2 > r * r) return 0.0;
            if (opts.crossing_correction) {
                if (d == 1) {
                    w *= 1.0 - std::exp(-2.0 * (r - x[0]) * (r - y[0]) / dt);
                    w *= 1.0 - std::exp(-2.0 * (r + x[0]) * (r + y[0]) / dt);
                } else {
                    double from2 = 0.0;
                    for (int c = 0; c < d; ++c) from2 += x[c] * x[c];
                    const double d1 = r - std::sqrt(from2);
                    const double d2 = r - std::sqrt(norm2);
                    w *= 1.0 - std::exp(-2.0 * d1 * d2 / dt);
                }
            }
            for (int c = 0; c < d; ++c) x[c] = y[c];
        }
        return w;
    });
}

double interval_survival_series(double t, double r, int terms) {
    if (!(t > 0.0) || !(r > 0.0) || terms < 1)
        throw domain_error("interval_survival_series: bad arguments");
    double s = 0.0;
    for (int k = terms - 1; k >= 0; --k) {
        const double m = 2.0 * k + 1.0;
        const double term = std::exp(-m * m * kPi * kPi * t / (8.0 * r * r)) / m;
        s += (k % 2 == 0) ? term : -term;
    }
    return 4.0 / kPi * s;
}

PathIntegralResult path_potential_integral(const PathSample& path, const PotentialEvaluator& ev,
                                           const PoissonSample& field) {
    const long steps = path.steps();
    const int d = path.d;
    PathIntegralResult out;
    out.floor_radius = ev.r_min;
    double fine = 0.0;
    for (long k = 0; k < steps; ++k) {
        double mid[3];
        const double* a = path.pos(k);
        const double* b = path.pos(k + 1);
        for (int c = 0; c < d; ++c) mid[c] = 0.5 * (a[c] + b[c]);
        const PotentialValue v = ev.evaluate(field, mid);
        fine += path.dt * v.value;
        out.floored += v.floored;
    }
    // coarsened rule at 2 dt: the time midpoint of a step pair is a knot
    double coarse = 0.0;
    long k = 1;
    for (; k < steps; k += 2) coarse += 2.0 * path.dt * ev.evaluate(field, path.pos(k)).value;
    if (steps % 2 == 1) {
        double mid[3];
        const double* a = path.pos(steps - 1);
        const double* b = path.pos(steps);
        for (int c = 0; c < d; ++c) mid[c] = 0.5 * (a[c] + b[c]);
        coarse += path.dt * ev.evaluate(field, mid).value;
    }
    out.value = fine;
    out.refine_error = 2.0 * std::fabs(fine - coarse) + 1e-9 * (1.0 + std::fabs(fine));
    return out;
}

void FKConfig::validate() const {
    if (d < 1 || d > 3) throw domain_error("FKConfig: dimension must be 1..3");
    if (!(p > 0.5 * d && p < d)) throw regime_error("FKConfig: requires d/2 < p < d");
    if (sign != 1 && sign != -1) throw domain_error("FKConfig: sign must be +1 or -1");
    if (sign == 1 && !(p < 2.0))
        throw regime_error("FKConfig: positive-sign moments blow up for p >= 2");
    if (!(theta >= 0.0)) throw domain_error("FKConfig: theta must be nonnegative");
    if (!(t > 0.0)) throw domain_error("FKConfig: t must be positive");
    step_count(t, step(), "FKConfig");
    if (n_paths < 2) throw domain_error("FKConfig: need at least 2 paths");
    if (!(tail_ratio > 0.0)) throw domain_error("FKConfig: tail ratio must be positive");
}

double FKConfig::resolved_radius() const {
    if (kernel_radius > 0.0) return kernel_radius;
    return PotentialEvaluator::make(d, p, 1.0, tail_ratio).window_radius;
}

Window FKConfig::field_window() const {
    const double pad = window_pad > 0.0 ? window_pad : 8.0 * std::sqrt(t);
    return Window::cube(d, resolved_radius() + pad);
}

namespace {

void partition_exponents(const FKConfig& cfg, const PoissonSample& field,
                         std::vector<double>& expo, std::vector<long>& floored) {
    cfg.validate();
    if (field.d != cfg.d) throw geometry_error("partition_estimator: dimension mismatch");
    const PotentialEvaluator ev = PotentialEvaluator::with_radius(
        cfg.d, cfg.p, field.intensity, cfg.resolved_radius());
    const double dt = cfg.step();
    const long steps = step_count(cfg.t, dt, "partition_estimator");
    const double sd = std::sqrt(dt);
    const long n = cfg.n_paths;
    expo.assign(static_cast<std::size_t>(n), 0.0);
    floored.assign(static_cast<std::size_t>(n), 0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long i = 0; i < n; ++i) {
        rng::Stream rs(cfg.seed, static_cast<std::uint64_t>(i));
        double x[3] = {0, 0, 0};
        double integral = 0.0;
        long flo = 0;
        for (long k = 0; k < steps; ++k) {
            double y[3], mid[3];
            for (int c = 0; c < cfg.d; ++c) {
                y[c] = x[c] + sd * rs.normal();
                mid[c] = 0.5 * (x[c] + y[c]);
            }
            const PotentialValue v = ev.evaluate(field, mid);
            integral += dt * v.value;
            flo += v.floored;
            for (int c = 0; c < cfg.d; ++c) x[c] = y[c];
        }
        expo[static_cast<std::size_t>(i)] = cfg.sign * cfg.theta * integral;
        floored[static_cast<std::size_t>(i)] = flo;
    }
}

} // namespace

PartitionResult partition_estimator(const FKConfig& cfg, const PoissonSample& field) {
    std::vector<double> expo;
    std::vector<long> floored;
    partition_exponents(cfg, field, expo, floored);
    const long n = cfg.n_paths;
    double m = -std::numeric_limits<double>::infinity();
    for (double e : expo) m = std::max(m, e);
    double sum = 0.0, sum2 = 0.0;
    for (double e : expo) {
        const double a = std::exp(e - m);
        sum += a;
        sum2 += a * a;
    }
    const double mean_a = sum / n;
    const double var_a = std::max(0.0, (sum2 - sum * sum / n) / (n - 1));
    const double se_a = std::sqrt(var_a / n);
    PartitionResult out;
    out.mean.value = std::exp(m) * mean_a;
    out.mean.std_error = std::exp(m) * se_a;
    out.mean.n = n;
    out.mean.seed = cfg.seed;
    out.log_mean = m + std::log(mean_a);
    out.log_se = se_a / mean_a;
    out.max_exponent = m;
    for (long f : floored) out.floored += f;
    return out;
}

std::vector<PathChunkRow> partition_chunks(const FKConfig& cfg, const PoissonSample& field,
                                           long chunk) {
    if (chunk < 2) throw domain_error("partition_chunks: chunk size must be >= 2");
    std::vector<double> expo;
    std::vector<long> floored;
    partition_exponents(cfg, field, expo, floored);
    std::vector<PathChunkRow> rows;
    for (long lo = 0; lo < cfg.n_paths; lo += chunk) {
        const long hi = std::min(cfg.n_paths, lo + chunk);
        PathChunkRow row;
        row.index = lo / chunk;
        double m = -std::numeric_limits<double>::infinity();
        for (long i = lo; i < hi; ++i) m = std::max(m, expo[static_cast<std::size_t>(i)]);
        double sum = 0.0, esum = 0.0, esum2 = 0.0;
        for (long i = lo; i < hi; ++i) {
            const double e = expo[static_cast<std::size_t>(i)];
            sum += std::exp(e - m);
            esum += e;
            esum2 += e * e;
            row.floored += floored[static_cast<std::size_t>(i)];
        }
        const long cn = hi - lo;
        row.log_mean = m + std::log(sum / cn);
        row.exponent_var = cn > 1 ? std::max(0.0, (esum2 - esum * esum / cn) / (cn - 1)) : 0.0;
        rows.push_back(row);
    }
    return rows;
}

std::string chunks_csv(const std::vector<PathChunkRow>& rows) {
    std::string out = "chunk,log_mean,exponent_var,floored\n";
    char buf[128];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%ld,%.17g,%.17g,%ld\n", r.index, r.log_mean,
                      r.exponent_var, r.floored);
        out += buf;
    }
    return out;
}

namespace {

// r^-p floored at rm and truncated at R, with a fast path for p = 3/4
inline double floored_kernel(double r, double rm, double R, double p) {
    if (r > R) return 0.0;
    const double rr = std::max(r, rm);
    if (p == 0.75) {
        const double s = 1.0 / std::sqrt(rr);
        return s * std::sqrt(s);
    }
    return std::pow(rr, -p);
}

// int_0^l max(u, rm)^-p du for l >= rm (one-dimensional arm of the mass)
inline double floored_arm(double l, double rm, double p) {
    return std::pow(rm, 1.0 - p) + (std::pow(l, 1.0 - p) - std::pow(rm, 1.0 - p)) / (1.0 - p);
}

} // namespace

AnnealedPair annealed_two_ways(const AnnealedConfig& cfg) {
    if (!(cfg.p > 0.5 && cfg.p < 1.0))
        throw regime_error("annealed_two_ways: one-dimensional check needs 1/2 < p < 1");
    if (!(cfg.theta >= 0.0) || !(cfg.kernel_radius > 0.0) || cfg.y_nodes < 16 ||
        cfg.n_paths < 2)
        throw domain_error("annealed_two_ways: bad configuration");
    const long steps = step_count(cfg.t, cfg.dt, "annealed_two_ways");
    const double sd = std::sqrt(cfg.dt);
    const double R = cfg.kernel_radius;
    const long n = cfg.n_paths;

    // pass 1: size the field window from the realized midpoint range of both
    // path sets (streams [0, n) direct, [n, 2n) reduced)
    double maxabs = 0.0;
    for (long i = 0; i < 2 * n; ++i) {
        rng::Stream rs(cfg.seed, static_cast<std::uint64_t>(i));
        double x = 0.0;
        for (long k = 0; k < steps; ++k) {
            const double y = x + sd * rs.normal();
            maxabs = std::max(maxabs, std::fabs(0.5 * (x + y)));
            x = y;
        }
    }
    const double Rw = R + maxabs + 0.5;
    const double hy = 2.0 * Rw / cfg.y_nodes;
    const double rm = hy; // floor at the quadrature resolution
    const double mass = 2.0 * floored_arm(R, rm, cfg.p);
    const double t_eff = steps * cfg.dt;

    auto path_mids = [&](rng::Stream& rs, std::vector<double>& mids) {
        mids.resize(static_cast<std::size_t>(steps));
        double x = 0.0;
        for (long k = 0; k < steps; ++k) {
            const double y = x + sd * rs.normal();
            mids[static_cast<std::size_t>(k)] = 0.5 * (x + y);
            x = y;
        }
    };

    AnnealedPair out;
    out.floor_radius = rm;

    out.direct = mc_estimate(n, cfg.seed, 0, [&](rng::Stream& rs, std::int64_t) {
        static thread_local std::vector<double> mids;
        path_mids(rs, mids);
        const long npts = rs.poisson(2.0 * Rw);
        double s = 0.0;
        for (long j = 0; j < npts; ++j) {
            const double y = rs.uniform(-Rw, Rw);
            double acc = 0.0;
            for (double m : mids) acc += floored_kernel(std::fabs(y - m), rm, R, cfg.p);
            s += cfg.dt * acc;
        }
        return std::exp(-cfg.theta * (s - t_eff * mass));
    });

    out.reduced = mc_estimate(n, cfg.seed, static_cast<std::uint64_t>(n),
                              [&](rng::Stream& rs, std::int64_t) {
        static thread_local std::vector<double> mids;
        path_mids(rs, mids);
        // trapezoid of exp(-f) - 1 over the window, f the path functional
        double integral = 0.0;
        for (int m = 0; m <= cfg.y_nodes; ++m) {
            const double y = -Rw + m * hy;
            double f = 0.0;
            for (double q : mids) f += floored_kernel(std::fabs(y - q), rm, R, cfg.p);
            const double g = std::expm1(-cfg.theta * cfg.dt * f);
            integral += (m == 0 || m == cfg.y_nodes) ? 0.5 * g : g;
        }
        integral *= hy;
        return std::exp(integral + cfg.theta * t_eff * mass);
    });

    out.z = std::fabs(out.direct.value - out.reduced.value) /
            std::sqrt(out.direct.std_error * out.direct.std_error +
                      out.reduced.std_error * out.reduced.std_error);
    return out;
}

namespace {

struct KilledStep {
    const GridFunction* xi;
    double mult, dt, sqdt;
    long steps;
    int d;
    bool crossing;

    // returns weight * exp(integral), weight 0 when the walk exits the box
    double run(rng::Stream& rs, const double* x0, double start_weight) const {
        double x[3] = {0, 0, 0};
        for (int c = 0; c < d; ++c) x[c] = x0[c];
        double w = start_weight;
        double integral = 0.0;
        for (long k = 0; k < steps; ++k) {
            double y[3], mid[3];
            for (int c = 0; c < d; ++c) {
                y[c] = x[c] + sqdt * rs.normal();
                mid[c] = 0.5 * (x[c] + y[c]);
            }
            for (int c = 0; c < d; ++c)
                if (y[c] <= xi->lo[c] || y[c] >= xi->hi[c]) return 0.0;
            if (crossing) {
                for (int c = 0; c < d; ++c) {
                    w *= 1.0 - std::exp(-2.0 * (x[c] - xi->lo[c]) * (y[c] - xi->lo[c]) / dt);
                    w *= 1.0 - std::exp(-2.0 * (xi->hi[c] - x[c]) * (xi->hi[c] - y[c]) / dt);
                }
            }
            integral += dt * mult * xi->value_at(mid);
            for (int c = 0; c < d; ++c) x[c] = y[c];
        }
        return w * std::exp(integral);
    }

    // free walk, xi zero outside the box, no killing
    double run_free(rng::Stream& rs) const {
        double x[3] = {0, 0, 0};
        double integral = 0.0;
        for (long k = 0; k < steps; ++k) {
            double mid[3];
            for (int c = 0; c < d; ++c) {
                const double y = x[c] + sqdt * rs.normal();
                mid[c] = 0.5 * (x[c] + y);
                x[c] = y;
            }
            integral += dt * mult * xi->value_at(mid);
        }
        return std::exp(integral);
    }
};

double lattice_lambda(const GridFunction& xi, double mult, double h) {
    LatticeOperatorSpec spec;
    spec.d = xi.d;
    spec.lo = xi.lo;
    spec.hi = xi.hi;
    spec.h = h;
    const std::size_t m = spec.size();
    spec.xi.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        double x[3];
        spec.node_coord(i, x);
        spec.xi[i] = mult * xi.value_at(x);
    }
    return principal_eigenvalue(spec).lambda;
}

double rel_var(const Estimate& e) {
    const double r = e.std_error / e.value;
    return r * r;
}

BoundCheck make_check(const std::string& name, double log_lhs, double log_rhs, double sigma,
                      bool upper) {
    BoundCheck c;
    c.name = name;
    c.log_lhs = log_lhs;
    c.log_rhs = log_rhs;
    c.sigma = sigma;
    c.slack = upper ? log_rhs - log_lhs : log_lhs - log_rhs;
    if (!std::isfinite(c.slack) || !std::isfinite(sigma))
        c.verdict = BoundVerdict::inconclusive;
    else if (c.slack >= 0.0)
        c.verdict = BoundVerdict::pass;
    else if (c.slack >= -4.0 * sigma)
        c.verdict = BoundVerdict::inconclusive;
    else
        c.verdict = BoundVerdict::violated;
    return c;
}

} // namespace

bool FkBoundReport::any_violation() const {
    for (const auto& c : checks)
        if (c.verdict == BoundVerdict::violated) return true;
    return false;
}

FkBoundReport fk_bound_suite(const GridFunction& xi, double t, double delta, double alpha,
                             double beta, long n_paths, double dt, std::uint64_t seed,
                             double eigen_h) {
    if (!(alpha > 1.0) || !(beta > 1.0) ||
        std::fabs(1.0 / alpha + 1.0 / beta - 1.0) > 1e-12)
        throw domain_error("fk_bound_suite: need 1/alpha + 1/beta = 1 with alpha, beta > 1");
    if (!(delta > 0.0 && delta < t)) throw domain_error("fk_bound_suite: need 0 < delta < t");
    for (int c = 0; c < xi.d; ++c)
        if (!(xi.lo[c] < 0.0 && xi.hi[c] > 0.0))
            throw geometry_error("fk_bound_suite: the origin must lie inside the box");

    const int d = xi.d;
    double volume = 1.0;
    for (int c = 0; c < d; ++c) volume *= xi.hi[c] - xi.lo[c];

    FkBoundReport rep;
    rep.t = t;
    rep.delta = delta;
    rep.alpha = alpha;
    rep.beta = beta;
    rep.dt = dt;
    rep.n_paths = n_paths;
    rep.lambda_xi = lattice_lambda(xi, 1.0, eigen_h);
    rep.lambda_scaled_up = lattice_lambda(xi, beta / alpha, eigen_h);
    rep.lambda_scaled_down = lattice_lambda(xi, 1.0 / alpha, eigen_h);

    const auto base = [&](int slot) {
        return static_cast<std::uint64_t>(slot) * static_cast<std::uint64_t>(n_paths);
    };
    auto killed_uniform = [&](double mult, double horizon, int slot) {
        KilledStep ks{&xi, mult, dt, std::sqrt(dt), step_count(horizon, dt, "fk_bound_suite"),
                      d, true};
        return mc_estimate(n_paths, seed, base(slot), [&](rng::Stream& rs, std::int64_t) {
            double x0[3] = {0, 0, 0};
            for (int c = 0; c < d; ++c) x0[c] = rs.uniform(xi.lo[c], xi.hi[c]);
            return ks.run(rs, x0, volume);
        });
    };
    auto killed_gaussian = [&](double mult, double horizon, double var, int slot) {
        KilledStep ks{&xi, mult, dt, std::sqrt(dt), step_count(horizon, dt, "fk_bound_suite"),
                      d, true};
        const double s = std::sqrt(var);
        return mc_estimate(n_paths, seed, base(slot), [&](rng::Stream& rs, std::int64_t) {
            double x0[3] = {0, 0, 0};
            for (int c = 0; c < d; ++c) x0[c] = s * rs.normal();
            for (int c = 0; c < d; ++c)
                if (x0[c] <= xi.lo[c] || x0[c] >= xi.hi[c]) return 0.0;
            return ks.run(rs, x0, 1.0);
        });
    };
    auto killed_origin = [&](double mult, double horizon, int slot) {
        KilledStep ks{&xi, mult, dt, std::sqrt(dt), step_count(horizon, dt, "fk_bound_suite"),
                      d, true};
        return mc_estimate(n_paths, seed, base(slot), [&](rng::Stream& rs, std::int64_t) {
            double x0[3] = {0, 0, 0};
            return ks.run(rs, x0, 1.0);
        });
    };
    auto free_from_origin = [&](double mult, double horizon, int slot) {
        KilledStep ks{&xi, mult, dt, std::sqrt(dt), step_count(horizon, dt, "fk_bound_suite"),
                      d, false};
        return mc_estimate(n_paths, seed, base(slot),
                           [&](rng::Stream& rs, std::int64_t) { return ks.run_free(rs); });
    };

    // average-moment upper: int_D E_x[e^{int xi}; tau >= t] dx <= |D| e^{t lambda}
    const Estimate avg_t = killed_uniform(1.0, t, 0);
    rep.checks.push_back(make_check("average-moment-upper", std::log(avg_t.value),
                                    std::log(volume) + t * rep.lambda_xi,
                                    std::sqrt(rel_var(avg_t)), true));

    // average-moment lower: same LHS >= the two-eigenvalue product bound
    {
        const double log_rhs = (alpha * d / 2.0) * std::log(2.0 * kPi) +
                               (d / 2.0) * std::log(delta) +
                               (alpha * d / (2.0 * beta)) * std::log(t) -
                               (2.0 * alpha / beta) * std::log(volume) -
                               delta * (alpha / beta) * rep.lambda_scaled_up +
                               alpha * (t + delta) * rep.lambda_scaled_down;
        rep.checks.push_back(make_check("average-moment-lower", std::log(avg_t.value), log_rhs,
                                        std::sqrt(rel_var(avg_t)), false));
    }

    // origin-split upper:
    //   E_0[e^{int_0^t xi}; tau >= t]
    //     <= (E_0 e^{beta int_0^delta xi})^{1/beta}
    //        * ((2 pi delta)^{-d/2} int_D E_x[e^{alpha int_0^{t-delta} xi};
    //           tau >= t-delta] dx)^{1/alpha}
    {
        const Estimate lhs = killed_origin(1.0, t, 1);
        const Estimate head = free_from_origin(beta, delta, 2);
        const Estimate tail = killed_uniform(alpha, t - delta, 3);
        const double log_rhs =
            std::log(head.value) / beta +
            (std::log(tail.value) - (d / 2.0) * std::log(2.0 * kPi * delta)) / alpha;
        const double sigma = std::sqrt(rel_var(lhs) + rel_var(head) / (beta * beta) +
                                       rel_var(tail) / (alpha * alpha));
        rep.checks.push_back(
            make_check("origin-split-upper", std::log(lhs.value), log_rhs, sigma, true));
    }

    // free-moment lower:
    //   E_0 e^{int_0^t xi}
    //     >= (E_0 e^{-(beta/alpha) int_0^delta xi})^{-alpha/beta}
    //        * (int_D p_delta(x) E_x[e^{int_0^{t-delta} xi / alpha};
    //           tau >= t-delta] dx)^alpha
    {
        const Estimate lhs = free_from_origin(1.0, t, 4);
        const Estimate head = free_from_origin(-beta / alpha, delta, 5);
        const Estimate tail = killed_gaussian(1.0 / alpha, t - delta, delta, 6);
        const double log_rhs =
            -(alpha / beta) * std::log(head.value) + alpha * std::log(tail.value);
        const double sigma =
            std::sqrt(rel_var(lhs) + (alpha / beta) * (alpha / beta) * rel_var(head) +
                      alpha * alpha * rel_var(tail));
        rep.checks.push_back(
            make_check("free-moment-lower", std::log(lhs.value), log_rhs, sigma, false));
    }
    return rep;
}

Estimate restricted_moment(const GridFunction& xi, const std::array<double, 3>& x0,
                           const RestrictedConfig& cfg) {
    for (int c = 0; c < xi.d; ++c)
        if (!(x0[c] > xi.lo[c] && x0[c] < xi.hi[c]))
            throw geometry_error("restricted_moment: start point must lie inside the box");
    KilledStep ks{&xi, 1.0, cfg.dt, std::sqrt(cfg.dt),
                  step_count(cfg.t, cfg.dt, "restricted_moment"), xi.d,
                  cfg.crossing_correction};
    return mc_estimate(cfg.n_paths, cfg.seed, 0, [&](rng::Stream& rs, std::int64_t) {
        return ks.run(rs, x0.data(), 1.0);
    });
}

} // namespace rpp
