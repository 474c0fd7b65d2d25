#include "rpp/ldp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "json.hpp"

#include "rpp/errors.hpp"
#include "rpp/parallel.hpp"
#include "rpp/potential.hpp"
#include "rpp/specfun.hpp"
#include "rpp/varcalc.hpp"

namespace rpp {

namespace {

void require_regime(int d, double p, const char* who) {
    if (d < 1 || d > 3) throw domain_error(std::string(who) + ": d must be 1..3");
    if (!(p > 0.5 * d && p < d))
        throw regime_error(std::string(who) + ": requires d/2 < p < d");
}

void require_eps(double eps, const char* who) {
    if (!(eps > 0.0 && eps < 1.0))
        throw domain_error(std::string(who) + ": eps must lie in (0, 1)");
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

ScalingSchedule ScalingSchedule::standard() {
    return {{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}};
}

void ScalingSchedule::validate() const {
    if (eps.empty()) throw domain_error("ScalingSchedule: empty");
    double prev = 1.0;
    for (double e : eps) {
        require_eps(e, "ScalingSchedule");
        if (!(e < prev)) throw domain_error("ScalingSchedule: eps must strictly decrease");
        prev = e;
    }
}

double deviation_scale(double eps, int d, double p) {
    // the count surrogate lives at the regime edge p = d/2, so only the
    // growth of the scale itself is required here
    if (d < 1 || d > 3) throw domain_error("deviation_scale: d must be 1..3");
    if (!(p > 0.0 && p < 2.0))
        throw regime_error("deviation_scale: requires 0 < p < 2");
    require_eps(eps, "deviation_scale");
    return std::pow(eps, -(2.0 - p) / d);
}

double l_rate(double eps, int d, double p) {
    return deviation_scale(eps, d, p) * std::log(1.0 / eps);
}

double mgf_exponent_scale(double eps, int d, double p) {
    require_regime(d, p, "mgf_exponent_scale");
    require_eps(eps, "mgf_exponent_scale");
    return std::pow(eps, -p * (2.0 + d - p) / (d * (d - p)));
}

double TailReport::final_abs_gap() const {
    if (rows.empty()) throw domain_error("TailReport: empty");
    return std::fabs(rows.back().gap);
}

bool TailReport::gaps_decreasing() const {
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (!(std::fabs(rows[i].gap) < std::fabs(rows[i - 1].gap))) return false;
    return true;
}

std::string tail_csv(const TailReport& report) {
    std::string out = "eps,scale,value,target,gap\n";
    for (const TailRow& r : report.rows) {
        out += fmt(r.eps) + "," + fmt(r.scale) + "," + fmt(r.value) + "," +
               fmt(r.target) + "," + fmt(r.gap) + "\n";
    }
    return out;
}

std::string tail_json(const TailReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const TailRow& r : report.rows) {
        rows.push_back({{"eps", r.eps},
                        {"scale", r.scale},
                        {"value", r.value},
                        {"target", r.target},
                        {"gap", r.gap}});
    }
    nlohmann::json j = {{"name", report.name}, {"rows", rows}};
    return j.dump(2);
}

TailReport mgf_limit_check(double theta, double a, int d, double p,
                           const ScalingSchedule& schedule, int sign,
                           const QuadratureSpec& quad) {
    require_regime(d, p, "mgf_limit_check");
    schedule.validate();
    if (!(theta >= 0.0)) throw domain_error("mgf_limit_check: theta must be >= 0");
    if (sign != 1 && sign != -1) throw domain_error("mgf_limit_check: sign must be +-1");

    RadialOptions opts;
    opts.singular_power = 0.0; // far kernels vanish on the plateau
    opts.tail_power = p;

    // eps-free limit kernel: the far family at scale exactly a
    const auto limit_profile = [a, p](double r) {
        return r <= a ? 0.0 : std::pow(r, -p) * (1.0 - CutoffProfile::value(r / a));
    };
    const double target = campbell_log_mgf_radial(
        limit_profile, d, a, std::numeric_limits<double>::infinity(), 1.0, sign, theta,
        quad, opts);

    TailReport report;
    report.name = sign > 0 ? "mgf-limit-upper" : "mgf-limit-lower";
    for (double eps : schedule.eps) {
        KernelSpec spec{d, p, KernelKind::Far, a, eps, 0};
        spec.validate();
        const double scale = spec.cutoff_scale();
        const double theta_eps = theta * mgf_exponent_scale(eps, d, p);
        const double log_mgf = campbell_log_mgf_radial(
            [&](double r) { return kernel_value(spec, r); }, d, scale,
            std::numeric_limits<double>::infinity(), eps, sign, theta_eps, quad, opts);
        TailRow row;
        row.eps = eps;
        row.scale = scale;
        row.value = std::pow(eps, 2.0 / (d - p)) * log_mgf;
        row.target = target;
        row.gap = row.value - row.target;
        report.rows.push_back(row);
    }
    return report;
}

TailReport count_rate_check(double gamma, int d, double p,
                            const ScalingSchedule& schedule, double delta) {
    if (d < 1 || d > 3) throw domain_error("count_rate_check: d must be 1..3");
    if (!(p >= 0.5 * d && p < std::min(2.0, static_cast<double>(d))))
        throw regime_error("count_rate_check: requires d/2 <= p < min(2, d)");
    schedule.validate();
    if (!(gamma > 0.0)) throw domain_error("count_rate_check: gamma must be > 0");
    if (!(delta > 0.0)) throw domain_error("count_rate_check: delta must be > 0");

    const double target = -(2.0 + d - p) * gamma / d;
    TailReport report;
    report.name = "count-rate";
    for (double eps : schedule.eps) {
        const double v = gamma * deviation_scale(eps, d, p);
        // back off one ulp-scale nudge so v = integer lands on that integer
        const long k = static_cast<long>(std::ceil(v - 1e-9 * v));
        const double mu = unit_ball_volume(d) * std::pow(delta, d) * eps;
        const TailProb tail = poisson_tail_exact(mu, k);
        TailRow row;
        row.eps = eps;
        row.scale = l_rate(eps, d, p);
        row.value = tail.log_p / row.scale;
        row.target = target;
        row.gap = row.value - row.target;
        report.rows.push_back(row);
    }
    return report;
}

std::vector<GridFunction> bump_dictionary(int count, int cells, double halfwidth) {
    if (count < 1) throw domain_error("bump_dictionary: count must be >= 1");
    if (cells < 8) throw domain_error("bump_dictionary: cells must be >= 8");
    if (!(halfwidth > 0.0)) throw domain_error("bump_dictionary: halfwidth must be > 0");

    const std::array<double, 3> lo{{-halfwidth, 0, 0}};
    const std::array<double, 3> hi{{halfwidth, 0, 0}};
    const std::array<int, 3> n{{cells, 1, 1}};
    static const double centers[4] = {-0.6, -0.2, 0.2, 0.6};
    static const double widths[4] = {0.15, 0.3, 0.5, 0.8};

    std::vector<GridFunction> dict;
    dict.reserve(count);
    const int n_sine = count / 2;
    for (int j = 0; j < count; ++j) {
        GridFunction g;
        if (j < n_sine) {
            const int k = j + 1;
            g = GridFunction::sample(1, lo, hi, n, [&](const double* x) {
                return std::sin(k * std::numbers::pi * (x[0] + halfwidth) /
                                (2.0 * halfwidth));
            });
        } else {
            const int m = j - n_sine;
            const double c = centers[m % 4] * halfwidth;
            const double w = widths[(m / 4) % 4] * halfwidth;
            g = GridFunction::sample(1, lo, hi, n, [&](const double* x) {
                const double u = (x[0] - c) / w;
                return std::exp(-0.5 * u * u);
            });
        }
        g.normalize_energy();
        dict.push_back(std::move(g));
    }
    return dict;
}

ZetaExperimentResult zeta_tail_experiment(const ZetaExperimentConfig& config) {
    if (config.d != 1) throw domain_error("zeta_tail_experiment: d = 1 only");
    require_regime(1, config.p, "zeta_tail_experiment");
    if (!(config.halfwidth > 0.0)) throw domain_error("zeta_tail_experiment: bad halfwidth");
    if (!(config.trunc_radius > 3.0 * config.halfwidth))
        throw geometry_error("zeta_tail_experiment: trunc_radius too small for the support");
    if (config.x_nodes < 64) throw domain_error("zeta_tail_experiment: x_nodes must be >= 64");
    if (config.n_fields < 100) throw domain_error("zeta_tail_experiment: n_fields must be >= 100");
    if (!(config.gamma > 0.0)) throw domain_error("zeta_tail_experiment: gamma must be > 0");
    {
        double prev = 1.0;
        if (config.eps.empty()) throw domain_error("zeta_tail_experiment: empty eps list");
        for (double e : config.eps) {
            require_eps(e, "zeta_tail_experiment");
            if (!(e < prev))
                throw domain_error("zeta_tail_experiment: eps must strictly decrease");
            prev = e;
        }
    }

    const double p = config.p;
    const double hw = config.halfwidth;
    const double L = config.trunc_radius;
    const double wlo = -(hw + L), whi = hw + L;
    const int m = config.x_nodes;
    const double hx = (whi - wlo) / m;
    const std::vector<GridFunction> dict =
        config.dictionary.empty() ? bump_dictionary(config.dictionary_size,
                                                    config.g_cells, hw)
                                  : config.dictionary;
    const int n_g = static_cast<int>(dict.size());
    for (const GridFunction& g : dict) {
        if (g.d != 1 || g.lo[0] != -hw || g.hi[0] != hw)
            throw geometry_error("zeta_tail_experiment: dictionary entry off the domain");
        if (std::fabs(g.energy() - 1.0) > 1e-9)
            throw domain_error("zeta_tail_experiment: dictionary entry not unit energy");
    }

    // Interpolation tables: phi_g at the nodes, plus the interpolant's own
    // integral (trapezoid = exact for piecewise-linear) as the compensator.
    KernelSpec full{1, p, KernelKind::Full, 1.0, 1.0, 0};
    std::vector<std::vector<double>> phi(n_g, std::vector<double>(m + 1));
    std::vector<double> compensator(n_g);
    for (int gi = 0; gi < n_g; ++gi) {
        auto& row = phi[gi];
        par::block_apply(static_cast<std::int64_t>(m) + 1, row, [&](std::int64_t node) {
            const double x = wlo + node * hx;
            return inner_riesz(dict[gi], &x, full, L);
        });
        double s = 0.5 * (row[0] + row[m]);
        for (int node = 1; node < m; ++node) s += row[node];
        compensator[gi] = s * hx;
    }

    auto interp = [&](int gi, double x) {
        double t = (x - wlo) / hx;
        if (t < 0.0) t = 0.0;
        if (t > m) t = m;
        int j = static_cast<int>(t);
        if (j >= m) j = m - 1;
        const double frac = t - j;
        return phi[gi][j] * (1.0 - frac) + phi[gi][j + 1] * frac;
    };

    const Window window = Window::box(1, {{wlo, 0, 0}}, {{whi, 0, 0}});
    const double max_comp = *std::max_element(compensator.begin(), compensator.end());

    ZetaExperimentResult result;
    result.config = config;
    const double pi = std::numbers::pi;
    result.rate_target =
        -deviation_rate(config.gamma, 1, p,
                        sup_l2_unit_energy(pi * pi / (8.0 * hw * hw)));
    result.report.name = "zeta-tail";

    long events_total = 0;
    for (std::size_t ei = 0; ei < config.eps.size(); ++ei) {
        const double eps = config.eps[ei];
        const double level = config.gamma * deviation_scale(eps, 1, p);

        ZetaEpsResult per;
        per.eps = eps;
        per.level = level;
        per.reach = eps * max_comp;

        std::vector<long> events(n_g, 0);
        long events_any = 0;
        const std::uint64_t stream_base =
            static_cast<std::uint64_t>(ei) * static_cast<std::uint64_t>(config.n_fields);
#pragma omp parallel
        {
            std::vector<long> local(n_g, 0);
            long local_any = 0;
#pragma omp for schedule(static)
            for (long f = 0; f < config.n_fields; ++f) {
                const PoissonSample sample =
                    scaled_sample(window, eps, config.seed, stream_base + f);
                bool any = false;
                for (int gi = 0; gi < n_g; ++gi) {
                    double s = 0.0;
                    for (long i = 0; i < sample.count(); ++i)
                        s += interp(gi, sample.point(i)[0]);
                    const double zeta = s - eps * compensator[gi];
                    if (zeta <= -level) {
                        ++local[gi];
                        any = true;
                    }
                }
                if (any) ++local_any;
            }
#pragma omp critical
            {
                for (int gi = 0; gi < n_g; ++gi) events[gi] += local[gi];
                events_any += local_any;
            }
        }

        // Optimized exponential-Chebyshev bound per dictionary entry; the
        // trapezoid rule overshoots int psi segment by segment (psi convex),
        // so the reported bound dominates the exact one.
        for (int gi = 0; gi < n_g; ++gi) {
            double best = 0.0; // log-bound at theta = 0
            for (int ti = 0; ti <= 60; ++ti) {
                const double theta = std::pow(10.0, -2.0 + 5.0 * ti / 60.0);
                const auto& row = phi[gi];
                double trap = 0.5 * (psi(theta * row[0]) + psi(theta * row[m]));
                for (int node = 1; node < m; ++node) trap += psi(theta * row[node]);
                const double log_bound = -theta * level + eps * trap * hx;
                if (log_bound < best) best = log_bound;
            }
            ZetaGCheck check;
            check.g_index = gi;
            check.events = events[gi];
            check.freq = static_cast<double>(events[gi]) / config.n_fields;
            check.se = std::sqrt(check.freq * (1.0 - check.freq) / config.n_fields);
            check.bound = std::exp(best);
            check.violated = check.freq - 4.0 * check.se > check.bound;
            if (check.violated) result.any_violation = true;
            per.per_g.push_back(check);
        }
        per.events_any = events_any;
        events_total += events_any;

        TailRow row;
        row.eps = eps;
        row.scale = deviation_scale(eps, 1, p);
        row.value = events_any > 0
                        ? std::pow(eps, 2.0 / (1.0 - p)) *
                              std::log(static_cast<double>(events_any) / config.n_fields)
                        : -std::numeric_limits<double>::infinity();
        row.target = result.rate_target;
        row.gap = row.value - row.target;
        result.report.rows.push_back(row);
        result.by_eps.push_back(std::move(per));
    }
    result.inconclusive = events_total == 0;
    return result;
}

long max_count_median(double n_cells, double mu) {
    if (!(n_cells >= 1.0)) throw domain_error("max_count_median: n_cells must be >= 1");
    if (!(mu > 0.0)) throw domain_error("max_count_median: mu must be > 0");
    // P{max <= k} = (1 - q_{k+1})^n with q the exact upper tail; increase k
    // until the cdf clears 1/2.
    for (long k = 0; k < 100000; ++k) {
        const TailProb q = poisson_tail_exact(mu, k + 1);
        const double log_cdf = n_cells * std::log1p(-q.p);
        if (log_cdf >= std::log(0.5)) return k;
    }
    throw convergence_error("max_count_median: no median below 1e5", 0.0, 0.0);
}

MaxCountTable max_count_law_table(const std::vector<double>& ts, double delta, int d) {
    if (d < 1 || d > 3) throw domain_error("max_count_law_table: d must be 1..3");
    if (!(delta > 0.0)) throw domain_error("max_count_law_table: delta must be > 0");
    MaxCountTable table;
    table.d = d;
    table.delta = delta;
    const double t_min = std::exp(std::exp(1.0));
    for (double t : ts) {
        if (!(t >= t_min - 1e-9)) throw domain_error("max_count_law_table: needs t >= e^e");
        MaxCountRow row;
        row.t = t;
        row.n_cells = std::pow(t, d);
        row.mu = unit_ball_volume(d) * std::pow(delta, d);
        row.median = max_count_median(row.n_cells, row.mu);
        row.normalized = row.median * std::log(std::log(t)) / std::log(t);
        table.rows.push_back(row);
    }
    return table;
}

std::string max_count_csv(const MaxCountTable& table) {
    std::string out = "t,n_cells,mu,median,normalized\n";
    for (const MaxCountRow& r : table.rows) {
        out += fmt(r.t) + "," + fmt(r.n_cells) + "," + fmt(r.mu) + "," +
               std::to_string(r.median) + "," + fmt(r.normalized) + "\n";
    }
    return out;
}

Estimate max_count_mc(long n_cells, double mu, long threshold, long reps,
                      std::uint64_t seed) {
    if (n_cells < 1) throw domain_error("max_count_mc: n_cells must be >= 1");
    if (!(mu > 0.0)) throw domain_error("max_count_mc: mu must be > 0");
    return mc_estimate(reps, seed, 0, [&](rng::Stream& stream, std::int64_t) {
        for (long c = 0; c < n_cells; ++c)
            if (stream.poisson(mu) >= threshold) return 1.0;
        return 0.0;
    });
}

} // namespace rpp
