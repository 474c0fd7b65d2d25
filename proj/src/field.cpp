#include "rpp/field.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rpp/errors.hpp"
#include "rpp/parallel.hpp"
#include "rpp/specfun.hpp"

namespace rpp {

Window Window::box(int d, const std::array<double, 3>& lo, const std::array<double, 3>& hi) {
    if (d < 1 || d > 3) throw geometry_error("Window: dimension must be 1..3");
    for (int k = 0; k < d; ++k)
        if (!(hi[k] > lo[k])) throw geometry_error("Window: empty box");
    Window w;
    w.shape = Shape::Box;
    w.d = d;
    w.lo = lo;
    w.hi = hi;
    return w;
}

Window Window::cube(int d, double half_side) {
    if (!(half_side > 0.0)) throw geometry_error("Window: half_side must be positive");
    std::array<double, 3> lo{{-half_side, -half_side, -half_side}};
    std::array<double, 3> hi{{half_side, half_side, half_side}};
    return box(d, lo, hi);
}

Window Window::ball(int d, const std::array<double, 3>& center, double radius) {
    if (d < 1 || d > 3) throw geometry_error("Window: dimension must be 1..3");
    if (!(radius > 0.0)) throw geometry_error("Window: radius must be positive");
    Window w;
    w.shape = Shape::Ball;
    w.d = d;
    w.center = center;
    w.radius = radius;
    return w;
}

double Window::volume() const {
    if (shape == Shape::Box) {
        double v = 1.0;
        for (int k = 0; k < d; ++k) v *= hi[k] - lo[k];
        return v;
    }
    return unit_ball_volume(d) * std::pow(radius, d);
}

bool Window::contains(const double* x) const {
    if (shape == Shape::Box) {
        for (int k = 0; k < d; ++k)
            if (x[k] < lo[k] || x[k] > hi[k]) return false;
        return true;
    }
    double r2 = 0.0;
    for (int k = 0; k < d; ++k) {
        const double t = x[k] - center[k];
        r2 += t * t;
    }
    return r2 <= radius * radius;
}

PoissonSample sample_field(const Window& window, double intensity, std::uint64_t seed,
                           std::uint64_t stream) {
    if (!(intensity >= 0.0)) throw domain_error("sample_field: intensity must be >= 0");
    rng::Stream rng(seed, stream);
    PoissonSample s;
    s.d = window.d;
    s.intensity = intensity;
    s.window = window;
    s.seed = seed;
    s.stream = stream;
    const long n = rng.poisson(intensity * window.volume());
    s.points.resize(static_cast<std::size_t>(n) * window.d);
    for (long i = 0; i < n; ++i) {
        double* x = s.points.data() + static_cast<std::size_t>(i) * window.d;
        if (window.shape == Window::Shape::Box) {
            for (int k = 0; k < window.d; ++k) x[k] = rng.uniform(window.lo[k], window.hi[k]);
        } else {
            // Gaussian direction, radius by inverse volume transform
            double dir[3] = {0, 0, 0};
            double norm2 = 0.0;
            do {
                norm2 = 0.0;
                for (int k = 0; k < window.d; ++k) {
                    dir[k] = rng.normal();
                    norm2 += dir[k] * dir[k];
                }
            } while (norm2 == 0.0);
            const double r = window.radius * std::pow(rng.uniform_pos(), 1.0 / window.d);
            const double inv = r / std::sqrt(norm2);
            for (int k = 0; k < window.d; ++k) x[k] = window.center[k] + dir[k] * inv;
        }
    }
    return s;
}

PoissonSample scaled_sample(const Window& window, double eps, std::uint64_t seed,
                            std::uint64_t stream) {
    if (!(eps > 0.0 && eps <= 1.0)) throw domain_error("scaled_sample: requires 0 < eps <= 1");
    return sample_field(window, eps, seed, stream);
}

namespace {

void append_number(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

} // namespace

std::string to_csv(const PoissonSample& sample) {
    std::string out = "# poisson_sample d=" + std::to_string(sample.d);
    out += " intensity=";
    append_number(out, sample.intensity);
    out += " seed=" + std::to_string(sample.seed);
    out += " stream=" + std::to_string(sample.stream);
    if (sample.window.shape == Window::Shape::Box) {
        out += " window=box lo=";
        for (int k = 0; k < sample.d; ++k) {
            if (k) out += ',';
            append_number(out, sample.window.lo[k]);
        }
        out += " hi=";
        for (int k = 0; k < sample.d; ++k) {
            if (k) out += ',';
            append_number(out, sample.window.hi[k]);
        }
    } else {
        out += " window=ball center=";
        for (int k = 0; k < sample.d; ++k) {
            if (k) out += ',';
            append_number(out, sample.window.center[k]);
        }
        out += " radius=";
        append_number(out, sample.window.radius);
    }
    out += '\n';
    for (long i = 0; i < sample.count(); ++i) {
        const double* x = sample.point(i);
        for (int k = 0; k < sample.d; ++k) {
            if (k) out += ',';
            append_number(out, x[k]);
        }
        out += '\n';
    }
    return out;
}

namespace {

std::array<double, 3> parse_triple(const std::string& text, int d) {
    std::array<double, 3> out{{0, 0, 0}};
    std::stringstream ss(text);
    std::string item;
    for (int k = 0; k < d; ++k) {
        if (!std::getline(ss, item, ',')) throw domain_error("from_csv: bad coordinate list");
        out[k] = std::stod(item);
    }
    return out;
}

std::string header_field(const std::string& header, const std::string& key) {
    const std::string tag = key + "=";
    const auto pos = header.find(tag);
    if (pos == std::string::npos) throw domain_error("from_csv: missing header field " + key);
    const auto start = pos + tag.size();
    auto end = header.find(' ', start);
    if (end == std::string::npos) end = header.size();
    return header.substr(start, end - start);
}

} // namespace

PoissonSample from_csv(const std::string& text) {
    std::stringstream ss(text);
    std::string header;
    if (!std::getline(ss, header) || header.rfind("# poisson_sample", 0) != 0)
        throw domain_error("from_csv: missing sample header");
    PoissonSample s;
    s.d = std::stoi(header_field(header, "d"));
    s.intensity = std::stod(header_field(header, "intensity"));
    s.seed = std::stoull(header_field(header, "seed"));
    s.stream = std::stoull(header_field(header, "stream"));
    const std::string shape = header_field(header, "window");
    if (shape == "box") {
        s.window = Window::box(s.d, parse_triple(header_field(header, "lo"), s.d),
                               parse_triple(header_field(header, "hi"), s.d));
    } else if (shape == "ball") {
        s.window = Window::ball(s.d, parse_triple(header_field(header, "center"), s.d),
                                std::stod(header_field(header, "radius")));
    } else {
        throw domain_error("from_csv: unknown window shape");
    }
    std::string line;
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string item;
        for (int k = 0; k < s.d; ++k) {
            if (!std::getline(row, item, ',')) throw domain_error("from_csv: short row");
            s.points.push_back(std::stod(item));
        }
    }
    return s;
}

void write_csv_file(const PoissonSample& sample, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_csv_file: cannot open " + path);
    out << to_csv(sample);
}

PoissonSample read_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_csv_file: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_csv(ss.str());
}

Estimate mc_estimate(std::int64_t n, std::uint64_t seed, std::uint64_t stream_base,
                     const std::function<double(rng::Stream&, std::int64_t)>& per_rep) {
    if (n < 2) throw domain_error("mc_estimate: need at least 2 replicates");
    const auto [sum, sum2] = par::block_sum2(n, [&](std::int64_t i) {
        rng::Stream stream(seed, stream_base + static_cast<std::uint64_t>(i));
        return per_rep(stream, i);
    });
    Estimate e;
    e.n = static_cast<long>(n);
    e.seed = seed;
    e.value = sum / static_cast<double>(n);
    const double var = std::max(0.0, (sum2 - sum * sum / static_cast<double>(n)) /
                                         static_cast<double>(n - 1));
    e.std_error = std::sqrt(var / static_cast<double>(n));
    return e;
}

double point_sum(const PoissonSample& sample,
                 const std::function<double(const double*)>& f) {
    double s = 0.0;
    for (long i = 0; i < sample.count(); ++i) s += f(sample.point(i));
    return s;
}

double compensated_integral(const PoissonSample& sample,
                            const std::function<double(const double*)>& f,
                            double f_window_integral) {
    return point_sum(sample, f) - sample.intensity * f_window_integral;
}

double campbell_log_mgf_radial(const std::function<double(double)>& profile, int d,
                               double r_lo, double r_hi, double intensity, int sign,
                               double theta, const QuadratureSpec& quad,
                               const RadialOptions& opts) {
    if (sign != 1 && sign != -1) throw domain_error("campbell_log_mgf_radial: sign must be +-1");
    if (!(theta >= 0.0)) throw domain_error("campbell_log_mgf_radial: theta must be >= 0");
    auto g = [&](double r) {
        const double v = theta * profile(r);
        return sign > 0 ? Psi(v) : psi(v);
    };
    RadialOptions shifted = opts;
    // psi, Psi are quadratic near zero, so a profile tail r^-q becomes r^-2q
    if (std::isfinite(opts.tail_power)) shifted.tail_power = 2.0 * opts.tail_power;
    return intensity * radial_integral(g, d, r_lo, r_hi, quad, shifted);
}

double campbell_log_mgf_indicator(double region_volume, double intensity, int sign,
                                  double theta, double level) {
    if (sign != 1 && sign != -1) throw domain_error("campbell_log_mgf_indicator: sign must be +-1");
    if (!(region_volume >= 0.0)) throw domain_error("campbell_log_mgf_indicator: bad volume");
    const double v = theta * level;
    return intensity * region_volume * (sign > 0 ? Psi(v) : psi(v));
}

TailProb poisson_tail_exact(double mu, long k) {
    if (!(mu >= 0.0)) throw domain_error("poisson_tail_exact: mu must be >= 0");
    TailProb out;
    if (k <= 0) {
        out.p = 1.0;
        out.log_p = 0.0;
        return out;
    }
    if (mu == 0.0) {
        out.p = 0.0;
        out.log_p = -std::numeric_limits<double>::infinity();
        return out;
    }
    const double log_mu = std::log(mu);
    const double lp_k = -mu + k * log_mu - std::lgamma(static_cast<double>(k) + 1.0);
    if (k <= mu || lp_k > -36.0) {
        // head sum: P = 1 - sum_{j<k} pmf(j), accumulated upward
        double pmf = std::exp(-mu);
        double head = pmf;
        for (long j = 1; j < k; ++j) {
            pmf *= mu / static_cast<double>(j);
            head += pmf;
        }
        out.p = std::max(0.0, 1.0 - head);
        out.log_p = out.p > 0.0 ? std::log(out.p) : -std::numeric_limits<double>::infinity();
        return out;
    }
    // deep tail: sum pmf from k upward in units of pmf(k)
    double term = 1.0;
    double rest = 0.0;
    for (long j = k + 1;; ++j) {
        term *= mu / static_cast<double>(j);
        rest += term;
        if (term < 1e-18 * (1.0 + rest)) break;
    }
    out.log_p = lp_k + std::log1p(rest);
    out.p = std::exp(out.log_p);
    return out;
}

TailProb max_count_tail(double n_cells, double mu, long k) {
    if (!(n_cells >= 1.0)) throw domain_error("max_count_tail: need at least one cell");
    const TailProb q = poisson_tail_exact(mu, k);
    TailProb out;
    if (q.p >= 1.0) {
        out.p = 1.0;
        out.log_p = 0.0;
        return out;
    }
    // log(1 - q^n_complement): care for both tiny q and huge n
    const double log_one_minus = n_cells * std::log1p(-q.p);
    out.p = -std::expm1(log_one_minus);
    if (out.p > 0.0 && out.p < 1.0) {
        out.log_p = std::log(out.p);
    } else if (out.p <= 0.0) {
        // q so small that n*q underflows the expm1 path
        out.p = std::exp(std::log(n_cells) + q.log_p);
        out.log_p = std::log(n_cells) + q.log_p;
    } else {
        out.log_p = 0.0;
    }
    return out;
}

} // namespace rpp
