#include "rpp/potential.hpp"

#include <cmath>

#include "rpp/errors.hpp"
#include "rpp/parallel.hpp"
#include "rpp/specfun.hpp"

namespace rpp {

double riesz_ball_mass(int d, double p, double R) {
    if (d < 1) throw domain_error("riesz_ball_mass: dimension must be >= 1");
    if (!(p > 0.0 && p < d)) throw domain_error("riesz_ball_mass: requires 0 < p < d");
    if (!(R >= 0.0)) throw domain_error("riesz_ball_mass: negative radius");
    return d * unit_ball_volume(d) * std::pow(R, d - p) / (d - p);
}

namespace {

double sq_dist(const double* a, const double* b, int d) {
    double s = 0.0;
    for (int k = 0; k < d; ++k) {
        const double t = a[k] - b[k];
        s += t * t;
    }
    return s;
}

void require_ball_in_window(const Window& w, const double* x, double R, const char* who) {
    bool ok = true;
    if (w.shape == Window::Shape::Box) {
        for (int k = 0; k < w.d; ++k)
            ok = ok && x[k] - R >= w.lo[k] - 1e-12 && x[k] + R <= w.hi[k] + 1e-12;
    } else {
        ok = std::sqrt(sq_dist(x, w.center.data(), w.d)) + R <= w.radius + 1e-12;
    }
    if (!ok) throw geometry_error(std::string(who) + ": window does not cover the evaluation ball");
}

} // namespace

PotentialEvaluator PotentialEvaluator::make(int d, double p, double density, double tail_ratio) {
    if (!(p > 0.5 * d && p < d))
        throw regime_error("PotentialEvaluator: requires d/2 < p < d");
    if (!(density > 0.0) || !(tail_ratio > 0.0))
        throw domain_error("PotentialEvaluator: density and tail ratio must be positive");
    // radius where the omitted-tail std equals tail_ratio * compensator
    const double dwd = d * unit_ball_volume(d);
    const double R = std::pow((d - p) * (d - p) /
                                  (tail_ratio * tail_ratio * density * dwd * (2.0 * p - d)),
                              1.0 / d);
    return with_radius(d, p, density, R);
}

PotentialEvaluator PotentialEvaluator::with_radius(int d, double p, double density, double R) {
    if (!(p > 0.5 * d && p < d))
        throw regime_error("PotentialEvaluator: requires d/2 < p < d");
    if (!(density > 0.0) || !(R > 0.0))
        throw domain_error("PotentialEvaluator: density and radius must be positive");
    PotentialEvaluator ev;
    ev.d = d;
    ev.p = p;
    ev.density = density;
    ev.window_radius = R;
    ev.r_min = 1e-6 * R;
    return ev;
}

double PotentialEvaluator::compensator() const {
    return density * riesz_ball_mass(d, p, window_radius);
}

double PotentialEvaluator::tail_std() const {
    // var of the compensated mass beyond R: density * int_{|u|>R} |u|^-2p du
    const double dwd = d * unit_ball_volume(d);
    return std::sqrt(density * dwd * std::pow(window_radius, d - 2.0 * p) / (2.0 * p - d));
}

PotentialValue PotentialEvaluator::evaluate(const PoissonSample& sample, const double* x) const {
    if (sample.d != d) throw geometry_error("PotentialEvaluator: dimension mismatch");
    require_ball_in_window(sample.window, x, window_radius, "PotentialEvaluator");
    const double R2 = window_radius * window_radius;
    PotentialValue out;
    double sum = 0.0;
    const long n = sample.count();
    for (long i = 0; i < n; ++i) {
        const double r2 = sq_dist(sample.point(i), x, d);
        if (r2 > R2) continue;
        double r = std::sqrt(r2);
        if (r < r_min) {
            r = r_min;
            ++out.floored;
        }
        sum += std::pow(r, -p);
    }
    out.value = sum - compensator();
    out.tail_std = tail_std();
    return out;
}

PotentialValue far_potential(const PoissonSample& sample, const double* x,
                             const KernelSpec& far_kernel, double trunc_radius,
                             const QuadratureSpec& quad) {
    far_kernel.validate();
    if (far_kernel.kind != KernelKind::Far)
        throw domain_error("far_potential: kernel must be the Far part");
    if (far_kernel.d != sample.d) throw geometry_error("far_potential: dimension mismatch");
    if (!(trunc_radius > 0.0)) throw domain_error("far_potential: truncation must be positive");
    require_ball_in_window(sample.window, x, trunc_radius, "far_potential");

    const int d = sample.d;
    const double T2 = trunc_radius * trunc_radius;
    const double sum = par::block_sum(sample.count(), [&](std::int64_t i) {
        const double r2 = sq_dist(sample.point(i), x, d);
        if (r2 > T2) return 0.0;
        return kernel_value(far_kernel, std::sqrt(r2));
    });
    const double mass = radial_integral([&](double r) { return kernel_value(far_kernel, r); },
                                        d, 0.0, trunc_radius, quad);
    PotentialValue out;
    out.value = sum - sample.intensity * mass;
    // bound via the envelope r^-p; infinite when the tail is not square integrable
    const double p = far_kernel.p;
    if (2.0 * p > d) {
        out.tail_std = std::sqrt(sample.intensity * d * unit_ball_volume(d) *
                                 std::pow(trunc_radius, d - 2.0 * p) / (2.0 * p - d));
    } else {
        out.tail_std = std::numeric_limits<double>::infinity();
    }
    return out;
}

namespace {

// int_{|u| <= r} k(|u|) du for the radial kernel, exact on the plateau
double kernel_ball_integral(const KernelSpec& kernel, double r, const QuadratureSpec& quad) {
    if (!(r > 0.0)) return 0.0;
    const double s = kernel.kind == KernelKind::Full ? r : kernel.cutoff_scale();
    switch (kernel.kind) {
        case KernelKind::Full:
            return riesz_ball_mass(kernel.d, kernel.p, r);
        case KernelKind::Near:
            if (r <= s) return riesz_ball_mass(kernel.d, kernel.p, r);
            break;
        case KernelKind::Far:
            if (r <= s) return 0.0;
            break;
    }
    RadialOptions opts;
    opts.singular_power = kernel.kind == KernelKind::Near ? kernel.p : 0.0;
    return radial_integral([&](double t) { return kernel_value(kernel, t); }, kernel.d, 0.0,
                           std::min(r, kernel.kind == KernelKind::Near ? 3.0 * s : r), quad,
                           opts);
}

} // namespace

double inner_riesz(const GridFunction& g, const double* x, const KernelSpec& kernel,
                   double trunc_radius) {
    kernel.validate();
    if (kernel.d != g.d) throw geometry_error("inner_riesz: dimension mismatch");
    const int d = g.d;
    const double vol = g.cell_volume();
    double rin = g.h(0);
    for (int k = 1; k < d; ++k) rin = std::min(rin, g.h(k));
    rin *= 0.5;
    const double T2 = trunc_radius * trunc_radius;

    // locate the cell containing x, if any
    std::size_t singular = static_cast<std::size_t>(-1);
    {
        bool inside = true;
        int i[3] = {0, 0, 0};
        for (int k = 0; k < d; ++k) {
            if (x[k] < g.lo[k] || x[k] >= g.hi[k]) {
                inside = false;
                break;
            }
            i[k] = std::min(static_cast<int>((x[k] - g.lo[k]) / g.h(k)), g.n[k] - 1);
        }
        if (inside) singular = g.index(i[0], i[1], i[2]);
    }

    double sum = par::block_sum(static_cast<std::int64_t>(g.values.size()), [&](std::int64_t s) {
        const std::size_t idx = static_cast<std::size_t>(s);
        if (idx == singular) return 0.0;
        double c[3];
        g.center(idx, c);
        const double r2 = sq_dist(c, x, d);
        if (r2 > T2 || r2 == 0.0) return 0.0;
        const double v = g.values[idx];
        if (v == 0.0) return 0.0;
        return v * v * kernel_value(kernel, std::sqrt(r2)) * vol;
    });
    if (singular != static_cast<std::size_t>(-1)) {
        const double v = g.values[singular];
        if (v != 0.0) sum += v * v * kernel_ball_integral(kernel, rin, QuadratureSpec{});
    }
    return sum;
}

namespace {

void require_fattened_support(const GridFunction& g, const Window& w, double L, const char* who) {
    bool ok = w.d == g.d;
    if (ok && w.shape == Window::Shape::Box) {
        for (int k = 0; k < g.d; ++k)
            ok = ok && w.lo[k] <= g.lo[k] - L + 1e-12 && w.hi[k] >= g.hi[k] + L - 1e-12;
    } else if (ok) {
        double far2 = 0.0;
        for (int k = 0; k < g.d; ++k) {
            const double r = std::max(std::fabs(g.lo[k] - w.center[k]),
                                      std::fabs(g.hi[k] - w.center[k]));
            far2 += r * r;
        }
        ok = std::sqrt(far2) + L <= w.radius + 1e-12;
    }
    if (!ok) throw geometry_error(std::string(who) + ": window must cover the fattened support");
}

} // namespace

double zeta_epsilon(const GridFunction& g, const PoissonSample& sample, double p,
                    double trunc_radius) {
    if (!(trunc_radius > 0.0)) throw domain_error("zeta_epsilon: truncation must be positive");
    require_fattened_support(g, sample.window, trunc_radius, "zeta_epsilon");
    KernelSpec full;
    full.d = g.d;
    full.p = p;
    full.kind = KernelKind::Full;
    full.validate();
    const long n = sample.count();
    double sum = 0.0;
    for (long i = 0; i < n; ++i) sum += inner_riesz(g, sample.point(i), full, trunc_radius);
    // Fubini: int int g^2(z) k(|z-y|) 1{|z-y|<=L} dz dy = |g|_2^2 * ball mass(L)
    return sum - sample.intensity * g.l2_sq() * riesz_ball_mass(g.d, p, trunc_radius);
}

SplitFunctionals split_functionals(const GridFunction& g, const PoissonSample& sample,
                                   double p, double a, double eps, int family,
                                   double trunc_radius, const QuadratureSpec& quad) {
    require_fattened_support(g, sample.window, trunc_radius, "split_functionals");
    KernelSpec near;
    near.d = g.d;
    near.p = p;
    near.kind = KernelKind::Near;
    near.a = a;
    near.eps = eps;
    near.family = family;
    near.validate();
    KernelSpec full = near;
    full.kind = KernelKind::Full;
    if (3.0 * near.cutoff_scale() > trunc_radius)
        throw geometry_error("split_functionals: truncation must cover the Near support");

    const double near_mass = near_kernel_mass(near, quad);
    const double full_mass = riesz_ball_mass(g.d, p, trunc_radius);
    const double l2 = g.l2_sq();
    const long n = sample.count();
    double near_sum = 0.0, full_sum = 0.0;
    for (long i = 0; i < n; ++i) {
        near_sum += inner_riesz(g, sample.point(i), near, trunc_radius);
        full_sum += inner_riesz(g, sample.point(i), full, trunc_radius);
    }
    SplitFunctionals out;
    out.near_part = near_sum - sample.intensity * l2 * near_mass;
    // far evaluated as the full/near difference so the split is exact
    out.far_part = (full_sum - near_sum) - sample.intensity * l2 * (full_mass - near_mass);
    out.zeta = full_sum - sample.intensity * l2 * full_mass;
    return out;
}

} // namespace rpp
