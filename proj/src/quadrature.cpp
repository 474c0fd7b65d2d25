#include "rpp/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "rpp/errors.hpp"
#include "rpp/specfun.hpp"

namespace rpp {

namespace {

// Kronrod 15 abscissae on [0, 1] side (symmetric) and weights; the embedded
// Gauss 7 rule uses the odd-indexed nodes.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
    double a, b, integral, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double resk = 0.0, resg = 0.0;
    const double fc = f(c);
    resk = fc * kWgk[7];
    resg = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double fsum = f(c - dx) + f(c + dx);
        resk += kWgk[j] * fsum;
        if (j % 2 == 1) resg += kWg[j / 2] * fsum;
    }
    const double integral = resk * half;
    const double err = std::fabs((resk - resg) * half);
    return Panel{a, b, integral, err};
}

double adaptive(const std::function<double(double)>& f, double a, double b,
                const QuadratureSpec& spec) {
    std::priority_queue<Panel> queue;
    queue.push(gk15(f, a, b));
    double total = queue.top().integral;
    double total_err = queue.top().error;
    int used = 1;
    while (total_err > std::max(spec.abs_tol, spec.rel_tol * std::fabs(total))) {
        if (used >= spec.max_subdiv) {
            throw convergence_error("adaptive quadrature: subdivision budget exhausted",
                                    total, total_err);
        }
        const Panel worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // interval at floating-point resolution; accept its estimate
            total_err -= worst.error;
            continue;
        }
        const Panel left = gk15(f, worst.a, mid);
        const Panel right = gk15(f, mid, worst.b);
        total += left.integral + right.integral - worst.integral;
        total_err += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        ++used;
    }
    return total;
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec) {
    if (!(a <= b) || !std::isfinite(a) || !std::isfinite(b))
        throw domain_error("integrate: bad interval");
    if (a == b) return 0.0;
    return adaptive(f, a, b, spec);
}

double radial_integral(const std::function<double(double)>& f, int d, double r_lo,
                       double r_hi, const QuadratureSpec& spec, const RadialOptions& opts) {
    if (d < 1) throw domain_error("radial_integral: dimension must be >= 1");
    if (!(r_lo >= 0.0)) throw domain_error("radial_integral: r_lo must be >= 0");
    const double surface = static_cast<double>(d) * unit_ball_volume(d);

    double hi = r_hi;
    if (std::isinf(r_hi)) {
        if (!(opts.tail_power > d))
            throw domain_error("radial_integral: infinite range needs tail_power > d");
        const double q = opts.tail_power;
        double r = std::max(1.0, 2.0 * r_lo);
        // tail bound: surface * |f(R)| * R^d / (q - d), assuming |f| <= f(R)(r/R)^-q
        double bound;
        int guard = 0;
        for (;;) {
            bound = surface * std::fabs(f(r)) * std::pow(r, d) / (q - d);
            if (bound < 0.1 * spec.abs_tol) break;
            r *= 2.0;
            if (++guard > 400)
                throw convergence_error("radial_integral: tail truncation did not settle",
                                        r, bound);
        }
        hi = r;
        if (hi <= r_lo) return 0.0;
    }
    if (hi <= r_lo) return 0.0;

    const double s = opts.singular_power;
    if (r_lo == 0.0 && s > 0.0) {
        if (!(s < d)) throw domain_error("radial_integral: singular_power must be < d");
        // r = u^m with m = 2/(d-s): integrand ~ u near 0, smooth for subdivision
        const double m = 2.0 / (d - s);
        auto sub = [&](double u) {
            const double r = std::pow(u, m);
            return f(r) * std::pow(r, d - 1) * m * std::pow(u, m - 1.0);
        };
        const double u_hi = std::pow(hi, 1.0 / m);
        return surface * adaptive(sub, 0.0, u_hi, spec);
    }

    auto g = [&](double r) { return f(r) * std::pow(r, d - 1); };
    // split wide ranges at powers of two so the adaptive pass starts balanced
    if (hi / std::max(r_lo, 1e-300) > 1e4 && r_lo > 0.0) {
        double total = 0.0;
        double a = r_lo;
        QuadratureSpec piece = spec;
        piece.abs_tol = spec.abs_tol / 64.0;
        while (a < hi) {
            const double b = std::min(hi, a * 16.0);
            total += adaptive(g, a, b, piece);
            a = b;
        }
        return surface * total;
    }
    return surface * adaptive(g, r_lo, hi, spec);
}

} // namespace rpp
