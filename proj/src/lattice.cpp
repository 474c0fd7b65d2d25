#include "rpp/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rpp/errors.hpp"
#include "rpp/parallel.hpp"

namespace rpp {

namespace {

int axis_interior(double lo, double hi, double h) {
    const double span = (hi - lo) / h;
    const double rounded = std::round(span);
    if (!(rounded >= 2.0) || std::fabs(span - rounded) > 1e-9 * std::max(1.0, rounded))
        throw geometry_error("LatticeOperatorSpec: box side must be an integer number of steps");
    return static_cast<int>(rounded) - 1;
}

} // namespace

std::array<int, 3> LatticeOperatorSpec::interior_nodes() const {
    std::array<int, 3> m{{1, 1, 1}};
    for (int k = 0; k < d; ++k) m[k] = axis_interior(lo[k], hi[k], h);
    return m;
}

std::size_t LatticeOperatorSpec::size() const {
    const auto m = interior_nodes();
    std::size_t total = 1;
    for (int k = 0; k < d; ++k) total *= static_cast<std::size_t>(m[k]);
    return total;
}

void LatticeOperatorSpec::validate() const {
    if (d < 1 || d > 3) throw geometry_error("LatticeOperatorSpec: dimension must be 1..3");
    if (!(h > 0.0)) throw geometry_error("LatticeOperatorSpec: mesh width must be positive");
    if (xi.size() != size())
        throw geometry_error("LatticeOperatorSpec: potential size does not match the lattice");
}

void LatticeOperatorSpec::node_coord(std::size_t idx, double* x) const {
    const auto m = interior_nodes();
    int i[3] = {0, 0, 0};
    i[0] = static_cast<int>(idx % m[0]);
    idx /= m[0];
    i[1] = static_cast<int>(idx % m[1]);
    i[2] = static_cast<int>(idx / m[1]);
    for (int k = 0; k < d; ++k) x[k] = lo[k] + (i[k] + 1) * h;
}

void apply_shifted(const LatticeOperatorSpec& spec, double shift,
                   const std::vector<double>& v, std::vector<double>& out) {
    const auto m = spec.interior_nodes();
    const std::size_t n = spec.size();
    out.resize(n);
    const double inv2h2 = 0.5 / (spec.h * spec.h);
    const double diag = shift - spec.d * 2.0 * inv2h2;
    const int m0 = m[0], m1 = m[1], m2 = m[2];
    const std::int64_t total = static_cast<std::int64_t>(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::int64_t s = 0; s < total; ++s) {
        const std::size_t idx = static_cast<std::size_t>(s);
        const int i0 = static_cast<int>(idx % m0);
        const std::size_t r = idx / m0;
        const int i1 = static_cast<int>(r % m1);
        const int i2 = static_cast<int>(r / m1);
        double nb = 0.0;
        if (i0 > 0) nb += v[idx - 1];
        if (i0 + 1 < m0) nb += v[idx + 1];
        if (spec.d > 1) {
            if (i1 > 0) nb += v[idx - m0];
            if (i1 + 1 < m1) nb += v[idx + m0];
        }
        if (spec.d > 2) {
            const std::size_t plane = static_cast<std::size_t>(m0) * m1;
            if (i2 > 0) nb += v[idx - plane];
            if (i2 + 1 < m2) nb += v[idx + plane];
        }
        out[idx] = nb * inv2h2 + (spec.xi[idx] + diag) * v[idx];
    }
}

EigenResult principal_eigenvalue(const LatticeOperatorSpec& spec, double rq_tol, long max_iter) {
    spec.validate();
    const std::size_t n = spec.size();
    const double xi_min = *std::min_element(spec.xi.begin(), spec.xi.end());
    const double shift = 2.0 * spec.d / (spec.h * spec.h) - xi_min;

    std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> w(n);
    double rq_prev = -std::numeric_limits<double>::infinity();
    for (long it = 1; it <= max_iter; ++it) {
        apply_shifted(spec, shift, v, w);
        double dot = 0.0, norm2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            dot += v[i] * w[i];
            norm2 += w[i] * w[i];
        }
        const double norm = std::sqrt(norm2);
        if (!(norm > 0.0))
            throw convergence_error("principal_eigenvalue: iterate vanished", rq_prev - shift, 0.0);
        const double inv = 1.0 / norm;
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] * inv;
        if (std::fabs(dot - rq_prev) < rq_tol) {
            EigenResult res;
            res.lambda = dot - shift;
            res.iterations = it;
            res.shift = shift;
            res.vec = std::move(v);
            return res;
        }
        rq_prev = dot;
    }
    throw convergence_error("principal_eigenvalue: iteration budget exhausted",
                            rq_prev - shift, rq_tol);
}

namespace {

// Solve (tridiagonal SPD) T x = b in place; sub/sup diagonal off, diagonal diag.
void thomas_solve(const std::vector<double>& diag, const std::vector<double>& off,
                  std::vector<double>& x) {
    const std::size_t n = diag.size();
    static thread_local std::vector<double> c, dvec;
    c.assign(n, 0.0);
    dvec.assign(n, 0.0);
    c[0] = off.empty() ? 0.0 : off[0] / diag[0];
    dvec[0] = x[0] / diag[0];
    for (std::size_t i = 1; i < n; ++i) {
        const double m = diag[i] - off[i - 1] * c[i - 1];
        if (i < n - 1) c[i] = off[i] / m;
        dvec[i] = (x[i] - off[i - 1] * dvec[i - 1]) / m;
    }
    x[n - 1] = dvec[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = dvec[i] - c[i] * x[i + 1];
}

struct Tridiag {
    std::vector<double> diag;
    std::vector<double> off;
};

double quad_form(const Tridiag& t, const std::vector<double>& v) {
    double s = 0.0;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) s += t.diag[i] * v[i] * v[i];
    for (std::size_t i = 0; i + 1 < n; ++i) s += 2.0 * t.off[i] * v[i] * v[i + 1];
    return s;
}

// Largest generalized eigenvalue of diag(a) v = mu B v for B = diag(mass) +
// difference-form stiffness: edge[j] couples cells j-1 and j (edge[0] and
// edge[n] go to the zero exterior; zero weight means no edge).  Keeping the
// difference structure matters: the Rayleigh quotient is evaluated as a sum
// of squares, where folding B into a generic tridiagonal costs ~1e-10 of
// cancellation noise and the stopping rule below it can never fire.
// B^{-1} A power steps first (B is an M-matrix, A has a positive diagonal, so
// the iteration is positivity-preserving and heads for the Perron pair), then
// Rayleigh-shifted inverse iteration for the cubic finish; fine meshes leave
// the top of the spectrum too clustered for the plain power loop alone.
double generalized_top(const std::vector<double>& a, const std::vector<double>& mass,
                       const std::vector<double>& edge, double tol = 1e-13,
                       long max_iter = 200000) {
    const std::size_t n = a.size();
    Tridiag B;
    B.diag.resize(n);
    B.off.assign(n > 0 ? n - 1 : 0, 0.0);
    for (std::size_t j = 0; j < n; ++j) B.diag[j] = mass[j] + edge[j] + edge[j + 1];
    for (std::size_t j = 0; j + 1 < n; ++j) B.off[j] = -edge[j + 1];
    auto bquad = [&](const std::vector<double>& x) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += mass[i] * x[i] * x[i];
        s += edge[0] * x[0] * x[0] + edge[n] * x[n - 1] * x[n - 1];
        for (std::size_t j = 1; j < n; ++j) {
            const double dv = x[j] - x[j - 1];
            s += edge[j] * dv * dv;
        }
        return s;
    };
    std::vector<double> v(n), w(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.1 * std::sin(0.7 * static_cast<double>(i));
    auto rayleigh = [&](const std::vector<double>& x) {
        double num = 0.0;
        for (std::size_t i = 0; i < n; ++i) num += a[i] * x[i] * x[i];
        return num / bquad(x);
    };
    auto normalize = [&](std::vector<double>& x) {
        double scale = 0.0;
        for (double t : x) scale = std::max(scale, std::fabs(t));
        if (!(scale > 0.0) || !std::isfinite(scale)) return false;
        for (double& t : x) t /= scale;
        return true;
    };
    double mu_prev = 0.0;
    const long warmup = std::min<long>(200, max_iter);
    for (long it = 0; it < warmup; ++it) {
        for (std::size_t i = 0; i < n; ++i) w[i] = a[i] * v[i];
        thomas_solve(B.diag, B.off, w); // w = B^{-1} A v
        if (!normalize(w))
            throw convergence_error("generalized_top: iterate vanished", mu_prev, 0.0);
        v.swap(w);
        const double mu = rayleigh(v);
        if (std::fabs(mu - mu_prev) < tol * std::max(1.0, std::fabs(mu))) return mu;
        mu_prev = mu;
    }
    const double mu_warm = mu_prev;
    Tridiag S;
    std::vector<double> u = v;
    double mu = mu_warm;
    double inc_best = std::numeric_limits<double>::infinity();
    long since_best = 0;
    for (long it = 0; it < 200; ++it) {
        // mu B - A is singular exactly at the eigenvalue; near-singular solves
        // only sharpen the eigenvector direction
        S.diag.resize(n);
        S.off.resize(B.off.size());
        for (std::size_t i = 0; i < n; ++i) S.diag[i] = mu * B.diag[i] - a[i];
        for (std::size_t i = 0; i + 1 < n; ++i) S.off[i] = mu * B.off[i];
        for (std::size_t i = 0; i < n; ++i) {
            double r = B.diag[i] * u[i];
            if (i > 0) r += B.off[i - 1] * u[i - 1];
            if (i + 1 < n) r += B.off[i] * u[i + 1];
            w[i] = r;
        }
        thomas_solve(S.diag, S.off, w);
        if (!normalize(w)) {
            mu = std::nextafter(mu, std::numeric_limits<double>::infinity());
            continue;
        }
        const double mu_new = rayleigh(w);
        if (!std::isfinite(mu_new)) break;
        u.swap(w);
        const double inc = std::fabs(mu_new - mu);
        const bool sane = mu_new >= mu_warm - 1e-9 * std::max(1.0, std::fabs(mu_new));
        if (sane && inc < tol * std::max(1.0, std::fabs(mu_new))) return mu_new;
        // rattling in the floating-point floor without making progress also
        // means converged
        if (inc < inc_best * 0.5) {
            inc_best = inc;
            since_best = 0;
        } else if (sane && ++since_best >= 20) {
            return mu_new;
        }
        mu = mu_new;
    }
    // shifted iteration wandered; fall back to the safe power loop
    mu_prev = mu_warm;
    for (long it = warmup; it < max_iter; ++it) {
        for (std::size_t i = 0; i < n; ++i) w[i] = a[i] * v[i];
        thomas_solve(B.diag, B.off, w);
        if (!normalize(w))
            throw convergence_error("generalized_top: iterate vanished", mu_prev, 0.0);
        v.swap(w);
        const double mu_pow = rayleigh(v);
        if (std::fabs(mu_pow - mu_prev) < tol * std::max(1.0, std::fabs(mu_pow))) return mu_pow;
        mu_prev = mu_pow;
    }
    throw convergence_error("generalized_top: iteration budget exhausted", mu_prev, tol);
}

} // namespace

double ball_ground_energy_radial(int d, double R, int cells) {
    if (d < 1) throw domain_error("ball_ground_energy_radial: dimension must be >= 1");
    if (!(R > 0.0) || cells < 4) throw geometry_error("ball_ground_energy_radial: bad mesh");
    const std::size_t n = static_cast<std::size_t>(cells);
    const double h = R / cells;
    // mass: exact cell integrals of r^(d-1); stiffness edges at r = j h
    std::vector<double> mass(n);
    Tridiag K;
    K.diag.assign(n, 0.0);
    K.off.assign(n - 1, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const double r0 = j * h, r1 = (j + 1) * h;
        mass[j] = (std::pow(r1, d) - std::pow(r0, d)) / d;
    }
    for (std::size_t j = 1; j <= n; ++j) {
        const double w = 0.5 * std::pow(j * h, d - 1) / h; // (1/2) edge weight / h
        K.diag[j - 1] += w;
        if (j < n) {
            K.diag[j] += w;
            K.off[j - 1] -= w;
        }
    }
    // inverse iteration for the smallest eigenvalue of K v = lambda M v
    std::vector<double> v(n, 1.0);
    double lam_prev = 0.0;
    for (long it = 0; it < 100000; ++it) {
        std::vector<double> rhs(n);
        for (std::size_t i = 0; i < n; ++i) rhs[i] = mass[i] * v[i];
        thomas_solve(K.diag, K.off, rhs);
        double scale = 0.0;
        for (double x : rhs) scale = std::max(scale, std::fabs(x));
        for (double& x : rhs) x /= scale;
        double num = quad_form(K, rhs);
        double den = 0.0;
        for (std::size_t i = 0; i < n; ++i) den += mass[i] * rhs[i] * rhs[i];
        const double lam = num / den;
        v.swap(rhs);
        if (std::fabs(lam - lam_prev) < 1e-13 * std::max(1.0, lam)) return lam;
        lam_prev = lam;
    }
    throw convergence_error("ball_ground_energy_radial: no convergence", lam_prev, 0.0);
}

double radial_riesz_optimum(int d, double p, double R, int cells) {
    if (d < 1) throw domain_error("radial_riesz_optimum: dimension must be >= 1");
    if (!(p > 0.0 && p < std::min(2.0, static_cast<double>(d))))
        throw domain_error("radial_riesz_optimum: requires 0 < p < min(2, d)");
    if (!(R > 0.0) || cells < 8) throw geometry_error("radial_riesz_optimum: bad mesh");
    const std::size_t n = static_cast<std::size_t>(cells);
    const double h = R / cells;
    std::vector<double> attract(n), mass(n), edge(n + 1);
    for (std::size_t j = 0; j < n; ++j) {
        const double r0 = j * h, r1 = (j + 1) * h;
        mass[j] = (std::pow(r1, d) - std::pow(r0, d)) / d;
        // exact cell integral of r^(d-1-p); finite at the singular first cell
        attract[j] = (std::pow(r1, d - p) - std::pow(r0, d - p)) / (d - p);
    }
    edge[0] = 0.0; // natural boundary at the origin
    for (std::size_t j = 1; j <= n; ++j) edge[j] = 0.5 * std::pow(j * h, d - 1) / h;
    return generalized_top(attract, mass, edge);
}

double lattice_riesz_optimum_1d(double p, double R, int cells, double x0) {
    if (!(p > 0.0 && p < 1.0))
        throw domain_error("lattice_riesz_optimum_1d: requires 0 < p < 1");
    if (!(R > 0.0) || cells < 8) throw geometry_error("lattice_riesz_optimum_1d: bad mesh");
    const std::size_t n = static_cast<std::size_t>(cells);
    const double h = 2.0 * R / cells;
    auto arm = [p](double len) { return std::pow(len, 1.0 - p) / (1.0 - p); };
    std::vector<double> attract(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double a = -R + j * h, b = a + h;
        if (x0 <= a)
            attract[j] = arm(b - x0) - arm(a - x0);
        else if (x0 >= b)
            attract[j] = arm(x0 - a) - arm(x0 - b);
        else
            attract[j] = arm(b - x0) + arm(x0 - a);
    }
    // edges between neighbouring cells plus Dirichlet ghosts at both ends
    const std::vector<double> mass(n, h);
    const std::vector<double> edge(n + 1, 0.5 / h);
    return generalized_top(attract, mass, edge);
}

std::vector<double> riesz_potential_nodes_1d(double p, double lo, double hi, double h,
                                             double theta, double x0) {
    if (!(p > 0.0 && p < 1.0))
        throw domain_error("riesz_potential_nodes_1d: requires 0 < p < 1");
    const int m = axis_interior(lo, hi, h);
    auto arm = [p](double len) { return std::pow(len, 1.0 - p) / (1.0 - p); };
    std::vector<double> xi(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        const double x = lo + (i + 1) * h;
        const double a = x - 0.5 * h, b = x + 0.5 * h;
        double cell;
        if (x0 <= a)
            cell = arm(b - x0) - arm(a - x0);
        else if (x0 >= b)
            cell = arm(x0 - a) - arm(x0 - b);
        else
            cell = arm(b - x0) + arm(x0 - a);
        xi[static_cast<std::size_t>(i)] = theta * cell / h;
    }
    return xi;
}

} // namespace rpp
