#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "rpp/errors.hpp"

namespace rpp {

// Cell-centered scalar field on a box, d = 1..3, uniform mesh per axis.
// Values live at cell midpoints; value_at() interpolates multilinearly and
// returns 0 outside the box (the fields here vanish on the boundary).
struct GridFunction {
    int d = 1;
    std::array<double, 3> lo{{0, 0, 0}};
    std::array<double, 3> hi{{0, 0, 0}};
    std::array<int, 3> n{{1, 1, 1}}; // cells per axis
    std::vector<double> values;

    static GridFunction zeros(int d, const std::array<double, 3>& lo,
                              const std::array<double, 3>& hi, const std::array<int, 3>& n) {
        if (d < 1 || d > 3) throw geometry_error("GridFunction: dimension must be 1..3");
        GridFunction g;
        g.d = d;
        g.lo = lo;
        g.hi = hi;
        g.n = n;
        std::size_t total = 1;
        for (int k = 0; k < d; ++k) {
            if (g.n[k] < 1 || !(hi[k] > lo[k])) throw geometry_error("GridFunction: bad axis");
            total *= static_cast<std::size_t>(g.n[k]);
        }
        for (int k = d; k < 3; ++k) g.n[k] = 1;
        g.values.assign(total, 0.0);
        return g;
    }

    static GridFunction sample(int d, const std::array<double, 3>& lo,
                               const std::array<double, 3>& hi, const std::array<int, 3>& n,
                               const std::function<double(const double*)>& f) {
        GridFunction g = zeros(d, lo, hi, n);
        double x[3] = {0, 0, 0};
        for (std::size_t idx = 0; idx < g.values.size(); ++idx) {
            g.center(idx, x);
            g.values[idx] = f(x);
        }
        return g;
    }

    double h(int axis) const { return (hi[axis] - lo[axis]) / n[axis]; }

    double cell_volume() const {
        double v = 1.0;
        for (int k = 0; k < d; ++k) v *= h(k);
        return v;
    }

    std::size_t index(int i0, int i1 = 0, int i2 = 0) const {
        return (static_cast<std::size_t>(i2) * n[1] + i1) * n[0] + i0;
    }

    void unpack(std::size_t idx, int& i0, int& i1, int& i2) const {
        i0 = static_cast<int>(idx % n[0]);
        idx /= n[0];
        i1 = static_cast<int>(idx % n[1]);
        i2 = static_cast<int>(idx / n[1]);
    }

    void center(std::size_t idx, double* x) const {
        int i[3];
        unpack(idx, i[0], i[1], i[2]);
        for (int k = 0; k < d; ++k) x[k] = lo[k] + (i[k] + 0.5) * h(k);
    }

    // sum v^2 * cell volume
    double l2_sq() const {
        double s = 0.0;
        for (double v : values) s += v * v;
        return s * cell_volume();
    }

    // sum over cell-to-cell differences (and boundary cells to the zero
    // exterior) of (dv/h)^2 * cell volume
    double grad_sq() const {
        double s = 0.0;
        const double vol = cell_volume();
        for (int axis = 0; axis < d; ++axis) {
            const double ha = h(axis);
            const int stride = axis == 0 ? 1 : (axis == 1 ? n[0] : n[0] * n[1]);
            const int count = n[axis];
            for (std::size_t idx = 0; idx < values.size(); ++idx) {
                int i[3];
                unpack(idx, i[0], i[1], i[2]);
                const int pos = i[axis];
                const double here = values[idx];
                const double next = pos + 1 < count ? values[idx + stride] : 0.0;
                double dv = next - here;
                s += dv * dv / (ha * ha) * vol;
                if (pos == 0) s += here * here / (ha * ha) * vol; // edge to the exterior
            }
        }
        return s;
    }

    double energy() const { return l2_sq() + 0.5 * grad_sq(); }

    void scale(double c) {
        for (double& v : values) v *= c;
    }

    // normalize so l2^2 + grad^2/2 = 1
    void normalize_energy() {
        const double e = energy();
        if (!(e > 0.0)) throw domain_error("GridFunction: cannot normalize the zero field");
        scale(1.0 / std::sqrt(e));
    }

    double value_at(const double* x) const {
        // multilinear between cell centers; constant in the half-cell margin,
        // zero outside the box
        double t[3];
        int base[3] = {0, 0, 0};
        double w[3];
        for (int k = 0; k < d; ++k) {
            if (x[k] < lo[k] || x[k] > hi[k]) return 0.0;
            const double hk = h(k);
            const double u = (x[k] - lo[k]) / hk - 0.5;
            const double c = std::min(std::max(u, 0.0), static_cast<double>(n[k] - 1));
            base[k] = static_cast<int>(c);
            if (base[k] > n[k] - 2) base[k] = std::max(0, n[k] - 2);
            t[k] = c - base[k];
            w[k] = t[k];
        }
        double out = 0.0;
        const int lim = 1 << d;
        for (int corner = 0; corner < lim; ++corner) {
            double weight = 1.0;
            int i[3] = {0, 0, 0};
            for (int k = 0; k < d; ++k) {
                const int bit = (corner >> k) & 1;
                const int ik = std::min(base[k] + bit, n[k] - 1);
                i[k] = ik;
                weight *= bit ? w[k] : 1.0 - w[k];
            }
            if (weight != 0.0) out += weight * values[index(i[0], i[1], i[2])];
        }
        return out;
    }
};

} // namespace rpp
