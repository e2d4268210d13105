#pragma once

// Independent reference computations used by the test suite.  Everything in
// here is deliberately written from first principles (brute-force searches,
// closed forms, textbook recurrences) rather than calling into the library,
// so that library results can be checked against a second, slower route.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "af/geometry.hpp"

namespace oracles {

// ---------------------------------------------------------------------------
// smallest singular value / most contracted direction by exhaustive angle scan
// ---------------------------------------------------------------------------

struct BruteResult {
    double lambda_min = 0.0;
    double theta = 0.0; // direction of the minimizing unit vector, in [0, pi)
};

// minimizes ||M (cos t, sin t)|| over n_angles samples of [0, pi), then
// polishes the best bracket by ternary search.  Eight rotation strands are
// interleaved so the scan is mostly multiply-add.
inline BruteResult brute_min(const af::Mat2& M, std::size_t n_angles) {
    const double dth = M_PI / static_cast<double>(n_angles);
    const double step = 8.0 * dth;
    const double cs = std::cos(step), sn = std::sin(step);
    double cx[8], cy[8], best[8];
    std::size_t bi[8];
    for (int s = 0; s < 8; ++s) {
        cx[s] = std::cos(s * dth);
        cy[s] = std::sin(s * dth);
        best[s] = 1e300;
        bi[s] = 0;
    }
    const std::size_t rounds = n_angles / 8;
    for (std::size_t i = 0; i < rounds; ++i) {
        for (int s = 0; s < 8; ++s) {
            const double ux = M.a * cx[s] + M.b * cy[s];
            const double uy = M.c * cx[s] + M.d * cy[s];
            const double q = ux * ux + uy * uy;
            if (q < best[s]) {
                best[s] = q;
                bi[s] = i;
            }
            const double nx = cx[s] * cs - cy[s] * sn;
            cy[s] = cx[s] * sn + cy[s] * cs;
            cx[s] = nx;
        }
    }
    double bq = 1e300, bth = 0.0;
    for (int s = 0; s < 8; ++s) {
        if (best[s] < bq) {
            bq = best[s];
            bth = (static_cast<double>(bi[s]) * 8.0 + s) * dth;
        }
    }
    auto f = [&](double th) {
        const double ux = M.a * std::cos(th) + M.b * std::sin(th);
        const double uy = M.c * std::cos(th) + M.d * std::sin(th);
        return ux * ux + uy * uy;
    };
    double lo = bth - step, hi = bth + step;
    for (int it = 0; it < 220; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (f(m1) < f(m2))
            hi = m2;
        else
            lo = m1;
    }
    const double th = 0.5 * (lo + hi);
    return {std::sqrt(f(th)), th};
}

// angle between two directions, folded to [0, pi/2] (directions are lines)
inline double direction_error(af::Vec2 e, double theta) {
    double d = std::fmod(std::abs(std::atan2(e.y, e.x) - theta), M_PI);
    if (d > M_PI / 2.0) d = M_PI - d;
    return d;
}

// ---------------------------------------------------------------------------
// subshift-of-finite-type word enumeration
// ---------------------------------------------------------------------------

// all admissible words of length n over states 1..r for a 0/1 adjacency
// matrix adj[i][j] = "j may follow i" (0-based states internally)
inline std::vector<std::vector<int>> sft_words(
    const std::vector<std::vector<int>>& adj, std::size_t n) {
    const int r = static_cast<int>(adj.size());
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int last) -> void {
        if (cur.size() == n) {
            out.push_back(cur);
            return;
        }
        for (int s = 0; s < r; ++s) {
            if (last >= 0 && adj[last][s] == 0) continue;
            cur.push_back(s + 1);
            self(self, s);
            cur.pop_back();
        }
    };
    rec(rec, -1);
    return out;
}

// Fibonacci with F(1) = F(2) = 1
inline std::uint64_t fibonacci(unsigned k) {
    std::uint64_t a = 0, b = 1;
    for (unsigned i = 0; i < k; ++i) {
        const std::uint64_t t = a + b;
        a = b;
        b = t;
    }
    return a;
}

// largest eigenvalue of a small nonnegative matrix by power iteration
inline double power_eigenvalue(const std::vector<std::vector<int>>& adj) {
    const std::size_t r = adj.size();
    std::vector<double> v(r, 1.0);
    double lam = 1.0;
    for (int it = 0; it < 200; ++it) {
        std::vector<double> w(r, 0.0);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) w[i] += adj[i][j] * v[j];
        double n = 0.0;
        for (double x : w) n = std::max(n, std::abs(x));
        if (n == 0.0) return 0.0;
        for (double& x : w) x /= n;
        lam = n;
        v = std::move(w);
    }
    return lam;
}

// ---------------------------------------------------------------------------
// one-dimensional reference dynamics (the b = 0 limit)
// ---------------------------------------------------------------------------

// symbol sequence of x0 under x -> 1 - a x^2 with the coding "right of the
// largest critical point below x"; for the quadratic family this is simply
// 1 on x > 0 and 2 on x < 0
inline std::vector<int> sign_itinerary(double a, double x0, std::size_t n) {
    std::vector<int> out;
    double x = x0;
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(x > 0.0 ? 1 : 2);
        x = 1.0 - a * x * x;
    }
    return out;
}

// fixed points of (x, y) -> (1 - a x^2 + y, b x), from the quadratic formula
inline std::vector<af::Vec2> fixed_points(double a, double b) {
    const double disc = (1.0 - b) * (1.0 - b) + 4.0 * a;
    if (disc < 0.0) return {};
    const double s = std::sqrt(disc);
    const double xp = ((b - 1.0) + s) / (2.0 * a);
    const double xm = ((b - 1.0) - s) / (2.0 * a);
    return {{xp, b * xp}, {xm, b * xm}};
}

// ---------------------------------------------------------------------------
// measure-theoretic helpers
// ---------------------------------------------------------------------------

// mass of [lo, hi] under the arcsine density 1/(pi sqrt(1-x^2)) on (-1, 1)
inline double arcsine_mass(double lo, double hi) {
    const double cl = std::clamp(lo, -1.0, 1.0);
    const double ch = std::clamp(hi, -1.0, 1.0);
    if (ch <= cl) return 0.0;
    return (std::asin(ch) - std::asin(cl)) / M_PI;
}

// total variation distance between two normalized mass vectors
inline double tv_distance(std::vector<double> p, std::vector<double> q) {
    auto normalize = [](std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        if (s > 0.0)
            for (double& x : v) x /= s;
    };
    normalize(p);
    normalize(q);
    double tv = 0.0;
    for (std::size_t i = 0; i < p.size() && i < q.size(); ++i)
        tv += std::abs(p[i] - q[i]);
    return 0.5 * tv;
}

// ---------------------------------------------------------------------------
// plane geometry helpers for region tests
// ---------------------------------------------------------------------------

// signed area of a closed polygon (shoelace)
inline double polygon_area(const std::vector<af::Vec2>& poly) {
    double s = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const af::Vec2 p = poly[i], q = poly[(i + 1) % n];
        s += p.x * q.y - q.x * p.y;
    }
    return 0.5 * s;
}

// even-odd ray-crossing point-in-polygon test
inline bool point_in_polygon(af::Vec2 z, const std::vector<af::Vec2>& poly) {
    bool in = false;
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const af::Vec2 a = poly[i], b = poly[j];
        if ((a.y > z.y) != (b.y > z.y)) {
            const double xc = a.x + (z.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (z.x < xc) in = !in;
        }
    }
    return in;
}

// linear interpolation of (xs, ys) samples at x, xs ascending
inline double interp_sorted(const std::vector<double>& xs,
                            const std::vector<double>& ys, double x) {
    if (xs.empty()) return 0.0;
    auto it = std::lower_bound(xs.begin(), xs.end(), x);
    if (it == xs.begin()) return ys.front();
    if (it == xs.end()) return ys.back();
    const std::size_t i = static_cast<std::size_t>(it - xs.begin());
    const double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return ys[i - 1] + t * (ys[i] - ys[i - 1]);
}

} // namespace oracles
