#include "af/map_core.hpp"

#include <algorithm>
#include <cmath>

namespace af {

SystemConfig SystemConfig::with_mu_star(int mu) {
    SystemConfig cfg;
    cfg.mu_star = mu;
    cfg.delta = std::exp(-static_cast<double>(mu));
    return cfg;
}

std::vector<std::string> SystemConfig::validate(double b) const {
    std::vector<std::string> warnings;
    const double ab = std::abs(b);
    const double bound = std::min(std::min(alpha, delta), std::min(rho, std::exp(-c)));
    if (ab > 0.0 && ab * 100.0 > bound)
        warnings.push_back("b is not small against min(alpha, delta, rho, e^-c); asymptotic regimes may not show");
    if (!(alpha > 0.0 && alpha < beta && beta < 1.0))
        warnings.push_back("expected 0 < alpha < beta < 1");
    if (!(rho > 0.0 && rho < 1.0))
        warnings.push_back("expected rho in (0,1)");
    return warnings;
}

std::array<Vec2, 4> MapFamily::jac_grad(Vec2 z) const {
    if (jacobian_grad) return jacobian_grad(z);
    // central differences of the Jacobian entries
    const double h = 1e-6;
    const Mat2 jxp = jacobian({z.x + h, z.y});
    const Mat2 jxm = jacobian({z.x - h, z.y});
    const Mat2 jyp = jacobian({z.x, z.y + h});
    const Mat2 jym = jacobian({z.x, z.y - h});
    const double s = 0.5 / h;
    return {Vec2{(jxp.a - jxm.a) * s, (jyp.a - jym.a) * s},
            Vec2{(jxp.b - jxm.b) * s, (jyp.b - jym.b) * s},
            Vec2{(jxp.c - jxm.c) * s, (jyp.c - jym.c) * s},
            Vec2{(jxp.d - jxm.d) * s, (jyp.d - jym.d) * s}};
}

namespace {

// search for a strictly forward-invariant axis-aligned box [-L,L] x [-H,H]
// for the quadratic family: needs 1 + H < L, a L^2 + H - 1 < L, |b| L < H
std::optional<Box> henon_trapping_box(double a, double b, double* margin_out) {
    const double ab = std::abs(b);
    std::optional<Box> best;
    double best_margin = 0.0;
    for (int i = 1; i <= 1200; ++i) {
        const double L = 1.0 + i * 1e-3;
        const double H = std::max(2.0 * ab * L, 1e-9);
        const double m1 = L - (1.0 + H);            // right image edge inside
        const double m2 = (1.0 + L) - (a * L * L + H); // left image edge inside
        const double m3 = H - ab * L;               // vertical images inside
        const double margin = std::min(m1, std::min(m2, m3));
        if (margin > best_margin) {
            best_margin = margin;
            best = Box{-L, L, -H, H};
        }
    }
    if (margin_out) *margin_out = best_margin;
    return best;
}

} // namespace

MapFamily henon_family(double a, double b) {
    MapFamily m;
    m.name = "henon";
    m.params = {a, b};
    m.eval = [a, b](Vec2 z) { return Vec2{1.0 - a * z.x * z.x + z.y, b * z.x}; };
    m.jacobian = [a, b](Vec2 z) { return Mat2{-2.0 * a * z.x, 1.0, b, 0.0}; };
    m.jacobian_grad = [a](Vec2) {
        return std::array<Vec2, 4>{Vec2{-2.0 * a, 0.0}, Vec2{0.0, 0.0}, Vec2{0.0, 0.0}, Vec2{0.0, 0.0}};
    };
    m.base_map = [a](double x) { return 1.0 - a * x * x; };
    m.base_deriv = [a](double x) { return -2.0 * a * x; };
    m.base_deriv2 = [a](double) { return -2.0 * a; };
    m.critical_xs = {0.0};

    double margin = 0.0;
    m.trapping_box = henon_trapping_box(a, b, &margin);
    m.trapping_margin = margin;

    // 1-D core of the base dynamics: [f(f(0)), f(0)] = [1 - a, 1] for a >= 1
    if (a >= 1.0) {
        m.base_lo = 1.0 - a;
        m.base_hi = 1.0;
    } else {
        // fall back to a symmetric interval covering the bounded dynamics
        double r = std::max(1.0, std::abs(1.0 - a));
        m.base_lo = -r;
        m.base_hi = std::max(1.0, r);
    }

    if (m.trapping_box) {
        m.working_box = *m.trapping_box;
    } else {
        // bounding region of the bounded part of the dynamics: the 1-D core
        // widened a little, with the matching thin vertical extent
        const double pad = 0.02 * std::max(1.0, m.base_hi - m.base_lo);
        const double xmax = std::max(std::abs(m.base_lo), std::abs(m.base_hi)) + pad;
        const double h = std::max(2.0 * std::abs(b) * xmax, 1e-9);
        m.working_box = Box{m.base_lo - pad, m.base_hi + pad, -h, h};
    }
    return m;
}

std::vector<Vec2> iterate_orbit(const MapFamily& m, Vec2 z0, std::size_t n, double escape_bound) {
    std::vector<Vec2> orbit;
    orbit.reserve(n + 1);
    orbit.push_back(z0);
    Vec2 z = z0;
    for (std::size_t i = 1; i <= n; ++i) {
        z = m.eval(z);
        if (!std::isfinite(z.x) || !std::isfinite(z.y) ||
            std::abs(z.x) > escape_bound || std::abs(z.y) > escape_bound)
            throw OrbitEscape(i);
        orbit.push_back(z);
    }
    return orbit;
}

namespace {

double fd_second(const std::function<double(double)>& f, double x, double h = 1e-5) {
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

double fd_third(const std::function<double(double)>& f, double x, double h = 1e-4) {
    return (f(x + 2 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2 * h)) / (2.0 * h * h * h);
}

// Schwarzian derivative f'''/f' - 1.5 (f''/f')^2
double schwarzian(const MapFamily& m, double x) {
    const double d1 = m.base_deriv(x);
    const double d2 = m.base_deriv2 ? m.base_deriv2(x) : fd_second(m.base_map, x);
    const double d3 = fd_third(m.base_map, x);
    const double r = d2 / d1;
    return d3 / d1 - 1.5 * r * r;
}

} // namespace

MisiurewiczReport misiurewicz_check(const MapFamily& m, std::size_t n_horizon, double tol, int p_max) {
    MisiurewiczReport rep;
    const double lo = m.base_lo, hi = m.base_hi;

    // (1) second derivative at critical points
    rep.crit_nondegenerate = true;
    for (double xc : m.critical_xs) {
        const double f2 = m.base_deriv2 ? m.base_deriv2(xc) : fd_second(m.base_map, xc);
        rep.f2_at_critical.push_back(f2);
        if (std::abs(f2) < 1e-6) rep.crit_nondegenerate = false;
    }

    // (2) Schwarzian on a grid, excluding delta/10 neighborhoods of critical
    // points where f' vanishes
    const int grid_n = 10000;
    const double excl = std::exp(-2.0) / 10.0;
    rep.schwarzian_max = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= grid_n; ++i) {
        const double x = lo + (hi - lo) * i / grid_n;
        bool near_crit = false;
        for (double xc : m.critical_xs)
            if (std::abs(x - xc) < excl) { near_crit = true; break; }
        if (near_crit) continue;
        rep.schwarzian_max = std::max(rep.schwarzian_max, schwarzian(m, x));
    }
    rep.schwarzian_negative = rep.schwarzian_max < 0.0;

    // (3) periodic orbits up to p_max are repelling: locate roots of
    // f^p(x) - x by sign change + bisection, then check |(f^p)'| > 1 + tol
    rep.min_multiplier = std::numeric_limits<double>::infinity();
    rep.periodic_repelling = true;
    std::vector<double> found;
    for (int p = 1; p <= p_max; ++p) {
        auto fp_minus_x = [&](double x) {
            double y = x;
            for (int j = 0; j < p; ++j) y = m.base_map(y);
            return y - x;
        };
        const int n = 20000;
        double prev_x = lo, prev_g = fp_minus_x(lo);
        for (int i = 1; i <= n; ++i) {
            const double x = lo + (hi - lo) * i / n;
            const double g = fp_minus_x(x);
            if (prev_g == 0.0 || (prev_g < 0.0) != (g < 0.0)) {
                double aa = prev_x, bb = x, ga = prev_g;
                for (int it = 0; it < 80; ++it) {
                    const double mid = 0.5 * (aa + bb);
                    const double gm = fp_minus_x(mid);
                    if ((gm < 0.0) == (ga < 0.0)) { aa = mid; ga = gm; } else { bb = mid; }
                }
                const double root = 0.5 * (aa + bb);
                bool dup = false;
                for (double r : found)
                    if (std::abs(r - root) < 1e-7) { dup = true; break; }
                if (!dup) {
                    found.push_back(root);
                    double mult = 1.0, y = root;
                    for (int j = 0; j < p; ++j) { mult *= m.base_deriv(y); y = m.base_map(y); }
                    rep.min_multiplier = std::min(rep.min_multiplier, std::abs(mult));
                    if (std::abs(mult) <= 1.0 + tol) rep.periodic_repelling = false;
                }
            }
            prev_x = x;
            prev_g = g;
        }
    }
    rep.periodic_points_checked = static_cast<int>(found.size());

    // (4) critical orbits stay clear of the critical set
    rep.crit_orbit_far = true;
    for (double xc : m.critical_xs) {
        double x = xc, dmin = std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i <= n_horizon; ++i) {
            x = m.base_map(x);
            for (double c : m.critical_xs) dmin = std::min(dmin, std::abs(x - c));
        }
        rep.crit_orbit_min_dist.push_back(dmin);
        if (dmin < tol) rep.crit_orbit_far = false;
    }
    return rep;
}

NondegeneracyReport nondegeneracy_check(const MapFamily& m) {
    NondegeneracyReport rep;
    rep.pass = true;
    for (double xc : m.critical_xs) {
        // d/dy of the first component = upper-right Jacobian entry
        const double dy = m.jacobian({xc, 0.0}).b;
        rep.dF_dy_at_critical.push_back(dy);
        if (std::abs(dy) < 1e-12) rep.pass = false;
    }
    return rep;
}

double transversality_estimate(const std::function<MapFamily(double)>& family,
                               double a_star, std::size_t n_land, int period, double da) {
    // continuation of the landing point x(a) = f_a^{n_land}(x_c)
    auto land = [&](double a) {
        const MapFamily m = family(a);
        double x = m.critical_xs.at(0);
        for (std::size_t i = 0; i < n_land; ++i) x = m.base_map(x);
        return x;
    };
    // continuation of the periodic point by Newton on f_a^period(x) - x,
    // seeded from the landing point at a_star
    auto periodic = [&](double a, double seed) {
        const MapFamily m = family(a);
        double x = seed;
        for (int it = 0; it < 60; ++it) {
            double y = x, dp = 1.0;
            for (int j = 0; j < period; ++j) { dp *= m.base_deriv(y); y = m.base_map(y); }
            const double g = y - x;
            const double dg = dp - 1.0;
            if (dg == 0.0) break;
            const double step = g / dg;
            x -= step;
            if (std::abs(step) < 1e-14) break;
        }
        return x;
    };
    const double p_seed = land(a_star);
    const double dland = (land(a_star + da) - land(a_star - da)) / (2.0 * da);
    const double dper = (periodic(a_star + da, p_seed) - periodic(a_star - da, p_seed)) / (2.0 * da);
    return dland - dper;
}

} // namespace af
