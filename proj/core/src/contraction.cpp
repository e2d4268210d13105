#include "af/contraction.hpp"

#include <algorithm>
#include <cmath>

#include "af/curves.hpp"

namespace af {
namespace {

struct Sv {
    double lmin = 0.0;
    double lmax = 0.0;
    bool degenerate = true;
};

// singular values of M; lmin computed as |det|/lmax to avoid the cancellation
// in (h - sqrt(h^2 - 4 det^2))/2 when the contraction is strong
Sv singular_values(const Mat2& M) {
    const double h = M.a * M.a + M.b * M.b + M.c * M.c + M.d * M.d;
    const double dd = M.det();
    double disc = h * h - 4.0 * dd * dd;
    if (disc < 0.0) disc = 0.0;
    Sv s;
    s.lmax = std::sqrt(0.5 * (h + std::sqrt(disc)));
    s.lmin = s.lmax > 0.0 ? std::abs(dd) / s.lmax : 0.0;
    s.degenerate = (s.lmax - s.lmin) <= 1e-12 * s.lmax; // catches the zero matrix too
    return s;
}

// unit eigenvector of M^T M for the eigenvalue lmin^2, canonical sign:
// nonnegative first component, ties broken by nonnegative second
Vec2 contracted_vector(const Mat2& M, double lmin) {
    const double p = M.a * M.a + M.c * M.c;   // ||first column||^2
    const double q = M.b * M.b + M.d * M.d;   // ||second column||^2
    const double r = M.a * M.b + M.c * M.d;   // column inner product
    const double l2 = lmin * lmin;
    const Vec2 v1{q - l2, -r};
    const Vec2 v2{-r, p - l2};
    Vec2 v = v1.norm2() >= v2.norm2() ? v1 : v2;
    v = v.normalized();
    if (v.x < 0.0 || (v.x == 0.0 && v.y < 0.0)) v = -v;
    return v;
}

} // namespace

ContractionResult most_contracted(const Mat2& M) {
    const Sv s = singular_values(M);
    if (s.degenerate) throw DegenerateMatrix{};
    ContractionResult r;
    r.e = contracted_vector(M, s.lmin);
    r.lambda_min = s.lmin;
    r.lambda_max = s.lmax;
    r.image_e = M * r.e;
    return r;
}

OrbitContraction e_n_along_orbit(const MapFamily& m, Vec2 z0, std::size_t n,
                                 double kappa_check) {
    OrbitContraction out;
    if (n == 0) return out;
    out.steps.reserve(n);
    out.defects.reserve(n > 1 ? n - 1 : 0);

    const std::vector<Vec2> orbit = iterate_orbit(m, z0, n - 1);
    Mat2 P = Mat2::identity(); // scaled accumulated product
    double log_scale = 0.0;
    const double log_kappa = kappa_check > 0.0 ? std::log(kappa_check) : 0.0;
    double min_rate = std::numeric_limits<double>::infinity();
    Vec2 prev_e{1.0, 0.0};
    bool have_prev = false;

    for (std::size_t i = 1; i <= n; ++i) {
        P = m.jacobian(orbit[i - 1]) * P;
        if (i % 16 == 0) {
            const double s = P.frobenius();
            if (s > 0.0 && std::isfinite(s)) {
                P = P * (1.0 / s);
                log_scale += std::log(s);
            }
        }
        const Sv sv = singular_values(P);
        OrbitContractionStep step;
        step.log_lambda_min = std::log(sv.lmin) + log_scale; // -inf when singular
        step.log_lambda_max = std::log(sv.lmax) + log_scale;
        if (kappa_check > 0.0 && step.log_lambda_max < static_cast<double>(i) * log_kappa)
            throw HyperbolicityLost{i};
        min_rate = std::min(min_rate, step.log_lambda_max / static_cast<double>(i));
        if (sv.degenerate) {
            step.degenerate = true;
            step.e = prev_e; // direction undefined; carry the previous one
        } else {
            step.e = contracted_vector(P, sv.lmin);
        }
        if (have_prev) out.defects.push_back(std::abs(cross(step.e, prev_e)));
        prev_e = step.e;
        have_prev = true;
        out.steps.push_back(step);
    }
    out.kappa_measured = std::exp(min_rate);
    return out;
}

Vec2 e_field(const MapFamily& m, Vec2 z, std::size_t order) {
    Mat2 P = Mat2::identity();
    Vec2 w = z;
    for (std::size_t i = 0; i < order; ++i) {
        P = m.jacobian(w) * P;
        w = m.eval(w);
        if (!std::isfinite(w.x) || !std::isfinite(w.y)) throw OrbitEscape{i + 1};
        const double s = P.frobenius();
        if (s > 0.0) P = P * (1.0 / s); // only the direction matters
    }
    const Sv sv = singular_values(P);
    if (sv.degenerate) throw DegenerateMatrix{};
    return contracted_vector(P, sv.lmin);
}

SampledCurve stable_curve(const MapFamily& m, Vec2 z0, std::size_t order,
                          double max_len, double step) {
    if (step <= 0.0) {
        const double ab = std::abs(m.params.b);
        step = ab > 0.0 ? std::min(1e-3, ab) : 1e-3;
    }
    const Box clip = m.working_box.inflated(0.5 * m.working_box.width(),
                                            std::max(0.5 * m.working_box.height(), 0.1));

    // trace one half: fixed-step midpoint rule on the sign-coherent field
    const auto trace_half = [&](Vec2 dir0) {
        std::vector<Vec2> pts;
        std::vector<Vec2> dirs;
        Vec2 z = z0;
        Vec2 ref = dir0;
        double len = 0.0;
        while (len + step <= 0.5 * max_len) {
            Vec2 k1, k2;
            try {
                k1 = e_field(m, z, order);
                if (dot(k1, ref) < 0.0) k1 = -k1;
                k2 = e_field(m, z + (0.5 * step) * k1, order);
                if (dot(k2, k1) < 0.0) k2 = -k2;
            } catch (const Error&) {
                break; // field degenerate or orbit blew up: truncate here
            }
            z += step * k2;
            if (!clip.contains(z)) break;
            pts.push_back(z);
            dirs.push_back(k2);
            ref = k2;
            len += step;
        }
        return std::pair{pts, dirs};
    };

    const Vec2 e0 = e_field(m, z0, order);
    auto [fwd, fdirs] = trace_half(e0);
    auto [bwd, bdirs] = trace_half(-e0);

    SampledCurve c;
    c.points.reserve(fwd.size() + bwd.size() + 1);
    c.tangents.reserve(c.points.capacity());
    for (std::size_t i = bwd.size(); i-- > 0;) {
        c.points.push_back(bwd[i]);
        c.tangents.push_back(-bdirs[i]); // orient the whole curve consistently
    }
    c.points.push_back(z0);
    c.tangents.push_back(e0);
    for (std::size_t i = 0; i < fwd.size(); ++i) {
        c.points.push_back(fwd[i]);
        c.tangents.push_back(fdirs[i]);
    }
    c.params.resize(c.size());
    for (std::size_t i = 0; i < c.size(); ++i)
        c.params[i] = c.size() > 1 ? static_cast<double>(i) / (c.size() - 1) : 0.0;
    c.curvatures = curvature_fd(c);
    return c;
}

std::vector<double> co_iteration_distances(const MapFamily& m, Vec2 z, Vec2 z0,
                                           std::size_t n) {
    std::vector<double> d;
    d.reserve(n + 1);
    Vec2 u = z, v = z0;
    for (std::size_t i = 0; i <= n; ++i) {
        d.push_back(distance(u, v));
        if (i == n) break;
        u = m.eval(u);
        v = m.eval(v);
        if (!std::isfinite(u.x) || !std::isfinite(u.y) ||
            !std::isfinite(v.x) || !std::isfinite(v.y))
            throw OrbitEscape{i + 1};
    }
    return d;
}

} // namespace af
