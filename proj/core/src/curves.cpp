#include "af/curves.hpp"

#include <algorithm>
#include <cmath>

#include "af/io.hpp"

namespace af {

double SampledCurve::length() const {
    double s = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) s += distance(points[i - 1], points[i]);
    return s;
}

namespace {

// index of the segment [i, i+1] containing parameter t (clamped)
std::size_t segment_of(const std::vector<double>& params, double t) {
    if (params.size() < 2) return 0;
    auto it = std::upper_bound(params.begin(), params.end(), t);
    std::size_t i = it == params.begin() ? 0 : static_cast<std::size_t>(it - params.begin()) - 1;
    return std::min(i, params.size() - 2);
}

double seg_fraction(const std::vector<double>& params, std::size_t i, double t) {
    const double d = params[i + 1] - params[i];
    if (d <= 0.0) return 0.0;
    return std::clamp((t - params[i]) / d, 0.0, 1.0);
}

} // namespace

Vec2 SampledCurve::at_param(double t) const {
    if (points.empty()) return {};
    if (points.size() == 1 || params.size() != points.size()) return points.front();
    const std::size_t i = segment_of(params, t);
    const double u = seg_fraction(params, i, t);
    return points[i] * (1.0 - u) + points[i + 1] * u;
}

Vec2 SampledCurve::tangent_at_param(double t) const {
    if (points.size() < 2) return {1.0, 0.0};
    const std::size_t i = params.size() == points.size() ? segment_of(params, t) : 0;
    if (tangents.size() == points.size()) {
        const double u = seg_fraction(params, i, t);
        const Vec2 v = tangents[i] * (1.0 - u) + tangents[i + 1] * u;
        const double n = v.norm();
        if (n > 0.0) return v / n;
    }
    const Vec2 d = points[i + 1] - points[i];
    const double n = d.norm();
    return n > 0.0 ? d / n : Vec2{1.0, 0.0};
}

double SampledCurve::curvature_at_param(double t) const {
    if (curvatures.size() != points.size() || params.size() != points.size() || points.size() < 2)
        return 0.0;
    const std::size_t i = segment_of(params, t);
    const double u = seg_fraction(params, i, t);
    return curvatures[i] * (1.0 - u) + curvatures[i + 1] * u;
}

SampledCurve make_segment(Vec2 p0, Vec2 p1, std::size_t n) {
    if (n < 2) n = 2;
    SampledCurve c;
    c.points.reserve(n);
    c.tangents.reserve(n);
    c.curvatures.assign(n, 0.0);
    c.params.reserve(n);
    Vec2 d = p1 - p0;
    const double len = d.norm();
    d = len > 0.0 ? d / len : Vec2{1.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(n - 1);
        c.points.push_back(p0 * (1.0 - t) + p1 * t);
        c.tangents.push_back(d);
        c.params.push_back(t);
    }
    return c;
}

namespace {

// full differential state of one node during evolution: position, unit
// tangent, and a second-derivative vector scaled so that the signed curvature
// is cross(v, w) exactly (invariant under the joint rescale v/s, w/s^2)
struct Node {
    double t = 0.0;
    Vec2 z;
    Vec2 v;
    Vec2 w;
    bool alive = true;
};

Node source_node(const SampledCurve& c, double t) {
    Node nd;
    nd.t = t;
    nd.z = c.at_param(t);
    nd.v = c.tangent_at_param(t);
    const double k = c.curvature_at_param(t);
    nd.w = k * nd.v.perp();
    return nd;
}

// push a node through `steps` applications of the map; freezes (alive=false)
// at the last in-clip state if the orbit leaves the clip region
void push_node(const MapFamily& m, Node& nd, std::size_t steps, const Box& clip) {
    for (std::size_t s = 0; s < steps && nd.alive; ++s) {
        const Mat2 J = m.jacobian(nd.z);
        const auto G = m.jac_grad(nd.z);
        const Mat2 X{dot(G[0], nd.v), dot(G[1], nd.v), dot(G[2], nd.v), dot(G[3], nd.v)};
        const Vec2 z1 = m.eval(nd.z);
        const Vec2 v1 = J * nd.v;
        const Vec2 w1 = J * nd.w + X * nd.v;
        const double n1 = v1.norm();
        if (!std::isfinite(z1.x) || !std::isfinite(z1.y) || !clip.contains(z1) ||
            n1 < 1e-300) {
            nd.alive = false;
            break;
        }
        nd.z = z1;
        nd.v = v1 / n1;
        nd.w = w1 / (n1 * n1);
    }
}

} // namespace

Box default_evolve_clip(const MapFamily& m) {
    const Box& wb = m.working_box;
    return wb.inflated(0.5 * std::max(wb.width(), 1.0),
                       0.5 * std::max(wb.height(), 1.0));
}

SampledCurve evolve_curve(const MapFamily& m, const SampledCurve& c, std::size_t steps,
                          const EvolveOptions& opts) {
    if (steps == 0) return c; // zero applications: the identical curve

    SampledCurve out;
    out.closed = c.closed;
    out.generation = c.generation + static_cast<int>(steps);
    if (c.points.empty()) return out;

    const Box clip = opts.clip_box ? *opts.clip_box : default_evolve_clip(m);

    // a working copy of the source with params guaranteed present and sorted
    SampledCurve src = c;
    if (src.params.size() != src.points.size()) {
        src.params.resize(src.points.size());
        const double denom = src.points.size() > 1
                                 ? static_cast<double>(src.points.size() - 1)
                                 : 1.0;
        for (std::size_t i = 0; i < src.points.size(); ++i)
            src.params[i] = static_cast<double>(i) / denom;
    }

    const auto make = [&](double t) {
        Node nd = source_node(src, t);
        push_node(m, nd, steps, clip);
        return nd;
    };

    std::size_t count = src.points.size();
    const double cos_tol = std::cos(opts.theta_max_deg * 3.14159265358979323846 / 180.0);

    const auto pair_ok = [&](const Node& A, const Node& B) {
        const double gap = B.t - A.t;
        if (gap <= opts.t_resolution) return true;
        if (!A.alive || !B.alive)
            return A.alive == B.alive; // resolve the dead/alive boundary only
        if (distance(A.z, B.z) > opts.h_max) return false;
        if (dot(A.v, B.v) < cos_tol) return false;
        return true;
    };

    std::vector<Node> nodes;
    nodes.reserve(count * 2);
    nodes.push_back(make(src.params.front()));
    for (std::size_t i = 1; i < src.points.size(); ++i) {
        std::vector<Node> stack;
        stack.push_back(make(src.params[i]));
        while (!stack.empty()) {
            const Node& cur = nodes.back();
            Node& top = stack.back();
            const double tm = 0.5 * (cur.t + top.t);
            if (pair_ok(cur, top) || !(tm > cur.t && tm < top.t)) {
                nodes.push_back(std::move(top));
                stack.pop_back();
            } else {
                if (++count > opts.max_points)
                    throw RefinementBudgetExceeded{opts.max_points};
                stack.push_back(make(tm));
            }
        }
    }

    out.points.reserve(nodes.size());
    out.tangents.reserve(nodes.size());
    out.curvatures.reserve(nodes.size());
    out.params.reserve(nodes.size());
    out.alive.reserve(nodes.size());
    for (const Node& nd : nodes) {
        out.points.push_back(nd.z);
        out.tangents.push_back(nd.v);
        out.curvatures.push_back(cross(nd.v, nd.w));
        out.params.push_back(nd.t);
        out.alive.push_back(nd.alive ? 1 : 0);
    }

    // markers travel as exact orbit images of their source nodes; the source
    // parameter survives refinement unchanged, so it identifies the new index
    for (const Marker& mk : c.markers) {
        if (mk.index >= src.params.size()) continue;
        const double t = src.params[mk.index];
        const auto it = std::lower_bound(out.params.begin(), out.params.end(), t);
        if (it != out.params.end() && *it == t)
            out.markers.push_back({static_cast<std::size_t>(it - out.params.begin()), mk.label});
    }
    return out;
}

CurvatureRecursionResult curvature_recursion(const MapFamily& m, const SampledCurve& c,
                                             double K_bound) {
    CurvatureRecursionResult r;
    const std::size_t n = c.points.size();
    r.pushed.assign(n, 0.0);
    r.bound.assign(n, 0.0);
    r.flagged.assign(n, 0);
    double K = K_bound;
    if (K <= 0.0) K = m.name == "henon" ? 2.0 * std::abs(m.params.a) : 10.0;
    const double babs = std::abs(m.params.b);

    for (std::size_t i = 0; i < n; ++i) {
        Vec2 v = i < c.tangents.size() ? c.tangents[i] : Vec2{1.0, 0.0};
        const double vn = v.norm();
        v = vn > 0.0 ? v / vn : Vec2{1.0, 0.0};
        const double k = i < c.curvatures.size() ? c.curvatures[i] : 0.0;
        const Vec2 w = k * v.perp();

        const Mat2 J = m.jacobian(c.points[i]);
        const auto G = m.jac_grad(c.points[i]);
        const Mat2 X{dot(G[0], v), dot(G[1], v), dot(G[2], v), dot(G[3], v)};
        const Vec2 v1 = J * v;
        const Vec2 w1 = J * w + X * v;
        const double n1 = v1.norm();
        if (n1 < 1e-12) {
            r.flagged[i] = 1;
            continue;
        }
        const double n13 = n1 * n1 * n1;
        r.pushed[i] = cross(v1, w1) / n13;
        r.bound[i] = (std::abs(J.det()) * std::abs(k) + K * babs) / n13;
    }
    return r;
}

std::vector<double> curvature_fd(const SampledCurve& c) {
    const std::size_t n = c.points.size();
    std::vector<double> k(n, 0.0);
    if (n < 3) return k;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const Vec2 u = c.points[i] - c.points[i - 1];
        const Vec2 v = c.points[i + 1] - c.points[i];
        const Vec2 w = c.points[i + 1] - c.points[i - 1];
        const double denom = u.norm() * v.norm() * w.norm();
        k[i] = denom > 0.0 ? 2.0 * cross(u, v) / denom : 0.0;
    }
    k[0] = k[1];
    k[n - 1] = k[n - 2];
    return k;
}

double k_delta_effective(const SystemConfig& cfg) {
    if (cfg.k_delta > 0.0) return cfg.k_delta;
    return 10.0 / (cfg.delta * cfg.delta * cfg.delta);
}

C2bReport c2b_check(const SampledCurve& c, const SystemConfig& cfg, double b) {
    C2bReport r;
    r.threshold = k_delta_effective(cfg) * std::abs(b);
    for (std::size_t i = 0; i < c.tangents.size(); ++i) {
        if (!c.alive_at(i)) continue;
        r.max_slope = std::max(r.max_slope, slope_of(c.tangents[i]));
    }
    for (std::size_t i = 0; i < c.curvatures.size(); ++i) {
        if (!c.alive_at(i)) continue;
        r.max_curvature = std::max(r.max_curvature, std::abs(c.curvatures[i]));
    }
    r.is_c2b = r.max_slope <= r.threshold && r.max_curvature <= r.threshold;
    return r;
}

BoundarySet boundary_evolution(const MapFamily& m, std::size_t n, const EvolveOptions& opts,
                               MarkerProvider markers, void* marker_ctx) {
    BoundarySet bs;
    bs.from_trapping_box = m.has_trapping_box();
    const Box box = m.trapping_box ? *m.trapping_box : m.working_box;

    const std::size_t n0 =
        std::max<std::size_t>(33, std::min<std::size_t>(1025,
            static_cast<std::size_t>(box.width() / std::max(opts.h_max, 1e-12)) + 2));
    SampledCurve top0 = make_segment({box.xlo, box.yhi}, {box.xhi, box.yhi}, n0);
    SampledCurve bot0 = make_segment({box.xlo, box.ylo}, {box.xhi, box.ylo}, n0);

    bs.top.push_back(top0);
    bs.bottom.push_back(bot0);
    for (std::size_t k = 1; k <= n; ++k) {
        // always re-evolve from generation 0 so refinement lands every node
        // exactly on the image curve (no compounding interpolation error)
        SampledCurve tk = evolve_curve(m, top0, k, opts);
        SampledCurve bk = evolve_curve(m, bot0, k, opts);
        if (markers) {
            for (auto& [t, label] : markers(tk, static_cast<int>(k), marker_ctx)) {
                const auto it = std::lower_bound(tk.params.begin(), tk.params.end(), t);
                if (it != tk.params.end())
                    tk.markers.push_back(
                        {static_cast<std::size_t>(it - tk.params.begin()), label});
            }
            for (auto& [t, label] : markers(bk, static_cast<int>(k), marker_ctx)) {
                const auto it = std::lower_bound(bk.params.begin(), bk.params.end(), t);
                if (it != bk.params.end())
                    bk.markers.push_back(
                        {static_cast<std::size_t>(it - bk.params.begin()), label});
            }
        }
        bs.top.push_back(std::move(tk));
        bs.bottom.push_back(std::move(bk));
    }
    return bs;
}

void write_curve_csv(const SampledCurve& c, const std::string& path) {
    std::string out = "n,idx,x,y,tx,ty,curvature,marker_label\n";
    std::vector<std::string> labels(c.points.size());
    for (const Marker& mk : c.markers)
        if (mk.index < labels.size()) labels[mk.index] = mk.label;
    for (std::size_t i = 0; i < c.points.size(); ++i) {
        const Vec2 t = i < c.tangents.size() ? c.tangents[i] : Vec2{};
        const double k = i < c.curvatures.size() ? c.curvatures[i] : 0.0;
        out += io::csv_row({io::fmt_i(c.generation), io::fmt_u(i), io::fmt_g17(c.points[i].x),
                            io::fmt_g17(c.points[i].y), io::fmt_g17(t.x), io::fmt_g17(t.y),
                            io::fmt_g17(k), labels[i]});
    }
    io::write_text_file(path, out);
}

} // namespace af
