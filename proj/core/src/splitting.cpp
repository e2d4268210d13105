#include "af/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "af/contraction.hpp"
#include "af/curves.hpp"
#include "af/errors.hpp"
#include "af/io.hpp"

namespace af {

CriticalDistance level0_distance(const MapFamily& m) {
    std::vector<double> xs = m.critical_xs;
    return [xs](Vec2 z) {
        double d = std::numeric_limits<double>::infinity();
        for (double xc : xs) d = std::min(d, std::abs(z.x - xc));
        return d;
    };
}

std::size_t fold_period(double d_c, double b) {
    const double ab = std::abs(b);
    if (ab <= 0.0 || ab >= 1.0 || d_c <= 0.0) return 1;
    const double ell = 2.0 * std::log(d_c) / std::log(ab);
    if (!(ell > 0.0)) return 1;
    if (ell > 1e6) return 1000000;
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(ell)));
}

namespace {

// direction + log-norm representation of a pushed vector
struct LogVec {
    Vec2 dir;       // unit
    double log_norm;

    static LogVec from(Vec2 v) {
        const double n = v.norm();
        if (n <= 0.0) return {{0.0, 0.0}, -std::numeric_limits<double>::infinity()};
        return {v / n, std::log(n)};
    }
    void push(const Mat2& J) {
        const Vec2 u = J * dir;
        const double n = u.norm();
        if (n <= 0.0) {
            dir = {0.0, 0.0};
            log_norm = -std::numeric_limits<double>::infinity();
            return;
        }
        dir = u / n;
        log_norm += std::log(n);
    }
    // this + other, carried out at the larger scale
    LogVec add(const LogVec& o) const {
        const double L = std::max(log_norm, o.log_norm);
        if (!std::isfinite(L)) return *this;
        const Vec2 s = dir * std::exp(log_norm - L) + o.dir * std::exp(o.log_norm - L);
        const double n = s.norm();
        if (n <= 0.0) return {{0.0, 0.0}, -std::numeric_limits<double>::infinity()};
        return {s / n, L + std::log(n)};
    }
};

struct Pending {
    LogVec E;             // contracted component, pushed along the orbit
    std::size_t t_split;
    std::size_t end;      // scheduled rejoin step (may be delayed to nest)
    std::size_t event_idx;
};

} // namespace

SplitTrace run_splitting(const MapFamily& m, Vec2 z0, Vec2 w0, std::size_t n,
                         const SystemConfig& cfg, const CriticalDistance& dist) {
    const CriticalDistance d_of = dist ? dist : level0_distance(m);
    SplitTrace tr;
    tr.steps.reserve(n + 1);

    Vec2 z = z0;
    LogVec w = LogVec::from(w0);
    LogVec ws = w;
    std::vector<Pending> stack;
    bool prev_in = false;

    const double escape_bound = 1e6;
    for (std::size_t i = 0; i <= n; ++i) {
        if (!std::isfinite(z.x) || !std::isfinite(z.y) ||
            std::abs(z.x) > escape_bound || std::abs(z.y) > escape_bound) {
            tr.orbit_escaped = true;
            tr.escape_index = i;
            break;
        }

        // rejoins scheduled for this step, innermost first; the nesting
        // invariant (ends non-increasing toward the stack top) guarantees no
        // deeper split is due while an inner one is still open
        while (!stack.empty() && stack.back().end <= i) {
            ws = ws.add(stack.back().E);
            tr.events[stack.back().event_idx].t_rejoin = i;
            tr.events[stack.back().event_idx].rejoined = true;
            ++tr.rejoins;
            stack.pop_back();
        }

        const double dc = d_of(z);
        const bool inside = dc < cfg.delta;

        if (inside && !prev_in) {
            // entry into the critical neighborhood: split the current w*
            bool split_done = false;
            const std::size_t ell = fold_period(dc, m.params.b);
            try {
                const Vec2 e = e_field(m, z, ell);
                if (std::abs(e.x) > 1e-12) {
                    const double beta = ws.dir.x / e.x; // beta e + alpha (0,1) = ws.dir
                    const double alpha = ws.dir.y - beta * e.y;
                    LogVec Ehat{e, ws.log_norm + std::log(std::abs(beta))};
                    if (beta < 0.0) Ehat.dir = -Ehat.dir;
                    LogVec what{{0.0, alpha >= 0.0 ? 1.0 : -1.0},
                                ws.log_norm + std::log(std::abs(alpha))};
                    if (std::isfinite(Ehat.log_norm) && std::isfinite(what.log_norm)) {
                        SplitEvent ev;
                        ev.t_split = i;
                        ev.ell = ell;
                        ev.d_c = dc;
                        tr.events.push_back(ev);
                        // keep fold intervals nested: a new interval reaching
                        // past an enclosing one drags the outer ends with it
                        const std::size_t end = i + ell;
                        for (std::size_t s = stack.size(); s-- > 0;) {
                            if (stack[s].end >= end) break;
                            stack[s].end = end;
                            ++tr.straddle_adjustments;
                        }
                        stack.push_back({Ehat, i, end, tr.events.size() - 1});
                        ws = what;
                        ++tr.splits;
                        split_done = true;
                    }
                }
            } catch (const Error&) {
                // contracted direction unavailable here (degenerate product or
                // the forward orbit escapes before ell steps)
            }
            if (!split_done) ++tr.fallbacks;
        }
        prev_in = inside;

        SplitStep st;
        st.z = z;
        st.w_dir = w.dir;
        st.ws_dir = ws.dir;
        st.log_norm_w = w.log_norm;
        st.log_norm_ws = ws.log_norm;
        st.in_C0 = inside;
        st.fold_depth = static_cast<int>(stack.size());
        tr.steps.push_back(st);

        if (i == n) break;
        const Mat2 J = m.jacobian(z);
        w.push(J);
        ws.push(J);
        for (Pending& p : stack) p.E.push(J);
        z = m.eval(z);
    }
    return tr;
}

CorrectSplittingReport correct_splitting_check(const SplitTrace& trace,
                                               const SystemConfig& cfg, double b) {
    CorrectSplittingReport r;
    r.slope_threshold = k_delta_effective(cfg) * std::abs(b);
    bool any_outside = false;
    for (const SplitStep& st : trace.steps) {
        if (st.fold_depth != 0) continue;
        any_outside = true;
        Vec2 a = st.w_dir, c = st.ws_dir;
        if (dot(a, c) < 0.0) c = -c; // directions are sign-ambiguous
        r.max_dir_diff_outside = std::max(r.max_dir_diff_outside, (a - c).norm());
        if (std::isfinite(st.log_norm_w) && std::isfinite(st.log_norm_ws))
            r.max_log_diff_outside =
                std::max(r.max_log_diff_outside, std::abs(st.log_norm_w - st.log_norm_ws));
        if (!st.in_C0)
            r.max_slope_outside = std::max(r.max_slope_outside, slope_of(st.ws_dir));
    }
    r.recombines = any_outside && r.max_dir_diff_outside <= cfg.eps0 &&
                   r.max_log_diff_outside <= cfg.eps0;
    r.b_horizontal = any_outside && r.max_slope_outside <= std::max(r.slope_threshold, 1e-12);
    r.pass = r.recombines && r.b_horizontal;
    return r;
}

AdjustedIntervals adjust_nested(std::vector<std::pair<std::size_t, std::size_t>> intervals) {
    AdjustedIntervals out;
    std::sort(intervals.begin(), intervals.end());
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        auto [s, e] = intervals[i];
        for (std::size_t j = i + 1; j < intervals.size(); ++j) {
            const auto [s2, e2] = intervals[j];
            if (s2 >= e) break;          // later intervals start past this one
            if (e2 > e) {                // straddle: extend to contain it
                e = e2;
                ++out.adjustments;
            }
        }
        intervals[i].second = e;
        out.intervals.push_back({s, e});
    }
    return out;
}

void write_split_csv(const SplitTrace& t, const std::string& path) {
    std::string out = "i,x,y,wx,wy,wsx,wsy,log_norm_ws,in_C0,fold_depth\n";
    for (std::size_t i = 0; i < t.steps.size(); ++i) {
        const SplitStep& st = t.steps[i];
        out += io::csv_row({io::fmt_u(i), io::fmt_g17(st.z.x), io::fmt_g17(st.z.y),
                            io::fmt_g17(st.w_dir.x), io::fmt_g17(st.w_dir.y),
                            io::fmt_g17(st.ws_dir.x), io::fmt_g17(st.ws_dir.y),
                            io::fmt_g17(st.log_norm_ws), st.in_C0 ? "1" : "0",
                            io::fmt_i(st.fold_depth)});
    }
    io::write_text_file(path, out);
}

} // namespace af
