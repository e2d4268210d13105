#include "af/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <thread>
#include <unordered_set>

#include "af/curves.hpp"
#include "af/io.hpp"

namespace af {

Address address_of(const MapFamily& m, double x, double tie_eps) {
    const std::vector<double>& cs = m.critical_xs;
    const int r = static_cast<int>(cs.size());
    // interval right of critical point i carries label i; the leftmost
    // interval wraps to r+1
    const auto left_of = [&](int i) { return i > 1 ? i - 1 : r + 1; };
    for (int i = 0; i < r; ++i)
        if (std::abs(x - cs[i]) <= tie_eps) return {i + 1, left_of(i + 1)};
    int lab = r + 1;
    for (int i = r; i-- > 0;)
        if (x > cs[i]) {
            lab = i + 1;
            break;
        }
    return {lab, 0};
}

std::vector<int> itinerary(const MapFamily& m, Vec2 z0, std::size_t n, double tie_eps) {
    std::vector<int> out;
    out.reserve(n);
    Vec2 z = z0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(z.x) || !std::isfinite(z.y) || std::abs(z.x) > 1e6)
            throw OrbitEscape{i};
        out.push_back(address_of(m, z.x, tie_eps).label);
        z = m.eval(z);
    }
    return out;
}

std::size_t count_blocks_in_sequences(const std::vector<std::vector<int>>& seqs,
                                      std::size_t n) {
    if (n == 0) return 0;
    std::unordered_set<std::string> words;
    std::string w(n, '\0');
    for (const std::vector<int>& s : seqs) {
        if (s.size() < n) continue;
        for (std::size_t i = 0; i + n <= s.size(); ++i) {
            for (std::size_t k = 0; k < n; ++k)
                w[k] = static_cast<char>(s[i + k]);
            words.insert(w);
        }
    }
    return words.size();
}

std::uint64_t sft_word_count(const std::vector<std::vector<int>>& adjacency,
                             std::size_t n) {
    const std::size_t r = adjacency.size();
    if (n == 0 || r == 0) return 0;
    std::vector<std::uint64_t> v(r, 1); // words of length 1 ending in each state
    for (std::size_t step = 1; step < n; ++step) {
        std::vector<std::uint64_t> nv(r, 0);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j)
                if (adjacency[i][j]) nv[j] += v[i];
        v.swap(nv);
    }
    std::uint64_t total = 0;
    for (std::uint64_t x : v) total += x;
    return total;
}

namespace {

struct LabeledPoint {
    int lab = 0;       // strict label (right side on a tie)
    int lo = 0, hi = 0; // the two labels adjacent to the nearest critical point
    double dist = 0.0;  // distance to the nearest critical x
};

struct Sample {
    std::vector<std::vector<LabeledPoint>> segments;
    std::size_t escapes = 0;
};

LabeledPoint label_point(const MapFamily& m, double x, double tie_eps) {
    LabeledPoint p;
    const Address a = address_of(m, x, tie_eps);
    p.lab = a.label;
    const std::vector<double>& cs = m.critical_xs;
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0;
    for (std::size_t i = 0; i < cs.size(); ++i)
        if (std::abs(x - cs[i]) < best) {
            best = std::abs(x - cs[i]);
            bi = i;
        }
    p.dist = best;
    // labels flanking critical point bi (1-based): right side carries bi+1,
    // left side the wrapped predecessor
    p.lo = static_cast<int>(bi) + 1;
    p.hi = bi > 0 ? static_cast<int>(bi)
                  : static_cast<int>(cs.size()) + 1;
    return p;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// One recorded segment per seed index; each seed owns an independent RNG
// stream so the result is the same for every thread count.
Sample sample_orbits(const MapFamily& m, const SymbolSampling& s) {
    const Box box = m.trapping_box ? *m.trapping_box : m.working_box;
    const double bound = 1e6;

    std::vector<std::vector<LabeledPoint>> per_seed(s.n_seeds);
    std::vector<std::size_t> escapes_per_seed(s.n_seeds, 0);
    const auto run_seed = [&](std::size_t seed_i) {
        std::mt19937_64 rng(splitmix64(s.seed + 0x1000 * seed_i));
        std::uniform_real_distribution<double> ux(box.xlo, box.xhi);
        std::uniform_real_distribution<double> uy(box.ylo, box.yhi);
        for (std::size_t attempt = 0; attempt <= s.max_restarts; ++attempt) {
            Vec2 z{ux(rng), uy(rng)};
            bool burned = true;
            for (std::size_t i = 0; i < s.burn_in; ++i) {
                z = m.eval(z);
                if (!std::isfinite(z.x) || !std::isfinite(z.y) || std::abs(z.x) > bound) {
                    burned = false;
                    break;
                }
            }
            if (!burned) {
                ++escapes_per_seed[seed_i];
                continue;
            }
            std::vector<LabeledPoint> seg;
            seg.reserve(s.orbit_len);
            for (std::size_t i = 0; i < s.orbit_len; ++i) {
                seg.push_back(label_point(m, z.x, s.tie_eps));
                z = m.eval(z);
                if (!std::isfinite(z.x) || !std::isfinite(z.y) || std::abs(z.x) > bound) {
                    ++escapes_per_seed[seed_i];
                    break;
                }
            }
            per_seed[seed_i] = std::move(seg);
            break;
        }
    };

    const std::size_t nt = std::max<std::size_t>(1, std::min(s.threads, s.n_seeds));
    if (nt <= 1) {
        for (std::size_t i = 0; i < s.n_seeds; ++i) run_seed(i);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nt);
        for (std::size_t t = 0; t < nt; ++t)
            pool.emplace_back([&, t]() {
                for (std::size_t i = t; i < s.n_seeds; i += nt) run_seed(i);
            });
        for (std::thread& th : pool) th.join();
    }

    Sample out;
    for (std::size_t i = 0; i < s.n_seeds; ++i) {
        out.escapes += escapes_per_seed[i];
        if (!per_seed[i].empty()) out.segments.push_back(std::move(per_seed[i]));
    }
    return out;
}

} // namespace

BlockCounts count_blocks_both(const MapFamily& m, std::size_t n_max,
                              const SymbolSampling& s) {
    BlockCounts bc;
    const Sample sample = sample_orbits(m, s);
    bc.segments = sample.segments.size();
    bc.escapes = sample.escapes;
    bc.strict.assign(n_max, 0);
    bc.fuzzy.assign(n_max, 0);
    const double babs = std::abs(m.params.b);

    // strict counting on the resolved labels
    std::vector<std::vector<int>> strict_seqs;
    strict_seqs.reserve(sample.segments.size());
    for (const auto& seg : sample.segments) {
        std::vector<int> q;
        q.reserve(seg.size());
        for (const LabeledPoint& p : seg) q.push_back(p.lab);
        strict_seqs.push_back(std::move(q));
    }
    for (std::size_t n = 1; n <= n_max; ++n)
        bc.strict[n - 1] = count_blocks_in_sequences(strict_seqs, n);

    // fuzzy counting: points close to a critical x branch into both labels
    for (std::size_t n = 1; n <= n_max; ++n) {
        const double width =
            std::max(s.tie_eps, babs > 0.0
                                    ? std::pow(babs, static_cast<double>(n) / 4.0)
                                    : 0.0);
        std::unordered_set<std::string> words;
        std::string w(n, '\0');
        for (const auto& seg : sample.segments) {
            if (seg.size() < n) continue;
            for (std::size_t i = 0; i + n <= seg.size(); ++i) {
                // depth-first over the ambiguous positions of this window
                std::size_t produced = 0;
                const std::function<void(std::size_t)> rec = [&](std::size_t k) {
                    if (produced >= s.branch_cap) return;
                    if (k == n) {
                        words.insert(w);
                        ++produced;
                        return;
                    }
                    const LabeledPoint& p = seg[i + k];
                    if (p.dist <= width) {
                        w[k] = static_cast<char>(p.lo);
                        rec(k + 1);
                        w[k] = static_cast<char>(p.hi);
                        rec(k + 1);
                    } else {
                        w[k] = static_cast<char>(p.lab);
                        rec(k + 1);
                    }
                };
                rec(0);
                if (produced >= s.branch_cap) ++bc.branch_overflows;
            }
        }
        bc.fuzzy[n - 1] = words.size();
    }
    return bc;
}

std::vector<std::size_t> count_blocks(const MapFamily& m, std::size_t n_max,
                                      const SymbolSampling& s) {
    return count_blocks_both(m, n_max, s).strict;
}

std::vector<std::size_t> count_fuzzy(const MapFamily& m, std::size_t n_max,
                                     const SymbolSampling& s) {
    return count_blocks_both(m, n_max, s).fuzzy;
}

PeriodicCount count_periodic(const MapFamily& m, std::size_t n,
                             const PeriodicOptions& opts) {
    PeriodicCount pc;
    if (n == 0) return pc;
    const Box box = m.trapping_box ? *m.trapping_box : m.working_box;
    const Box keep = box.inflated(0.02 * std::max(box.width(), 1e-3),
                                  std::max(0.02 * box.height(), 1e-9));
    const double diam = std::max(box.diameter(), 1e-6);
    const double tol = opts.tol * (1.0 + diam);

    std::vector<Vec2> seeds;
    const std::size_t gy = box.height() > 1e-8 ? 4 : 1;
    for (std::size_t i = 0; i < opts.grid; ++i)
        for (std::size_t j = 0; j < gy; ++j)
            seeds.push_back({box.xlo + box.width() * (i + 0.5) / opts.grid,
                             box.ylo + box.height() * (j + 0.5) / gy});
    // attractor seeds
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> ux(box.xlo, box.xhi);
    std::uniform_real_distribution<double> uy(box.ylo, box.yhi);
    {
        Vec2 z{ux(rng), uy(rng)};
        std::size_t got = 0, guard = 0;
        std::size_t burn = 0;
        while (got < opts.orbit_seeds && guard++ < 40 * opts.orbit_seeds) {
            z = m.eval(z);
            if (!std::isfinite(z.x) || !std::isfinite(z.y) || std::abs(z.x) > 1e6) {
                z = {ux(rng), uy(rng)};
                burn = 0;
                continue;
            }
            if (++burn > 1000) {
                seeds.push_back(z);
                ++got;
            }
        }
    }

    std::vector<Vec2> roots;
    const Box wander = keep.inflated(2.0 * std::max(box.width(), 1.0),
                                     2.0 * std::max(box.height(), 1.0));
    const auto newton = [&](Vec2 z, std::size_t iters) -> std::optional<Vec2> {
        for (std::size_t it = 0; it < iters; ++it) {
            Mat2 P = Mat2::identity();
            Vec2 u = z;
            bool bad = false;
            for (std::size_t k2 = 0; k2 < n; ++k2) {
                P = m.jacobian(u) * P;
                u = m.eval(u);
                if (!std::isfinite(u.x) || !std::isfinite(u.y) ||
                    std::abs(u.x) > 1e8 || std::abs(u.y) > 1e8) {
                    bad = true;
                    break;
                }
            }
            if (bad) break;
            const Vec2 F = u - z;
            if (std::abs(F.x) < tol && std::abs(F.y) < tol) return z;
            const Mat2 J{P.a - 1.0, P.b, P.c, P.d - 1.0};
            const double det = J.det();
            if (std::abs(det) < 1e-14) break;
            Vec2 d{(J.d * F.x - J.b * F.y) / det, (-J.c * F.x + J.a * F.y) / det};
            const double dn = d.norm();
            if (dn > 0.25 * diam) d = d * (0.25 * diam / dn); // damp long steps
            z -= d;
            if (!wander.contains(z)) break;
        }
        return std::nullopt;
    };
    for (const Vec2& seed : seeds) {
        ++pc.seeds_tried;
        const std::optional<Vec2> root = newton(seed, opts.newton_iters);
        if (!root) continue;
        // the whole cycle must stay inside the reference box
        std::vector<Vec2> cyc;
        Vec2 u = *root;
        bool inside = keep.contains(u);
        for (std::size_t k2 = 0; inside && k2 < n; ++k2) {
            cyc.push_back(u);
            u = m.eval(u);
            inside = std::isfinite(u.x) && std::isfinite(u.y) && keep.contains(u);
        }
        if (!inside) continue;
        // every point of a verified cycle solves T^n(z) = z; polish each
        // forward image back to full tolerance before keeping it
        roots.push_back(*root);
        for (std::size_t k2 = 1; k2 < cyc.size(); ++k2) {
            const std::optional<Vec2> p = newton(cyc[k2], 12);
            if (p && keep.contains(*p)) roots.push_back(*p);
        }
    }

    std::sort(roots.begin(), roots.end(), [](Vec2 a, Vec2 b2) {
        return a.x < b2.x || (a.x == b2.x && a.y < b2.y);
    });
    const double rad = opts.dedup_rel * diam;
    for (const Vec2& r : roots) {
        bool dup = false;
        for (std::size_t i = pc.points.size(); i-- > 0;) {
            if (r.x - pc.points[i].x > rad) break; // sorted by x
            if (distance(r, pc.points[i]) <= rad) {
                dup = true;
                break;
            }
        }
        if (!dup) pc.points.push_back(r);
    }
    pc.count = pc.points.size();
    return pc;
}

namespace {

// Preimages of target under the base map inside [lo, hi]: one bisection
// per monotone piece (pieces split at the critical xs).
std::vector<double> base_preimages(const MapFamily& m, double target, double lo,
                                   double hi) {
    std::vector<double> cuts{lo};
    for (double c : m.critical_xs)
        if (c > lo && c < hi) cuts.push_back(c);
    cuts.push_back(hi);
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double a = cuts[i], b = cuts[i + 1];
        double fa = m.base_map(a) - target, fb = m.base_map(b) - target;
        if (!(fa * fb <= 0.0)) continue;
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (a + b);
            const double fm = m.base_map(mid) - target;
            if (fa * fm <= 0.0) {
                b = mid;
                fb = fm;
            } else {
                a = mid;
                fa = fm;
            }
        }
        out.push_back(0.5 * (a + b));
    }
    return out;
}

} // namespace

MonotoneCounts monotone_counts(const MapFamily& m, const Hierarchy& h,
                               std::size_t n_max) {
    MonotoneCounts mc;
    mc.m_plus.assign(n_max + 1, 1);
    mc.m_minus.assign(n_max + 1, 1);
    if (h.degenerate_1d) {
        // the boundary collapses onto the base interval: the folds of its
        // n-th image are the first n preimage generations of the critical xs
        const double lo = m.base_lo, hi = m.base_hi;
        std::vector<double> gen;
        for (double c : m.critical_xs)
            if (c >= lo && c <= hi) gen.push_back(c);
        std::size_t folds = 0;
        for (std::size_t k = 0; k + 1 <= n_max; ++k) {
            folds += gen.size();
            for (std::size_t nn = k + 1; nn <= n_max; ++nn) {
                mc.m_plus[nn] = folds + 1;
                mc.m_minus[nn] = folds + 1;
            }
            if (k + 2 > n_max || gen.empty()) break;
            std::vector<double> next;
            for (double t : gen) {
                const std::vector<double> pre = base_preimages(m, t, lo, hi);
                next.insert(next.end(), pre.begin(), pre.end());
            }
            std::sort(next.begin(), next.end());
            const double eps = 1e-12 * (hi - lo);
            std::vector<double> uniq;
            for (double x : next)
                if (uniq.empty() || x - uniq.back() > eps) uniq.push_back(x);
            gen.swap(uniq);
            if (folds + gen.size() > (1u << 20)) break; // budget guard
        }
        return mc;
    }
    for (std::size_t k = 0; k < h.levels.size() && k + 1 <= n_max; ++k) {
        // one entry per distinct tangency: overlapping parent windows can
        // re-detect the same strip, and those copies return the same source
        // parameter (to bisection precision) while genuine neighbors sit a
        // full lap apart, so the parameter axis separates them cleanly
        std::vector<double> params[2];
        for (const CriticalRegion& r : h.levels[k])
            for (const CriticalPoint* cp : {&r.top, &r.bottom})
                if (cp->lineage == 0 || cp->lineage == 1)
                    params[cp->lineage].push_back(cp->param);
        for (int lin = 0; lin < 2; ++lin) {
            std::vector<double>& ps = params[lin];
            std::sort(ps.begin(), ps.end());
            std::size_t distinct = 0;
            for (std::size_t i = 0; i < ps.size(); ++i)
                if (i == 0 || ps[i] - ps[i - 1] > 1e-9) ++distinct;
            // a tangency of level k folds the curve one application later,
            // and the crease persists on every later image
            std::vector<std::size_t>& tgt = lin == 0 ? mc.m_plus : mc.m_minus;
            for (std::size_t nn = k + 1; nn <= n_max; ++nn) tgt[nn] += distinct;
        }
    }
    return mc;
}

std::size_t count_monotone_segments(const SampledCurve& c) {
    std::size_t markers = 0;
    for (const Marker& mk : c.markers)
        if (mk.index < c.size() && c.alive_at(mk.index)) ++markers;
    return markers + 1;
}

EntropyReport entropy_report(const MapFamily& m, const Hierarchy& h, std::size_t n_max,
                             const SymbolSampling& s, const PeriodicOptions& p) {
    EntropyReport rep;
    rep.circle_wrap_caveat = m.circle;
    if (m.circle)
        rep.notes.push_back(
            "base map lives on a circle: interval labels wrap across the seam");

    const BlockCounts bc = count_blocks_both(m, n_max, s);
    if (bc.escapes > 0)
        rep.notes.push_back("orbit sampling restarted " + std::to_string(bc.escapes) +
                            " times after escapes");
    if (bc.branch_overflows > 0)
        rep.notes.push_back("fuzzy branching capped on " +
                            std::to_string(bc.branch_overflows) + " windows");
    const MonotoneCounts mono = monotone_counts(m, h, n_max);
    if (static_cast<int>(n_max) > h.depth_reached + 1)
        rep.notes.push_back("monotone counts use tangencies up to level " +
                            std::to_string(h.depth_reached) +
                            " only; deeper folds are not marked");

    for (std::size_t n = 1; n <= n_max; ++n) {
        EntropyRow row;
        row.n = n;
        row.N = bc.strict[n - 1];
        row.Ntilde = bc.fuzzy[n - 1];
        if (row.N > row.Ntilde)
            throw InequalityViolation("strict block count " + std::to_string(row.N) +
                                      " exceeds fuzzy count " +
                                      std::to_string(row.Ntilde) + " at n = " +
                                      std::to_string(n));
        row.P = count_periodic(m, n, p).count;
        row.Mplus = mono.m_plus[n];
        row.Mminus = mono.m_minus[n];
        const double fn = static_cast<double>(n);
        row.logN_over_n = row.N > 0 ? std::log(static_cast<double>(row.N)) / fn : 0.0;
        row.logNtilde_over_n =
            row.Ntilde > 0 ? std::log(static_cast<double>(row.Ntilde)) / fn : 0.0;
        row.logP_over_n = row.P > 0 ? std::log(static_cast<double>(row.P)) / fn : 0.0;
        rep.rows.push_back(row);
    }

    // tail slope of log(count) against n over the upper half of the range
    const auto tail_slope = [&](auto pick) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        std::size_t cnt = 0;
        for (const EntropyRow& row : rep.rows) {
            if (row.n <= n_max / 2) continue;
            const std::size_t v = pick(row);
            if (v == 0) continue;
            const double x = static_cast<double>(row.n);
            const double y = std::log(static_cast<double>(v));
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++cnt;
        }
        if (cnt < 2) return 0.0;
        const double denom = static_cast<double>(cnt) * sxx - sx * sx;
        return denom != 0.0 ? (static_cast<double>(cnt) * sxy - sx * sy) / denom : 0.0;
    };
    rep.h_blocks = tail_slope([](const EntropyRow& r) { return r.N; });
    rep.h_fuzzy = tail_slope([](const EntropyRow& r) { return r.Ntilde; });
    rep.h_periodic = tail_slope([](const EntropyRow& r) { return r.P; });
    return rep;
}

void write_entropy_csv(const EntropyReport& r, const std::string& path) {
    std::string out =
        "n,N,Ntilde,P,Mplus,Mminus,logN_over_n,logNtilde_over_n,logP_over_n\n";
    for (const EntropyRow& row : r.rows)
        out += io::csv_row({io::fmt_u(row.n), io::fmt_u(row.N), io::fmt_u(row.Ntilde),
                            io::fmt_u(row.P), io::fmt_u(row.Mplus), io::fmt_u(row.Mminus),
                            io::fmt_g17(row.logN_over_n), io::fmt_g17(row.logNtilde_over_n),
                            io::fmt_g17(row.logP_over_n)});
    io::write_text_file(path, out);
}

} // namespace af
