#include "af/paramscan.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include <json.hpp>

#include "af/critical.hpp"
#include "af/errors.hpp"
#include "af/io.hpp"
#include "af/splitting.hpp"

namespace af {

const char* to_string(ScanStatus s) {
    switch (s) {
        case ScanStatus::accepted: return "accepted";
        case ScanStatus::deleted: return "deleted";
        default: return "indeterminate";
    }
}

std::vector<double> scan_grid(const ScanSpec& spec) {
    if (!(spec.a_hi >= spec.a_lo))
        throw ConfigError("scan: a_hi must be >= a_lo");
    if (spec.a_hi > spec.a_lo && !(spec.a_step > 0.0))
        throw ConfigError("scan: a_step must be positive");
    std::vector<double> grid;
    if (spec.a_hi == spec.a_lo) {
        grid.push_back(spec.a_lo);
        return grid;
    }
    for (std::size_t i = 0;; ++i) {
        const double a = spec.a_lo + static_cast<double>(i) * spec.a_step;
        if (a > spec.a_hi + 0.5 * spec.a_step) break;
        grid.push_back(std::min(a, spec.a_hi));
        if (grid.size() > 10'000'000) throw ConfigError("scan: grid too large");
    }
    return grid;
}

namespace {

void merge_fail(std::ptrdiff_t& dst, std::ptrdiff_t src) {
    if (src < 0) return;
    if (dst < 0 || src < dst) dst = src;
}

ScanEntry scan_one(const ScanSpec& spec, double a) {
    ScanEntry e;
    e.a = a;
    try {
        const MapFamily m = spec.family(a, spec.b);
        HierarchyOptions hopts;
        hopts.evolve.max_points = 500'000; // keep per-parameter cost bounded
        const Hierarchy h = build_hierarchy(m, spec.cfg, hopts);
        if (h.levels.empty() || h.levels.front().empty()) {
            e.note = "no tangency points detected";
            return e;
        }
        // generation-0 critical points, one per boundary component
        std::vector<Vec2> pts;
        for (const CriticalRegion& r : h.levels.front()) {
            pts.push_back(r.top.z);
            if (!(r.bottom.z.x == r.top.z.x && r.bottom.z.y == r.top.z.y))
                pts.push_back(r.bottom.z);
        }

        const CriticalDistance d0 = level0_distance(m);
        e.startup_ok = true;
        for (Vec2 z : pts) {
            Vec2 u = z;
            for (std::size_t i = 1; i <= spec.n0; ++i) {
                u = m.eval(u);
                if (!std::isfinite(u.x) || !std::isfinite(u.y) ||
                    std::abs(u.x) > 1e6) {
                    e.note = "orbit escaped during start-up";
                    return e;
                }
                if (!(d0(u) > 0.5 * spec.cfg.delta)) {
                    e.startup_ok = false;
                    break;
                }
            }
            if (!e.startup_ok) break;
        }
        if (!e.startup_ok) {
            e.status = ScanStatus::deleted;
            return e;
        }
        if (spec.horizon == 0) {
            e.status = ScanStatus::accepted;
            return e;
        }

        bool any_escape = false;
        for (Vec2 z : pts) {
            const IAReport r = ia_checks(m, h, z, spec.horizon, spec.cfg);
            merge_fail(e.ia2_first_fail, r.ia2_first_fail);
            merge_fail(e.ia4_first_fail, r.ia4_first_fail);
            if (r.escaped) any_escape = true;
        }
        if (e.ia2_first_fail >= 0 || e.ia4_first_fail >= 0)
            e.status = ScanStatus::deleted;
        else {
            // deletion requires a measured violation; an orbit that leaves
            // the working region passed every step it was observed
            if (any_escape)
                e.note = "an orbit left the region before the horizon with "
                         "no failure";
            e.status = ScanStatus::accepted;
        }
    } catch (const Error& err) {
        e.status = ScanStatus::indeterminate;
        e.note = err.what();
    }
    return e;
}

} // namespace

ScanReport scan(const ScanSpec& spec) {
    ScanReport rep;
    rep.spec = spec;
    const std::vector<double> grid = scan_grid(spec);
    rep.per_a.resize(grid.size());

    const std::size_t nt =
        std::max<std::size_t>(1, std::min(spec.threads, grid.size()));
    if (nt <= 1) {
        for (std::size_t i = 0; i < grid.size(); ++i)
            rep.per_a[i] = scan_one(spec, grid[i]);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nt);
        for (std::size_t t = 0; t < nt; ++t)
            pool.emplace_back([&, t]() {
                for (std::size_t i = t; i < grid.size(); i += nt)
                    rep.per_a[i] = scan_one(spec, grid[i]);
            });
        for (std::thread& th : pool) th.join();
    }

    std::size_t determinate = 0;
    for (const ScanEntry& e : rep.per_a) {
        if (e.status == ScanStatus::accepted) rep.accepted.push_back(e.a);
        if (e.status != ScanStatus::indeterminate) ++determinate;
    }
    rep.deletion_curve.assign(spec.horizon + 1, 0.0);
    if (determinate > 0) {
        for (std::size_t hz = 0; hz <= spec.horizon; ++hz) {
            std::size_t del = 0;
            for (const ScanEntry& e : rep.per_a) {
                if (e.status == ScanStatus::indeterminate) continue;
                if (!e.startup_ok) {
                    ++del;
                    continue;
                }
                std::ptrdiff_t first = -1;
                merge_fail(first, e.ia2_first_fail);
                merge_fail(first, e.ia4_first_fail);
                if (first >= 0 && first <= static_cast<std::ptrdiff_t>(hz)) ++del;
            }
            rep.deletion_curve[hz] =
                static_cast<double>(del) / static_cast<double>(determinate);
        }
    }
    return rep;
}

void write_scan_csv(const ScanReport& r, const std::string& path) {
    std::string out = "a,status,ia2_first_fail,ia4_first_fail\n";
    for (const ScanEntry& e : r.per_a)
        out += io::csv_row({io::fmt_g17(e.a), to_string(e.status),
                            io::fmt_i(e.ia2_first_fail), io::fmt_i(e.ia4_first_fail)});
    io::write_text_file(path, out);
}

void write_scan_json(const ScanReport& r, const std::string& path) {
    nlohmann::json j;
    j["spec"] = {{"a_lo", r.spec.a_lo},       {"a_hi", r.spec.a_hi},
                 {"a_step", r.spec.a_step},   {"b", r.spec.b},
                 {"horizon", r.spec.horizon}, {"n0", r.spec.n0},
                 {"threads", r.spec.threads}};
    j["config"] = {{"delta", r.spec.cfg.delta}, {"rho", r.spec.cfg.rho},
                   {"alpha", r.spec.cfg.alpha}, {"beta", r.spec.cfg.beta},
                   {"c", r.spec.cfg.c},         {"c0", r.spec.cfg.c0},
                   {"kmax", r.spec.cfg.kmax},
                   {"ia_gate_start", r.spec.cfg.ia_gate_start}};
    std::size_t na = 0, nd = 0, ni = 0;
    nlohmann::json arr = nlohmann::json::array();
    for (const ScanEntry& e : r.per_a) {
        (e.status == ScanStatus::accepted
             ? na
             : e.status == ScanStatus::deleted ? nd : ni)++;
        arr.push_back({{"a", e.a},
                       {"status", to_string(e.status)},
                       {"startup_ok", e.startup_ok},
                       {"ia2_first_fail", e.ia2_first_fail},
                       {"ia4_first_fail", e.ia4_first_fail},
                       {"note", e.note}});
    }
    j["counts"] = {{"accepted", na}, {"deleted", nd}, {"indeterminate", ni}};
    j["accepted"] = r.accepted;
    j["deletion_curve"] = r.deletion_curve;
    j["per_a"] = arr;
    io::write_text_file(path, j.dump(2) + "\n");
}

} // namespace af
