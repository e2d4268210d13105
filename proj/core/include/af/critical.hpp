#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "af/curves.hpp"
#include "af/geometry.hpp"
#include "af/map_core.hpp"
#include "af/splitting.hpp"

namespace af {

struct CriticalPoint {
    Vec2 z;
    double param = 0.0;      // curve parameter of the tangency
    double g_residual = 0.0; // tangency objective at the returned point
    int order = 0;           // contraction order used
    int lineage = -1;        // 0 = upper boundary component, 1 = lower, -1 = unknown
};

// locates the point of a near-horizontal curve where the tangent aligns with
// the order-n contracted direction: root of g(s) = slope(e_n) - slope(tangent).
// Throws NoSignChange / MultipleRoots when the curve has zero or several
// crossings; bisection runs until |g| < tol.
CriticalPoint find_critical_point_on_curve(const MapFamily& m, const SampledCurve& c,
                                           int order, double tol = 1e-12);

// one component of the level-k critical region: a window around a pair of
// boundary-curve strips carrying one tangency point each
struct CriticalRegion {
    int level = 0;
    std::size_t index = 0;        // position within its level
    std::ptrdiff_t parent = -1;   // index into the previous level; -1 at level 0
    double x_center = 0.0;
    double half_width = 0.0;      // delta * rho^level
    double y_lo = 0.0, y_hi = 0.0; // vertical extent of the band
    CriticalPoint top, bottom;     // tangency on the upper / lower strip
    double thickness = 0.0;        // |top.z.y - bottom.z.y|
    // separation screening of the band pair against |b|^(level/20); cannot
    // hold at practical b (the pair sits ~|b|^(level+1) apart) — recorded,
    // never used as a gate
    bool h_related = false;
    double h_related_threshold = 0.0;

    double window_lo() const { return x_center - half_width; }
    double window_hi() const { return x_center + half_width; }
};

struct Hierarchy {
    SystemConfig cfg;
    MapParams params;
    std::vector<std::vector<CriticalRegion>> levels; // levels[k] = components of level k
    bool degenerate_1d = false;  // b = 0: the 1-D critical points at every level
    int depth_reached = 0;
    double depth_cutoff = 0.0;   // band-thickness floor that ended the descent
    std::vector<std::string> notes;
};

struct HierarchyOptions {
    EvolveOptions evolve;       // boundary-curve refinement settings
    int max_regions_per_parent = 64;
    double strip_min_cover = 0.5; // strips must span this fraction of the window
};

// builds the nested critical regions level by level: evolve the reference-box
// boundaries, cut the generation-k curves to each level-(k-1) window, keep the
// near-horizontal strips, pair them by vertical position into bands, and place
// one tangency point on each strip. Descent stops at cfg.kmax or when the band
// thickness falls below the floating-point floor. b = 0 produces the
// degenerate one-dimensional hierarchy.
Hierarchy build_hierarchy(const MapFamily& m, const SystemConfig& cfg,
                          const HierarchyOptions& opts = {});

struct CriticalQuery {
    double d = 0.0;        // horizontal distance to the binding critical point
    Vec2 phi;              // binding critical point (nearer of the pair; tie -> top)
    int level = 0;         // deepest level whose window contains the point
    std::size_t region = 0;
    bool inside_C0 = false;
};

CriticalQuery distance_to_critical(const Hierarchy& h, Vec2 z);

// adapter for the splitting module
CriticalDistance critical_distance_fn(const Hierarchy& h);

struct BoundPeriod {
    std::size_t p = 0;
    bool saturated = false; // cap reached before the orbits separated
};

// first j >= 1 with |T^j z - T^j phi| > e^{-beta j}, phi the binding critical
// point of z
BoundPeriod bound_period(const MapFamily& m, const Hierarchy& h, Vec2 z,
                         const SystemConfig& cfg, std::size_t cap = 256);

struct ImujIndex {
    int mu = 0;  // e^{-mu-1} <= |offset| < e^{-mu}
    int j = 0;   // 1..mu^2, equal subdivision of the annulus, innermost-first
    int side = 0; // +1 right of the critical point, -1 left
};

// dyadic-in-mu partition of the critical neighborhood by distance; nullopt
// outside (|offset| >= delta) or exactly at the critical point
std::optional<ImujIndex> locate_Imuj(const SystemConfig& cfg, double offset,
                                     int mu_cap = 60);

struct ImujInterval {
    int mu = 0;
    int j = 0;       // 1..mu^2
    double lo = 0.0; // offsets, positive side; the negative side is the mirror
    double hi = 0.0;
};

// all subintervals I_{mu,j} for mu_star <= mu <= mu_max, ordered by
// decreasing offset; consecutive entries share endpoints, so the list covers
// (e^{-(mu_max+1)}, e^{-mu_star}) exactly
std::vector<ImujInterval> partition_Imuj(const SystemConfig& cfg, int mu_max);

// per-level check that measured band thicknesses sit inside the predicted
// corridor (b/K)^(k+1) < thickness < (K b)^(99k/100)
struct GapBoundsReport {
    std::vector<double> min_thickness; // per level, levels >= 1
    std::vector<double> max_thickness;
    bool pass = false;
};

GapBoundsReport gap_bounds_check(const Hierarchy& h, double K = 10.0);

struct IAReport {
    std::size_t n = 0;          // steps actually examined (escape shortens)
    bool escaped = false;
    std::size_t escape_index = 0;
    // slow recurrence: d_C(z_i) >= min(delta, e^{-alpha i})
    bool ia2_pass = false;
    std::ptrdiff_t ia2_first_fail = -1;
    double ia2_margin_raw = 0.0; // min_i (d_C(z_i) - e^{-alpha i}), ungated
    double d_c_min = 0.0;
    // derivative growth: ||w_i*|| > c0 e^{c i}
    bool ia4_pass = false;
    std::ptrdiff_t ia4_first_fail = -1;
    double ia4_rate = 0.0;       // least-squares slope of log||w_i*|| against i
    double ia4_margin = 0.0;     // min gated log-margin over c0 e^{c i}

    bool pass() const { return ia2_pass && ia4_pass; }
};

// evaluates the two orbit-selection inequalities along the orbit of z0. The
// pointwise conditions are enforced for i > cfg.ia_gate_start (start-up covers
// the first steps); the reported margins and rate are computed ungated.
IAReport ia_checks(const MapFamily& m, const Hierarchy& h, Vec2 z0, std::size_t n,
                   const SystemConfig& cfg);

void write_hierarchy_json(const Hierarchy& h, const std::string& path);

} // namespace af
