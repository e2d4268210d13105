#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "af/geometry.hpp"
#include "af/map_core.hpp"

namespace af {

// distance from a point to the critical set (any level of detail the caller
// has available; the level-0 fallback below uses only the base critical xs)
using CriticalDistance = std::function<double(Vec2)>;

CriticalDistance level0_distance(const MapFamily& m);

// number of steps a split component stays separated: the time the contracted
// direction needs to carry a vector of size ~d_c^2 past the fold,
// max(1, round(2 log d_c / log |b|)); 1 when b = 0
std::size_t fold_period(double d_c, double b);

struct SplitStep {
    Vec2 z;
    Vec2 w_dir;             // unit direction of the full pushed vector w_i
    Vec2 ws_dir;            // unit direction of the split vector w_i*
    double log_norm_w = 0.0;
    double log_norm_ws = 0.0;
    bool in_C0 = false;
    int fold_depth = 0;     // pending (unrejoined) splits after this step
};

struct SplitEvent {
    std::size_t t_split = 0;
    std::size_t ell = 0;            // fold period computed at the split
    std::size_t t_rejoin = 0;       // actual rejoin step (after nesting adjustment)
    double d_c = 0.0;               // critical distance at the split point
    bool rejoined = false;          // false = still pending when the trace ended
};

struct SplitTrace {
    std::vector<SplitStep> steps;   // index i = step; may end early on escape
    std::vector<SplitEvent> events;
    std::size_t splits = 0;
    std::size_t rejoins = 0;
    std::size_t fallbacks = 0;      // entries where no split was possible
    std::size_t straddle_adjustments = 0; // fold intervals delayed to stay nested
    bool orbit_escaped = false;
    std::size_t escape_index = 0;
};

// pushes w0 along the orbit of z0 for n steps, maintaining both the full
// vector w and the split vector w*. On every entry into the critical
// neighborhood (critical distance < cfg.delta) w* is decomposed as
// alpha*(0,1) + beta*e_ell; the vertical part continues as w*, the contracted
// part is pushed separately and added back ell steps later. Overlapping fold
// intervals are delayed so they nest. Entries where the contracted direction
// is unavailable (degenerate product, escaping forward orbit, vertical e) are
// counted as fallbacks and left unsplit. An escaping orbit ends the trace
// early with the flag set rather than throwing.
SplitTrace run_splitting(const MapFamily& m, Vec2 z0, Vec2 w0, std::size_t n,
                         const SystemConfig& cfg, const CriticalDistance& dist = {});

struct CorrectSplittingReport {
    double max_dir_diff_outside = 0.0;  // ||w_dir - ws_dir|| at fold_depth = 0
    double max_log_diff_outside = 0.0;  // |log||w|| - log||w*||| at fold_depth = 0
    double max_slope_outside = 0.0;     // slope of w* outside folds
    double slope_threshold = 0.0;       // K(delta) * |b|
    bool recombines = false;            // w equals w* outside folds within eps0
    bool b_horizontal = false;          // w* slopes below the threshold outside folds
    bool pass = false;
};

// verifies the two properties that make the split usable: outside fold
// intervals the split vector recombines to the full vector (within cfg.eps0),
// and it stays near-horizontal with slope O(b)
CorrectSplittingReport correct_splitting_check(const SplitTrace& trace,
                                               const SystemConfig& cfg, double b);

struct AdjustedIntervals {
    std::vector<std::pair<std::size_t, std::size_t>> intervals; // [start, end)
    std::size_t adjustments = 0;
};

// makes a family of [start, end) intervals nested-or-disjoint by extending
// any interval that would end strictly inside a later-started one
AdjustedIntervals adjust_nested(std::vector<std::pair<std::size_t, std::size_t>> intervals);

// CSV export: i, x, y, wx, wy, wsx, wsy, log_norm_ws, in_C0, fold_depth
void write_split_csv(const SplitTrace& t, const std::string& path);

} // namespace af
