#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "af/errors.hpp"
#include "af/geometry.hpp"
#include "af/map_core.hpp"

namespace af {

struct Marker {
    std::size_t index;  // node index into the owning curve
    std::string label;
};

// ordered planar polyline with differential data per node. Curves produced by
// evolution carry exact push-forward tangents/curvatures and remember the
// source parameter of every node, so refinement can re-iterate from the
// original curve instead of interpolating the stretched image.
struct SampledCurve {
    std::vector<Vec2> points;
    std::vector<Vec2> tangents;      // unit tangents
    std::vector<double> curvatures;  // signed curvature per node
    std::vector<Marker> markers;     // strictly increasing indices
    bool closed = false;
    int generation = 0;              // number of map applications since the source
    std::vector<double> params;      // source parameter of each node (sorted)
    std::vector<std::uint8_t> alive; // 0 = orbit left the clip region during evolution

    std::size_t size() const { return points.size(); }
    double length() const;
    bool alive_at(std::size_t i) const { return alive.empty() || alive[i] != 0; }
    // linear interpolation in the stored parameter
    Vec2 at_param(double t) const;
    Vec2 tangent_at_param(double t) const;
    double curvature_at_param(double t) const;
};

// straight segment from p0 to p1 with n nodes (n >= 2); params run 0..1
SampledCurve make_segment(Vec2 p0, Vec2 p1, std::size_t n);

struct EvolveOptions {
    double h_max = 1e-3;          // maximum node spacing on the image
    double theta_max_deg = 5.0;   // maximum turn angle between adjacent tangents
    std::size_t max_points = 10'000'000;
    // orbits leaving this region are frozen and flagged; unset = the family's
    // working box inflated by half its size each way
    std::optional<Box> clip_box;
    double t_resolution = 1e-12;  // refinement floor in source parameter
};

// clip region used by curve evolution when none is given: the working box
// inflated by half its extent (at least 0.5 each way)
Box default_evolve_clip(const MapFamily& m);

// applies the map `steps` times to the curve. Refinement inserts source
// parameter midpoints and iterates them forward from the original curve, so
// every node lies exactly on the image curve. Tangents and curvatures are
// exact push-forwards of the source data. Markers are preserved as exact
// orbit images. Throws RefinementBudgetExceeded past opts.max_points.
SampledCurve evolve_curve(const MapFamily& m, const SampledCurve& c, std::size_t steps,
                          const EvolveOptions& opts = {});

struct CurvatureRecursionResult {
    std::vector<double> pushed;        // exact one-step image curvature per node
    std::vector<double> bound;         // recursion bound (b k + K b) / ||DT gamma'||^3
    std::vector<std::uint8_t> flagged; // ||DT gamma'|| below tolerance; value unreliable
};

// one-step curvature push-forward at every node of c (which carries the
// pre-image curvatures): k_new = ||DT g' x (DT g'' + X g')|| / ||DT g'||^3,
// where X is the matrix of directional derivatives of the Jacobian entries
// along g'. K_bound = 0 selects 2|a| for the quadratic family (exact there),
// 10 otherwise.
CurvatureRecursionResult curvature_recursion(const MapFamily& m, const SampledCurve& c,
                                             double K_bound = 0.0);

// 3-point circumscribed-circle curvature estimate at the interior nodes of a
// polyline (endpoints copy their neighbor); the finite-difference oracle
std::vector<double> curvature_fd(const SampledCurve& c);

struct C2bReport {
    double max_slope = 0.0;
    double max_curvature = 0.0;
    double threshold = 0.0; // K(delta) * |b|
    bool is_c2b = false;
};

// near-horizontal classification: tangent slopes and |curvature| both below
// K(delta)*|b|. cfg.k_delta (see SystemConfig) <= 0 selects the default
// 10/delta^3.
C2bReport c2b_check(const SampledCurve& c, const SystemConfig& cfg, double b);

double k_delta_effective(const SystemConfig& cfg);

// the two horizontal boundary components of the reference box, evolved
// 0..n generations (refined from the generation-0 lines each time)
struct BoundarySet {
    std::vector<SampledCurve> top;    // index = generation
    std::vector<SampledCurve> bottom;
    bool from_trapping_box = false;   // false = working-box fallback (flagged)
};

// callback giving markers to insert on a generation-g curve: list of
// (source parameter, label) pairs. Supplied by the critical-set machinery.
using MarkerProvider =
    std::vector<std::pair<double, std::string>> (*)(const SampledCurve&, int, void*);

BoundarySet boundary_evolution(const MapFamily& m, std::size_t n,
                               const EvolveOptions& opts = {},
                               MarkerProvider markers = nullptr, void* marker_ctx = nullptr);

// CSV export: n, idx, x, y, tx, ty, curvature, marker_label
void write_curve_csv(const SampledCurve& c, const std::string& path);

} // namespace af
