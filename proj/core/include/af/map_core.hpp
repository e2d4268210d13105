#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "af/errors.hpp"
#include "af/geometry.hpp"

namespace af {

struct MapParams {
    double a = 0.0; // 1-D parameter of the base family
    double b = 0.0; // dissipation parameter; |b| < 1 for attractor analyses
};

// system constants shared across the analysis modules
struct SystemConfig {
    int mu_star = 2;            // delta = exp(-mu_star)
    double delta = 0.1353352832366127; // half-width of the level-0 critical region
    double rho = 0.2;           // per-level shrink rate of critical windows, in (0,1)
    double alpha = 0.25;        // slow-recurrence exponent: d_C(z_i) >= min(delta, e^{-alpha i})
    double beta = 0.5;          // bound-period exponent: |xi_j - z_j| <= e^{-beta j}
    double c = 0.8;             // target derivative-growth exponent: ||w_i*|| > c0 e^{c i}
    double c0 = 1.0;            // growth prefactor
    double theta = 0.02;        // time-scale ratio (recorded; not used numerically)
    double eps0 = 0.05;         // correct-splitting tolerance
    double k_delta = 0.0;       // slope/curvature scale of near-horizontal curves;
                                // <= 0 selects the default 10/delta^3
    int kmax = 3;               // critical-hierarchy depth cap
    // gate for the selection inequalities: the pointwise conditions are
    // enforced for i > ia_gate_start only (early iterates are covered by the
    // start-up condition, not by the growth inequalities)
    int ia_gate_start = 2;

    static SystemConfig with_mu_star(int mu);
    // warnings for parameter orderings the analysis assumes (b << alpha,
    // delta, rho, e^{-c}); never fatal
    std::vector<std::string> validate(double b) const;
};

// a parametrized planar map together with its derivative data and the 1-D
// base map it perturbs
struct MapFamily {
    std::string name;
    MapParams params;

    std::function<Vec2(Vec2)> eval;          // T(x, y)
    std::function<Mat2(Vec2)> jacobian;      // DT(x, y)
    // gradients of the four Jacobian entries, ordered (grad a, grad b, grad c,
    // grad d) in the Mat2 layout; empty function => finite differences
    std::function<std::array<Vec2, 4>(Vec2)> jacobian_grad;

    std::function<double(double)> base_map;    // f_a
    std::function<double(double)> base_deriv;  // f_a'
    std::function<double(double)> base_deriv2; // f_a'' (optional; empty => FD)
    std::vector<double> critical_xs;           // critical points of f_a, ascending
    bool circle = false;                       // base map acts on a circle rather than an interval

    // strictly forward-invariant axis-aligned rectangle, when one exists
    std::optional<Box> trapping_box;
    double trapping_margin = 0.0; // verified margin of strict containment
    // always-present sampling/clipping region (equals the trapping box when
    // one exists, otherwise a bounding region of the bounded dynamics)
    Box working_box;
    // 1-D interval the base dynamics is confined to
    double base_lo = -1.0, base_hi = 1.0;

    bool has_trapping_box() const { return trapping_box.has_value(); }
    std::array<Vec2, 4> jac_grad(Vec2 z) const; // analytic if available, else central FD
};

// the classical quadratic family T(x,y) = (1 - a x^2 + y, b x)
MapFamily henon_family(double a, double b);

// orbit [z0, T z0, ..., T^n z0]; throws OrbitEscape when coordinates blow up
// past escape_bound (or become non-finite)
std::vector<Vec2> iterate_orbit(const MapFamily& m, Vec2 z0, std::size_t n,
                                double escape_bound = 1e6);

struct MisiurewiczReport {
    // (1) non-degenerate critical points: f'' != 0 at each critical x
    std::vector<double> f2_at_critical;
    bool crit_nondegenerate = false;
    // (2) negative Schwarzian derivative on a sample grid
    double schwarzian_max = 0.0; // maximum sampled value; negative = pass
    bool schwarzian_negative = false;
    // (3) sampled periodic orbits are uniformly repelling
    int periodic_points_checked = 0;
    double min_multiplier = 0.0; // min |(f^p)'| over detected periodic points
    bool periodic_repelling = false;
    // (4) critical orbits stay away from the critical set
    std::vector<double> crit_orbit_min_dist; // per critical point
    bool crit_orbit_far = false;

    bool pass() const {
        return crit_nondegenerate && schwarzian_negative && periodic_repelling && crit_orbit_far;
    }
};

// numerical screening of the 1-D admissibility conditions on the base map:
// non-flat critical points, negative Schwarzian (sampled), expansion along
// sampled periodic orbits up to period p_max, and critical orbits staying
// clear of the critical set over n_horizon iterates
MisiurewiczReport misiurewicz_check(const MapFamily& m, std::size_t n_horizon = 64,
                                    double tol = 1e-3, int p_max = 8);

struct NondegeneracyReport {
    std::vector<double> dF_dy_at_critical; // d/dy of the first component at (x_c, 0)
    bool pass = false;
};

// the perturbation must move the critical value in the y-direction:
// d/dy of the first map component at (x_c, 0) is nonzero for every critical x
NondegeneracyReport nondegeneracy_check(const MapFamily& m);

// finite-difference estimate of the transversality defect at a 1-D parameter
// a_star whose critical orbit lands (after n_land steps) on a periodic point:
// (d/da) f_a^{n_land}(x_c) - (d/da) p(a), where p(a) continues the periodic
// point. Nonzero means the family crosses the bifurcation transversally.
// No rigor is claimed; this is a screening estimate at b = 0.
double transversality_estimate(const std::function<MapFamily(double)>& family,
                               double a_star, std::size_t n_land, int period,
                               double da = 1e-6);

} // namespace af
