#pragma once

#include <vector>

#include "af/errors.hpp"
#include "af/geometry.hpp"
#include "af/map_core.hpp"

namespace af {

struct ContractionResult {
    Vec2 e;            // unit vector in the most contracted direction
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    Vec2 image_e;      // M * e, with ||image_e|| = lambda_min
};

// most contracted direction of a 2x2 matrix from the closed-form singular
// value/vector expressions. Sign convention: e has nonnegative first
// component; ties broken by nonnegative second component.
// Throws DegenerateMatrix when the singular values coincide to relative 1e-12
// (direction undefined).
ContractionResult most_contracted(const Mat2& M);

// one step of the contracted-direction field along an orbit, with the norms
// kept in log space so long products cannot overflow or underflow
struct OrbitContractionStep {
    Vec2 e;                 // most contracted direction of DT^i(z0)
    double log_lambda_min = 0.0;
    double log_lambda_max = 0.0;
    bool degenerate = false; // direction undefined at this step (e left at previous value)
};

struct OrbitContraction {
    std::vector<OrbitContractionStep> steps; // index i-1 holds data for DT^i, i = 1..n
    std::vector<double> defects;             // d_i = ||e_i x e_{i-1}||, defined from i = 2
    double kappa_measured = 0.0;             // min over i of ||DT^i||^{1/i}
};

// contracted directions e_i of the accumulated derivative products DT^i(z0)
// for i = 1..n. Products are renormalized every few steps; scale bookkeeping
// is logarithmic. If kappa_check > 0, verifies ||DT^i|| >= kappa_check^i at
// every step and throws HyperbolicityLost(i) on failure; with kappa_check = 0
// the measured growth floor is only reported.
OrbitContraction e_n_along_orbit(const MapFamily& m, Vec2 z0, std::size_t n,
                                 double kappa_check = 0.0);

// unit field evaluation: most contracted direction of DT^order at z, with the
// sign chosen to align with a reference direction (for integral curves)
Vec2 e_field(const MapFamily& m, Vec2 z, std::size_t order);

// forward-declared curve container (defined in curves.hpp)
struct SampledCurve;

// integral curve of the order-n contracted-direction field through z0,
// traced symmetrically (half of max_len each way) with a fixed-step midpoint
// rule; stops early at the working-box boundary or if the field degenerates
// (flagged by truncating). step <= 0 selects the default min(1e-3, |b|),
// guarded to 1e-3 when b = 0.
SampledCurve stable_curve(const MapFamily& m, Vec2 z0, std::size_t order,
                          double max_len, double step = 0.0);

// distances d(T^i z, T^i z0) for i = 0..n; used to verify the contraction
// guarantee of stable curves
std::vector<double> co_iteration_distances(const MapFamily& m, Vec2 z, Vec2 z0, std::size_t n);

} // namespace af
