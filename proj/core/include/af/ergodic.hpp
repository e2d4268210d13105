#pragma once

// Long-run statistics of a planar map: Lyapunov exponents, Birkhoff
// averages, empirical invariant measures built either by pushing an
// unstable segment forward or by binning one long orbit, and an
// exponential fit to the autocovariance of scalar observables.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "af/curves.hpp"
#include "af/geometry.hpp"
#include "af/map_core.hpp"

namespace af {

using Observable = std::function<double(Vec2)>;

struct LyapunovResult {
    double lambda1 = 0.0;      // top exponent, from tangent-vector growth
    double lambda2 = 0.0;      // mean_log_det - lambda1
    double mean_log_det = 0.0; // time average of log|det DT|; -inf if det = 0
    std::size_t n_used = 0;
    Vec2 z_end{};
};

// Pushes one tangent vector along the orbit of z0 (after burn_in free
// iterates) with per-step renormalization.  Throws OrbitEscape if the
// orbit leaves the admissible region.
LyapunovResult lyapunov_exponent(const MapFamily& m, Vec2 z0, std::size_t n,
                                 std::size_t burn_in = 10000);

// Time average of phi along the orbit of z0 after burn_in iterates.
double birkhoff_average(const MapFamily& m, const Observable& phi, Vec2 z0,
                        std::size_t n, std::size_t burn_in = 10000);

struct HistogramGrid {
    std::size_t nx = 100;
    std::size_t ny = 100;
    std::optional<Box> box; // default: trapping box, else working box
};

enum class HistogramSource { pushforward, birkhoff };

struct SRBHistogram {
    Box box{};
    std::size_t nx = 0, ny = 0;
    std::vector<double> mass; // row-major [iy*nx+ix]; sums to 1 - dropped
    HistogramSource source = HistogramSource::pushforward;
    double dropped_fraction = 0.0; // escaped or out-of-grid sample weight
    bool mass_loss_warning = false; // dropped_fraction > 1e-3

    double total_mass() const;
    // x-marginal: per-column mass, length nx.
    std::vector<double> x_marginal() const;
};

// Discretizes arc length on the segment into n_particles equal-mass
// particles, iterates them, and bins the average of the empirical
// measures over steps 1..n_steps (the segment itself when n_steps = 0).
// Particle blocks run on `threads` workers and merge by bin-wise addition.
SRBHistogram srb_pushforward(const MapFamily& m, const SampledCurve& segment,
                             std::size_t n_steps, std::size_t n_particles = 100000,
                             const HistogramGrid& grid = {},
                             std::size_t threads = 1);

// Occupation-measure histogram of one orbit of length n after burn_in.
SRBHistogram srb_birkhoff(const MapFamily& m, Vec2 z0, std::size_t n,
                          std::size_t burn_in = 10000,
                          const HistogramGrid& grid = {});

// Total-variation distance between the normalized x-marginals of two
// histograms with the same nx.
double total_variation_x(const SRBHistogram& A, const SRBHistogram& B);

struct CorrelationFit {
    std::vector<std::size_t> lags;  // 0..lag_max
    std::vector<double> C;          // autocovariance per lag
    std::vector<double> fitted;     // K * lambda^lag, NaN when no fit
    double lambda_fit = 0.0;        // in (0, 1] when the fit succeeded
    double K_fit = 0.0;
    double r2 = 0.0;
    double noise_floor = 0.0;       // absolute |C| threshold used
    std::size_t n_fitted = 0;       // lags >= 1 above the floor
    bool all_below_floor = false;   // consistent with at-or-below-noise mixing
};

// Empirical autocovariance of (phi o T^lag, psi) from one orbit of
// n_samples points, with a weighted log-linear fit over the lags whose
// |C| exceeds a 5-sigma Monte-Carlo noise floor.  The floor is
// 5 * sd(phi) * sd(psi) / sqrt(n_samples), i.e. the stated 5/sqrt(n)
// applied to the normalized correlation so it is scale invariant.
CorrelationFit correlation_fit(const MapFamily& m, const Observable& phi,
                               const Observable& psi, Vec2 z0,
                               std::size_t n_samples, std::size_t lag_max,
                               std::size_t burn_in = 10000);

// CSV: bin_x,bin_y,mass (bin centers; zero-mass bins omitted).
void write_histogram_csv(const SRBHistogram& h, const std::string& path);
// CSV: lag,C,fitted.
void write_correlation_csv(const CorrelationFit& f, const std::string& path);

} // namespace af
