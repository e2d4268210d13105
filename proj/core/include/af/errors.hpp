#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace af {

// base class for all library errors so callers can catch af-specific failures
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// matrix is (numerically) a scalar multiple of an orthogonal matrix; the most
// contracted direction is undefined
struct DegenerateMatrix : Error {
    DegenerateMatrix() : Error("degenerate matrix: singular values coincide, contracted direction undefined") {}
};

// the ||DT^i|| >= kappa^i growth test failed at step i
struct HyperbolicityLost : Error {
    std::size_t step;
    explicit HyperbolicityLost(std::size_t i)
        : Error("hyperbolicity lost: matrix-product growth fell below kappa^i at step " + std::to_string(i)),
          step(i) {}
};

// an orbit left the working region (coordinates overflowed or exceeded the
// escape bound); index of the offending iterate attached
struct OrbitEscape : Error {
    std::size_t index;
    explicit OrbitEscape(std::size_t i)
        : Error("orbit escaped the working region at iterate " + std::to_string(i)), index(i) {}
};

// adaptive refinement exceeded the configured point budget
struct RefinementBudgetExceeded : Error {
    std::size_t budget;
    explicit RefinementBudgetExceeded(std::size_t cap)
        : Error("curve refinement exceeded the point budget of " + std::to_string(cap)), budget(cap) {}
};

// tangency locator found no sign change of its objective along the curve
struct NoSignChange : Error {
    NoSignChange() : Error("no sign change: curve does not cross the tangency locus") {}
};

// tangency locator found more than one sign change; all brackets reported
struct MultipleRoots : Error {
    std::vector<std::pair<double, double>> brackets; // parameter intervals bracketing each root
    explicit MultipleRoots(std::vector<std::pair<double, double>> b)
        : Error("multiple tangency roots on one crossing (" + std::to_string(b.size()) + " brackets)"),
          brackets(std::move(b)) {}
};

// an exact counting inequality between entropy estimators was violated;
// signals a coding bug, never a data artifact
struct InequalityViolation : Error {
    explicit InequalityViolation(const std::string& what) : Error("estimator inequality violated: " + what) {}
};

// configuration rejected before any computation started
struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error("config error: " + what) {}
};

} // namespace af
