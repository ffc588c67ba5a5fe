#pragma once

#include <stdexcept>
#include <string>

namespace cshv {

// Bad algebra spec, bad config value, invalid family/rank combination.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Matrix admits no positive diagonal symmetrizer.
struct DecompositionError : std::runtime_error {
    explicit DecompositionError(const std::string& what) : std::runtime_error(what) {}
};

// Exponent left the representable range; the configuration is ill-posed.
struct RangeError : std::runtime_error {
    explicit RangeError(const std::string& what) : std::runtime_error(what) {}
};

// Mollification width below what the grid can resolve.
struct ResolutionError : std::runtime_error {
    explicit ResolutionError(const std::string& what) : std::runtime_error(what) {}
};

// Constraint system has no real solution (negative discriminant).
struct InfeasibilityError : std::runtime_error {
    explicit InfeasibilityError(const std::string& what) : std::runtime_error(what) {}
};

// Iterative solve failed after all fallbacks; carries a trace.
struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cshv
