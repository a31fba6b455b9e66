// errors.hpp : exception types for domain, quadrature, integration and orbit failures.
#pragma once

#include <stdexcept>
#include <string>

namespace bertrand {

// Radius outside the open radial domain, or metric/potential evaluated at a degeneracy.
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& w) : std::runtime_error(w) {}
};

// Parameter set admits no valid radial interval at all.
struct EmptyDomain : std::runtime_error {
    explicit EmptyDomain(const std::string& w) : std::runtime_error(w) {}
};

// Chart evaluation at q = 0 (or r = 0), which no chart covers.
struct OriginError : std::runtime_error {
    explicit OriginError(const std::string& w) : std::runtime_error(w) {}
};

struct UnknownExample : std::invalid_argument {
    explicit UnknownExample(const std::string& w) : std::invalid_argument(w) {}
};

// Adaptive quadrature could not reach the requested tolerance.
struct QuadratureFailure : std::runtime_error {
    explicit QuadratureFailure(const std::string& w) : std::runtime_error(w) {}
};

// Oscillator-kind intrinsic potential with vanishing inner expression.
struct SingularInner : std::runtime_error {
    explicit SingularInner(const std::string& w) : std::runtime_error(w) {}
};

// Step size underflow away from a chart boundary.
struct StepFailure : std::runtime_error {
    explicit StepFailure(const std::string& w) : std::runtime_error(w) {}
};

// Orbit-equation normalization vanishes (circular orbits and other double roots).
struct DegenerateOrbit : std::runtime_error {
    explicit DegenerateOrbit(const std::string& w) : std::runtime_error(w) {}
};

struct InsufficientData : std::runtime_error {
    explicit InsufficientData(const std::string& w) : std::runtime_error(w) {}
};

struct InsufficientTurningPoints : std::runtime_error {
    explicit InsufficientTurningPoints(const std::string& w) : std::runtime_error(w) {}
};

// Operation requires J2 > 0.
struct RadialOrbit : std::runtime_error {
    explicit RadialOrbit(const std::string& w) : std::runtime_error(w) {}
};

// No phase representative compatible with the requested cover branch.
struct InconsistentBranch : std::runtime_error {
    explicit InconsistentBranch(const std::string& w) : std::runtime_error(w) {}
};

// Trajectory too short to visit every cover branch.
struct InsufficientCoverage : std::runtime_error {
    explicit InsufficientCoverage(const std::string& w) : std::runtime_error(w) {}
};

}  // namespace bertrand
