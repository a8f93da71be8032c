#pragma once

#include <stdexcept>
#include <string>

namespace thermomodal {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad user-facing input: counts, names, dimensions that do not resolve.
struct InvalidInputError : Error {
    using Error::Error;
};

// Scenario configuration problems (missing/ill-typed fields, dangling refs).
struct ConfigError : Error {
    using Error::Error;
};

// Element-level failure during matrix assembly (degenerate geometry).
struct AssemblyError : Error {
    using Error::Error;
};

// A model that cannot be built or used (zero free DOFs, singular A block).
struct InvalidModelError : Error {
    using Error::Error;
};

// K_ss is singular after boundary conditions: rigid body modes remain.
struct RigidBodyModeError : Error {
    using Error::Error;
};

// A normalization metric expected to be positive definite is not.
struct MetricError : Error {
    using Error::Error;
};

// A modal basis handed to an operation violates its preconditions.
struct InvalidBasisError : Error {
    using Error::Error;
};

// Problem size exceeds the configured dense eigensolver limit.
struct CapacityError : Error {
    using Error::Error;
};

// Purely-real eigenvalue count cannot be matched within the tolerance cap.
struct ClassificationError : Error {
    using Error::Error;
};

// Adaptive integrator step size underflowed.
struct StiffnessError : Error {
    using Error::Error;
};

struct DimensionError : Error {
    using Error::Error;
};

}  // namespace thermomodal
