#pragma once

#include <stdexcept>
#include <string>

namespace tsl {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Precondition violation (bad argument, malformed input).
struct InvalidArgument : Error {
    using Error::Error;
};

/// The total control Rabi frequency vanishes where a field division needs it.
/// Physically this is the breakdown of adiabatic following at a vortex core.
struct ZeroControlField : Error {
    using Error::Error;
};

/// Time step violates a stability or accuracy bound (CFL, relaxation time).
struct StepTooLarge : Error {
    using Error::Error;
};

/// Phase is ill-defined on the winding-number sampling circle.
struct AmplitudeTooSmall : Error {
    using Error::Error;
};

/// Closed-form loss ratio requires equal retrieval-control widths.
struct WidthMismatch : Error {
    using Error::Error;
};

/// Adaptive quadrature exhausted its refinement budget.
struct QuadratureNonConvergent : Error {
    using Error::Error;
};

/// Too much power near the grid boundary for a trustworthy energy integral.
struct GridTooCoarse : Error {
    using Error::Error;
};

/// Scenario config parse/validation failure; message carries line context.
struct ConfigError : Error {
    using Error::Error;
};

} // namespace tsl
