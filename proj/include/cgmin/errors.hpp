#pragma once

#include <stdexcept>
#include <string>

namespace cgmin {

/// Base class for all library exceptions.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A direction routine was handed a step pair with p'y <= 0.
struct CurvatureViolation : Error {
  using Error::Error;
};

/// A beta formula denominator vanished relative to its numerator.
struct DegenerateDenominator : Error {
  using Error::Error;
};

/// The Powell fraction (or a lambda initializer) was asked for at a point
/// with a zero gradient.
struct ZeroGradient : Error {
  using Error::Error;
};

/// The closed-form scalars of the regularized restart inverse are invalid;
/// signals corrupted restart memory.
struct DegenerateScalars : Error {
  using Error::Error;
};

/// The rank-one correction denominator d in the regularized update vanished.
struct DegenerateD : Error {
  using Error::Error;
};

/// Dense oracle inversion hit a rank-deficient matrix.
struct Singular : Error {
  using Error::Error;
};

/// Trace-derived statistics were requested from a run without traces.
struct NoTrace : Error {
  using Error::Error;
};

} // namespace cgmin
