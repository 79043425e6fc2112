#pragma once

#include <stdexcept>
#include <string>

namespace lorentz {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The ray walked past the cell horizon without touching an obstacle
/// (typically a direction close to an open rational corridor).
class NoCollisionWithinHorizon : public Error {
public:
    using Error::Error;
};

/// The slope's continued fraction terminated (or produced a digit beyond
/// double resolution); the direction has to be perturbed or rejected.
class RationalSlope : public Error {
public:
    using Error::Error;
};

/// Directions with reduced slope 0 or 1.
class DegenerateDirection : public Error {
public:
    using Error::Error;
};

class EmptyEnsemble : public Error {
public:
    using Error::Error;
};

/// Two histograms / density grids with different binning or metadata.
class BinMismatch : public Error {
public:
    using Error::Error;
};

/// A parameter outside the domain of the receiving operation.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

} // namespace lorentz
