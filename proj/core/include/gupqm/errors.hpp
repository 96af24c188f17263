#pragma once

#include <stdexcept>
#include <string>

namespace gupqm {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value outside its documented domain (non-positive T, odd grid size, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A lattice or velocity crosses the GUP momentum/velocity bound.
class BoundViolation : public Error {
public:
    using Error::Error;
};

/// sin(omega T) too close to zero for the oscillator boundary-value problem.
class CausticError : public Error {
public:
    using Error::Error;
};

/// Iterative method did not settle within its iteration budget.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Oscillator-basis level inside the truncation band.
class TruncationError : public Error {
public:
    using Error::Error;
};

/// Sampled path too coarse for the finite-difference / quadrature stencils.
class MeshTooCoarse : public Error {
public:
    using Error::Error;
};

}  // namespace gupqm
