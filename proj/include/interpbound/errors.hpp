#pragma once

#include <stdexcept>

namespace interpbound {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input failed structural validation (sizes, signs, parse problems).
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// The sample set is affinely dependent: cond(Phi) exceeds the limit.
class SingularSimplex : public Error {
public:
    using Error::Error;
};

/// Eigenvalue sign counts of G disagree with the sign pattern of the
/// barycentric coordinates. Signals an ill-conditioned instance.
class SpectrumMismatch : public Error {
public:
    using Error::Error;
};

/// l1 + l3 vanishes, so the two lines defining the intersection point w
/// are parallel.
class DegenerateIntersection : public Error {
public:
    using Error::Error;
};

/// The two prescribed eigendirections of the oblique H are numerically
/// parallel.
class DegenerateDirections : public Error {
public:
    using Error::Error;
};

} // namespace interpbound
