#pragma once

#include <stdexcept>
#include <string>

namespace lolo {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A value that is outside its admissible range (non-positive leaf size, ...).
struct InvalidParameterError : Error {
  using Error::Error;
};

// Input data that violates an operation's contract (empty cloud, missing
// scan-line indices, mismatched attribute lengths, ...).
struct InvalidInputError : Error {
  using Error::Error;
};

// Too few samples to solve the problem at all (< 3 correspondence pairs).
struct InsufficientDataError : Error {
  using Error::Error;
};

// Geometrically rank-deficient configuration (collinear alignment points,
// zero-extent segment).
struct DegenerateGeometryError : Error {
  using Error::Error;
};

// ICP found no correspondences within the admissible distance.
struct NoOverlapError : Error {
  using Error::Error;
};

// Smoothness queried too close to a scan-line boundary.
struct OutOfWindowError : Error {
  using Error::Error;
};

// Motion estimation had fewer valid correspondences than degrees of freedom.
struct UnderConstrainedError : Error {
  using Error::Error;
};

// Operation invoked on an object whose lifecycle state forbids it.
struct InvalidStateError : Error {
  using Error::Error;
};

// Segmentation of a map produced no qualifying segment.
struct EmptyMapError : Error {
  using Error::Error;
};

// Malformed file content; message carries the byte or line position.
struct ParseError : Error {
  using Error::Error;
};

// Filesystem-level failure (unreadable/unwritable path).
struct IoError : Error {
  using Error::Error;
};

}  // namespace lolo
