#pragma once

#include <stdexcept>
#include <string>

namespace sketchfem {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input (mesh files, run configurations).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Input that parses but violates a contract: degenerate elements,
/// out-of-range indices, inadmissible coefficients, dimension mismatches.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine failed: factorization breakdown, rank deficiency,
/// eigensolver non-convergence.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The sketched reduced matrix has a non-positive Cholesky pivot.
class SketchSingular : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Corrupt, truncated or wrong-version binary container.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace sketchfem
