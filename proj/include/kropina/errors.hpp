#pragma once

#include <stdexcept>

namespace kropina {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed model text: bad JSON, missing or ill-typed fields, conflicting
/// structure entries.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A structural invariant does not hold, or an argument is outside its
/// domain (wrong subspace, non-finite entries, invalid indices).
class ValidationError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Base for the Kropina degeneracies.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// |<y,X>| fell below the admissibility threshold; the Kropina norm is
/// undefined on the hyperplane beta = 0.
class DegenerateDirection : public DegeneracyError {
 public:
  using DegeneracyError::DegeneracyError;
};

/// The flag pair is (numerically) linearly dependent.
class DegenerateFlag : public DegeneracyError {
 public:
  using DegeneracyError::DegeneracyError;
};

}  // namespace kropina
