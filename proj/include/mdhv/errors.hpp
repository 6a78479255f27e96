#pragma once

#include <stdexcept>
#include <string>

namespace mdhv {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value violates a type invariant (norm, positivity, completeness, ...).
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// Preparation and measurement (or two operands) live in different dimensions.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An outcome label or index that the measurement does not define.
class LabelError : public Error {
 public:
  using Error::Error;
};

/// The model is not defined for the supplied context.
class ContextError : public Error {
 public:
  using Error::Error;
};

/// The requested operation has no meaning for this model or input.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace mdhv
