#pragma once

#include <stdexcept>
#include <string>

namespace cspace {

/// Base for every error raised by the library. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value violates a type invariant (weights not normalized, empty central region, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A name (domain, dimension, concept) could not be resolved.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// Malformed knowledge-base file.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Numeric limits were hit: alpha underflow, lattice size cap, ...
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace cspace
