#pragma once

#include <stdexcept>
#include <string>

namespace advconf {

// Base for all library errors; the CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed model document or constraint text.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed syntax that violates a model invariant.
class ModelError : public Error {
 public:
  using Error::Error;
};

// A configuration that is incomplete or assigns out-of-domain values.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

class SamplingError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class DegenerateTrainingSet : public Error {
 public:
  DegenerateTrainingSet() : Error("degenerate training set") {}
};

}  // namespace advconf
