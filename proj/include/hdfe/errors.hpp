#pragma once

#include <stdexcept>
#include <string>

namespace hdfe {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand lengths or matrix shapes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A value is outside its admissible range (zero vector, nonpositive
// parameter, divide-by-zero element, incomplete dataset spec, ...).
class ValueError : public Error {
 public:
  using Error::Error;
};

// An encoding was produced under a different configuration than the one
// it is being used with.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A file could not be parsed or written. Messages name the offending
// byte offset or CSV line where that is known.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace hdfe
