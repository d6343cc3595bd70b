#pragma once

#include <stdexcept>
#include <string>

namespace ucdyn {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Point/space kinds do not match.
class TypeError : public Error {
 public:
  using Error::Error;
};

// Empty inputs, out-of-range values, malformed descriptors.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A binary word lacks the trusted coordinates an operation needs.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// A check was refused because its precondition (e.g. isometric limit) fails.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Catalog lookup of an id that does not exist.
class UnknownIdError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

}  // namespace ucdyn
