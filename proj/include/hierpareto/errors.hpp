#pragma once

#include <stdexcept>
#include <string>

namespace hierpareto {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Model or file configuration that cannot be used.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Integral, moment or series that does not converge.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

// Iterative procedure that failed to reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace hierpareto
