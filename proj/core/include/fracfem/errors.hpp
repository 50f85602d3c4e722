#pragma once

#include <stdexcept>
#include <string>

namespace fracfem {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Arguments outside an operation's domain (bad order, index, mesh pairing...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Invalid experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A linear solve failed; carries the residual that was reached.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

// A numerical invariant check did not hold.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace fracfem
