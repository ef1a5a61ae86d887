#pragma once

#include <stdexcept>
#include <string>

namespace mcdp {

// Base for every error raised by the library. Infeasibility is never an
// error: queries return empty antichains for that.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Element/poset kind mismatch, malformed poset definitions.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// Ports or posets that cannot be wired together.
class CompositionError : public Error {
 public:
  using Error::Error;
};

// A query the representation cannot answer finitely (for example the
// implementation set of an identity, or h' of a +-sum).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, std::string previous, std::string last)
      : Error(what + "\n  previous: " + previous + "\n  last:     " + last),
        previous_(std::move(previous)),
        last_(std::move(last)) {}

  const std::string& previous() const { return previous_; }
  const std::string& last() const { return last_; }

 private:
  std::string previous_;
  std::string last_;
};

// Invalid physical model (non-stabilizable, undetectable, bad parameters).
class ModelError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double residual)
      : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class CatalogueError : public Error {
 public:
  using Error::Error;
};

class AggregationError : public Error {
 public:
  using Error::Error;
};

}  // namespace mcdp
