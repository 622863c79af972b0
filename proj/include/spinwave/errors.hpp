#pragma once

#include <stdexcept>
#include <string>

namespace spinwave {

/// The harmonic ground state does not exist (or is too close to the
/// critical coupling to be computed reliably).
class InstabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative numerical procedure ran out of refinements.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double last, double previous)
      : std::runtime_error(what), last_(last), previous_(previous) {}

  double last() const { return last_; }
  double previous() const { return previous_; }

 private:
  double last_;
  double previous_;
};

/// Malformed or inconsistent run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace spinwave
