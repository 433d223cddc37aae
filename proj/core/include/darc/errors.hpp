// errors.hpp — exception hierarchy shared by all darc modules

#pragma once

#include <stdexcept>
#include <string>

namespace darc {

// Base class for every error raised by the library. `module` names the
// component that detected the problem so CLI output can carry provenance.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& message)
      : std::runtime_error("[" + module + "] " + message), module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

// Invalid input specification (bad term set, malformed config values).
struct SpecError : Error {
  using Error::Error;
};

// Eigenvalue ladder does not organize into the expected doublet bands.
struct StructureError : Error {
  using Error::Error;
};

// A doublet gap collapsed below resolvable size.
struct DegeneracyError : Error {
  using Error::Error;
};

// One of the working hypotheses (laser statistics, scale separation) failed
// hard enough that results would be meaningless.
struct HypothesisError : Error {
  using Error::Error;
};

// Numerical backend failure (non-convergence, violated internal identity).
struct NumericalError : Error {
  using Error::Error;
};

// Argument outside the mathematical domain of an operation.
struct DomainError : Error {
  using Error::Error;
};

// Time integrator refused or failed (step size, trace drift, photon budget).
struct IntegratorError : Error {
  using Error::Error;
};

}  // namespace darc
