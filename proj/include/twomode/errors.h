#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include "twomode/trajectory.h"

namespace twomode {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// delta = sqrt((w1 - w2)^2 + 4 lambda^2) vanished: the closed form divides by it.
class DegenerateParameters : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A run that stopped early. The samples produced before the failure are kept.
class SimulationError : public Error {
 public:
  SimulationError(const std::string& what, Trajectory partial)
      : Error(what), partial_(std::move(partial)) {}

  const Trajectory& partial() const { return partial_; }

 private:
  Trajectory partial_;
};

// The rule drove an inertia parameter to a non-positive value.
class ParameterCollapse : public SimulationError {
 public:
  using SimulationError::SimulationError;
};

// An integrator entry blew past the stability bound.
class IntegrationDiverged : public SimulationError {
 public:
  using SimulationError::SimulationError;
};

}  // namespace twomode
