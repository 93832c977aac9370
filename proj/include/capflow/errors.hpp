#pragma once

#include <stdexcept>
#include <string>

namespace capflow {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an input value was violated.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Coincident nodes, self-intersection or loss of the graph property.
class DegenerateGeometryError : public Error {
 public:
  using Error::Error;
};

class InvalidIntegrandError : public Error {
 public:
  using Error::Error;
};

/// A flow step produced a state that violates the profile invariants.
class StepFailure : public Error {
 public:
  using Error::Error;
};

/// The inverse mean curvature flow speed 1/H is undefined below the floor.
class MinHReached : public Error {
 public:
  using Error::Error;
};

}  // namespace capflow
