#pragma once

#include <stdexcept>
#include <string>

namespace lagrangian {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An input violates a type invariant or an operation precondition
// (shape, finiteness, symmetry, Lagrangian predicate, ...).
class InvariantError : public Error {
 public:
  using Error::Error;
};

// A numerical procedure could not produce a valid result for valid input,
// e.g. a principal logarithm requested across an eigenvalue at -1.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace lagrangian
