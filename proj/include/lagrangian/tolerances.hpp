#pragma once

namespace lagrangian {

/// Numerical thresholds shared across the library.
///
/// `symmetry` is relative: a check on an n x n operator `a` uses
/// `symmetry * n * max(|a_ij|)` (or `max(1, max|a_ij|)` for commutator
/// predicates). The angle thresholds are absolute, in radians, and decide
/// when a principal angle counts as exactly 0 or exactly pi/2.
struct Tolerances {
  double symmetry = 1e-10;
  double angle_zero = 1e-8;
  double angle_right = 1e-8;
  double rank = 1e-8;
};

}  // namespace lagrangian
