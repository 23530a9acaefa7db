#pragma once

// Subspaces in three interchangeable forms (orthonormal basis, projection
// p_S, symmetry eps_S = 2 p_S - I), the Lagrangian predicate, the
// five-subspace decomposition of a pair of symmetries, the tangent
// projection Pi_eps and a sampled covariant derivative.

#include <vector>

#include "lagrangian/complex_structure.hpp"
#include "lagrangian/operator_core.hpp"

namespace lagrangian {

class Subspace {
 public:
  // `basis` must have orthonormal columns; zero columns is the trivial space.
  explicit Subspace(Matrix basis, double rel_tol = Tolerances{}.symmetry);

  // Orthonormalizes arbitrary spanning columns; directions whose singular
  // value falls below rank_tol * (largest singular value) are dropped.
  static Subspace from_spanning(const Matrix& columns, double rank_tol = Tolerances{}.rank);
  static Subspace trivial(Index ambient_dim);
  static Subspace full(Index ambient_dim);

  const Matrix& basis() const { return basis_; }
  Index ambient_dim() const { return basis_.rows(); }
  Index dim() const { return basis_.cols(); }

 private:
  Matrix basis_;
};

class Projection {
 public:
  explicit Projection(Matrix p, double rel_tol = Tolerances{}.symmetry);

  const Matrix& mat() const { return p_; }
  Index dim() const { return p_.rows(); }

 private:
  Matrix p_;
};

class Symmetry {
 public:
  explicit Symmetry(Matrix eps, double rel_tol = Tolerances{}.symmetry);

  const Matrix& mat() const { return eps_; }
  Index dim() const { return eps_.rows(); }

 private:
  Matrix eps_;
};

Projection projection_from_subspace(const Subspace& s);
Symmetry symmetry_from_projection(const Projection& p);
// The +1 eigenspace.
Subspace subspace_from_symmetry(const Symmetry& eps);

Projection projection_from_symmetry(const Symmetry& eps);
Symmetry symmetry_from_subspace(const Subspace& s);
Subspace subspace_from_projection(const Projection& p);

Projection orthogonal_complement(const Projection& p);

// eps_S anticommutes with J and dim S = n. Throws InvariantError on odd or
// mismatched ambient dimension.
bool is_lagrangian(const Subspace& s, const ComplexStructure& j, const Tolerances& tol = {});
bool is_lagrangian(const Symmetry& eps, const ComplexStructure& j, const Tolerances& tol = {});

// Orthonormal bases of the joint reducing blocks of (eps0, eps1):
//   h11 = S0 cap S1, h00 = S0^perp cap S1^perp,
//   h10 = S0 cap S1^perp, h01 = S0^perp cap S1,
//   h0  = orthogonal complement of their sum (generic position).
struct FiveWayDecomposition {
  Subspace h11;
  Subspace h00;
  Subspace h01;
  Subspace h10;
  Subspace h0;
};

FiveWayDecomposition five_way_decompose(const Symmetry& eps0, const Symmetry& eps1,
                                        const Tolerances& tol = {});

// Same, for a Lagrangian pair: checks the Lagrangian predicate on both
// inputs (InvariantError) and then that J swaps h00 <-> h11 and
// h01 <-> h10 with matching dimensions (SolverError otherwise).
FiveWayDecomposition five_way_decompose(const Symmetry& eps0, const Symmetry& eps1,
                                        const ComplexStructure& j, const Tolerances& tol = {});

// Pi_eps(a) = (a - eps a eps) / 2.
SymmetricOp tangent_project(const Symmetry& eps, const SymmetricOp& a);
// The same projection written as (I - p) a p + p a (I - p).
SymmetricOp tangent_project_blocks(const Symmetry& eps, const SymmetricOp& a);

// A symmetric v with v eps = -eps v and v J = -J v.
class TangentVector {
 public:
  TangentVector(Symmetry base, SymmetricOp v, ComplexStructure j,
                double rel_tol = Tolerances{}.symmetry);

  const Symmetry& base() const { return base_; }
  const SymmetricOp& v() const { return v_; }
  const ComplexStructure& j() const { return j_; }

 private:
  Symmetry base_;
  SymmetricOp v_;
  ComplexStructure j_;
};

struct TimedSymmetry {
  double t;
  Symmetry eps;
};

struct TimedOp {
  double t;
  SymmetricOp op;
};

// D/dt X = Pi_{eps(t)}(X'(t)) on a uniform grid: central differences inside,
// second-order one-sided differences at the two ends.
std::vector<TimedOp> covariant_derivative(const std::vector<TimedSymmetry>& curve,
                                          const std::vector<TimedOp>& field);

}  // namespace lagrangian
