#pragma once

// Complex structure J on R^{2n}, the symplectic form w(xi, eta) = <J xi, eta>,
// the induced complex inner product, and the real <-> complex bridge.
//
// Standard form is J(xi, eta) = (-eta, xi) on R^n x R^n, paired with C^n
// through (x, y) <-> x + i y. A real operator commuting with the standard J
// has block form [[P, -Q], [Q, P]] and represents P + i Q.

#include <Eigen/Dense>

#include "lagrangian/operator_core.hpp"

namespace lagrangian {

class ComplexStructure {
 public:
  // Validates J^T = -J and J^2 = -I. A non-standard J is accepted and an
  // orthogonal change of basis to standard form is computed once.
  explicit ComplexStructure(Matrix j, double rel_tol = Tolerances{}.symmetry);

  static ComplexStructure standard(Index n);

  const Matrix& mat() const { return j_; }
  Index dim() const { return j_.rows(); }
  Index half_dim() const { return j_.rows() / 2; }
  bool is_standard() const { return standard_; }

  // Orthogonal q with q^T J q equal to the standard J of the same size.
  const Matrix& to_standard() const { return q_; }

 private:
  Matrix j_;
  Matrix q_;
  bool standard_ = false;
};

ComplexStructure standard_J(Index n);

double symplectic_form(const ComplexStructure& j, const Vector& xi, const Vector& eta);

struct ComplexScalarPair {
  double re = 0.0;
  double im = 0.0;
};

// <xi, eta>_J = <xi, eta> - i w(xi, eta).
ComplexScalarPair complex_inner_product(const ComplexStructure& j, const Vector& xi,
                                        const Vector& eta);

bool commutes_with_J(const Matrix& a, const ComplexStructure& j,
                     double rel_tol = Tolerances{}.symmetry);
bool anticommutes_with_J(const Matrix& a, const ComplexStructure& j,
                         double rel_tol = Tolerances{}.symmetry);

// u^T u = I and u J = J u.
bool is_complex_unitary(const Matrix& u, const ComplexStructure& j,
                        double rel_tol = Tolerances{}.symmetry);

// An n x n complex matrix stored as two real matrices.
struct ComplexMatrix {
  Matrix re;
  Matrix im;

  Index rows() const { return re.rows(); }
  Eigen::MatrixXcd to_eigen() const;
  static ComplexMatrix from_eigen(const Eigen::MatrixXcd& m);
};

// The n x n complex matrix of a J-commuting real 2n x 2n operator, in the
// standard-form coordinates of j. Throws InvariantError if a does not
// commute with J.
ComplexMatrix complexify(const Matrix& a, const ComplexStructure& j,
                         double rel_tol = Tolerances{}.symmetry);

// Inverse of complexify.
Matrix realify(const ComplexMatrix& m, const ComplexStructure& j);

}  // namespace lagrangian
