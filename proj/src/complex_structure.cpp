#include "lagrangian/complex_structure.hpp"

#include <string>

namespace lagrangian {

namespace {

Matrix standard_matrix(Index n) {
  Matrix j = Matrix::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = -Matrix::Identity(n, n);
  j.bottomLeftCorner(n, n) = Matrix::Identity(n, n);
  return j;
}

// Builds q = [v_1 .. v_n, J v_1 .. J v_n] with {v_k, J v_k} orthonormal.
// Each step picks the standard basis vector with the largest residual after
// projecting out the J-invariant span collected so far, so the standard J
// yields q = I.
Matrix standard_basis_for(const Matrix& j) {
  const Index dim = j.rows();
  const Index n = dim / 2;
  Matrix q = Matrix::Zero(dim, dim);
  Matrix found(dim, 0);
  for (Index k = 0; k < n; ++k) {
    Index best = -1;
    double best_norm = -1.0;
    Vector best_vec;
    for (Index i = 0; i < dim; ++i) {
      Vector v = Vector::Unit(dim, i);
      for (int pass = 0; pass < 2; ++pass) v -= found * (found.transpose() * v);
      const double nrm = v.norm();
      if (nrm > best_norm + 1e-12) {
        best = i;
        best_norm = nrm;
        best_vec = v;
      }
    }
    if (best < 0 || best_norm < 1e-6) {
      throw SolverError("complex structure: failed to build a standard-form basis");
    }
    const Vector v = best_vec / best_norm;
    const Vector jv = j * v;
    q.col(k) = v;
    q.col(n + k) = jv;
    found.conservativeResize(Eigen::NoChange, found.cols() + 2);
    found.col(found.cols() - 2) = v;
    found.col(found.cols() - 1) = jv;
  }
  return q;
}

}  // namespace

ComplexStructure::ComplexStructure(Matrix j, double rel_tol) : j_(std::move(j)) {
  require_square(j_, "complex structure");
  require_finite(j_, "complex structure");
  const Index dim = j_.rows();
  if (dim == 0 || dim % 2 != 0) {
    throw InvariantError("complex structure: dimension must be even and positive, got " +
                         std::to_string(dim));
  }
  const double tol = predicate_tolerance(j_, rel_tol);
  const double anti = max_abs(j_ + j_.transpose());
  if (anti > tol) {
    throw InvariantError("complex structure: J^T != -J (residual " + std::to_string(anti) + ")");
  }
  const double square = max_abs(j_ * j_ + Matrix::Identity(dim, dim));
  if (square > tol) {
    throw InvariantError("complex structure: J^2 != -I (residual " + std::to_string(square) +
                         ")");
  }
  const double orth = max_abs(j_.transpose() * j_ - Matrix::Identity(dim, dim));
  if (orth > tol) {
    throw InvariantError("complex structure: J is not orthogonal (residual " +
                         std::to_string(orth) + ")");
  }
  const Matrix reference = standard_matrix(dim / 2);
  standard_ = max_abs(j_ - reference) <= tol;
  q_ = standard_ ? Matrix(Matrix::Identity(dim, dim)) : standard_basis_for(j_);
}

ComplexStructure ComplexStructure::standard(Index n) {
  if (n < 1) throw InvariantError("standard_J: n must be at least 1");
  return ComplexStructure(standard_matrix(n));
}

ComplexStructure standard_J(Index n) { return ComplexStructure::standard(n); }

namespace {

void require_vector_pair(const ComplexStructure& j, const Vector& xi, const Vector& eta) {
  if (xi.size() != j.dim() || eta.size() != j.dim()) {
    throw InvariantError("vector dimension does not match the complex structure");
  }
}

}  // namespace

double symplectic_form(const ComplexStructure& j, const Vector& xi, const Vector& eta) {
  require_vector_pair(j, xi, eta);
  return (j.mat() * xi).dot(eta);
}

ComplexScalarPair complex_inner_product(const ComplexStructure& j, const Vector& xi,
                                        const Vector& eta) {
  require_vector_pair(j, xi, eta);
  return {xi.dot(eta), -symplectic_form(j, xi, eta)};
}

bool commutes_with_J(const Matrix& a, const ComplexStructure& j, double rel_tol) {
  if (a.rows() != j.dim() || a.cols() != j.dim()) return false;
  return max_abs(a * j.mat() - j.mat() * a) <= predicate_tolerance(a, rel_tol);
}

bool anticommutes_with_J(const Matrix& a, const ComplexStructure& j, double rel_tol) {
  if (a.rows() != j.dim() || a.cols() != j.dim()) return false;
  return max_abs(a * j.mat() + j.mat() * a) <= predicate_tolerance(a, rel_tol);
}

bool is_complex_unitary(const Matrix& u, const ComplexStructure& j, double rel_tol) {
  if (u.rows() != j.dim() || u.cols() != j.dim()) return false;
  const Matrix id = Matrix::Identity(u.rows(), u.cols());
  return max_abs(u.transpose() * u - id) <= predicate_tolerance(u, rel_tol) &&
         commutes_with_J(u, j, rel_tol);
}

Eigen::MatrixXcd ComplexMatrix::to_eigen() const {
  Eigen::MatrixXcd m(re.rows(), re.cols());
  m.real() = re;
  m.imag() = im;
  return m;
}

ComplexMatrix ComplexMatrix::from_eigen(const Eigen::MatrixXcd& m) { return {m.real(), m.imag()}; }

ComplexMatrix complexify(const Matrix& a, const ComplexStructure& j, double rel_tol) {
  if (a.rows() != j.dim() || a.cols() != j.dim()) {
    throw InvariantError("complexify: operator dimension does not match J");
  }
  if (!commutes_with_J(a, j, rel_tol)) {
    throw InvariantError("complexify: operator does not commute with J");
  }
  const Index n = j.half_dim();
  const Matrix s = j.is_standard() ? a : Matrix(j.to_standard().transpose() * a * j.to_standard());
  ComplexMatrix out;
  out.re = 0.5 * (s.topLeftCorner(n, n) + s.bottomRightCorner(n, n));
  out.im = 0.5 * (s.bottomLeftCorner(n, n) - s.topRightCorner(n, n));
  return out;
}

Matrix realify(const ComplexMatrix& m, const ComplexStructure& j) {
  const Index n = j.half_dim();
  if (m.re.rows() != n || m.re.cols() != n || m.im.rows() != n || m.im.cols() != n) {
    throw InvariantError("realify: complex matrix dimension does not match J");
  }
  Matrix s(2 * n, 2 * n);
  s << m.re, -m.im, m.im, m.re;
  if (j.is_standard()) return s;
  return j.to_standard() * s * j.to_standard().transpose();
}

}  // namespace lagrangian
