#include "lagrangian/grassmannian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lagrangian {

namespace {

double uniform_step_tolerance(double h) { return 1e-9 * std::max(1.0, std::abs(h)); }

// Columns of `eigenvectors` whose eigenvalue has the requested sign.
Matrix eigenspace(const SpectralDecomposition& d, bool positive) {
  std::vector<Index> picked;
  for (Index i = 0; i < d.eigenvalues.size(); ++i) {
    if ((d.eigenvalues(i) > 0.0) == positive) picked.push_back(i);
  }
  Matrix out(d.eigenvectors.rows(), static_cast<Index>(picked.size()));
  for (std::size_t c = 0; c < picked.size(); ++c) {
    out.col(static_cast<Index>(c)) = d.eigenvectors.col(picked[c]);
  }
  return out;
}

// Left principal vectors of (a, b) whose angle is at most `threshold`; they
// span (approximately) span(a) cap span(b).
Matrix intersect(const Matrix& a, const Matrix& b, double threshold) {
  if (a.cols() == 0 || b.cols() == 0) return Matrix(a.rows(), 0);
  const PrincipalAngles pa = principal_angles(a, b);
  Index count = 0;
  while (count < pa.angles.size() && pa.angles(count) <= threshold) ++count;
  return pa.left_vectors.leftCols(count);
}

Matrix hstack(const std::vector<const Matrix*>& parts, Index rows) {
  Index cols = 0;
  for (const Matrix* m : parts) cols += m->cols();
  Matrix out(rows, cols);
  Index at = 0;
  for (const Matrix* m : parts) {
    out.middleCols(at, m->cols()) = *m;
    at += m->cols();
  }
  return out;
}

// Largest deviation of J*from from span(to).
double swap_residual(const Matrix& j, const Matrix& from, const Matrix& to) {
  if (from.cols() == 0) return 0.0;
  const Matrix image = j * from;
  return max_abs(image - to * (to.transpose() * image));
}

}  // namespace

Subspace::Subspace(Matrix basis, double rel_tol) : basis_(std::move(basis)) {
  require_finite(basis_, "subspace basis");
  if (basis_.cols() > basis_.rows()) {
    throw InvariantError("subspace basis has more columns than rows");
  }
  if (basis_.cols() == 0) return;
  const Matrix gram = basis_.transpose() * basis_;
  const double err = max_abs(gram - Matrix::Identity(basis_.cols(), basis_.cols()));
  if (err > rel_tol * static_cast<double>(std::max<Index>(basis_.rows(), 1))) {
    throw InvariantError("subspace basis is not orthonormal (error " + std::to_string(err) + ")");
  }
}

Subspace Subspace::from_spanning(const Matrix& columns, double rank_tol) {
  require_finite(columns, "spanning set");
  if (columns.cols() == 0) return trivial(columns.rows());
  Eigen::JacobiSVD<Matrix> svd(columns, Eigen::ComputeThinU);
  const Vector& s = svd.singularValues();
  Index rank = 0;
  while (rank < s.size() && s(rank) > rank_tol * s(0)) ++rank;
  return Subspace(svd.matrixU().leftCols(rank));
}

Subspace Subspace::trivial(Index ambient_dim) { return Subspace(Matrix(ambient_dim, 0)); }

Subspace Subspace::full(Index ambient_dim) {
  return Subspace(Matrix::Identity(ambient_dim, ambient_dim));
}

Projection::Projection(Matrix p, double rel_tol) : p_(SymmetricOp(std::move(p), rel_tol).mat()) {
  const double err = max_abs(p_ * p_ - p_);
  if (err > predicate_tolerance(p_, rel_tol)) {
    throw InvariantError("projection: p^2 != p (residual " + std::to_string(err) + ")");
  }
}

Symmetry::Symmetry(Matrix eps, double rel_tol) : eps_(SymmetricOp(std::move(eps), rel_tol).mat()) {
  const double err = max_abs(eps_ * eps_ - Matrix::Identity(eps_.rows(), eps_.cols()));
  if (err > predicate_tolerance(eps_, rel_tol)) {
    throw InvariantError("symmetry: eps^2 != I (residual " + std::to_string(err) + ")");
  }
}

Projection projection_from_subspace(const Subspace& s) {
  const Matrix& b = s.basis();
  return Projection(symmetric_part(b * b.transpose()));
}

Symmetry symmetry_from_projection(const Projection& p) {
  return Symmetry(2.0 * p.mat() - Matrix::Identity(p.dim(), p.dim()));
}

Subspace subspace_from_symmetry(const Symmetry& eps) {
  if (eps.dim() == 0) return Subspace::trivial(0);
  return Subspace(eigenspace(spectral_decompose(SymmetricOp(eps.mat())), true));
}

Projection projection_from_symmetry(const Symmetry& eps) {
  return Projection(0.5 * (eps.mat() + Matrix::Identity(eps.dim(), eps.dim())));
}

Symmetry symmetry_from_subspace(const Subspace& s) {
  return symmetry_from_projection(projection_from_subspace(s));
}

Subspace subspace_from_projection(const Projection& p) {
  return subspace_from_symmetry(symmetry_from_projection(p));
}

Projection orthogonal_complement(const Projection& p) {
  return Projection(Matrix::Identity(p.dim(), p.dim()) - p.mat());
}

bool is_lagrangian(const Symmetry& eps, const ComplexStructure& j, const Tolerances& tol) {
  if (eps.dim() != j.dim()) {
    throw InvariantError("is_lagrangian: ambient dimension " + std::to_string(eps.dim()) +
                         " does not match J of size " + std::to_string(j.dim()));
  }
  if (std::abs(eps.mat().trace()) > 0.5) return false;  // dim S != n
  return anticommutes_with_J(eps.mat(), j, tol.symmetry);
}

bool is_lagrangian(const Subspace& s, const ComplexStructure& j, const Tolerances& tol) {
  if (s.ambient_dim() % 2 != 0) {
    throw InvariantError("is_lagrangian: ambient dimension must be even");
  }
  if (s.ambient_dim() != j.dim()) {
    throw InvariantError("is_lagrangian: ambient dimension does not match J");
  }
  if (s.dim() != j.half_dim()) return false;
  return is_lagrangian(symmetry_from_subspace(s), j, tol);
}

FiveWayDecomposition five_way_decompose(const Symmetry& eps0, const Symmetry& eps1,
                                        const Tolerances& tol) {
  if (eps0.dim() != eps1.dim()) {
    throw InvariantError("five_way_decompose: ambient dimensions differ");
  }
  const Index dim = eps0.dim();
  const SpectralDecomposition d0 = spectral_decompose(SymmetricOp(eps0.mat()));
  const SpectralDecomposition d1 = spectral_decompose(SymmetricOp(eps1.mat()));
  const Matrix s0 = eigenspace(d0, true);
  const Matrix s0c = eigenspace(d0, false);
  const Matrix s1 = eigenspace(d1, true);
  const Matrix s1c = eigenspace(d1, false);

  Matrix h11 = intersect(s0, s1, tol.angle_zero);
  Matrix h00 = intersect(s0c, s1c, tol.angle_zero);
  Matrix h10 = intersect(s0, s1c, tol.angle_right);
  Matrix h01 = intersect(s0c, s1, tol.angle_right);

  const Matrix taken = hstack({&h11, &h00, &h10, &h01}, dim);
  Matrix h0(dim, 0);
  if (taken.cols() < dim) {
    const Matrix rest = Matrix::Identity(dim, dim) - taken * taken.transpose();
    const SpectralDecomposition dr = spectral_decompose(SymmetricOp(symmetric_part(rest)));
    std::vector<Index> picked;
    for (Index i = 0; i < dim; ++i) {
      if (dr.eigenvalues(i) > 0.5) picked.push_back(i);
    }
    h0.resize(dim, static_cast<Index>(picked.size()));
    for (std::size_t c = 0; c < picked.size(); ++c) {
      h0.col(static_cast<Index>(c)) = dr.eigenvectors.col(picked[c]);
    }
  }
  if (taken.cols() + h0.cols() != dim) {
    throw SolverError("five_way_decompose: blocks do not span the ambient space");
  }
  return {Subspace(std::move(h11)), Subspace(std::move(h00)), Subspace(std::move(h01)),
          Subspace(std::move(h10)), Subspace(std::move(h0))};
}

FiveWayDecomposition five_way_decompose(const Symmetry& eps0, const Symmetry& eps1,
                                        const ComplexStructure& j, const Tolerances& tol) {
  if (!is_lagrangian(eps0, j, tol)) throw InvariantError("first symmetry is not Lagrangian");
  if (!is_lagrangian(eps1, j, tol)) throw InvariantError("second symmetry is not Lagrangian");
  FiveWayDecomposition f = five_way_decompose(eps0, eps1, tol);
  if (f.h01.dim() != f.h10.dim() || f.h11.dim() != f.h00.dim()) {
    throw SolverError("five_way_decompose: Lagrangian pair produced unbalanced blocks (h11 " +
                      std::to_string(f.h11.dim()) + ", h00 " + std::to_string(f.h00.dim()) +
                      ", h01 " + std::to_string(f.h01.dim()) + ", h10 " +
                      std::to_string(f.h10.dim()) + ")");
  }
  // Principal vectors at angles within the bucketing threshold are exact
  // only to about that threshold, so the swap check is correspondingly loose.
  const double limit = 1e-6;
  const Matrix& jm = j.mat();
  const double worst = std::max({swap_residual(jm, f.h00.basis(), f.h11.basis()),
                                 swap_residual(jm, f.h11.basis(), f.h00.basis()),
                                 swap_residual(jm, f.h01.basis(), f.h10.basis()),
                                 swap_residual(jm, f.h10.basis(), f.h01.basis())});
  if (worst > limit) {
    throw SolverError("five_way_decompose: J does not swap the intersection blocks (residual " +
                      std::to_string(worst) + ")");
  }
  // Rebuild the partner blocks as exact J-images so that h11 + h00,
  // h01 + h10 and h0 are J-invariant to rounding.
  const Index dim = eps0.dim();
  Matrix h00 = jm * f.h11.basis();
  Matrix h10 = jm * f.h01.basis();
  const Matrix taken = hstack({&f.h11.basis(), &h00, &f.h01.basis(), &h10}, dim);
  Matrix h0(dim, 0);
  if (taken.cols() < dim) {
    const Matrix rest = Matrix::Identity(dim, dim) - taken * taken.transpose();
    const SpectralDecomposition dr = spectral_decompose(SymmetricOp(symmetric_part(rest)));
    h0 = dr.eigenvectors.rightCols(dim - taken.cols());
  }
  return {f.h11, Subspace(std::move(h00)), f.h01, Subspace(std::move(h10)),
          Subspace(std::move(h0))};
}

SymmetricOp tangent_project(const Symmetry& eps, const SymmetricOp& a) {
  if (a.dim() != eps.dim()) throw InvariantError("tangent_project: dimension mismatch");
  const Matrix& e = eps.mat();
  return SymmetricOp(symmetric_part(0.5 * (a.mat() - e * a.mat() * e)));
}

SymmetricOp tangent_project_blocks(const Symmetry& eps, const SymmetricOp& a) {
  if (a.dim() != eps.dim()) throw InvariantError("tangent_project: dimension mismatch");
  const Matrix p = projection_from_symmetry(eps).mat();
  const Matrix q = Matrix::Identity(p.rows(), p.cols()) - p;
  return SymmetricOp(symmetric_part(q * a.mat() * p + p * a.mat() * q));
}

TangentVector::TangentVector(Symmetry base, SymmetricOp v, ComplexStructure j, double rel_tol)
    : base_(std::move(base)), v_(std::move(v)), j_(std::move(j)) {
  if (v_.dim() != base_.dim() || v_.dim() != j_.dim()) {
    throw InvariantError("tangent vector: dimension mismatch");
  }
  const Matrix& e = base_.mat();
  const double tol = predicate_tolerance(v_.mat(), rel_tol);
  const double anti_eps = max_abs(v_.mat() * e + e * v_.mat());
  if (anti_eps > tol) {
    throw InvariantError("tangent vector: v does not anticommute with the base symmetry "
                         "(residual " + std::to_string(anti_eps) + ")");
  }
  if (!anticommutes_with_J(v_.mat(), j_, rel_tol)) {
    throw InvariantError("tangent vector: v does not anticommute with J");
  }
}

std::vector<TimedOp> covariant_derivative(const std::vector<TimedSymmetry>& curve,
                                          const std::vector<TimedOp>& field) {
  const std::size_t m = curve.size();
  if (m < 3) throw InvariantError("covariant_derivative: need at least 3 samples");
  if (field.size() != m) throw InvariantError("covariant_derivative: curve and field lengths differ");
  const double h = curve[1].t - curve[0].t;
  if (!(h > 0.0)) throw InvariantError("covariant_derivative: grid must be increasing");
  for (std::size_t i = 0; i < m; ++i) {
    const double expected = curve[0].t + h * static_cast<double>(i);
    if (std::abs(curve[i].t - expected) > uniform_step_tolerance(h) * static_cast<double>(m)) {
      throw InvariantError("covariant_derivative: grid is not uniform");
    }
    if (std::abs(field[i].t - curve[i].t) > uniform_step_tolerance(h)) {
      throw InvariantError("covariant_derivative: field and curve times differ");
    }
    if (field[i].op.dim() != curve[i].eps.dim()) {
      throw InvariantError("covariant_derivative: dimension mismatch");
    }
  }

  std::vector<TimedOp> out;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    Matrix diff;
    if (i == 0) {
      diff = (-3.0 * field[0].op.mat() + 4.0 * field[1].op.mat() - field[2].op.mat()) / (2.0 * h);
    } else if (i == m - 1) {
      diff = (3.0 * field[m - 1].op.mat() - 4.0 * field[m - 2].op.mat() + field[m - 3].op.mat()) /
             (2.0 * h);
    } else {
      diff = (field[i + 1].op.mat() - field[i - 1].op.mat()) / (2.0 * h);
    }
    out.push_back({curve[i].t, tangent_project(curve[i].eps, SymmetricOp(symmetric_part(diff)))});
  }
  return out;
}

}  // namespace lagrangian
