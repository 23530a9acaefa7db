#include "lagrangian/operator_core.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

namespace lagrangian {

namespace {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

// Eigen-decomposition of the Hermitian matrix i*z for antisymmetric z, so
// that z = W diag(-i mu) W^H.
Eigen::SelfAdjointEigenSolver<ComplexMatrix> hermitian_split(const Matrix& z) {
  const ComplexMatrix h = Complex(0.0, 1.0) * z.cast<Complex>();
  return Eigen::SelfAdjointEigenSolver<ComplexMatrix>(h);
}

double sinc(double x) {
  if (std::abs(x) < 1e-5) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

// theta / sin(theta) as a function of c = cos(theta), theta in [0, pi).
double angle_over_sine(double c) {
  const double theta = std::acos(std::clamp(c, -1.0, 1.0));
  if (theta < 1e-4) return 1.0 + theta * theta / 6.0;
  return theta / std::sin(theta);
}

void require_orthonormal_columns(const Matrix& q, std::string_view what) {
  require_finite(q, what);
  if (q.cols() == 0) return;
  const Matrix gram = q.transpose() * q;
  const double err = max_abs(gram - Matrix::Identity(q.cols(), q.cols()));
  const double tol = Tolerances{}.symmetry * static_cast<double>(std::max<Index>(q.rows(), 1));
  if (err > tol) {
    throw InvariantError(std::string(what) + ": columns are not orthonormal (error " +
                         std::to_string(err) + ")");
  }
}

PrincipalAngles principal_angles_ordered(const Matrix& a, const Matrix& b) {
  // Requires b.cols() <= a.cols(); there is exactly one angle per column of b.
  const Index k = b.cols();
  PrincipalAngles out;
  out.angles.resize(k);
  out.left_vectors.resize(a.rows(), k);
  out.right_vectors.resize(a.rows(), k);
  if (k == 0) return out;

  const Matrix m = a.transpose() * b;
  Eigen::JacobiSVD<Matrix> cos_svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Matrix residual = b - a * m;
  Eigen::JacobiSVD<Matrix> sin_svd(residual, Eigen::ComputeThinV);

  const Vector& sines = sin_svd.singularValues();  // descending
  const double split = std::sin(kPi / 4.0);
  Index small = 0;
  for (Index i = 0; i < k; ++i) {
    if (sines(i) < split) ++small;
  }

  // Small angles: sine route, ascending.
  for (Index j = 0; j < small; ++j) {
    const Index src = k - 1 - j;
    const Vector y = sin_svd.matrixV().col(src);
    out.angles(j) = std::asin(std::min(sines(src), 1.0));
    out.right_vectors.col(j) = b * y;
    Vector left = a * (m * y);
    const double nrm = left.norm();
    out.left_vectors.col(j) = left / nrm;
  }
  // Large angles: cosine route. Cosines are descending, so the largest
  // k - small angles sit at the tail.
  const Vector& cosines = cos_svd.singularValues();
  for (Index j = small; j < k; ++j) {
    out.angles(j) = std::acos(std::min(cosines(j), 1.0));
    out.left_vectors.col(j) = a * cos_svd.matrixU().col(j);
    out.right_vectors.col(j) = b * cos_svd.matrixV().col(j);
  }
  return out;
}

}  // namespace

double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

bool all_finite(const Matrix& a) { return a.size() == 0 || a.allFinite(); }

void require_finite(const Matrix& a, std::string_view what) {
  if (!all_finite(a)) throw InvariantError(std::string(what) + ": non-finite entry");
}

void require_square(const Matrix& a, std::string_view what) {
  if (a.rows() != a.cols()) {
    throw InvariantError(std::string(what) + ": matrix is " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + ", expected square");
  }
}

double symmetry_tolerance(const Matrix& a, double rel) {
  return rel * static_cast<double>(a.rows()) * max_abs(a);
}

double predicate_tolerance(const Matrix& a, double rel) {
  return rel * static_cast<double>(a.rows()) * std::max(1.0, max_abs(a));
}

SymmetricOp::SymmetricOp(Matrix m, double rel_tol) : m_(std::move(m)) {
  require_square(m_, "symmetric operator");
  require_finite(m_, "symmetric operator");
  const double err = max_abs(m_ - m_.transpose());
  if (err > symmetry_tolerance(m_, rel_tol)) {
    throw InvariantError("symmetric operator: asymmetry " + std::to_string(err) +
                         " exceeds tolerance");
  }
}

AntisymmetricOp::AntisymmetricOp(Matrix m, double rel_tol) : m_(std::move(m)) {
  require_square(m_, "antisymmetric operator");
  require_finite(m_, "antisymmetric operator");
  const double err = max_abs(m_ + m_.transpose());
  if (err > symmetry_tolerance(m_, rel_tol)) {
    throw InvariantError("antisymmetric operator: symmetric part " + std::to_string(err) +
                         " exceeds tolerance");
  }
}

AntisymmetricOp AntisymmetricOp::zero(Index n) { return AntisymmetricOp(Matrix::Zero(n, n)); }

SpectralDecomposition spectral_decompose(const SymmetricOp& a) {
  const Index n = a.dim();
  if (n == 0) return {Vector(0), Matrix(0, 0)};
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.mat());
  if (es.info() != Eigen::Success) throw SolverError("spectral_decompose: eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

SymmetricOp apply_function(const SpectralDecomposition& d,
                           const std::function<double(double)>& f) {
  const Index n = d.eigenvalues.size();
  Vector values(n);
  for (Index i = 0; i < n; ++i) {
    values(i) = f(d.eigenvalues(i));
    if (!std::isfinite(values(i))) {
      throw InvariantError("apply_function: f is undefined at eigenvalue " +
                           std::to_string(d.eigenvalues(i)));
    }
  }
  const Matrix& v = d.eigenvectors;
  return SymmetricOp(symmetric_part(v * values.asDiagonal() * v.transpose()));
}

Matrix expm_antisymmetric(const AntisymmetricOp& z) {
  const Index n = z.dim();
  if (n == 0) return Matrix(0, 0);
  const auto es = hermitian_split(z.mat());
  const Vector& mu = es.eigenvalues();
  const ComplexMatrix& w = es.eigenvectors();
  Eigen::VectorXcd phase(n);
  for (Index i = 0; i < n; ++i) phase(i) = std::polar(1.0, -mu(i));
  return (w * phase.asDiagonal() * w.adjoint()).real();
}

Matrix expm_frechet_antisymmetric(const AntisymmetricOp& z, const Matrix& e) {
  const Index n = z.dim();
  if (e.rows() != n || e.cols() != n) {
    throw InvariantError("expm_frechet_antisymmetric: direction has wrong shape");
  }
  if (n == 0) return Matrix(0, 0);
  const auto es = hermitian_split(z.mat());
  const Vector& mu = es.eigenvalues();
  const ComplexMatrix& w = es.eigenvectors();
  ComplexMatrix rotated = w.adjoint() * e.cast<Complex>() * w;
  // Divided differences of exp at the eigenvalues -i*mu, written so that
  // nearby eigenvalues do not cancel.
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const double mean = 0.5 * (mu(i) + mu(j));
      const double half_gap = 0.5 * (mu(i) - mu(j));
      rotated(i, j) *= std::polar(sinc(half_gap), -mean);
    }
  }
  return (w * rotated * w.adjoint()).real();
}

AntisymmetricOp logm_special_orthogonal(const Matrix& g, double eigenvalue_gap) {
  require_square(g, "logm_special_orthogonal");
  require_finite(g, "logm_special_orthogonal");
  const Index n = g.rows();
  if (n == 0) return AntisymmetricOp::zero(0);
  const Matrix id = Matrix::Identity(n, n);
  const double orth_err = max_abs(g.transpose() * g - id);
  if (orth_err > 1e-8 * static_cast<double>(n)) {
    throw InvariantError("logm_special_orthogonal: input is not orthogonal (error " +
                         std::to_string(orth_err) + ")");
  }

  // The polar factor of (I + g)/2 is the principal square root of g; its
  // singular values are cos(phi/2) over the rotation angles phi of g, and
  // |exp(i phi) + 1| = 2 cos(phi/2).
  Eigen::JacobiSVD<Matrix> svd(0.5 * (id + g), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double smallest = svd.singularValues()(n - 1);
  if (2.0 * smallest < eigenvalue_gap) {
    throw SolverError("non-generic rotation: principal log undefined (eigenvalue within " +
                      std::to_string(2.0 * smallest) + " of -1)");
  }
  const Matrix root = svd.matrixU() * svd.matrixV().transpose();

  // On each rotation plane of the root, log = K * theta / sin(theta) with
  // K the antisymmetric part and cos(theta) the symmetric part.
  const SymmetricOp cosines(symmetric_part(root));
  const SymmetricOp scale = apply_function(spectral_decompose(cosines), angle_over_sine);
  const Matrix sines = antisymmetric_part(root);
  return AntisymmetricOp(antisymmetric_part(sines * scale.mat()));
}

AngleClass classify_angle(double angle, const Tolerances& tol) {
  if (angle <= tol.angle_zero) return AngleClass::Coincident;
  if (angle >= kHalfPi - tol.angle_right) return AngleClass::Orthogonal;
  return AngleClass::Interior;
}

PrincipalAngles principal_angles(const Matrix& q0, const Matrix& q1, const Tolerances&) {
  if (q0.rows() != q1.rows()) {
    throw InvariantError("principal_angles: ambient dimensions differ");
  }
  require_orthonormal_columns(q0, "principal_angles (first basis)");
  require_orthonormal_columns(q1, "principal_angles (second basis)");
  if (q0.cols() >= q1.cols()) return principal_angles_ordered(q0, q1);
  PrincipalAngles swapped = principal_angles_ordered(q1, q0);
  std::swap(swapped.left_vectors, swapped.right_vectors);
  return swapped;
}

SchattenOrder::SchattenOrder(int k) : k_(k) {
  if (k < 1) throw InvariantError("Schatten order must be an integer >= 1 or infinity");
}

Vector singular_values(const Matrix& a) {
  if (a.size() == 0) return Vector(0);
  return Eigen::JacobiSVD<Matrix>(a).singularValues();
}

double schatten_norm(const Matrix& a, SchattenOrder k) {
  require_finite(a, "schatten_norm");
  if (a.size() == 0) return 0.0;
  if (k.is_infinite()) {
    // Largest eigenvalue of a^T a (or a a^T, whichever is smaller).
    const Matrix gram = a.rows() < a.cols() ? Matrix(a * a.transpose()) : Matrix(a.transpose() * a);
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(es.eigenvalues().maxCoeff(), 0.0));
  }
  if (k.k() == 2) return a.norm();
  if (k.k() == 4) {
    const Matrix gram = a.transpose() * a;
    return std::sqrt(gram.norm());
  }
  const Vector s = singular_values(a);
  const double top = s(0);
  if (top == 0.0) return 0.0;
  double sum = 0.0;
  for (Index i = 0; i < s.size(); ++i) sum += std::pow(s(i) / top, k.k());
  return top * std::pow(sum, 1.0 / k.k());
}

}  // namespace lagrangian
