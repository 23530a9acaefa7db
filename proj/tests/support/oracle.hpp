#pragma once

// Test-side reference computations. Nothing here calls into the library's
// numerical routines, so agreement with the library is evidence rather than
// tautology.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace oracle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = std::numbers::pi;

// splitmix64 stream with Box-Muller normals; independent of the library's
// generator so property tests do not share its bias.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * uniform());
  }

 private:
  std::uint64_t state_;
};

inline Matrix gaussian(Gen& g, Index r, Index c) {
  Matrix m(r, c);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) m(i, j) = g.normal();
  return m;
}

inline Matrix sym(Gen& g, Index n) {
  const Matrix a = gaussian(g, n, n);
  return 0.5 * (a + a.transpose());
}

inline Matrix antisym(Gen& g, Index n) {
  const Matrix a = gaussian(g, n, n);
  return 0.5 * (a - a.transpose());
}

// Haar-like orthogonal matrix from a Householder QR with sign fix.
inline Matrix orthogonal(Gen& g, Index n) {
  Eigen::HouseholderQR<Matrix> qr(gaussian(g, n, n));
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index i = 0; i < n; ++i)
    if (r(i, i) < 0) q.col(i) *= -1.0;
  return q;
}

inline Matrix standard_j(Index n) {
  Matrix j = Matrix::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = -Matrix::Identity(n, n);
  j.bottomLeftCorner(n, n) = Matrix::Identity(n, n);
  return j;
}

inline Matrix vertical(Index n) {
  Vector d(2 * n);
  d << -Vector::Ones(n), Vector::Ones(n);
  return d.asDiagonal();
}

// [[P, -Q], [Q, P]] for P + iQ.
inline Matrix realify(const CMatrix& m) {
  const Index n = m.rows();
  Matrix r(2 * n, 2 * n);
  r << m.real(), -m.imag(), m.imag(), m.real();
  return r;
}

inline CMatrix complex_unitary(Gen& g, Index n) {
  CMatrix a(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) a(i, j) = {g.normal(), g.normal()};
  Eigen::HouseholderQR<CMatrix> qr(a);
  return qr.householderQ();
}

// u diag(-I, I) u^T with u a random complex unitary in real form.
inline Matrix lagrangian(Gen& g, Index n) {
  const Matrix u = realify(complex_unitary(g, n));
  const Matrix e = u * vertical(n) * u.transpose();
  return 0.5 * (e + e.transpose());
}

// Taylor series with scaling and squaring, 30 terms.
inline Matrix expm(const Matrix& a) {
  const double nrm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int s = 0;
  while (nrm / std::ldexp(1.0, s) > 0.25) ++s;
  const Matrix b = a / std::ldexp(1.0, s);
  Matrix term = Matrix::Identity(a.rows(), a.cols());
  Matrix sum = term;
  for (int k = 1; k <= 30; ++k) {
    term = term * b / k;
    sum += term;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

inline double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

inline Vector singular_values(const Matrix& a) {
  // Square roots of the eigenvalues of a^T a, descending.
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.transpose() * a);
  Vector s = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().reverse();
  return s;
}

inline double op_norm(const Matrix& a) { return singular_values(a)(0); }

// Symmetry of the line through (cos a, sin a) in R^2.
inline Matrix line_symmetry(double a) {
  Matrix e(2, 2);
  e << std::cos(2 * a), std::sin(2 * a), std::sin(2 * a), -std::cos(2 * a);
  return e;
}

// p_{G_a} from the raw basis [I; a] via the normal equations.
inline Matrix graph_projection(const Matrix& a) {
  const Index n = a.rows();
  Matrix b(2 * n, n);
  b << Matrix::Identity(n, n), a;
  return b * (b.transpose() * b).inverse() * b.transpose();
}

}  // namespace oracle
