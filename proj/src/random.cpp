#include "lagrangian/random.hpp"

#include <cmath>

namespace lagrangian {

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * kPi * u2);
  has_spare_ = true;
  return r * std::cos(2.0 * kPi * u2);
}

Matrix random_gaussian(Rng& rng, Index rows, Index cols) {
  Matrix m(rows, cols);
  // Fill row by row so the stream order matches the row-major text format.
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
  }
  return m;
}

SymmetricOp random_symmetric(Rng& rng, Index n) {
  return SymmetricOp(symmetric_part(random_gaussian(rng, n, n)));
}

AntisymmetricOp random_antisymmetric(Rng& rng, Index n) {
  return AntisymmetricOp(antisymmetric_part(random_gaussian(rng, n, n)));
}

Matrix random_orthogonal(Rng& rng, Index n) {
  return expm_antisymmetric(random_antisymmetric(rng, n));
}

AntisymmetricOp random_complex_generator(Rng& rng, const ComplexStructure& j, double scale) {
  const Matrix x = random_antisymmetric(rng, j.dim()).mat();
  const Matrix& jm = j.mat();
  Matrix g = 0.5 * (x - jm * x * jm);
  const double nrm = op_norm(g);
  if (nrm > 0.0) g *= scale / nrm;
  return AntisymmetricOp(antisymmetric_part(g));
}

Matrix random_complex_unitary(Rng& rng, const ComplexStructure& j, double scale) {
  return expm_antisymmetric(random_complex_generator(rng, j, scale));
}

namespace {

Matrix vertical_in(const ComplexStructure& j) {
  const Index n = j.half_dim();
  Vector d(2 * n);
  d << -Vector::Ones(n), Vector::Ones(n);
  const Matrix& q = j.to_standard();
  return q * d.asDiagonal() * q.transpose();
}

}  // namespace

Symmetry random_lagrangian(Rng& rng, const ComplexStructure& j, double scale) {
  const Matrix u = random_complex_unitary(rng, j, scale);
  return Symmetry(symmetric_part(u * vertical_in(j) * u.transpose()));
}

std::pair<Symmetry, Symmetry> random_lagrangian_pair(Rng& rng, const ComplexStructure& j,
                                                     double scale) {
  Symmetry a = random_lagrangian(rng, j, scale);
  Symmetry b = random_lagrangian(rng, j, scale);
  return {std::move(a), std::move(b)};
}

std::pair<Symmetry, Symmetry> structured_lagrangian_pair(Rng& rng, Index zero, Index right,
                                                         Index generic, double margin) {
  const Index n = zero + right + generic;
  if (n < 1) throw InvariantError("structured_lagrangian_pair: empty configuration");
  const ComplexStructure j = ComplexStructure::standard(n);
  Vector theta(n);
  Index at = 0;
  for (Index i = 0; i < zero; ++i) theta(at++) = 0.0;
  for (Index i = 0; i < right; ++i) theta(at++) = rng.uniform() < 0.5 ? kHalfPi : -kHalfPi;
  for (Index i = 0; i < generic; ++i) {
    const double mag = rng.uniform(margin, kHalfPi - margin);
    theta(at++) = rng.uniform() < 0.5 ? mag : -mag;
  }
  const Matrix v = random_orthogonal(rng, n);
  const Matrix x = symmetric_part(v * theta.asDiagonal() * v.transpose());

  Matrix z = Matrix::Zero(2 * n, 2 * n);
  z.topRightCorner(n, n) = x;
  z.bottomLeftCorner(n, n) = -x;
  const Matrix eps0 = vertical_in(j);
  const Matrix eps1 = expm_antisymmetric(AntisymmetricOp(2.0 * z)) * eps0;
  const Matrix u = random_complex_unitary(rng, j, kPi);
  return {Symmetry(symmetric_part(u * eps0 * u.transpose())),
          Symmetry(symmetric_part(u * eps1 * u.transpose()))};
}

AntisymmetricOp random_horizontal_direction(Rng& rng, const Symmetry& eps,
                                            const ComplexStructure& j) {
  const Matrix x = random_antisymmetric(rng, j.dim()).mat();
  const Matrix& jm = j.mat();
  const Matrix& e = eps.mat();
  const Matrix commuting = 0.5 * (x - jm * x * jm);
  Matrix w = 0.5 * (commuting - e * commuting * e);
  const double nrm = op_norm(w);
  if (nrm == 0.0) throw SolverError("random_horizontal_direction: degenerate draw");
  w /= nrm;
  return AntisymmetricOp(antisymmetric_part(w));
}

}  // namespace lagrangian
