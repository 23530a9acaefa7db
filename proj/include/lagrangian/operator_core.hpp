#pragma once

// Dense real operator substrate: validated symmetric/antisymmetric wrappers,
// symmetric functional calculus, exponential and half principal logarithm on
// the orthogonal group, principal angles, and Schatten norms.

#include <Eigen/Dense>

#include <functional>
#include <numbers>
#include <string_view>

#include "lagrangian/error.hpp"
#include "lagrangian/tolerances.hpp"

namespace lagrangian {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHalfPi = std::numbers::pi / 2.0;

double max_abs(const Matrix& a);
bool all_finite(const Matrix& a);

void require_finite(const Matrix& a, std::string_view what);
void require_square(const Matrix& a, std::string_view what);

// Tolerance for symmetry-type checks on `a`: rel * n * max|a_ij|.
double symmetry_tolerance(const Matrix& a, double rel);
// Tolerance for commutator-type checks: rel * n * max(1, max|a_ij|).
double predicate_tolerance(const Matrix& a, double rel);

inline Matrix symmetric_part(const Matrix& a) { return 0.5 * (a + a.transpose()); }
inline Matrix antisymmetric_part(const Matrix& a) { return 0.5 * (a - a.transpose()); }

class SymmetricOp {
 public:
  // Rejects non-square, non-finite or asymmetric input; never symmetrizes.
  explicit SymmetricOp(Matrix m, double rel_tol = Tolerances{}.symmetry);

  const Matrix& mat() const { return m_; }
  Index dim() const { return m_.rows(); }

 private:
  Matrix m_;
};

class AntisymmetricOp {
 public:
  explicit AntisymmetricOp(Matrix m, double rel_tol = Tolerances{}.symmetry);

  static AntisymmetricOp zero(Index n);

  const Matrix& mat() const { return m_; }
  Index dim() const { return m_.rows(); }

 private:
  Matrix m_;
};

struct SpectralDecomposition {
  Vector eigenvalues;   // ascending
  Matrix eigenvectors;  // orthonormal columns, paired with eigenvalues
};

SpectralDecomposition spectral_decompose(const SymmetricOp& a);

// V diag(f(lambda)) V^T. Throws InvariantError if f is not finite at some
// eigenvalue. Removable singularities must be handled by the caller's f.
SymmetricOp apply_function(const SpectralDecomposition& d,
                           const std::function<double(double)>& f);

// exp(z) for antisymmetric z; lands in SO(n).
Matrix expm_antisymmetric(const AntisymmetricOp& z);

// Frechet derivative of exp at an antisymmetric z in the direction e:
// d/ds exp(z + s e) at s = 0.
Matrix expm_frechet_antisymmetric(const AntisymmetricOp& z, const Matrix& e);

// Default gap for the -1 eigenvalue test of logm_special_orthogonal:
// |lambda + 1| below this means a rotation angle within ~2e-8 of pi, which
// is the image of a principal angle within angle_right = 1e-8 of pi/2.
inline constexpr double kDefaultEigenvalueGap = 2e-8;

// Half of the principal logarithm of an orthogonal g: the antisymmetric z
// with exp(2 z) = g and ||z|| < pi/2. Throws SolverError when g has an
// eigenvalue within `eigenvalue_gap` of -1 ("non-generic rotation").
AntisymmetricOp logm_special_orthogonal(const Matrix& g,
                                        double eigenvalue_gap = kDefaultEigenvalueGap);

struct PrincipalAngles {
  Vector angles;         // ascending, in [0, pi/2]
  Matrix left_vectors;   // orthonormal columns in span(q0), one per angle
  Matrix right_vectors;  // orthonormal columns in span(q1), one per angle
};

enum class AngleClass { Coincident, Orthogonal, Interior };

AngleClass classify_angle(double angle, const Tolerances& tol = {});

// Principal angles between span(q0) and span(q1) (orthonormal columns).
// Angles below pi/4 come from sines (singular values of (I - q0 q0^T) q1),
// the rest from cosines (singular values of q0^T q1).
PrincipalAngles principal_angles(const Matrix& q0, const Matrix& q1,
                                 const Tolerances& tol = {});

// Order of a Schatten norm: a finite integer k >= 1 or infinity.
class SchattenOrder {
 public:
  explicit SchattenOrder(int k);
  static SchattenOrder infinity() { return SchattenOrder(); }

  bool is_infinite() const { return k_ == 0; }
  int k() const { return k_; }

 private:
  SchattenOrder() = default;
  int k_ = 0;
};

Vector singular_values(const Matrix& a);
double schatten_norm(const Matrix& a, SchattenOrder k);
inline double op_norm(const Matrix& a) { return schatten_norm(a, SchattenOrder::infinity()); }

}  // namespace lagrangian
