#include "lagrangian/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

namespace lagrangian {

namespace {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

constexpr double kNormSlack = 1e-10;

void require_same_dims(const Symmetry& eps0, const Symmetry& eps1, const ComplexStructure& j) {
  if (eps0.dim() != eps1.dim() || eps0.dim() != j.dim()) {
    throw InvariantError("dimension mismatch between symmetries and J (" +
                         std::to_string(eps0.dim()) + ", " + std::to_string(eps1.dim()) + ", " +
                         std::to_string(j.dim()) + ")");
  }
}

Matrix hcat(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

Matrix symmetric_exp_apply(const Matrix& z, double t, const Matrix& eps0) {
  const Matrix g = expm_antisymmetric(AntisymmetricOp(antisymmetric_part(2.0 * t * z)));
  return symmetric_part(g * eps0);
}

// Columns of the eigenvectors of a symmetric matrix selected by predicate.
template <typename Pred>
Matrix select_eigenvectors(const Matrix& a, Pred keep) {
  const SpectralDecomposition d = spectral_decompose(SymmetricOp(symmetric_part(a)));
  std::vector<Index> idx;
  for (Index i = 0; i < d.eigenvalues.size(); ++i) {
    if (keep(d.eigenvalues(i))) idx.push_back(i);
  }
  Matrix out(a.rows(), static_cast<Index>(idx.size()));
  for (std::size_t c = 0; c < idx.size(); ++c) out.col(static_cast<Index>(c)) = d.eigenvectors.col(idx[c]);
  return out;
}

// Generic-position generator on h0 from the principal-angle (Halmos)
// model: with c^2 = B0^T p1 B0 on the +1 part of eps0, x = arccos(c) and
// W = (I - p0) p1 B0 (cs)^{-1}, the rotation exp(W x B0^T - B0 x W^T) maps
// S0 cap h0 onto S1 cap h0.
Matrix halmos_generator(const Matrix& h0, const Symmetry& eps0, const Symmetry& eps1) {
  const Index dim = h0.rows();
  if (h0.cols() == 0) return Matrix::Zero(dim, dim);
  const Matrix reduced0 = h0.transpose() * eps0.mat() * h0;
  const Matrix b0 = h0 * select_eigenvectors(reduced0, [](double l) { return l > 0.0; });
  const Matrix n0 = h0 * select_eigenvectors(reduced0, [](double l) { return l < 0.0; });
  const Matrix p1 = 0.5 * (eps1.mat() + Matrix::Identity(dim, dim));

  const SpectralDecomposition c2 =
      spectral_decompose(SymmetricOp(symmetric_part(b0.transpose() * p1 * b0)));
  const Matrix x = apply_function(c2, [](double t) {
    const double c = std::clamp(t, 0.0, 1.0);
    return std::atan2(std::sqrt(1.0 - c), std::sqrt(c));
  }).mat();
  const SymmetricOp cs = apply_function(c2, [](double t) {
    const double c = std::clamp(t, 0.0, 1.0);
    return std::sqrt(c * (1.0 - c));
  });
  const Matrix cs_inv = cs.mat().inverse();
  if (!all_finite(cs_inv)) throw SolverError("Halmos route: degenerate angle on the generic block");
  const Matrix w = n0 * (n0.transpose() * p1 * b0) * cs_inv;
  return w * x * b0.transpose() - b0 * x * w.transpose();
}

double endpoint_limit(Index dim, const Tolerances& tol) {
  return std::max(1e-9 * static_cast<double>(dim), 4.0 * std::max(tol.angle_zero, tol.angle_right));
}

// Singular values of the complex matrix m, each appearing twice in its real form.
Vector complex_singular_values_squared(const CMatrix& m) {
  const CMatrix gram = m.adjoint() * m;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(gram, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseMax(0.0);
}

double real_form_norm(const Vector& sq, SchattenOrder k) {
  if (k.is_infinite()) return std::sqrt(sq.maxCoeff());
  if (k.k() == 2) return std::sqrt(2.0 * sq.sum());
  double top = std::sqrt(sq.maxCoeff());
  if (top == 0.0) return 0.0;
  double sum = 0.0;
  for (Index i = 0; i < sq.size(); ++i) sum += std::pow(std::sqrt(sq(i)) / top, k.k());
  return top * std::pow(2.0 * sum, 1.0 / k.k());
}

// Frechet derivative of exp at anti-Hermitian a in direction e.
CMatrix complex_expm_frechet(const CMatrix& a, const CMatrix& e) {
  const CMatrix h = Complex(0.0, 1.0) * a;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const Vector& mu = es.eigenvalues();
  const CMatrix& w = es.eigenvectors();
  CMatrix r = w.adjoint() * e * w;
  for (Index i = 0; i < r.rows(); ++i) {
    for (Index j = 0; j < r.cols(); ++j) {
      const double half_gap = 0.5 * (mu(i) - mu(j));
      const double sinc = std::abs(half_gap) < 1e-5 ? 1.0 - half_gap * half_gap / 6.0
                                                    : std::sin(half_gap) / half_gap;
      r(i, j) *= std::polar(sinc, -0.5 * (mu(i) + mu(j)));
    }
  }
  return w * r * w.adjoint();
}

}  // namespace

GeneratorResiduals generator_residuals(const Matrix& z, const Matrix& eps0, const Matrix& j) {
  GeneratorResiduals r;
  r.j_commutator = max_abs(z * j - j * z);
  r.base_anticommutator = max_abs(z * eps0 + eps0 * z);
  r.norm = op_norm(z);
  return r;
}

GeodesicGenerator::GeodesicGenerator(AntisymmetricOp z, Symmetry base, ComplexStructure j,
                                     const Tolerances& tol)
    : z_(std::move(z)), base_(std::move(base)), j_(std::move(j)) {
  if (z_.dim() != base_.dim() || z_.dim() != j_.dim()) {
    throw InvariantError("geodesic generator: dimension mismatch");
  }
  residuals_ = generator_residuals(z_.mat(), base_.mat(), j_.mat());
  const double limit = predicate_tolerance(z_.mat(), tol.symmetry);
  if (residuals_.j_commutator > limit) {
    throw InvariantError("geodesic generator: z does not commute with J (residual " +
                         std::to_string(residuals_.j_commutator) + ")");
  }
  if (residuals_.base_anticommutator > limit) {
    throw InvariantError("geodesic generator: z does not anticommute with eps0 (residual " +
                         std::to_string(residuals_.base_anticommutator) + ")");
  }
  if (residuals_.norm > kHalfPi + kNormSlack) {
    throw InvariantError("geodesic generator: ||z|| = " + std::to_string(residuals_.norm) +
                         " exceeds pi/2");
  }
}

Symmetry Geodesic::at(double t) const {
  return Symmetry(symmetric_exp_apply(gen_.z().mat(), t, gen_.base().mat()));
}

Matrix Geodesic::velocity(double t) const { return 2.0 * gen_.z().mat() * at(t).mat(); }

Geodesic exponential_map(const Symmetry& eps, const TangentVector& v) {
  if (max_abs(v.base().mat() - eps.mat()) > predicate_tolerance(eps.mat(), Tolerances{}.symmetry)) {
    throw InvariantError("exponential_map: tangent vector is based at a different point");
  }
  const Matrix z = 0.5 * v.v().mat() * eps.mat();
  return Geodesic(GeodesicGenerator(AntisymmetricOp(antisymmetric_part(z)), eps, v.j()));
}

Symmetry evaluate(const Geodesic& delta, double t) { return delta.at(t); }

GeodesicGenerator connect(const Symmetry& eps0, const Symmetry& eps1, const ComplexStructure& j,
                          ConnectRoute route, const Tolerances& tol) {
  require_same_dims(eps0, eps1, j);
  if (!is_lagrangian(eps0, j, tol)) throw InvariantError("connect: first symmetry is not Lagrangian");
  if (!is_lagrangian(eps1, j, tol)) throw InvariantError("connect: second symmetry is not Lagrangian");
  const Index dim = eps0.dim();
  if (max_abs(eps0.mat() - eps1.mat()) <= 1e-14 * static_cast<double>(dim)) {
    return GeodesicGenerator(AntisymmetricOp::zero(dim), eps0, j, tol);
  }

  const FiveWayDecomposition f = five_way_decompose(eps0, eps1, j, tol);
  Matrix z = Matrix::Zero(dim, dim);

  if (f.h01.dim() > 0) {
    const Matrix b = hcat(f.h01.basis(), f.h10.basis());
    const Matrix p = b * b.transpose();
    z += kHalfPi * p * j.mat() * p;
  }

  if (route == ConnectRoute::ProductLog) {
    const Matrix q = hcat(hcat(f.h0.basis(), f.h11.basis()), f.h00.basis());
    if (q.cols() > 0) {
      const Matrix g = q.transpose() * eps1.mat() * eps0.mat() * q;
      z += q * logm_special_orthogonal(g).mat() * q.transpose();
    }
  } else {
    z += halmos_generator(f.h0.basis(), eps0, eps1);
  }

  const Matrix za = antisymmetric_part(z);
  const double err = max_abs(symmetric_exp_apply(za, 1.0, eps0.mat()) - eps1.mat());
  if (err > endpoint_limit(dim, tol)) {
    throw SolverError("connect: generator misses the endpoint by " + std::to_string(err));
  }
  try {
    return GeodesicGenerator(AntisymmetricOp(za), eps0, j, tol);
  } catch (const InvariantError& e) {
    throw SolverError(std::string("connect: assembled generator is invalid: ") + e.what());
  }
}

double distance(const Symmetry& eps0, const Symmetry& eps1, const ComplexStructure& j,
                const Tolerances& tol) {
  return 2.0 * op_norm(connect(eps0, eps1, j, ConnectRoute::ProductLog, tol).z().mat());
}

double length(const Geodesic& delta, double t0, double t1, SchattenOrder k) {
  return std::abs(t1 - t0) * schatten_norm(2.0 * delta.generator().z().mat(), k);
}

double length(const std::vector<TimedSymmetry>& samples, SchattenOrder k) {
  const std::size_t m = samples.size();
  if (m < 2) throw InvariantError("length: need at least 2 samples");
  const double h = samples[1].t - samples[0].t;
  if (!(h > 0.0)) throw InvariantError("length: grid must be increasing");
  const double slack = 1e-9 * std::max(1.0, std::abs(h)) * static_cast<double>(m);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    if (std::abs(samples[i].t - (samples[0].t + h * static_cast<double>(i))) > slack) {
      throw InvariantError("length: grid is not uniform");
    }
    total += schatten_norm(samples[i + 1].eps.mat() - samples[i].eps.mat(), k);
  }
  if (std::abs(samples[m - 1].t - (samples[0].t + h * static_cast<double>(m - 1))) > slack) {
    throw InvariantError("length: grid is not uniform");
  }
  return total;
}

const char* to_string(Multiplicity m) {
  switch (m) {
    case Multiplicity::Unique:
      return "Unique";
    case Multiplicity::ExactlyTwo:
      return "ExactlyTwo";
    case Multiplicity::Infinite:
      return "Infinite";
  }
  return "Unknown";
}

MultiplicityReport classify_multiplicity(const GeodesicGenerator& g, const Tolerances& tol) {
  const CMatrix zc = complexify(g.z().mat(), g.j()).to_eigen();
  MultiplicityReport report;
  report.norm_gap = kHalfPi - g.residuals().norm;
  if (zc.rows() > 0) {
    // exp(2Z) has eigenvalue -1 exactly where iZ has eigenvalue +-pi/2.
    const CMatrix h = Complex(0.0, 1.0) * zc;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
    for (Index i = 0; i < es.eigenvalues().size(); ++i) {
      if (std::abs(es.eigenvalues()(i)) >= kHalfPi - tol.angle_right) ++report.minus_one_dim_complex;
    }
  }
  if (report.minus_one_dim_complex == 0) {
    report.classification = Multiplicity::Unique;
  } else if (report.minus_one_dim_complex == 1) {
    report.classification = Multiplicity::ExactlyTwo;
  } else {
    report.classification = Multiplicity::Infinite;
  }
  return report;
}

namespace {

// Vectors a_k spanning the +1 part of eps0 inside the pi-rotation block;
// the planes span{a_k, J a_k} are invariant under z.
Matrix pi_plane_anchors(const GeodesicGenerator& g, const Tolerances& tol) {
  const Matrix& z = g.z().mat();
  const double floor = kHalfPi - tol.angle_right;
  const Matrix block = select_eigenvectors(z.transpose() * z, [&](double l) {
    return l >= floor * floor;
  });
  if (block.cols() == 0) return block;
  const Matrix reduced = block.transpose() * g.base().mat() * block;
  const Matrix plus = block * select_eigenvectors(reduced, [](double l) { return l > 0.0; });
  // -Jz is symmetric and maps S0 into S0; on the block its eigenvalues are +-pi/2.
  const Matrix m = plus.transpose() * (-g.j().mat() * z) * plus;
  const SpectralDecomposition d = spectral_decompose(SymmetricOp(symmetric_part(m)));
  return plus * d.eigenvectors;
}

}  // namespace

GeodesicGenerator alternate_generator(const GeodesicGenerator& g, const std::vector<int>& signs,
                                      const Tolerances& tol) {
  const Matrix anchors = pi_plane_anchors(g, tol);
  if (anchors.cols() == 0) {
    throw InvariantError("alternate_generator: ||z|| is below pi/2, there is no pi-plane to flip");
  }
  if (static_cast<Index>(signs.size()) != anchors.cols()) {
    throw InvariantError("alternate_generator: expected " + std::to_string(anchors.cols()) +
                         " signs, got " + std::to_string(signs.size()));
  }
  const Index dim = g.dim();
  Matrix flip = Matrix::Zero(dim, dim);
  for (std::size_t k = 0; k < signs.size(); ++k) {
    if (signs[k] != 1 && signs[k] != -1) {
      throw InvariantError("alternate_generator: signs must be +1 or -1");
    }
    if (signs[k] == 1) continue;
    const Vector a = anchors.col(static_cast<Index>(k));
    const Vector ja = g.j().mat() * a;
    flip += a * a.transpose() + ja * ja.transpose();
  }
  const Matrix& z = g.z().mat();
  const Matrix flipped = z - 2.0 * z * flip;
  return GeodesicGenerator(AntisymmetricOp(antisymmetric_part(flipped)), g.base(), g.j(), tol);
}

std::vector<GeodesicGenerator> alternate_generators(const GeodesicGenerator& g, std::size_t cap,
                                                    const Tolerances& tol) {
  const Index d = pi_plane_anchors(g, tol).cols();
  if (d == 0) {
    throw InvariantError("alternate_generators: ||z|| is below pi/2, there is no pi-plane to flip");
  }
  std::vector<GeodesicGenerator> out;
  const std::uint64_t total = d >= 63 ? UINT64_MAX : (std::uint64_t{1} << d);
  for (std::uint64_t pattern = 0; pattern < total && out.size() < cap; ++pattern) {
    std::vector<int> signs(static_cast<std::size_t>(d), 1);
    for (Index k = 0; k < d && k < 63; ++k) {
      if ((pattern >> k) & 1U) signs[static_cast<std::size_t>(k)] = -1;
    }
    out.push_back(alternate_generator(g, signs, tol));
  }
  return out;
}

PerturbedGeodesic::PerturbedGeodesic(GeodesicGenerator gen, AntisymmetricOp w, double amplitude)
    : gen_(std::move(gen)), w_(std::move(w)), amplitude_(amplitude) {
  if (w_.dim() != gen_.dim()) throw InvariantError("perturbed geodesic: dimension mismatch");
  if (!commutes_with_J(w_.mat(), gen_.j())) {
    throw InvariantError("perturbed geodesic: direction does not commute with J");
  }
}

Symmetry PerturbedGeodesic::at(double t) const {
  const double rho = amplitude_ * std::sin(kPi * t);
  const Matrix a = t * (gen_.z().mat() + rho * w_.mat());
  return Symmetry(symmetric_exp_apply(a, 1.0, gen_.base().mat()));
}

Matrix PerturbedGeodesic::velocity(double t) const {
  const double rho = amplitude_ * std::sin(kPi * t);
  const double drho = amplitude_ * kPi * std::cos(kPi * t);
  const Matrix a = t * (gen_.z().mat() + rho * w_.mat());
  const Matrix da = gen_.z().mat() + (rho + t * drho) * w_.mat();
  const Matrix d = expm_frechet_antisymmetric(AntisymmetricOp(antisymmetric_part(2.0 * a)), 2.0 * da);
  return d * gen_.base().mat();
}

std::vector<double> PerturbedGeodesic::lengths(const std::vector<SchattenOrder>& orders,
                                               int intervals) const {
  if (intervals < 2 || intervals % 2 != 0) {
    throw InvariantError("perturbed geodesic: Simpson's rule needs an even interval count");
  }
  // Right multiplication by eps0 preserves singular values, and the
  // derivative commutes with J, so its norms come from the n x n complex form.
  const CMatrix zc = complexify(gen_.z().mat(), gen_.j()).to_eigen();
  const CMatrix wc = complexify(w_.mat(), gen_.j()).to_eigen();
  const double h = 1.0 / intervals;
  std::vector<double> sums(orders.size(), 0.0);
  for (int i = 0; i <= intervals; ++i) {
    const double t = h * i;
    const double rho = amplitude_ * std::sin(kPi * t);
    const double drho = amplitude_ * kPi * std::cos(kPi * t);
    const CMatrix a = 2.0 * t * (zc + rho * wc);
    const CMatrix da = 2.0 * (zc + (rho + t * drho) * wc);
    const Vector sq = complex_singular_values_squared(complex_expm_frechet(a, da));
    const double weight = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    for (std::size_t k = 0; k < orders.size(); ++k) sums[k] += weight * real_form_norm(sq, orders[k]);
  }
  for (double& s : sums) s *= h / 3.0;
  return sums;
}

}  // namespace lagrangian
