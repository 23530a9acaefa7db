#include "lagrangian/graph_charts.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

namespace lagrangian {

namespace {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Index half_of(Index dim, const char* what) {
  if (dim % 2 != 0) throw InvariantError(std::string(what) + ": ambient dimension must be even");
  return dim / 2;
}

// Singular when sigma_min <= rank * scale. A block cut from an orthonormal
// basis has scale 1; a free-standing operator is measured against its own
// largest singular value (scale <= 0).
bool full_rank(const Matrix& block, double rank_tol, double scale = 0.0) {
  if (block.cols() == 0) return true;
  if (block.rows() < block.cols()) return false;
  const Vector s = singular_values(block);
  const double ref = scale > 0.0 ? scale : s(0);
  return ref > 0.0 && s(s.size() - 1) > rank_tol * ref;
}

std::optional<Matrix> checked_solve_right(const Matrix& numerator, const Matrix& denominator,
                                          double rank_tol, double scale = 0.0) {
  // numerator * denominator^{-1}
  if (!full_rank(denominator, rank_tol, scale)) return std::nullopt;
  return Matrix(denominator.transpose().partialPivLu().solve(numerator.transpose()).transpose());
}

Matrix identity_graph_symmetry(Index n) {
  Matrix e = Matrix::Zero(2 * n, 2 * n);
  e.topRightCorner(n, n) = Matrix::Identity(n, n);
  e.bottomLeftCorner(n, n) = Matrix::Identity(n, n);
  return e;
}

Matrix codiagonal(const Matrix& y) {
  const Index n = y.rows();
  Matrix z = Matrix::Zero(2 * n, 2 * n);
  z.topRightCorner(n, n) = y;
  z.bottomLeftCorner(n, n) = -y;
  return z;
}

double wrap_phase(double phi) {
  double r = std::remainder(phi, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

}  // namespace

Matrix graph_columns(const SelfAdjointOp& a) {
  const Index n = a.dim();
  Matrix cols(2 * n, n);
  cols << Matrix::Identity(n, n), a.mat();
  return cols;
}

Subspace graph_subspace(const SelfAdjointOp& a) {
  // [I; a] (I + a^2)^{-1/2} has orthonormal columns.
  const SpectralDecomposition d = spectral_decompose(a);
  const SymmetricOp root_inv = apply_function(d, [](double l) { return 1.0 / std::sqrt(1.0 + l * l); });
  return Subspace(graph_columns(a) * root_inv.mat());
}

Projection graph_projection(const SelfAdjointOp& a) {
  const Index n = a.dim();
  const SpectralDecomposition d = spectral_decompose(a);
  const Matrix r = apply_function(d, [](double l) { return 1.0 / (1.0 + l * l); }).mat();
  const Matrix ar = apply_function(d, [](double l) { return l / (1.0 + l * l); }).mat();
  const Matrix a2r = apply_function(d, [](double l) { return l * l / (1.0 + l * l); }).mat();
  Matrix p(2 * n, 2 * n);
  p << r, ar, ar, a2r;
  return Projection(symmetric_part(p));
}

Symmetry graph_symmetry(const SelfAdjointOp& a) {
  return symmetry_from_projection(graph_projection(a));
}

Symmetry vertical_subspace(Index n) {
  if (n < 1) throw InvariantError("vertical_subspace: n must be at least 1");
  Vector d(2 * n);
  d << -Vector::Ones(n), Vector::Ones(n);
  return Symmetry(Matrix(d.asDiagonal()));
}

bool is_graph(const Subspace& s, const Tolerances& tol) {
  const Index n = half_of(s.ambient_dim(), "is_graph");
  return full_rank(s.basis().topRows(n), tol.rank, 1.0);
}

SelfAdjointOp recover_operator(const Subspace& s, const Tolerances& tol) {
  const Index n = half_of(s.ambient_dim(), "recover_operator");
  if (s.dim() != n) {
    throw SolverError("recover_operator: subspace has dimension " + std::to_string(s.dim()) +
                      ", a graph over R^" + std::to_string(n) + " needs " + std::to_string(n));
  }
  const Matrix top = s.basis().topRows(n);
  const Matrix bottom = s.basis().bottomRows(n);
  const auto a = checked_solve_right(bottom, top, tol.rank, 1.0);
  if (!a) throw SolverError("recover_operator: subspace is not a graph");
  const Vector sv = singular_values(top);
  const double cond = sv(0) / sv(sv.size() - 1);
  const double asym = max_abs(*a - a->transpose());
  if (asym > predicate_tolerance(*a, tol.symmetry) * std::max(1.0, cond)) {
    throw InvariantError("recover_operator: recovered operator is not symmetric (asymmetry " +
                         std::to_string(asym) + "); the subspace is not Lagrangian");
  }
  return SelfAdjointOp(symmetric_part(*a));
}

std::optional<SelfAdjointOp> vertical_chart_operator(const SymmetricOp& x, const Tolerances& tol) {
  const SpectralDecomposition d = spectral_decompose(x);
  for (Index i = 0; i < d.eigenvalues.size(); ++i) {
    if (std::abs(std::sin(d.eigenvalues(i))) <= tol.rank) return std::nullopt;
  }
  return apply_function(d, [](double l) { return std::cos(l) / std::sin(l); });
}

std::optional<SelfAdjointOp> identity_chart_operator(const SymmetricOp& x, const Tolerances& tol) {
  const SpectralDecomposition d = spectral_decompose(x);
  for (Index i = 0; i < d.eigenvalues.size(); ++i) {
    const double l = d.eigenvalues(i);
    if (std::abs(std::sin(l) + std::cos(l)) <= tol.rank) return std::nullopt;
  }
  return apply_function(d, [](double l) {
    return (std::cos(l) - std::sin(l)) / (std::sin(l) + std::cos(l));
  });
}

TransformedGraph transformed_graph_operator(const Matrix& u, const SelfAdjointOp& a,
                                            const Tolerances& tol) {
  const Index n = a.dim();
  if (u.rows() != 2 * n || u.cols() != 2 * n) {
    throw InvariantError("transformed_graph_operator: unitary has the wrong size");
  }
  const ComplexStructure j = ComplexStructure::standard(n);
  if (!is_complex_unitary(u, j, tol.symmetry)) {
    throw InvariantError("transformed_graph_operator: u is not a complex unitary");
  }
  TransformedGraph out;
  const Subspace image(u * graph_subspace(a).basis());
  out.is_graph = is_graph(image, tol);
  if (!out.is_graph) {
    out.residual_left_form = kNaN;
    out.residual_right_form = kNaN;
    return out;
  }
  out.b = recover_operator(image, tol);
  const Matrix x = u.topLeftCorner(n, n);
  const Matrix y = u.topRightCorner(n, n);
  const Matrix& am = a.mat();
  const auto left = checked_solve_right(-y + x * am, x + y * am, tol.rank);
  const auto right = checked_solve_right(-y + am * x, x + am * y, tol.rank);
  out.residual_left_form = left ? max_abs(*left - out.b->mat()) : kNaN;
  out.residual_right_form = right ? max_abs(*right - out.b->mat()) : kNaN;
  return out;
}

GraphWindowReport graph_window(const SymmetricOp& y, int grid, const Tolerances& tol) {
  if (grid < 2) throw InvariantError("graph_window: grid needs at least 2 points");
  const double nrm = op_norm(y.mat());
  if (nrm > kHalfPi + 1e-10) {
    throw InvariantError("graph_window: ||y|| = " + std::to_string(nrm) + " exceeds pi/2");
  }
  GraphWindowReport report;
  report.eigenvalues = spectral_decompose(y).eigenvalues;
  report.inside = true;
  for (Index i = 0; i < report.eigenvalues.size(); ++i) {
    const double l = report.eigenvalues(i);
    if (!(l > -kPi / 4.0 + 1e-8 && l <= kHalfPi + 1e-10)) report.inside = false;
  }
  if (!report.inside) return report;

  const Index n = y.dim();
  const Matrix z = codiagonal(y.mat());
  const Matrix start = graph_subspace(SelfAdjointOp(Matrix::Identity(n, n))).basis();
  report.grid_verified = true;
  for (int i = 0; i < grid; ++i) {
    const double t = static_cast<double>(i) / (grid - 1);
    const Matrix g = expm_antisymmetric(AntisymmetricOp(t * z));
    if (!is_graph(Subspace(g * start), tol)) {
      report.grid_verified = false;
      break;
    }
  }
  return report;
}

double graph_safe_radius(const GeodesicGenerator& g) {
  const double nrm = g.residuals().norm;
  if (nrm == 0.0) return std::numeric_limits<double>::infinity();
  return kPi / (4.0 * nrm);
}

bool verify_safe_radius(const GeodesicGenerator& g, int grid, const Tolerances& tol) {
  const Index n = half_of(g.dim(), "verify_safe_radius");
  const Matrix& base = g.base().mat();
  if (max_abs(base - identity_graph_symmetry(n)) > predicate_tolerance(base, tol.symmetry)) {
    throw InvariantError("verify_safe_radius: the geodesic must start at G_I");
  }
  if (grid < 2) throw InvariantError("verify_safe_radius: grid needs at least 2 points");
  const double radius = graph_safe_radius(g);
  const double end = std::isinf(radius) ? 1.0 : radius * (1.0 - 1e-3);
  const Geodesic delta(g);
  for (int i = 0; i < grid; ++i) {
    const double t = end * static_cast<double>(i) / (grid - 1);
    if (!is_graph(subspace_from_symmetry(delta.at(t)), tol)) return false;
  }
  return true;
}

double gap_distance(const SelfAdjointOp& a, const SelfAdjointOp& b) {
  if (a.dim() != b.dim()) throw InvariantError("gap_distance: dimension mismatch");
  return op_norm(graph_projection(a).mat() - graph_projection(b).mat());
}

ComplexMatrix cayley_transform(const SelfAdjointOp& a) {
  const SpectralDecomposition d = spectral_decompose(a);
  const Index n = a.dim();
  Eigen::VectorXcd values(n);
  for (Index i = 0; i < n; ++i) {
    const double l = d.eigenvalues(i);
    values(i) = Complex(l, -1.0) / Complex(l, 1.0);
  }
  const CMatrix v = d.eigenvectors.cast<Complex>();
  return ComplexMatrix::from_eigen(v * values.asDiagonal() * v.transpose());
}

Vector eigenphases(const ComplexMatrix& u) {
  const Index n = u.rows();
  Vector phases(n);
  if (n == 0) return phases;
  Eigen::ComplexEigenSolver<CMatrix> es(u.to_eigen(), false);
  for (Index i = 0; i < n; ++i) {
    double p = std::arg(es.eigenvalues()(i));
    if (p <= -kPi) p = kPi;
    phases(i) = p;
  }
  std::sort(phases.data(), phases.data() + n);
  return phases;
}

SymmetricOp codiagonal_block(const Matrix& z, double rel_tol) {
  const Index n = half_of(z.rows(), "codiagonal_block");
  require_square(z, "codiagonal_block");
  const double tol = predicate_tolerance(z, rel_tol);
  const Matrix y = z.topRightCorner(n, n);
  const double off = std::max({max_abs(z.topLeftCorner(n, n)), max_abs(z.bottomRightCorner(n, n)),
                               max_abs(z.bottomLeftCorner(n, n) + y)});
  if (off > tol) {
    throw InvariantError("generator is not of the codiagonal form [[0, y], [-y, 0]] (residual " +
                         std::to_string(off) + ")");
  }
  return SymmetricOp(symmetric_part(y), rel_tol);
}

CayleyCurve cayley_curve(const GeodesicGenerator& g, const std::vector<double>& grid,
                         const Tolerances& tol) {
  const Index n = half_of(g.dim(), "cayley_curve");
  const Matrix& base = g.base().mat();
  if (max_abs(base - identity_graph_symmetry(n)) > predicate_tolerance(base, tol.symmetry)) {
    throw InvariantError("cayley_curve: the geodesic must start at G_I");
  }
  const SymmetricOp y = codiagonal_block(g.z().mat(), tol.symmetry);
  const SpectralDecomposition dy = spectral_decompose(y);
  const CMatrix vy = dy.eigenvectors.cast<Complex>();
  const Geodesic delta(g);

  CayleyCurve curve;
  curve.min_gap = std::numeric_limits<double>::infinity();
  double previous_det = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid[i];
    const Subspace s = subspace_from_symmetry(delta.at(t));
    if (!is_graph(s, tol)) {
      throw SolverError("cayley_curve: delta(t) is not a graph at t = " + std::to_string(t));
    }
    const ComplexMatrix c = cayley_transform(recover_operator(s, tol));

    Eigen::VectorXcd closed(n);
    for (Index k = 0; k < n; ++k) closed(k) = std::polar(1.0, -(kHalfPi + 2.0 * t * dy.eigenvalues(k)));
    const CMatrix expected = vy * closed.asDiagonal() * vy.transpose();

    CayleyCurveSample sample;
    sample.t = t;
    sample.phases = eigenphases(c);
    sample.closed_form_residual = (c.to_eigen() - expected).cwiseAbs().maxCoeff();
    sample.min_gap_to_minus_one = std::numeric_limits<double>::infinity();
    for (Index k = 0; k < n; ++k) {
      sample.min_gap_to_minus_one =
          std::min(sample.min_gap_to_minus_one, std::abs(kPi - std::abs(sample.phases(k))));
    }
    const double det_phase = wrap_phase(sample.phases.sum());
    if (i > 0) curve.accumulated_phase += wrap_phase(det_phase - previous_det);
    previous_det = det_phase;

    curve.min_gap = std::min(curve.min_gap, sample.min_gap_to_minus_one);
    curve.max_closed_form_residual = std::max(curve.max_closed_form_residual, sample.closed_form_residual);
    curve.samples.push_back(std::move(sample));
  }
  curve.trivial_flow = !curve.samples.empty() && curve.min_gap > kPhaseTolerance;
  return curve;
}

}  // namespace lagrangian
