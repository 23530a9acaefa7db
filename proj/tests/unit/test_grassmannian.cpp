#include <doctest.h>

#include <cmath>
#include <vector>

#include "lagrangian/grassmannian.hpp"
#include "oracle.hpp"

using namespace lagrangian;

namespace {

Matrix diag2(double a, double b) {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = a;
  d(1, 1) = b;
  return d;
}

// Lagrangian pair with prescribed principal angles: in each complex
// coordinate plane span{e_k, e_{n+k}}, S0 holds e_{n+k} and S1 holds
// sin(theta_k) e_k + cos(theta_k) e_{n+k}; both are then moved by one random
// unitary.
struct AnglePair {
  Matrix eps0;
  Matrix eps1;
};

AnglePair angle_pair(oracle::Gen& g, const std::vector<double>& thetas) {
  const Index n = static_cast<Index>(thetas.size());
  Matrix v0 = Matrix::Zero(2 * n, n), v1 = Matrix::Zero(2 * n, n);
  for (Index k = 0; k < n; ++k) {
    v0(n + k, k) = 1;
    v1(k, k) = std::sin(thetas[static_cast<std::size_t>(k)]);
    v1(n + k, k) = std::cos(thetas[static_cast<std::size_t>(k)]);
  }
  const Matrix u = oracle::realify(oracle::complex_unitary(g, n));
  const Matrix id = Matrix::Identity(2 * n, 2 * n);
  Matrix e0 = u * (2 * v0 * v0.transpose() - id) * u.transpose();
  Matrix e1 = u * (2 * v1 * v1.transpose() - id) * u.transpose();
  return {0.5 * (e0 + e0.transpose()), 0.5 * (e1 + e1.transpose())};
}

Matrix proj(const Subspace& s) { return s.basis() * s.basis().transpose(); }

}  // namespace

TEST_CASE("representation conversions on examples") {
  const auto full = Subspace::full(3);
  CHECK(projection_from_subspace(full).mat() == Matrix::Identity(3, 3));
  CHECK(symmetry_from_subspace(full).mat() == Matrix::Identity(3, 3));
  const auto triv = Subspace::trivial(3);
  CHECK(triv.dim() == 0);
  CHECK(projection_from_subspace(triv).mat().isZero());
  CHECK(symmetry_from_subspace(triv).mat() == -Matrix::Identity(3, 3));
  CHECK(subspace_from_symmetry(Symmetry{-Matrix::Identity(3, 3)}).dim() == 0);

  Matrix e1(2, 1);
  e1 << 1, 0;
  const Subspace line{e1};
  CHECK(projection_from_subspace(line).mat() == diag2(1, 0));
  CHECK(symmetry_from_subspace(line).mat() == diag2(1, -1));

  CHECK_THROWS_AS(Subspace{Matrix::Ones(2, 1)}, InvariantError);
  CHECK_THROWS_AS(Projection{diag2(2, 0)}, InvariantError);
  CHECK_THROWS_AS(Symmetry{diag2(1, 0)}, InvariantError);
}

TEST_CASE("spanning columns are orthonormalized and rank-deficient ones dropped") {
  Matrix cols(3, 3);
  cols << 1, 2, 0, 0, 0, 0, 1, 2, 1;
  const auto s = Subspace::from_spanning(cols);
  CHECK(s.dim() == 2);
  CHECK(oracle::max_abs(s.basis().transpose() * s.basis() - Matrix::Identity(2, 2)) <= 1e-14);
  CHECK(Subspace::from_spanning(Matrix::Zero(3, 2)).dim() == 0);
}

TEST_CASE("round trips between representations (200 random)") {
  oracle::Gen g(31);
  for (int trial = 0; trial < 200; ++trial) {
    const Index m = g.integer(1, 10);
    const Index k = g.integer(0, m);
    const Subspace s{oracle::orthogonal(g, m).leftCols(k)};
    const Projection p = projection_from_subspace(s);
    const Symmetry e = symmetry_from_projection(p);
    CHECK(oracle::max_abs(projection_from_symmetry(e).mat() - p.mat()) <= 1e-11);
    CHECK(oracle::max_abs(symmetry_from_subspace(s).mat() - e.mat()) <= 1e-11);
    const Subspace back = subspace_from_symmetry(e);
    REQUIRE(back.dim() == k);
    CHECK(oracle::max_abs(proj(back) - p.mat()) <= 1e-11);
    CHECK(oracle::max_abs(e.mat() * back.basis() - back.basis()) <= 1e-11);
    CHECK(oracle::max_abs(proj(subspace_from_projection(p)) - p.mat()) <= 1e-11);
    const Projection c = orthogonal_complement(p);
    CHECK(oracle::max_abs(c.mat() + p.mat() - Matrix::Identity(m, m)) <= 1e-15);
    CHECK(oracle::max_abs(orthogonal_complement(c).mat() - p.mat()) <= 1e-14);
  }
  CHECK(orthogonal_complement(Projection{diag2(1, 0)}).mat() == diag2(0, 1));
  CHECK(orthogonal_complement(Projection{Matrix::Zero(2, 2)}).mat() == Matrix::Identity(2, 2));
}

TEST_CASE("Lagrangian predicate") {
  const auto j1 = standard_J(1);
  for (double a = 0.0; a < oracle::kPi; a += 0.13) {
    Matrix v(2, 1);
    v << std::cos(a), std::sin(a);
    CHECK(is_lagrangian(Subspace{v}, j1));
    CHECK(is_lagrangian(Symmetry{oracle::line_symmetry(a)}, j1));
  }
  const auto j2 = standard_J(2);
  Matrix horizontal = Matrix::Zero(4, 2);
  horizontal(0, 0) = horizontal(1, 1) = 1;
  CHECK(is_lagrangian(Subspace{horizontal}, j2));
  Matrix complex_line = Matrix::Zero(4, 2);
  complex_line(0, 0) = 1;
  complex_line(2, 1) = 1;  // e1 and J e1
  CHECK_FALSE(is_lagrangian(Subspace{complex_line}, j2));
  CHECK_FALSE(is_lagrangian(Subspace{Matrix::Identity(4, 1)}, j2));
  CHECK_FALSE(is_lagrangian(Symmetry{Matrix::Identity(4, 4)}, j2));
  CHECK_THROWS_AS(is_lagrangian(Subspace::full(3), j2), InvariantError);
  CHECK_THROWS_AS(is_lagrangian(Symmetry{Matrix::Identity(2, 2)}, j2), InvariantError);

  oracle::Gen g(32);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = g.integer(1, 6);
    CHECK(is_lagrangian(Symmetry{oracle::lagrangian(g, n)}, standard_J(n)));
  }
}

TEST_CASE("five-way decomposition examples") {
  const auto j1 = standard_J(1);
  SUBCASE("equal symmetries") {
    const Symmetry e{diag2(1, -1)};
    const auto d = five_way_decompose(e, e, j1);
    CHECK(d.h11.dim() == 1);
    CHECK(d.h00.dim() == 1);
    CHECK(d.h01.dim() + d.h10.dim() + d.h0.dim() == 0);
    CHECK(oracle::max_abs(proj(d.h11) - diag2(1, 0)) <= 1e-15);
  }
  SUBCASE("opposite symmetries") {
    const auto d = five_way_decompose(Symmetry{diag2(1, -1)}, Symmetry{diag2(-1, 1)}, j1);
    CHECK(d.h10.dim() == 1);
    CHECK(d.h01.dim() == 1);
    CHECK(oracle::max_abs(proj(d.h10) - diag2(1, 0)) <= 1e-15);
    CHECK(oracle::max_abs(proj(d.h01) - diag2(0, 1)) <= 1e-15);
    CHECK(d.h11.dim() + d.h00.dim() + d.h0.dim() == 0);
  }
  SUBCASE("lines at 0.7") {
    const auto d = five_way_decompose(Symmetry{oracle::line_symmetry(0.0)},
                                      Symmetry{oracle::line_symmetry(0.7)}, j1);
    CHECK(d.h0.dim() == 2);
    CHECK(d.h11.dim() + d.h00.dim() + d.h01.dim() + d.h10.dim() == 0);
  }
  SUBCASE("non-Lagrangian input") {
    CHECK_THROWS_AS(five_way_decompose(Symmetry{Matrix::Identity(2, 2)}, Symmetry{diag2(1, -1)}, j1),
                    InvariantError);
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(five_way_decompose(Symmetry{diag2(1, -1)}, Symmetry{Matrix::Identity(3, 3)}),
                    InvariantError);
  }
}

TEST_CASE("five-way decomposition properties on pairs with exact 0 and pi/2 angles (300 random)") {
  oracle::Gen g(33);
  for (int trial = 0; trial < 300; ++trial) {
    const int zero = g.integer(0, 2), right = g.integer(0, 2), generic = g.integer(0, 2);
    if (zero + right + generic == 0) continue;
    std::vector<double> th;
    for (int i = 0; i < zero; ++i) th.push_back(0.0);
    for (int i = 0; i < right; ++i) th.push_back(oracle::kPi / 2);
    for (int i = 0; i < generic; ++i) th.push_back(g.uniform(0.05, oracle::kPi / 2 - 0.05));
    const Index n = static_cast<Index>(th.size());
    const auto pr = angle_pair(g, th);
    const auto j = standard_J(n);
    const auto d = five_way_decompose(Symmetry{pr.eps0}, Symmetry{pr.eps1}, j);

    CHECK(d.h11.dim() == zero);
    CHECK(d.h00.dim() == zero);
    CHECK(d.h10.dim() == right);
    CHECK(d.h01.dim() == right);
    CHECK(d.h0.dim() == 2 * generic);

    const Matrix p11 = proj(d.h11), p00 = proj(d.h00), p10 = proj(d.h10), p01 = proj(d.h01), p0 = proj(d.h0);
    const Matrix id = Matrix::Identity(2 * n, 2 * n);
    CHECK(oracle::max_abs(p11 + p00 + p10 + p01 + p0 - id) <= 1e-9);
    CHECK(oracle::max_abs(p11 * p00) <= 1e-9);
    CHECK(oracle::max_abs(p10 * p0) <= 1e-9);
    CHECK(oracle::max_abs(p01 * p11) <= 1e-9);

    CHECK(oracle::max_abs(pr.eps0 * d.h11.basis() - d.h11.basis()) <= 1e-9);
    CHECK(oracle::max_abs(pr.eps1 * d.h11.basis() - d.h11.basis()) <= 1e-9);
    CHECK(oracle::max_abs(pr.eps0 * d.h00.basis() + d.h00.basis()) <= 1e-9);
    CHECK(oracle::max_abs(pr.eps1 * d.h00.basis() + d.h00.basis()) <= 1e-9);
    CHECK(oracle::max_abs(pr.eps0 * d.h10.basis() - d.h10.basis()) <= 1e-9);
    CHECK(oracle::max_abs(pr.eps1 * d.h10.basis() + d.h10.basis()) <= 1e-9);
    CHECK(oracle::max_abs(pr.eps0 * d.h01.basis() + d.h01.basis()) <= 1e-9);
    CHECK(oracle::max_abs(pr.eps1 * d.h01.basis() - d.h01.basis()) <= 1e-9);
    CHECK(oracle::max_abs(pr.eps0 * p0 - p0 * pr.eps0) <= 1e-9);
    CHECK(oracle::max_abs(pr.eps1 * p0 - p0 * pr.eps1) <= 1e-9);

    const Matrix& jm = j.mat();
    CHECK(oracle::max_abs(p00 * jm * d.h11.basis() - jm * d.h11.basis()) <= 1e-9);
    CHECK(oracle::max_abs(p11 * jm * d.h00.basis() - jm * d.h00.basis()) <= 1e-9);
    CHECK(oracle::max_abs(p10 * jm * d.h01.basis() - jm * d.h01.basis()) <= 1e-9);
    CHECK(oracle::max_abs(p01 * jm * d.h10.basis() - jm * d.h10.basis()) <= 1e-9);
  }
}

TEST_CASE("symmetry distance is twice the sine of the largest principal angle") {
  SUBCASE("lines in R^2") {
    for (double a : {0.0, 0.1, 0.7, 1.2, oracle::kPi / 2}) {
      const Matrix d = oracle::line_symmetry(0.0) - oracle::line_symmetry(a);
      CHECK(std::abs(oracle::op_norm(d) - 2 * std::sin(a)) <= 1e-14);
    }
  }
  SUBCASE("random pairs") {
    oracle::Gen g(34);
    for (int trial = 0; trial < 200; ++trial) {
      const Index n = g.integer(1, 6);
      const Matrix e0 = oracle::lagrangian(g, n);
      const Matrix e1 = oracle::lagrangian(g, n);
      const auto s0 = subspace_from_symmetry(Symmetry{e0});
      const auto s1 = subspace_from_symmetry(Symmetry{e1});
      const double theta = principal_angles(s0.basis(), s1.basis()).angles.maxCoeff();
      CHECK(std::abs(schatten_norm(e0 - e1, SchattenOrder::infinity()) - 2 * std::sin(theta)) <= 1e-10);
    }
  }
}

TEST_CASE("tangent projection") {
  oracle::Gen g(35);
  const Symmetry e{oracle::vertical(2)};
  Matrix blockdiag = Matrix::Zero(4, 4);
  blockdiag.topLeftCorner(2, 2) = oracle::sym(g, 2);
  blockdiag.bottomRightCorner(2, 2) = oracle::sym(g, 2);
  CHECK(oracle::max_abs(tangent_project(e, SymmetricOp{blockdiag}).mat()) == 0.0);
  Matrix off = Matrix::Zero(4, 4);
  off.topRightCorner(2, 2) = oracle::gaussian(g, 2, 2);
  off.bottomLeftCorner(2, 2) = off.topRightCorner(2, 2).transpose();
  CHECK(oracle::max_abs(tangent_project(e, SymmetricOp{off}).mat() - off) == 0.0);

  for (int trial = 0; trial < 300; ++trial) {
    const Index m = g.integer(1, 10);
    const Index k = g.integer(0, m);
    const Matrix q = oracle::orthogonal(g, m).leftCols(k);
    const Symmetry eps{2 * q * q.transpose() - Matrix::Identity(m, m)};
    const SymmetricOp a{oracle::sym(g, m)};
    const Matrix pa = tangent_project(eps, a).mat();
    CHECK(oracle::max_abs(pa - tangent_project_blocks(eps, a).mat()) <= 1e-12);
    CHECK(oracle::max_abs(tangent_project(eps, SymmetricOp{pa}).mat() - pa) <= 1e-12);
    CHECK(oracle::max_abs(pa * eps.mat() + eps.mat() * pa) <= 1e-12 * m);
  }
}

TEST_CASE("J-preservation of the tangent projection (500 random)") {
  oracle::Gen g(36);
  for (int trial = 0; trial < 500; ++trial) {
    const Index n = g.integer(1, 6);
    const Matrix jm = oracle::standard_j(n);
    const Symmetry eps{oracle::lagrangian(g, n)};
    const Matrix x = oracle::sym(g, 2 * n);
    const Matrix a = 0.5 * (x + jm * x * jm);  // symmetric, anticommutes with J
    const Matrix pa = tangent_project(eps, SymmetricOp{a}).mat();
    CHECK(oracle::max_abs(pa * jm + jm * pa) <= 1e-11);
  }
}

TEST_CASE("tangent vectors") {
  const auto j = standard_J(1);
  const Symmetry e{diag2(-1, 1)};
  Matrix v(2, 2);
  v << 0, 1, 1, 0;
  CHECK_NOTHROW(TangentVector(e, SymmetricOp{v}, j));
  CHECK_THROWS_AS(TangentVector(e, SymmetricOp{diag2(1, 0)}, j), InvariantError);
  Matrix v2(2, 2);
  v2 << 0, 0, 0, 0;
  CHECK_NOTHROW(TangentVector(e, SymmetricOp{v2}, j));
}

TEST_CASE("covariant derivative examples and errors") {
  oracle::Gen g(37);
  const Index n = 2;
  const Matrix eps = oracle::lagrangian(g, n);
  const Matrix v = tangent_project(Symmetry{eps}, SymmetricOp{oracle::sym(g, 2 * n)}).mat();
  std::vector<TimedSymmetry> curve;
  std::vector<TimedOp> constant, linear;
  for (int i = 0; i <= 10; ++i) {
    const double t = 0.1 * i;
    curve.push_back({t, Symmetry{eps}});
    constant.push_back({t, SymmetricOp{v}});
    linear.push_back({t, SymmetricOp{Matrix(t * v)}});
  }
  for (const auto& d : covariant_derivative(curve, constant)) CHECK(oracle::max_abs(d.op.mat()) <= 1e-12);
  const auto dl = covariant_derivative(curve, linear);
  REQUIRE(dl.size() == curve.size());
  for (const auto& d : dl) CHECK(oracle::max_abs(d.op.mat() - v) <= 1e-12);

  std::vector<TimedSymmetry> shortc(curve.begin(), curve.begin() + 2);
  std::vector<TimedOp> shortf(constant.begin(), constant.begin() + 2);
  CHECK_THROWS_AS(covariant_derivative(shortc, shortf), InvariantError);
  constant.pop_back();
  CHECK_THROWS_AS(covariant_derivative(curve, constant), InvariantError);
  auto uneven = curve;
  uneven[3].t += 0.03;
  CHECK_THROWS_AS(covariant_derivative(uneven, linear), InvariantError);
}
