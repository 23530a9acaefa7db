#include <doctest.h>

#include <cmath>

#include "lagrangian/random.hpp"
#include "oracle.hpp"

using namespace lagrangian;

TEST_CASE("streams are reproducible and seed dependent") {
  Rng a(7), b(7), c(8);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.normal();
    CHECK(x == b.normal());
    differs = differs || x != c.normal();
  }
  CHECK(differs);
  Rng d(7), e(7);
  CHECK(oracle::max_abs(random_gaussian(d, 3, 4) - random_gaussian(e, 3, 4)) == 0.0);
}

TEST_CASE("uniform and normal moments") {
  Rng r(99);
  const int count = 200000;
  double su = 0, sn = 0, sn2 = 0;
  double lo = 1, hi = 0;
  for (int i = 0; i < count; ++i) {
    const double u = r.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    su += u;
    const double z = r.normal();
    sn += z;
    sn2 += z * z;
  }
  CHECK(lo >= 0.0);
  CHECK(hi < 1.0);
  CHECK(std::abs(su / count - 0.5) < 0.005);
  CHECK(std::abs(sn / count) < 0.01);
  CHECK(std::abs(sn2 / count - 1.0) < 0.02);
  const double v = r.uniform(-2.0, 3.0);
  CHECK(v >= -2.0);
  CHECK(v < 3.0);
}

TEST_CASE("random operators satisfy their invariants") {
  Rng r(100);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 1 + trial % 6;
    const auto s = random_symmetric(r, n);
    CHECK(s.mat() == s.mat().transpose());
    const auto a = random_antisymmetric(r, n);
    CHECK(a.mat() == -a.mat().transpose());
    const Matrix o = random_orthogonal(r, n);
    CHECK(oracle::max_abs(o.transpose() * o - Matrix::Identity(n, n)) <= 1e-12 * n);
    CHECK(o.determinant() > 0);

    const auto j = standard_J(n);
    const double scale = 0.1 + 0.2 * (trial % 10);
    const auto z = random_complex_generator(r, j, scale);
    CHECK(commutes_with_J(z.mat(), j));
    CHECK(std::abs(oracle::op_norm(z.mat()) - scale) <= 1e-12);
    const Matrix u = random_complex_unitary(r, j, scale);
    CHECK(is_complex_unitary(u, j));
    const Symmetry e = random_lagrangian(r, j, 1.0);
    CHECK(is_lagrangian(e, j));
    const auto [e0, e1] = random_lagrangian_pair(r, j, oracle::kPi);
    CHECK(is_lagrangian(e0, j));
    CHECK(is_lagrangian(e1, j));
  }
}

TEST_CASE("random Lagrangians for a non-standard J") {
  Rng r(101);
  oracle::Gen g(102);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = 1 + trial % 4;
    const Matrix o = oracle::orthogonal(g, 2 * n);
    const ComplexStructure j(Matrix(o * oracle::standard_j(n) * o.transpose()));
    CHECK(is_lagrangian(random_lagrangian(r, j, 1.0), j));
    CHECK(commutes_with_J(random_complex_generator(r, j, 1.0).mat(), j));
  }
}

TEST_CASE("structured pairs have the requested principal angles") {
  Rng r(103);
  for (int trial = 0; trial < 60; ++trial) {
    const Index zero = trial % 3, right = (trial / 3) % 3, generic = 1 + (trial / 9) % 3;
    const Index n = zero + right + generic;
    const double margin = 0.1;
    const auto [e0, e1] = structured_lagrangian_pair(r, zero, right, generic, margin);
    const auto j = standard_J(n);
    CHECK(is_lagrangian(e0, j));
    CHECK(is_lagrangian(e1, j));
    const Matrix q0 = subspace_from_symmetry(e0).basis();
    const Matrix q1 = subspace_from_symmetry(e1).basis();
    const Vector th = principal_angles(q0, q1).angles;
    REQUIRE(th.size() == n);
    for (Index i = 0; i < zero; ++i) CHECK(th(i) <= 1e-12);
    for (Index i = zero; i < zero + generic; ++i) {
      CHECK(th(i) >= margin - 1e-12);
      CHECK(th(i) <= kHalfPi - margin + 1e-12);
    }
    for (Index i = zero + generic; i < n; ++i) CHECK(std::abs(th(i) - kHalfPi) <= 1e-12);
  }
  CHECK_THROWS_AS(structured_lagrangian_pair(r, 0, 0, 0), InvariantError);
}

TEST_CASE("horizontal directions") {
  Rng r(104);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 1 + trial % 5;
    const auto j = standard_J(n);
    const Symmetry e = random_lagrangian(r, j, oracle::kPi);
    const auto w = random_horizontal_direction(r, e, j);
    CHECK(oracle::max_abs(w.mat() + w.mat().transpose()) == 0.0);
    CHECK(commutes_with_J(w.mat(), j));
    CHECK(oracle::max_abs(w.mat() * e.mat() + e.mat() * w.mat()) <= 1e-12);
    CHECK(std::abs(oracle::op_norm(w.mat()) - 1.0) <= 1e-12);
  }
}
