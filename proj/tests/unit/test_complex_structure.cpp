#include <doctest.h>

#include <cmath>

#include "lagrangian/complex_structure.hpp"
#include "oracle.hpp"

using namespace lagrangian;

namespace {

// A random J-commuting real matrix, built from a complex one in real form.
Matrix random_commuting(oracle::Gen& g, Index n) {
  oracle::CMatrix c(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k < n; ++k) c(i, k) = {g.normal(), g.normal()};
  return oracle::realify(c);
}

Matrix random_anticommuting(oracle::Gen& g, Index n) {
  const Matrix j = oracle::standard_j(n);
  const Matrix x = oracle::gaussian(g, 2 * n, 2 * n);
  return 0.5 * (x + j * x * j);
}

}  // namespace

TEST_CASE("standard J") {
  const auto j1 = standard_J(1);
  Matrix expected(2, 2);
  expected << 0, -1, 1, 0;
  CHECK(j1.mat() == expected);
  CHECK(j1.is_standard());
  for (Index n = 1; n <= 5; ++n) {
    const Matrix j = standard_J(n).mat();
    CHECK(oracle::max_abs(j * j + Matrix::Identity(2 * n, 2 * n)) == 0.0);
    CHECK(j == oracle::standard_j(n));
    CHECK(standard_J(n).to_standard() == Matrix::Identity(2 * n, 2 * n));
  }
  CHECK_THROWS_AS(standard_J(0), InvariantError);
}

TEST_CASE("J validation") {
  CHECK_THROWS_AS(ComplexStructure{Matrix::Identity(2, 2)}, InvariantError);
  CHECK_THROWS_AS(ComplexStructure{Matrix::Zero(3, 3)}, InvariantError);
  Matrix scaled = 2.0 * oracle::standard_j(2);
  CHECK_THROWS_AS(ComplexStructure{scaled}, InvariantError);
}

TEST_CASE("symplectic form") {
  const auto j = standard_J(1);
  Vector e1(2), e2(2);
  e1 << 1, 0;
  e2 << 0, 1;
  CHECK(symplectic_form(j, e1, e2) == 1.0);
  CHECK(symplectic_form(j, e2, e1) == -1.0);
  CHECK_THROWS_AS(symplectic_form(j, e1, Vector::Ones(3)), InvariantError);

  oracle::Gen g(21);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = g.integer(1, 5);
    const auto jn = standard_J(n);
    const Vector x = oracle::gaussian(g, 2 * n, 1);
    const Vector y = oracle::gaussian(g, 2 * n, 1);
    CHECK(std::abs(symplectic_form(jn, x, x)) <= 1e-13);
    CHECK(std::abs(symplectic_form(jn, x, y) + symplectic_form(jn, y, x)) <= 1e-13);
    CHECK(std::abs(symplectic_form(jn, jn.mat() * x, jn.mat() * y) - symplectic_form(jn, x, y)) <= 1e-12);
  }
}

TEST_CASE("complex inner product") {
  const auto j = standard_J(1);
  Vector e1(2), e2(2);
  e1 << 1, 0;
  e2 << 0, 1;
  const auto p = complex_inner_product(j, e1, e2);
  CHECK(p.re == 0.0);
  CHECK(p.im == -1.0);

  oracle::Gen g(22);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = g.integer(1, 5);
    const auto jn = standard_J(n);
    const Vector x = oracle::gaussian(g, 2 * n, 1);
    const Vector y = oracle::gaussian(g, 2 * n, 1);
    const auto xx = complex_inner_product(jn, x, x);
    CHECK(std::abs(xx.re - x.squaredNorm()) <= 1e-12);
    CHECK(std::abs(xx.im) <= 1e-12);
    const auto xy = complex_inner_product(jn, x, y);
    const auto yx = complex_inner_product(jn, y, x);
    CHECK(std::abs(xy.re - yx.re) <= 1e-12);
    CHECK(std::abs(xy.im + yx.im) <= 1e-12);
    // <J x, y> = i <x, y>, linear in the first slot.
    const auto jxy = complex_inner_product(jn, jn.mat() * x, y);
    CHECK(std::abs(jxy.re + xy.im) <= 1e-12);
    CHECK(std::abs(jxy.im - xy.re) <= 1e-12);
    // Agrees with the Hermitian product of the complex coordinates.
    const Eigen::VectorXcd cx = x.head(n).cast<std::complex<double>>() +
                                std::complex<double>(0, 1) * x.tail(n).cast<std::complex<double>>();
    const Eigen::VectorXcd cy = y.head(n).cast<std::complex<double>>() +
                                std::complex<double>(0, 1) * y.tail(n).cast<std::complex<double>>();
    const std::complex<double> h = cy.dot(cx);  // sum x_k conj(y_k)
    CHECK(std::abs(h.real() - xy.re) <= 1e-12);
    CHECK(std::abs(h.imag() - xy.im) <= 1e-12);
  }
}

TEST_CASE("commutation predicates") {
  const auto j = standard_J(2);
  CHECK(commutes_with_J(j.mat(), j));
  CHECK(commutes_with_J(Matrix::Identity(4, 4), j));
  CHECK(anticommutes_with_J(oracle::vertical(2), j));
  CHECK_FALSE(commutes_with_J(oracle::vertical(2), j));
  CHECK(is_complex_unitary(j.mat(), j));
  CHECK(is_complex_unitary(Matrix::Identity(4, 4), j));
  CHECK_FALSE(is_complex_unitary(oracle::vertical(2), j));
  CHECK_FALSE(is_complex_unitary(2.0 * Matrix::Identity(4, 4), j));
}

TEST_CASE("complexify on examples") {
  const auto j = standard_J(2);
  const ComplexMatrix cj = complexify(j.mat(), j);
  CHECK(cj.re.isZero());
  CHECK(cj.im == Matrix::Identity(2, 2));
  const ComplexMatrix ci = complexify(Matrix::Identity(4, 4), j);
  CHECK(ci.re == Matrix::Identity(2, 2));
  CHECK(ci.im.isZero());
  const double th = 0.4;
  const Matrix rot = std::cos(th) * Matrix::Identity(4, 4) + std::sin(th) * j.mat();
  const auto crot = complexify(rot, j).to_eigen();
  CHECK((crot - std::polar(1.0, th) * Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK_THROWS_AS(complexify(oracle::vertical(2), j), InvariantError);
}

TEST_CASE("complexify is a unital algebra homomorphism and realify inverts it (300 random)") {
  oracle::Gen g(23);
  for (int trial = 0; trial < 300; ++trial) {
    const Index n = g.integer(1, 6);
    const auto j = standard_J(n);
    const Matrix a = random_commuting(g, n);
    const Matrix b = random_commuting(g, n);
    const auto ca = complexify(a, j).to_eigen();
    const auto cb = complexify(b, j).to_eigen();
    const auto cab = complexify(a * b, j).to_eigen();
    CHECK((cab - ca * cb).cwiseAbs().maxCoeff() <= 1e-11 * n);
    const auto cadj = complexify(a.transpose(), j).to_eigen();
    CHECK((cadj - ca.adjoint()).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK(oracle::max_abs(realify(complexify(a, j), j) - a) <= 1e-14);
    CHECK(oracle::max_abs(realify(ComplexMatrix::from_eigen(ca), j) - oracle::realify(ca)) <= 1e-14);
  }
}

TEST_CASE("products of J-anticommuting operators commute with J (300 random)") {
  oracle::Gen g(24);
  for (int trial = 0; trial < 300; ++trial) {
    const Index n = g.integer(1, 6);
    const auto j = standard_J(n);
    const Matrix a = random_anticommuting(g, n);
    const Matrix b = random_anticommuting(g, n);
    CHECK(anticommutes_with_J(a, j));
    CHECK(commutes_with_J(a * b, j, 1e-11));
    CHECK(oracle::max_abs(a * b * j.mat() - j.mat() * a * b) <= 1e-11 * n * std::max(1.0, oracle::max_abs(a * b)));
  }
}

TEST_CASE("non-standard J is reduced to standard form") {
  oracle::Gen g(25);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = g.integer(1, 5);
    const Matrix o = oracle::orthogonal(g, 2 * n);
    const Matrix jm = o * oracle::standard_j(n) * o.transpose();
    const ComplexStructure j(jm);
    const Matrix& q = j.to_standard();
    CHECK(oracle::max_abs(q.transpose() * q - Matrix::Identity(2 * n, 2 * n)) <= 1e-12);
    CHECK(oracle::max_abs(q.transpose() * jm * q - oracle::standard_j(n)) <= 1e-12);

    // Homomorphism in the new coordinates.
    const Matrix a = q * random_commuting(g, n) * q.transpose();
    const Matrix b = q * random_commuting(g, n) * q.transpose();
    const auto ca = complexify(a, j).to_eigen();
    const auto cb = complexify(b, j).to_eigen();
    CHECK((complexify(a * b, j).to_eigen() - ca * cb).cwiseAbs().maxCoeff() <= 1e-11 * n);
    CHECK(oracle::max_abs(realify(complexify(a, j), j) - a) <= 1e-12);
    CHECK((complexify(jm, j).to_eigen() - std::complex<double>(0, 1) * Eigen::MatrixXcd::Identity(n, n))
              .cwiseAbs()
              .maxCoeff() <= 1e-12);
  }
}
