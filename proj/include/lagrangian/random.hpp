#pragma once

// Seeded random model for Lagrangian pairs. Everything is driven by a
// std::mt19937_64 stream and hand-written transforms (uniform from the top
// 53 bits, Box-Muller normals), so a seed reproduces the same matrices on
// every platform.

#include <cstdint>
#include <random>
#include <utility>

#include "lagrangian/complex_structure.hpp"
#include "lagrangian/grassmannian.hpp"
#include "lagrangian/operator_core.hpp"

namespace lagrangian {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();  // [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

Matrix random_gaussian(Rng& rng, Index rows, Index cols);
SymmetricOp random_symmetric(Rng& rng, Index n);
AntisymmetricOp random_antisymmetric(Rng& rng, Index n);
// Random orthogonal matrix exp(X) with X antisymmetric Gaussian.
Matrix random_orthogonal(Rng& rng, Index n);

// Antisymmetric, J-commuting Gaussian generator rescaled to ||.||_op = scale.
AntisymmetricOp random_complex_generator(Rng& rng, const ComplexStructure& j, double scale);

// exp of random_complex_generator: a complex unitary.
Matrix random_complex_unitary(Rng& rng, const ComplexStructure& j, double scale);

// u eps_vertical u^T for a random complex unitary u, where eps_vertical is
// diag(-I, I) in the standard-form coordinates of j.
Symmetry random_lagrangian(Rng& rng, const ComplexStructure& j, double scale);

std::pair<Symmetry, Symmetry> random_lagrangian_pair(Rng& rng, const ComplexStructure& j,
                                                     double scale);

// A pair (eps0, eps1) on R^{2n}, n = zero + right + generic, whose
// principal angles are exactly 0 (`zero` of them), exactly pi/2 (`right`)
// and uniform in [margin, pi/2 - margin] (`generic`), conjugated by a
// random complex unitary.
std::pair<Symmetry, Symmetry> structured_lagrangian_pair(Rng& rng, Index zero, Index right,
                                                         Index generic, double margin = 0.05);

// Unit (operator norm) antisymmetric direction that commutes with J and
// anticommutes with eps.
AntisymmetricOp random_horizontal_direction(Rng& rng, const Symmetry& eps,
                                            const ComplexStructure& j);

}  // namespace lagrangian
