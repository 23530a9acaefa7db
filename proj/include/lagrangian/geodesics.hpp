#pragma once

// Minimal geodesics delta(t) = exp(2 t z) eps0 between Lagrangian symmetries:
// construction of the generator z, evaluation, lengths in operator and
// Schatten norms, and classification of how many minimal geodesics join a
// pair.

#include <cstdint>
#include <vector>

#include "lagrangian/complex_structure.hpp"
#include "lagrangian/grassmannian.hpp"
#include "lagrangian/operator_core.hpp"

namespace lagrangian {

struct GeneratorResiduals {
  double j_commutator = 0.0;         // max |zJ - Jz|
  double base_anticommutator = 0.0;  // max |z eps0 + eps0 z|
  double norm = 0.0;                 // ||z||_op
};

GeneratorResiduals generator_residuals(const Matrix& z, const Matrix& eps0, const Matrix& j);

// Antisymmetric z with zJ = Jz, z eps0 = -eps0 z and ||z|| <= pi/2.
class GeodesicGenerator {
 public:
  // Throws InvariantError if any invariant fails: commutators beyond
  // predicate tolerance, or ||z|| > pi/2 + 1e-10.
  GeodesicGenerator(AntisymmetricOp z, Symmetry base, ComplexStructure j,
                    const Tolerances& tol = {});

  const AntisymmetricOp& z() const { return z_; }
  const Symmetry& base() const { return base_; }
  const ComplexStructure& j() const { return j_; }
  Index dim() const { return z_.dim(); }
  const GeneratorResiduals& residuals() const { return residuals_; }

 private:
  AntisymmetricOp z_;
  Symmetry base_;
  ComplexStructure j_;
  GeneratorResiduals residuals_;
};

class Geodesic {
 public:
  explicit Geodesic(GeodesicGenerator gen) : gen_(std::move(gen)) {}

  const GeodesicGenerator& generator() const { return gen_; }

  // exp(2 t z) eps0.
  Symmetry at(double t) const;
  // 2 z delta(t).
  Matrix velocity(double t) const;

 private:
  GeodesicGenerator gen_;
};

// z = v eps / 2, so that delta'(0) = 2 z eps = v.
Geodesic exponential_map(const Symmetry& eps, const TangentVector& v);

Symmetry evaluate(const Geodesic& delta, double t);

enum class ConnectRoute {
  ProductLog,  // half the principal log of eps1 eps0 off the antipodal block
  Halmos,      // explicit rotation built from the principal angles
};

// Generator of a minimal geodesic from eps0 to eps1: zero on h11 + h00,
// (pi/2) J on h01 + h10 and the generic-position generator on h0.
GeodesicGenerator connect(const Symmetry& eps0, const Symmetry& eps1, const ComplexStructure& j,
                          ConnectRoute route = ConnectRoute::ProductLog,
                          const Tolerances& tol = {});

// d(eps0, eps1) = 2 ||z||_op.
double distance(const Symmetry& eps0, const Symmetry& eps1, const ComplexStructure& j,
                const Tolerances& tol = {});

// Closed form (t1 - t0) ||2z||_k.
double length(const Geodesic& delta, double t0, double t1, SchattenOrder k);

// Sum of chords ||eps_{i+1} - eps_i||_k over a uniform grid: the midpoint
// rule applied to forward-difference speeds.
double length(const std::vector<TimedSymmetry>& samples, SchattenOrder k);

enum class Multiplicity { Unique, ExactlyTwo, Infinite };

const char* to_string(Multiplicity m);

struct MultiplicityReport {
  Multiplicity classification = Multiplicity::Unique;
  // Complex dimension of the -1 eigenspace of exp(2z).
  Index minus_one_dim_complex = 0;
  // pi/2 - ||z||_op.
  double norm_gap = 0.0;
};

MultiplicityReport classify_multiplicity(const GeodesicGenerator& g, const Tolerances& tol = {});

// Flips the sign of z on the J-complex planes where exp(2z) rotates by pi;
// signs[k] = -1 flips plane k. Planes are ordered by the spectrum of -Jz
// restricted to the +1 eigenspace of eps0 inside the pi-rotation block.
GeodesicGenerator alternate_generator(const GeodesicGenerator& g, const std::vector<int>& signs,
                                      const Tolerances& tol = {});

// All 2^d sign patterns, the all-plus pattern first, truncated to `cap`.
std::vector<GeodesicGenerator> alternate_generators(const GeodesicGenerator& g,
                                                    std::size_t cap = 64,
                                                    const Tolerances& tol = {});

// Competitor curve gamma(t) = exp(2 A(t)) eps0 with
// A(t) = t (z + rho(t) w), rho(t) = amplitude * sin(pi t).
// w must be antisymmetric and commute with J; the curve then stays among
// Lagrangian symmetries and has the same endpoints as the geodesic.
class PerturbedGeodesic {
 public:
  PerturbedGeodesic(GeodesicGenerator gen, AntisymmetricOp w, double amplitude);

  Symmetry at(double t) const;
  Matrix velocity(double t) const;

  // Simpson's rule on exact velocity norms, for each order in `orders`.
  std::vector<double> lengths(const std::vector<SchattenOrder>& orders, int intervals = 2000) const;

 private:
  GeodesicGenerator gen_;
  AntisymmetricOp w_;
  double amplitude_;
};

}  // namespace lagrangian
