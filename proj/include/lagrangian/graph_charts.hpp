#pragma once

// Graph charts on K x K with K = R^n and the standard J: graphs
// G_a = {(xi, a xi)} of symmetric a, the projection p_{G_a}, operator
// recovery, the graph window around G_I, the gap metric, and the Cayley
// transform C(f) = (f - iI)(f + iI)^{-1} along geodesics from G_I.
//
// K is finite dimensional here, so the essential spectrum is empty and every
// clause about it holds vacuously; results that depend on that say so.

#include <optional>
#include <vector>

#include "lagrangian/complex_structure.hpp"
#include "lagrangian/geodesics.hpp"
#include "lagrangian/grassmannian.hpp"
#include "lagrangian/operator_core.hpp"

namespace lagrangian {

using SelfAdjointOp = SymmetricOp;

// Columns [I; a], not orthonormal.
Matrix graph_columns(const SelfAdjointOp& a);
Subspace graph_subspace(const SelfAdjointOp& a);

// [[R, aR], [aR, a^2 R]] with R = (I + a^2)^{-1}.
Projection graph_projection(const SelfAdjointOp& a);
Symmetry graph_symmetry(const SelfAdjointOp& a);

// eps of {0} x K: diag(-I, I).
Symmetry vertical_subspace(Index n);

// The top block of the basis has full column rank: smallest singular value
// above rank (the basis is orthonormal, so its norm is 1). Requires an even
// ambient dimension.
bool is_graph(const Subspace& s, const Tolerances& tol = {});

// The a with S = G_a, from a * top = bottom. Throws SolverError if S is not
// a graph and InvariantError if the solution is not symmetric.
SelfAdjointOp recover_operator(const Subspace& s, const Tolerances& tol = {});

// b = cos(x) sin(x)^{-1}: the endpoint of exp(t z) applied to {0} x K when
// z = [[0, x], [-x, 0]]. Empty if sin(x) is singular.
std::optional<SelfAdjointOp> vertical_chart_operator(const SymmetricOp& x,
                                                     const Tolerances& tol = {});
// b = (cos x - sin x)(sin x + cos x)^{-1}: the same, starting from G_I.
std::optional<SelfAdjointOp> identity_chart_operator(const SymmetricOp& x,
                                                     const Tolerances& tol = {});

struct TransformedGraph {
  bool is_graph = false;
  std::optional<SelfAdjointOp> b;  // ground truth, by basis recovery
  // Max-entry residuals of two candidate closed forms against b, with
  // u = [[x, y], [-y, x]]: (-y + x a)(x + y a)^{-1} and
  // (-y + a x)(x + a y)^{-1}. NaN when the form's inverse does not exist.
  double residual_left_form = 0.0;
  double residual_right_form = 0.0;
};

// u(G_a) for a complex unitary u. Throws InvariantError if u is not a
// complex unitary for the standard J.
TransformedGraph transformed_graph_operator(const Matrix& u, const SelfAdjointOp& a,
                                            const Tolerances& tol = {});

struct GraphWindowReport {
  bool inside = false;            // spectrum of y in (-pi/4 + 1e-8, pi/2]
  bool grid_verified = false;     // exp(t z)(G_I) is a graph on the grid, t in [0, 1]
  bool essential_spectrum_vacuous = true;
  Vector eigenvalues;
};

// Requires ||y|| <= pi/2 + 1e-10 (InvariantError otherwise). The curve is
// exp(t z)(G_I) with z = [[0, y], [-y, 0]]; the grid check runs only when
// `inside` holds.
GraphWindowReport graph_window(const SymmetricOp& y, int grid = 50, const Tolerances& tol = {});

// pi / (4 ||z||), or +infinity when z = 0.
double graph_safe_radius(const GeodesicGenerator& g);

// Checks that exp(2 t z) eps0 is a graph for `grid` points of
// [0, radius (1 - 1e-3)], capped at t = 1 when the radius is infinite.
bool verify_safe_radius(const GeodesicGenerator& g, int grid = 50, const Tolerances& tol = {});

// ||p_{G_a} - p_{G_b}||_op.
double gap_distance(const SelfAdjointOp& a, const SelfAdjointOp& b);

ComplexMatrix cayley_transform(const SelfAdjointOp& a);

// Eigenphases of a (complex) unitary, each in (-pi, pi], ascending.
Vector eigenphases(const ComplexMatrix& u);

struct CayleyCurveSample {
  double t = 0.0;
  Vector phases;
  double min_gap_to_minus_one = 0.0;
  // max |C(f(t)) - exp(-i(pi/2 + 2 t y))| over entries.
  double closed_form_residual = 0.0;
};

struct CayleyCurve {
  std::vector<CayleyCurveSample> samples;
  double min_gap = 0.0;
  // -1 stays out of the spectrum by more than 1e-6 on the whole grid, so
  // the curve lies in a contractible set of unitaries.
  bool trivial_flow = false;
  // Unwrapped argument of det C(f(t)) from the first to the last sample.
  double accumulated_phase = 0.0;
  double max_closed_form_residual = 0.0;
  bool essential_spectrum_vacuous = true;
};

inline constexpr double kPhaseTolerance = 1e-6;

// Requires base eps_{G_I} and z = [[0, y], [-y, 0]] (InvariantError
// otherwise). f(t) is recovered from delta(t) = exp(2 t z) eps_{G_I}; a grid
// time where delta(t) is not a graph raises SolverError naming t.
CayleyCurve cayley_curve(const GeodesicGenerator& g, const std::vector<double>& grid,
                         const Tolerances& tol = {});

// Half-space block y of a generator z = [[0, y], [-y, 0]].
SymmetricOp codiagonal_block(const Matrix& z, double rel_tol = Tolerances{}.symmetry);

}  // namespace lagrangian
