#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "json_io.hpp"
#include "lagrangian/complex_structure.hpp"
#include "lagrangian/geodesics.hpp"
#include "lagrangian/graph_charts.hpp"
#include "lagrangian/grassmannian.hpp"
#include "lagrangian/random.hpp"

namespace lagr {

namespace {

namespace lg = lagrangian;

constexpr const char* kVersion = "1.0.0";

struct Options {
  std::optional<std::string> out;
  std::string k = "inf";
  double tol_sym = lg::Tolerances{}.symmetry;
  double tol_angle = lg::Tolerances{}.angle_zero;
  double tol_rank = lg::Tolerances{}.rank;

  lg::Tolerances tolerances() const {
    lg::Tolerances t;
    t.symmetry = tol_sym;
    t.angle_zero = tol_angle;
    t.angle_right = tol_angle;
    t.rank = tol_rank;
    return t;
  }
};

lg::SchattenOrder parse_order(const std::string& text) {
  if (text == "inf" || text == "infinity") return lg::SchattenOrder::infinity();
  int k = 0;
  std::size_t used = 0;
  try {
    k = std::stoi(text, &used);
  } catch (const std::exception&) {
    throw ParseError("--k must be a positive integer or 'inf', got '" + text + "'");
  }
  if (used != text.size() || k < 1) {
    throw ParseError("--k must be a positive integer or 'inf', got '" + text + "'");
  }
  return lg::SchattenOrder(k);
}

Json order_json(const lg::SchattenOrder& k) {
  return k.is_infinite() ? Json("inf") : Json(k.k());
}

Json provenance(const std::string& command, const std::vector<std::string>& inputs,
                const Options& o, Json extra = Json::object()) {
  const lg::Tolerances t = o.tolerances();
  Json p = Json::object();
  p["tool"] = "lagr";
  p["version"] = kVersion;
  p["command"] = command;
  p["inputs"] = inputs;
  p["tolerances"] = {{"symmetry", t.symmetry},
                     {"angle_zero", t.angle_zero},
                     {"angle_right", t.angle_right},
                     {"rank", t.rank}};
  p["k"] = order_json(parse_order(o.k));
  for (auto it = extra.begin(); it != extra.end(); ++it) p[it.key()] = it.value();
  return p;
}

std::string provenance_comment(const Json& p) {
  std::string line = "# ";
  bool first = true;
  for (auto it = p.begin(); it != p.end(); ++it) {
    if (!first) line += " ";
    first = false;
    line += it.key() + "=";
    if (it.value().is_string()) {
      line += it.value().get<std::string>();
    } else if (it.value().is_object()) {
      std::string inner;
      for (auto jt = it.value().begin(); jt != it.value().end(); ++jt) {
        if (!inner.empty()) inner += ",";
        inner += jt.key() + ":" + format_double(jt.value().get<double>());
      }
      line += inner;
    } else if (it.value().is_array()) {
      std::string inner;
      for (const auto& v : it.value()) {
        if (!inner.empty()) inner += ",";
        inner += v.is_string() ? v.get<std::string>() : v.dump();
      }
      line += inner;
    } else {
      line += it.value().dump();
    }
  }
  return line + "\n";
}

// Vectors (columns of `basis`) listed one per entry, the input convention.
Json basis_json(const Matrix& basis) { return matrix_to_json(basis.transpose()); }

struct Loaded {
  LagrangianDocument doc;
  lg::ComplexStructure j;
  lg::Symmetry eps;
};

Loaded load(const std::string& path, const lg::Tolerances& tol) {
  LagrangianDocument doc = read_lagrangian(path);
  lg::ComplexStructure j(doc.j, tol.symmetry);
  lg::Symmetry eps(doc.eps, tol.symmetry);
  return {std::move(doc), std::move(j), std::move(eps)};
}

void require_same_j(const Loaded& a, const Loaded& b) {
  if (lg::max_abs(a.j.mat() - b.j.mat()) > 1e-12) {
    throw lg::InvariantError("the two inputs use different complex structures");
  }
}

Json doc_header(const Loaded& l) {
  Json d = Json::object();
  d["dim"] = l.doc.dim;
  if (l.doc.j_given) d["J"] = matrix_to_json(l.j.mat());
  return d;
}

// ---------------------------------------------------------------- validate

struct Check {
  std::string name;
  double residual;
  double limit;
};

int cmd_validate(const std::string& path, const Options& o) {
  const lg::Tolerances tol = o.tolerances();
  const LagrangianDocument doc = read_lagrangian(path);
  const Index dim = doc.dim;
  const Index n = dim / 2;
  const Matrix id = Matrix::Identity(dim, dim);
  auto limit = [&](const Matrix& m) { return lg::predicate_tolerance(m, tol.symmetry); };

  std::vector<Check> checks;
  const Matrix& j = doc.j;
  checks.push_back({"J_antisymmetry", lg::max_abs(j + j.transpose()), limit(j)});
  checks.push_back({"J_square", lg::max_abs(j * j + id), limit(j)});
  checks.push_back({"J_orthogonality", lg::max_abs(j.transpose() * j - id), limit(j)});

  const Matrix& raw = doc.raw;
  if (doc.representation == "symmetry") {
    checks.push_back({"symmetry_symmetric", lg::max_abs(raw - raw.transpose()), limit(raw)});
    checks.push_back({"symmetry_involution", lg::max_abs(raw * raw - id), limit(raw)});
  } else if (doc.representation == "projection") {
    checks.push_back({"projection_symmetric", lg::max_abs(raw - raw.transpose()), limit(raw)});
    checks.push_back({"projection_idempotent", lg::max_abs(raw * raw - raw), limit(raw)});
  } else if (doc.representation == "graph_of") {
    checks.push_back({"operator_symmetric", lg::max_abs(raw - raw.transpose()), limit(raw)});
  } else {
    const Index rank = lg::Subspace::from_spanning(raw, tol.rank).dim();
    checks.push_back({"basis_rank_deficit", static_cast<double>(raw.cols() - rank), 0.0});
  }

  const Matrix& eps = doc.eps;
  checks.push_back({"lagrangian_anticommutator", lg::max_abs(eps * j + j * eps), limit(eps)});
  checks.push_back({"lagrangian_dimension_defect", std::abs(eps.trace()) / 2.0, 0.25});

  Json report = Json::object();
  report["provenance"] = provenance("validate", {path}, o);
  report["dim"] = dim;
  report["representation"] = doc.representation;

  if (doc.generator) {
    const Json& g = *doc.generator;
    if (!g.contains("z")) throw ParseError(path + ": generator needs \"z\"");
    const Matrix z = matrix_from_json(g["z"], path + ": generator z");
    if (z.rows() != dim || z.cols() != dim) throw ParseError(path + ": generator z has the wrong shape");
    const lg::GeneratorResiduals r = lg::generator_residuals(z, eps, j);
    checks.push_back({"generator_antisymmetry", lg::max_abs(z + z.transpose()), limit(z)});
    checks.push_back({"generator_J_commutator", r.j_commutator, limit(z)});
    checks.push_back({"generator_base_anticommutator", r.base_anticommutator, limit(z)});
    checks.push_back({"generator_norm_excess", std::max(0.0, r.norm - lg::kHalfPi), 1e-10});
    if (g.contains("target")) {
      const Matrix target = matrix_from_json(g["target"], path + ": generator target");
      const Matrix rot = lg::expm_antisymmetric(lg::AntisymmetricOp(lg::antisymmetric_part(2.0 * z)));
      checks.push_back({"generator_endpoint", lg::max_abs(rot * eps - target), 1e-8 * static_cast<double>(n)});
    }
  }

  bool all_pass = true;
  Json list = Json::array();
  for (const Check& c : checks) {
    const bool pass = c.residual <= c.limit;
    all_pass = all_pass && pass;
    list.push_back({{"name", c.name}, {"residual", c.residual}, {"limit", c.limit}, {"pass", pass}});
  }
  report["checks"] = list;
  report["all_pass"] = all_pass;
  write_text(o.out, dump(report));
  return all_pass ? kExitOk : kExitInvariant;
}

// ----------------------------------------------------------------- connect

Json connect_document(const std::string& in0, const std::string& in1, const std::string& route_name,
                      const Options& o) {
  const lg::Tolerances tol = o.tolerances();
  const Loaded a = load(in0, tol);
  const Loaded b = load(in1, tol);
  require_same_j(a, b);
  const lg::ConnectRoute route =
      route_name == "halmos" ? lg::ConnectRoute::Halmos : lg::ConnectRoute::ProductLog;
  const lg::GeodesicGenerator g = lg::connect(a.eps, b.eps, a.j, route, tol);
  const Matrix& z = g.z().mat();
  const lg::SchattenOrder k = parse_order(o.k);
  const Matrix rot = lg::expm_antisymmetric(lg::AntisymmetricOp(lg::antisymmetric_part(2.0 * z)));

  Json d = Json::object();
  d["provenance"] = provenance("connect", {in0, in1}, o, {{"route", route_name}});
  const Json header = doc_header(a);
  for (auto it = header.begin(); it != header.end(); ++it) d[it.key()] = it.value();
  d["symmetry"] = matrix_to_json(a.eps.mat());
  Json gen = Json::object();
  gen["z"] = matrix_to_json(z);
  gen["target"] = matrix_to_json(b.eps.mat());
  gen["norm_op"] = g.residuals().norm;
  gen["k"] = order_json(k);
  gen["norm_k"] = lg::schatten_norm(z, k);
  gen["residuals"] = {{"endpoint", lg::max_abs(rot * a.eps.mat() - b.eps.mat())},
                      {"j_commutator", g.residuals().j_commutator},
                      {"base_anticommutator", g.residuals().base_anticommutator},
                      {"norm_minus_half_pi", g.residuals().norm - lg::kHalfPi}};
  d["generator"] = gen;
  return d;
}

int exit_code_for(const std::exception_ptr& e) {
  try {
    std::rethrow_exception(e);
  } catch (const ParseError&) {
    return kExitParse;
  } catch (const nlohmann::json::exception&) {
    return kExitParse;
  } catch (const lg::SolverError&) {
    return kExitSolver;
  } catch (const lg::InvariantError&) {
    return kExitInvariant;
  } catch (...) {
    return kExitSolver;
  }
}

std::string message_of(const std::exception_ptr& e) {
  try {
    std::rethrow_exception(e);
  } catch (const std::exception& ex) {
    return ex.what();
  } catch (...) {
    return "unknown error";
  }
}

// Each line of `batch`: <eps0.json> <eps1.json> <out.json>. Pairs run on
// `jobs` threads; every pair writes only its own file.
int cmd_connect_batch(const std::string& batch, int jobs, const std::string& route,
                      const Options& o) {
  std::ifstream in(batch);
  if (!in) throw ParseError("cannot open " + batch);
  struct Task {
    std::string in0, in1, out;
  };
  std::vector<Task> tasks;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    Task t;
    if (!(ss >> t.in0 >> t.in1 >> t.out)) throw ParseError(batch + ": malformed line: " + line);
    tasks.push_back(t);
  }
  std::vector<int> codes(tasks.size(), kExitOk);
  std::vector<std::string> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        Options local = o;
        local.out = tasks[i].out;
        write_text(local.out, dump(connect_document(tasks[i].in0, tasks[i].in1, route, local)));
      } catch (...) {
        codes[i] = exit_code_for(std::current_exception());
        errors[i] = message_of(std::current_exception());
      }
    }
  };
  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(tasks.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  int worst = kExitOk;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (codes[i] != kExitOk) {
      std::fprintf(stderr, "lagr: %s %s: %s\n", tasks[i].in0.c_str(), tasks[i].in1.c_str(),
                   errors[i].c_str());
    }
    worst = std::max(worst, codes[i]);
  }
  return worst;
}

// ---------------------------------------------------------------- distance

int cmd_distance(const std::string& in0, const std::string& in1, const Options& o) {
  const lg::Tolerances tol = o.tolerances();
  const Loaded a = load(in0, tol);
  const Loaded b = load(in1, tol);
  require_same_j(a, b);
  const lg::GeodesicGenerator g = lg::connect(a.eps, b.eps, a.j, lg::ConnectRoute::ProductLog, tol);
  const double nz = g.residuals().norm;
  const double gap = lg::op_norm(0.5 * (a.eps.mat() - b.eps.mat()));
  Json d = Json::object();
  d["provenance"] = provenance("distance", {in0, in1}, o);
  d["distance"] = 2.0 * nz;
  d["norm_z_op"] = nz;
  d["sin_norm_z"] = std::sin(nz);
  d["projection_gap"] = gap;
  d["identity_residual"] = std::abs(std::sin(nz) - gap);
  write_text(o.out, dump(d));
  return kExitOk;
}

// ------------------------------------------------------------------ sample

int cmd_sample(const std::string& in0, const std::string& in1, int grid, double t0, double t1,
               const Options& o) {
  if (grid < 2) throw ParseError("--grid must be at least 2");
  const lg::Tolerances tol = o.tolerances();
  const Loaded a = load(in0, tol);
  const Loaded b = load(in1, tol);
  require_same_j(a, b);
  const lg::SchattenOrder k = parse_order(o.k);
  const lg::Geodesic delta(lg::connect(a.eps, b.eps, a.j, lg::ConnectRoute::ProductLog, tol));
  const Index dim = a.eps.dim();

  std::string text = provenance_comment(provenance("sample", {in0, in1}, o));
  text += "t,speed_k";
  for (Index r = 0; r < dim; ++r) {
    for (Index c = 0; c < dim; ++c) text += ",e_" + std::to_string(r) + "_" + std::to_string(c);
  }
  text += "\n";
  for (int i = 0; i < grid; ++i) {
    const double t = t0 + (t1 - t0) * static_cast<double>(i) / (grid - 1);
    const Matrix e = delta.at(t).mat();
    text += format_double(t) + "," + format_double(lg::schatten_norm(delta.velocity(t), k));
    for (Index r = 0; r < dim; ++r) {
      for (Index c = 0; c < dim; ++c) text += "," + format_double(e(r, c));
    }
    text += "\n";
  }
  write_text(o.out, text);
  return kExitOk;
}

// --------------------------------------------------------------- decompose

int cmd_decompose(const std::string& in0, const std::string& in1, const Options& o) {
  const lg::Tolerances tol = o.tolerances();
  const Loaded a = load(in0, tol);
  const Loaded b = load(in1, tol);
  require_same_j(a, b);
  const bool lagrangian = lg::is_lagrangian(a.eps, a.j, tol) && lg::is_lagrangian(b.eps, b.j, tol);
  const lg::FiveWayDecomposition f =
      lagrangian ? lg::five_way_decompose(a.eps, b.eps, a.j, tol) : lg::five_way_decompose(a.eps, b.eps, tol);
  Json d = Json::object();
  d["provenance"] = provenance("decompose", {in0, in1}, o);
  d["lagrangian"] = lagrangian;
  d["dims"] = {{"h11", f.h11.dim()}, {"h00", f.h00.dim()}, {"h01", f.h01.dim()},
               {"h10", f.h10.dim()}, {"h0", f.h0.dim()}};
  d["bases"] = {{"h11", basis_json(f.h11.basis())}, {"h00", basis_json(f.h00.basis())},
                {"h01", basis_json(f.h01.basis())}, {"h10", basis_json(f.h10.basis())},
                {"h0", basis_json(f.h0.basis())}};
  write_text(o.out, dump(d));
  return kExitOk;
}

// ------------------------------------------------------------ multiplicity

int cmd_multiplicity(const std::string& in0, const std::string& in1, bool alternates,
                     std::size_t cap, const Options& o) {
  const lg::Tolerances tol = o.tolerances();
  const Loaded a = load(in0, tol);
  const Loaded b = load(in1, tol);
  require_same_j(a, b);
  const lg::GeodesicGenerator g = lg::connect(a.eps, b.eps, a.j, lg::ConnectRoute::ProductLog, tol);
  const lg::MultiplicityReport r = lg::classify_multiplicity(g, tol);
  Json d = Json::object();
  d["provenance"] = provenance("multiplicity", {in0, in1}, o, {{"cap", cap}});
  d["classification"] = lg::to_string(r.classification);
  d["minus_one_dim_complex"] = r.minus_one_dim_complex;
  d["norm_gap"] = r.norm_gap;
  d["norm_op"] = g.residuals().norm;
  d["z"] = matrix_to_json(g.z().mat());
  if (alternates) {
    Json list = Json::array();
    const Index dcount = r.minus_one_dim_complex;
    const std::uint64_t total = dcount >= 63 ? UINT64_MAX : (std::uint64_t{1} << dcount);
    for (std::uint64_t pattern = 0; dcount > 0 && pattern < total && list.size() < cap; ++pattern) {
      std::vector<int> signs(static_cast<std::size_t>(dcount), 1);
      for (Index s = 0; s < dcount && s < 63; ++s) {
        if ((pattern >> s) & 1U) signs[static_cast<std::size_t>(s)] = -1;
      }
      const lg::GeodesicGenerator alt = lg::alternate_generator(g, signs, tol);
      const Matrix rot =
          lg::expm_antisymmetric(lg::AntisymmetricOp(lg::antisymmetric_part(2.0 * alt.z().mat())));
      list.push_back({{"signs", signs},
                      {"z", matrix_to_json(alt.z().mat())},
                      {"endpoint_residual", lg::max_abs(rot * a.eps.mat() - b.eps.mat())}});
    }
    d["alternates"] = list;
  }
  write_text(o.out, dump(d));
  return kExitOk;
}

// ----------------------------------------------------------- graph-recover

int cmd_graph_recover(const std::string& in, const std::string& base, const Options& o) {
  const lg::Tolerances tol = o.tolerances();
  const Loaded target = load(in, tol);
  if (!target.j.is_standard()) throw lg::InvariantError("graph charts need the standard J");
  const Index n = target.eps.dim() / 2;
  const lg::Symmetry start =
      base == "vertical" ? lg::vertical_subspace(n)
                         : lg::graph_symmetry(lg::SymmetricOp(Matrix::Identity(n, n)));
  const lg::GeodesicGenerator g = lg::connect(start, target.eps, target.j, lg::ConnectRoute::ProductLog, tol);
  const lg::SymmetricOp x = lg::codiagonal_block(g.z().mat(), tol.symmetry);
  const lg::SymmetricOp b = lg::recover_operator(lg::subspace_from_symmetry(target.eps), tol);
  const auto closed = base == "vertical" ? lg::vertical_chart_operator(x, tol)
                                         : lg::identity_chart_operator(x, tol);
  const Matrix p_target = 0.5 * (target.eps.mat() + Matrix::Identity(2 * n, 2 * n));

  Json d = Json::object();
  d["provenance"] = provenance("graph-recover", {in}, o, {{"base", base}});
  d["base"] = base;
  d["closed_form"] = base == "vertical" ? "cos(x) sin(x)^-1" : "(cos(x) - sin(x)) (sin(x) + cos(x))^-1";
  d["b"] = matrix_to_json(b.mat());
  d["x"] = matrix_to_json(x.mat());
  d["closed_form_residual"] = closed ? lg::max_abs(closed->mat() - b.mat()) : std::nan("");
  d["graph_projection_residual"] = lg::max_abs(lg::graph_projection(b).mat() - p_target);
  write_text(o.out, dump(d));
  return kExitOk;
}

// ---------------------------------------------------------- spectral-curve

int cmd_spectral_curve(const std::optional<std::string>& in, const std::optional<std::string>& y_text,
                       int grid, bool graph_times_only, const Options& o) {
  if (in.has_value() == y_text.has_value()) {
    throw ParseError("spectral-curve needs exactly one of a target file or --y");
  }
  if (grid < 2) throw ParseError("--grid must be at least 2");
  const lg::Tolerances tol = o.tolerances();
  std::optional<lg::GeodesicGenerator> g;
  std::vector<std::string> inputs;
  if (in) {
    const Loaded target = load(*in, tol);
    if (!target.j.is_standard()) throw lg::InvariantError("graph charts need the standard J");
    const Index n = target.eps.dim() / 2;
    const lg::Symmetry start = lg::graph_symmetry(lg::SymmetricOp(Matrix::Identity(n, n)));
    g = lg::connect(start, target.eps, target.j, lg::ConnectRoute::ProductLog, tol);
    inputs.push_back(*in);
  } else {
    Json parsed;
    try {
      parsed = Json::parse(*y_text);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("--y: ") + e.what());
    }
    const Matrix y = matrix_from_json(parsed, "--y");
    if (y.rows() == 0 || y.rows() != y.cols()) throw ParseError("--y must be a non-empty square matrix");
    const Index n = y.rows();
    const lg::SymmetricOp ys(y, tol.symmetry);
    Matrix z = Matrix::Zero(2 * n, 2 * n);
    z.topRightCorner(n, n) = ys.mat();
    z.bottomLeftCorner(n, n) = -ys.mat();
    g.emplace(lg::AntisymmetricOp(z), lg::graph_symmetry(lg::SymmetricOp(Matrix::Identity(n, n))),
              lg::ComplexStructure::standard(n), tol);
  }
  const lg::SymmetricOp y = lg::codiagonal_block(g->z().mat(), tol.symmetry);

  std::vector<double> times;
  const lg::Geodesic delta(*g);
  for (int i = 0; i < grid; ++i) {
    const double t = -1.0 + 2.0 * static_cast<double>(i) / (grid - 1);
    if (graph_times_only && !lg::is_graph(lg::subspace_from_symmetry(delta.at(t)), tol)) continue;
    times.push_back(t);
  }
  const lg::CayleyCurve curve = lg::cayley_curve(*g, times, tol);

  Json d = Json::object();
  d["provenance"] = provenance("spectral-curve", inputs, o,
                               {{"grid", grid}, {"graph_times_only", graph_times_only}});
  d["y"] = matrix_to_json(y.mat());
  Json window = Json::object();
  const double ynorm = lg::op_norm(y.mat());
  if (ynorm <= lg::kHalfPi + 1e-10) {
    for (const auto& [name, sign] : {std::pair<const char*, double>{"y", 1.0}, {"minus_y", -1.0}}) {
      const lg::GraphWindowReport w = lg::graph_window(lg::SymmetricOp(sign * y.mat()), 50, tol);
      window[name] = {{"inside", w.inside}, {"grid_verified", w.grid_verified}};
    }
  }
  d["graph_window"] = window;
  d["essential_spectrum"] = "empty in finite dimension; the essential-spectrum clauses hold vacuously";
  const double radius = lg::graph_safe_radius(*g);
  d["safe_radius"] = radius;
  d["safe_radius_verified"] = lg::verify_safe_radius(*g, 50, tol);
  d["trivial_flow"] = curve.trivial_flow;
  d["min_gap_to_minus_one"] = curve.min_gap;
  d["phase_tolerance"] = lg::kPhaseTolerance;
  d["accumulated_det_phase"] = curve.accumulated_phase;
  d["max_closed_form_residual"] = curve.max_closed_form_residual;
  Json samples = Json::array();
  for (const auto& s : curve.samples) {
    std::vector<double> phases(s.phases.data(), s.phases.data() + s.phases.size());
    samples.push_back({{"t", s.t},
                       {"phases", phases},
                       {"min_gap_to_minus_one", s.min_gap_to_minus_one},
                       {"closed_form_residual", s.closed_form_residual}});
  }
  d["samples"] = samples;
  write_text(o.out, dump(d));
  return kExitOk;
}

// ------------------------------------------------------------- random-pair

int cmd_random_pair(Index n, std::uint64_t seed, double scale, const std::string& out0,
                    const std::string& out1, const Options& o) {
  if (n < 1) throw ParseError("--n must be at least 1");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ParseError("--scale must be positive");
  const lg::ComplexStructure j = lg::ComplexStructure::standard(n);
  lg::Rng rng(seed);
  const auto [eps0, eps1] = lg::random_lagrangian_pair(rng, j, scale);
  const Json extra = {{"seed", seed},
                      {"scale", scale},
                      {"model", "u diag(-I, I) u^T, u = exp(g), g = (X - J X J)/2 rescaled to "
                                "operator norm `scale`, X Gaussian antisymmetric (mt19937_64, "
                                "Box-Muller)"}};
  int index = 0;
  for (const auto& [path, eps] : {std::pair<const std::string&, const lg::Symmetry&>{out0, eps0},
                                  {out1, eps1}}) {
    Json d = Json::object();
    Json p = provenance("random-pair", {}, o, extra);
    p["member"] = index++;
    d["provenance"] = p;
    d["dim"] = 2 * n;
    d["symmetry"] = matrix_to_json(eps.mat());
    write_text(path, dump(d));
  }
  return kExitOk;
}

void add_common(CLI::App* sub, Options& o, bool with_k = true) {
  sub->add_option("--out", o.out, "output file (default: stdout)");
  if (with_k) sub->add_option("--k", o.k, "Schatten order: positive integer or 'inf'");
  sub->add_option("--tol-sym", o.tol_sym, "relative symmetry tolerance");
  sub->add_option("--tol-angle", o.tol_angle, "principal-angle bucketing threshold (radians)");
  sub->add_option("--tol-rank", o.tol_rank, "relative rank tolerance for graph tests");
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Minimal geodesics in the Lagrangian Grassmannian", "lagr"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Options o;

  std::string in0, in1, route = "product-log", base = "vertical", batch;
  std::optional<std::string> target, y_text;
  int grid = 101, curve_grid = 50, jobs = 1;
  double t0 = 0.0, t1 = 1.0, scale = 1.0;
  bool alternates = false, graph_times_only = false;
  std::size_t cap = 64;
  Index n = 1;
  std::uint64_t seed = 0;
  std::string out0, out1;

  auto* validate = app.add_subcommand("validate", "check J, representation and Lagrangian invariants");
  validate->add_option("input", in0)->required();
  add_common(validate, o, false);

  auto* connect = app.add_subcommand("connect", "minimal geodesic generator z between two inputs");
  connect->add_option("eps0", in0);
  connect->add_option("eps1", in1);
  connect->add_option("--route", route, "product-log (default) or halmos")
      ->check(CLI::IsMember({"product-log", "halmos"}));
  connect->add_option("--batch", batch, "file of '<eps0> <eps1> <out>' lines");
  connect->add_option("--jobs", jobs, "worker threads for --batch")->check(CLI::PositiveNumber);
  add_common(connect, o);

  auto* distance = app.add_subcommand("distance", "geodesic distance 2 ||z||");
  distance->add_option("eps0", in0)->required();
  distance->add_option("eps1", in1)->required();
  add_common(distance, o, false);

  auto* sample = app.add_subcommand("sample", "CSV samples of the geodesic");
  sample->add_option("eps0", in0)->required();
  sample->add_option("eps1", in1)->required();
  sample->add_option("--grid", grid, "number of samples");
  sample->add_option("--t0", t0);
  sample->add_option("--t1", t1);
  add_common(sample, o);

  auto* decompose = app.add_subcommand("decompose", "five-subspace decomposition of a pair");
  decompose->add_option("eps0", in0)->required();
  decompose->add_option("eps1", in1)->required();
  add_common(decompose, o, false);

  auto* multiplicity = app.add_subcommand("multiplicity", "number of minimal geodesics");
  multiplicity->add_option("eps0", in0)->required();
  multiplicity->add_option("eps1", in1)->required();
  multiplicity->add_flag("--alternates", alternates, "also write the sign-flip generators");
  multiplicity->add_option("--cap", cap, "maximum number of alternates");
  add_common(multiplicity, o, false);

  auto* recover = app.add_subcommand("graph-recover", "operator b with target = G_b");
  recover->add_option("target", in0)->required();
  recover->add_option("--base", base, "vertical (default) or identity")
      ->check(CLI::IsMember({"vertical", "identity"}));
  add_common(recover, o, false);

  auto* spectral = app.add_subcommand("spectral-curve", "Cayley transform along a geodesic from G_I");
  spectral->add_option("target", target);
  spectral->add_option("--y", y_text, "half-space block y as a JSON matrix");
  spectral->add_option("--grid", curve_grid, "number of points in [-1, 1]");
  spectral->add_flag("--graph-times-only", graph_times_only, "drop grid times where delta(t) is not a graph");
  add_common(spectral, o, false);

  auto* random = app.add_subcommand("random-pair", "reproducible random Lagrangian pair");
  random->add_option("--n", n, "half dimension")->required();
  random->add_option("--seed", seed, "64-bit seed");
  random->add_option("--scale", scale, "operator norm of the unitary generators");
  random->add_option("--out0", out0)->required();
  random->add_option("--out1", out1)->required();
  add_common(random, o, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    parse_order(o.k);
    if (*validate) return cmd_validate(in0, o);
    if (*connect) {
      if (!batch.empty()) return cmd_connect_batch(batch, jobs, route, o);
      if (in0.empty() || in1.empty()) throw ParseError("connect needs eps0 and eps1 (or --batch)");
      write_text(o.out, dump(connect_document(in0, in1, route, o)));
      return kExitOk;
    }
    if (*distance) return cmd_distance(in0, in1, o);
    if (*sample) return cmd_sample(in0, in1, grid, t0, t1, o);
    if (*decompose) return cmd_decompose(in0, in1, o);
    if (*multiplicity) return cmd_multiplicity(in0, in1, alternates, cap, o);
    if (*recover) return cmd_graph_recover(in0, base, o);
    if (*spectral) return cmd_spectral_curve(target, y_text, curve_grid, graph_times_only, o);
    if (*random) return cmd_random_pair(n, seed, scale, out0, out1, o);
  } catch (...) {
    const auto e = std::current_exception();
    std::fprintf(stderr, "lagr: error: %s\n", message_of(e).c_str());
    return exit_code_for(e);
  }
  return kExitParse;
}

}  // namespace lagr
