#pragma once

// JSON documents for the lagr tool: matrices are arrays of rows, floats are
// written with 17 significant digits so they read back bit-exactly.

#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "lagrangian/operator_core.hpp"

namespace lagr {

using Json = nlohmann::ordered_json;
using lagrangian::Index;
using lagrangian::Matrix;

// Malformed input: unreadable file, invalid JSON, wrong shapes.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string format_double(double v);

// Deterministic, pretty-printed text of `j` with 17-digit floats. NaN and
// infinities are written as null.
std::string dump(const Json& j);

Json read_json_file(const std::string& path);
void write_text(const std::optional<std::string>& path, const std::string& text);

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, const std::string& what);

// Input document: {"dim": 2n, "J": optional matrix, and exactly one of
// "subspace": {"basis": [v_1, ..., v_k]}, "projection", "symmetry",
// "graph_of"}. Basis vectors are listed one per entry.
struct LagrangianDocument {
  Index dim = 0;
  Matrix j;                    // explicit or standard
  bool j_given = false;
  std::string representation;  // "subspace" | "projection" | "symmetry" | "graph_of"
  Matrix raw;                  // as written in the file (basis as columns)
  Matrix eps;                  // symmetry derived from `raw`, not yet validated
  std::optional<Json> generator;
};

LagrangianDocument read_lagrangian(const std::string& path);

}  // namespace lagr
