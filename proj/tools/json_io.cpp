#include "json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lagrangian/complex_structure.hpp"
#include "lagrangian/graph_charts.hpp"
#include "lagrangian/grassmannian.hpp"

namespace lagr {

namespace {

void dump_into(const Json& j, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += inner + Json(it.key()).dump() + ": ";
        dump_into(it.value(), indent + 1, out);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line (matrix rows, vectors).
      bool flat = true;
      for (const auto& v : j) flat = flat && !v.is_structured();
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          dump_into(j[i], indent + 1, out);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += inner;
        dump_into(j[i], indent + 1, out);
      }
      out += "\n" + pad + "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string dump(const Json& j) {
  std::string out;
  dump_into(j, 0, out);
  out += "\n";
  return out;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_text(const std::optional<std::string>& path, const std::string& text) {
  if (!path) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(*path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + *path);
  out << text;
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j, const std::string& what) {
  if (!j.is_array()) throw ParseError(what + ": expected an array of rows");
  const Index rows = static_cast<Index>(j.size());
  Index cols = -1;
  Matrix m;
  for (Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array()) throw ParseError(what + ": row " + std::to_string(i) + " is not an array");
    if (cols < 0) {
      cols = static_cast<Index>(row.size());
      m.resize(rows, cols);
    }
    if (static_cast<Index>(row.size()) != cols) throw ParseError(what + ": ragged rows");
    for (Index c = 0; c < cols; ++c) {
      const Json& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number()) throw ParseError(what + ": non-numeric entry");
      m(i, c) = v.get<double>();
    }
  }
  if (rows == 0) m.resize(0, 0);
  if (!lagrangian::all_finite(m)) throw ParseError(what + ": non-finite entry");
  return m;
}

LagrangianDocument read_lagrangian(const std::string& path) {
  const Json doc = read_json_file(path);
  if (!doc.is_object()) throw ParseError(path + ": expected a JSON object");
  if (!doc.contains("dim") || !doc["dim"].is_number_integer()) {
    throw ParseError(path + ": missing integer \"dim\"");
  }
  LagrangianDocument out;
  out.dim = doc["dim"].get<Index>();
  if (out.dim < 2 || out.dim % 2 != 0) throw ParseError(path + ": \"dim\" must be even and >= 2");
  const Index n = out.dim / 2;

  if (doc.contains("J")) {
    out.j = matrix_from_json(doc["J"], path + ": J");
    out.j_given = true;
    if (out.j.rows() != out.dim || out.j.cols() != out.dim) throw ParseError(path + ": J has the wrong shape");
  } else {
    out.j = lagrangian::ComplexStructure::standard(n).mat();
  }

  int count = 0;
  for (const char* key : {"subspace", "projection", "symmetry", "graph_of"}) {
    if (doc.contains(key)) {
      ++count;
      out.representation = key;
    }
  }
  if (count != 1) {
    throw ParseError(path + ": expected exactly one of subspace, projection, symmetry, graph_of");
  }

  const Matrix id = Matrix::Identity(out.dim, out.dim);
  if (out.representation == "subspace") {
    const Json& s = doc["subspace"];
    if (!s.is_object() || !s.contains("basis")) throw ParseError(path + ": subspace needs \"basis\"");
    const Matrix vectors = matrix_from_json(s["basis"], path + ": basis");
    if (vectors.size() > 0 && vectors.cols() != out.dim) {
      throw ParseError(path + ": basis vectors must have length dim");
    }
    out.raw = vectors.size() == 0 ? Matrix(out.dim, 0) : Matrix(vectors.transpose());
    const Matrix q = lagrangian::Subspace::from_spanning(out.raw).basis();
    out.eps = 2.0 * q * q.transpose() - id;
  } else if (out.representation == "projection" || out.representation == "symmetry") {
    out.raw = matrix_from_json(doc[out.representation], path + ": " + out.representation);
    if (out.raw.rows() != out.dim || out.raw.cols() != out.dim) {
      throw ParseError(path + ": " + out.representation + " has the wrong shape");
    }
    out.eps = out.representation == "symmetry" ? out.raw : Matrix(2.0 * out.raw - id);
  } else {
    out.raw = matrix_from_json(doc["graph_of"], path + ": graph_of");
    if (out.raw.rows() != n || out.raw.cols() != n) throw ParseError(path + ": graph_of must be n x n");
    const lagrangian::SymmetricOp a(lagrangian::symmetric_part(out.raw));
    out.eps = lagrangian::graph_symmetry(a).mat();
  }
  if (doc.contains("generator")) out.generator = doc["generator"];
  return out;
}

}  // namespace lagr
