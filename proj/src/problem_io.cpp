#include "bamsf/problem_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace bamsf {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ParseError(path, msg);
}

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) known = true;
    if (!known) fail(path + "." + it.key(), "unknown field");
  }
}

const json& get_field(const json& obj, const char* key,
                      const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path + "." + key, "missing field");
  return *it;
}

double parse_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

// Number or the tokens "inf" / "-inf".
double parse_extended_number(const json& j, const std::string& path) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    fail(path, "expected a number or \"inf\"/\"-inf\"");
  }
  return parse_number(j, path);
}

Vector parse_vector(const json& j, const std::string& path,
                    bool allow_inf = false) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array");
  Vector v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    v[i] = allow_inf ? parse_extended_number(j[i], p) : parse_number(j[i], p);
  }
  return v;
}

Matrix parse_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty())
    fail(path, "expected a nonempty array of rows");
  const size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) fail(path + "[0]", "expected a nonempty row");
  Matrix m(j.size(), cols);
  for (size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].size() != cols)
      fail(p, "row length mismatch");
    for (size_t k = 0; k < cols; ++k)
      m(i, k) = parse_number(j[i][k], p + "[" + std::to_string(k) + "]");
  }
  return m;
}

ConvexSet parse_set(const json& j, const std::string& path, int dim) {
  if (!j.is_object()) fail(path, "expected an object");
  const std::string type =
      get_field(j, "type", path).is_string()
          ? get_field(j, "type", path).get<std::string>()
          : (fail(path + ".type", "expected a string"), "");

  auto build = [&](SetVariant v) -> ConvexSet {
    try {
      ConvexSet s{std::move(v)};
      if (s.dim() != dim)
        fail(path, "set dimension " + std::to_string(s.dim()) +
                       " does not match block rows " + std::to_string(dim));
      return s;
    } catch (const std::invalid_argument& e) {
      fail(path, e.what());
    }
  };

  if (type == "box") {
    reject_unknown(j, path, {"type", "lower", "upper"});
    return build(Box{parse_vector(get_field(j, "lower", path), path + ".lower",
                                  /*allow_inf=*/true),
                     parse_vector(get_field(j, "upper", path), path + ".upper",
                                  /*allow_inf=*/true)});
  }
  if (type == "halfspace" || type == "hyperplane") {
    reject_unknown(j, path, {"type", "a", "b"});
    Vector a = parse_vector(get_field(j, "a", path), path + ".a");
    double b = parse_number(get_field(j, "b", path), path + ".b");
    if (type == "halfspace") return build(Halfspace{std::move(a), b});
    return build(Hyperplane{std::move(a), b});
  }
  if (type == "affine") {
    reject_unknown(j, path, {"type", "basis", "anchor"});
    return build(AffineSubspace{
        parse_matrix(get_field(j, "basis", path), path + ".basis"),
        parse_vector(get_field(j, "anchor", path), path + ".anchor")});
  }
  if (type == "ball2") {
    reject_unknown(j, path, {"type", "center", "radius"});
    return build(EuclideanBall{
        parse_vector(get_field(j, "center", path), path + ".center"),
        parse_number(get_field(j, "radius", path), path + ".radius")});
  }
  if (type == "ballp") {
    reject_unknown(j, path, {"type", "center", "radius", "p"});
    return build(PNormBall{
        parse_vector(get_field(j, "center", path), path + ".center"),
        parse_number(get_field(j, "radius", path), path + ".radius"),
        parse_number(get_field(j, "p", path), path + ".p")});
  }
  if (type == "soc") {
    reject_unknown(j, path, {"type"});
    return build(SecondOrderCone{dim});
  }
  if (type == "soc_reflected") {
    reject_unknown(j, path, {"type", "orientation"});
    const json& o = get_field(j, "orientation", path);
    if (!o.is_array()) fail(path + ".orientation", "expected an array");
    std::vector<int> orientation;
    for (size_t i = 0; i < o.size(); ++i) {
      const std::string p = path + ".orientation[" + std::to_string(i) + "]";
      if (!o[i].is_number_integer()) fail(p, "expected a signed index");
      orientation.push_back(o[i].get<int>());
    }
    return build(PolarReflectedCone{std::move(orientation)});
  }
  if (type == "orthant") {
    reject_unknown(j, path, {"type"});
    return build(NonnegativeOrthant{dim});
  }
  fail(path + ".type", "unknown set type \"" + type + "\"");
}

}  // namespace

Instance parse_problem(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail("(document)", e.what());
  }
  if (!doc.is_object()) fail("(document)", "expected a JSON object");
  reject_unknown(doc, "(document)", {"v", "blocks"});

  Vector v = parse_vector(get_field(doc, "v", "(document)"), "v");
  const json& jblocks = get_field(doc, "blocks", "(document)");
  if (!jblocks.is_array() || jblocks.empty())
    fail("blocks", "expected a nonempty array");

  std::vector<Block> blocks;
  for (size_t i = 0; i < jblocks.size(); ++i) {
    const std::string path = "blocks[" + std::to_string(i) + "]";
    const json& jb = jblocks[i];
    if (!jb.is_object()) fail(path, "expected an object");
    reject_unknown(jb, path, {"A", "set"});
    Matrix A = parse_matrix(get_field(jb, "A", path), path + ".A");
    if (A.cols() != v.size())
      fail(path + ".A", "column count does not match dim(v)");
    ConvexSet set =
        parse_set(get_field(jb, "set", path), path + ".set", int(A.rows()));
    blocks.push_back(Block{std::move(A), std::move(set)});
  }
  try {
    return Instance(std::move(v), std::move(blocks));
  } catch (const std::invalid_argument& e) {
    fail("(document)", e.what());
  }
}

Instance load_problem(const std::string& path) {
  return parse_problem(read_file(path));
}

std::string problem_to_json(const Instance& inst) {
  json doc;
  auto vec_to_json = [](const Vector& v, bool allow_inf = false) {
    json arr = json::array();
    for (int i = 0; i < v.size(); ++i) {
      if (allow_inf && std::isinf(v[i]))
        arr.push_back(v[i] > 0 ? "inf" : "-inf");
      else
        arr.push_back(v[i]);
    }
    return arr;
  };
  auto mat_to_json = [](const Matrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
      json row = json::array();
      for (int k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
      rows.push_back(std::move(row));
    }
    return rows;
  };

  doc["v"] = vec_to_json(inst.anchor());
  doc["blocks"] = json::array();
  for (const auto& b : inst.blocks()) {
    json jb;
    jb["A"] = mat_to_json(b.A);
    json& js = jb["set"];
    struct Visitor {
      json& js;
      decltype(vec_to_json)& vec;
      decltype(mat_to_json)& mat;
      void operator()(const Box& s) {
        js["type"] = "box";
        js["lower"] = vec(s.lower, true);
        js["upper"] = vec(s.upper, true);
      }
      void operator()(const Halfspace& s) {
        js["type"] = "halfspace";
        js["a"] = vec(s.a, false);
        js["b"] = s.b;
      }
      void operator()(const Hyperplane& s) {
        js["type"] = "hyperplane";
        js["a"] = vec(s.a, false);
        js["b"] = s.b;
      }
      void operator()(const AffineSubspace& s) {
        js["type"] = "affine";
        js["basis"] = mat(s.basis);
        js["anchor"] = vec(s.anchor, false);
      }
      void operator()(const EuclideanBall& s) {
        js["type"] = "ball2";
        js["center"] = vec(s.center, false);
        js["radius"] = s.radius;
      }
      void operator()(const PNormBall& s) {
        js["type"] = "ballp";
        js["center"] = vec(s.center, false);
        js["radius"] = s.radius;
        js["p"] = s.p;
      }
      void operator()(const SecondOrderCone&) { js["type"] = "soc"; }
      void operator()(const PolarReflectedCone& s) {
        js["type"] = "soc_reflected";
        js["orientation"] = s.orientation;
      }
      void operator()(const NonnegativeOrthant&) { js["type"] = "orthant"; }
    };
    std::visit(Visitor{js, vec_to_json, mat_to_json}, b.set.variant());
    doc["blocks"].push_back(std::move(jb));
  }
  return doc.dump(2) + "\n";
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_csv_number(const std::string& tok, const std::string& where) {
  if (tok == "inf") return std::numeric_limits<double>::infinity();
  if (tok == "-inf") return -std::numeric_limits<double>::infinity();
  if (tok == "nan") return std::numeric_limits<double>::quiet_NaN();
  try {
    size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError(where, "invalid number \"" + tok + "\"");
  }
}

}  // namespace

ParsedHistory parse_history_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.empty())
    throw ParseError("(csv)", "empty history");
  const auto header = split(line, ',');
  const std::vector<std::string> expected = {
      "sweep", "d_value", "step_norm", "residual_norm", "gap", "dist_argmin"};
  if (header.size() < expected.size())
    throw ParseError("(csv)", "missing columns in header");
  for (size_t i = 0; i < expected.size(); ++i)
    if (header[i] != expected[i])
      throw ParseError("(csv)", "unexpected column \"" + header[i] + "\"");

  ParsedHistory h;
  long row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++row;
    const std::string where = "(csv) row " + std::to_string(row);
    const auto tok = split(line, ',');
    if (tok.size() < expected.size())
      throw ParseError(where, "too few fields");
    h.sweep.push_back(long(parse_csv_number(tok[0], where)));
    h.d_value.push_back(parse_csv_number(tok[1], where));
    h.step_norm.push_back(parse_csv_number(tok[2], where));
    h.residual_norm.push_back(parse_csv_number(tok[3], where));
    h.gap.push_back(parse_csv_number(tok[4], where));
    h.dist_argmin.push_back(parse_csv_number(tok[5], where));
  }
  if (h.sweep.empty()) throw ParseError("(csv)", "no data rows");
  return h;
}

ParsedHistory load_history_csv(const std::string& path) {
  return parse_history_csv(read_file(path));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write file: " + path);
  out << content;
}

}  // namespace bamsf
