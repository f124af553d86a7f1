#pragma once

// JSON algebra files and a writer that prints every real with 17 significant digits.
//
//   { "dim": 6,
//     "params": {"lambda": 2},
//     "defs": [{"name": "f", "expr": "sqrt(2)/4"}],
//     "brackets": [{"i": 1, "j": 2, "k": 4, "c": "f*(lambda+1)"}],
//     "omega": "canonical" | [{"i": 1, "j": 6, "c": 1}],
//     "metric": [1, 1, 1, 1, 1, 1] }
//
// Coefficients are numbers or expression strings over params and defs.

#include "aks/expr.hpp"
#include "aks/symplectic.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace aks {

using Json = nlohmann::json;

struct Algebra {
  LieBracket mu;
  TwoForm omega;
  std::optional<Matrix> metric;
  ParamMap params;
};

namespace detail {

[[noreturn]] inline void parse_fail(const std::string& path, const std::string& what) {
  throw Error("parse error at " + path + ": " + what);
}

inline const Json& member(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) parse_fail(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) parse_fail(path, "missing field '" + key + "'");
  return *it;
}

inline int read_index(const Json& v, const std::string& path) {
  if (!v.is_number_integer()) parse_fail(path, "expected an integer");
  return v.get<int>();
}

inline double read_real(const Json& v, const std::string& path, const ParamMap& vars) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      return eval_expr(v.get<std::string>(), vars);
    } catch (const ExprError& e) {
      parse_fail(path, e.what());
    }
  }
  parse_fail(path, "expected a number or an expression string");
}

} // namespace detail

/// Parameter values: file params overridden by `overrides`, then defs evaluated in order.
inline ParamMap resolve_params(const Json& doc, const ParamMap& overrides = {}) {
  ParamMap vars;
  if (doc.contains("params")) {
    const Json& p = doc["params"];
    if (!p.is_object()) detail::parse_fail("params", "expected an object");
    for (const auto& [name, val] : p.items()) vars[name] = detail::read_real(val, "params." + name, {});
  }
  for (const auto& [k, v] : overrides) vars[k] = v;
  if (doc.contains("defs")) {
    const Json& d = doc["defs"];
    if (!d.is_array()) detail::parse_fail("defs", "expected an array");
    for (std::size_t n = 0; n < d.size(); ++n) {
      const std::string path = "defs[" + std::to_string(n) + "]";
      const Json& name = detail::member(d[n], "name", path);
      if (!name.is_string()) detail::parse_fail(path + ".name", "expected a string");
      vars[name.get<std::string>()] = detail::read_real(detail::member(d[n], "expr", path), path + ".expr", vars);
    }
  }
  return vars;
}

inline LieBracket parse_brackets(const Json& arr, int dim, const ParamMap& vars, const std::string& where = "brackets") {
  if (!arr.is_array()) detail::parse_fail(where, "expected an array");
  std::vector<StructureConstant> out;
  for (std::size_t n = 0; n < arr.size(); ++n) {
    const std::string path = where + "[" + std::to_string(n) + "]";
    const Json& e = arr[n];
    StructureConstant sc{detail::read_index(detail::member(e, "i", path), path + ".i"),
                         detail::read_index(detail::member(e, "j", path), path + ".j"),
                         detail::read_index(detail::member(e, "k", path), path + ".k"),
                         detail::read_real(detail::member(e, "c", path), path + ".c", vars)};
    out.push_back(sc);
  }
  try {
    return LieBracket(dim, std::move(out));
  } catch (const Error& e) {
    detail::parse_fail(where, e.what());
  }
}

inline TwoForm parse_form(const Json& v, int dim, const ParamMap& vars, const std::string& where = "omega") {
  if (v.is_string()) {
    if (v.get<std::string>() != "canonical") detail::parse_fail(where, "expected \"canonical\" or an array");
    if (dim % 2 != 0) detail::parse_fail(where, "canonical form needs an even dimension");
    return canonical_form(dim / 2);
  }
  if (!v.is_array()) detail::parse_fail(where, "expected \"canonical\" or an array");
  std::vector<FormEntry> out;
  for (std::size_t n = 0; n < v.size(); ++n) {
    const std::string path = where + "[" + std::to_string(n) + "]";
    out.push_back({detail::read_index(detail::member(v[n], "i", path), path + ".i"),
                   detail::read_index(detail::member(v[n], "j", path), path + ".j"),
                   detail::read_real(detail::member(v[n], "c", path), path + ".c", vars)});
  }
  try {
    return TwoForm(dim, std::move(out));
  } catch (const Error& e) {
    detail::parse_fail(where, e.what());
  }
}

inline Algebra parse_algebra(const Json& doc, const ParamMap& overrides = {}) {
  const Json& d = detail::member(doc, "dim", "<root>");
  const int dim = detail::read_index(d, "dim");
  if (dim <= 0) detail::parse_fail("dim", "must be positive");
  Algebra a;
  a.params = resolve_params(doc, overrides);
  a.mu = parse_brackets(detail::member(doc, "brackets", "<root>"), dim, a.params);
  a.omega = parse_form(doc.contains("omega") ? doc["omega"] : Json("canonical"), dim, a.params);
  if (doc.contains("metric")) {
    const Json& m = doc["metric"];
    if (!m.is_array() || static_cast<int>(m.size()) != dim) detail::parse_fail("metric", "expected an array of dim entries");
    Vector diag(dim);
    for (int n = 0; n < dim; ++n) {
      diag(n) = detail::read_real(m[static_cast<std::size_t>(n)], "metric[" + std::to_string(n) + "]", a.params);
      if (!(diag(n) > 0.0)) detail::parse_fail("metric[" + std::to_string(n) + "]", "must be positive");
    }
    a.metric = Matrix(diag.asDiagonal());
  }
  return a;
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error("parse error in " + path + ": " + e.what());
  }
}

inline Algebra load_algebra(const std::string& path, const ParamMap& overrides = {}) {
  return parse_algebra(load_json_file(path), overrides);
}

inline Json to_json(const LieBracket& mu) {
  Json arr = Json::array();
  for (const auto& e : mu.entries()) arr.push_back({{"i", e.i}, {"j", e.j}, {"k", e.k}, {"c", e.c}});
  return arr;
}

inline Json to_json(const TwoForm& w) {
  Json arr = Json::array();
  for (const auto& e : w.entries()) arr.push_back({{"i", e.i}, {"j", e.j}, {"c", e.c}});
  return arr;
}

inline Json to_json(const Vector& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

/// Row-major nested arrays.
inline Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json algebra_to_json(const LieBracket& mu, const TwoForm& omega) {
  return {{"dim", mu.dim()}, {"brackets", to_json(mu)}, {"omega", to_json(omega)}};
}

inline std::string format_real(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline void dump17(const Json& j, std::ostream& os, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(indent * depth), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{' << nl;
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) os << ',' << nl;
        first = false;
        os << pad << Json(k).dump() << (indent > 0 ? ": " : ":");
        dump17(v, os, indent, depth + 1);
      }
      os << nl << close << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& v : j)
        if (v.is_structured()) flat = false;
      if (flat || indent == 0) {
        os << '[';
        for (std::size_t n = 0; n < j.size(); ++n) {
          if (n) os << (indent > 0 ? ", " : ",");
          dump17(j[n], os, indent, depth + 1);
        }
        os << ']';
        return;
      }
      os << '[' << nl;
      for (std::size_t n = 0; n < j.size(); ++n) {
        if (n) os << ',' << nl;
        os << pad;
        dump17(j[n], os, indent, depth + 1);
      }
      os << nl << close << ']';
      return;
    }
    case Json::value_t::number_float:
      os << format_real(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

} // namespace detail

/// Serialization with reals at 17 significant digits.
inline std::string dump_json(const Json& j, int indent = 2) {
  std::ostringstream os;
  detail::dump17(j, os, indent, 0);
  return os.str();
}

} // namespace aks
