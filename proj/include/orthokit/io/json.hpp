#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "orthokit/borovoi.hpp"
#include "orthokit/global.hpp"
#include "orthokit/local/orbit.hpp"

namespace orthokit::io {

using json = nlohmann::json;

inline constexpr const char* kVersion = "orthokit 0.1.0";

// Malformed input; the message names the offending field.
class FormatError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// ---- writing

inline json to_json(const Rational& x) { return to_string(x); }

inline json to_json(const VectorQ& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

inline json to_json(const MatrixQ& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(to_json(m.row(i)));
  return rows;
}

inline json residue_vector(const VectorZ& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(x.get_str());
  return a;
}

inline json residue_matrix(const MatrixZ& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(residue_vector(m.row(i)));
  return rows;
}

inline json residue(const Integer& p, int N, const Integer& r) {
  return {{"p", p.get_str()}, {"N", N}, {"r", r.get_str()}};
}

inline json form_to_json(const QuadraticForm& f) {
  if (f.is_standard()) {
    json a = json::array();
    for (const auto& x : f.alphas()) a.push_back(to_string(x));
    return {{"n", f.dim()}, {"alphas", a}};
  }
  return {{"gram", to_json(f.gram())}};
}

inline json place_to_json(const PlaceQ& v) {
  if (v.is_real()) return "real";
  return json(v.prime().get_si());
}

// ---- reading

inline std::string field_path(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

inline const json& member(const json& j, const std::string& key, const std::string& where = "") {
  if (!j.is_object()) throw FormatError((where.empty() ? "input" : where) + ": expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw FormatError("missing field '" + where + (where.empty() ? "" : ".") + key + "'");
  return *it;
}

inline Rational rational_from(const json& j, const std::string& where) {
  try {
    if (j.is_number_unsigned()) return Rational(Integer(j.get<unsigned long>()));
    if (j.is_number_integer()) return Rational(Integer(j.get<long>()));
    if (j.is_string()) return parse_rational(j.get<std::string>());
  } catch (const PreconditionError& e) {
    throw FormatError("field '" + where + "': " + e.what());
  }
  throw FormatError("field '" + where + "': expected a rational string");
}

inline Integer integer_from(const json& j, const std::string& where) {
  const Rational r = rational_from(j, where);
  if (!is_integral(r)) throw FormatError("field '" + where + "': expected an integer");
  return r.get_num();
}

inline long small_int_from(const json& j, const std::string& where) {
  const Integer z = integer_from(j, where);
  if (!z.fits_slong_p()) throw FormatError("field '" + where + "': integer out of range");
  return z.get_si();
}

inline VectorQ vector_from(const json& j, const std::string& where) {
  if (!j.is_array()) throw FormatError("field '" + where + "': expected an array");
  VectorQ v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(rational_from(j[i], field_path(where, i)));
  return v;
}

inline VectorZ int_vector_from(const json& j, const std::string& where) {
  if (!j.is_array()) throw FormatError("field '" + where + "': expected an array");
  VectorZ v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(integer_from(j[i], field_path(where, i)));
  return v;
}

inline MatrixQ matrix_from(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw FormatError("field '" + where + "': expected a nonempty array of rows");
  std::vector<VectorQ> rows;
  for (std::size_t i = 0; i < j.size(); ++i) {
    rows.push_back(vector_from(j[i], field_path(where, i)));
    if (rows.back().size() != rows.front().size())
      throw FormatError("field '" + field_path(where, i) + "': ragged row");
  }
  MatrixQ m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t k = 0; k < rows[i].size(); ++k) m(i, k) = rows[i][k];
  return m;
}

inline MatrixZ int_matrix_from(const json& j, const std::string& where) {
  const MatrixQ q = matrix_from(j, where);
  MatrixZ m(q.rows(), q.cols());
  for (std::size_t i = 0; i < q.rows(); ++i)
    for (std::size_t k = 0; k < q.cols(); ++k) {
      if (!is_integral(q(i, k)))
        throw FormatError("field '" + where + "': expected integer entries");
      m(i, k) = q(i, k).get_num();
    }
  return m;
}

template <class V, class F>
std::vector<V> list_from(const json& j, const std::string& where, F&& one) {
  if (!j.is_array()) throw FormatError("field '" + where + "': expected an array");
  std::vector<V> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(one(j[i], field_path(where, i)));
  return out;
}

inline std::vector<VectorQ> vectors_from(const json& j, const std::string& where) {
  return list_from<VectorQ>(j, where, vector_from);
}

inline std::vector<VectorZ> int_vectors_from(const json& j, const std::string& where) {
  return list_from<VectorZ>(j, where, int_vector_from);
}

inline QuadraticForm form_from(const json& j, const std::string& where = "form") {
  if (!j.is_object()) throw FormatError("field '" + where + "': expected an object");
  if (j.contains("alphas")) {
    const VectorQ alphas = vector_from(j["alphas"], where + ".alphas");
    if (j.contains("n") && small_int_from(j["n"], where + ".n") != static_cast<long>(alphas.size() + 2))
      throw FormatError("field '" + where + ".n': does not match the number of alphas + 2");
    return QuadraticForm::standard(alphas);
  }
  if (j.contains("gram")) return QuadraticForm(matrix_from(j["gram"], where + ".gram"));
  throw FormatError("field '" + where + "': needs 'alphas' or 'gram'");
}

inline PlaceQ place_from(const json& j, const std::string& where) {
  try {
    if (j.is_string()) return parse_place(j.get<std::string>());
    return PlaceQ::finite(integer_from(j, where));
  } catch (const FormatError&) {
    throw;
  } catch (const PreconditionError& e) {
    throw FormatError("field '" + where + "': " + e.what());
  }
}

inline std::vector<PlaceQ> places_from(const json& j, const std::string& where) {
  return list_from<PlaceQ>(j, where, place_from);
}

// ---- payloads

inline json orthogonal_map_json(const QuadraticForm& f, const MatrixQ& m,
                                const ReflectionWordQ* word, unsigned long factor_bound) {
  json out{{"matrix", to_json(m)}};
  const Rational d = det(m);
  out["det"] = d == 1 ? "+1" : "-1";
  if (d == 1)
    out["spinor_norm"] = json(spinor_norm(f, m, factor_bound).representative().get_str());
  else
    out["spinor_norm"] = nullptr;
  if (word) {
    json w = json::array();
    for (const auto& c : word->vectors) w.push_back(to_json(c));
    out["reflection_word"] = w;
  } else {
    out["reflection_word"] = nullptr;
  }
  return out;
}

inline json invariants_json(const LocalInvariants& inv) {
  return {{"place", place_to_json(inv.place)},
          {"dim", inv.dim},
          {"disc", inv.discriminant.representative().get_str()},
          {"hasse", inv.hasse},
          {"witt_index", inv.witt_index},
          {"isotropic", inv.isotropic}};
}

inline json verdict_json(const SAPVerdict& v) {
  json out{{"holds", v.holds}, {"reason", v.reason}};
  out["witness_place"] = v.witness_place ? place_to_json(*v.witness_place) : json(nullptr);
  return out;
}

inline json certificate_json(const QuadraticForm& f, const BorovoiCertificate& c) {
  return {{"form", form_to_json(f)},       {"g", to_json(c.g)}, {"x", to_json(c.x)},
          {"y", to_json(c.y)},             {"z", to_json(c.z)}, {"u", to_json(c.u)},
          {"s", to_json(c.s)},             {"t", to_json(c.t)},
          {"denominator_lcm", denominator_lcm(c).get_str()}};
}

inline BorovoiCertificate certificate_from(const json& j) {
  BorovoiCertificate c;
  c.g = matrix_from(member(j, "g"), "g");
  c.x = matrix_from(member(j, "x"), "x");
  c.y = matrix_from(member(j, "y"), "y");
  c.z = matrix_from(member(j, "z"), "z");
  c.u = matrix_from(member(j, "u"), "u");
  c.s = vector_from(member(j, "s"), "s");
  c.t = vector_from(member(j, "t"), "t");
  return c;
}

inline json local_quadruple_json(const LocalQuadruple& q) {
  return {{"p", q.p.get_str()},           {"N", q.precision},
          {"x", residue_matrix(q.x)},     {"y", residue_matrix(q.y)},
          {"z", residue_matrix(q.z)},     {"u", residue_matrix(q.u)}};
}

}  // namespace orthokit::io
