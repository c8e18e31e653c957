#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "orthokit/io/json.hpp"

namespace orthokit::io {

// A certificate is {"kind", "version", "input", ...payload}. Verification
// reads the problem from "input" and recomputes every claim in the payload.

// FNV-1a over the serialized input; guards against edits to the problem
// that leave every mathematical claim true for the edited problem.
inline std::string input_digest(const json& input) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : input.dump()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Primitive integral multiple with positive leading entry; a reflection
// vector is stored in this form so that it is unique.
inline VectorQ primitive_direction(const VectorQ& v) {
  Integer l = 1, g = 0;
  for (const auto& x : v) l = lcm(l, x.get_den());
  for (const auto& x : v) g = gcd(g, Integer(x.get_num() * (l / x.get_den())));
  if (g == 0) throw PreconditionError("zero reflection vector");
  VectorQ out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out[i] = Rational(Integer(v[i].get_num() * (l / v[i].get_den()) / g));
  const auto lead = std::find_if(out.begin(), out.end(), [](const Rational& x) { return x != 0; });
  if (*lead < 0)
    for (auto& x : out) x = -x;
  return out;
}

inline json certificate(const std::string& kind, json input, json payload) {
  payload["input_digest"] = input_digest(input);
  payload["kind"] = kind;
  payload["version"] = kVersion;
  payload["input"] = std::move(input);
  return payload;
}

// ---- witt

inline json build_witt(const QuadraticForm& f, const std::vector<VectorQ>& A,
                       const std::vector<VectorQ>& B, bool special,
                       unsigned long factor_bound = 100000) {
  json input{{"form", form_to_json(f)}, {"special", special}};
  input["sources"] = json::array();
  input["targets"] = json::array();
  for (const auto& v : A) input["sources"].push_back(to_json(v));
  for (const auto& v : B) input["targets"].push_back(to_json(v));
  MatrixQ sigma;
  ReflectionWordQ word;
  if (special) {
    sigma = witt_extend_special(f, A, B, SpecialTarget::det);
    word = cartan_dieudonne(f, sigma);
  } else {
    auto r = witt_extend(f, A, B);
    sigma = std::move(r.matrix);
    word = std::move(r.word);
  }
  for (auto& c : word.vectors) c = primitive_direction(c);
  return certificate("witt", std::move(input), orthogonal_map_json(f, sigma, &word, factor_bound));
}

// ---- lift

// Names the first alpha_i that is not a p-adic unit.
inline void require_good_prime(const QuadraticForm& f, const Integer& p) {
  if (!f.is_standard()) return;
  const auto& al = f.alphas();
  for (std::size_t i = 0; i < al.size(); ++i)
    if (padic_valuation(al[i], p) != 0)
      throw PreconditionError("p = " + p.get_str() + " is a bad place: alpha_" +
                              std::to_string(i + 1) + " = " + to_string(al[i]) +
                              " is not a unit");
}

inline json build_lift(const QuadraticForm& f, const std::vector<VectorZ>& A,
                       const std::vector<VectorZ>& B, const Integer& p, int N, bool special) {
  const ResidueRing R(p, N);
  require_good_prime(f, p);
  json input{{"form", form_to_json(f)}, {"p", p.get_si()}, {"N", N}, {"special", special}};
  json sources = json::array(), targets = json::array();
  for (const auto& v : A) sources.push_back(residue_vector(v));
  for (const auto& v : B) targets.push_back(residue_vector(v));
  input["sources"] = sources;
  input["targets"] = targets;
  const TransporterProblem pr{p, f.gram(), A, B};
  const auto X = special ? witt_lift_special(pr, N) : witt_lift(pr, N);
  const MatrixZ F = lattice_gram(R, f.gram());
  json payload{{"p", p.get_si()}, {"N", N}, {"gram", to_json(f.gram())},
               {"sources", sources}, {"targets", targets}, {"X", residue_matrix(X.matrix)}};
  payload["checks"] = {
      {"orthogonality_level", orthogonality_level(R, F, X.matrix)},
      {"transport_level", transport_level(R, X.matrix, A, B)},
      {"det", R.equal(determinant(R, X.matrix), R.one()) ? "+1" : "-1"}};
  return certificate("lift", std::move(input), std::move(payload));
}

// ---- orbit

inline json build_orbit(const QuadraticForm& f, const VectorZ& a, const VectorZ& b,
                        const Integer& p, int N) {
  const ResidueRing R(p, N);
  require_good_prime(f, p);
  json input{{"form", form_to_json(f)}, {"p", p.get_si()}, {"N", N},
             {"a", residue_vector(a)},   {"b", residue_vector(b)}};
  const OrbitResult r = orbit_test(p, f.gram(), a, b, N);
  json payload{{"p", p.get_si()},       {"N", N},
               {"gram", to_json(f.gram())}, {"a", residue_vector(a)},
               {"b", residue_vector(b)},    {"level_a", r.level_a},
               {"level_b", r.level_b},      {"transport_level", r.transport_level},
               {"exists", r.transporter.has_value()}};
  payload["X"] = r.transporter ? residue_matrix(r.transporter->matrix) : json(nullptr);
  return certificate("orbit", std::move(input), std::move(payload));
}

// ---- borovoi

// g from an element file: {"matrix"} or {"generate": {"word_length"}}.
inline MatrixQ element_from(const StandardFrame& fr, const json& element, std::uint64_t seed) {
  if (element.contains("matrix")) return matrix_from(element["matrix"], "matrix");
  if (element.contains("generate")) {
    const long len = small_int_from(member(element["generate"], "word_length", "generate"),
                                    "generate.word_length");
    if (len < 0 || len > 1000) throw FormatError("field 'generate.word_length': out of range");
    return random_spinor_kernel_element(fr, seed, static_cast<int>(len));
  }
  throw FormatError("element: needs 'matrix' or 'generate'");
}

struct LocalRequest {
  Integer p;
  int N = 0;
};

inline json build_borovoi(const StandardFrame& fr, const json& element, std::uint64_t seed,
                          const std::optional<LocalRequest>& local) {
  const MatrixQ g = element_from(fr, element, seed);
  const BorovoiCertificate c = decompose(fr, g);
  json input{{"form", form_to_json(fr.form())}, {"element", element}};
  if (element.contains("generate")) input["seed"] = seed;
  json payload = certificate_json(fr.form(), c);
  if (local) {
    input["local"] = {{"p", local->p.get_si()}, {"N", local->N}};
    const ResidueRing R(local->p, local->N);
    const LocalZPoint zeta = reduce_zpoint({c.g, c.s, c.t}, R);
    payload["local"] = local_quadruple_json(phi_fiber_local(fr, zeta, local->p, local->N));
  }
  return certificate("borovoi", std::move(input), std::move(payload));
}

// ---- sap

inline json build_sap(const QuadraticForm& q, const Rational& a, const std::vector<PlaceQ>& S,
                      const VectorQ& x) {
  json places = json::array();
  for (const auto& v : S) places.push_back(place_to_json(v));
  json input{{"form", form_to_json(q)}, {"value", to_string(a)}, {"places", places},
             {"witness", to_json(x)}};
  return certificate("sap", std::move(input), {{"verdict", verdict_json(strong_approx_quadric(q, a, S, x))}});
}

// ---- invariants

inline std::vector<PlaceQ> default_places(const QuadraticForm& f, unsigned long factor_bound) {
  std::vector<PlaceQ> out{PlaceQ::real()};
  auto ps = support_primes(orthokit::detail::diagonal_entries(f), factor_bound);
  ps.push_back(2);
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  for (const auto& p : ps) out.push_back(PlaceQ::finite(p));
  return out;
}

inline json invariants_payload(const QuadraticForm& f, const std::vector<PlaceQ>& places,
                               unsigned long factor_bound) {
  json reports = json::array();
  for (const auto& v : places) reports.push_back(invariants_json(local_invariants(f, v, factor_bound)));
  const auto gi = is_isotropic_global(f, factor_bound);
  json global{{"isotropic", gi.isotropic}};
  global["obstruction"] = gi.obstruction ? place_to_json(*gi.obstruction) : json(nullptr);
  return {{"reports", reports}, {"global", global}};
}

inline json build_invariants(const QuadraticForm& f, const std::optional<std::vector<PlaceQ>>& places,
                             unsigned long factor_bound) {
  const auto vs = places ? *places : default_places(f, factor_bound);
  json input{{"form", form_to_json(f)}, {"factor_bound", factor_bound}};
  input["places"] = json::array();
  for (const auto& v : vs) input["places"].push_back(place_to_json(v));
  return certificate("invariants", std::move(input), invariants_payload(f, vs, factor_bound));
}

// ---- normalize

inline json build_normalize(const QuadraticForm& f, const std::optional<VectorQ>& witness,
                            long height_bound) {
  json input{{"form", form_to_json(f)}, {"height_bound", height_bound}};
  input["witness"] = witness ? to_json(*witness) : json(nullptr);
  const NormalizedForm nf = normalize_to_standard(f, witness, height_bound);
  json payload{{"form", form_to_json(nf.form)},  {"basis", to_json(nf.basis)},
               {"change", to_json(nf.change)},   {"scale", nf.scale},
               {"isotropic_vector", to_json(nf.isotropic_vector)}};
  return certificate("normalize", std::move(input), std::move(payload));
}

// ---- verification

struct VerifyResult {
  int code = 0;  // 0 every claim recomputes, 1 a check fails, 2 malformed
  std::string message;
};

namespace detail {

struct CheckFailed {
  std::string what;
};

inline void check(bool cond, const std::string& what) {
  if (!cond) throw CheckFailed{what};
}

inline void check_dims(const MatrixQ& m, std::size_t n, const std::string& name) {
  check(m.rows() == n && m.cols() == n, name + " has the wrong shape");
}

inline MatrixQ to_rational(const MatrixZ& m) {
  MatrixQ out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = Rational(m(i, j));
  return out;
}

inline void check_residues(const ResidueRing& R, const MatrixZ& m, const std::string& name) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      check(m(i, j) >= 0 && m(i, j) < R.modulus(), name + " entry out of range");
}

inline void verify_witt(const json& c, unsigned long factor_bound) {
  const json& in = member(c, "input");
  const QuadraticForm f = form_from(member(in, "form", "input"), "input.form");
  const auto A = vectors_from(member(in, "sources", "input"), "input.sources");
  const auto B = vectors_from(member(in, "targets", "input"), "input.targets");
  const bool special = member(in, "special", "input").get<bool>();
  const MatrixQ m = matrix_from(member(c, "matrix"), "matrix");
  const RationalField Q;
  check_dims(m, f.dim(), "matrix");
  check(A.size() == B.size(), "source and target counts differ");
  check(is_orthogonal(f, m), "matrix is not orthogonal for the form");
  for (std::size_t i = 0; i < A.size(); ++i)
    check(A[i].size() == f.dim() && equal(Q, mul(Q, m, A[i]), B[i]),
          "matrix does not send source " + std::to_string(i + 1) + " to its target");
  const Rational d = det(m);
  const std::string ds = d == 1 ? "+1" : "-1";
  check(member(c, "det").get<std::string>() == ds, "det claim differs");
  if (special) check(d == 1, "special map has det -1");
  const json& sn = member(c, "spinor_norm");
  if (d == 1) {
    check(sn.is_string() && sn.get<std::string>() ==
                                spinor_norm(f, m, factor_bound).representative().get_str(),
          "spinor norm claim differs");
  } else {
    check(sn.is_null(), "spinor norm claimed for det -1");
  }
  const json& w = member(c, "reflection_word");
  if (!w.is_null()) {
    ReflectionWordQ word;
    word.vectors = vectors_from(w, "reflection_word");
    for (const auto& v : word.vectors)
      check(v == primitive_direction(v), "reflection vector is not primitive with positive leading entry");
    check(equal(Q, word_matrix(f, word), m), "reflection word does not multiply to the matrix");
  }
}

inline void verify_lift(const json& c) {
  const json& in = member(c, "input");
  const QuadraticForm f = form_from(member(in, "form", "input"), "input.form");
  const Integer p = integer_from(member(c, "p"), "p");
  const long N = small_int_from(member(c, "N"), "N");
  check(p == integer_from(member(in, "p", "input"), "input.p"), "p differs from the input");
  check(N == small_int_from(member(in, "N", "input"), "input.N"), "N differs from the input");
  check(N >= 1 && N <= 100000, "precision out of range");
  const bool special = member(in, "special", "input").get<bool>();
  const MatrixQ gram = matrix_from(member(c, "gram"), "gram");
  check(gram == f.gram(), "gram differs from the input form");
  const auto A = int_vectors_from(member(c, "sources"), "sources");
  const auto B = int_vectors_from(member(c, "targets"), "targets");
  check(A == int_vectors_from(member(in, "sources", "input"), "input.sources"), "sources differ from the input");
  check(B == int_vectors_from(member(in, "targets", "input"), "input.targets"), "targets differ from the input");
  check(A.size() == B.size(), "source and target counts differ");
  for (const auto& v : A) check(v.size() == f.dim(), "source dimension mismatch");
  for (const auto& v : B) check(v.size() == f.dim(), "target dimension mismatch");
  const ResidueRing R(p, static_cast<int>(N));
  const MatrixZ F = lattice_gram(R, gram);
  const MatrixZ X = int_matrix_from(member(c, "X"), "X");
  check(X.rows() == f.dim() && X.cols() == f.dim(), "X has the wrong shape");
  check_residues(R, X, "X");
  const json& ch = member(c, "checks");
  const int ol = orthogonality_level(R, F, X), tl = transport_level(R, X, A, B);
  check(ol == N, "X is orthogonal only mod p^" + std::to_string(ol));
  check(tl == N, "X transports only mod p^" + std::to_string(tl));
  check(small_int_from(member(ch, "orthogonality_level", "checks"), "checks.orthogonality_level") == ol,
        "orthogonality level claim differs");
  check(small_int_from(member(ch, "transport_level", "checks"), "checks.transport_level") == tl,
        "transport level claim differs");
  const auto dX = determinant(R, X);
  check(R.equal(dX, R.one()) || R.equal(dX, R.neg(R.one())), "det X is not +-1");
  const std::string ds = R.equal(dX, R.one()) ? "+1" : "-1";
  check(member(ch, "det", "checks").get<std::string>() == ds, "det claim differs");
  if (special) check(ds == "+1", "special lift has det -1");
}

inline void verify_orbit(const json& c) {
  const json& in = member(c, "input");
  const QuadraticForm f = form_from(member(in, "form", "input"), "input.form");
  const Integer p = integer_from(member(c, "p"), "p");
  const long N = small_int_from(member(c, "N"), "N");
  check(p == integer_from(member(in, "p", "input"), "input.p"), "p differs from the input");
  check(N == small_int_from(member(in, "N", "input"), "input.N"), "N differs from the input");
  check(N >= 1 && N <= 100000, "precision out of range");
  check(matrix_from(member(c, "gram"), "gram") == f.gram(), "gram differs from the input form");
  const VectorZ a = int_vector_from(member(c, "a"), "a"), b = int_vector_from(member(c, "b"), "b");
  check(a == int_vector_from(member(in, "a", "input"), "input.a"), "a differs from the input");
  check(b == int_vector_from(member(in, "b", "input"), "input.b"), "b differs from the input");
  const std::size_t n = f.dim();
  check(a.size() == n && b.size() == n, "vector dimension mismatch");
  const ResidueRing R(p, static_cast<int>(N));
  const MatrixZ F = lattice_gram(R, f.gram());
  const VectorZ ar = reduce(R, a), br = reduce(R, b);
  check(R.equal(bilinear(R, F, ar, ar), bilinear(R, F, br, br)), "f(a) and f(b) differ");
  const int la = level(R, ar), lb = level(R, br);
  check(small_int_from(member(c, "level_a"), "level_a") == la, "level_a claim differs");
  check(small_int_from(member(c, "level_b"), "level_b") == lb, "level_b claim differs");
  const bool exists = member(c, "exists").get<bool>();
  check(exists == (la == lb), "existence claim contradicts the levels");
  const json& xj = member(c, "X");
  const long tl_claim = small_int_from(member(c, "transport_level"), "transport_level");
  if (!exists) {
    check(xj.is_null(), "transporter given although the levels differ");
    check(tl_claim == 0, "transport level claimed without a transporter");
    return;
  }
  check(!xj.is_null(), "transporter missing");
  const MatrixZ X = int_matrix_from(xj, "X");
  check(X.rows() == n && X.cols() == n, "X has the wrong shape");
  check_residues(R, X, "X");
  check(orthogonality_level(R, F, X) == N, "X is not orthogonal mod p^N");
  const int tl = transport_level(R, X, {ar}, {br});
  check(tl == tl_claim, "transport level claim differs");
  check(tl >= N - la, "X misses the level N - lambda");
}

inline Integer largest_prime_outside(const Integer& d, const std::vector<Integer>& S) {
  for (const auto& q : prime_divisors(d))
    if (std::find(S.begin(), S.end(), q) == S.end()) return q;
  return 0;
}

inline void verify_borovoi(const json& c) {
  const json& in = member(c, "input");
  const QuadraticForm f = form_from(member(in, "form", "input"), "input.form");
  check(form_from(member(c, "form"), "form") == f, "form differs from the input");
  check(f.is_standard() && f.dim() >= 5, "form is not a standard form of dimension >= 5");
  const StandardFrame fr(f);
  const json& el = member(in, "element", "input");
  const auto seed = el.contains("generate") ? member(in, "seed", "input").get<std::uint64_t>() : 0;
  const BorovoiCertificate cert = certificate_from(c);
  const MatrixQ g = element_from(fr, el, seed);
  check(g == cert.g, "g differs from the input element");
  const auto v = verify_certificate(fr, cert);
  check(v.ok(), v.ok() ? "" : v.failures.front());
  const Integer den = denominator_lcm(cert);
  check(integer_from(member(c, "denominator_lcm"), "denominator_lcm") == den,
        "denominator lcm claim differs");
  if (c.contains("S")) {
    const auto S = int_vector_from(c["S"], "S");
    const Integer q = largest_prime_outside(den, S);
    check(q == 0, "denominator prime " + q.get_str() + " lies outside S");
  }
  const bool want_local = in.contains("local");
  check(want_local == c.contains("local"), "local part does not match the input");
  if (!want_local) return;
  const json& lin = in["local"];
  const json& lq = c["local"];
  LocalQuadruple q;
  q.p = integer_from(member(lq, "p", "local"), "local.p");
  q.precision = static_cast<int>(small_int_from(member(lq, "N", "local"), "local.N"));
  check(q.p == integer_from(member(lin, "p", "input.local"), "input.local.p"), "local p differs from the input");
  check(q.precision == small_int_from(member(lin, "N", "input.local"), "input.local.N") - kLocalFiberGuard,
        "local precision differs from N - guard");
  check(q.precision >= 1 && q.precision <= 100000, "local precision out of range");
  q.x = int_matrix_from(member(lq, "x", "local"), "local.x");
  q.y = int_matrix_from(member(lq, "y", "local"), "local.y");
  q.z = int_matrix_from(member(lq, "z", "local"), "local.z");
  q.u = int_matrix_from(member(lq, "u", "local"), "local.u");
  const ResidueRing R(q.p, q.precision);
  for (const auto* m : {&q.x, &q.y, &q.z, &q.u}) {
    check(m->rows() == fr.dim() && m->cols() == fr.dim(), "local factor has the wrong shape");
    check_residues(R, *m, "local factor");
  }
  const LocalZPoint zeta = reduce_zpoint({cert.g, cert.s, cert.t}, R);
  const auto lv = verify_local_fiber(fr, zeta, q);
  check(lv.ok(), lv.ok() ? "" : "local: " + lv.failures.front());
}

inline void verify_sap(const json& c) {
  const json& in = member(c, "input");
  const QuadraticForm q = form_from(member(in, "form", "input"), "input.form");
  const Rational a = rational_from(member(in, "value", "input"), "input.value");
  const auto S = places_from(member(in, "places", "input"), "input.places");
  const VectorQ x = vector_from(member(in, "witness", "input"), "input.witness");
  const json expected = verdict_json(strong_approx_quadric(q, a, S, x));
  check(member(c, "verdict") == expected, "verdict differs from the recomputed one");
}

inline void verify_invariants(const json& c) {
  const json& in = member(c, "input");
  const QuadraticForm f = form_from(member(in, "form", "input"), "input.form");
  const auto fb = static_cast<unsigned long>(small_int_from(member(in, "factor_bound", "input"), "input.factor_bound"));
  const auto S = places_from(member(in, "places", "input"), "input.places");
  const json expected = invariants_payload(f, S, fb);
  check(member(c, "reports") == expected["reports"], "local reports differ from the recomputed ones");
  check(member(c, "global") == expected["global"], "global isotropy claim differs");
}

inline void verify_normalize(const json& c) {
  const json& in = member(c, "input");
  const QuadraticForm g = form_from(member(in, "form", "input"), "input.form");
  const QuadraticForm h = form_from(member(c, "form"), "form");
  const std::size_t n = g.dim();
  check(h.dim() == n && h.is_standard(), "normalized form is not standard");
  const MatrixQ P = matrix_from(member(c, "basis"), "basis");
  const MatrixQ T = matrix_from(member(c, "change"), "change");
  check_dims(P, n, "basis");
  check_dims(T, n, "change");
  const RationalField Q;
  check(equal(Q, mul(Q, P, T), identity(Q, n)), "basis and change are not inverse");
  const long sc = small_int_from(member(c, "scale"), "scale");
  check(sc != 0, "scale is zero");
  check(equal(Q, mul(Q, transpose(T), mul(Q, h.gram(), T)), scale(Q, Rational(sc), g.gram())),
        "change does not carry the new form to scale * old form");
  const VectorQ v = vector_from(member(c, "isotropic_vector"), "isotropic_vector");
  check(v.size() == n && !is_zero_vector(Q, v) && evaluate(g, v) == 0, "isotropic vector is not isotropic");
  const json& w = member(in, "witness", "input");
  if (!w.is_null()) check(vector_from(w, "input.witness") == v, "isotropic vector differs from the witness");
}

}  // namespace detail

inline VerifyResult verify_document(const json& c, unsigned long factor_bound = 100000) {
  try {
    const std::string kind = member(c, "kind").get<std::string>();
    const json& version = member(c, "version");
    if (!version.is_string()) throw FormatError("field 'version': expected a string");
    if (kind == "witt") {
      detail::check(version == kVersion, "version differs");
      detail::verify_witt(c, factor_bound);
    } else if (kind == "lift") {
      detail::check(version == kVersion, "version differs");
      detail::verify_lift(c);
    } else if (kind == "orbit") {
      detail::check(version == kVersion, "version differs");
      detail::verify_orbit(c);
    } else if (kind == "borovoi") {
      detail::check(version == kVersion, "version differs");
      detail::verify_borovoi(c);
    } else if (kind == "sap") {
      detail::check(version == kVersion, "version differs");
      detail::verify_sap(c);
    } else if (kind == "invariants") {
      detail::check(version == kVersion, "version differs");
      detail::verify_invariants(c);
    } else if (kind == "normalize") {
      detail::check(version == kVersion, "version differs");
      detail::verify_normalize(c);
    } else {
      return {2, "unknown certificate kind '" + kind + "'"};
    }
    detail::check(member(c, "input_digest") == input_digest(c["input"]), "input digest differs");
  } catch (const detail::CheckFailed& e) {
    return {1, e.what};
  } catch (const FormatError& e) {
    return {2, e.what()};
  } catch (const json::exception& e) {
    return {2, std::string("malformed certificate: ") + e.what()};
  } catch (const Error& e) {
    return {1, e.what()};
  }
  return {0, "ok"};
}

}  // namespace orthokit::io
