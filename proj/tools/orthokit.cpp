#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <unistd.h>

#include "orthokit/io/certificate.hpp"

namespace {

using namespace orthokit;
using io::json;

// Exit codes: 0 success or verdict true, 1 verified negative, 2 error.
struct Negative {
  std::string message;
};

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io::FormatError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw io::FormatError(path + ": " + e.what());
  }
}

QuadraticForm read_form(const std::string& path) {
  const json j = read_json(path);
  return io::form_from(j.contains("form") ? j["form"] : j, "form");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

VectorQ parse_vector(const std::string& text) {
  VectorQ v;
  for (const auto& x : split(text, ',')) v.push_back(parse_rational(x));
  return v;
}

std::vector<PlaceQ> parse_places(const std::string& text) {
  std::vector<PlaceQ> out;
  for (const auto& x : split(text, ',')) out.push_back(parse_place(x));
  return out;
}

void write_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw io::FormatError("cannot write '" + path + "'");
    out << text;
    if (!out.flush()) throw io::FormatError("cannot write '" + path + "'");
  }
  std::filesystem::rename(tmp, path);
}

struct Options {
  std::string output;
  std::uint64_t seed = 0;
  unsigned long factor_bound = 100000;
  long height_bound = 20;
  long prime = 0;
  int precision = 0;
  bool special = false;
  std::vector<std::string> local;
  std::string form_path, second_path;
  std::string value, places, witness;
};

// The certificate goes to --output when given, otherwise to stdout; the
// summary line goes to stdout, or to stderr when stdout holds the certificate.
void emit(const Options& o, const json& cert, const std::string& summary) {
  const std::string text = cert.dump(2) + "\n";
  if (o.output.empty()) {
    std::cout << text;
    std::cerr << summary << "\n";
  } else {
    write_atomic(o.output, text);
    std::cout << summary << "\n";
  }
}

void require_prime_precision(const Options& o) {
  if (o.prime == 0) throw PreconditionError("--prime is required");
  if (o.precision < 1) throw PreconditionError("--precision must be at least 1");
}

int cmd_form_normalize(const Options& o) {
  const QuadraticForm f = read_form(o.form_path);
  std::optional<VectorQ> w;
  if (!o.witness.empty()) w = parse_vector(o.witness);
  const json c = io::build_normalize(f, w, o.height_bound);
  emit(o, c, "normalize: ok scale=" + c["scale"].dump());
  return 0;
}

int cmd_witt_extend(const Options& o) {
  const QuadraticForm f = read_form(o.form_path);
  const json v = read_json(o.second_path);
  const auto A = io::vectors_from(io::member(v, "sources"), "sources");
  const auto B = io::vectors_from(io::member(v, "targets"), "targets");
  const json c = io::build_witt(f, A, B, o.special, o.factor_bound);
  emit(o, c, "witt: ok det=" + c["det"].get<std::string>() +
                 " reflections=" + std::to_string(c["reflection_word"].size()));
  return 0;
}

int cmd_lift(const Options& o) {
  require_prime_precision(o);
  const QuadraticForm f = read_form(o.form_path);
  const json v = read_json(o.second_path);
  const auto A = io::int_vectors_from(io::member(v, "sources"), "sources");
  const auto B = io::int_vectors_from(io::member(v, "targets"), "targets");
  const json c = io::build_lift(f, A, B, o.prime, o.precision, o.special);
  emit(o, c, "lift: ok p=" + std::to_string(o.prime) + " N=" + std::to_string(o.precision) +
                 " det=" + c["checks"]["det"].get<std::string>());
  return 0;
}

int cmd_orbit_test(const Options& o) {
  require_prime_precision(o);
  const QuadraticForm f = read_form(o.form_path);
  const json v = read_json(o.second_path);
  const auto a = io::int_vector_from(io::member(v, "a"), "a");
  const auto b = io::int_vector_from(io::member(v, "b"), "b");
  const json c = io::build_orbit(f, a, b, o.prime, o.precision);
  const bool exists = c["exists"].get<bool>();
  emit(o, c, std::string("orbit: ") + (exists ? "transporter found" : "no transporter") +
                 " levels=" + c["level_a"].dump() + "," + c["level_b"].dump());
  return exists ? 0 : 1;
}

int cmd_borovoi(const Options& o) {
  const QuadraticForm f = read_form(o.form_path);
  const StandardFrame fr(f);
  const json element = read_json(o.second_path);
  const MatrixQ g = io::element_from(fr, element, o.seed);
  if (g.rows() != fr.dim() || !g.is_square()) throw DimensionError("matrix dimension mismatch");
  if (!is_orthogonal(f, g)) throw PreconditionError("not orthogonal for the form");
  if (det(g) != 1) throw Negative{"det g = -1, not in SO"};
  const auto theta = spinor_norm(f, g, o.factor_bound);
  if (!theta.is_trivial())
    throw Negative{"spinor norm of g is " + theta.representative().get_str() + " mod squares"};
  std::optional<io::LocalRequest> local;
  if (!o.local.empty()) {
    local = io::LocalRequest{parse_integer(o.local[0]), static_cast<int>(parse_integer(o.local[1]).get_si())};
  }
  const json c = io::build_borovoi(fr, element, o.seed, local);
  std::string summary = "borovoi: ok denominator_lcm=" + c["denominator_lcm"].get<std::string>();
  if (local) summary += " local mod " + o.local[0] + "^" + c["local"]["N"].dump();
  emit(o, c, summary);
  return 0;
}

int cmd_sap(const Options& o) {
  const QuadraticForm q = read_form(o.form_path);
  if (o.value.empty()) throw PreconditionError("--value is required");
  if (o.witness.empty()) throw PreconditionError("--witness is required");
  const json c = io::build_sap(q, parse_rational(o.value), parse_places(o.places), parse_vector(o.witness));
  const json& v = c["verdict"];
  emit(o, c, std::string("sap: ") + (v["holds"].get<bool>() ? "holds" : "fails") + " (" +
                 v["reason"].get<std::string>() + ")");
  return v["holds"].get<bool>() ? 0 : 1;
}

int cmd_invariants(const Options& o) {
  const QuadraticForm f = read_form(o.form_path);
  std::optional<std::vector<PlaceQ>> S;
  if (!o.places.empty()) S = parse_places(o.places);
  const json c = io::build_invariants(f, S, o.factor_bound);
  emit(o, c, std::string("invariants: ") + std::to_string(c["reports"].size()) + " places, " +
                 (c["global"]["isotropic"].get<bool>() ? "isotropic" : "anisotropic"));
  return 0;
}

int cmd_verify(const Options& o) {
  json c;
  try {
    c = read_json(o.form_path);
  } catch (const io::FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  const auto r = io::verify_document(c, o.factor_bound);
  const std::string kind = c.is_object() && c.contains("kind") && c["kind"].is_string()
                               ? c["kind"].get<std::string>()
                               : "?";
  if (r.code == 0) std::cout << "verify: ok (" << kind << ")\n";
  else if (r.code == 1) std::cout << "verify: FAILED (" << kind << "): " << r.message << "\n";
  else std::cerr << "error: " << r.message << "\n";
  return r.code;
}

// Quick end-to-end run of each construction through its verifier.
int cmd_selftest(const Options& o) {
  int failed = 0;
  auto run = [&](const std::string& name, auto&& body) {
    bool ok = false;
    try {
      ok = body();
    } catch (const std::exception& e) {
      std::cout << "  " << e.what() << "\n";
    }
    std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
    if (!ok) ++failed;
  };
  const QuadraticForm f5 = QuadraticForm::standard({1, 1, 1});
  const QuadraticForm f6 = QuadraticForm::standard({1, 2, -3, 5});
  auto e = [](std::size_t n, std::size_t i) { return unit_vector<Rational>(n, i); };
  auto ez = [](std::size_t n, std::size_t i) { return unit_vector<Integer>(n, i); };
  run("witt-extend", [&] {
    return io::verify_document(io::build_witt(f5, {e(5, 4)}, {e(5, 3)}, false)).code == 0 &&
           io::verify_document(io::build_witt(f6, {e(6, 2)}, {e(6, 2)}, true)).code == 0;
  });
  run("lift", [&] {
    return io::verify_document(io::build_lift(f5, {ez(5, 2)}, {ez(5, 3)}, 3, 10, false)).code == 0 &&
           io::verify_document(io::build_lift(f5, {ez(5, 2)}, {ez(5, 3)}, 5, 8, true)).code == 0;
  });
  run("orbit-test", [&] {
    const VectorZ a = ez(3, 0), b{3, 0, 0};
    const QuadraticForm h = QuadraticForm::standard({1});
    const json yes = io::build_orbit(h, a, ez(3, 1), 3, 4), no = io::build_orbit(h, a, b, 3, 4);
    return yes["exists"].get<bool>() && !no["exists"].get<bool>() &&
           io::verify_document(yes).code == 0 && io::verify_document(no).code == 0;
  });
  run("borovoi", [&] {
    const StandardFrame fr(f5);
    for (std::uint64_t s = o.seed; s < o.seed + 5; ++s) {
      const json el{{"generate", {{"word_length", 4}}}};
      if (io::verify_document(io::build_borovoi(fr, el, s, std::nullopt)).code != 0) return false;
    }
    return true;
  });
  run("sap", [&] {
    const QuadraticForm q = QuadraticForm::diagonal({1, 1, -2});
    const json c = io::build_sap(q, 1, {PlaceQ::real()}, {1, 0, 0});
    return io::verify_document(c).code == 0 && !c["verdict"]["holds"].get<bool>();
  });
  run("hilbert product formula", [&] {
    std::mt19937_64 rng(o.seed);
    for (int i = 0; i < 50; ++i) {
      const Rational x = static_cast<long>(rng() % 199) - 99, y = static_cast<long>(rng() % 199) - 99;
      if (x == 0 || y == 0) continue;
      int prod = hilbert_symbol(x, y, PlaceQ::real());
      for (const auto& p : support_primes({x, y, Rational(2)}))
        prod *= hilbert_symbol(x, y, PlaceQ::finite(p));
      if (prod != 1) return false;
    }
    return true;
  });
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constructive isometries of quadratic forms"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(io::kVersion));
  Options o;
  app.add_option("--output", o.output, "Write the certificate to this file");
  app.add_option("--factor-bound", o.factor_bound, "Trial division bound for factoring")->capture_default_str();
  app.add_option("--seed", o.seed, "Seed for generated inputs")->capture_default_str();

  auto* normalize = app.add_subcommand("form-normalize", "Bring an isotropic form to standard shape");
  normalize->add_option("form", o.form_path, "Form file")->required();
  normalize->add_option("--height-bound", o.height_bound, "Search height for an isotropic vector")->capture_default_str();
  normalize->add_option("--witness", o.witness, "Isotropic vector, comma separated");

  auto* witt = app.add_subcommand("witt-extend", "Extend an isometry a_i -> b_i over Q");
  witt->add_option("form", o.form_path, "Form file")->required();
  witt->add_option("vectors", o.second_path, "File with sources and targets")->required();
  witt->add_flag("--special", o.special, "Force det +1");

  auto* lift = app.add_subcommand("lift", "Integral transporter mod p^N");
  lift->add_option("form", o.form_path, "Form file")->required();
  lift->add_option("transporter", o.second_path, "File with sources and targets")->required();
  lift->add_option("--prime", o.prime, "Odd prime p")->required();
  lift->add_option("--precision", o.precision, "Precision N")->required();
  lift->add_flag("--special", o.special, "Force det +1 (needs 2m+1 <= n)");

  auto* orbit = app.add_subcommand("orbit-test", "Decide whether a and b lie in one integral orbit");
  orbit->add_option("form", o.form_path, "Form file")->required();
  orbit->add_option("pair", o.second_path, "File with vectors a and b")->required();
  orbit->add_option("--prime", o.prime, "Odd prime p")->required();
  orbit->add_option("--precision", o.precision, "Precision N")->required();

  auto* borovoi = app.add_subcommand("borovoi", "Four-factor decomposition of a spinor-kernel element");
  borovoi->add_option("form", o.form_path, "Form file")->required();
  borovoi->add_option("element", o.second_path, "Element file")->required();
  borovoi->add_option("--local", o.local, "Also build the quadruple mod p^N")->expected(2);

  auto* sap = app.add_subcommand("sap", "Strong approximation criterion for q(x) = a");
  sap->add_option("form", o.form_path, "Form file")->required();
  sap->add_option("--value", o.value, "The value a");
  sap->add_option("--places", o.places, "Places of S, comma separated (real or primes)");
  sap->add_option("--witness", o.witness, "A rational point, comma separated");

  auto* inv = app.add_subcommand("invariants", "Local invariants and isotropy");
  inv->add_option("form", o.form_path, "Form file")->required();
  inv->add_option("--places", o.places, "Places, comma separated (default: real and bad primes)");

  auto* verify = app.add_subcommand("verify", "Recompute every claim of a certificate");
  verify->add_option("certificate", o.form_path, "Certificate file")->required();

  auto* selftest = app.add_subcommand("selftest", "Run the built-in checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*normalize) return cmd_form_normalize(o);
    if (*witt) return cmd_witt_extend(o);
    if (*lift) return cmd_lift(o);
    if (*orbit) return cmd_orbit_test(o);
    if (*borovoi) return cmd_borovoi(o);
    if (*sap) return cmd_sap(o);
    if (*inv) return cmd_invariants(o);
    if (*verify) return cmd_verify(o);
    if (*selftest) return cmd_selftest(o);
  } catch (const Negative& n) {
    std::cerr << n.message << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
