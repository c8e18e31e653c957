// Acceptance run: one PASS/FAIL line per criterion. With an argument k only
// criterion k runs.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <tuple>

#include "cli_runner.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "orthokit/borovoi.hpp"
#include "orthokit/global.hpp"
#include "orthokit/local/orbit.hpp"

using namespace orthokit;
using orthokit::testing::Rng;

namespace {

const RationalField Q;

struct Failure {
  std::string what;
};

void require(bool cond, const std::string& what) {
  if (!cond) throw Failure{what};
}

template <class... T>
std::string str(const T&... parts) {
  std::ostringstream ss;
  (ss << ... << parts);
  return ss.str();
}

VectorZ ez(std::size_t n, std::size_t i) { return unit_vector<Integer>(n, i); }

// ---- 1

// Sources spanning a degenerate subspace: an isotropic v and, when m = 2,
// a vector of v^perp.
std::vector<VectorQ> degenerate_sources(Rng& rng, const QuadraticForm& f, std::size_t m) {
  const std::size_t n = f.dim();
  VectorQ v;
  do {
    v = rng.vector(n, 4);
  } while (is_zero_vector(Q, v) || evaluate(f, v) != 0);
  std::vector<VectorQ> A{v};
  while (A.size() < m) {
    const VectorQ u = rng.vector(n, 4), w = rng.vector(n, 4);
    const Rational vu = bilinear(f, v, u);
    if (vu == 0) continue;
    const VectorQ w2 = sub(Q, scale(Q, vu, w), scale(Q, bilinear(f, v, w), u));
    if (rank(Q, MatrixQ::from_columns({v, w2})) == 2) A.push_back(w2);
  }
  return A;
}

std::string witt_soundness() {
  Rng rng(101);
  int degenerate = 0, total = 0;
  while (total < 200) {
    const bool want_degenerate = total < 40;
    std::size_t n = rng.uniform(2, 6);
    QuadraticForm f = orthokit::testing::random_form(rng, n, rng.uniform(1, 10));
    std::vector<VectorQ> A, B;
    if (want_degenerate) {
      n = rng.uniform(3, 6);
      std::vector<Rational> al;
      for (std::size_t i = 2; i < n; ++i) al.emplace_back(rng.nonzero(-10, 10));
      f = QuadraticForm::standard(al);
      A = degenerate_sources(rng, f, rng.uniform(1, 2));
      const MatrixQ sigma = orthokit::testing::random_reflection_product(rng, f, rng.uniform(1, 4));
      for (const auto& a : A) B.push_back(mul(Q, sigma, a));
    } else {
      std::tie(A, B) = orthokit::testing::random_witt_instance(rng, f, rng.uniform(1, n), false);
    }
    const std::size_t m = A.size();
    const bool degen = determinant(Q, gram_of(Q, f.gram(), A)) == 0;
    const auto w = witt_extend(f, A, B);
    require(is_orthogonal(f, w.matrix), str("instance ", total, ": not orthogonal"));
    for (std::size_t i = 0; i < m; ++i)
      require(mul(Q, w.matrix, A[i]) == B[i], str("instance ", total, ": a_", i + 1, " not sent to b_", i + 1));
    require(equal(Q, mul(Q, transpose(w.matrix), mul(Q, f.gram(), w.matrix)), f.gram()),
            str("instance ", total, ": tF F differs"));
    degenerate += degen;
    ++total;
  }
  require(degenerate >= 20, str("only ", degenerate, " degenerate spans"));
  return str(total, " instances, ", degenerate, " with degenerate span");
}

// ---- 2

std::string lift_engine() {
  Rng rng(102);
  int count = 0;
  for (long p : {3, 5, 7}) {
    for (int t = 0; t < 100; ++t) {
      const std::size_t n = rng.uniform(3, 6);
      const auto f = orthokit::testing::random_unimodular_standard(rng, p, n);
      const auto pr = orthokit::testing::random_transporter_problem(rng, f, p, 20, rng.uniform(1, 2));
      LiftTrace trace;
      const auto X20 = witt_lift(pr, 20, &trace);
      const ResidueRing R(p, 20);
      const MatrixZ F = to_residues(R, pr.gram);
      require(orthogonality_level(R, F, X20.matrix) == 20, str("p=", p, " #", t, ": orthogonality"));
      require(transport_level(R, X20.matrix, pr.sources, pr.targets) == 20, str("p=", p, " #", t, ": transport"));
      require(trace.iterates.size() == 20, "trace length");
      for (std::size_t s = 1; s < trace.iterates.size(); ++s)
        require(equal(ResidueRing(p, static_cast<int>(s)), trace.iterates[s], trace.iterates[s - 1]),
                str("p=", p, " #", t, ": iterate ", s + 1, " unstable mod p^", s));
      const auto X10 = witt_lift(pr, 10);
      require(equal(ResidueRing(p, 10), X20.matrix, X10.matrix), str("p=", p, " #", t, ": N=10 run differs"));
      ++count;
    }
  }
  return str(count, " problems at N=20");
}

// ---- 3

std::string skew_dimensions() {
  Rng rng(103);
  const long primes[] = {3, 5, 7};
  for (int t = 0; t < 50; ++t) {
    const ResidueRing Fp(primes[t % 3], 1);
    const std::size_t n = rng.uniform(2, 6);
    const std::size_t m = rng.uniform(1, n);
    MatrixZ F;
    do {
      F = MatrixZ(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) F(i, j) = F(j, i) = Fp.reduce(rng.uniform(0, 100));
    } while (rank(Fp, F) != n);
    std::vector<VectorZ> xs;
    do {
      xs.clear();
      for (std::size_t i = 0; i < m; ++i) {
        VectorZ v(n);
        for (auto& x : v) x = Fp.reduce(rng.uniform(0, 100));
        xs.push_back(v);
      }
    } while (rank(Fp, MatrixZ::from_columns(xs)) != m);
    require(skew_space_dimension(Fp, F) == n * (n - 1) / 2, str("#", t, ": skew space"));
    require(pairing_space_dimension(Fp, F, xs) == m * n - m * (m + 1) / 2, str("#", t, ": pairing space"));
  }
  return "50 systems";
}

// ---- 4

std::string orbit_oracle() {
  const MatrixQ g = QuadraticForm::diagonal({1, 1, 1}).gram();
  const ResidueRing R9(3, 2);
  const MatrixZ F = to_residues(R9, g);
  const auto group = orthokit::testing::enumerate_orthogonal_group(F, 9);
  const auto label = orthokit::testing::orbit_labels(group, 9, 3);
  const auto vs = orthokit::testing::all_vectors(9, 3);
  long pairs = 0;
  for (std::size_t i = 1; i < vs.size(); ++i)
    for (std::size_t j = 1; j < vs.size(); ++j) {
      if (orthokit::testing::form_value(F, vs[i], vs[i], 9) != orthokit::testing::form_value(F, vs[j], vs[j], 9))
        continue;
      const auto r = orbit_test(3, g, vs[i], vs[j], 2);
      const bool exact = r.transporter && r.transport_level == 2;
      require(exact == (label[i] == label[j]), str("pair ", i, ",", j, " disagrees with the oracle"));
      ++pairs;
    }
  const auto neg = orbit_test(3, QuadraticForm::standard({1}).gram(), VectorZ{1, 0, 0}, VectorZ{3, 0, 0}, 6);
  require(!neg.transporter && neg.level_a == 0 && neg.level_b == 1, "e1 -> 3 e1 reported a transporter");
  return str(group.size(), " group elements, ", pairs, " pairs; e1 vs 3e1 has none");
}

// ---- 5

MatrixQ random_stabilizer(Rng& rng, const StandardFrame& fr) {
  const auto& f = fr.form();
  const std::size_t n = fr.dim();
  MatrixQ m = identity(Q, n);
  Rational theta = 1;
  for (int k = 0; k < 2; ++k) {
    VectorQ c;
    do {
      c = rng.vector(n, 2);
      c[n - 1] = c[n - 2] = 0;
    } while (evaluate(f, c) == 0);
    m = mul(Q, m, reflection(f, c));
    theta *= evaluate(f, c);
  }
  return mul(Q, m, hyperbolic_rotation(f, 1 / theta));
}

std::string borovoi_round_trip() {
  int count = 0, transported = 0;
  for (const auto& fr : {StandardFrame(QuadraticForm::standard({1, 1, 1})),
                         StandardFrame(QuadraticForm::standard({1, 1, 1, 1}))}) {
    const auto& f = fr.form();
    Rng rng(105 + fr.dim());
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const MatrixQ g = random_spinor_kernel_element(fr, seed, 8);
      const auto c = decompose(fr, g);
      const auto v = verify_certificate(fr, c);
      require(v.ok(), str("n=", fr.dim(), " seed ", seed, ": ", v.ok() ? "" : v.failures[0]));
      // second opinion on theta through the reflection word
      for (const auto* m : {&c.x, &c.y, &c.z, &c.u})
        require(det(*m) == 1 && is_square(spinor_norm_value(f, *m)), str("n=", fr.dim(), " seed ", seed, ": factor theta"));
      require(mul(Q, mul(Q, mul(Q, c.x, c.y), c.z), c.u) == g, str("n=", fr.dim(), " seed ", seed, ": product"));
      ++count;
      if (seed % 5) continue;
      // an independent fiber point over the same zeta
      const auto kernel = SpecialTarget::spinor_kernel;
      const VectorQ a = fr.a(), b = fr.b();
      const MatrixQ rho = mul(Q, witt_extend_special(f, {b, a}, {c.t, a}, kernel), random_stabilizer(rng, fr));
      const MatrixQ eta = mul(Q, witt_extend_special(f, {b, a}, {c.t, c.s}, kernel), random_stabilizer(rng, fr));
      const MatrixQ sigma =
          mul(Q, witt_extend_special(f, {b, a}, {mul(Q, g, b), c.s}, kernel), random_stabilizer(rng, fr));
      const BorovoiCertificate c2{g, rho, mul(Q, inverse(Q, rho), eta), mul(Q, inverse(Q, eta), sigma),
                                  mul(Q, inverse(Q, sigma), g), c.s, c.t};
      require(verify_certificate(fr, c2).ok(), str("seed ", seed, ": second fiber point invalid"));
      const auto d = difference_triple(c, c2);
      require(in_stabilizer(fr, d.h1) && in_stabilizer(fr, d.h2) && in_stabilizer(fr, d.h3),
              str("seed ", seed, ": difference not in H"));
      const auto moved = h_action(fr, d.h1, d.h2, d.h3, c);
      require(moved.x == c2.x && moved.y == c2.y && moved.z == c2.z && moved.u == c2.u,
              str("seed ", seed, ": h-action misses the second point"));
      ++transported;
    }
  }
  return str(count, " elements verified, ", transported, " h-action transports");
}

// ---- 6

std::string local_fiber() {
  const StandardFrame frames[] = {StandardFrame(QuadraticForm::standard({1, 1, 1})),
                                  StandardFrame(QuadraticForm::standard({1, 1, 1, 1}))};
  const long primes[] = {5, 7, 11};
  int done = 0;
  for (std::uint64_t seed = 0; done < 50 && seed < 400; ++seed) {
    const auto& fr = frames[seed % 2];
    const long p = primes[seed % 3];
    const auto c = decompose(fr, random_spinor_kernel_element(fr, 600 + seed, 5));
    if (mpz_divisible_ui_p(denominator_lcm(c).get_mpz_t(), p)) continue;
    const ResidueRing R(p, 20);
    const LocalZPoint zeta = reduce_zpoint(ZPoint{c.g, c.s, c.t}, R);
    const auto q = phi_fiber_local(fr, zeta, p, 20);
    require(q.precision == 18, "precision is not N - 2");
    const auto v = verify_local_fiber(fr, zeta, q);
    require(v.ok(), str("seed ", seed, " p=", p, ": ", v.ok() ? "" : v.failures[0]));
    ++done;
  }
  require(done == 50, str("only ", done, " instances"));
  return "50 instances mod p^18";
}

// ---- 7

std::string hilbert_symbols() {
  Rng rng(107);
  for (int t = 0; t < 500; ++t) {
    const Rational x = rng.nonzero(-500, 500), y = rng.nonzero(-500, 500);
    int prod = hilbert_symbol(x, y, PlaceQ::real());
    for (const auto& p : support_primes({x, y, Rational(2)})) prod *= hilbert_symbol(x, y, PlaceQ::finite(p));
    require(prod == 1, str("product formula fails at ", x, ", ", y));
  }
  long compared = 0;
  for (long p : {2, 3, 5, 7})
    for (long x = -50; x <= 50; ++x)
      for (long y = -50; y <= 50; ++y) {
        if (x == 0 || y == 0) continue;
        require(hilbert_symbol(x, y, PlaceQ::finite(p)) == orthokit::testing::hilbert_oracle(x, y, p),
                str("(", x, ",", y, ")_", p, " disagrees with the oracle"));
        ++compared;
      }
  return str("500 product-formula pairs, ", compared, " oracle comparisons");
}

// ---- 8

std::string quadric_points() {
  Rng rng(108);
  int done = 0;
  while (done < 100) {
    const long p = std::vector<long>{3, 5, 7, 11}[rng.uniform(0, 3)];
    const std::size_t n = rng.uniform(5, 7);
    const auto f = orthokit::testing::random_unimodular_standard(rng, p, n);
    const int N = static_cast<int>(rng.uniform(1, 12));
    const ResidueRing R(p, N);
    VectorZ s(n);
    for (auto& x : s) x = rng.uniform(-30, 30) * (rng.uniform(0, 2) ? 1 : p);
    bool vanishes = true;
    for (const auto& x : s) vanishes = vanishes && R.is_zero(x);
    if (vanishes) continue;
    const VectorZ t = quadric_zp_point(f, s, p, N);
    const MatrixZ F = to_residues(R, f.gram());
    require(R.is_zero(bilinear(R, F, t, ez(n, n - 1))), str("#", done, ": (t|a) != 0"));
    require(R.is_zero(bilinear(R, F, t, reduce(R, s))), str("#", done, ": (t|s) != 0"));
    require(R.equal(bilinear(R, F, t, t), F(n - 2, n - 2)), str("#", done, ": f(t) != f(b)"));
    ++done;
  }
  return "100 points";
}

// ---- 9

std::string appendix_criterion() {
  const PlaceQ real = PlaceQ::real();
  const auto q = QuadraticForm::diagonal({1, 1, -2});
  const auto v = strong_approx_quadric(q, 1, {real}, VectorQ{1, 0, 0});
  require(!v.holds, "counterexample reported as holding");
  const auto w = strong_approx_quadric(QuadraticForm::diagonal({1, 1, -1, -1}), 1, {real}, VectorQ{1, 0, 0, 0});
  require(w.holds && w.reason == "m>=4-noncompact", "m >= 4 instance does not hold");
  Rng rng(109);
  int done = 0;
  while (done < 20) {
    const std::size_t m = done % 4 == 3 ? 4 : 3;
    std::vector<Rational> d;
    for (std::size_t i = 0; i < m; ++i) d.emplace_back(rng.nonzero(-7, 7));
    const auto qq = QuadraticForm::diagonal(d);
    const VectorQ x = rng.vector(m, 3);
    const Rational a = evaluate(qq, x);
    if (a == 0) continue;
    std::vector<PlaceQ> S{real};
    for (long p : {3, 5, 7})
      if (rng.uniform(0, 1)) S.push_back(PlaceQ::finite(p));
    if (quadric_noncompact_places(qq, a, S).empty()) continue;
    const auto base = strong_approx_quadric(qq, a, S, x);
    const Rational c = rng.nonzero_rational(5);
    const QuadraticForm qc(scale(Q, c * c, qq.gram()));
    require(strong_approx_quadric(qc, a * c * c, S, x).holds == base.holds, str("instance ", done, ": scaling changes the verdict"));
    ++done;
  }
  return "counterexample fails, m>=4 holds, 20 scaled instances agree";
}

// ---- 10

std::string cli_discipline() {
  using orthokit::testing::CliHarness;
  using orthokit::io::json;
  CliHarness h(ORTHOKIT_CLI, ORTHOKIT_SAMPLES);
  std::set<int> codes;
  int certs = 0, tampered = 0;
  const std::set<std::string> free_keys{"factor_bound", "height_bound", "special"};
  for (const auto& job : orthokit::testing::construction_jobs(h)) {
    const std::string out = h.scratch(job.name + ".json");
    auto args = job.args;
    args.insert(args.end(), {"--output", out});
    const auto r = h.run(args);
    codes.insert(r.code);
    require(r.code == job.expected, str(job.name, ": exit ", r.code));
    require(h.run({"verify", out}).code == 0, str(job.name, ": fresh certificate rejected"));
    ++certs;
    const json c = h.read(out);
    std::vector<orthokit::testing::Leaf> leaves;
    orthokit::testing::collect_leaves(c, json::json_pointer(), leaves);
    const std::string bad = h.scratch("tampered.json");
    for (const auto& leaf : leaves) {
      if (free_keys.count(leaf.where.back())) continue;
      h.write(bad, orthokit::testing::perturb(c, leaf.where));
      const int code = h.run({"verify", bad}).code;
      codes.insert(code);
      require(leaf.in_matrix ? code == 1 : (code == 1 || code == 2),
              str(job.name, ": perturbation at ", leaf.where.to_string(), " gave exit ", code));
      ++tampered;
    }
  }
  const std::string trunc = h.scratch("trunc.json");
  std::ofstream(trunc) << "{\"kind\": \"lift\", \"X\": [[";
  const std::vector<std::pair<std::vector<std::string>, int>> expected{
      {{"witt-extend", h.sample("standard5.json"), h.sample("witt_mismatch.json")}, 2},
      {{"witt-extend", h.sample("standard5.json"), h.sample("absent.json")}, 2},
      {{"lift", h.sample("standard5.json"), h.sample("lift_e3_e4.json"), "--prime", "2", "--precision", "4"}, 2},
      {{"lift", h.sample("standard5.json"), h.sample("lift_three.json"), "--prime", "3", "--precision", "4", "--special"}, 2},
      {{"borovoi", h.sample("standard5.json"), h.sample("element_reflection.json")}, 1},
      {{"borovoi", h.sample("standard5.json"), h.sample("element_theta2.json")}, 1},
      {{"sap", h.sample("diag111.json"), "--value", "1", "--places", "real", "--witness", "1,0,0"}, 2},
      {{"verify", trunc}, 2},
      {{"frobnicate"}, 2},
      {{"--help"}, 0},
      {{"selftest"}, 0},
  };
  for (const auto& [args, code] : expected) {
    const int got = h.run(args).code;
    codes.insert(got);
    require(got == code, str(args[0], " ", args.size() > 1 ? args[1] : "", ": exit ", got, ", expected ", code));
  }
  for (int c : codes) require(c >= 0 && c <= 2, str("exit code ", c, " outside {0,1,2}"));
  return str(certs, " certificates verified, ", tampered, " perturbations rejected");
}

struct Criterion {
  int id;
  const char* name;
  std::function<std::string()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "Witt extension soundness", witt_soundness},
      {2, "p-adic lifting engine", lift_engine},
      {3, "skew and pairing space dimensions", skew_dimensions},
      {4, "orbit criterion vs exhaustive oracle", orbit_oracle},
      {5, "four-factor round trip", borovoi_round_trip},
      {6, "local fiber", local_fiber},
      {7, "Hilbert symbols", hilbert_symbols},
      {8, "quadric points", quadric_points},
      {9, "strong approximation criterion", appendix_criterion},
      {10, "CLI discipline", cli_discipline},
  };
  const int only = argc > 1 ? std::atoi(argv[1]) : 0;
  int failed = 0, ran = 0;
  for (const auto& c : all) {
    if (only && c.id != only) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      detail = c.run();
      ok = true;
    } catch (const Failure& f) {
      detail = f.what;
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s  %2d  %-40s %6.2fs  %s\n", ok ? "PASS" : "FAIL", c.id, c.name, secs, detail.c_str());
    std::fflush(stdout);
    failed += !ok;
  }
  if (ran == 0) {
    std::fprintf(stderr, "no criterion %d\n", only);
    return 2;
  }
  return failed ? 1 : 0;
}
