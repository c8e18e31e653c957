#include <gtest/gtest.h>

#include "generators.hpp"
#include "oracles.hpp"
#include "orthokit/global.hpp"

using namespace orthokit;
using orthokit::testing::Rng;

namespace {

const PlaceQ kReal = PlaceQ::real();

PlaceQ fin(long p) { return PlaceQ::finite(p); }

std::vector<PlaceQ> test_places() {
  return {kReal, fin(2), fin(3), fin(5), fin(7), fin(11)};
}

std::vector<PlaceQ> places_of(const Rational& x, const Rational& y) {
  std::vector<PlaceQ> vs{kReal};
  for (const auto& p : support_primes({x, y, Rational(2)})) vs.push_back(PlaceQ::finite(p));
  return vs;
}

QuadraticForm diag(std::vector<long> d) {
  std::vector<Rational> r(d.begin(), d.end());
  return QuadraticForm::diagonal(r);
}

}  // namespace

TEST(Hilbert, Examples) {
  for (const auto& v : test_places()) {
    EXPECT_EQ(hilbert_symbol(1, 7, v), 1);
    EXPECT_EQ(hilbert_symbol(1, Rational(-3, 5), v), 1);
  }
  EXPECT_EQ(hilbert_symbol(-1, -1, kReal), -1);
  EXPECT_EQ(hilbert_symbol(-1, -1, fin(2)), -1);
  EXPECT_EQ(hilbert_symbol(-1, -1, fin(3)), 1);
  EXPECT_EQ(hilbert_symbol(2, 3, fin(3)), -1);
  EXPECT_EQ(hilbert_symbol(5, 5, fin(5)), 1);
  EXPECT_EQ(hilbert_symbol(3, 3, fin(3)), -1);
  EXPECT_THROW(hilbert_symbol(0, 3, fin(3)), PreconditionError);
  EXPECT_THROW(PlaceQ::finite(9), PreconditionError);
}

TEST(Hilbert, SymmetryBilinearitySquares) {
  Rng rng(41);
  for (const auto& v : test_places()) {
    for (int t = 0; t < 500; ++t) {
      const Rational x = rng.nonzero_rational(30), x2 = rng.nonzero_rational(30);
      const Rational y = rng.nonzero_rational(30), c = rng.nonzero_rational(12);
      ASSERT_EQ(hilbert_symbol(x, y, v), hilbert_symbol(y, x, v));
      ASSERT_EQ(hilbert_symbol(x * x2, y, v), hilbert_symbol(x, y, v) * hilbert_symbol(x2, y, v));
      ASSERT_EQ(hilbert_symbol(x * c * c, y, v), hilbert_symbol(x, y, v));
      ASSERT_EQ(hilbert_symbol(x, -x, v), 1);
      ASSERT_EQ(hilbert_symbol(x, 1 - x == 0 ? Rational(1) : Rational(1 - x), v), 1);
    }
  }
}

TEST(Hilbert, ProductFormula) {
  Rng rng(42);
  for (int t = 0; t < 500; ++t) {
    const Rational x = rng.nonzero(-500, 500), y = rng.nonzero(-500, 500);
    int prod = 1;
    for (const auto& v : places_of(x, y)) prod *= hilbert_symbol(x, y, v);
    ASSERT_EQ(prod, 1) << x << " " << y;
  }
}

TEST(Hilbert, AgreesWithSearchOracle) {
  for (long p : {2, 3, 5, 7})
    for (long x = -50; x <= 50; ++x)
      for (long y = -50; y <= 50; ++y) {
        if (x == 0 || y == 0) continue;
        ASSERT_EQ(hilbert_symbol(x, y, fin(p)), orthokit::testing::hilbert_oracle(x, y, p))
            << x << " " << y << " at " << p;
      }
}

TEST(Hasse, Examples) {
  for (const auto& v : test_places()) EXPECT_EQ(hasse_invariant({1, 1, 1}, v), 1);
  EXPECT_EQ(hasse_invariant({-1, -1}, kReal), -1);
  EXPECT_THROW(hasse_invariant({1, 0}, kReal), PreconditionError);
  Rng rng(43);
  for (int t = 0; t < 200; ++t) {
    std::vector<Rational> d, scaled;
    for (int i = 0; i < 4; ++i) {
      d.emplace_back(rng.nonzero(-20, 20));
      const Rational c = rng.nonzero_rational(9);
      scaled.push_back(d.back() * c * c);
    }
    for (const auto& v : test_places()) ASSERT_EQ(hasse_invariant(d, v), hasse_invariant(scaled, v));
  }
}

TEST(LocalIsotropy, Examples) {
  for (long p : {2, 3, 5, 7, 11, 13}) {
    EXPECT_TRUE(is_isotropic_local(diag({1, 1, 1, 1, 1}), fin(p)));
    EXPECT_TRUE(is_isotropic_local(diag({1, 3, 5, 7, 11}), fin(p)));
  }
  EXPECT_FALSE(is_isotropic_local(diag({1, 1, 1, 1}), kReal));
  EXPECT_EQ(witt_index_local(diag({1, 1, 1, 1}), kReal), 0u);
  for (const auto& v : test_places()) EXPECT_EQ(witt_index_local(diag({1, -1}), v), 1u);
  EXPECT_EQ(witt_index_local(QuadraticForm::standard({1, 1, 1}), kReal), 1u);
  for (long p : {3, 5, 7}) EXPECT_EQ(witt_index_local(QuadraticForm::standard({1, 1, 1}), fin(p)), 2u);
  // quaternion norm form: anisotropic at 2 and at the real place only
  EXPECT_FALSE(is_isotropic_local(diag({1, 1, 1, 1}), fin(2)));
  EXPECT_TRUE(is_isotropic_local(diag({1, 1, 1, 1}), fin(3)));
  EXPECT_EQ(witt_index_local(diag({1, -1, 1, -1}), fin(5)), 2u);
}

TEST(LocalIsotropy, TernaryMatchesHilbertOracle) {
  Rng rng(44);
  for (int t = 0; t < 300; ++t) {
    const long a = rng.nonzero(-30, 30), b = rng.nonzero(-30, 30), c = rng.nonzero(-30, 30);
    for (long p : {2, 3, 5, 7}) {
      const bool iso = orthokit::testing::hilbert_oracle(-a * c, -b * c, p) == 1;
      ASSERT_EQ(is_isotropic_local(diag({a, b, c}), fin(p)), iso) << a << " " << b << " " << c;
    }
  }
}

TEST(LocalIsotropy, InvariantsAreConsistent) {
  Rng rng(45);
  for (int t = 0; t < 100; ++t) {
    const auto f = orthokit::testing::random_form(rng, rng.uniform(1, 6), 6);
    for (const auto& v : test_places()) {
      const auto inv = local_invariants(f, v);
      EXPECT_EQ(inv.dim, f.dim());
      EXPECT_LE(2 * inv.witt_index, inv.dim);
      EXPECT_EQ(inv.isotropic, inv.witt_index >= 1);
      if (!v.is_real() && inv.dim >= 5) EXPECT_TRUE(inv.isotropic);
    }
  }
}

TEST(LocalIsotropy, QuaternaryAnisotropyCertified) {
  const std::vector<std::pair<std::vector<long>, long>> cases{
      {{1, 1, 1, 1}, 2}, {{1, 1, -3, -3}, 3}, {{1, 1, 1, -7}, 2}, {{1, -2, -3, 6}, 3}};
  for (const auto& [d, p] : cases) {
    const auto f = diag(d);
    ASSERT_FALSE(is_isotropic_local(f, fin(p)));
    EXPECT_TRUE(orthokit::testing::certify_local_anisotropy(
        orthokit::testing::integral_gram(f.gram()), p, 5));
  }
}

TEST(GlobalIsotropy, Examples) {
  EXPECT_TRUE(is_isotropic_global(QuadraticForm::standard({1})).isotropic);
  const auto r = is_isotropic_global(diag({1, 1, 1}));
  EXPECT_FALSE(r.isotropic);
  EXPECT_TRUE(r.obstruction->is_real());
  const auto s = is_isotropic_global(diag({1, 1, -3}));
  EXPECT_FALSE(s.isotropic);
  ASSERT_TRUE(s.obstruction.has_value());
  EXPECT_FALSE(s.obstruction->is_real());
  EXPECT_FALSE(is_isotropic_local(diag({1, 1, -3}), *s.obstruction));
}

TEST(GlobalIsotropy, CuratedCorpusAgreesWithSearch) {
  std::vector<QuadraticForm> corpus{
      diag({1, -1}),         diag({1, -2}),          diag({1, 1}),
      diag({2, -8}),         diag({3, -12}),         diag({1, -3}),
      diag({1, 1, 1}),       diag({1, 1, -3}),       diag({1, 1, -2}),
      diag({1, 1, -1}),      diag({1, 2, -3}),       diag({1, 1, -7}),
      diag({1, 1, -6}),      diag({2, 3, -5}),       diag({1, 3, -2}),
      diag({3, 5, -7}),      diag({1, 2, -5}),       diag({5, 7, -3}),
      diag({1, 1, 1, 1}),    diag({1, 1, 1, -1}),    diag({1, 1, -3, -3}),
      diag({1, 1, 1, -7}),   diag({1, -2, 3, -6}),   diag({1, 2, 3, -5}),
      diag({1, 1, 1, 1, -1}), diag({1, 1, 1, 1, 1}), diag({1, 2, 3, 5, -7}),
      QuadraticForm::standard({1}), QuadraticForm::standard({2, 3}),
      QuadraticForm(MatrixQ::from_rows({{2, 1, 0}, {1, 2, 0}, {0, 0, -1}}))};
  ASSERT_EQ(corpus.size(), 30u);
  int solved = 0, obstructed = 0;
  for (const auto& f : corpus) {
    const auto G = orthokit::testing::integral_gram(f.gram());
    const long height = f.dim() <= 3 ? 100 : (f.dim() == 4 ? 20 : 8);
    const auto zero = orthokit::testing::search_zero(G, height);
    const auto verdict = is_isotropic_global(f);
    if (zero) {
      ++solved;
      EXPECT_TRUE(verdict.isotropic);
    }
    if (!verdict.isotropic) {
      ++obstructed;
      ASSERT_TRUE(verdict.obstruction.has_value());
      EXPECT_FALSE(zero.has_value());
      const auto& v = *verdict.obstruction;
      if (v.is_real())
        EXPECT_TRUE(orthokit::testing::is_definite(f.gram()));
      else
        EXPECT_TRUE(orthokit::testing::certify_local_anisotropy(G, v.prime().get_si(), 5))
            << "place " << v.to_string();
    }
  }
  EXPECT_GT(solved, 10);
  EXPECT_GT(obstructed, 10);
}

TEST(BadPlaces, Examples) {
  using V = std::vector<Integer>;
  EXPECT_EQ(bad_places(QuadraticForm::standard({1, 1, 1}), {}), V{2});
  EXPECT_EQ(bad_places(QuadraticForm::standard({6, 1, 1}), {}), (V{2, 3}));
  EXPECT_EQ(bad_places(QuadraticForm::standard({Rational(1, 5), 1, 1}), {5}), V{2});
  EXPECT_EQ(bad_places(QuadraticForm::standard({Rational(7, 10), 1, 1}), {2}), (V{5, 7}));
  EXPECT_THROW(bad_places(diag({1, 1, 1}), {}), PreconditionError);
}

TEST(QuadricPoint, Examples) {
  const auto f = QuadraticForm::standard({1, 1, 1});
  const ResidueRing R(5, 8);
  const MatrixZ F = to_residues(R, f.gram());
  auto check = [&](const VectorZ& s, const VectorZ& t, const ResidueRing& Rn) {
    const MatrixZ Fn = to_residues(Rn, f.gram());
    EXPECT_TRUE(Rn.is_zero(bilinear(Rn, Fn, t, unit_vector<Integer>(5, 4))));
    EXPECT_TRUE(Rn.is_zero(bilinear(Rn, Fn, t, reduce(Rn, s))));
    EXPECT_TRUE(Rn.equal(bilinear(Rn, Fn, t, t), Fn(3, 3)));
  };
  // t = e4 would do for s = e3
  const VectorZ s1 = unit_vector<Integer>(5, 2);
  check(s1, quadric_zp_point(f, s1, 5, 1), ResidueRing(5, 1));
  const VectorZ e4 = unit_vector<Integer>(5, 3);
  check(s1, e4, ResidueRing(5, 4));
  const VectorZ s2{0, 0, 1, 5, 0};
  check(s2, quadric_zp_point(f, s2, 5, 8), R);
  const VectorZ s3{0, 0, 5, 0, 0};
  check(s3, quadric_zp_point(f, s3, 5, 8), R);
  // f(u0) = 0 mod p: the hyperbolic partner branch
  const VectorZ s4{1, 0, 0, 0, 3};
  check(s4, quadric_zp_point(f, s4, 5, 8), R);
  const VectorZ s5{0, 0, 0, 0, 7};
  check(s5, quadric_zp_point(f, s5, 5, 8), R);

  EXPECT_THROW(quadric_zp_point(f, s1, 2, 4), PreconditionError);
  EXPECT_THROW(quadric_zp_point(f, s1, 5, 4, {5}), PreconditionError);
  EXPECT_THROW(quadric_zp_point(QuadraticForm::standard({3, 1, 1}), s1, 3, 4), PreconditionError);
  EXPECT_THROW(quadric_zp_point(f, VectorZ{0, 0, 625, 0, 0}, 5, 4), PreconditionError);
}

TEST(QuadricPoint, RandomInstancesVerify) {
  Rng rng(46);
  for (int t = 0; t < 200; ++t) {
    const Integer p = std::vector<long>{3, 5, 7, 11}[rng.uniform(0, 3)];
    const std::size_t n = rng.uniform(5, 7);
    const auto f = orthokit::testing::random_unimodular_standard(rng, p, n);
    VectorZ s(n);
    for (auto& x : s) x = rng.uniform(-30, 30) * (rng.uniform(0, 2) ? 1 : p);
    bool zero = true;
    for (const auto& x : s) zero = zero && x == 0;
    if (zero) continue;
    const int N = static_cast<int>(rng.uniform(1, 12));
    const ResidueRing R(p, N);
    bool vanishes = true;
    for (const auto& x : s) vanishes = vanishes && R.is_zero(x);
    if (vanishes) continue;
    const VectorZ pt = quadric_zp_point(f, s, p, N);
    const MatrixZ F = to_residues(R, f.gram());
    ASSERT_TRUE(R.is_zero(bilinear(R, F, pt, unit_vector<Integer>(n, n - 1))));
    ASSERT_TRUE(R.is_zero(bilinear(R, F, pt, reduce(R, s))));
    ASSERT_TRUE(R.equal(bilinear(R, F, pt, pt), F(n - 2, n - 2)));
  }
}

TEST(Noncompact, Examples) {
  const auto pl = quadric_noncompact_places(diag({1, 1, -2}), 1, {kReal});
  ASSERT_EQ(pl.size(), 1u);
  EXPECT_TRUE(pl[0].is_real());
  EXPECT_TRUE(quadric_noncompact_places(diag({1, 1, 1}), 1, {kReal}).empty());
  for (long a : {1, -3, 7, 10}) {
    const auto q = quadric_noncompact_places(QuadraticForm::standard({1}), a, {fin(7)});
    ASSERT_EQ(q.size(), 1u);
    EXPECT_EQ(q[0], fin(7));
  }
  // empty over R: x^2 + y^2 - z^2 = ... is fine, but -x^2-y^2-z^2 = 1 is not
  EXPECT_TRUE(quadric_noncompact_places(diag({-1, -1, -1}), 1, {kReal}).empty());
}

TEST(StrongApproximation, CounterexampleFails) {
  const auto q = diag({1, 1, -2});
  const VectorQ x{1, 0, 0};
  const auto v = strong_approx_quadric(q, 1, {kReal}, x);
  EXPECT_FALSE(v.holds);
  EXPECT_FALSE(v.witness_place.has_value());

  // with 7 added: g = y^2 - 2 z^2, anisotropic over Q_7 iff 2 is not a square there
  const auto w = strong_approx_quadric(q, 1, {kReal, fin(7)}, x);
  const bool g_aniso_7 = !is_local_square(2, fin(7));
  EXPECT_EQ(w.holds, g_aniso_7);
  const auto g = restrict_to_complement(q, x);
  const Rational disc = determinant(RationalField{}, g.gram());
  EXPECT_EQ(is_isotropic_local(g, fin(7)), is_local_square(-disc, fin(7)));

  // with 3 added: 2 is not a square mod 3, so g is anisotropic there
  const auto u = strong_approx_quadric(q, 1, {kReal, fin(3)}, x);
  EXPECT_TRUE(u.holds);
  EXPECT_EQ(u.reason, "witness-place");
  EXPECT_EQ(*u.witness_place, fin(3));
}

TEST(StrongApproximation, HighDimensionHolds) {
  const auto v = strong_approx_quadric(diag({1, 1, -1, -1}), 1, {kReal}, VectorQ{1, 0, 0, 0});
  EXPECT_TRUE(v.holds);
  EXPECT_EQ(v.reason, "m>=4-noncompact");
  const auto w = strong_approx_quadric(diag({1, -1, 3}), 3, {kReal}, VectorQ{1, 1, 1});
  EXPECT_TRUE(w.holds);
  EXPECT_EQ(w.reason, "g-K-isotropic");
}

TEST(StrongApproximation, HypothesesAreChecked) {
  try {
    strong_approx_quadric(diag({1, 1, -2}), 1, {kReal}, VectorQ{1, 1, 0});
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("witness"), std::string::npos);
  }
  try {
    strong_approx_quadric(diag({1, 1, 1}), 1, {kReal}, VectorQ{1, 0, 0});
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("compact"), std::string::npos);
  }
  EXPECT_THROW(strong_approx_quadric(diag({1, -1}), 1, {kReal}, VectorQ{1, 0}), DimensionError);
}

TEST(StrongApproximation, InvariantUnderScalingAndIsometry) {
  Rng rng(47);
  const RationalField Q;
  int done = 0;
  while (done < 20) {
    const std::size_t m = done % 4 == 3 ? 4 : 3;
    std::vector<Rational> d;
    for (std::size_t i = 0; i < m; ++i) d.emplace_back(rng.nonzero(-7, 7));
    const auto q = QuadraticForm::diagonal(d);
    const VectorQ x = rng.vector(m, 3);
    const Rational a = evaluate(q, x);
    if (a == 0) continue;
    std::vector<PlaceQ> S{kReal};
    for (long p : {3, 5, 7})
      if (rng.uniform(0, 1)) S.push_back(fin(p));
    if (quadric_noncompact_places(q, a, S).empty()) continue;
    const auto base = strong_approx_quadric(q, a, S, x);

    const Rational c = rng.nonzero_rational(5);
    const QuadraticForm qc(scale(Q, c * c, q.gram()));
    EXPECT_EQ(strong_approx_quadric(qc, a * c * c, S, x).holds, base.holds);

    const MatrixQ sigma = orthokit::testing::random_reflection_product(rng, q, 3);
    EXPECT_EQ(strong_approx_quadric(q, a, S, mul(Q, sigma, x)).holds, base.holds);
    ++done;
  }
}
