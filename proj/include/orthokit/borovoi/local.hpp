#pragma once

#include <string>
#include <vector>

#include "orthokit/borovoi/fiber.hpp"
#include "orthokit/global/isotropy.hpp"
#include "orthokit/local/lift.hpp"

namespace orthokit {

struct LocalZPoint {
  MatrixZ g;
  VectorZ s, t;
};

struct LocalQuadruple {
  Integer p;
  int precision = 0;
  MatrixZ x, y, z, u;
};

// Reduction of a global point; p must not divide any denominator.
inline LocalZPoint reduce_zpoint(const ZPoint& z, const ResidueRing& R) {
  return {to_residues(R, z.g), to_residues(R, z.s), to_residues(R, z.t)};
}

// Spinor class of an element of SO(L), L unimodular at odd p: the spinor
// norm is a unit times a square and only depends on the reduction mod p.
// Returns the Legendre symbol of that unit.
inline int local_spinor_class(const ResidueRing& R, const MatrixZ& F, const MatrixZ& X) {
  const ResidueRing Fp = R.residue_field();
  return Fp.legendre(wall_determinant(Fp, reduce(Fp, F), reduce(Fp, X)));
}

inline Verification verify_local_fiber(const StandardFrame& fr, const LocalZPoint& zeta,
                                       const LocalQuadruple& q) {
  const ResidueRing R(q.p, q.precision);
  const MatrixZ F = to_residues(R, fr.form().gram());
  const std::size_t n = fr.dim();
  const VectorZ a = unit_vector<Integer>(n, n - 1), b = unit_vector<Integer>(n, n - 2);
  Verification out;
  auto expect = [&](bool cond, const std::string& what) {
    if (!cond) out.failures.push_back(what);
  };
  const char* names[] = {"x", "y", "z", "u"};
  const MatrixZ* ms[] = {&q.x, &q.y, &q.z, &q.u};
  for (int i = 0; i < 4; ++i) {
    const std::string nm = names[i];
    expect(orthogonality_level(R, F, *ms[i]) == R.precision(), nm + " not orthogonal");
    expect(R.equal(determinant(R, *ms[i]), R.one()), nm + " det is not 1");
    expect(local_spinor_class(R, F, *ms[i]) == 1, nm + " spinor norm is not a square");
  }
  auto fixes_mod = [&](const MatrixZ& m, const VectorZ& v) { return equal(R, mul(R, m, v), v); };
  expect(fixes_mod(q.x, a), "x does not fix a");
  expect(fixes_mod(q.y, b), "y does not fix b");
  expect(fixes_mod(q.z, a), "z does not fix a");
  expect(fixes_mod(q.u, b), "u does not fix b");
  const MatrixZ xy = mul(R, q.x, q.y);
  expect(equal(R, mul(R, mul(R, xy, q.z), q.u), reduce(R, zeta.g)), "product xyzu differs from g");
  expect(equal(R, mul(R, xy, a), reduce(R, zeta.s)), "xy(a) differs from s");
  expect(equal(R, mul(R, xy, b), reduce(R, zeta.t)), "xy(b) differs from t");
  return out;
}

// Guard digits consumed by phi_fiber_local.
constexpr int kLocalFiberGuard = 2;

// The construction of phi_fiber_point over Z_p: rho, eta, sigma come from
// witt_lift_special and are moved into the spinor kernel by a hyperbolic
// rotation e1 -> nu e1, e2 -> e2 / nu with nu a unit non-square.
inline LocalQuadruple phi_fiber_local(const StandardFrame& fr, const LocalZPoint& zeta,
                                      const Integer& p, int N,
                                      const std::vector<Integer>& S = {}) {
  if (N <= kLocalFiberGuard) throw PreconditionError("precision must exceed the guard digits");
  if (std::find(S.begin(), S.end(), p) != S.end())
    throw PreconditionError("p = " + p.get_str() + " lies in S");
  const auto bad = bad_places(fr.form(), {});
  if (std::find(bad.begin(), bad.end(), p) != bad.end())
    throw PreconditionError("p = " + p.get_str() + " is a bad place");
  const std::size_t n = fr.dim();
  const ResidueRing R(p, N);
  const ResidueRing Fp = R.residue_field();
  const MatrixZ F = to_residues(R, fr.form().gram());
  const VectorZ a = unit_vector<Integer>(n, n - 1), b = unit_vector<Integer>(n, n - 2);
  const MatrixZ g = reduce(R, zeta.g);
  const VectorZ s = reduce(R, zeta.s), t = reduce(R, zeta.t);
  if (g.rows() != n || s.size() != n || t.size() != n) throw DimensionError("dimension mismatch");

  if (orthogonality_level(R, F, g) < N || !R.equal(determinant(R, g), R.one()))
    throw PreconditionError("g is not in SO mod p^N");
  if (local_spinor_class(R, F, g) != 1) throw PreconditionError("g is not in spinor kernel");
  const VectorZ gb = mul(R, g, b);
  auto bil = [&](const VectorZ& x, const VectorZ& y) { return bilinear(R, F, x, y); };
  if (!R.equal(bil(s, s), bil(a, a)) || !R.is_zero(bil(s, gb)) || !R.is_zero(bil(t, a)) ||
      !R.equal(bil(t, t), bil(b, b)) || !R.is_zero(bil(s, t))) {
    throw PreconditionError("zeta is not in Z mod p^N");
  }
  for (const auto& pair : {std::vector<VectorZ>{a, t}, {s, t}, {s, gb}})
    if (rank(Fp, reduce(Fp, MatrixZ::from_columns(pair))) != 2)
      throw Error("reductions mod p are dependent");

  Integer nu = 2;
  while (Fp.legendre(nu) != -1) ++nu;
  MatrixZ hyp = identity(R, n);
  hyp(0, 0) = nu;
  hyp(1, 1) = R.inv(nu);

  auto special = [&](const VectorZ& ta, const VectorZ& tb) {
    const TransporterProblem pr{p, fr.form().gram(), {a, b}, {ta, tb}};
    MatrixZ X = witt_lift_special(pr, N).matrix;
    if (local_spinor_class(R, F, X) != 1) X = mul(R, X, hyp);
    return X;
  };
  const MatrixZ rho = special(a, t);
  const MatrixZ eta = special(s, t);
  const MatrixZ sigma = special(s, gb);

  const int Np = N - kLocalFiberGuard;
  const ResidueRing Rp(p, Np);
  LocalQuadruple q{p, Np, reduce(Rp, rho), {}, {}, {}};
  q.y = reduce(Rp, mul(R, inverse(R, rho), eta));
  q.z = reduce(Rp, mul(R, inverse(R, eta), sigma));
  q.u = reduce(Rp, mul(R, inverse(R, sigma), g));
  const auto check = verify_local_fiber(fr, zeta, q);
  if (!check.ok()) throw Error("local fiber failed verification: " + check.failures[0]);
  return q;
}

}  // namespace orthokit
