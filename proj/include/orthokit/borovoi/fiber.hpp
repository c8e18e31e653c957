#pragma once

#include <string>
#include <vector>

#include "orthokit/borovoi/frame.hpp"

namespace orthokit {

struct BorovoiCertificate {
  MatrixQ g;
  MatrixQ x, y, z, u;
  VectorQ s, t;
};

struct Verification {
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

// Checks every invariant of a certificate from scratch: orthogonality, det,
// Wall spinor norm, stabilizer memberships, the product and the images of a
// and b.
inline Verification verify_certificate(const StandardFrame& fr, const BorovoiCertificate& c) {
  const RationalField Q;
  const auto& f = fr.form();
  const VectorQ a = fr.a(), b = fr.b();
  Verification out;
  auto expect = [&](bool cond, const std::string& what) {
    if (!cond) out.failures.push_back(what);
  };
  const std::size_t n = fr.dim();
  for (const auto* m : {&c.g, &c.x, &c.y, &c.z, &c.u})
    if (m->rows() != n || m->cols() != n) {
      out.failures.push_back("matrix dimension mismatch");
      return out;
    }
  if (c.s.size() != n || c.t.size() != n) {
    out.failures.push_back("vector dimension mismatch");
    return out;
  }
  const char* names[] = {"g", "x", "y", "z", "u"};
  const MatrixQ* ms[] = {&c.g, &c.x, &c.y, &c.z, &c.u};
  for (int i = 0; i < 5; ++i) expect(in_spinor_kernel(f, *ms[i]), std::string(names[i]) + " not in spinor kernel");
  expect(fixes(c.x, a), "x does not fix a");
  expect(fixes(c.y, b), "y does not fix b");
  expect(fixes(c.z, a), "z does not fix a");
  expect(fixes(c.u, b), "u does not fix b");
  const MatrixQ xy = mul(Q, c.x, c.y);
  expect(equal(Q, mul(Q, mul(Q, xy, c.z), c.u), c.g), "product xyzu differs from g");
  expect(equal(Q, mul(Q, xy, a), c.s), "xy(a) differs from s");
  expect(equal(Q, mul(Q, xy, b), c.t), "xy(b) differs from t");
  expect(is_in_Z(fr, c.g, c.s, c.t), "(g,s,t) not in Z");
  return out;
}

inline Integer denominator_lcm(const BorovoiCertificate& c) {
  Integer l = 1;
  for (const auto* m : {&c.g, &c.x, &c.y, &c.z, &c.u})
    for (std::size_t i = 0; i < m->rows(); ++i)
      for (std::size_t j = 0; j < m->cols(); ++j) l = lcm(l, (*m)(i, j).get_den());
  for (const auto* v : {&c.s, &c.t})
    for (const auto& e : *v) l = lcm(l, e.get_den());
  return l;
}

inline void require_spinor_kernel(const StandardFrame& fr, const MatrixQ& g) {
  if (g.rows() != fr.dim() || !g.is_square()) throw DimensionError("matrix dimension mismatch");
  if (!is_orthogonal(fr.form(), g)) throw PreconditionError("not orthogonal for the form");
  if (!in_spinor_kernel(fr.form(), g)) throw PreconditionError("not in spinor kernel");
}

// A point (g, s, b) over g: when g(b) = +-b take s = a; otherwise
// u = u' + u'' with u' = ((g(b)|b)/f(b)) b and u'' in <e1,e2> of value
// f(b) - f(u'), and s = sigma(a) for sigma with sigma(u) = g(b), sigma(b) = b.
inline ZPoint psi_fiber_point(const StandardFrame& fr, const MatrixQ& g) {
  require_spinor_kernel(fr, g);
  const RationalField Q;
  const auto& f = fr.form();
  const VectorQ a = fr.a(), b = fr.b();
  const VectorQ gb = mul(Q, g, b);
  if (equal(Q, gb, b) || equal(Q, gb, scale(Q, Rational(-1), b))) return {g, a, b};
  const Rational fb = evaluate(f, b);
  const VectorQ u1 = scale(Q, Rational(bilinear(f, gb, b) / fb), b);
  const VectorQ u2 = represent_value(f, fb - evaluate(f, u1));
  const VectorQ u = add(Q, u1, u2);
  const MatrixQ sigma = witt_extend(f, {u, b}, {gb, b}).matrix;
  ZPoint z{g, mul(Q, sigma, a), b};
  if (!is_in_Z(fr, z)) throw Error("psi fiber point failed membership");
  return z;
}

// A point (g, s, t) over s, with g in O'(f) and g(a) = s.
inline ZPoint nu_fiber_point(const StandardFrame& fr, const VectorQ& s) {
  if (!is_in_X(fr, s)) throw PreconditionError("s is not in X: f(s) != f(a)");
  const RationalField Q;
  const auto& f = fr.form();
  const VectorQ a = fr.a(), b = fr.b();
  const MatrixQ g = witt_extend_special(f, {a}, {s}, SpecialTarget::spinor_kernel);
  if (equal(Q, s, a) || equal(Q, s, scale(Q, Rational(-1), a))) return {g, s, b};
  const Rational fa = evaluate(f, a);
  const VectorQ w1 = scale(Q, Rational(bilinear(f, s, a) / fa), a);
  const VectorQ w = add(Q, w1, represent_value(f, fa - evaluate(f, w1)));
  const MatrixQ sigma = witt_extend(f, {w, a}, {s, a}).matrix;
  ZPoint z{g, s, mul(Q, sigma, b)};
  if (!is_in_Z(fr, z)) throw Error("nu fiber point failed membership");
  return z;
}

// x = rho, y = rho^-1 eta, z = eta^-1 sigma, u = sigma^-1 g with rho, eta,
// sigma in O'(f) sending (a,b) to (a,t), (s,t) and (s,g(b)).
inline BorovoiCertificate phi_fiber_point(const StandardFrame& fr, const ZPoint& zeta) {
  if (!is_in_Z(fr, zeta)) throw PreconditionError("zeta is not in Z");
  require_spinor_kernel(fr, zeta.g);
  const RationalField Q;
  const auto& f = fr.form();
  const VectorQ a = fr.a(), b = fr.b();
  const auto kernel = SpecialTarget::spinor_kernel;
  const MatrixQ rho = witt_extend_special(f, {a, b}, {a, zeta.t}, kernel);
  const MatrixQ eta = witt_extend_special(f, {a, b}, {zeta.s, zeta.t}, kernel);
  const MatrixQ sigma = witt_extend_special(f, {a, b}, {zeta.s, mul(Q, zeta.g, b)}, kernel);
  BorovoiCertificate c;
  c.g = zeta.g;
  c.s = zeta.s;
  c.t = zeta.t;
  c.x = rho;
  c.y = mul(Q, inverse(Q, rho), eta);
  c.z = mul(Q, inverse(Q, eta), sigma);
  c.u = mul(Q, inverse(Q, sigma), zeta.g);
  return c;
}

// (x h1^-1, h1 y h2^-1, h2 z h3^-1, h3 u): the same point of Z.
inline BorovoiCertificate h_action(const StandardFrame& fr, const MatrixQ& h1, const MatrixQ& h2,
                                   const MatrixQ& h3, const BorovoiCertificate& c) {
  for (const auto* h : {&h1, &h2, &h3})
    if (!in_stabilizer(fr, *h)) throw PreconditionError("h is not in the stabilizer of a and b");
  const RationalField Q;
  BorovoiCertificate out = c;
  out.x = mul(Q, c.x, inverse(Q, h1));
  out.y = mul(Q, mul(Q, h1, c.y), inverse(Q, h2));
  out.z = mul(Q, mul(Q, h2, c.z), inverse(Q, h3));
  out.u = mul(Q, h3, c.u);
  return out;
}

struct StabilizerTriple {
  MatrixQ h1, h2, h3;
};

// h1 = x2^-1 x1, h2 = (x2 y2)^-1 (x1 y1), h3 = (x2 y2 z2)^-1 (x1 y1 z1):
// h_action with these maps the first certificate to the second.
inline StabilizerTriple difference_triple(const BorovoiCertificate& c1,
                                          const BorovoiCertificate& c2) {
  const RationalField Q;
  const MatrixQ p1 = mul(Q, c1.x, c1.y), p2 = mul(Q, c2.x, c2.y);
  return {mul(Q, inverse(Q, c2.x), c1.x), mul(Q, inverse(Q, p2), p1),
          mul(Q, inverse(Q, mul(Q, p2, c2.z)), mul(Q, p1, c1.z))};
}

inline BorovoiCertificate decompose(const StandardFrame& fr, const MatrixQ& g) {
  require_spinor_kernel(fr, g);
  const BorovoiCertificate c = phi_fiber_point(fr, psi_fiber_point(fr, g));
  const auto check = verify_certificate(fr, c);
  if (!check.ok()) throw Error("decompose produced an invalid certificate: " + check.failures[0]);
  return c;
}

}  // namespace orthokit
