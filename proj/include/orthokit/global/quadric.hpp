#pragma once

#include <vector>

#include "orthokit/global/isotropy.hpp"
#include "orthokit/local/lattice.hpp"

namespace orthokit {

// Tonelli-Shanks; a must be a nonzero square mod the odd prime p.
inline Integer sqrt_mod_prime(const Integer& a, const Integer& p) {
  Integer r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t());
  if (r == 0) return 0;
  if (mpz_legendre(r.get_mpz_t(), p.get_mpz_t()) != 1)
    throw PreconditionError("not a square mod " + p.get_str());
  auto powm = [&](const Integer& b, const Integer& e) {
    Integer out;
    mpz_powm(out.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
    return out;
  };
  Integer q = p - 1;
  unsigned long s = 0;
  while (mpz_even_p(q.get_mpz_t())) {
    q /= 2;
    ++s;
  }
  Integer z = 2;
  while (mpz_legendre(z.get_mpz_t(), p.get_mpz_t()) != -1) ++z;
  Integer c = powm(z, q), t = powm(r, q), x = powm(r, Integer((q + 1) / 2));
  unsigned long m = s;
  while (t != 1) {
    unsigned long i = 0;
    Integer tt = t;
    while (tt != 1) {
      tt = tt * tt % p;
      ++i;
    }
    Integer b = c;
    for (unsigned long k = 0; k + i + 1 < m; ++k) b = b * b % p;
    x = x * b % p;
    c = b * b % p;
    t = t * c % p;
    m = i;
  }
  return x;
}

namespace detail {

// Solves w^T H w = alpha mod p^N for a unimodular H of rank >= 2: a root
// mod p from a diagonal pair, then Newton in one coordinate whose partial
// derivative is a unit.
inline VectorZ represent_unit(const ResidueRing& R, const MatrixZ& H, const Integer& alpha) {
  const ResidueRing Fp = R.residue_field();
  const Integer& p = R.prime();
  const auto dg = diagonalize(Fp, reduce(Fp, H));
  const Integer c1 = dg.diagonal[0], c2 = dg.diagonal[1];
  if (!Fp.is_unit(c1) || !Fp.is_unit(c2)) throw Error("complement is not unimodular");
  const Integer c2inv = Fp.inv(c2);
  Integer x = 0, y = 0;
  bool found = false;
  for (x = 0; x < p && !found; ++x) {
    const Integer r = Fp.mul(Fp.sub(Fp.reduce(alpha), Fp.mul(c1, Fp.mul(x, x))), c2inv);
    if (r == 0 || mpz_legendre(r.get_mpz_t(), p.get_mpz_t()) == 1) {
      y = sqrt_mod_prime(r, p);
      found = true;
      break;
    }
  }
  if (!found) throw Error("no residue solution");
  VectorZ w(H.rows());
  for (std::size_t i = 0; i < w.size(); ++i)
    w[i] = Fp.add(Fp.mul(x, dg.basis(i, 0)), Fp.mul(y, dg.basis(i, 1)));
  w = reduce(R, w);
  for (int step = 0; step < 128; ++step) {
    const Integer value = R.sub(bilinear(R, H, w, w), R.reduce(alpha));
    if (R.is_zero(value)) return w;
    const VectorZ grad = mul(R, H, w);
    std::size_t j = w.size();
    for (std::size_t i = 0; i < w.size(); ++i)
      if (R.is_unit(grad[i])) {
        j = i;
        break;
      }
    if (j == w.size()) throw Error("singular point in Newton refinement");
    w[j] = R.sub(w[j], R.mul(value, R.inv(R.mul(R.from_int(2), grad[j]))));
  }
  throw Error("Newton refinement did not converge");
}

}  // namespace detail

// A point t of Q_s = {x in <s,a>^perp : f(x) = f(b)} over Z_p, mod p^N.
// M = <a, u0> or <a, u0, u1> is a unimodular sublattice containing a and s,
// where u0 is the primitive part of s minus its e_n coordinate and u1 pairs
// with u0 to a hyperbolic plane mod p when f(u0) is not a unit. Then t is
// taken in the unimodular complement of M.
inline VectorZ quadric_zp_point(const QuadraticForm& f, const VectorZ& s, const Integer& p,
                                int N, const std::vector<Integer>& S = {}) {
  require_standard(f);
  const std::size_t n = f.dim();
  if (n < 5) throw DimensionError("quadric point needs n >= 5");
  if (s.size() != n) throw DimensionError("vector dimension mismatch");
  if (std::find(S.begin(), S.end(), p) != S.end())
    throw PreconditionError("p = " + p.get_str() + " lies in S");
  const auto bad = bad_places(f, {});
  if (std::find(bad.begin(), bad.end(), p) != bad.end())
    throw PreconditionError("p = " + p.get_str() + " is a bad place");
  const ResidueRing R(p, N);
  const ResidueRing Fp = R.residue_field();
  bool vanishes = true;
  for (const auto& x : s) vanishes = vanishes && R.is_zero(x);
  if (vanishes) throw PreconditionError("s vanishes mod p^N");

  const MatrixZ F = to_residues(R, f.gram());
  std::vector<VectorZ> M{unit_vector<Integer>(n, n - 1)};
  VectorZ u = s;
  u[n - 1] = 0;
  bool u_zero = true;
  for (const auto& x : u) u_zero = u_zero && x == 0;
  if (!u_zero) {
    long d = -1;
    for (const auto& x : u)
      if (x != 0) {
        const long v = valuation(x, p);
        d = d < 0 ? v : std::min(d, v);
      }
    const Integer pd = pow_int(p, static_cast<unsigned long>(d));
    VectorZ u0(n);
    for (std::size_t i = 0; i < n; ++i) u0[i] = u[i] / pd;
    M.push_back(reduce(R, u0));
    if (!Fp.is_unit(bilinear(R, F, M.back(), M.back()))) {
      const VectorZ Fu0 = mul(R, F, M.back());
      std::size_t j = n;
      for (std::size_t i = 0; i + 1 < n; ++i)
        if (Fp.is_unit(Fu0[i])) {
          j = i;
          break;
        }
      if (j == n) throw Error("no hyperbolic partner mod p");
      M.push_back(unit_vector<Integer>(n, j));
    }
  }

  // projection of each e_j onto M^perp; columns spanning the complement
  const MatrixZ GMinv = inverse(R, gram_of(R, F, M));
  std::vector<VectorZ> proj;
  for (std::size_t j = 0; j < n; ++j) {
    VectorZ v = unit_vector<Integer>(n, j);
    for (std::size_t i = 0; i < M.size(); ++i)
      for (std::size_t l = 0; l < M.size(); ++l) {
        const Integer c = R.mul(GMinv(i, l), bilinear(R, F, M[l], unit_vector<Integer>(n, j)));
        for (std::size_t r = 0; r < n; ++r) v[r] = R.sub(v[r], R.mul(c, M[i][r]));
      }
    proj.push_back(v);
  }
  const auto echelon = row_reduce(Fp, reduce(Fp, MatrixZ::from_columns(proj)));
  std::vector<VectorZ> basis;
  for (auto c : echelon.pivots) basis.push_back(proj[c]);
  if (basis.size() + M.size() != n) throw Error("complement has the wrong rank");

  const Integer alpha = F(n - 2, n - 2);
  const VectorZ w = detail::represent_unit(R, gram_of(R, F, basis), alpha);
  VectorZ t(n, 0);
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t r = 0; r < n; ++r) t[r] = R.add(t[r], R.mul(w[i], basis[i][r]));

  const VectorZ sr = reduce(R, s);
  if (!R.is_zero(bilinear(R, F, t, M[0])) || !R.is_zero(bilinear(R, F, t, sr)) ||
      !R.equal(bilinear(R, F, t, t), alpha)) {
    throw Error("quadric point failed verification");
  }
  return t;
}

}  // namespace orthokit
