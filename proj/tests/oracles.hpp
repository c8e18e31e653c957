#pragma once

// Brute-force reference implementations. They share nothing with the
// library code paths they are compared against beyond plain arithmetic.

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "orthokit/exact.hpp"

namespace orthokit::testing {

// All vectors of (Z/m)^n, index = sum v_i m^(n-1-i).
inline std::vector<VectorZ> all_vectors(long modulus, std::size_t n) {
  std::vector<VectorZ> out;
  VectorZ v(n, 0);
  while (true) {
    out.push_back(v);
    std::size_t i = n;
    while (i > 0 && v[i - 1] == modulus - 1) v[--i] = 0;
    if (i == 0) return out;
    v[i - 1] += 1;
  }
}

inline long vector_index(const VectorZ& v, long modulus) {
  long idx = 0;
  for (const auto& x : v) {
    Integer r;
    mpz_mod_ui(r.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(modulus));
    idx = idx * modulus + r.get_si();
  }
  return idx;
}

inline long form_value(const MatrixZ& F, const VectorZ& x, const VectorZ& y, long modulus) {
  Integer acc = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) acc += x[i] * F(i, j) * y[j];
  Integer r;
  mpz_mod_ui(r.get_mpz_t(), acc.get_mpz_t(), static_cast<unsigned long>(modulus));
  return r.get_si();
}

// {X mod m : X^T F X = F mod m}, built column by column.
inline std::vector<MatrixZ> enumerate_orthogonal_group(const MatrixZ& F, long modulus) {
  const std::size_t n = F.rows();
  const auto vs = all_vectors(modulus, n);
  std::vector<MatrixZ> group;
  std::vector<VectorZ> cols;
  std::function<void()> extend = [&] {
    const std::size_t j = cols.size();
    if (j == n) {
      group.push_back(MatrixZ::from_columns(cols));
      return;
    }
    for (const auto& v : vs) {
      bool ok = true;
      for (std::size_t i = 0; i <= j && ok; ++i) {
        const VectorZ& other = i == j ? v : cols[i];
        Integer target;
        mpz_mod_ui(target.get_mpz_t(), F(i, j).get_mpz_t(), static_cast<unsigned long>(modulus));
        if (form_value(F, other, v, modulus) != target.get_si()) ok = false;
      }
      if (!ok) continue;
      cols.push_back(v);
      extend();
      cols.pop_back();
    }
  };
  extend();
  return group;
}

// Orbit label of every vector of (Z/m)^n under the given group.
inline std::vector<long> orbit_labels(const std::vector<MatrixZ>& group, long modulus,
                                      std::size_t n) {
  const auto vs = all_vectors(modulus, n);
  std::vector<long> label(vs.size(), -1);
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (label[i] >= 0) continue;
    for (const auto& X : group) {
      VectorZ img(n, 0);
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) img[r] += X(r, c) * vs[i][c];
      label[vector_index(img, modulus)] = static_cast<long>(i);
    }
  }
  return label;
}

namespace detail {

inline int capped_valuation(long v, long p, int cap) {
  if (v == 0) return cap;
  int e = 0;
  while (v % p == 0 && e < cap) {
    v /= p;
    ++e;
  }
  return e;
}

// Newton refinement of one coordinate of a root of z^2 - x u^2 - y w^2
// until it holds mod p^target; false when the iteration stalls.
inline bool refine_root(long x, long y, long p, std::array<Integer, 3> c, int var, int target) {
  const Integer P = p;
  auto value = [&] { return Integer(c[0] * c[0] - x * c[1] * c[1] - y * c[2] * c[2]); };
  auto deriv = [&] {
    if (var == 0) return Integer(2 * c[0]);
    if (var == 1) return Integer(-2 * x * c[1]);
    return Integer(-2 * y * c[2]);
  };
  for (int step = 0; step < 64; ++step) {
    const Integer F = value();
    if (F == 0) return true;
    const long vF = valuation(F, P);
    if (vF >= target) return true;
    const Integer D = deriv();
    if (D == 0) return false;
    const long e = valuation(D, P);
    if (vF <= 2 * e) return false;
    const Integer modulus = pow_int(P, static_cast<unsigned long>(target + e + 2));
    Integer f0 = F / pow_int(P, vF), d0 = D / pow_int(P, e), inv;
    mpz_invert(inv.get_mpz_t(), d0.get_mpz_t(), modulus.get_mpz_t());
    Integer delta = pow_int(P, vF - e) * f0 * inv;
    mpz_mod(delta.get_mpz_t(), delta.get_mpz_t(), modulus.get_mpz_t());
    c[var] -= delta;
  }
  return false;
}

}  // namespace detail

// Solvability of z^2 = x u^2 + y w^2 over Q_p (p = 2 allowed) by search:
// after removing square factors p^2 from x and y, look for a primitive
// solution mod p^k (k = 3 for odd p, 5 for p = 2) with one coordinate equal
// to 1 whose smallest partial derivative valuation e satisfies 2e+1 <= k,
// then confirm by Newton-lifting that coordinate to p^6 (2^8).
inline int hilbert_oracle(long x, long y, long p) {
  while (x % (p * p) == 0) x /= p * p;
  while (y % (p * p) == 0) y /= p * p;
  const int k = p == 2 ? 5 : 3;
  const int confirm = p == 2 ? 8 : 6;
  long mod = 1;
  for (int i = 0; i < k; ++i) mod *= p;
  auto md = [mod](long v) { return ((v % mod) + mod) % mod; };
  std::vector<std::vector<long>> roots(mod);
  for (long z = 0; z < mod; ++z) roots[md(z * z)].push_back(z);

  auto accept = [&](long z, long u, long w) {
    const int ez = detail::capped_valuation(md(2 * z), p, k);
    const int eu = detail::capped_valuation(md(2 * x * u), p, k);
    const int ew = detail::capped_valuation(md(2 * y * w), p, k);
    const int e = std::min({ez, eu, ew});
    if (2 * e + 1 > k) return false;
    const int var = e == ez ? 0 : (e == eu ? 1 : 2);
    return detail::refine_root(x, y, p, {Integer(z), Integer(u), Integer(w)}, var, confirm);
  };

  for (long t = 0; t < mod; ++t) {
    for (long z : roots[md(x + y * t * t)])
      if (accept(z, 1, t)) return 1;
    for (long z : roots[md(x * t * t + y)])
      if (accept(z, t, 1)) return 1;
  }
  for (long u = 0; u < mod; u += p)
    for (long w = 0; w < mod; w += p)
      if (md(1 - x * u * u - y * w * w) == 0 && accept(1, u, w)) return 1;
  return -1;
}

// Integral Gram matrix (as long) of a rational one, scaled by the lcm of
// the denominators.
inline std::vector<std::vector<long>> integral_gram(const MatrixQ& g) {
  Integer den = 1;
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) den = lcm(den, g(i, j).get_den());
  std::vector<std::vector<long>> out(g.rows(), std::vector<long>(g.cols()));
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) out[i][j] = Rational(g(i, j) * den).get_num().get_si();
  return out;
}

inline long long gram_value(const std::vector<std::vector<long>>& G, const std::vector<long>& x) {
  long long acc = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) acc += static_cast<long long>(G[i][j]) * x[i] * x[j];
  return acc;
}

// Nonzero integer zero of the form with all |x_i| <= height, if any.
inline std::optional<std::vector<long>> search_zero(const std::vector<std::vector<long>>& G,
                                                     long height) {
  const std::size_t n = G.size();
  std::vector<long> x(n, -height);
  while (true) {
    bool nonzero = false;
    for (long v : x) nonzero = nonzero || v != 0;
    if (nonzero && gram_value(G, x) == 0) return x;
    std::size_t i = n;
    while (i > 0 && x[i - 1] == height) x[--i] = -height;
    if (i == 0) return std::nullopt;
    ++x[i - 1];
  }
}

// True when some k <= max_k admits no primitive solution of x^T G x = 0
// mod p^k, which certifies anisotropy over Q_p. Gives up (false) once p^(k n)
// exceeds the budget.
inline bool certify_local_anisotropy(const std::vector<std::vector<long>>& G, long p, int max_k,
                                     long long budget = 8000000) {
  const std::size_t n = G.size();
  long mod = 1;
  for (int k = 1; k <= max_k; ++k) {
    mod *= p;
    long long total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= mod;
    if (total > budget) return false;
    std::vector<long> x(n, 0);
    bool found = false;
    while (!found) {
      bool primitive = false;
      for (long v : x) primitive = primitive || v % p != 0;
      if (primitive) {
        long long acc = 0;
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) acc = (acc + G[i][j] % mod * x[i] % mod * x[j]) % mod;
        if (acc % mod == 0) found = true;
      }
      std::size_t i = n;
      while (i > 0 && x[i - 1] == mod - 1) x[--i] = 0;
      if (i == 0) break;
      ++x[i - 1];
    }
    if (!found) return true;
  }
  return false;
}

// Sylvester: G or -G positive definite.
inline bool is_definite(const MatrixQ& g) {
  const RationalField Q;
  int pos = 0, neg = 0;
  for (std::size_t k = 1; k <= g.rows(); ++k) {
    MatrixQ minor(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) minor(i, j) = g(i, j);
    const Rational d = determinant(Q, minor);
    if (d > 0) ++pos;
    if ((k % 2 == 0 && d > 0) || (k % 2 == 1 && d < 0)) ++neg;
  }
  return pos == static_cast<int>(g.rows()) || neg == static_cast<int>(g.rows());
}

}  // namespace orthokit::testing
