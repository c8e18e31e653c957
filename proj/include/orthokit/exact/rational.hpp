#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "orthokit/exact/errors.hpp"

namespace orthokit {

using Integer = mpz_class;
// mpq_class keeps numerator/denominator coprime with a positive denominator
// after every operation, and zero is 0/1.
using Rational = mpq_class;

inline Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw PreconditionError("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// "num/den", or "num" when the denominator is one.
inline std::string to_string(const Rational& x) {
  if (x.get_den() == 1) return x.get_num().get_str();
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

inline std::string to_string(const Integer& x) { return x.get_str(); }

inline Integer parse_integer(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw PreconditionError("empty integer literal");
  if (s.front() == '+') s.erase(0, 1);
  Integer z;
  if (z.set_str(s, 10) != 0) {
    throw PreconditionError("malformed integer \"" + std::string(text) + "\"");
  }
  return z;
}

inline Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text));
  const Integer num = parse_integer(text.substr(0, slash));
  const Integer den = parse_integer(text.substr(slash + 1));
  if (den == 0) {
    throw PreconditionError("zero denominator in \"" + std::string(text) + "\"");
  }
  return make_rational(num, den);
}

inline bool is_integral(const Rational& x) { return x.get_den() == 1; }

inline Integer abs_int(const Integer& x) { return x < 0 ? Integer(-x) : x; }

inline Integer gcd(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Integer lcm(const Integer& a, const Integer& b) {
  Integer l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

inline Integer pow_int(const Integer& base, unsigned long exp) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

inline bool is_probable_prime(const Integer& n) {
  if (n < 2) return false;
  return mpz_probab_prime_p(n.get_mpz_t(), 30) > 0;
}

// v_p of a nonzero integer.
inline long valuation(const Integer& n, const Integer& p) {
  if (n == 0) throw PreconditionError("valuation of zero undefined");
  Integer m = n;
  return static_cast<long>(mpz_remove(m.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t()));
}

inline long padic_valuation(const Rational& x, const Integer& p) {
  if (x == 0) throw PreconditionError("valuation of zero undefined");
  if (!is_probable_prime(p)) throw PreconditionError("valuation base must be prime");
  return valuation(x.get_num(), p) - valuation(x.get_den(), p);
}

inline bool is_square(const Integer& n) {
  if (n < 0) return false;
  return mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

// x is a square in Q (zero counts as a square).
inline bool is_square(const Rational& x) {
  return is_square(x.get_num()) && is_square(x.get_den());
}

inline Integer isqrt(const Integer& n) {
  Integer r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

struct PrimePower {
  Integer prime;
  unsigned long exponent = 0;
  bool operator==(const PrimePower&) const = default;
};

struct Factorization {
  int sign = 1;
  std::vector<PrimePower> factors;  // strictly increasing primes

  Integer product() const {
    Integer r = sign;
    for (const auto& [p, e] : factors) r *= pow_int(p, e);
    return r;
  }
  bool operator==(const Factorization&) const = default;
};

namespace detail {

// Brent's variant of Pollard rho with a fixed polynomial family and an
// iteration budget; returns a nontrivial factor or 0.
inline Integer pollard_brent(const Integer& n, unsigned long c_seed,
                             unsigned long max_iterations) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  const Integer c = c_seed;
  Integer y = 2 + c_seed, x, ys, g = 1, q = 1;
  unsigned long r = 1, iterations = 0;
  constexpr unsigned long kBatch = 64;
  auto step = [&](Integer& v) {
    v = v * v + c;
    mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
  };
  while (g == 1) {
    x = y;
    for (unsigned long i = 0; i < r; ++i) step(y);
    unsigned long k = 0;
    while (k < r && g == 1) {
      ys = y;
      const unsigned long m = std::min(kBatch, r - k);
      for (unsigned long i = 0; i < m; ++i) {
        step(y);
        q *= abs_int(Integer(x - y));
        mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      }
      g = gcd(q, n);
      k += m;
      iterations += m;
      if (iterations > max_iterations) return 0;
    }
    r *= 2;
  }
  if (g == n) {
    do {
      step(ys);
      g = gcd(abs_int(Integer(x - ys)), n);
    } while (g == 1);
  }
  return g == n ? Integer(0) : g;
}

inline void split_into(const Integer& n, std::vector<Integer>& primes) {
  if (n == 1) return;
  if (is_probable_prime(n)) {
    primes.push_back(n);
    return;
  }
  if (is_square(n)) {
    const Integer r = isqrt(n);
    split_into(r, primes);
    split_into(r, primes);
    return;
  }
  for (unsigned long c = 1; c <= 16; ++c) {
    const Integer d = pollard_brent(n, c, 1ul << 22);
    if (d != 0 && d != 1 && d != n) {
      split_into(d, primes);
      split_into(Integer(n / d), primes);
      return;
    }
  }
  throw FactorizationError("factorization incomplete: composite cofactor " +
                           n.get_str());
}

}  // namespace detail

// Trial division by every integer up to `bound`, then primality testing and
// Pollard rho on whatever cofactor is left. A cofactor that cannot be split
// is reported, never guessed at.
inline Factorization factorize(const Integer& n, unsigned long bound = 100000) {
  if (n == 0) throw PreconditionError("cannot factor zero");
  Factorization out;
  out.sign = n < 0 ? -1 : 1;
  Integer m = abs_int(n);
  std::vector<Integer> primes;
  Integer limit = isqrt(m);
  for (unsigned long d = 2; d <= bound; d += (d == 2 ? 1 : 2)) {
    if (mpz_cmp_ui(limit.get_mpz_t(), d) < 0) break;
    if (mpz_divisible_ui_p(m.get_mpz_t(), d)) {
      do {
        primes.emplace_back(d);
        mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), d);
      } while (mpz_divisible_ui_p(m.get_mpz_t(), d));
      limit = isqrt(m);
    }
  }
  detail::split_into(m, primes);
  std::sort(primes.begin(), primes.end());
  for (const auto& p : primes) {
    if (!out.factors.empty() && out.factors.back().prime == p) {
      ++out.factors.back().exponent;
    } else {
      out.factors.push_back({p, 1});
    }
  }
  return out;
}

inline std::vector<Integer> prime_divisors(const Integer& n,
                                           unsigned long bound = 100000) {
  std::vector<Integer> ps;
  for (const auto& f : factorize(n, bound).factors) ps.push_back(f.prime);
  return ps;
}

// Element of Q^x / Q^x^2, stored as its signed squarefree representative.
class SquareClass {
 public:
  SquareClass() = default;

  static SquareClass from_squarefree(Integer rep) {
    if (rep == 0) throw PreconditionError("square class of zero");
    return SquareClass(std::move(rep));
  }

  const Integer& representative() const { return rep_; }
  bool is_trivial() const { return rep_ == 1; }

  friend bool operator==(const SquareClass& a, const SquareClass& b) {
    return a.rep_ == b.rep_;
  }
  friend std::strong_ordering operator<=>(const SquareClass& a,
                                          const SquareClass& b) {
    const int c = cmp(a.rep_, b.rep_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater
                          : std::strong_ordering::equal);
  }

  // Product of two classes; squarefree a, b give (ab)/gcd(a,b)^2 exactly.
  friend SquareClass operator*(const SquareClass& a, const SquareClass& b) {
    const Integer g = gcd(a.rep_, b.rep_);
    return SquareClass(Integer(a.rep_ * b.rep_ / (g * g)));
  }

 private:
  explicit SquareClass(Integer rep) : rep_(std::move(rep)) {}
  Integer rep_ = 1;
};

inline Integer squarefree_part(const Integer& n, unsigned long bound = 100000) {
  const Factorization f = factorize(n, bound);
  Integer r = f.sign;
  for (const auto& [p, e] : f.factors) {
    if (e % 2 == 1) r *= p;
  }
  return r;
}

// x = n/d lies in the class of n*d.
inline SquareClass square_class(const Rational& x, unsigned long bound = 100000) {
  if (x == 0) throw PreconditionError("square class of zero");
  return SquareClass::from_squarefree(
      squarefree_part(Integer(x.get_num() * x.get_den()), bound));
}

inline bool same_square_class(const Rational& x, const Rational& y) {
  if (x == 0 || y == 0) throw PreconditionError("square class of zero");
  return is_square(Rational(x * y));
}

}  // namespace orthokit

template <>
struct std::hash<orthokit::SquareClass> {
  size_t operator()(const orthokit::SquareClass& c) const noexcept {
    return std::hash<std::string>{}(c.representative().get_str(16));
  }
};
