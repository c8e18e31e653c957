#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orthokit/exact.hpp"

namespace orthokit {

// A place of Q: the real place or a finite prime (2 allowed).
class PlaceQ {
 public:
  static PlaceQ real() { return PlaceQ(); }
  static PlaceQ finite(const Integer& p) {
    if (!is_probable_prime(p)) throw PreconditionError(p.get_str() + " is not prime");
    PlaceQ v;
    v.prime_ = p;
    return v;
  }

  bool is_real() const { return !prime_.has_value(); }
  const Integer& prime() const {
    if (!prime_) throw PreconditionError("the real place has no prime");
    return *prime_;
  }

  std::string to_string() const { return prime_ ? prime_->get_str() : "real"; }

  friend bool operator==(const PlaceQ& a, const PlaceQ& b) { return a.prime_ == b.prime_; }
  // real first, then primes in increasing order
  friend bool operator<(const PlaceQ& a, const PlaceQ& b) {
    if (a.is_real()) return !b.is_real();
    if (b.is_real()) return false;
    return *a.prime_ < *b.prime_;
  }

 private:
  PlaceQ() = default;
  std::optional<Integer> prime_;
};

inline PlaceQ parse_place(const std::string& text) {
  if (text == "real" || text == "inf") return PlaceQ::real();
  return PlaceQ::finite(parse_integer(text));
}

namespace detail {

// x = n/d has the square class of n*d.
inline Integer integral_representative(const Rational& x) {
  return Integer(x.get_num() * x.get_den());
}

inline int parity(const Integer& x) { return mpz_odd_p(x.get_mpz_t()) ? 1 : 0; }

inline Integer mod_small(const Integer& x, unsigned long m) {
  Integer r;
  mpz_fdiv_r_ui(r.get_mpz_t(), x.get_mpz_t(), m);
  return r;
}

}  // namespace detail

// (x,y)_v by the usual formulas: at odd p with x = p^a u, y = p^b w,
//   (-1)^(a b (p-1)/2) (u/p)^b (w/p)^a,
// and at 2 with eps(u) = (u-1)/2, omega(u) = (u^2-1)/8 mod 2,
//   (-1)^(eps(u) eps(w) + a omega(w) + b omega(u)).
inline int hilbert_symbol(const Rational& x, const Rational& y, const PlaceQ& v) {
  if (x == 0 || y == 0) throw PreconditionError("hilbert symbol of zero");
  if (v.is_real()) return x < 0 && y < 0 ? -1 : 1;
  const Integer& p = v.prime();
  Integer u = detail::integral_representative(x);
  Integer w = detail::integral_representative(y);
  const long a = static_cast<long>(mpz_remove(u.get_mpz_t(), u.get_mpz_t(), p.get_mpz_t()));
  const long b = static_cast<long>(mpz_remove(w.get_mpz_t(), w.get_mpz_t(), p.get_mpz_t()));
  int exponent = 0;
  if (p == 2) {
    const Integer u8 = detail::mod_small(u, 8), w8 = detail::mod_small(w, 8);
    const int eu = u8 == 3 || u8 == 7;
    const int ew = w8 == 3 || w8 == 7;
    const int ou = u8 == 3 || u8 == 5;
    const int ow = w8 == 3 || w8 == 5;
    exponent = eu * ew + (a % 2) * ow + (b % 2) * ou;
    return exponent % 2 ? -1 : 1;
  }
  const int sign_term = (a % 2) * (b % 2) * detail::parity(Integer((p - 1) / 2));
  int r = sign_term ? -1 : 1;
  if (b % 2) r *= mpz_legendre(detail::mod_small(u, p.get_ui()).get_mpz_t(), p.get_mpz_t());
  if (a % 2) r *= mpz_legendre(detail::mod_small(w, p.get_ui()).get_mpz_t(), p.get_mpz_t());
  return r;
}

// prod_{i<j} (d_i, d_j)_v
inline int hasse_invariant(const std::vector<Rational>& d, const PlaceQ& v) {
  for (const auto& x : d)
    if (x == 0) throw PreconditionError("hasse invariant of a zero coefficient");
  int h = 1;
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j) h *= hilbert_symbol(d[i], d[j], v);
  return h;
}

// x is a square in Q_v.
inline bool is_local_square(const Rational& x, const PlaceQ& v) {
  if (x == 0) throw PreconditionError("square test of zero");
  if (v.is_real()) return x > 0;
  const Integer& p = v.prime();
  Integer u = detail::integral_representative(x);
  const long a = static_cast<long>(mpz_remove(u.get_mpz_t(), u.get_mpz_t(), p.get_mpz_t()));
  if (a % 2) return false;
  if (p == 2) return detail::mod_small(u, 8) == 1;
  return mpz_legendre(detail::mod_small(u, p.get_ui()).get_mpz_t(), p.get_mpz_t()) == 1;
}

// Primes dividing the numerator or denominator of any entry.
inline std::vector<Integer> support_primes(const std::vector<Rational>& xs,
                                           unsigned long factor_bound = 100000) {
  std::vector<Integer> ps;
  for (const auto& x : xs) {
    if (x == 0) continue;
    for (const Integer* part : {&x.get_num(), &x.get_den()})
      for (const auto& p : prime_divisors(abs_int(*part), factor_bound)) ps.push_back(p);
  }
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  return ps;
}

}  // namespace orthokit
