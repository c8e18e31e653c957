#pragma once

#include <optional>
#include <vector>

#include "orthokit/global/place.hpp"
#include "orthokit/quad/form.hpp"

namespace orthokit {

struct LocalInvariants {
  PlaceQ place = PlaceQ::real();
  std::size_t dim = 0;
  SquareClass discriminant;
  int hasse = 1;
  std::size_t witt_index = 0;
  bool isotropic = false;
};

namespace detail {

inline Rational product(const std::vector<Rational>& d) {
  Rational r = 1;
  for (const auto& x : d) r *= x;
  return r;
}

// Isotropy over Q_p of a form with dimension n, determinant d and Hasse
// invariant eps.
inline bool isotropic_from_invariants(std::size_t n, const Rational& d, int eps,
                                      const PlaceQ& v) {
  switch (n) {
    case 0:
    case 1:
      return false;
    case 2:
      return is_local_square(-d, v);
    case 3:
      return hilbert_symbol(-1, -d, v) == eps;
    case 4:
      return !is_local_square(d, v) || eps == hilbert_symbol(-1, -1, v);
    default:
      return true;
  }
}

// Splits off hyperbolic planes: f = H + g gives d_g = -d_f and
// eps_g = eps_f (-1, d_g).
inline std::size_t witt_index_from_invariants(std::size_t n, Rational d, int eps,
                                              const PlaceQ& v) {
  std::size_t index = 0;
  while (isotropic_from_invariants(n, d, eps, v)) {
    ++index;
    n -= 2;
    d = -d;
    if (n == 0) break;
    eps *= hilbert_symbol(-1, d, v);
  }
  return index;
}

inline std::vector<Rational> diagonal_entries(const QuadraticForm& f) {
  const auto dg = diagonalize(RationalField{}, f.gram());
  return {dg.diagonal.begin(), dg.diagonal.end()};
}

}  // namespace detail

inline std::size_t witt_index_local(const QuadraticForm& f, const PlaceQ& v) {
  const auto d = detail::diagonal_entries(f);
  if (v.is_real()) {
    const Signature s = signature(f);
    return std::min(s.n_plus, s.n_minus);
  }
  return detail::witt_index_from_invariants(d.size(), detail::product(d), hasse_invariant(d, v),
                                            v);
}

inline bool is_isotropic_local(const QuadraticForm& f, const PlaceQ& v) {
  return witt_index_local(f, v) >= 1;
}

inline LocalInvariants local_invariants(const QuadraticForm& f, const PlaceQ& v,
                                        unsigned long factor_bound = 100000) {
  const auto d = detail::diagonal_entries(f);
  LocalInvariants out;
  out.place = v;
  out.dim = d.size();
  out.discriminant = square_class(detail::product(d), factor_bound);
  out.hasse = hasse_invariant(d, v);
  out.witt_index = witt_index_local(f, v);
  out.isotropic = out.witt_index >= 1;
  return out;
}

struct GlobalIsotropy {
  bool isotropic = false;
  std::optional<PlaceQ> obstruction;
};

// Hasse-Minkowski: checked at the real place, at 2 and at the primes
// dividing the diagonal entries. Anywhere else the form is unimodular of
// odd residue characteristic, isotropic in dimension >= 3, and for a binary
// form the non-square -d already fails at a prime of odd exponent.
inline GlobalIsotropy is_isotropic_global(const QuadraticForm& f,
                                          unsigned long factor_bound = 100000) {
  GlobalIsotropy out;
  if (f.dim() < 2) {
    out.obstruction = PlaceQ::real();
    return out;
  }
  if (!is_isotropic_local(f, PlaceQ::real())) {
    out.obstruction = PlaceQ::real();
    return out;
  }
  const auto d = detail::diagonal_entries(f);
  std::vector<Integer> primes = support_primes(d, factor_bound);
  if (std::find(primes.begin(), primes.end(), Integer(2)) == primes.end())
    primes.insert(primes.begin(), Integer(2));
  const Rational det = detail::product(d);
  for (const auto& p : primes) {
    const PlaceQ v = PlaceQ::finite(p);
    if (!detail::isotropic_from_invariants(d.size(), det, hasse_invariant(d, v), v)) {
      out.obstruction = v;
      return out;
    }
  }
  out.isotropic = true;
  return out;
}

// V_0 minus S: 2 together with every prime in a numerator or denominator
// of some alpha_i, excluding the primes of S.
inline std::vector<Integer> bad_places(const QuadraticForm& f, const std::vector<Integer>& S,
                                       unsigned long factor_bound = 100000) {
  require_standard(f);
  std::vector<Integer> ps = support_primes(f.alphas(), factor_bound);
  ps.push_back(2);
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  std::vector<Integer> out;
  for (const auto& p : ps)
    if (std::find(S.begin(), S.end(), p) == S.end()) out.push_back(p);
  return out;
}

}  // namespace orthokit
