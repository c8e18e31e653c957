#pragma once

#include <string>

#include "orthokit/exact/rational.hpp"

namespace orthokit {

// The linear algebra in this library is written against a small ring
// interface rather than operator overloading, because residues mod p^N need
// their modulus at hand. A ring type provides value_type plus
//   zero() one() from_int() add() sub() mul() neg()
//   is_zero() is_unit() inv() equal() is_field()

struct RationalField {
  using value_type = Rational;
  bool is_field() const { return true; }

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_int(long v) const { return v; }
  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  value_type neg(const value_type& a) const { return -a; }
  bool is_zero(const value_type& a) const { return a == 0; }
  bool is_unit(const value_type& a) const { return a != 0; }
  bool equal(const value_type& a, const value_type& b) const { return a == b; }
  value_type inv(const value_type& a) const {
    if (a == 0) throw SingularMatrixError("division by zero");
    return 1 / a;
  }
  friend bool operator==(const RationalField&, const RationalField&) { return true; }
};

// Z / p^N for an odd prime p; N = 1 gives the residue field F_p.
// Residues are kept in [0, p^N).
class ResidueRing {
 public:
  using value_type = Integer;

  ResidueRing(Integer prime, int precision)
      : prime_(std::move(prime)), precision_(precision) {
    if (precision_ < 1) throw PreconditionError("precision must be at least 1");
    if (prime_ == 2) {
      throw PreconditionError("p=2 unsupported (lattice arithmetic requires v(2)=0)");
    }
    if (!is_probable_prime(prime_)) {
      throw PreconditionError("modulus base " + prime_.get_str() + " is not prime");
    }
    modulus_ = pow_int(prime_, static_cast<unsigned long>(precision_));
  }

  const Integer& prime() const { return prime_; }
  int precision() const { return precision_; }
  const Integer& modulus() const { return modulus_; }
  bool is_field() const { return precision_ == 1; }

  ResidueRing with_precision(int precision) const { return {prime_, precision}; }
  ResidueRing residue_field() const { return {prime_, 1}; }

  value_type reduce(const Integer& a) const {
    Integer r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), modulus_.get_mpz_t());
    return r;
  }
  // Image of a p-integral rational.
  value_type from_rational(const Rational& x) const {
    if (mpz_divisible_p(x.get_den().get_mpz_t(), prime_.get_mpz_t())) {
      throw PreconditionError(to_string(x) + " is not " + prime_.get_str() +
                              "-integral");
    }
    Integer inv_den;
    mpz_invert(inv_den.get_mpz_t(), x.get_den().get_mpz_t(), modulus_.get_mpz_t());
    return reduce(Integer(x.get_num() * inv_den));
  }

  value_type zero() const { return 0; }
  value_type one() const { return reduce(1); }
  value_type from_int(long v) const { return reduce(Integer(v)); }
  value_type add(const value_type& a, const value_type& b) const {
    return reduce(Integer(a + b));
  }
  value_type sub(const value_type& a, const value_type& b) const {
    return reduce(Integer(a - b));
  }
  value_type mul(const value_type& a, const value_type& b) const {
    return reduce(Integer(a * b));
  }
  value_type neg(const value_type& a) const { return reduce(Integer(-a)); }
  bool is_zero(const value_type& a) const { return reduce(a) == 0; }
  bool is_unit(const value_type& a) const {
    return !mpz_divisible_p(a.get_mpz_t(), prime_.get_mpz_t());
  }
  bool equal(const value_type& a, const value_type& b) const {
    return reduce(Integer(a - b)) == 0;
  }
  value_type inv(const value_type& a) const {
    Integer r;
    if (!is_unit(a) ||
        mpz_invert(r.get_mpz_t(), a.get_mpz_t(), modulus_.get_mpz_t()) == 0) {
      throw NonUnitPivotError("residue " + a.get_str() + " is not a unit mod " +
                              prime_.get_str());
    }
    return r;
  }

  // v_p of a residue, capped at the precision (so zero has valuation N).
  int valuation(const value_type& a) const {
    const Integer r = reduce(a);
    if (r == 0) return precision_;
    return static_cast<int>(orthokit::valuation(r, prime_));
  }

  // Exact division of a residue known to be divisible by p^k; the result is
  // meaningful modulo p^(N-k) and is returned as a residue in [0, p^(N-k)).
  value_type divide_by_prime_power(const value_type& a, int k) const {
    const Integer r = reduce(a);
    const Integer pk = pow_int(prime_, static_cast<unsigned long>(k));
    if (!mpz_divisible_p(r.get_mpz_t(), pk.get_mpz_t())) {
      throw PreconditionError("residue not divisible by p^" + std::to_string(k));
    }
    return Integer(r / pk);
  }

  // Legendre symbol of a unit residue (field case uses the residue mod p).
  int legendre(const value_type& a) const {
    Integer r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), prime_.get_mpz_t());
    return mpz_legendre(r.get_mpz_t(), prime_.get_mpz_t());
  }

  friend bool operator==(const ResidueRing& a, const ResidueRing& b) {
    return a.prime_ == b.prime_ && a.precision_ == b.precision_;
  }

 private:
  Integer prime_;
  int precision_;
  Integer modulus_;
};

template <class R>
concept RingLike = requires(const R& r, const typename R::value_type& a) {
  { r.zero() } -> std::convertible_to<typename R::value_type>;
  { r.one() } -> std::convertible_to<typename R::value_type>;
  { r.add(a, a) } -> std::convertible_to<typename R::value_type>;
  { r.mul(a, a) } -> std::convertible_to<typename R::value_type>;
  { r.is_unit(a) } -> std::convertible_to<bool>;
  { r.inv(a) } -> std::convertible_to<typename R::value_type>;
};

}  // namespace orthokit
