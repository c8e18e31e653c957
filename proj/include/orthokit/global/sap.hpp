#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orthokit/global/isotropy.hpp"

namespace orthokit {

inline QuadraticForm with_value(const QuadraticForm& q, const Rational& a) {
  const std::size_t m = q.dim();
  MatrixQ g(m + 1, m + 1);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) g(i, j) = q.gram()(i, j);
  g(m, m) = -a;
  return QuadraticForm(g);
}

// q = a has a point over Q_v iff q + <-a> is isotropic there.
inline bool represents_locally(const QuadraticForm& q, const Rational& a, const PlaceQ& v) {
  if (a == 0) throw PreconditionError("value must be nonzero");
  return is_isotropic_local(with_value(q, a), v);
}

// Places of S where {q = a} is noncompact over Q_v: q isotropic there and
// the local solution set nonempty.
inline std::vector<PlaceQ> quadric_noncompact_places(const QuadraticForm& q, const Rational& a,
                                                     const std::vector<PlaceQ>& S) {
  if (a == 0) throw PreconditionError("value must be nonzero");
  std::vector<PlaceQ> out;
  for (const auto& v : S)
    if (is_isotropic_local(q, v) && represents_locally(q, a, v)) out.push_back(v);
  return out;
}

struct SAPVerdict {
  bool holds = false;
  std::string reason;
  std::optional<PlaceQ> witness_place;
};

// Restriction of q to x^perp in the basis returned by orthogonal_complement.
inline QuadraticForm restrict_to_complement(const QuadraticForm& q, const VectorQ& x) {
  const RationalField Q;
  const auto basis = orthogonal_complement(Q, q.gram(), std::vector<VectorQ>{x});
  return QuadraticForm(gram_of(Q, q.gram(), basis));
}

// Strong approximation for {q = a} with respect to S, given a rational
// point x. Dimension >= 4 with noncompact Q_S always holds; in dimension 3
// with g = q restricted to x^perp it holds iff g is isotropic over Q, or
// some v in S has g anisotropic over Q_v (and q isotropic there when v is
// real).
inline SAPVerdict strong_approx_quadric(const QuadraticForm& q, const Rational& a,
                                        const std::vector<PlaceQ>& S, const VectorQ& x) {
  const std::size_t m = q.dim();
  if (m < 3) throw DimensionError("strong approximation criterion needs m >= 3");
  if (a == 0) throw PreconditionError("value must be nonzero");
  if (x.size() != m) throw DimensionError("witness dimension mismatch");
  if (evaluate(q, x) != a) throw PreconditionError("hypothesis failed: witness is not on the quadric");
  if (quadric_noncompact_places(q, a, S).empty())
    throw PreconditionError("hypothesis Q_S noncompact fails");

  SAPVerdict out;
  if (m >= 4) {
    out.holds = true;
    out.reason = "m>=4-noncompact";
    return out;
  }
  const QuadraticForm g = restrict_to_complement(q, x);
  if (is_isotropic_global(g).isotropic) {
    out.holds = true;
    out.reason = "g-K-isotropic";
    return out;
  }
  for (const auto& v : S) {
    if (is_isotropic_local(g, v)) continue;
    if (v.is_real() && !is_isotropic_local(q, v)) continue;
    out.holds = true;
    out.reason = "witness-place";
    out.witness_place = v;
    return out;
  }
  out.holds = false;
  out.reason = "obstruction: g is K-anisotropic and no place of S qualifies";
  return out;
}

}  // namespace orthokit
