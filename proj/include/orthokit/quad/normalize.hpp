#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <vector>

#include "orthokit/quad/form.hpp"

namespace orthokit {

struct NormalizedForm {
  QuadraticForm form;
  MatrixQ basis;   // P: columns are the new basis in old coordinates
  MatrixQ change;  // T = P^{-1}, with T^T G_new T = scale * G_old
  int scale = 1;
  VectorQ isotropic_vector;
};

namespace detail {

inline bool primitive(const std::vector<long>& v) {
  Integer g = 0;
  for (long x : v) g = gcd(g, Integer(x));
  return g == 1;
}

// Primitive integer vectors of max-norm exactly h, one per +-pair (first
// nonzero coordinate positive), in lexicographic order.
inline bool for_each_primitive(std::size_t n, long h,
                               const std::function<bool(const std::vector<long>&)>& visit) {
  std::vector<long> v(n, -h);
  while (true) {
    bool on_shell = false;
    for (long x : v)
      if (x == h || x == -h) on_shell = true;
    if (on_shell) {
      long first = 0;
      for (long x : v)
        if (x != 0) {
          first = x;
          break;
        }
      if (first > 0 && primitive(v) && visit(v)) return true;
    }
    std::size_t i = n;
    while (i > 0 && v[i - 1] == h) v[--i] = -h;
    if (i == 0) return false;
    ++v[i - 1];
  }
}

}  // namespace detail

inline std::optional<VectorQ> find_isotropic_vector(const QuadraticForm& f, long height_bound) {
  std::optional<VectorQ> found;
  for (long h = 1; h <= height_bound && !found; ++h) {
    detail::for_each_primitive(f.dim(), h, [&](const std::vector<long>& v) {
      VectorQ x(v.begin(), v.end());
      if (evaluate(f, x) != 0) return false;
      found = std::move(x);
      return true;
    });
  }
  return found;
}

inline bool already_normalized(const QuadraticForm& f) {
  if (!f.is_standard()) return false;
  const auto& a = f.alphas();
  for (const auto& x : a)
    if (!is_integral(x)) return false;
  if (a.size() < 2 || a[a.size() - 1] <= 0 || a[a.size() - 2] <= 0) return false;
  const auto s = signature(f);
  return s.n_plus >= s.n_minus;
}

// Brings an isotropic form into the shape x1 x2 + a3 x3^2 + ... + an xn^2
// with integer a_i, a_{n-1}, a_n > 0 and n+ >= n- (after a global sign).
inline NormalizedForm normalize_to_standard(const QuadraticForm& g,
                                            std::optional<VectorQ> witness,
                                            long height_bound) {
  const RationalField R;
  const std::size_t n = g.dim();
  if (n < 5) throw DimensionError("normalize_to_standard needs dim >= 5");
  const auto sig = signature(g);
  if (sig.n_plus == 0 || sig.n_minus == 0) throw PreconditionError("not isotropic over R");
  if (already_normalized(g)) {
    const MatrixQ id = identity(R, n);
    return {g, id, id, 1, basis_vector(g, 0)};
  }

  VectorQ v;
  if (witness) {
    if (witness->size() != n) throw DimensionError("witness dimension mismatch");
    if (is_zero_vector(R, *witness) || evaluate(g, *witness) != 0) {
      throw PreconditionError("witness is not an isotropic vector");
    }
    v = *witness;
  } else {
    auto found = find_isotropic_vector(g, height_bound);
    if (!found) throw PreconditionError("witness required: no isotropic vector within height bound");
    v = *found;
  }

  const int s = sig.n_plus >= sig.n_minus ? 1 : -1;
  VectorQ w;
  for (std::size_t i = 0; i < n; ++i) {
    if (bilinear(g, v, basis_vector(g, i)) != 0) {
      w = basis_vector(g, i);
      break;
    }
  }
  w = scale(R, 1 / (2 * bilinear(g, v, w)), w);
  VectorQ e2 = sub(R, w, scale(R, evaluate(g, w), v));
  if (s < 0) e2 = scale(R, Rational(-1), e2);

  const auto comp = orthogonal_complement(R, g.gram(), std::vector<VectorQ>{v, e2});
  const MatrixQ cb = MatrixQ::from_columns(comp);
  const MatrixQ restricted = mul(R, transpose(cb), mul(R, g.gram(), cb));
  const auto diag = diagonalize(R, restricted);

  struct Piece {
    Rational d;
    VectorQ vec;
  };
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i < comp.size(); ++i) {
    VectorQ u = mul(R, cb, diag.basis.column(i));
    Rational d = s * diag.diagonal[i];
    const Rational k = d.get_den();
    u = scale(R, k, u);
    d *= k * k;
    pieces.push_back({d, u});
  }
  std::stable_partition(pieces.begin(), pieces.end(), [](const Piece& p) { return p.d < 0; });

  std::vector<VectorQ> cols{v, e2};
  std::vector<Rational> alphas;
  for (const auto& p : pieces) {
    cols.push_back(p.vec);
    alphas.push_back(p.d);
  }
  const MatrixQ P = MatrixQ::from_columns(cols);
  const MatrixQ gnew = scale(R, Rational(s), mul(R, transpose(P), mul(R, g.gram(), P)));
  QuadraticForm target = QuadraticForm::standard(alphas);
  if (!(gnew == target.gram())) throw Error("normalize_to_standard: basis check failed");
  return {target, P, inverse(R, P), s, v};
}

}  // namespace orthokit
