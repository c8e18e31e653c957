#pragma once

#include <optional>
#include <vector>

#include "orthokit/quad/witt.hpp"

namespace orthokit {

namespace detail {

inline std::vector<VectorQ> restrict_orthogonal(const QuadraticForm& f,
                                                const std::vector<VectorQ>& basis,
                                                const VectorQ& x) {
  const RationalField R;
  MatrixQ row(1, basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) row(0, i) = bilinear(f, x, basis[i]);
  std::vector<VectorQ> out;
  for (const auto& k : kernel_basis(R, row)) out.push_back(combine(R, basis, k, f.dim()));
  return out;
}

}  // namespace detail

// Writes sigma as tau_{c0} tau_{c1} ... . Works on W = F^perp where F is a
// growing orthogonal set of anisotropic vectors fixed by the remainder rho.
// Each step either finds a fixed anisotropic vector for free, or an
// anisotropic x with f(rho x - x) != 0 and makes it fixed with one
// reflection. When (rho - 1)W is totally isotropic, one reflection in an
// arbitrary anisotropic c of W is peeled off first.
inline ReflectionWordQ cartan_dieudonne(const QuadraticForm& f, const MatrixQ& sigma) {
  const RationalField R;
  const std::size_t n = f.dim();
  if (sigma.rows() != n || !sigma.is_square()) throw DimensionError("matrix size mismatch");
  if (!is_orthogonal(f, sigma)) throw PreconditionError("matrix is not orthogonal for the form");

  MatrixQ rho = sigma;
  ReflectionWordQ word;
  std::vector<VectorQ> w;
  for (std::size_t i = 0; i < n; ++i) w.push_back(basis_vector(f, i));
  bool last_exceptional = false;

  while (!w.empty()) {
    std::vector<VectorQ> moved;
    bool trivial = true;
    for (const auto& v : w) {
      moved.push_back(sub(R, mul(R, rho, v), v));
      if (!is_zero_vector(R, moved.back())) trivial = false;
    }
    if (trivial) break;

    const auto ker = kernel_basis(R, MatrixQ::from_columns(moved));
    std::vector<VectorQ> fixed;
    for (const auto& k : ker) fixed.push_back(detail::combine(R, w, k, n));
    if (auto x = find_anisotropic(R, f.gram(), fixed)) {
      w = detail::restrict_orthogonal(f, w, *x);
      continue;
    }

    bool isotropic_image = true;
    for (std::size_t i = 0; i < moved.size() && isotropic_image; ++i)
      for (std::size_t j = i; j < moved.size(); ++j)
        if (bilinear(f, moved[i], moved[j]) != 0) {
          isotropic_image = false;
          break;
        }
    if (isotropic_image) {
      if (last_exceptional) throw Error("cartan_dieudonne: repeated exceptional step");
      const auto c = find_anisotropic(R, f.gram(), w);
      if (!c) throw Error("cartan_dieudonne: complement is totally isotropic");
      rho = mul(R, reflection(f, *c), rho);
      word.vectors.push_back(*c);
      last_exceptional = true;
      continue;
    }
    last_exceptional = false;

    std::optional<VectorQ> x, d;
    detail::grid_search(w.size(), 5, [&](const std::vector<int>& t) {
      std::vector<Rational> coeffs(t.begin(), t.end());
      VectorQ cand = detail::combine(R, w, coeffs, n);
      if (evaluate(f, cand) == 0) return false;
      VectorQ diff = sub(R, mul(R, rho, cand), cand);
      if (evaluate(f, diff) == 0) return false;
      x = std::move(cand);
      d = std::move(diff);
      return true;
    });
    if (!x) throw Error("cartan_dieudonne: no admissible vector on the search grid");
    rho = mul(R, reflection(f, *d), rho);
    word.vectors.push_back(*d);
    w = detail::restrict_orthogonal(f, w, *x);
  }
  return word;
}

inline Rational det(const MatrixQ& m) { return determinant(RationalField{}, m); }

// prod f(c_i) over a Cartan-Dieudonne word, as an exact rational.
inline Rational spinor_norm_value(const QuadraticForm& f, const MatrixQ& sigma) {
  if (det(sigma) != 1) throw PreconditionError("spinor norm defined on SO only");
  return word_norm(f, cartan_dieudonne(f, sigma));
}

inline SquareClass spinor_norm(const QuadraticForm& f, const MatrixQ& sigma,
                               unsigned long factor_bound = 100000) {
  return square_class(spinor_norm_value(f, sigma), factor_bound);
}

// Determinant of the Wall form on V = im(1 - sigma): for u in V and
// v = (1 - sigma) w in V, B(u, v) = (u|w). For sigma in SO the space V has
// even dimension and det B represents theta(sigma) up to squares.
template <class Ring>
typename Ring::value_type wall_determinant(const Ring& R,
                                           const Matrix<typename Ring::value_type>& gram,
                                           const Matrix<typename Ring::value_type>& sigma) {
  using T = typename Ring::value_type;
  const std::size_t n = gram.rows();
  const auto d = sub(R, identity(R, n), sigma);
  const auto e = row_reduce(R, d);
  const auto& piv = e.pivots;
  Matrix<T> b(piv.size(), piv.size());
  for (std::size_t i = 0; i < piv.size(); ++i) {
    const auto gv = mul(R, gram, d.column(piv[i]));
    for (std::size_t j = 0; j < piv.size(); ++j) b(i, j) = gv[piv[j]];
  }
  if (piv.empty()) return R.one();
  return determinant(R, b);
}

inline Rational spinor_norm_wall(const QuadraticForm& f, const MatrixQ& sigma) {
  if (det(sigma) != 1) throw PreconditionError("spinor norm defined on SO only");
  return wall_determinant(RationalField{}, f.gram(), sigma);
}

// det +1 and trivial spinor norm.
inline bool in_spinor_kernel(const QuadraticForm& f, const MatrixQ& sigma) {
  if (!is_orthogonal(f, sigma) || det(sigma) != 1) return false;
  return is_square(spinor_norm_wall(f, sigma));
}

}  // namespace orthokit
