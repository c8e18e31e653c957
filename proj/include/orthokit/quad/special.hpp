#pragma once

#include <optional>
#include <vector>

#include "orthokit/quad/spinor.hpp"

namespace orthokit {

enum class SpecialTarget { det, spinor_kernel };

namespace detail {

inline bool orthogonal_to_all(const QuadraticForm& f, const VectorQ& c,
                              const std::vector<VectorQ>& vs) {
  for (const auto& v : vs)
    if (bilinear(f, c, v) != 0) return false;
  return true;
}

inline bool inside_plane_complement(const QuadraticForm& f, const std::vector<VectorQ>& vs) {
  return orthogonal_to_all(f, basis_vector(f, 0), vs) &&
         orthogonal_to_all(f, basis_vector(f, 1), vs);
}

}  // namespace detail

// Anisotropic c orthogonal to every vector of vs: standard basis vectors
// first, in index order, then small combinations of a complement basis.
inline std::optional<VectorQ> anisotropic_orthogonal_to(const QuadraticForm& f,
                                                        const std::vector<VectorQ>& vs) {
  for (std::size_t i = 0; i < f.dim(); ++i) {
    auto e = basis_vector(f, i);
    if (evaluate(f, e) != 0 && detail::orthogonal_to_all(f, e, vs)) return e;
  }
  const RationalField R;
  const auto comp = orthogonal_complement(R, f.gram(), vs);
  if (auto c = find_anisotropic(R, f.gram(), comp)) return c;
  std::optional<VectorQ> found;
  detail::grid_search(comp.size(), 5, [&](const std::vector<int>& t) {
    std::vector<Rational> coeffs(t.begin(), t.end());
    VectorQ c = detail::combine(R, comp, coeffs, f.dim());
    if (evaluate(f, c) == 0) return false;
    found = std::move(c);
    return true;
  });
  return found;
}

// witt_extend followed by a determinant fix sigma -> sigma tau_c with c
// anisotropic and orthogonal to the sources, and for the spinor-kernel
// target a hyperbolic rotation on <e1,e2>, placed on whichever side keeps the
// images: on the right when the sources avoid <e1,e2>, on the left when the
// targets do.
inline MatrixQ witt_extend_special(const QuadraticForm& f, const std::vector<VectorQ>& A,
                                   const std::vector<VectorQ>& B, SpecialTarget target) {
  const RationalField R;
  MatrixQ sigma = witt_extend(f, A, B).matrix;
  if (det(sigma) != 1) {
    const auto c = anisotropic_orthogonal_to(f, A);
    if (!c) throw PreconditionError("no admissible correction vector found");
    sigma = mul(R, sigma, reflection(f, *c));
  }
  if (target == SpecialTarget::det) return sigma;

  const Rational lambda = spinor_norm_value(f, sigma);
  if (is_square(lambda)) return sigma;
  if (!f.is_standard()) {
    throw PreconditionError("spinor correction needs the standard shape");
  }
  const MatrixQ h = hyperbolic_rotation(f, 1 / lambda);
  if (detail::inside_plane_complement(f, A)) return mul(R, sigma, h);
  if (detail::inside_plane_complement(f, B)) return mul(R, h, sigma);
  throw PreconditionError("no admissible correction vector found: sources and targets meet <e1,e2>");
}

}  // namespace orthokit
