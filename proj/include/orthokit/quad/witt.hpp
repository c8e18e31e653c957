#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "orthokit/quad/reflection.hpp"

namespace orthokit {

namespace detail {

// Visits t in {0,...,bound-1}^k in lexicographic order until the callback
// returns true.
inline bool grid_search(std::size_t k, int bound,
                        const std::function<bool(const std::vector<int>&)>& visit) {
  std::vector<int> t(k, 0);
  while (true) {
    if (visit(t)) return true;
    std::size_t i = 0;
    while (i < k && t[i] == bound - 1) t[i++] = 0;
    if (i == k) return false;
    ++t[i];
  }
}

template <class Ring>
Vector<typename Ring::value_type> combine(
    const Ring& R, const std::vector<Vector<typename Ring::value_type>>& basis,
    const std::vector<typename Ring::value_type>& coeffs, std::size_t n) {
  Vector<typename Ring::value_type> v(n, R.zero());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (R.is_zero(coeffs[i])) continue;
    v = add(R, v, scale(R, coeffs[i], basis[i]));
  }
  return v;
}

}  // namespace detail

// Some anisotropic vector in the span of `basis`, if the span is not totally
// isotropic: a basis vector, else a sum of two of them.
template <class Ring>
std::optional<Vector<typename Ring::value_type>> find_anisotropic(
    const Ring& R, const Matrix<typename Ring::value_type>& gram,
    const std::vector<Vector<typename Ring::value_type>>& basis) {
  for (const auto& v : basis)
    if (R.is_unit(bilinear(R, gram, v, v))) return v;
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i + 1; j < basis.size(); ++j) {
      auto v = add(R, basis[i], basis[j]);
      if (R.is_unit(bilinear(R, gram, v, v))) return v;
    }
  return std::nullopt;
}

template <class T>
struct WittResult {
  Matrix<T> matrix;
  ReflectionWord<T> word;
};

template <class Ring>
void check_witt_problem(const Ring& R, const Matrix<typename Ring::value_type>& gram,
                        const std::vector<Vector<typename Ring::value_type>>& A,
                        const std::vector<Vector<typename Ring::value_type>>& B) {
  if (A.size() != B.size()) throw DimensionError("source and target counts differ");
  if (A.size() > gram.rows()) throw DimensionError("more vectors than the dimension");
  for (const auto& v : A)
    if (v.size() != gram.rows()) throw DimensionError("source vector dimension mismatch");
  for (const auto& v : B)
    if (v.size() != gram.rows()) throw DimensionError("target vector dimension mismatch");
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t j = i; j < A.size(); ++j)
      if (!R.equal(bilinear(R, gram, A[i], A[j]), bilinear(R, gram, B[i], B[j]))) {
        throw PreconditionError("gram mismatch at (" + std::to_string(i + 1) + "," +
                                std::to_string(j + 1) + ")");
      }
  if (!A.empty()) {
    if (rank(R, Matrix<typename Ring::value_type>::from_columns(A)) != A.size()) {
      throw PreconditionError("source vectors are linearly dependent");
    }
    if (rank(R, Matrix<typename Ring::value_type>::from_columns(B)) != B.size()) {
      throw PreconditionError("target vectors are linearly dependent");
    }
  }
}

namespace detail {

// Adjoins to a system with degenerate span one vector w_j per radical vector
// r_j = sum kappa_j[l] v_l, with (r_i|w_j) = delta_ij, (v_l|w_j) = 0 for l in
// `complement`, and the w_j mutually orthogonal and isotropic.
template <class Ring>
std::vector<Vector<typename Ring::value_type>> hyperbolic_completion(
    const Ring& R, const Matrix<typename Ring::value_type>& gram,
    const std::vector<Vector<typename Ring::value_type>>& vs,
    const std::vector<Vector<typename Ring::value_type>>& kappa,
    const std::vector<std::size_t>& complement) {
  using T = typename Ring::value_type;
  const std::size_t n = gram.rows();
  std::vector<Vector<T>> radical;
  for (const auto& k : kappa) radical.push_back(combine(R, vs, k, n));
  const T half = R.inv(R.from_int(2));
  std::vector<Vector<T>> ws;
  for (std::size_t j = 0; j < radical.size(); ++j) {
    std::vector<Vector<T>> constraints = radical;
    Vector<T> rhs(radical.size(), R.zero());
    rhs[j] = R.one();
    for (auto l : complement) {
      constraints.push_back(vs[l]);
      rhs.push_back(R.zero());
    }
    for (const auto& w : ws) {
      constraints.push_back(w);
      rhs.push_back(R.zero());
    }
    auto sol = solve(R, pairing_rows(R, gram, constraints), rhs);
    if (!sol.particular) throw Error("hyperbolic completion system is inconsistent");
    Vector<T> w = *sol.particular;
    const T fw = bilinear(R, gram, w, w);
    w = sub(R, w, scale(R, R.mul(fw, half), radical[j]));
    ws.push_back(std::move(w));
  }
  return ws;
}

}  // namespace detail

// sigma in O(f) with sigma(A[i]) = B[i], over any field of characteristic
// != 2 given through the ring interface. The reflection word multiplies out
// to the returned matrix.
template <class Ring>
WittResult<typename Ring::value_type> witt_extend(
    const Ring& R, const Matrix<typename Ring::value_type>& gram,
    const std::vector<Vector<typename Ring::value_type>>& A,
    const std::vector<Vector<typename Ring::value_type>>& B) {
  using T = typename Ring::value_type;
  if (!R.is_field()) throw PreconditionError("witt_extend needs a field");
  check_witt_problem(R, gram, A, B);
  const std::size_t n = gram.rows();
  const std::size_t m = A.size();

  std::vector<Vector<T>> ext_a(A.begin(), A.end());
  std::vector<Vector<T>> ext_b(B.begin(), B.end());
  const auto kappa = m == 0 ? std::vector<Vector<T>>{} : kernel_basis(R, gram_of(R, gram, ext_a));
  if (!kappa.empty()) {
    std::vector<Vector<T>> span;
    for (const auto& k : kappa) span.push_back(detail::combine(R, ext_a, k, n));
    std::vector<std::size_t> complement;
    std::size_t current = rank(R, Matrix<T>::from_columns(span));
    for (std::size_t l = 0; l < m && complement.size() + kappa.size() < m; ++l) {
      span.push_back(A[l]);
      const std::size_t r = rank(R, Matrix<T>::from_columns(span));
      if (r > current) {
        current = r;
        complement.push_back(l);
      } else {
        span.pop_back();
      }
    }
    const auto wa = detail::hyperbolic_completion(R, gram, ext_a, kappa, complement);
    const auto wb = detail::hyperbolic_completion(R, gram, ext_b, kappa, complement);
    ext_a.insert(ext_a.end(), wa.begin(), wa.end());
    ext_b.insert(ext_b.end(), wb.begin(), wb.end());
  }

  const auto ga = gram_of(R, gram, ext_a);
  if (!equal(R, ga, gram_of(R, gram, ext_b))) throw Error("completed systems disagree");
  const auto diag = diagonalize(R, ga);
  std::vector<Vector<T>> vs, us;
  for (std::size_t i = 0; i < ext_a.size(); ++i) {
    if (!R.is_unit(diag.diagonal[i])) throw Error("completed span is degenerate");
    const auto coeffs = diag.basis.column(i);
    vs.push_back(detail::combine(R, ext_a, coeffs, n));
    us.push_back(detail::combine(R, ext_b, coeffs, n));
  }

  WittResult<T> out{identity(R, n), {}};
  for (std::size_t k = 0; k < vs.size(); ++k) {
    const Vector<T> x = mul(R, out.matrix, vs[k]);
    const Vector<T>& y = us[k];
    if (equal(R, x, y)) continue;
    std::vector<Vector<T>> prefix;
    const Vector<T> diff = sub(R, x, y);
    if (R.is_unit(bilinear(R, gram, diff, diff))) {
      prefix.push_back(diff);
    } else {
      prefix.push_back(y);
      prefix.push_back(add(R, x, y));
    }
    for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) {
      out.matrix = mul(R, reflection_matrix(R, gram, *it), out.matrix);
    }
    out.word.vectors.insert(out.word.vectors.begin(), prefix.begin(), prefix.end());
  }
  return out;
}

inline WittResult<Rational> witt_extend(const QuadraticForm& f, const std::vector<VectorQ>& A,
                                        const std::vector<VectorQ>& B) {
  return witt_extend(RationalField{}, f.gram(), A, B);
}

}  // namespace orthokit
