#pragma once

#include <vector>

#include "orthokit/quad/form.hpp"

namespace orthokit {

// tau_c(x) = x - (2 (x|c) / f(c)) c
template <class Ring>
Matrix<typename Ring::value_type> reflection_matrix(
    const Ring& R, const Matrix<typename Ring::value_type>& gram,
    const Vector<typename Ring::value_type>& c) {
  using T = typename Ring::value_type;
  const T fc = bilinear(R, gram, c, c);
  if (!R.is_unit(fc)) throw PreconditionError("reflection in an isotropic vector");
  const T k = R.mul(R.from_int(2), R.inv(fc));
  const Vector<T> gc = mul(R, gram, c);
  Matrix<T> m = identity(R, c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (R.is_zero(c[i])) continue;
    const T kc = R.mul(k, c[i]);
    for (std::size_t j = 0; j < c.size(); ++j) m(i, j) = R.sub(m(i, j), R.mul(kc, gc[j]));
  }
  return m;
}

template <class Ring>
Vector<typename Ring::value_type> reflect(const Ring& R,
                                          const Matrix<typename Ring::value_type>& gram,
                                          const Vector<typename Ring::value_type>& c,
                                          const Vector<typename Ring::value_type>& x) {
  using T = typename Ring::value_type;
  const T fc = bilinear(R, gram, c, c);
  if (!R.is_unit(fc)) throw PreconditionError("reflection in an isotropic vector");
  const T k = R.mul(R.mul(R.from_int(2), bilinear(R, gram, x, c)), R.inv(fc));
  return sub(R, x, scale(R, k, c));
}

inline MatrixQ reflection(const QuadraticForm& f, const VectorQ& c) {
  if (c.size() != f.dim()) throw DimensionError("reflection vector dimension mismatch");
  return reflection_matrix(RationalField{}, f.gram(), c);
}

// Ordered reflection vectors; the word stands for tau_{c0} tau_{c1} ... .
template <class T>
struct ReflectionWord {
  std::vector<Vector<T>> vectors;
  std::size_t size() const { return vectors.size(); }
  bool empty() const { return vectors.empty(); }
};

using ReflectionWordQ = ReflectionWord<Rational>;

template <class Ring>
Matrix<typename Ring::value_type> word_matrix(
    const Ring& R, const Matrix<typename Ring::value_type>& gram,
    const ReflectionWord<typename Ring::value_type>& w) {
  auto m = identity(R, gram.rows());
  for (const auto& c : w.vectors) m = mul(R, m, reflection_matrix(R, gram, c));
  return m;
}

inline MatrixQ word_matrix(const QuadraticForm& f, const ReflectionWordQ& w) {
  return word_matrix(RationalField{}, f.gram(), w);
}

// Product of the f(c_i) over the word.
inline Rational word_norm(const QuadraticForm& f, const ReflectionWordQ& w) {
  Rational p = 1;
  for (const auto& c : w.vectors) p *= evaluate(f, c);
  return p;
}

}  // namespace orthokit
