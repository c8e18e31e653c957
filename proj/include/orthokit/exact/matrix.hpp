#pragma once

#include <concepts>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orthokit/exact/ring.hpp"

namespace orthokit {

template <class T>
using Vector = std::vector<T>;

// Dense row-major matrix. Arithmetic lives in free functions that take the
// ring explicitly (see ring.hpp).
template <class T>
class Matrix {
 public:
  using value_type = T;

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw DimensionError("ragged matrix literal");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static Matrix from_rows(const std::vector<Vector<T>>& rows) {
    Matrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols_) throw DimensionError("ragged rows");
      for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }
  static Matrix from_columns(const std::vector<Vector<T>>& cols) {
    Matrix m(cols.empty() ? 0 : cols.front().size(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != m.rows_) throw DimensionError("ragged columns");
      for (std::size_t i = 0; i < m.rows_; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  Vector<T> row(std::size_t i) const {
    return Vector<T>(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                     data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }
  Vector<T> column(std::size_t j) const {
    Vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }
  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }

  const std::vector<T>& data() const { return data_; }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using MatrixQ = Matrix<Rational>;
using VectorQ = Vector<Rational>;
using MatrixZ = Matrix<Integer>;  // residues when paired with a ResidueRing
using VectorZ = Vector<Integer>;

template <class Ring>
Matrix<typename Ring::value_type> identity(const Ring& R, std::size_t n) {
  Matrix<typename Ring::value_type> m(n, n, R.zero());
  for (std::size_t i = 0; i < n; ++i) m(i, i) = R.one();
  return m;
}

template <class T>
Matrix<T> transpose(const Matrix<T>& a) {
  Matrix<T> t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

template <class Ring>
Matrix<typename Ring::value_type> mul(const Ring& R,
                                      const Matrix<typename Ring::value_type>& a,
                                      const Matrix<typename Ring::value_type>& b) {
  if (a.cols() != b.rows()) throw DimensionError("matrix product dimension mismatch");
  using T = typename Ring::value_type;
  Matrix<T> c(a.rows(), b.cols(), R.zero());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      T acc = 0;
      for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
      c(i, j) = R.add(R.zero(), acc);
    }
  }
  return c;
}

template <class Ring>
Vector<typename Ring::value_type> mul(const Ring& R,
                                      const Matrix<typename Ring::value_type>& a,
                                      const Vector<typename Ring::value_type>& x) {
  if (a.cols() != x.size()) throw DimensionError("matrix-vector dimension mismatch");
  using T = typename Ring::value_type;
  Vector<T> y(a.rows(), R.zero());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    T acc = 0;
    for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * x[k];
    y[i] = R.add(R.zero(), acc);
  }
  return y;
}

template <class Ring>
Matrix<typename Ring::value_type> add(const Ring& R,
                                      const Matrix<typename Ring::value_type>& a,
                                      const Matrix<typename Ring::value_type>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("matrix sum dimension mismatch");
  }
  Matrix<typename Ring::value_type> c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = R.add(a(i, j), b(i, j));
  return c;
}

template <class Ring>
Matrix<typename Ring::value_type> sub(const Ring& R,
                                      const Matrix<typename Ring::value_type>& a,
                                      const Matrix<typename Ring::value_type>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("matrix difference dimension mismatch");
  }
  Matrix<typename Ring::value_type> c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = R.sub(a(i, j), b(i, j));
  return c;
}

template <class Ring>
Matrix<typename Ring::value_type> scale(const Ring& R,
                                        const typename Ring::value_type& s,
                                        const Matrix<typename Ring::value_type>& a) {
  Matrix<typename Ring::value_type> c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = R.mul(s, a(i, j));
  return c;
}

template <class Ring>
Vector<typename Ring::value_type> add(const Ring& R,
                                      const Vector<typename Ring::value_type>& a,
                                      const Vector<typename Ring::value_type>& b) {
  if (a.size() != b.size()) throw DimensionError("vector sum dimension mismatch");
  Vector<typename Ring::value_type> c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = R.add(a[i], b[i]);
  return c;
}

template <class Ring>
Vector<typename Ring::value_type> sub(const Ring& R,
                                      const Vector<typename Ring::value_type>& a,
                                      const Vector<typename Ring::value_type>& b) {
  if (a.size() != b.size()) throw DimensionError("vector difference dimension mismatch");
  Vector<typename Ring::value_type> c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = R.sub(a[i], b[i]);
  return c;
}

template <class Ring>
Vector<typename Ring::value_type> scale(const Ring& R,
                                        const typename Ring::value_type& s,
                                        const Vector<typename Ring::value_type>& a) {
  Vector<typename Ring::value_type> c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = R.mul(s, a[i]);
  return c;
}

// x^T G y.
template <class Ring>
typename Ring::value_type bilinear(const Ring& R,
                                   const Matrix<typename Ring::value_type>& gram,
                                   const Vector<typename Ring::value_type>& x,
                                   const Vector<typename Ring::value_type>& y) {
  if (gram.rows() != x.size() || gram.cols() != y.size()) {
    throw DimensionError("bilinear form dimension mismatch");
  }
  typename Ring::value_type acc = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (R.is_zero(x[i])) continue;
    for (std::size_t j = 0; j < y.size(); ++j) acc += x[i] * gram(i, j) * y[j];
  }
  return R.add(R.zero(), acc);
}

template <class Ring>
bool is_zero_vector(const Ring& R, const Vector<typename Ring::value_type>& v) {
  for (const auto& x : v)
    if (!R.is_zero(x)) return false;
  return true;
}

template <class Ring>
bool equal(const Ring& R, const Vector<typename Ring::value_type>& a,
           const Vector<typename Ring::value_type>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!R.equal(a[i], b[i])) return false;
  return true;
}

template <class Ring>
bool equal(const Ring& R, const Matrix<typename Ring::value_type>& a,
           const Matrix<typename Ring::value_type>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (!R.equal(a(i, j), b(i, j))) return false;
  return true;
}

template <class Ring>
Matrix<typename Ring::value_type> reduce(const Ring& R,
                                         const Matrix<typename Ring::value_type>& a) {
  Matrix<typename Ring::value_type> c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = R.add(R.zero(), a(i, j));
  return c;
}

template <class Ring>
Vector<typename Ring::value_type> reduce(const Ring& R,
                                         const Vector<typename Ring::value_type>& a) {
  Vector<typename Ring::value_type> c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = R.add(R.zero(), a[i]);
  return c;
}

template <class T>
struct RowEchelon {
  Matrix<T> form;                  // reduced row echelon form
  std::vector<std::size_t> pivots;  // pivot column of each leading row
  int row_swaps = 0;
  // Over Z/p^N: true when every row below the pivot rows vanished, i.e. the
  // elimination never needed a non-unit pivot.
  bool clean = true;
};

// Gauss-Jordan elimination that only ever pivots on units; the first row
// (top to bottom) holding a unit in the current column is used.
template <class Ring>
RowEchelon<typename Ring::value_type> row_reduce(
    const Ring& R, Matrix<typename Ring::value_type> m,
    std::size_t column_limit = static_cast<std::size_t>(-1)) {
  using T = typename Ring::value_type;
  RowEchelon<T> out;
  const std::size_t ncols = std::min(column_limit, m.cols());
  std::size_t r = 0;
  for (std::size_t c = 0; c < ncols && r < m.rows(); ++c) {
    std::size_t pivot = m.rows();
    for (std::size_t i = r; i < m.rows(); ++i) {
      if (R.is_unit(m(i, c))) {
        pivot = i;
        break;
      }
    }
    if (pivot == m.rows()) continue;
    if (pivot != r) {
      m.swap_rows(pivot, r);
      ++out.row_swaps;
    }
    const T inv = R.inv(m(r, c));
    for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) = R.mul(inv, m(r, j));
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || R.is_zero(m(i, c))) continue;
      const T factor = m(i, c);
      for (std::size_t j = 0; j < m.cols(); ++j) {
        m(i, j) = R.sub(m(i, j), R.mul(factor, m(r, j)));
      }
    }
    out.pivots.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < m.rows() && out.clean; ++i)
    for (std::size_t j = 0; j < ncols; ++j)
      if (!R.is_zero(m(i, j))) {
        out.clean = false;
        break;
      }
  out.form = std::move(m);
  return out;
}

template <class Ring>
std::size_t rank(const Ring& R, const Matrix<typename Ring::value_type>& m) {
  const auto e = row_reduce(R, m);
  if (!e.clean) throw NonUnitPivotError("rank undefined: non-unit pivot obstruction");
  return e.pivots.size();
}

template <class T>
struct LinearSolution {
  std::optional<Vector<T>> particular;  // empty when inconsistent
  std::vector<Vector<T>> kernel;        // basis of the homogeneous solutions
};

// Solves M x = rhs. Free variables are set to zero in the particular solution.
template <class Ring>
LinearSolution<typename Ring::value_type> solve(
    const Ring& R, const Matrix<typename Ring::value_type>& m,
    const Vector<typename Ring::value_type>& rhs) {
  using T = typename Ring::value_type;
  if (rhs.size() != m.rows()) throw DimensionError("right-hand side dimension mismatch");
  Matrix<T> aug(m.rows(), m.cols() + 1, R.zero());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = R.add(R.zero(), m(i, j));
    aug(i, m.cols()) = R.add(R.zero(), rhs[i]);
  }
  const auto e = row_reduce(R, std::move(aug), m.cols());
  if (!e.clean) throw NonUnitPivotError("non-unit pivot obstruction");
  LinearSolution<T> out;
  const std::size_t n = m.cols();
  std::vector<bool> is_pivot(n, false);
  for (auto c : e.pivots) is_pivot[c] = true;

  bool consistent = true;
  for (std::size_t i = e.pivots.size(); i < m.rows(); ++i) {
    if (!R.is_zero(e.form(i, n))) consistent = false;
  }
  if (consistent) {
    Vector<T> x(n, R.zero());
    for (std::size_t k = 0; k < e.pivots.size(); ++k) x[e.pivots[k]] = e.form(k, n);
    out.particular = std::move(x);
  }
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    Vector<T> v(n, R.zero());
    v[f] = R.one();
    for (std::size_t k = 0; k < e.pivots.size(); ++k) v[e.pivots[k]] = R.neg(e.form(k, f));
    out.kernel.push_back(std::move(v));
  }
  return out;
}

template <class Ring>
std::vector<Vector<typename Ring::value_type>> kernel_basis(
    const Ring& R, const Matrix<typename Ring::value_type>& m) {
  return solve(R, m, Vector<typename Ring::value_type>(m.rows(), R.zero())).kernel;
}

template <class Ring>
Matrix<typename Ring::value_type> inverse(const Ring& R,
                                          const Matrix<typename Ring::value_type>& m) {
  using T = typename Ring::value_type;
  if (!m.is_square()) throw DimensionError("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  Matrix<T> aug(n, 2 * n, R.zero());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = R.add(R.zero(), m(i, j));
    aug(i, n + i) = R.one();
  }
  const auto e = row_reduce(R, std::move(aug), n);
  if (e.pivots.size() != n) throw SingularMatrixError("matrix is singular");
  Matrix<T> inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = e.form(i, n + j);
  return inv;
}

// Determinant by unit-pivot elimination. Over Z/p^N a determinant that is
// not a unit is reported as a NonUnitPivotError unless the matrix is zero
// in some column.
template <class Ring>
typename Ring::value_type determinant(const Ring& R,
                                      Matrix<typename Ring::value_type> m) {
  using T = typename Ring::value_type;
  if (!m.is_square()) throw DimensionError("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  T det = R.one();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = n;
    for (std::size_t i = c; i < n; ++i) {
      if (R.is_unit(m(i, c))) {
        pivot = i;
        break;
      }
    }
    if (pivot == n) {
      bool column_zero = true;
      for (std::size_t i = c; i < n; ++i)
        if (!R.is_zero(m(i, c))) column_zero = false;
      if (column_zero) return R.zero();
      throw NonUnitPivotError("determinant is not a unit");
    }
    if (pivot != c) {
      m.swap_rows(pivot, c);
      det = R.neg(det);
    }
    det = R.mul(det, m(c, c));
    const T inv = R.inv(m(c, c));
    for (std::size_t i = c + 1; i < n; ++i) {
      if (R.is_zero(m(i, c))) continue;
      const T factor = R.mul(m(i, c), inv);
      for (std::size_t j = c; j < n; ++j) m(i, j) = R.sub(m(i, j), R.mul(factor, m(c, j)));
    }
  }
  return det;
}

// Convenience: lift a rational matrix to residues.
inline MatrixZ to_residues(const ResidueRing& R, const MatrixQ& m) {
  MatrixZ out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = R.from_rational(m(i, j));
  return out;
}

inline VectorZ to_residues(const ResidueRing& R, const VectorQ& v) {
  VectorZ out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = R.from_rational(v[i]);
  return out;
}

inline MatrixQ to_rational(const MatrixZ& m) {
  MatrixQ out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = Rational(m(i, j));
  return out;
}

inline VectorQ to_rational(const VectorZ& v) {
  VectorQ out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = Rational(v[i]);
  return out;
}

template <class T>
Vector<T> unit_vector(std::size_t n, std::size_t i) {
  Vector<T> v(n, T(0));
  v.at(i) = T(1);
  return v;
}

}  // namespace orthokit
