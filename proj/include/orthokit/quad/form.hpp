#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orthokit/exact/matrix.hpp"

namespace orthokit {

// Nondegenerate quadratic form over Q given by its Gram matrix, normalized so
// that (x|x) = f(x). The standard shape is x1*x2 + a3*x3^2 + ... + an*xn^2.
class QuadraticForm {
 public:
  explicit QuadraticForm(MatrixQ gram) : gram_(std::move(gram)) {
    if (!gram_.is_square() || gram_.rows() == 0) {
      throw DimensionError("gram matrix must be square and nonempty");
    }
    for (std::size_t i = 0; i < gram_.rows(); ++i)
      for (std::size_t j = i + 1; j < gram_.cols(); ++j)
        if (gram_(i, j) != gram_(j, i)) {
          throw PreconditionError("gram matrix is not symmetric at (" +
                                  std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                  ")");
        }
    if (determinant(RationalField{}, gram_) == 0) {
      throw PreconditionError("quadratic form is degenerate");
    }
    detect_standard_shape();
  }

  // x1 x2 + alphas[0] x3^2 + ...
  static QuadraticForm standard(const std::vector<Rational>& alphas) {
    const std::size_t n = alphas.size() + 2;
    MatrixQ g(n, n);
    g(0, 1) = g(1, 0) = Rational(1, 2);
    for (std::size_t i = 0; i < alphas.size(); ++i) g(i + 2, i + 2) = alphas[i];
    return QuadraticForm(std::move(g));
  }

  static QuadraticForm diagonal(const std::vector<Rational>& d) {
    MatrixQ g(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) g(i, i) = d[i];
    return QuadraticForm(std::move(g));
  }

  std::size_t dim() const { return gram_.rows(); }
  const MatrixQ& gram() const { return gram_; }
  const std::optional<std::vector<Rational>>& standard_shape() const { return alphas_; }
  bool is_standard() const { return alphas_.has_value(); }

  const std::vector<Rational>& alphas() const {
    if (!alphas_) throw PreconditionError("form is not in standard shape");
    return *alphas_;
  }

  friend bool operator==(const QuadraticForm& a, const QuadraticForm& b) {
    return a.gram_ == b.gram_;
  }

 private:
  void detect_standard_shape() {
    const std::size_t n = dim();
    if (n < 3) return;
    const Rational half(1, 2);
    if (gram_(0, 0) != 0 || gram_(1, 1) != 0 || gram_(0, 1) != half) return;
    std::vector<Rational> alphas;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j || (i < 2 && j < 2)) continue;
        if (gram_(i, j) != 0) return;
      }
      if (i >= 2) alphas.push_back(gram_(i, i));
    }
    alphas_ = std::move(alphas);
  }

  MatrixQ gram_;
  std::optional<std::vector<Rational>> alphas_;
};

inline Rational bilinear(const QuadraticForm& f, const VectorQ& x, const VectorQ& y) {
  return bilinear(RationalField{}, f.gram(), x, y);
}

inline Rational evaluate(const QuadraticForm& f, const VectorQ& x) {
  return bilinear(RationalField{}, f.gram(), x, x);
}

inline VectorQ basis_vector(const QuadraticForm& f, std::size_t i) {
  return unit_vector<Rational>(f.dim(), i);
}

// Distinguished anisotropic pair of the standard frame: a = e_n, b = e_{n-1}.
inline VectorQ frame_a(const QuadraticForm& f) { return basis_vector(f, f.dim() - 1); }
inline VectorQ frame_b(const QuadraticForm& f) { return basis_vector(f, f.dim() - 2); }

template <class Ring>
bool is_orthogonal(const Ring& R, const Matrix<typename Ring::value_type>& gram,
                   const Matrix<typename Ring::value_type>& m) {
  if (m.rows() != gram.rows() || !m.is_square()) return false;
  return equal(R, mul(R, transpose(m), mul(R, gram, m)), reduce(R, gram));
}

inline bool is_orthogonal(const QuadraticForm& f, const MatrixQ& m) {
  return is_orthogonal(RationalField{}, f.gram(), m);
}

// Gram matrix (v_i|v_j) of a vector system.
template <class Ring>
Matrix<typename Ring::value_type> gram_of(const Ring& R,
                                          const Matrix<typename Ring::value_type>& gram,
                                          const std::vector<Vector<typename Ring::value_type>>& vs) {
  Matrix<typename Ring::value_type> g(vs.size(), vs.size());
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = i; j < vs.size(); ++j) g(i, j) = g(j, i) = bilinear(R, gram, vs[i], vs[j]);
  return g;
}

// Rows (G v_i)^T, so that M x = ((v_i|x))_i.
template <class Ring>
Matrix<typename Ring::value_type> pairing_rows(
    const Ring& R, const Matrix<typename Ring::value_type>& gram,
    const std::vector<Vector<typename Ring::value_type>>& vs) {
  Matrix<typename Ring::value_type> m(vs.size(), gram.cols(), R.zero());
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const auto gv = mul(R, gram, vs[i]);
    for (std::size_t j = 0; j < gram.cols(); ++j) m(i, j) = gv[j];
  }
  return m;
}

// Basis of {x : (v_i|x) = 0 for all i}.
template <class Ring>
std::vector<Vector<typename Ring::value_type>> orthogonal_complement(
    const Ring& R, const Matrix<typename Ring::value_type>& gram,
    const std::vector<Vector<typename Ring::value_type>>& vs) {
  if (vs.empty()) {
    std::vector<Vector<typename Ring::value_type>> basis;
    for (std::size_t i = 0; i < gram.rows(); ++i) {
      Vector<typename Ring::value_type> e(gram.rows(), R.zero());
      e[i] = R.one();
      basis.push_back(std::move(e));
    }
    return basis;
  }
  return kernel_basis(R, pairing_rows(R, gram, vs));
}

template <class T>
struct Diagonalization {
  Matrix<T> basis;  // columns are the new basis vectors
  Vector<T> diagonal;
};

// Symmetric Gaussian elimination: finds B with B^T G B diagonal. A zero
// pivot is first swapped with a later anisotropic basis vector, otherwise
// replaced by e_i + e_j for some j with (e_i|e_j) != 0 (char != 2).
template <class Ring>
Diagonalization<typename Ring::value_type> diagonalize(
    const Ring& R, const Matrix<typename Ring::value_type>& gram) {
  using T = typename Ring::value_type;
  const std::size_t n = gram.rows();
  Matrix<T> basis = identity(R, n);
  auto current = [&] { return mul(R, transpose(basis), mul(R, gram, basis)); };
  Matrix<T> g = current();
  for (std::size_t i = 0; i < n; ++i) {
    if (R.is_zero(g(i, i))) {
      std::size_t swap_with = n;
      for (std::size_t j = i + 1; j < n; ++j)
        if (R.is_unit(g(j, j))) {
          swap_with = j;
          break;
        }
      if (swap_with != n) {
        for (std::size_t r = 0; r < n; ++r) std::swap(basis(r, i), basis(r, swap_with));
      } else {
        std::size_t partner = n;
        for (std::size_t j = i + 1; j < n; ++j)
          if (R.is_unit(g(i, j))) {
            partner = j;
            break;
          }
        if (partner == n) continue;  // radical direction
        for (std::size_t r = 0; r < n; ++r) basis(r, i) = R.add(basis(r, i), basis(r, partner));
      }
      g = current();
    }
    if (!R.is_unit(g(i, i))) continue;
    const T inv = R.inv(g(i, i));
    bool changed = false;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (R.is_zero(g(i, j))) continue;
      const T c = R.mul(g(i, j), inv);
      for (std::size_t r = 0; r < n; ++r) basis(r, j) = R.sub(basis(r, j), R.mul(c, basis(r, i)));
      changed = true;
    }
    if (changed) g = current();
  }
  Diagonalization<T> out{basis, Vector<T>(n)};
  for (std::size_t i = 0; i < n; ++i) out.diagonal[i] = g(i, i);
  return out;
}

struct Signature {
  std::size_t n_plus = 0;
  std::size_t n_minus = 0;
  bool operator==(const Signature&) const = default;
};

inline Signature signature(const QuadraticForm& f) {
  Signature s;
  for (const auto& d : diagonalize(RationalField{}, f.gram()).diagonal) {
    if (d > 0) ++s.n_plus;
    if (d < 0) ++s.n_minus;
  }
  return s;
}

inline void require_standard(const QuadraticForm& f) {
  if (!f.is_standard()) throw PreconditionError("form is not in standard shape");
}

// e1 -> lambda e1, e2 -> e2 / lambda, identity elsewhere.
inline MatrixQ hyperbolic_rotation(const QuadraticForm& f, const Rational& lambda) {
  require_standard(f);
  if (lambda == 0) throw PreconditionError("hyperbolic rotation needs lambda != 0");
  MatrixQ m = identity(RationalField{}, f.dim());
  m(0, 0) = lambda;
  m(1, 1) = 1 / lambda;
  return m;
}

// A vector of <e1,e2> (hence orthogonal to every e_i, i >= 3) with f = c.
inline VectorQ represent_value(const QuadraticForm& f, const Rational& c) {
  require_standard(f);
  VectorQ w(f.dim());
  if (c == 0) {
    w[0] = 1;
  } else {
    w[0] = c;
    w[1] = 1;
  }
  return w;
}

}  // namespace orthokit
