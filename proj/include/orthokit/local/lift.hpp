#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orthokit/local/lattice.hpp"
#include "orthokit/quad/witt.hpp"

namespace orthokit {

// Unknowns of an n x n matrix Y are numbered row-major, Y_ij -> i*n + j.

// Y^T F + F Y = 0, one equation per entry (k, l) with k <= l.
inline MatrixZ skew_equations(const ResidueRing& Fp, const MatrixZ& F) {
  const std::size_t n = F.rows();
  MatrixZ eq(n * (n + 1) / 2, n * n, 0);
  std::size_t row = 0;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = k; l < n; ++l, ++row)
      for (std::size_t i = 0; i < n; ++i) {
        eq(row, i * n + k) = Fp.add(eq(row, i * n + k), F(i, l));
        eq(row, i * n + l) = Fp.add(eq(row, i * n + l), F(k, i));
      }
  return eq;
}

// Y x_t = y_t.
inline MatrixZ transport_equations(const ResidueRing& Fp, std::size_t n,
                                   const std::vector<VectorZ>& xs) {
  MatrixZ eq(xs.size() * n, n * n, 0);
  for (std::size_t t = 0; t < xs.size(); ++t)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) eq(t * n + i, i * n + j) = Fp.reduce(xs[t][j]);
  return eq;
}

// The set A of tuples (y_1..y_m) with (x_i|y_j) + (x_j|y_i) = 0; unknown
// y_t[k] is numbered t*n + k.
inline MatrixZ pairing_equations(const ResidueRing& Fp, const MatrixZ& F,
                                 const std::vector<VectorZ>& xs) {
  const std::size_t n = F.rows(), m = xs.size();
  MatrixZ eq(m * (m + 1) / 2, m * n, 0);
  std::size_t row = 0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j, ++row) {
      const VectorZ fi = mul(Fp, F, reduce(Fp, xs[i]));
      const VectorZ fj = mul(Fp, F, reduce(Fp, xs[j]));
      for (std::size_t k = 0; k < n; ++k) {
        eq(row, j * n + k) = Fp.add(eq(row, j * n + k), fi[k]);
        eq(row, i * n + k) = Fp.add(eq(row, i * n + k), fj[k]);
      }
    }
  return eq;
}

inline std::size_t skew_space_dimension(const ResidueRing& Fp, const MatrixZ& F) {
  return kernel_basis(Fp, skew_equations(Fp, reduce(Fp, F))).size();
}

inline std::size_t pairing_space_dimension(const ResidueRing& Fp, const MatrixZ& F,
                                           const std::vector<VectorZ>& xs) {
  return kernel_basis(Fp, pairing_equations(Fp, reduce(Fp, F), xs)).size();
}

// Dimension of the image of Y -> (Y x_1, ..., Y x_m) on the skew space.
inline std::size_t transported_space_dimension(const ResidueRing& Fp, const MatrixZ& F,
                                               const std::vector<VectorZ>& xs) {
  const std::size_t n = F.rows();
  const auto basis = kernel_basis(Fp, skew_equations(Fp, reduce(Fp, F)));
  if (basis.empty() || xs.empty()) return 0;
  const MatrixZ T = transport_equations(Fp, n, xs);
  std::vector<VectorZ> images;
  for (const auto& y : basis) images.push_back(mul(Fp, T, y));
  return rank(Fp, MatrixZ::from_columns(images));
}

// Y over F_p with Y^T F + F Y = 0 and Y x_i = y_i.
inline MatrixZ skew_solve(const ResidueRing& Fp, const MatrixZ& F, const std::vector<VectorZ>& xs,
                          const std::vector<VectorZ>& ys) {
  if (!Fp.is_field()) throw PreconditionError("skew_solve works over the residue field");
  const std::size_t n = F.rows();
  if (xs.size() != ys.size()) throw DimensionError("source and target counts differ");
  const MatrixZ Fb = reduce(Fp, F);
  std::vector<VectorZ> xb, yb;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i].size() != n || ys[i].size() != n) throw DimensionError("vector dimension mismatch");
    xb.push_back(reduce(Fp, xs[i]));
    yb.push_back(reduce(Fp, ys[i]));
  }
  if (!xb.empty() && rank(Fp, MatrixZ::from_columns(xb)) != xb.size()) {
    throw PreconditionError("skew_solve sources are linearly dependent mod p");
  }
  for (std::size_t i = 0; i < xb.size(); ++i)
    for (std::size_t j = i; j < xb.size(); ++j)
      if (!Fp.is_zero(Fp.add(bilinear(Fp, Fb, xb[i], yb[j]), bilinear(Fp, Fb, xb[j], yb[i])))) {
        throw PreconditionError("skew_solve targets violate (x_i|y_j) + (x_j|y_i) = 0 at (" +
                                std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
      }
  const MatrixZ skew = skew_equations(Fp, Fb);
  const MatrixZ trans = transport_equations(Fp, n, xb);
  MatrixZ system(skew.rows() + trans.rows(), n * n, 0);
  VectorZ rhs(system.rows(), 0);
  for (std::size_t r = 0; r < skew.rows(); ++r)
    for (std::size_t c = 0; c < n * n; ++c) system(r, c) = skew(r, c);
  for (std::size_t r = 0; r < trans.rows(); ++r) {
    for (std::size_t c = 0; c < n * n; ++c) system(skew.rows() + r, c) = trans(r, c);
    rhs[skew.rows() + r] = yb[r / n][r % n];
  }
  const auto sol = solve(Fp, system, rhs);
  if (!sol.particular) throw Error("skew_solve: system unexpectedly inconsistent");
  MatrixZ Y(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) Y(i, j) = (*sol.particular)[i * n + j];
  return Y;
}

// One Hensel step: from t(X) F X = F mod p^l to mod p^(l+1) (in fact p^(2l)),
// Y = X + p^l Z with Z = (1/2) t(FX)^(-1) A and p^l A = F - t(X) F X.
inline MatrixZ improve_orthogonality(const ResidueRing& R, const MatrixZ& F, const MatrixZ& X,
                                     int l) {
  if (l < 1) throw PreconditionError("improve_orthogonality needs level >= 1");
  const std::size_t n = F.rows();
  const MatrixZ defect = sub(R, F, mul(R, transpose(X), mul(R, F, X)));
  MatrixZ A(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (R.valuation(defect(i, j)) < l) {
        throw PreconditionError("X is not orthogonal mod p^" + std::to_string(l));
      }
      A(i, j) = R.divide_by_prime_power(defect(i, j), l);
    }
  MatrixZ inv;
  try {
    inv = inverse(R, transpose(mul(R, F, X)));
  } catch (const SingularMatrixError&) {
    throw PreconditionError("FX is not invertible mod p");
  }
  const MatrixZ Z = scale(R, R.inv(R.from_int(2)), mul(R, inv, A));
  return add(R, X, scale(R, R.reduce(pow_int(R.prime(), l)), Z));
}

// Iterates improve_orthogonality until t(X) F X = F holds to the full
// precision of R. The result agrees with X mod p^l.
inline MatrixZ lift_to_orthogonal(const ResidueRing& R, const MatrixZ& F, MatrixZ X, int l) {
  if (l < 1) throw PreconditionError("lift_to_orthogonal needs level >= 1");
  int current = orthogonality_level(R, F, X);
  if (current < l) throw PreconditionError("X is not orthogonal mod p^" + std::to_string(l));
  while (current < R.precision()) {
    X = improve_orthogonality(R, F, X, current);
    const int next = orthogonality_level(R, F, X);
    if (next <= current) throw Error("lift_to_orthogonal made no progress");
    current = next;
  }
  return X;
}

// Lemma-style correction E + p^s Y with Y skew for F and
// Y (X_s a_i) = (b_i - X_s a_i) / p^s mod p.
inline MatrixZ refine_transporter(const ResidueRing& R, const MatrixZ& F, const MatrixZ& Xs,
                                  const std::vector<VectorZ>& sources,
                                  const std::vector<VectorZ>& targets, int s) {
  if (s < 1) throw PreconditionError("refine_transporter needs s >= 1");
  const ResidueRing Fp = R.residue_field();
  std::vector<VectorZ> xs, cs;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const VectorZ image = mul(R, Xs, reduce(R, sources[i]));
    const VectorZ d = sub(R, reduce(R, targets[i]), image);
    VectorZ c(d.size());
    for (std::size_t k = 0; k < d.size(); ++k) {
      if (R.valuation(d[k]) < s) {
        throw PreconditionError("X_s does not transport mod p^" + std::to_string(s));
      }
      c[k] = Fp.reduce(R.divide_by_prime_power(d[k], s));
    }
    xs.push_back(reduce(Fp, image));
    cs.push_back(std::move(c));
  }
  const MatrixZ Y = skew_solve(Fp, F, xs, cs);
  return add(R, identity(R, F.rows()), scale(R, R.reduce(pow_int(R.prime(), s)), Y));
}

struct LiftTrace {
  std::vector<MatrixZ> iterates;  // X_1, X_2, ..., X_N at working precision
  int working_precision = 0;
};

inline void check_transporter_problem(const TransporterProblem& pr, const ResidueRing& RN,
                                      const MatrixZ& FN) {
  const std::size_t n = pr.gram.rows();
  if (pr.sources.size() != pr.targets.size()) {
    throw DimensionError("source and target counts differ");
  }
  for (const auto* sys : {&pr.sources, &pr.targets})
    for (const auto& v : *sys)
      if (v.size() != n) throw DimensionError("vector dimension mismatch");
  for (std::size_t i = 0; i < pr.sources.size(); ++i)
    for (std::size_t j = i; j < pr.sources.size(); ++j) {
      const auto x = bilinear(RN, FN, reduce(RN, pr.sources[i]), reduce(RN, pr.sources[j]));
      const auto y = bilinear(RN, FN, reduce(RN, pr.targets[i]), reduce(RN, pr.targets[j]));
      if (!RN.equal(x, y)) {
        throw PreconditionError("gram mismatch at (" + std::to_string(i + 1) + "," +
                                std::to_string(j + 1) + ") mod p^" +
                                std::to_string(RN.precision()));
      }
    }
  const ResidueRing Fp = RN.residue_field();
  for (const auto* sys : {&pr.sources, &pr.targets}) {
    if (sys->empty()) continue;
    std::vector<VectorZ> red;
    for (const auto& v : *sys) red.push_back(reduce(Fp, v));
    if (rank(Fp, MatrixZ::from_columns(red)) != red.size()) {
      throw PreconditionError("reductions mod p are linearly dependent");
    }
  }
}

namespace detail {

// Transporter at working precision W; every iterate is checked against the
// previous one (X_{s+1} = X_s mod p^s) and against the transport congruence.
inline MatrixZ witt_lift_work(const TransporterProblem& pr, int N, const ResidueRing& R,
                              const MatrixZ& F, LiftTrace* trace) {
  const ResidueRing Fp = R.residue_field();
  const MatrixZ Fb = reduce(Fp, F);
  std::vector<VectorZ> sb, tb;
  for (std::size_t i = 0; i < pr.sources.size(); ++i) {
    sb.push_back(reduce(Fp, pr.sources[i]));
    tb.push_back(reduce(Fp, pr.targets[i]));
  }
  MatrixZ X = witt_extend(Fp, Fb, sb, tb).matrix;
  X = lift_to_orthogonal(R, F, X, 1);
  if (trace) trace->iterates.push_back(X);
  for (int s = 1; s < N; ++s) {
    if (transport_level(R, X, pr.sources, pr.targets) < s) {
      throw Error("witt_lift: transport congruence lost at level " + std::to_string(s));
    }
    const MatrixZ E = refine_transporter(R, F, X, pr.sources, pr.targets, s);
    MatrixZ next = lift_to_orthogonal(R, F, mul(R, E, X), s + 1);
    const ResidueRing Rs = R.with_precision(s);
    if (!equal(Rs, next, X)) {
      throw Error("witt_lift: iterate " + std::to_string(s + 1) + " does not stabilize mod p^" +
                  std::to_string(s));
    }
    X = std::move(next);
    if (trace) trace->iterates.push_back(X);
  }
  if (transport_level(R, X, pr.sources, pr.targets) < N) {
    throw Error("witt_lift: final transport congruence fails");
  }
  return X;
}

}  // namespace detail

// X with t(X) F X = F and X a_i = b_i, both mod p^N.
inline OrthogonalMapZp witt_lift(const TransporterProblem& pr, int N, LiftTrace* trace = nullptr) {
  if (N < 1) throw PreconditionError("precision must be at least 1");
  const ResidueRing RN(pr.p, N);
  const MatrixZ FN = lattice_gram(RN, pr.gram);
  check_transporter_problem(pr, RN, FN);
  const int W = working_precision(pr.p, N, pr.gram.rows());
  const ResidueRing R(pr.p, W);
  const MatrixZ F = to_residues(R, pr.gram);
  if (trace) trace->working_precision = W;
  const MatrixZ X = detail::witt_lift_work(pr, N, R, F, trace);
  return {pr.p, N, reduce(RN, X)};
}

// As witt_lift with det X = 1 mod p^N, for 2m + 1 <= n. A lift with det -1
// is composed with tau_c, c a unit-norm vector orthogonal to the sources
// completed to a unimodular system.
inline OrthogonalMapZp witt_lift_special(const TransporterProblem& pr, int N,
                                         LiftTrace* trace = nullptr) {
  const std::size_t n = pr.gram.rows(), m = pr.sources.size();
  if (2 * m + 1 > n) throw PreconditionError("special lift needs 2m+1 <= n");
  if (N < 1) throw PreconditionError("precision must be at least 1");
  const ResidueRing RN(pr.p, N);
  const MatrixZ FN = lattice_gram(RN, pr.gram);
  check_transporter_problem(pr, RN, FN);
  const int W = working_precision(pr.p, N, n);
  const ResidueRing R(pr.p, W);
  const MatrixZ F = to_residues(R, pr.gram);
  if (trace) trace->working_precision = W;
  MatrixZ X = detail::witt_lift_work(pr, N, R, F, trace);
  if (R.equal(determinant(R, X), R.neg(R.one()))) {
    const ResidueRing Fp = R.residue_field();
    const MatrixZ Fb = reduce(Fp, F);
    std::vector<VectorZ> completed;
    for (const auto& a : pr.sources) completed.push_back(reduce(R, a));
    if (m > 0) {
      std::vector<VectorZ> sb;
      for (const auto& a : pr.sources) sb.push_back(reduce(Fp, a));
      const auto kappa = kernel_basis(Fp, gram_of(Fp, Fb, sb));
      if (!kappa.empty()) {
        std::vector<VectorZ> span;
        for (const auto& k : kappa) span.push_back(detail::combine(Fp, sb, k, n));
        std::vector<std::size_t> complement;
        std::size_t current = rank(Fp, MatrixZ::from_columns(span));
        for (std::size_t l = 0; l < m && complement.size() + kappa.size() < m; ++l) {
          span.push_back(sb[l]);
          const std::size_t r = rank(Fp, MatrixZ::from_columns(span));
          if (r > current) {
            current = r;
            complement.push_back(l);
          } else {
            span.pop_back();
          }
        }
        for (const auto& w : detail::hyperbolic_completion(Fp, Fb, sb, kappa, complement)) {
          completed.push_back(w);
        }
      }
    }
    const auto comp = orthogonal_complement(R, F, completed);
    const auto c = find_anisotropic(R, F, comp);
    if (!c) throw Error("witt_lift_special: complement has no unit-norm vector");
    X = mul(R, X, reflection_matrix(R, F, *c));
    if (transport_level(R, X, pr.sources, pr.targets) < N) {
      throw Error("witt_lift_special: determinant fix broke the transport");
    }
  }
  if (!R.equal(determinant(R, X), R.one())) throw Error("witt_lift_special: det is not 1");
  return {pr.p, N, reduce(RN, X)};
}

}  // namespace orthokit
