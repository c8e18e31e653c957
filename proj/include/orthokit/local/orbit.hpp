#pragma once

#include <optional>

#include "orthokit/local/lift.hpp"

namespace orthokit {

struct OrbitResult {
  std::optional<OrthogonalMapZp> transporter;
  int level_a = 0;
  int level_b = 0;
  // X a = b holds mod p^transport_level; equals N exactly when some
  // X in O(F) mod p^N moves a to b.
  int transport_level = 0;
};

// Orbit criterion at precision N: a and b with equal f-values mod p^N lie in
// one orbit of the integral orthogonal group iff their levels agree. With
// lambda the common level and a = p^lambda a0, b = p^lambda b0, the
// transporter is built from a0 -> b0; it is exact mod p^N when
// f(a0) = f(b0) mod p^(N - lambda), and exact mod p^(N - lambda) otherwise.
inline OrbitResult orbit_test(const Integer& p, const MatrixQ& gram, const VectorZ& a,
                              const VectorZ& b, int N) {
  if (N < 1) throw PreconditionError("precision must be at least 1");
  const std::size_t n = gram.rows();
  if (a.size() != n || b.size() != n) throw DimensionError("vector dimension mismatch");
  const ResidueRing RN(p, N);
  const MatrixZ FN = lattice_gram(RN, gram);
  const VectorZ ar = reduce(RN, a), br = reduce(RN, b);
  if (!RN.equal(bilinear(RN, FN, ar, ar), bilinear(RN, FN, br, br))) {
    throw PreconditionError("f-value mismatch");
  }
  OrbitResult out;
  out.level_a = level(RN, ar);
  out.level_b = level(RN, br);
  if (out.level_a != out.level_b) return out;

  const int lam = out.level_a;
  VectorZ a0(n), b0(n);
  for (std::size_t i = 0; i < n; ++i) {
    a0[i] = RN.divide_by_prime_power(ar[i], lam);
    b0[i] = RN.divide_by_prime_power(br[i], lam);
  }
  const ResidueRing R1(p, N - lam);
  const MatrixZ F1 = to_residues(R1, gram);
  const bool full = R1.equal(bilinear(R1, F1, reduce(R1, a0), reduce(R1, a0)),
                             bilinear(R1, F1, reduce(R1, b0), reduce(R1, b0)));
  const int K = full ? N - lam : N - 2 * lam;

  const int W = working_precision(p, N, n);
  const ResidueRing R(p, W);
  const MatrixZ F = to_residues(R, gram);
  MatrixZ X;
  if (K >= 1) {
    const TransporterProblem pr{p, gram, {a0}, {b0}};
    X = witt_lift(pr, K).matrix;
    X = lift_to_orthogonal(R, F, X, K);
  } else {
    X = identity(R, n);
  }
  out.transport_level = transport_level(RN, reduce(RN, X), {ar}, {br});
  if (out.transport_level < N - lam) throw Error("orbit_test: transporter misses its level");
  out.transporter = OrthogonalMapZp{p, N, reduce(RN, X)};
  return out;
}

}  // namespace orthokit
