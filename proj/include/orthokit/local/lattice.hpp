#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orthokit/quad/form.hpp"

namespace orthokit {

// Systems a_i -> b_i on the lattice Z_p^n with a p-integral Gram matrix.
// Vectors are integer representatives of residues.
struct TransporterProblem {
  Integer p;
  MatrixQ gram;
  std::vector<VectorZ> sources;
  std::vector<VectorZ> targets;
};

struct OrthogonalMapZp {
  Integer p;
  int precision = 0;
  MatrixZ matrix;  // residues in [0, p^precision)
};

// Guard digits: N + ceil(log_p n) + 2.
inline int working_precision(const Integer& p, int N, std::size_t n) {
  int k = 0;
  Integer pk = 1;
  while (pk < Integer(static_cast<unsigned long>(n))) {
    pk *= p;
    ++k;
  }
  return N + k + 2;
}

inline MatrixZ lattice_gram(const ResidueRing& R, const MatrixQ& gram) {
  const MatrixZ F = to_residues(R, gram);
  if (!R.is_unit(determinant(R.residue_field(), reduce(R.residue_field(), F)))) {
    throw PreconditionError("gram determinant is not a unit mod " + R.prime().get_str());
  }
  return F;
}

// Minimum p-adic valuation over the coordinates, i.e. the largest l with
// a in p^l L for the standard basis of L.
inline int level(const ResidueRing& R, const VectorZ& a) {
  int best = R.precision();
  for (const auto& x : a) best = std::min(best, R.valuation(x));
  if (best >= R.precision()) throw PreconditionError("level exceeds precision");
  return best;
}

// Smallest valuation of the entries of F - X^T F X, capped at the precision.
inline int orthogonality_level(const ResidueRing& R, const MatrixZ& F, const MatrixZ& X) {
  const MatrixZ defect = sub(R, F, mul(R, transpose(X), mul(R, F, X)));
  int best = R.precision();
  for (std::size_t i = 0; i < defect.rows(); ++i)
    for (std::size_t j = 0; j < defect.cols(); ++j) best = std::min(best, R.valuation(defect(i, j)));
  return best;
}

// Largest l <= precision with X a_i = b_i mod p^l for every i.
inline int transport_level(const ResidueRing& R, const MatrixZ& X,
                           const std::vector<VectorZ>& sources,
                           const std::vector<VectorZ>& targets) {
  int best = R.precision();
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const VectorZ d = sub(R, mul(R, X, reduce(R, sources[i])), reduce(R, targets[i]));
    for (const auto& x : d) best = std::min(best, R.valuation(x));
  }
  return best;
}

}  // namespace orthokit
