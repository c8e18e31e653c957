#pragma once

#include <cstdint>
#include <random>

#include "orthokit/borovoi/frame.hpp"

namespace orthokit {

// Deterministic test input: word_length generators drawn from reflection
// pairs, reflection pairs inside a^perp and hyperbolic rotations, followed by
// one hyperbolic rotation that cancels the accumulated spinor norm.
inline MatrixQ random_spinor_kernel_element(const StandardFrame& fr, std::uint64_t seed,
                                            int word_length) {
  if (word_length < 0) throw PreconditionError("word length must be nonnegative");
  const RationalField Q;
  const auto& f = fr.form();
  const std::size_t n = fr.dim();
  std::mt19937_64 rng(seed);
  auto coord = [&] { return static_cast<long>(rng() % 5) - 2; };
  auto anisotropic = [&](bool inside_a_perp) {
    while (true) {
      VectorQ c(n);
      for (auto& x : c) x = coord();
      if (inside_a_perp) c[n - 1] = 0;
      if (evaluate(f, c) != 0) return c;
    }
  };
  MatrixQ m = identity(Q, n);
  Rational theta = 1;
  for (int i = 0; i < word_length; ++i) {
    const auto kind = rng() % 3;
    if (kind == 2) {
      const Rational lambda = static_cast<long>(rng() % 4) + 1;
      m = mul(Q, m, hyperbolic_rotation(f, lambda));
      theta *= lambda;
      continue;
    }
    const VectorQ c = anisotropic(kind == 1), d = anisotropic(kind == 1);
    m = mul(Q, m, mul(Q, reflection(f, c), reflection(f, d)));
    theta *= evaluate(f, c) * evaluate(f, d);
  }
  if (!is_square(theta)) m = mul(Q, m, hyperbolic_rotation(f, 1 / theta));
  return m;
}

}  // namespace orthokit
