#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "orthokit/exact.hpp"

namespace orthokit::testing {

// Small deterministic helpers; every suite seeds its own engine.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  long uniform(long lo, long hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<long>(engine_() % span);
  }
  long nonzero(long lo, long hi) {
    long v = 0;
    while (v == 0) v = uniform(lo, hi);
    return v;
  }
  Rational rational(long height) {
    return make_rational(uniform(-height, height), nonzero(1, height));
  }
  Rational nonzero_rational(long height) {
    Rational r = 0;
    while (r == 0) r = rational(height);
    return r;
  }
  VectorQ vector(std::size_t n, long height) {
    VectorQ v(n);
    for (auto& x : v) x = uniform(-height, height);
    return v;
  }
  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace orthokit::testing
