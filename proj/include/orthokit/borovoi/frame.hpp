#pragma once

#include <string>
#include <vector>

#include "orthokit/quad.hpp"

namespace orthokit {

// The standard form with a = e_n and b = e_(n-1).
class StandardFrame {
 public:
  explicit StandardFrame(QuadraticForm f) : form_(std::move(f)) {
    require_standard(form_);
    if (form_.dim() < 5) throw DimensionError("frame needs n >= 5");
  }

  const QuadraticForm& form() const { return form_; }
  std::size_t dim() const { return form_.dim(); }
  VectorQ a() const { return frame_a(form_); }
  VectorQ b() const { return frame_b(form_); }

 private:
  QuadraticForm form_;
};

struct ZPoint {
  MatrixQ g;
  VectorQ s;
  VectorQ t;
};

inline bool is_in_X(const StandardFrame& fr, const VectorQ& s) {
  if (s.size() != fr.dim()) throw DimensionError("vector dimension mismatch");
  return evaluate(fr.form(), s) == evaluate(fr.form(), fr.a());
}

inline bool is_in_Y(const StandardFrame& fr, const MatrixQ& g, const VectorQ& s) {
  if (g.rows() != fr.dim() || !g.is_square()) throw DimensionError("matrix dimension mismatch");
  const RationalField Q;
  return is_in_X(fr, s) && bilinear(fr.form(), s, mul(Q, g, fr.b())) == 0;
}

inline bool is_in_Z(const StandardFrame& fr, const MatrixQ& g, const VectorQ& s,
                    const VectorQ& t) {
  if (t.size() != fr.dim()) throw DimensionError("vector dimension mismatch");
  const auto& f = fr.form();
  return is_in_Y(fr, g, s) && bilinear(f, t, fr.a()) == 0 &&
         evaluate(f, t) == evaluate(f, fr.b()) && bilinear(f, s, t) == 0;
}

inline bool is_in_Z(const StandardFrame& fr, const ZPoint& z) {
  return is_in_Z(fr, z.g, z.s, z.t);
}

inline bool fixes(const MatrixQ& m, const VectorQ& v) {
  return equal(RationalField{}, mul(RationalField{}, m, v), v);
}

// Elements of O'(f) fixing a and b.
inline bool in_stabilizer(const StandardFrame& fr, const MatrixQ& h) {
  return h.rows() == fr.dim() && h.is_square() && fixes(h, fr.a()) && fixes(h, fr.b()) &&
         in_spinor_kernel(fr.form(), h);
}

}  // namespace orthokit
