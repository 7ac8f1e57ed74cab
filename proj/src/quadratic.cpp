#include "h10/quadratic.hpp"

#include "h10/error.hpp"

namespace h10 {

QuadElem::QuadElem(long D, Rational u, Rational v) : D_(D), u_(std::move(u)), v_(std::move(v)) {
  if (D == 0 || D == 1 || !is_squarefree(Int(D))) {
    throw Error(Errc::InvalidArgument, "quadratic field parameter must be squarefree and not 0 or 1, got " +
                                           std::to_string(D));
  }
  u_.canonicalize();
  v_.canonicalize();
}

void QuadElem::require_same_field(const QuadElem& o) const {
  if (D_ != o.D_) {
    throw Error(Errc::FieldMismatch,
                "Q(sqrt(" + std::to_string(D_) + ")) vs Q(sqrt(" + std::to_string(o.D_) + "))");
  }
}

QuadElem QuadElem::inverse() const {
  Rational n = norm();
  if (n == 0) throw Error(Errc::InvalidArgument, "inverse of zero in Q(sqrt(" + std::to_string(D_) + "))");
  return {Unchecked{}, D_, u_ / n, -v_ / n};
}

QuadElem& QuadElem::operator+=(const QuadElem& o) {
  require_same_field(o);
  u_ += o.u_;
  v_ += o.v_;
  return *this;
}

QuadElem& QuadElem::operator-=(const QuadElem& o) {
  require_same_field(o);
  u_ -= o.u_;
  v_ -= o.v_;
  return *this;
}

QuadElem& QuadElem::operator*=(const QuadElem& o) {
  require_same_field(o);
  Rational u = u_ * o.u_ + D_ * v_ * o.v_;
  Rational v = u_ * o.v_ + v_ * o.u_;
  u_ = std::move(u);
  v_ = std::move(v);
  return *this;
}

QuadElem& QuadElem::operator/=(const QuadElem& o) {
  require_same_field(o);
  return *this *= o.inverse();
}

bool operator==(const QuadElem& a, const QuadElem& b) {
  a.require_same_field(b);
  return a.u_ == b.u_ && a.v_ == b.v_;
}

std::string QuadElem::str() const {
  return format_rational(u_) + " + " + format_rational(v_) + "*sqrt(" + std::to_string(D_) + ")";
}

}  // namespace h10
