#pragma once

#include <string>

#include "h10/arith.hpp"

namespace h10 {

/// Exact element u + v*sqrt(D) of Q(sqrt(D)), D squarefree and not 0 or 1.
///
/// Mixing elements of different fields raises FieldMismatch.
class QuadElem {
 public:
  QuadElem(long D, Rational u, Rational v = 0);

  long D() const noexcept { return D_; }
  const Rational& u() const noexcept { return u_; }
  const Rational& v() const noexcept { return v_; }

  bool is_zero() const { return u_ == 0 && v_ == 0; }
  bool is_rational() const { return v_ == 0; }

  QuadElem conjugate() const { return {Unchecked{}, D_, u_, -v_}; }
  Rational norm() const { return u_ * u_ - D_ * v_ * v_; }
  Rational trace() const { return 2 * u_; }
  QuadElem inverse() const;

  QuadElem operator-() const { return {Unchecked{}, D_, -u_, -v_}; }
  QuadElem& operator+=(const QuadElem& o);
  QuadElem& operator-=(const QuadElem& o);
  QuadElem& operator*=(const QuadElem& o);
  QuadElem& operator/=(const QuadElem& o);

  friend QuadElem operator+(QuadElem a, const QuadElem& b) { return a += b; }
  friend QuadElem operator-(QuadElem a, const QuadElem& b) { return a -= b; }
  friend QuadElem operator*(QuadElem a, const QuadElem& b) { return a *= b; }
  friend QuadElem operator/(QuadElem a, const QuadElem& b) { return a /= b; }
  friend bool operator==(const QuadElem& a, const QuadElem& b);

  std::string str() const;

  /// Same field as this element, value r.
  QuadElem with_value(Rational r) const { return {Unchecked{}, D_, std::move(r), 0}; }

 private:
  struct Unchecked {};
  QuadElem(Unchecked, long D, Rational u, Rational v) : D_(D), u_(std::move(u)), v_(std::move(v)) {}

  void require_same_field(const QuadElem& o) const;

  long D_;
  Rational u_;
  Rational v_;
};

}  // namespace h10
