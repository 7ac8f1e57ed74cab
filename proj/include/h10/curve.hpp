#pragma once

// Weierstrass curves over Q: invariants, reduction mod p, point counts,
// quadratic twists, the 2-division field, and the chord-tangent group law
// over Q, quadratic fields and Q_p.

#include <map>
#include <optional>
#include <string>

#include "h10/arith.hpp"
#include "h10/error.hpp"
#include "h10/quadratic.hpp"

namespace h10 {

/// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with integer coefficients.
struct Weierstrass {
  Int a1, a2, a3, a4, a6;

  Int b2() const { return a1 * a1 + 4 * a2; }
  Int b4() const { return 2 * a4 + a1 * a3; }
  Int b6() const { return a3 * a3 + 4 * a6; }
  Int b8() const {
    return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
  }
  Int c4() const { return b2() * b2() - 24 * b4(); }
  Int c6() const { return -b2() * b2() * b2() + 36 * b2() * b4() - 216 * b6(); }
  /// May be zero; see discriminant() for the checked version.
  Int raw_discriminant() const {
    Int B2 = b2(), B4 = b4(), B6 = b6(), B8 = b8();
    return -B2 * B2 * B8 - 8 * B4 * B4 * B4 - 27 * B6 * B6 + 9 * B2 * B4 * B6;
  }

  friend bool operator==(const Weierstrass&, const Weierstrass&) = default;
};

/// A curve plus the arithmetic metadata that is read from databases rather
/// than computed here. Metadata is validated for consistency by the loader.
struct CurveRecord : Weierstrass {
  std::string label;
  std::optional<Int> conductor;  // absent on derived models such as twists
  long manin_constant = 1;
  long torsion_order = 1;
  long rank_Q = 0;
  std::map<long, bool> mod_ell_surjective;
  std::map<long, bool> sha_ell_trivial;
  std::map<long, long> tamagawa;
  std::optional<Rational> L_ratio;
  std::map<long, Rational> twist_L_ratios;
  /// Tam(E/Q(mu_ell)) keyed by ell.
  std::map<long, long> cyclotomic_tamagawa;
  /// Cached traces of Frobenius, checked against fresh point counts on load.
  std::map<long, long> cached_ap;

  CurveRecord() = default;
  CurveRecord(std::string name, Weierstrass eq) : Weierstrass(std::move(eq)), label(std::move(name)) {}
};

/// Throws ZeroDiscriminant for singular input.
Int discriminant(const Weierstrass& curve);

/// True iff p divides the conductor (when known) or else the discriminant.
bool is_bad_prime(const CurveRecord& curve, long p);

/// #E~(F_p) including the point at infinity. Legendre-symbol sum for odd p,
/// enumeration for p = 2. Throws BadReduction if p | disc.
long count_points(const Weierstrass& curve, long p);
/// Independent O(p^2) enumeration of all affine (x, y).
long count_points_exhaustive(const Weierstrass& curve, long p);
/// Nonsingular points of the reduction mod p, including infinity; valid at any p.
long count_nonsingular_points(const Weierstrass& curve, long p);

/// a_p = p + 1 - #E~(F_p).
long trace_frobenius(const Weierstrass& curve, long p);

/// A model of E^d. For a1 = a3 = 0 this is (d a2, d^2 a4, d^3 a6); otherwise
/// the twist of Y^2 = X^3 + b2 X^2 + 8 b4 X + 16 b6. d = 1 returns the input.
/// Ingested metadata does not transfer to the twist.
CurveRecord quadratic_twist(const CurveRecord& curve, const Int& d);

enum class TwoDivisionCase { RationalTwoTorsion, Cyclic3, S3 };

const char* to_string(TwoDivisionCase c) noexcept;

struct TwoDivision {
  TwoDivisionCase kind;
  /// Squarefree kernel of the discriminant of 4x^3 + b2 x^2 + 2 b4 x + b6.
  Int kernel;
};

TwoDivision classify_two_division(const Weierstrass& curve);

// ---------------------------------------------------------------------------
// Group law

template <class F>
struct ECPoint {
  F x;
  F y;
  bool infinity = false;

  static ECPoint at_infinity(const F& like) { return {like, like, true}; }
};

inline Rational field_const(const Rational&, const Int& c) { return Rational(c); }
inline QuadElem field_const(const QuadElem& like, const Int& c) { return like.with_value(Rational(c)); }

inline bool field_is_zero(const Rational& a) { return a == 0; }
inline bool field_is_zero(const QuadElem& a) { return a.is_zero(); }

inline void require_same_field(const Rational&, const Rational&) {}
inline void require_same_field(const QuadElem& a, const QuadElem& b) {
  if (a.D() != b.D()) {
    throw Error(Errc::FieldMismatch, "points over Q(sqrt(" + std::to_string(a.D()) + ")) and Q(sqrt(" +
                                         std::to_string(b.D()) + "))");
  }
}

template <class F>
F weierstrass_residual(const Weierstrass& E, const F& x, const F& y) {
  auto c = [&](const Int& v) { return field_const(x, v); };
  return y * y + c(E.a1) * x * y + c(E.a3) * y - (x * x * x + c(E.a2) * x * x + c(E.a4) * x + c(E.a6));
}

template <class F>
bool on_curve(const Weierstrass& E, const ECPoint<F>& P) {
  return P.infinity || field_is_zero(weierstrass_residual(E, P.x, P.y));
}

template <class F>
ECPoint<F> negate(const Weierstrass& E, const ECPoint<F>& P) {
  if (P.infinity) return P;
  return {P.x, -P.y - field_const(P.x, E.a1) * P.x - field_const(P.x, E.a3), false};
}

template <class F>
ECPoint<F> add_points(const Weierstrass& E, const ECPoint<F>& P, const ECPoint<F>& Q) {
  if (!P.infinity && !Q.infinity) require_same_field(P.x, Q.x);
  if (P.infinity) return Q;
  if (Q.infinity) return P;
  auto c = [&](const Int& v) { return field_const(P.x, v); };
  F lambda = P.x, nu = P.x;
  if (field_is_zero(P.x - Q.x)) {
    F denom = P.y + Q.y + c(E.a1) * Q.x + c(E.a3);
    if (field_is_zero(denom)) return ECPoint<F>::at_infinity(P.x);
    // Q = P here, so denom = 2y + a1 x + a3.
    lambda = (c(3) * P.x * P.x + c(2) * c(E.a2) * P.x + c(E.a4) - c(E.a1) * P.y) / denom;
    nu = (-P.x * P.x * P.x + c(E.a4) * P.x + c(2) * c(E.a6) - c(E.a3) * P.y) / denom;
  } else {
    F dx = Q.x - P.x;
    lambda = (Q.y - P.y) / dx;
    nu = (P.y * Q.x - Q.y * P.x) / dx;
  }
  F x3 = lambda * lambda + c(E.a1) * lambda - c(E.a2) - P.x - Q.x;
  F y3 = -(lambda + c(E.a1)) * x3 - nu - c(E.a3);
  return {x3, y3, false};
}

template <class F>
ECPoint<F> multiply(const Weierstrass& E, long k, const ECPoint<F>& P) {
  ECPoint<F> base = k < 0 ? negate(E, P) : P;
  unsigned long n = static_cast<unsigned long>(k < 0 ? -k : k);
  ECPoint<F> acc = ECPoint<F>::at_infinity(P.x);
  while (n > 0) {
    if (n & 1UL) acc = add_points(E, acc, base);
    n >>= 1;
    if (n > 0) base = add_points(E, base, base);
  }
  return acc;
}

}  // namespace h10
