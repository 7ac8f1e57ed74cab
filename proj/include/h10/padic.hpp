#pragma once

// Fixed-precision p-adic numbers, square roots by Hensel lifting, embeddings
// of quadratic fields into Q_p, the invariant differential of a Weierstrass
// curve as a power series in t = -x/y, and its formal integral.

#include <climits>
#include <optional>
#include <string>
#include <vector>

#include "h10/curve.hpp"

namespace h10 {

inline constexpr long kDefaultPadicPrecision = 64;
inline constexpr long kInfinitePrecision = LONG_MAX / 4;
/// Integer constants entering p-adic formulas carry this many digits beyond
/// the operand they meet, so they never limit the result.
inline constexpr long kConstantSlack = 256;

/// x = p^v * u + O(p^prec) with u a unit known mod p^(prec - v).
///
/// Three states: exact zero (infinite precision), certified nonzero
/// (v < prec), and indistinguishable from zero (O(p^prec)). Precision is
/// absolute and tracked through arithmetic; dividing by something that is
/// not certified nonzero throws PrecisionExhausted.
class PadicNum {
 public:
  PadicNum() = default;  // exact zero in Q_2

  static PadicNum exact_zero(long p);
  /// O(p^prec).
  static PadicNum zero_to(long p, long prec);
  /// r + O(p^prec). Exact zero if r = 0.
  static PadicNum from_rational(const Rational& r, long p, long prec);

  long p() const noexcept { return p_; }
  /// kInfinitePrecision for an exact zero.
  long precision() const noexcept { return exact_ ? kInfinitePrecision : prec_; }
  bool is_exact_zero() const noexcept { return exact_; }
  bool is_certified_nonzero() const noexcept { return !exact_ && val_ < prec_; }
  /// Either an exact zero or O(p^prec).
  bool is_zero_to_precision() const noexcept { return !is_certified_nonzero(); }

  /// Exact valuation; LONG_MAX for an exact zero. Throws PrecisionExhausted
  /// when the value cannot be separated from zero.
  long valuation() const;
  /// Unit part, determined mod p^(precision - valuation).
  const Int& unit() const noexcept { return unit_; }

  /// Rational representative p^v * u.
  Rational to_rational() const;
  /// Drop digits beyond p^prec (never raises precision).
  PadicNum with_precision(long prec) const;
  /// Difference is indistinguishable from zero.
  bool agrees_with(const PadicNum& o) const;

  PadicNum operator-() const;
  friend PadicNum operator+(const PadicNum& a, const PadicNum& b);
  friend PadicNum operator-(const PadicNum& a, const PadicNum& b) { return a + (-b); }
  friend PadicNum operator*(const PadicNum& a, const PadicNum& b);
  friend PadicNum operator/(const PadicNum& a, const PadicNum& b);
  PadicNum& operator+=(const PadicNum& o) { return *this = *this + o; }
  PadicNum& operator-=(const PadicNum& o) { return *this = *this - o; }
  PadicNum& operator*=(const PadicNum& o) { return *this = *this * o; }
  PadicNum& operator/=(const PadicNum& o) { return *this = *this / o; }
  PadicNum pow(unsigned long e) const;

  std::string str() const;

 private:
  long p_ = 2;
  bool exact_ = true;
  long val_ = 0;
  long prec_ = 0;
  Int unit_ = 0;

  static PadicNum normalized(long p, const Int& scaled, long shift, long prec);
};

inline PadicNum field_const(const PadicNum& like, const Int& c) {
  long prec = like.is_exact_zero() ? kDefaultPadicPrecision + kConstantSlack : like.precision() + kConstantSlack;
  return PadicNum::from_rational(Rational(c), like.p(), prec);
}
inline bool field_is_zero(const PadicNum& a) { return a.is_zero_to_precision(); }
void require_same_field(const PadicNum& a, const PadicNum& b);

/// r with r^2 = D + O(p^precision). For p = 2 needs D = 1 mod 8 and returns
/// the root = 1 mod 4; for odd p needs D a nonzero square mod p and lifts the
/// least nonnegative root mod p. Throws NotSplit otherwise.
PadicNum hensel_sqrt(const Int& D, long p, long precision);

/// An embedding Q(sqrt(D)) -> Q_p, sqrt(D) |-> root.
struct EmbeddingChoice {
  long D = 0;
  long p = 2;
  PadicNum root;

  /// The canonical root of hensel_sqrt, or its negative.
  static EmbeddingChoice make(long D, long p, long precision = kDefaultPadicPrecision, bool other_branch = false);
  EmbeddingChoice conjugate() const { return {D, p, -root}; }
};

/// u + v * root. Denominators divisible by p are allowed and simply give
/// negative valuations. Throws FieldMismatch if the fields differ and
/// PrecisionExhausted if a nonzero element lands on O(p^prec).
PadicNum embed(const QuadElem& elem, const EmbeddingChoice& emb);
PadicNum embed(const Rational& r, long p, long precision);

struct FormalSeries {
  long p = 0;  // 0: integral at every prime
  std::vector<Int> coeffs;

  std::size_t size() const noexcept { return coeffs.size(); }
};

/// First n coefficients of omega = dx/(2y + a1 x + a3) in t = -x/y.
FormalSeries formal_differential(const Weierstrass& curve, long n);

/// w(t) = -1/y as t^3 (1 + ...), first n coefficients of w/t^3.
std::vector<Int> formal_w(const Weierstrass& curve, long n);

/// The point with parameter t, v_p(t) >= 1, from n terms of w (the error is
/// O(p^(n v(t))) relative). Throws NoFormalNeighborhood if v(t) < 1.
ECPoint<PadicNum> formal_point(const Weierstrass& curve, const PadicNum& t, long terms);

struct FormalLog {
  long m = 1;             // multiplier landing the point in the formal group
  bool torsion = false;   // m * P = 0
  PadicNum t;             // t(m P)
  long truncation_bound = 0;  // min over r > n of r v(t) - floor(log_p r)
  std::vector<PadicNum> partial_sums;  // S_1 .. S_n for m P
  PadicNum log;           // (1/m) S_n, precision clamped to the bound
};

FormalLog formal_log(const Weierstrass& curve, const ECPoint<Rational>& P, long p, long n,
                     long precision = kDefaultPadicPrecision);
FormalLog formal_log(const Weierstrass& curve, const ECPoint<QuadElem>& P, const EmbeddingChoice& emb, long n);
FormalLog formal_log(const Weierstrass& curve, const ECPoint<PadicNum>& P, long n);

/// Search ceiling for the multiplier m.
inline constexpr long kMaxFormalMultiplier = 64;

/// S_n = sum_{r=1}^{n} b_{r-1} a^r / r.
PadicNum partial_integral(const FormalSeries& series, const PadicNum& a, long n);

/// m = v_p(S_n), returned only when m < n - log n / log p (tested exactly as
/// p^(n - m) > n), in which case m is the valuation of the full integral.
std::optional<long> certified_valuation(const FormalSeries& series, const PadicNum& a, long n);

inline constexpr long kDefaultKLCeiling = 12;

struct HeegnerFixture {
  std::string curve_label;
  long K_disc = 0;
  ECPoint<QuadElem> point{QuadElem(-1, 0), QuadElem(-1, 0), false};
  std::string provenance;
};

struct KLReport {
  long ns_count = 0;            // #E~_2^ns(F_2)
  long manin_constant = 1;
  long m = 1;
  long v_t = 0;
  long n_used = 0;              // first n that certified
  long v_log = 0;
  long quantity_valuation = 0;  // v2(ns_count) - v2(2 c) + v2(log)
  bool integral = false;        // quantity_valuation >= 0
  bool unit = false;            // quantity_valuation == 0
};

/// The 2-adic unit test on #E~_2^ns(F_2) / (2 c) * log(P). Throws BadFixture
/// if the point is off the curve, PreconditionFailed if E(Q)[2] != 0 or the
/// Heegner hypothesis for 2N fails, Inconclusive if no n <= ceiling certifies.
KLReport check_kl(const CurveRecord& curve, long K_disc, const HeegnerFixture& fixture, const EmbeddingChoice& emb,
                  long ceiling = kDefaultKLCeiling);
bool check_kl_unit(const CurveRecord& curve, long K_disc, const HeegnerFixture& fixture, const EmbeddingChoice& emb,
                   long ceiling = kDefaultKLCeiling);

}  // namespace h10
