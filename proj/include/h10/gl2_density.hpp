#pragma once

// Conjugacy counting in GL2(F_ell) by brute force, closed-form densities of
// the rank-zero prime sets, and the splitting densities of the odd-trace sets.

#include <optional>
#include <vector>

#include "h10/arith.hpp"
#include "h10/curve.hpp"

namespace h10 {

/// Largest ell accepted by the enumerators (ell^4 matrices are visited).
inline constexpr long kMaxEnumeratedEll = 13;

struct GL2Census {
  long ell = 0;
  long gl2_order = 0;
  long sl2_order = 0;
  /// sl2_by_trace[t] = #{g in SL2(F_ell) : tr g = t}.
  std::vector<long> sl2_by_trace;
  long det1_trace_not2 = 0;
};

/// Visits all ell^4 matrices. Throws InvalidArgument unless ell is a prime <= 13.
GL2Census gl2_census(long ell);

/// #{g in SL2(F_ell) : tr g = trace mod ell}, by enumeration.
long sl2_trace_count(long ell, long trace);

struct DensityReport {
  long ell = 0;
  Int set_size;
  Int group_size;
  Rational density;
};

/// (ell^2 - ell - 1) / ((ell - 1)(ell^2 - 1)) for prime ell > 2.
Rational density_P(long ell);
/// Closed-form set and group sizes: ell(ell^2 - ell - 1) and (ell^2 - 1)(ell^2 - ell).
DensityReport density_P_report(long ell);
/// Same report from gl2_census.
DensityReport density_P_enumerated(long ell);

enum class QCase { Cyclic3, S3Disjoint, S3ContainsI, RationalTwoTorsion };

const char* to_string(QCase c) noexcept;

struct QDensities {
  Rational all;    // Q(E, K)
  Rational plus;   // q = 1 mod 4
  Rational minus;  // q = 3 mod 4

  friend bool operator==(const QDensities&, const QDensities&) = default;
};

/// The three tabulated cases plus the trivial one.
QDensities lemma_primes_density(QCase c);

/// Which tabulated case (E, K) falls into; nullopt when K = Q(i) or K is the
/// quadratic subfield of Q(E[2]), which the table does not cover.
std::optional<QCase> lemma_case(const TwoDivision& two, long K_disc);

/// Densities from the Galois structure directly: a_q odd means Frob_q is a
/// 3-cycle on E[2], independent of every quadratic character, so each density
/// is 2/3 times the probability that the characters of Q(E[2])'s quadratic
/// subfield, of K and of Q(i) take the required values.
QDensities q_densities(const TwoDivision& two, long K_disc);

}  // namespace h10
