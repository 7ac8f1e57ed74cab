#pragma once

// Membership tests and enumeration for the rank-zero prime sets P(E, ell)
// and the odd-trace split prime sets Q(E, K), Q+(E, K), Q-(E, K).

#include <string>
#include <vector>

#include "h10/curve.hpp"

namespace h10 {

/// Kronecker symbol (a/n). (a/0) is 1 for a = +-1 and 0 otherwise.
int kronecker_symbol(long long a, long long n);

/// Discriminant of Q(sqrt(d)) for squarefree d: d if d = 1 mod 4, else 4d.
long long field_discriminant(long long d);

/// q splits in Q(sqrt(K_disc)): kronecker(field discriminant, q) = 1.
bool splits_in(long long K_disc, long long q);

enum class SieveKind { P_set, Q_set, Q_plus, Q_minus };

const char* to_string(SieveKind k) noexcept;
/// Accepts "P", "Q", "Q+", "Q-".
SieveKind parse_sieve_kind(const std::string& s);

struct SieveSpec {
  SieveKind kind = SieveKind::P_set;
  CurveRecord curve;
  long ell = 3;       // P_set
  long K_disc = -7;   // Q kinds

  static SieveSpec P(CurveRecord curve, long ell);
  static SieveSpec Q(SieveKind kind, CurveRecord curve, long K_disc);

  /// Throws InvalidArgument on a bad ell or K_disc.
  void validate() const;
};

bool in_P(const CurveRecord& curve, long ell, long p);
bool in_Q(const CurveRecord& curve, long K_disc, long q);
bool in_Q_plus(const CurveRecord& curve, long K_disc, long q);
bool in_Q_minus(const CurveRecord& curve, long K_disc, long q);
bool in_sieve(const SieveSpec& spec, long p);

/// Human-readable reason p is not in the set, or empty if it is.
std::string sieve_rejection(const SieveSpec& spec, long p);

struct SieveReport {
  SieveSpec spec;
  long bound = 0;
  std::vector<long> members;
  Rational empirical_density;
  Rational theoretical_density;
};

Rational theoretical_density(const SieveSpec& spec);

/// All members p <= bound (bound >= 100). Prime ranges are scanned in
/// parallel on `workers` threads (0 = hardware concurrency).
SieveReport enumerate_sieve(const SieveSpec& spec, long bound, unsigned workers = 0);

/// a > 1, a is ell-power free, and every prime factor of a is in the set.
bool check_support(const Int& a, const SieveSpec& spec, long ell);

/// Every prime dividing M splits in Q(sqrt(K_disc)).
bool heegner_hypothesis(long K_disc, const Int& M);

}  // namespace h10
