#pragma once

// Deduction rules for rank statements: the rank-zero checklist for pure
// cubic (ell-th root) extensions, the valuation ledger, the lambda transfer
// formula, the 3-adic L-value product rule, the rank-one twist rule with the
// root-number flip, and the combination step.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "h10/curve.hpp"
#include "h10/sieves.hpp"

namespace h10 {

/// A recomputable claim: predicate(args...) == value.
struct Fact {
  std::string predicate;
  std::vector<std::string> args;
  std::string value;

  friend bool operator==(const Fact&, const Fact&) = default;
};

std::string to_string(const Fact& f);

/// A derived statement with everything needed to re-check it.
struct Conclusion {
  std::string statement;
  /// Structured form of the statement, e.g. {"field": "cubic", "param": "19", "rank": "0"}.
  std::map<std::string, std::string> data;
  std::vector<Fact> premises;
  std::vector<Conclusion> sub;         // conclusions this one rests on
  std::vector<std::string> citations;  // external theorems used as axioms
};

/// Canonical statement strings, shared with the certificate verifier.
std::string radical_field(const Int& a, long ell);          // "Q(19^(1/3))"
std::string quadratic_field(const Int& d);                  // "Q(sqrt(-43))"
std::string compositum_field(const Int& a, long ell, const Int& d);  // "Q(19^(1/3), sqrt(-43))"
std::string rank_statement(const std::string& label, const std::string& field, long rank);

enum class EvidenceSource { Computed, Metadata, Ledger };

const char* to_string(EvidenceSource s) noexcept;

struct Evidence {
  EvidenceSource source = EvidenceSource::Computed;
  std::string operation;
  std::vector<Fact> facts;
};

struct ChecklistItem {
  bool holds = false;
  std::optional<Evidence> evidence;

  bool certified() const { return holds && evidence.has_value(); }
};

/// Cyclotomic Iwasawa valuation data for E over k = Q(mu_ell).
struct ValuationLedger {
  long ell = 3;
  Int tamagawa_product = 1;
  Int sha_order = 1;
  Int torsion_order = 1;
  std::vector<Int> local_counts;  // #E~_v(F_v) for v | ell

  /// v(Tam * Sha) - 2 v(torsion).
  long bsd_valuation() const;
  /// bsd_valuation + 2 sum v(local counts).
  long varpi_valuation() const;
  /// Throws InvalidArgument unless every entry is a positive integer.
  void validate() const;
};

bool varpi_is_unit(const ValuationLedger& ledger);

/// v_3(L(E,1)/Omega * L(E^-3,1)/Omega') equals ledger.bsd_valuation().
/// Throws ZeroLValue if either ratio vanishes.
bool bsd3_product(const Rational& L_ratio, const Rational& twist_L_ratio, const ValuationLedger& ledger);

struct LambdaTransfer {
  long degree = 1;  // [k'_inf : k_inf], a power of ell
  long ell = 3;
  long lambda_base = 0;
  std::vector<long> p1_ram_indices;
  std::vector<long> p2_ram_indices;
};

/// degree * lambda + sum_{P1} (e - 1) + 2 sum_{P2} (e - 1).
long lambda_after_base_change(const LambdaTransfer& x);

/// ell does not divide N and a_ell != 0 mod ell.
bool good_ordinary(const CurveRecord& curve, long ell);

/// The valuation ledger of E over Q(mu_ell) assembled from metadata and point
/// counts. Only ell = 3 is supported (Q(mu_3) = Q(sqrt(-3)), one place over 3).
ValuationLedger cyclotomic_ledger(const CurveRecord& curve, long ell);

struct RankZeroChecklist {
  CurveRecord curve;
  long ell = 3;
  ChecklistItem ordinary;         // good ordinary reduction at ell
  ChecklistItem surjective;       // mod ell representation surjective
  ChecklistItem rank_cyclo_zero;  // rank E(Q(mu_ell)) = 0
  ChecklistItem sha_trivial;      // Sha(E/Q(mu_ell))[ell] = 0
  ChecklistItem tamagawa_unit;    // ell does not divide Tam(E/Q(mu_ell)) #E~_ell(F_ell)

  bool certified() const;
  /// Name of the first item lacking a certificate, or empty.
  std::string first_gap() const;
};

RankZeroChecklist build_rank_zero_checklist(const CurveRecord& curve, long ell);

/// rank E(Q(a^(1/ell))) = 0. Throws IncompleteChecklist or UnsupportedTwist.
Conclusion certify_rank_zero_cubic(const CurveRecord& curve, long ell, const Int& a, const RankZeroChecklist& checklist);

/// Quadratic character of Q(sqrt(d)) at n (Kronecker symbol of the field discriminant).
int psi_d(long long d, long long n);

/// rank E^d(Q) and rank E(Q(sqrt(d))) from the unit condition and the sign rule.
/// Throws PreconditionFailed naming the first violated hypothesis.
Conclusion kl_rank_one(const CurveRecord& curve, long K_disc, const Int& d, bool kl_certified);

/// Combines rank E(F) = 0 for F = Q(p^(1/3)) with rank E(L) > 0 for
/// L = Q(sqrt(-q)) into "K/F is integrally Diophantine", K = F L.
Conclusion integrally_diophantine_step(const Conclusion& rank_zero, const Conclusion& rank_positive);

/// Advisory evidence for mod-3 surjectivity from Frobenius data at primes up
/// to `bound`. The metadata flag stays authoritative.
struct SurjectivityEvidence {
  bool not_in_borel = false;        // some x^2 - a_p x + p irreducible mod 3
  long borel_witness = 0;
  bool not_in_2sylow = false;       // some psi_3 with root pattern 1 + 3
  long sylow_witness = 0;
  bool consistent_with_surjective() const { return not_in_borel && not_in_2sylow; }
};

SurjectivityEvidence mod3_surjectivity_heuristic(const CurveRecord& curve, long bound = 10000);

}  // namespace h10
