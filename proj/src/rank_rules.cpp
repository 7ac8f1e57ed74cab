#include "h10/rank_rules.hpp"

#include <algorithm>
#include <numeric>

namespace h10 {

std::string to_string(const Fact& f) {
  std::string s = f.predicate + "(";
  for (std::size_t i = 0; i < f.args.size(); ++i) s += (i ? ", " : "") + f.args[i];
  return s + ") = " + f.value;
}

std::string radical_field(const Int& a, long ell) {
  return "Q(" + to_string(a) + "^(1/" + std::to_string(ell) + "))";
}
std::string quadratic_field(const Int& d) { return "Q(sqrt(" + to_string(d) + "))"; }
std::string compositum_field(const Int& a, long ell, const Int& d) {
  return "Q(" + to_string(a) + "^(1/" + std::to_string(ell) + "), sqrt(" + to_string(d) + "))";
}
std::string rank_statement(const std::string& label, const std::string& field, long rank) {
  return "rank " + label + "(" + field + ") = " + std::to_string(rank);
}

const char* to_string(EvidenceSource s) noexcept {
  switch (s) {
    case EvidenceSource::Computed: return "computed";
    case EvidenceSource::Metadata: return "metadata";
    case EvidenceSource::Ledger: return "ledger";
  }
  return "?";
}

// ---------------------------------------------------------------------------

void ValuationLedger::validate() const {
  auto positive = [](const Int& x) { return x > 0; };
  if (ell < 2 || !is_prime(static_cast<long long>(ell))) throw Error(Errc::InvalidArgument, "ledger ell must be prime");
  if (!positive(tamagawa_product) || !positive(sha_order) || !positive(torsion_order) ||
      !std::all_of(local_counts.begin(), local_counts.end(), positive)) {
    throw Error(Errc::InvalidArgument, "ledger entries must be positive integers");
  }
}

long ValuationLedger::bsd_valuation() const {
  validate();
  return valuation(tamagawa_product, ell) + valuation(sha_order, ell) - 2 * valuation(torsion_order, ell);
}

long ValuationLedger::varpi_valuation() const {
  long v = bsd_valuation();
  for (const Int& c : local_counts) v += 2 * valuation(c, ell);
  return v;
}

bool varpi_is_unit(const ValuationLedger& ledger) { return ledger.varpi_valuation() == 0; }

bool bsd3_product(const Rational& L_ratio, const Rational& twist_L_ratio, const ValuationLedger& ledger) {
  if (L_ratio == 0 || twist_L_ratio == 0) throw Error(Errc::ZeroLValue, "an L-ratio vanishes; the rule does not apply");
  if (ledger.ell != 3) throw Error(Errc::InvalidArgument, "the product rule is 3-adic");
  return valuation(Rational(L_ratio * twist_L_ratio), 3) == ledger.bsd_valuation();
}

long lambda_after_base_change(const LambdaTransfer& x) {
  if (x.lambda_base < 0) throw Error(Errc::InvalidArgument, "lambda must be non-negative");
  if (x.ell < 2 || !is_prime(static_cast<long long>(x.ell))) throw Error(Errc::InvalidArgument, "ell must be prime");
  long d = x.degree;
  while (d > 1 && d % x.ell == 0) d /= x.ell;
  if (x.degree < 1 || d != 1) {
    throw Error(Errc::InvalidArgument, "degree " + std::to_string(x.degree) + " is not a power of " + std::to_string(x.ell));
  }
  auto excess = [](const std::vector<long>& es) {
    long s = 0;
    for (long e : es) {
      if (e < 1) throw Error(Errc::InvalidArgument, "ramification index must be >= 1");
      s += e - 1;
    }
    return s;
  };
  return x.degree * x.lambda_base + excess(x.p1_ram_indices) + 2 * excess(x.p2_ram_indices);
}

bool good_ordinary(const CurveRecord& curve, long ell) {
  if (is_bad_prime(curve, ell)) return false;
  return mod(trace_frobenius(curve, ell), ell) != 0;
}

// ---------------------------------------------------------------------------

namespace {

std::string str(long v) { return std::to_string(v); }

Fact fact(std::string pred, std::vector<std::string> args, std::string value) {
  return {std::move(pred), std::move(args), std::move(value)};
}

void require_cyclotomic_three(long ell) {
  if (ell != 3) {
    throw Error(Errc::IncompleteChecklist,
                "only ell = 3 has a ledger route (Q(mu_3) is quadratic); ell = " + std::to_string(ell));
  }
}

}  // namespace

ValuationLedger cyclotomic_ledger(const CurveRecord& curve, long ell) {
  require_cyclotomic_three(ell);
  ValuationLedger L;
  L.ell = ell;
  auto tam = curve.cyclotomic_tamagawa.find(ell);
  if (tam == curve.cyclotomic_tamagawa.end()) {
    throw Error(Errc::IncompleteChecklist, curve.label + ": no Tam(E/Q(mu_3)) in metadata");
  }
  L.tamagawa_product = tam->second;
  auto sha = curve.sha_ell_trivial.find(ell);
  if (sha == curve.sha_ell_trivial.end() || !sha->second) {
    throw Error(Errc::IncompleteChecklist, curve.label + ": Sha[3] over Q(mu_3) not known to be trivial");
  }
  L.sha_order = 1;
  if (is_bad_prime(curve, ell)) throw Error(Errc::IncompleteChecklist, curve.label + ": bad reduction at 3");
  long n3 = count_points(curve, ell);
  if (n3 % ell == 0) {
    throw Error(Errc::IncompleteChecklist, curve.label + ": 3 | #E~(F_3), torsion over Q(mu_3) not controlled");
  }
  L.torsion_order = 1;  // 3-part only; it injects into E~(F_3)
  L.local_counts = {Int(n3)};
  return L;
}

bool RankZeroChecklist::certified() const { return first_gap().empty(); }

std::string RankZeroChecklist::first_gap() const {
  if (!ordinary.certified()) return "good ordinary reduction";
  if (!surjective.certified()) return "surjective mod-ell representation";
  if (!rank_cyclo_zero.certified()) return "rank zero over Q(mu_ell)";
  if (!sha_trivial.certified()) return "trivial Sha[ell] over Q(mu_ell)";
  if (!tamagawa_unit.certified()) return "ell prime to Tam * #E~(F_ell)";
  return {};
}

RankZeroChecklist build_rank_zero_checklist(const CurveRecord& curve, long ell) {
  RankZeroChecklist c;
  c.curve = curve;
  c.ell = ell;
  const std::string& lab = curve.label;

  c.ordinary.holds = good_ordinary(curve, ell);
  if (c.ordinary.holds) {
    c.ordinary.evidence = Evidence{EvidenceSource::Computed, "good_ordinary",
                                   {fact("good_ordinary", {lab, str(ell)}, "true"),
                                    fact("trace_frobenius", {lab, str(ell)}, str(trace_frobenius(curve, ell)))}};
  }

  auto surj = curve.mod_ell_surjective.find(ell);
  c.surjective.holds = surj != curve.mod_ell_surjective.end() && surj->second;
  if (c.surjective.holds) {
    c.surjective.evidence =
        Evidence{EvidenceSource::Metadata, "mod_ell_surjective", {fact("metadata.mod_ell_surjective", {lab, str(ell)}, "true")}};
  }

  if (ell != 3 || !curve.L_ratio || !curve.twist_L_ratios.count(-3)) return c;
  const Rational& L1 = *curve.L_ratio;
  const Rational& L2 = curve.twist_L_ratios.at(-3);
  std::optional<ValuationLedger> ledger;
  try {
    ledger = cyclotomic_ledger(curve, ell);
  } catch (const Error&) {
    return c;
  }
  bool bsd = L1 != 0 && L2 != 0 && bsd3_product(L1, L2, *ledger);
  std::vector<Fact> bsd_facts = {fact("metadata.L_ratio", {lab}, format_rational(L1)),
                                 fact("metadata.twist_L_ratio", {lab, "-3"}, format_rational(L2)),
                                 fact("bsd3_product", {lab}, "true")};

  // Both L-values nonzero: E and E^-3 have rank 0, hence so does E over Q(sqrt(-3)).
  c.rank_cyclo_zero.holds = bsd;
  if (bsd) c.rank_cyclo_zero.evidence = Evidence{EvidenceSource::Ledger, "bsd3_product", bsd_facts};

  c.sha_trivial.holds = bsd && valuation(ledger->sha_order, ell) == 0;
  if (c.sha_trivial.holds) {
    auto facts = bsd_facts;
    facts.push_back(fact("metadata.sha_ell_trivial", {lab, str(ell)}, "true"));
    c.sha_trivial.evidence = Evidence{EvidenceSource::Ledger, "bsd3_product", facts};
  }

  Int tam_count = ledger->tamagawa_product * ledger->local_counts.front();
  c.tamagawa_unit.holds = tam_count % ell != 0 && varpi_is_unit(*ledger);
  if (c.tamagawa_unit.holds) {
    c.tamagawa_unit.evidence =
        Evidence{EvidenceSource::Ledger, "varpi_is_unit",
                 {fact("metadata.cyclotomic_tamagawa", {lab, str(ell)}, to_string(ledger->tamagawa_product)),
                  fact("count_points", {lab, str(ell)}, to_string(ledger->local_counts.front())),
                  fact("varpi_is_unit", {lab, str(ell)}, "true")}};
  }
  return c;
}

Conclusion certify_rank_zero_cubic(const CurveRecord& curve, long ell, const Int& a, const RankZeroChecklist& checklist) {
  if (checklist.curve.label != curve.label || checklist.ell != ell) {
    throw Error(Errc::IncompleteChecklist, "checklist belongs to a different curve or ell");
  }
  if (std::string gap = checklist.first_gap(); !gap.empty()) {
    throw Error(Errc::IncompleteChecklist, curve.label + ": missing evidence for " + gap);
  }
  SieveSpec spec = SieveSpec::P(curve, ell);
  if (!check_support(a, spec, ell)) {
    std::string why = a <= 1 ? "a must exceed 1" : "a is not " + str(ell) + "-power free or not supported on P";
    throw Error(Errc::UnsupportedTwist, to_string(a) + ": " + why);
  }
  const std::string& lab = curve.label;
  Conclusion out;
  out.statement = rank_statement(lab, radical_field(a, ell), 0);
  out.data = {{"kind", "rank"}, {"curve", lab}, {"field", "radical"}, {"param", to_string(a)}, {"ell", str(ell)}, {"rank", "0"}};
  for (const ChecklistItem* item : {&checklist.ordinary, &checklist.surjective, &checklist.rank_cyclo_zero,
                                    &checklist.sha_trivial, &checklist.tamagawa_unit}) {
    for (const Fact& f : item->evidence->facts) {
      if (std::find(out.premises.begin(), out.premises.end(), f) == out.premises.end()) out.premises.push_back(f);
    }
  }
  out.premises.push_back(fact("check_support", {lab, str(ell), to_string(a)}, "true"));
  for (const auto& [p, e] : factorize(a)) {
    long pl = p.get_si();
    out.premises.push_back(fact("in_P", {lab, str(ell), str(pl)}, "true"));
    out.premises.push_back(fact("count_points", {lab, str(pl)}, str(count_points(curve, pl))));
    out.premises.push_back(fact("ell_not_divides_count", {lab, str(ell), str(pl)}, "true"));
  }
  out.citations = {"Mazur control theorem", "Hachimori-Matsuno lambda transfer", "Chebotarev density theorem"};
  return out;
}

int psi_d(long long d, long long n) {
  if (d == 0 || d == 1 || !is_squarefree(Int(static_cast<long>(d)))) {
    throw Error(Errc::InvalidArgument, "psi_d needs squarefree d != 0, 1");
  }
  return kronecker_symbol(field_discriminant(d), n);
}

Conclusion kl_rank_one(const CurveRecord& curve, long K_disc, const Int& d, bool kl_certified) {
  auto fail = [&](const std::string& what) { throw Error(Errc::PreconditionFailed, curve.label + ": " + what); };
  const std::string& lab = curve.label;
  if (!kl_certified) fail("the 2-adic unit condition is not certified");
  if (curve.torsion_order % 2 == 0) fail("E(Q)[2] != 0");
  if (curve.rank_Q != 0) fail("rank E(Q) = " + str(curve.rank_Q) + ", expected 0");
  if (!curve.conductor) fail("conductor unknown");
  const Int N = *curve.conductor;
  long c2 = 1;
  if (N % 2 == 0) {
    auto it = curve.tamagawa.find(2);
    if (it == curve.tamagawa.end()) fail("c_2 unknown");
    c2 = it->second;
  }
  if (c2 % 2 == 0) fail("c_2 = " + str(c2) + " is even");
  if (d == 0 || d == 1 || !is_squarefree(d)) fail("d = " + to_string(d) + " is not a squarefree integer != 0, 1");
  if (mod(d, 4) != 1) fail("d = " + to_string(d) + " is not 1 mod 4");
  if (!d.fits_slong_p()) fail("d out of range");
  std::vector<Fact> premises = {fact("kl_unit", {lab, str(K_disc)}, "true"),
                                fact("metadata.torsion_order", {lab}, str(curve.torsion_order)),
                                fact("metadata.rank_Q", {lab}, "0"),
                                fact("tamagawa_2_odd", {lab}, "true"),
                                fact("squarefree", {to_string(d)}, "true"),
                                fact("residue", {to_string(d), "4"}, "1")};
  for (const auto& [q, e] : factorize(d)) {
    if (!q.fits_slong_p() || !in_Q(curve, K_disc, q.get_si())) fail("prime " + to_string(q) + " of d is not in Q(E, K)");
    premises.push_back(fact("in_Q", {lab, str(K_disc), to_string(q)}, "true"));
  }
  Int delta = discriminant(curve);
  premises.push_back(fact("discriminant", {lab}, to_string(delta)));
  int psi = psi_d(d.get_si(), Int(-N).get_si());
  premises.push_back(fact("psi", {to_string(d), to_string(Int(-N))}, str(psi)));

  const bool flip = delta > 0 && d < 0;
  if (flip != (psi == -1)) {
    throw Error(Errc::InvariantViolation, "sign rule and psi_d(-N) disagree for d = " + to_string(d));
  }
  const long r = flip ? 1 : 0;
  Conclusion out;
  out.statement = rank_statement(lab, quadratic_field(d), r);
  out.data = {{"kind", "rank"}, {"curve", lab}, {"field", "quadratic"}, {"param", to_string(d)},
              {"rank", str(r)}, {"twist_rank", str(r)}};
  out.premises = std::move(premises);
  out.citations = {"Kriz-Li Heegner point congruences", "Gross-Zagier-Kolyvagin"};
  return out;
}

Conclusion integrally_diophantine_step(const Conclusion& rank_zero, const Conclusion& rank_positive) {
  auto get = [](const Conclusion& c, const char* key) {
    auto it = c.data.find(key);
    return it == c.data.end() ? std::string() : it->second;
  };
  auto fail = [](const std::string& what) { throw Error(Errc::PreconditionFailed, what); };
  if (get(rank_zero, "kind") != "rank" || get(rank_zero, "field") != "radical") fail("missing rank fact over F");
  if (get(rank_positive, "kind") != "rank" || get(rank_positive, "field") != "quadratic") fail("missing rank fact over L");
  if (get(rank_zero, "rank") != "0") fail("rank E(F) must be 0, got " + get(rank_zero, "rank"));
  if (get(rank_positive, "rank").empty() || std::stol(get(rank_positive, "rank")) <= 0) {
    fail("rank E(L) must be positive, got " + get(rank_positive, "rank"));
  }
  if (get(rank_zero, "curve") != get(rank_positive, "curve")) fail("rank facts concern different curves");
  Int a(get(rank_zero, "param")), d(get(rank_positive, "param"));
  long ell = std::stol(get(rank_zero, "ell"));
  Conclusion out;
  out.statement = compositum_field(a, ell, d) + "/" + radical_field(a, ell) + " is integrally Diophantine";
  out.data = {{"kind", "integrally_diophantine"}, {"top", compositum_field(a, ell, d)}, {"base", radical_field(a, ell)}};
  out.sub = {rank_zero, rank_positive};
  out.citations = {"Shlapentokh elliptic curve criterion"};
  return out;
}

// ---------------------------------------------------------------------------

SurjectivityEvidence mod3_surjectivity_heuristic(const CurveRecord& curve, long bound) {
  SurjectivityEvidence ev;
  Int delta = discriminant(curve);
  for (long p : primes_up_to(bound)) {
    if (p <= 3 || delta % p == 0 || is_bad_prime(curve, p)) continue;
    if (!ev.not_in_borel) {
      long ap = mod(trace_frobenius(curve, p), 3), dp = p % 3;
      bool has_root = false;
      for (long x = 0; x < 3; ++x) has_root |= mod(x * x - ap * x + dp, 3) == 0;
      if (!has_root) {
        ev.not_in_borel = true;
        ev.borel_witness = p;
      }
    }
    if (!ev.not_in_2sylow) {
      // psi_3 = 3x^4 + b2 x^3 + 3 b4 x^2 + 3 b6 x + b8; Frobenius of order 3
      // acts on its four roots as a 3-cycle plus a fixed point.
      long b2 = mod(curve.b2(), p), b4 = mod(curve.b4(), p), b6 = mod(curve.b6(), p), b8 = mod(curve.b8(), p);
      int roots = 0;
      for (long x = 0; x < p && roots < 2; ++x) {
        long v = mod(3 * x, p);
        v = mod(mulmod(v, x, p) + b2, p);
        v = mod(mulmod(v, x, p) + 3 * b4, p);
        v = mod(mulmod(v, x, p) + 3 * b6, p);
        v = mod(mulmod(v, x, p) + b8, p);
        if (v == 0) ++roots;
      }
      if (roots == 1) {
        ev.not_in_2sylow = true;
        ev.sylow_witness = p;
      }
    }
    if (ev.consistent_with_surjective()) break;
  }
  return ev;
}

}  // namespace h10
