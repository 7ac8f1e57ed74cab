#include "h10/certify.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <functional>
#include <map>
#include <optional>
#include <set>

namespace h10 {

const char* to_string(StepKind k) noexcept {
  switch (k) {
    case StepKind::PSV: return "PSV";
    case StepKind::RankZeroCubic: return "RankZeroCubic";
    case StepKind::RankOneQuadratic: return "RankOneQuadratic";
    case StepKind::PropMainTwist: return "PropMainTwist";
    case StepKind::Transfer: return "Transfer";
  }
  return "?";
}

StepKind parse_step_kind(const std::string& s) {
  for (StepKind k : {StepKind::PSV, StepKind::RankZeroCubic, StepKind::RankOneQuadratic, StepKind::PropMainTwist,
                     StepKind::Transfer}) {
    if (s == to_string(k)) return k;
  }
  throw Error(Errc::ParseError, "unknown step kind '" + s + "'");
}

FixtureSet FixtureSet::load_dir(const std::filesystem::path& dir) {
  std::vector<HeegnerFixture> out;
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw Error(Errc::MissingFixture, "fixture directory " + dir.string() + " not found");
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) out.push_back(load_heegner_fixture(f));
  return FixtureSet(std::move(out));
}

const HeegnerFixture* FixtureSet::find(const std::string& label, long K_disc) const {
  for (const HeegnerFixture& f : fixtures_) {
    if (f.curve_label == label && f.K_disc == K_disc) return &f;
  }
  return nullptr;
}

namespace {

constexpr long kEll = 3;

std::string s(long v) { return std::to_string(v); }

std::string psv_statement(long p) { return radical_field(Int(p), kEll) + "/Q is integrally Diophantine"; }

std::string twist_statement(long p, long q) {
  return compositum_field(Int(p), kEll, Int(-q)) + "/" + radical_field(Int(p), kEll) + " is integrally Diophantine";
}

std::string now_utc() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// What each step must cite: (predicate, args) and, for rule hypotheses, the
// value it must have. Values left open are still recomputed.
struct Required {
  std::string predicate;
  std::vector<std::string> args;
  std::optional<std::string> value;
};

std::vector<Required> required_premises(StepKind kind, const Certificate& c, const CurveRecord& E) {
  const std::string& L = c.curve_label;
  const std::string p = s(c.field.p), q = s(c.field.q), mq = s(-c.field.q), K = s(c.K_disc);
  const std::string N = E.conductor ? to_string(*E.conductor) : "?";
  const std::string twoN = E.conductor ? to_string(Int(2 * *E.conductor)) : "?";
  const std::string mN = E.conductor ? to_string(Int(-*E.conductor)) : "?";
  const std::string ell = s(kEll);
  const std::string T = "true";
  switch (kind) {
    case StepKind::PSV:
      return {{"is_prime", {p}, T}, {"one_real_root", {p}, T}};
    case StepKind::RankZeroCubic:
      return {{"good_ordinary", {L, ell}, T},
              {"trace_frobenius", {L, ell}, {}},
              {"metadata.mod_ell_surjective", {L, ell}, T},
              {"metadata.L_ratio", {L}, {}},
              {"metadata.twist_L_ratio", {L, "-3"}, {}},
              {"bsd3_product", {L}, T},
              {"metadata.sha_ell_trivial", {L, ell}, T},
              {"metadata.cyclotomic_tamagawa", {L, ell}, {}},
              {"count_points", {L, ell}, {}},
              {"varpi_is_unit", {L, ell}, T},
              {"check_support", {L, ell, p}, T},
              {"in_P", {L, ell, p}, T},
              {"count_points", {L, p}, {}},
              {"ell_not_divides_count", {L, ell, p}, T}};
    case StepKind::RankOneQuadratic:
      return {{"in_Q_minus", {L, K, q}, T},
              {"heegner_hypothesis", {K, twoN}, T},
              {"fixture_on_curve", {L, K}, T},
              {"count_nonsingular_points", {L, "2"}, {}},
              {"metadata.manin_constant", {L}, {}},
              {"kl_v_t", {L, K}, {}},
              {"kl_certified_log_valuation", {L, K}, {}},
              {"kl_unit", {L, K}, T},
              {"metadata.torsion_order", {L}, {}},
              {"metadata.rank_Q", {L}, "0"},
              {"tamagawa_2_odd", {L}, T},
              {"squarefree", {mq}, T},
              {"residue", {mq, "4"}, "1"},
              {"in_Q", {L, K, q}, T},
              {"discriminant", {L}, {}},
              {"psi", {mq, mN}, "-1"}};
    case StepKind::PropMainTwist:
      return {{"conclusion_of", {"2"}, {}}, {"conclusion_of", {"3"}, {}}, {"imaginary_quadratic", {mq}, T}};
    case StepKind::Transfer:
      return {{"conclusion_of", {"1"}, {}}, {"conclusion_of", {"4"}, {}}};
  }
  return {};
}

std::string expected_conclusion(StepKind kind, const Certificate& c) {
  const long p = c.field.p, q = c.field.q;
  switch (kind) {
    case StepKind::PSV: return psv_statement(p);
    case StepKind::RankZeroCubic: return rank_statement(c.curve_label, radical_field(Int(p), kEll), 0);
    case StepKind::RankOneQuadratic: return rank_statement(c.curve_label, quadratic_field(Int(-q)), 1);
    case StepKind::PropMainTwist: return twist_statement(p, q);
    case StepKind::Transfer: return final_statement(p, q);
  }
  return {};
}

const std::vector<StepKind> kStepOrder = {StepKind::PSV, StepKind::RankZeroCubic, StepKind::RankOneQuadratic,
                                          StepKind::PropMainTwist, StepKind::Transfer};

// Recomputes facts from the database and fixtures only.
class Evaluator {
 public:
  Evaluator(const CurveDB& db, const FixtureSet& fx, long prec) : db_(db), fx_(fx), prec_(prec) {}

  std::string eval(const Fact& f) {
    const auto& a = f.args;
    auto need = [&](std::size_t n) {
      if (a.size() != n) throw Error(Errc::InvalidArgument, f.predicate + " takes " + s(static_cast<long>(n)) + " arguments");
    };
    auto curve = [&](std::size_t i) -> const CurveRecord& { return db_.at(a.at(i)); };
    auto num = [&](std::size_t i) -> long {
      Rational r = parse_rational(a.at(i));
      if (r.get_den() != 1 || !r.get_num().fits_slong_p()) throw Error(Errc::ParseError, "bad integer '" + a.at(i) + "'");
      return r.get_num().get_si();
    };
    auto b = [](bool v) { return std::string(v ? "true" : "false"); };
    const std::string& P = f.predicate;

    if (P == "is_prime") { need(1); return b(is_prime(Int(a[0]))); }
    if (P == "one_real_root") {
      need(1);
      // x^3 - p has discriminant -27 p^2 < 0 for p != 0: one real root, one complex pair.
      return b(Int(a[0]) != 0);
    }
    if (P == "imaginary_quadratic") { need(1); Int d(a[0]); return b(d < 0 && is_squarefree(d)); }
    if (P == "squarefree") { need(1); Int d(a[0]); return b(d != 0 && is_squarefree(d)); }
    if (P == "residue") { need(2); return s(mod(Int(a[0]), num(1))); }
    if (P == "psi") { need(2); return s(psi_d(num(0), num(1))); }
    if (P == "heegner_hypothesis") { need(2); return b(heegner_hypothesis(num(0), Int(a[1]))); }
    if (P == "discriminant") { need(1); return to_string(discriminant(curve(0))); }
    if (P == "count_points") { need(2); return s(count_points(curve(0), num(1))); }
    if (P == "count_nonsingular_points") { need(2); return s(count_nonsingular_points(curve(0), num(1))); }
    if (P == "trace_frobenius") { need(2); return s(trace_frobenius(curve(0), num(1))); }
    if (P == "good_ordinary") { need(2); return b(good_ordinary(curve(0), num(1))); }
    if (P == "in_P") { need(3); return b(in_P(curve(0), num(1), num(2))); }
    if (P == "in_Q") { need(3); return b(in_Q(curve(0), num(1), num(2))); }
    if (P == "in_Q_minus") { need(3); return b(in_Q_minus(curve(0), num(1), num(2))); }
    if (P == "check_support") { need(3); return b(check_support(Int(a[2]), SieveSpec::P(curve(0), num(1)), num(1))); }
    if (P == "ell_not_divides_count") { need(3); return b(count_points(curve(0), num(2)) % num(1) != 0); }
    if (P == "bsd3_product") {
      need(1);
      const CurveRecord& E = curve(0);
      if (!E.L_ratio || !E.twist_L_ratios.count(-3)) return b(false);
      return b(bsd3_product(*E.L_ratio, E.twist_L_ratios.at(-3), cyclotomic_ledger(E, kEll)));
    }
    if (P == "varpi_is_unit") { need(2); return b(varpi_is_unit(cyclotomic_ledger(curve(0), num(1)))); }
    if (P == "tamagawa_2_odd") {
      need(1);
      const CurveRecord& E = curve(0);
      if (!E.conductor) return b(false);
      if (*E.conductor % 2 != 0) return b(true);
      auto it = E.tamagawa.find(2);
      return b(it != E.tamagawa.end() && it->second % 2 == 1);
    }
    if (P == "fixture_on_curve") {
      need(2);
      const HeegnerFixture* fx = fx_.find(a[0], num(1));
      return b(fx && !fx->point.infinity && on_curve(curve(0), fx->point));
    }
    if (P == "kl_unit") { need(2); return b(kl(a[0], num(1)).unit); }
    if (P == "kl_v_t") { need(2); return s(kl(a[0], num(1)).v_t); }
    if (P == "kl_certified_log_valuation") { need(2); return s(kl(a[0], num(1)).v_log); }
    if (P.rfind("metadata.", 0) == 0) return metadata(P.substr(9), a);
    throw Error(Errc::InvalidArgument, "unknown predicate '" + P + "'");
  }

 private:
  const KLReport& kl(const std::string& label, long K) {
    auto key = std::make_pair(label, K);
    auto it = kl_cache_.find(key);
    if (it != kl_cache_.end()) return it->second;
    const HeegnerFixture* fx = fx_.find(label, K);
    if (!fx) throw Error(Errc::MissingFixture, "no Heegner fixture for " + label + " and K_disc " + s(K));
    KLReport r = check_kl(db_.at(label), K, *fx, EmbeddingChoice::make(K, 2, prec_));
    return kl_cache_.emplace(key, r).first->second;
  }

  std::string metadata(const std::string& field, const std::vector<std::string>& a) {
    if (a.empty()) throw Error(Errc::InvalidArgument, "metadata fact without a label");
    const CurveRecord& E = db_.at(a[0]);
    auto key = [&]() -> long {
      if (a.size() != 2) throw Error(Errc::InvalidArgument, "metadata." + field + " takes 2 arguments");
      return parse_rational(a[1]).get_num().get_si();
    };
    auto lookup = [&](const auto& m) {
      auto it = m.find(key());
      if (it == m.end()) throw Error(Errc::InvalidArgument, "metadata." + field + " has no entry " + a[1]);
      return it->second;
    };
    auto b = [](bool v) { return std::string(v ? "true" : "false"); };
    if (field == "manin_constant") return s(E.manin_constant);
    if (field == "torsion_order") return s(E.torsion_order);
    if (field == "rank_Q") return s(E.rank_Q);
    if (field == "L_ratio") {
      if (!E.L_ratio) throw Error(Errc::InvalidArgument, "no L_ratio");
      return format_rational(*E.L_ratio);
    }
    if (field == "mod_ell_surjective") return b(lookup(E.mod_ell_surjective));
    if (field == "sha_ell_trivial") return b(lookup(E.sha_ell_trivial));
    if (field == "cyclotomic_tamagawa") return s(lookup(E.cyclotomic_tamagawa));
    if (field == "twist_L_ratio") return format_rational(lookup(E.twist_L_ratios));
    throw Error(Errc::InvalidArgument, "unknown metadata field '" + field + "'");
  }

  const CurveDB& db_;
  const FixtureSet& fx_;
  long prec_;
  std::map<std::pair<std::string, long>, KLReport> kl_cache_;
};

Fact fact(std::string pred, std::vector<std::string> args, std::string value) {
  return {std::move(pred), std::move(args), std::move(value)};
}

}  // namespace

std::string final_statement(long p, long q) {
  return "Z is Diophantine in O_K for K = " + compositum_field(Int(p), kEll, Int(-q));
}

Certificate emit_certificate(long p, long q, const CurveDB& db, const FixtureSet& fixtures, const EmitOptions& opts) {
  const CurveRecord& E = db.at(opts.curve_label);
  const std::string& L = E.label;
  const long K = opts.K_disc;

  SieveSpec P = SieveSpec::P(E, kEll);
  if (std::string why = sieve_rejection(P, p); !why.empty()) {
    throw Error(Errc::SieveMembershipFailed, "p = " + s(p) + " is not in P(" + L + ", 3): " + why);
  }
  SieveSpec Qm = SieveSpec::Q(SieveKind::Q_minus, E, K);
  if (std::string why = sieve_rejection(Qm, q); !why.empty()) {
    throw Error(Errc::SieveMembershipFailed, "q = " + s(q) + " is not in Q-(" + L + ", " + s(K) + "): " + why);
  }
  const HeegnerFixture* fx = fixtures.find(L, K);
  if (!fx) throw Error(Errc::MissingFixture, "no Heegner fixture for " + L + " over Q(sqrt(" + s(K) + "))");
  RankZeroChecklist checklist = build_rank_zero_checklist(E, kEll);
  if (!checklist.certified()) {
    throw Error(Errc::IncompleteChecklist, L + ": missing evidence for " + checklist.first_gap());
  }

  Certificate c;
  c.field = {p, q};
  c.curve_label = L;
  c.K_disc = K;
  c.created = opts.created.empty() ? now_utc() : opts.created;

  Step psv{1, StepKind::PSV, {fact("is_prime", {s(p)}, "true"), fact("one_real_root", {s(p)}, "true")}, psv_statement(p)};

  Conclusion rz = certify_rank_zero_cubic(E, kEll, Int(p), checklist);
  Step rank0{2, StepKind::RankZeroCubic, rz.premises, rz.statement};

  KLReport kl = check_kl(E, K, *fx, EmbeddingChoice::make(K, 2, opts.precision));
  Conclusion r1 = kl_rank_one(E, K, Int(-q), kl.unit);
  std::vector<Fact> kl_facts = {fact("in_Q_minus", {L, s(K), s(q)}, "true"),
                                fact("heegner_hypothesis", {s(K), to_string(Int(2 * *E.conductor))}, "true"),
                                fact("fixture_on_curve", {L, s(K)}, "true"),
                                fact("count_nonsingular_points", {L, "2"}, s(kl.ns_count)),
                                fact("metadata.manin_constant", {L}, s(kl.manin_constant)),
                                fact("kl_v_t", {L, s(K)}, s(kl.v_t)),
                                fact("kl_certified_log_valuation", {L, s(K)}, s(kl.v_log))};
  kl_facts.insert(kl_facts.end(), r1.premises.begin(), r1.premises.end());
  Step rank1{3, StepKind::RankOneQuadratic, kl_facts, r1.statement};

  Conclusion twist = integrally_diophantine_step(rz, r1);
  Step pm{4, StepKind::PropMainTwist,
          {fact("conclusion_of", {"2"}, rank0.conclusion), fact("conclusion_of", {"3"}, rank1.conclusion),
           fact("imaginary_quadratic", {s(-q)}, "true")},
          twist.statement};

  Step tr{5, StepKind::Transfer,
          {fact("conclusion_of", {"1"}, psv.conclusion), fact("conclusion_of", {"4"}, pm.conclusion)},
          final_statement(p, q)};

  c.steps = {psv, rank0, rank1, pm, tr};
  return c;
}

// ---------------------------------------------------------------------------

json to_json(const Certificate& c) {
  json steps = json::array();
  for (const Step& st : c.steps) {
    json prem = json::array();
    for (const Fact& f : st.premises) prem.push_back({{"predicate", f.predicate}, {"args", f.args}, {"value", f.value}});
    steps.push_back({{"index", st.index}, {"kind", to_string(st.kind)}, {"premises", prem}, {"conclusion", st.conclusion}});
  }
  return {{"schema_version", c.schema_version},
          {"field_descriptor", {{"p", c.field.p}, {"q", c.field.q}}},
          {"curve_label", c.curve_label},
          {"K_disc", c.K_disc},
          {"created", c.created},
          {"steps", steps}};
}

std::string serialize(const Certificate& c) { return to_json(c).dump(2) + "\n"; }

std::string serialize_canonical(const Certificate& c) {
  Certificate copy = c;
  copy.created.clear();
  return serialize(copy);
}

Certificate certificate_from_json(const json& j) {
  try {
    Certificate c;
    c.schema_version = j.at("schema_version").get<int>();
    c.field.p = j.at("field_descriptor").at("p").get<long>();
    c.field.q = j.at("field_descriptor").at("q").get<long>();
    c.curve_label = j.at("curve_label").get<std::string>();
    c.K_disc = j.at("K_disc").get<long>();
    c.created = j.value("created", std::string());
    for (const json& sj : j.at("steps")) {
      Step st;
      st.index = sj.at("index").get<long>();
      st.kind = parse_step_kind(sj.at("kind").get<std::string>());
      st.conclusion = sj.at("conclusion").get<std::string>();
      for (const json& fj : sj.at("premises")) {
        st.premises.push_back({fj.at("predicate").get<std::string>(), fj.at("args").get<std::vector<std::string>>(),
                               fj.at("value").get<std::string>()});
      }
      c.steps.push_back(std::move(st));
    }
    return c;
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, std::string("certificate: ") + e.what());
  }
}

Certificate parse_certificate(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::ParseError, std::string("certificate: ") + e.what());
  }
  return certificate_from_json(j);
}

std::vector<VerifyEntry> VerifyReport::failures() const {
  std::vector<VerifyEntry> out;
  std::copy_if(entries.begin(), entries.end(), std::back_inserter(out), [](const VerifyEntry& e) { return !e.pass; });
  return out;
}

VerifyReport verify_certificate(const Certificate& cert, const CurveDB& db, const FixtureSet& fixtures, long precision) {
  VerifyReport rep;
  auto record = [&](long step, std::string check, bool pass, std::string detail = {}) {
    rep.entries.push_back({step, std::move(check), pass, std::move(detail)});
  };

  record(0, "schema_version", cert.schema_version == kCertificateSchemaVersion, s(cert.schema_version));
  const CurveRecord* E = db.find(cert.curve_label);
  record(0, "curve in database", E != nullptr, cert.curve_label);
  record(0, "step count", cert.steps.size() == kStepOrder.size(), s(static_cast<long>(cert.steps.size())));
  if (!E) {
    rep.ok = false;
    return rep;
  }

  Evaluator ev(db, fixtures, precision);
  for (std::size_t i = 0; i < cert.steps.size(); ++i) {
    const Step& st = cert.steps[i];
    const long idx = static_cast<long>(i) + 1;
    record(idx, "index", st.index == idx, s(st.index));
    const bool kind_ok = i < kStepOrder.size() && st.kind == kStepOrder[i];
    record(idx, "kind", kind_ok, to_string(st.kind));

    for (const Fact& f : st.premises) {
      if (f.predicate == "conclusion_of") {
        bool ok = false;
        std::string detail = to_string(f);
        try {
          long ref = f.args.size() == 1 ? std::stol(f.args[0]) : 0;
          ok = ref >= 1 && ref < idx && cert.steps[static_cast<std::size_t>(ref - 1)].conclusion == f.value;
          if (!(ref >= 1 && ref < idx)) detail += " (not an earlier step)";
        } catch (const std::exception&) {
          detail += " (bad reference)";
        }
        record(idx, "premise", ok, detail);
        continue;
      }
      try {
        std::string got = ev.eval(f);
        record(idx, "premise", got == f.value, to_string(f) + (got == f.value ? "" : " (recomputed " + got + ")"));
      } catch (const std::exception& e) {
        record(idx, "premise", false, to_string(f) + " (" + e.what() + ")");
      }
    }

    if (!kind_ok) continue;
    // The cited facts must be exactly the ones this kind of step rests on.
    std::vector<Required> req = required_premises(st.kind, cert, *E);
    std::multiset<std::pair<std::string, std::vector<std::string>>> want, have;
    for (const Required& r : req) want.insert({r.predicate, r.args});
    for (const Fact& f : st.premises) have.insert({f.predicate, f.args});
    for (const Required& r : req) {
      auto it = std::find_if(st.premises.begin(), st.premises.end(),
                             [&](const Fact& f) { return f.predicate == r.predicate && f.args == r.args; });
      Fact shown{r.predicate, r.args, r.value.value_or("*")};
      if (it == st.premises.end()) {
        record(idx, "required premise", false, to_string(shown) + " missing");
      } else if (r.value && it->value != *r.value) {
        record(idx, "required premise", false, to_string(*it) + " but the rule needs " + *r.value);
      } else {
        record(idx, "required premise", true, to_string(*it));
      }
    }
    record(idx, "no extra premises", want == have);
    const std::string expect = expected_conclusion(st.kind, cert);
    record(idx, "conclusion", st.conclusion == expect, st.conclusion == expect ? expect : st.conclusion + " != " + expect);
  }
  if (!cert.steps.empty()) {
    record(0, "final conclusion", cert.steps.back().conclusion == final_statement(cert.field.p, cert.field.q),
           cert.steps.back().conclusion);
  }
  rep.ok = std::all_of(rep.entries.begin(), rep.entries.end(), [](const VerifyEntry& e) { return e.pass; });
  return rep;
}

json to_json(const VerifyReport& r) {
  json entries = json::array();
  for (const VerifyEntry& e : r.entries) {
    entries.push_back({{"step", e.step}, {"check", e.check}, {"pass", e.pass}, {"detail", e.detail}});
  }
  return {{"ok", r.ok}, {"entries", entries}};
}

}  // namespace h10
