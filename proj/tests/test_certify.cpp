#include <doctest.h>

#include <algorithm>

#include "h10/certify.hpp"

using namespace h10;

namespace {

const CurveDB& db() {
  static const CurveDB d = load_curvedb(std::string(H10_DATA_DIR) + "/curves.json");
  return d;
}

const FixtureSet& fixtures() {
  static const FixtureSet f = FixtureSet::load_dir(std::string(H10_DATA_DIR) + "/fixtures");
  return f;
}

EmitOptions fixed_time() {
  EmitOptions o;
  o.created = "2024-01-01T00:00:00Z";
  return o;
}

const Certificate& base() {
  static const Certificate c = emit_certificate(19, 43, db(), fixtures(), fixed_time());
  return c;
}

bool verifies(const Certificate& c) { return verify_certificate(c, db(), fixtures()).ok; }

Errc code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return Errc::InvalidArgument;
}

}  // namespace

TEST_SUITE("certify") {

TEST_CASE("step kinds") {
  for (StepKind k : {StepKind::PSV, StepKind::RankZeroCubic, StepKind::RankOneQuadratic, StepKind::PropMainTwist,
                     StepKind::Transfer}) {
    CHECK(parse_step_kind(to_string(k)) == k);
  }
  CHECK(code_of([] { parse_step_kind("Lemma"); }) == Errc::ParseError);
}

TEST_CASE("fixture directory") {
  CHECK(fixtures().all().size() >= 1);
  const HeegnerFixture* fx = fixtures().find("557b1", -7);
  REQUIRE(fx != nullptr);
  CHECK(fx->point.x == QuadElem(-7, Rational(35727691, 3648988)));
  CHECK(fixtures().find("557b1", -3) == nullptr);
  CHECK(fixtures().find("121a1", -7) == nullptr);
  CHECK(code_of([] { FixtureSet::load_dir("/nonexistent/fixtures"); }) == Errc::MissingFixture);
}

TEST_CASE("certificate for p = 19, q = 43") {
  const Certificate& c = base();
  CHECK(c.schema_version == 1);
  CHECK(c.field.p == 19);
  CHECK(c.field.q == 43);
  CHECK(c.curve_label == "557b1");
  CHECK(c.K_disc == -7);
  REQUIRE(c.steps.size() == 5);
  const std::vector<StepKind> order = {StepKind::PSV, StepKind::RankZeroCubic, StepKind::RankOneQuadratic,
                                       StepKind::PropMainTwist, StepKind::Transfer};
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(c.steps[i].index == static_cast<long>(i + 1));
    CHECK(c.steps[i].kind == order[i]);
    CHECK_FALSE(c.steps[i].premises.empty());
  }
  CHECK(c.steps[1].conclusion == "rank 557b1(Q(19^(1/3))) = 0");
  CHECK(c.steps[2].conclusion == "rank 557b1(Q(sqrt(-43))) = 1");
  CHECK(c.steps[4].conclusion == final_statement(19, 43));
  CHECK(final_statement(19, 43) == "Z is Diophantine in O_K for K = Q(19^(1/3), sqrt(-43))");

  VerifyReport r = verify_certificate(c, db(), fixtures());
  CHECK(r.ok);
  CHECK(r.failures().empty());
  CHECK(r.entries.size() > 30);
  json j = to_json(r);
  CHECK(j.at("ok").get<bool>());
}

TEST_CASE("serialization round trip") {
  const Certificate& c = base();
  std::string text = serialize(c);
  CHECK(text.back() == '\n');
  Certificate back = parse_certificate(text);
  CHECK(serialize(back) == text);
  CHECK(verifies(back));
  json j = json::parse(text);
  for (const char* key : {"schema_version", "field_descriptor", "curve_label", "K_disc", "created", "steps"}) {
    CHECK(j.contains(key));
  }
  CHECK(j.at("field_descriptor").at("p") == 19);
  CHECK(j.at("steps").size() == 5);

  Certificate later = emit_certificate(19, 43, db(), fixtures());
  CHECK(serialize_canonical(later) == serialize_canonical(c));
  CHECK(serialize(emit_certificate(19, 43, db(), fixtures(), fixed_time())) == text);

  CHECK(code_of([] { parse_certificate("{"); }) == Errc::ParseError);
  CHECK(code_of([] { parse_certificate("[]"); }) == Errc::ParseError);
  json missing = json::parse(text);
  missing.erase("steps");
  CHECK(code_of([&] { parse_certificate(missing.dump()); }) == Errc::ParseError);
  json bad_kind = json::parse(text);
  bad_kind["steps"][0]["kind"] = "Lemma";
  CHECK(code_of([&] { parse_certificate(bad_kind.dump()); }) == Errc::ParseError);
}

TEST_CASE("emission refuses fields outside the sieves") {
  CHECK(code_of([] { emit_certificate(3, 43, db(), fixtures()); }) == Errc::SieveMembershipFailed);
  CHECK(code_of([] { emit_certificate(23, 43, db(), fixtures()); }) == Errc::SieveMembershipFailed);
  CHECK(code_of([] { emit_certificate(57, 43, db(), fixtures()); }) == Errc::SieveMembershipFailed);
  CHECK(code_of([] { emit_certificate(19, 2, db(), fixtures()); }) == Errc::SieveMembershipFailed);
  CHECK(code_of([] { emit_certificate(19, 41, db(), fixtures()); }) == Errc::SieveMembershipFailed);
  CHECK(code_of([] { emit_certificate(19, 29, db(), fixtures()); }) == Errc::SieveMembershipFailed);
  try {
    emit_certificate(3, 43, db(), fixtures());
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("p = 3") != std::string::npos);
  }
  try {
    emit_certificate(19, 41, db(), fixtures());
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("q = 41") != std::string::npos);
  }
  CHECK(code_of([] { emit_certificate(19, 43, db(), FixtureSet{}); }) == Errc::MissingFixture);

  CurveRecord no_L = db().at("557b1");
  no_L.L_ratio.reset();
  CurveDB partial({no_L});
  CHECK(code_of([&] { emit_certificate(19, 43, partial, fixtures()); }) == Errc::IncompleteChecklist);
}

TEST_CASE("every field from the sieves certifies and verifies") {
  SieveReport P = enumerate_sieve(SieveSpec::P(db().at("557b1"), 3), 200);
  SieveReport Q = enumerate_sieve(SieveSpec::Q(SieveKind::Q_minus, db().at("557b1"), -7), 300);
  REQUIRE(P.members.size() == 13);
  REQUIRE(Q.members.size() == 6);
  for (long p : P.members) {
    for (long q : Q.members) {
      CAPTURE(p);
      CAPTURE(q);
      Certificate c = emit_certificate(p, q, db(), fixtures(), fixed_time());
      CHECK(c.steps.back().conclusion == final_statement(p, q));
      CHECK(verifies(parse_certificate(serialize(c))));
    }
  }
}

TEST_CASE("tampered premises are rejected") {
  const Certificate& c = base();
  for (std::size_t s = 0; s < c.steps.size(); ++s) {
    for (std::size_t i = 0; i < c.steps[s].premises.size(); ++i) {
      CAPTURE(s);
      CAPTURE(i);
      Certificate t = c;
      t.steps[s].premises[i].value += "0";
      CHECK_FALSE(verifies(t));
      Certificate dropped = c;
      dropped.steps[s].premises.erase(dropped.steps[s].premises.begin() + static_cast<long>(i));
      CHECK_FALSE(verifies(dropped));
      Certificate dup = c;
      dup.steps[s].premises.push_back(c.steps[s].premises[i]);
      CHECK_FALSE(verifies(dup));
      if (!t.steps[s].premises[i].args.empty()) {
        Certificate moved = c;
        moved.steps[s].premises[i].args.back() += "1";
        CHECK_FALSE(verifies(moved));
      }
    }
  }
}

TEST_CASE("tampered structure is rejected") {
  const Certificate& c = base();
  {
    Certificate t = c;
    t.schema_version = 2;
    CHECK_FALSE(verifies(t));
  }
  {
    Certificate t = c;
    t.field.p = 31;
    CHECK_FALSE(verifies(t));
  }
  {
    Certificate t = c;
    t.field.q = 67;
    CHECK_FALSE(verifies(t));
  }
  {
    Certificate t = c;
    t.curve_label = "999z9";
    CHECK_FALSE(verifies(t));
  }
  {
    Certificate t = c;
    t.K_disc = -3;
    CHECK_FALSE(verifies(t));
  }
  for (std::size_t s = 0; s < c.steps.size(); ++s) {
    Certificate t = c;
    t.steps[s].conclusion += ".";
    CHECK_FALSE(verifies(t));
    Certificate k = c;
    k.steps[s].kind = c.steps[(s + 1) % c.steps.size()].kind;
    CHECK_FALSE(verifies(k));
    Certificate idx = c;
    idx.steps[s].index += 10;
    CHECK_FALSE(verifies(idx));
  }
  {
    Certificate t = c;
    std::swap(t.steps[1], t.steps[2]);
    CHECK_FALSE(verifies(t));
  }
  {
    Certificate t = c;
    t.steps.pop_back();
    CHECK_FALSE(verifies(t));
  }
  {
    Certificate t = c;
    t.steps.push_back(c.steps.back());
    t.steps.back().index = 6;
    CHECK_FALSE(verifies(t));
  }
  {
    Certificate t = c;
    t.steps[2].premises.push_back({"is_prime", {"43"}, "true"});
    CHECK_FALSE(verifies(t));
  }
  {
    Certificate t = c;
    t.steps[3].premises[0].args = {"5"};
    CHECK_FALSE(verifies(t));
  }
  {
    Certificate t = c;
    t.steps[0].premises[0].predicate = "no_such_predicate";
    CHECK_FALSE(verifies(t));
  }
  CHECK_FALSE(verify_certificate(c, db(), FixtureSet{}).ok);
  CHECK_FALSE(verify_certificate(Certificate{}, db(), fixtures()).ok);
}

TEST_CASE("a certificate for one field fails for another") {
  Certificate a = emit_certificate(19, 43, db(), fixtures(), fixed_time());
  Certificate b = emit_certificate(31, 67, db(), fixtures(), fixed_time());
  Certificate mix = a;
  mix.steps[1] = b.steps[1];
  CHECK_FALSE(verifies(mix));
  Certificate mix2 = a;
  mix2.steps[2] = b.steps[2];
  CHECK_FALSE(verifies(mix2));
}

}
