#include <doctest.h>

#include <climits>
#include <random>

#include "h10/curvedb.hpp"
#include "h10/padic.hpp"
#include "oracle.hpp"

using namespace h10;

namespace {

CurveRecord make(const char* label, long a1, long a2, long a3, long a4, long a6, long N, long torsion = 1) {
  CurveRecord c(label, Weierstrass{a1, a2, a3, a4, a6});
  c.conductor = N;
  c.torsion_order = torsion;
  return c;
}

const CurveRecord E557 = make("557b1", 0, -1, 1, -268, 1781, 557);
const CurveRecord E64 = make("64a1", 0, 0, 0, -4, 0, 64, 4);

PadicNum Q2(const Rational& r, long prec = 40) { return PadicNum::from_rational(r, 2, prec); }

HeegnerFixture heegner() {
  HeegnerFixture f;
  f.curve_label = "557b1";
  f.K_disc = -7;
  f.point = {QuadElem(-7, Rational(35727691, 3648988)), QuadElem(-7, Rational(-1, 2), Rational(135660923, 18441985352)),
             false};
  return f;
}

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

TEST_SUITE("padic") {

TEST_CASE("precision bookkeeping") {
  PadicNum a = Q2(Rational(1, 3)), three = Q2(3);
  CHECK((a * three).agrees_with(Q2(1)));
  CHECK(a.valuation() == 0);
  CHECK(Q2(Rational(12, 5)).valuation() == 2);
  CHECK(Q2(Rational(5, 8)).valuation() == -3);
  CHECK(PadicNum::exact_zero(2).valuation() == LONG_MAX);
  CHECK(PadicNum::exact_zero(2).is_exact_zero());
  PadicNum z = a - a;
  CHECK(z.is_zero_to_precision());
  CHECK_FALSE(z.is_exact_zero());
  CHECK(z.precision() == 40);
  CHECK(code_of([&] { (void)z.valuation(); }) == Errc::PrecisionExhausted);
  CHECK(code_of([&] { (void)(a / z); }) == Errc::PrecisionExhausted);
  CHECK(code_of([&] { (void)(a / PadicNum::exact_zero(2)); }) == Errc::InvalidArgument);
  PadicNum four = Q2(4);
  CHECK((a * four).precision() == 40);
  CHECK((four * four).precision() == 42);
  CHECK((a / four).precision() == 36);
  CHECK(Q2(2 + ipow(Int(2), 50)).agrees_with(Q2(2)));
  CHECK_FALSE(Q2(2).agrees_with(Q2(6)));
  CHECK(Q2(Rational(7, 9)).with_precision(10).precision() == 10);
  CHECK(Q2(1024).with_precision(10).is_zero_to_precision());
  // the integer representative is congruent to the input
  Rational r = Q2(Rational(7, 9), 30).to_rational();
  CHECK(oracle::v(r - Rational(7, 9), 2) >= 30);
  CHECK(code_of([] { (void)(PadicNum::from_rational(1, 2, 10) + PadicNum::from_rational(1, 3, 10)); }) ==
        Errc::FieldMismatch);
  CHECK(Q2(3).pow(5).agrees_with(Q2(243)));
}

TEST_CASE("random field identities in Q_3") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> d(-500, 500);
  for (int i = 0; i < 300; ++i) {
    Rational x(d(rng), 1 + std::abs(d(rng))), y(d(rng), 1 + std::abs(d(rng)));
    x.canonicalize();
    y.canonicalize();
    if (x == 0 || y == 0) continue;
    PadicNum X = PadicNum::from_rational(x, 3, 30), Y = PadicNum::from_rational(y, 3, 30);
    Rational s = x + y, pr = x * y, q = x / y;
    if (s != 0) CHECK((X + Y).agrees_with(PadicNum::from_rational(s, 3, 60)));
    CHECK((X * Y).agrees_with(PadicNum::from_rational(pr, 3, 60)));
    CHECK((X / Y).agrees_with(PadicNum::from_rational(q, 3, 60)));
    if (s != 0 && (X + Y).is_certified_nonzero()) CHECK((X + Y).valuation() == oracle::v(s, 3));
  }
}

TEST_CASE("Hensel square roots") {
  PadicNum r9 = hensel_sqrt(9, 2, 40);
  CHECK((r9.agrees_with(Q2(3)) || r9.agrees_with(Q2(-3))));
  CHECK(mod(r9.unit(), 4) == 1);
  PadicNum r7 = hensel_sqrt(-7, 2, 40);
  CHECK((r7 * r7).agrees_with(Q2(-7)));
  CHECK(mod(r7.unit(), 4) == 1);
  Int rep = r7.unit();
  CHECK(Int(rep * rep + 7) % ipow(Int(2), 40) == 0);
  CHECK(code_of([] { hensel_sqrt(5, 2, 40); }) == Errc::NotSplit);
  CHECK(code_of([] { hensel_sqrt(-3, 2, 40); }) == Errc::NotSplit);
  PadicNum r2 = hensel_sqrt(2, 7, 30);
  CHECK(mod(r2.unit(), 7) == 3);
  CHECK((r2 * r2).agrees_with(PadicNum::from_rational(2, 7, 30)));
  CHECK(code_of([] { hensel_sqrt(3, 7, 30); }) == Errc::NotSplit);
  CHECK(code_of([] { hensel_sqrt(-7, 7, 30); }) == Errc::NotSplit);
  for (long D : {-7L, -15L, -23L, 17L, 33L, 41L, 1L, 9L}) {
    for (long prec : {4L, 8L, 40L, 100L}) {
      PadicNum s = hensel_sqrt(D, 2, prec);
      CAPTURE(D);
      CAPTURE(prec);
      CHECK(s.precision() >= prec);
      CHECK((s * s - Q2(D, prec)).is_zero_to_precision());
    }
  }
  for (long p : {3L, 5L, 11L, 13L, 17L}) {
    for (long D = -30; D <= 30; ++D) {
      if (D == 0 || oracle::legendre(D, p) != 1) continue;
      PadicNum s = hensel_sqrt(D, p, 25);
      CHECK((s * s).agrees_with(PadicNum::from_rational(D, p, 25)));
    }
  }
}

TEST_CASE("embeddings of Q(sqrt(-7)) into Q_2") {
  EmbeddingChoice emb = EmbeddingChoice::make(-7, 2, 40);
  CHECK(embed(QuadElem(-7, 1), emb).valuation() == 0);
  PadicNum s = embed(QuadElem(-7, 0, 1), emb);
  CHECK((s * s).agrees_with(embed(QuadElem(-7, -7), emb)));
  CHECK((s * s).valuation() == 0);
  CHECK(code_of([&] { embed(QuadElem(-3, 1), emb); }) == Errc::FieldMismatch);
  EmbeddingChoice other = EmbeddingChoice::make(-7, 2, 40, true);
  CHECK(other.root.agrees_with(-emb.root));
  CHECK(emb.conjugate().root.agrees_with(other.root));
  // (1 + sqrt(-7))/2 has norm 2: valuation 1 at one embedding and 0 at the other
  QuadElem w(-7, Rational(1, 2), Rational(1, 2));
  CHECK(embed(w, emb).valuation() + embed(w, other).valuation() == 1);
  QuadElem w8(-7, 1, 1);
  CHECK(embed(w8, emb).valuation() + embed(w8, other).valuation() == 3);
  // multiplicativity on random elements
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> d(-40, 40);
  for (int i = 0; i < 100; ++i) {
    QuadElem x(-7, Rational(d(rng), 2 * std::abs(d(rng)) + 1), d(rng)), y(-7, d(rng), Rational(d(rng), 5));
    CHECK((embed(x, emb) * embed(y, emb)).agrees_with(embed(x * y, emb)));
    CHECK((embed(x, emb) + embed(y, emb)).agrees_with(embed(x + y, emb)));
  }
  CHECK(code_of([] { EmbeddingChoice::make(-3, 2, 40); }) == Errc::NotSplit);
}

TEST_CASE("formal differential") {
  CHECK(formal_differential(E557, 4).coeffs == std::vector<Int>{1, 0, -1, 2});
  // twelve coefficients of dx/(2y + a1 x + a3), expanded independently
  CHECK(formal_differential(E557, 12).coeffs ==
        std::vector<Int>{1, 0, -1, 2, -535, -6, 6956, -3204, 406327, 51700, -11658081, 4047370});
  Weierstrass e121{1, 1, 1, -30, -76};
  CHECK(formal_differential(e121, 8).coeffs == std::vector<Int>{1, 1, 2, 5, -49, -154, -705, -2439});
  CHECK(formal_differential(Weierstrass{0, 0, 0, -4, 0}, 4).coeffs == std::vector<Int>{1, 0, 0, 0});
  CHECK(formal_differential(Weierstrass{0, 0, 0, 17, -3}, 4).coeffs == std::vector<Int>{1, 0, 0, 0});
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<long> d(-6, 6);
  for (int i = 0; i < 60; ++i) {
    long a1 = d(rng), a2 = d(rng), a3 = d(rng), a4 = d(rng), a6 = d(rng);
    Weierstrass E{a1, a2, a3, a4, a6};
    auto c = formal_differential(E, 4).coeffs;
    CHECK(c == std::vector<Int>{1, a1, a1 * a1 + a2, a1 * a1 * a1 + 2 * a1 * a2 + 2 * a3});
    // longer expansions stay integral and extend the shorter ones
    auto longer = formal_differential(E, 16).coeffs;
    CHECK(std::equal(c.begin(), c.end(), longer.begin()));
  }
  auto full = formal_differential(E557, 24).coeffs;
  for (long k = 1; k <= 24; ++k) {
    auto part = formal_differential(E557, k).coeffs;
    CHECK(std::equal(part.begin(), part.end(), full.begin()));
  }
  CHECK_THROWS_AS(formal_differential(E557, 0), Error);
}

TEST_CASE("formal logarithm examples") {
  FormalLog zero = formal_log(E557, ECPoint<Rational>::at_infinity(Rational(0)), 2, 10);
  CHECK(zero.torsion);
  CHECK(zero.log.is_exact_zero());
  FormalLog tors = formal_log(E64, ECPoint<Rational>{2, 0, false}, 2, 10);
  CHECK(tors.torsion);
  CHECK(tors.m == 2);
  CHECK(tors.log.is_zero_to_precision());

  EmbeddingChoice emb = EmbeddingChoice::make(-7, 2, 64);
  FormalLog h = formal_log(E557, heegner().point, emb, 12);
  CHECK_FALSE(h.torsion);
  CHECK(h.m == 1);
  CHECK(h.t.valuation() == 1);
  REQUIRE(h.partial_sums.size() == 12);
  CHECK(h.partial_sums[0].valuation() == 1);  // v(t)
  CHECK(h.partial_sums[2].valuation() == 1);  // v(t - t^3/3)
  CHECK(h.log.valuation() == 1);
  CHECK(h.truncation_bound == 13 - 3);

  // a rational point of infinite order: y^2 = x^3 - 2, P = (3, 5), at p = 5
  Weierstrass E{0, 0, 0, 0, -2};
  ECPoint<Rational> P{3, 5, false};
  REQUIRE(on_curve(E, P));
  FormalLog lp = formal_log(E, P, 5, 20);
  FormalLog l2p = formal_log(E, multiply(E, 2, P), 5, 20);
  CHECK_FALSE(lp.torsion);
  CHECK(l2p.log.agrees_with(lp.log * PadicNum::from_rational(2, 5, 200)));
}

TEST_CASE("no formal neighbourhood within the multiplier ceiling") {
  // y^2 = x^3 - 2 at p = 1013: the reduction of (3, 5) has order 338
  Weierstrass E{0, 0, 0, 0, -2};
  ECPoint<Rational> P{3, 5, false};
  CHECK(code_of([&] { formal_log(E, P, 1013, 5); }) == Errc::NoFormalNeighborhood);
}

TEST_CASE("certified valuation examples") {
  FormalSeries one{2, {1, 0, 0, 0}};
  CHECK(certified_valuation(one, Q2(2), 3) == 1);
  CHECK_FALSE(certified_valuation(one, Q2(2), 1).has_value());
  CHECK(code_of([&] { certified_valuation(one, Q2(3), 3); }) == Errc::InvalidArgument);
  CHECK(code_of([&] { certified_valuation(one, Q2(0), 3); }) == Errc::InvalidArgument);
  // Heegner t at n = 3
  EmbeddingChoice emb = EmbeddingChoice::make(-7, 2, 64);
  FormalLog h = formal_log(E557, heegner().point, emb, 3);
  CHECK(certified_valuation(formal_differential(E557, 3), h.t, 3) == 1);
  CHECK_FALSE(certified_valuation(formal_differential(E557, 2), h.t, 2).has_value());
}

TEST_CASE("certified valuation agrees with direct 4n-term evaluation") {
  std::mt19937_64 rng(424242);
  int certified = 0;
  for (int trial = 0; trial < 100; ++trial) {
    long p = trial % 2 ? 3 : 2;
    long n = 1 + static_cast<long>(rng() % 8);
    std::vector<Int> b;
    for (long i = 0; i < 4 * n; ++i) b.emplace_back(static_cast<long>(rng() % 41) - 20);
    if (b[0] == 0) b[0] = 1;
    long k = 1 + static_cast<long>(rng() % 2);
    long u = static_cast<long>(rng() % 200) + 1, w = static_cast<long>(rng() % 50) + 1;
    while (u % p == 0) ++u;
    while (w % p == 0) ++w;
    Rational a(static_cast<long>(ipow(Int(p), k).get_si()) * u, w);
    a.canonicalize();
    FormalSeries F{p, b};
    auto m = certified_valuation(F, PadicNum::from_rational(a, p, 64), n);
    CAPTURE(trial);
    if (m) {
      ++certified;
      CHECK(*m == oracle::partial_sum_valuation(b, a, p, n));
      CHECK(*m == oracle::partial_sum_valuation(b, a, p, 4 * n));
    }
  }
  CHECK(certified >= 30);
}

TEST_CASE("Kriz-Li unit condition") {
  HeegnerFixture fx = heegner();
  EmbeddingChoice emb = EmbeddingChoice::make(-7, 2, 64);
  KLReport r = check_kl(E557, -7, fx, emb);
  CHECK(r.ns_count == 1);
  CHECK(r.manin_constant == 1);
  CHECK(r.v_t == 1);
  CHECK(r.n_used == 3);
  CHECK(r.v_log == 1);
  CHECK(r.quantity_valuation == 0);
  CHECK(r.integral);
  CHECK(r.unit);
  CHECK(check_kl_unit(E557, -7, fx, emb));

  // the other 2-adic place gives the same verdict
  KLReport o = check_kl(E557, -7, fx, emb.conjugate());
  CHECK(o.v_log == r.v_log);
  CHECK(o.unit == r.unit);

  // 2H has log of valuation 2: 0 - 1 + 2 = 1
  HeegnerFixture twice = fx;
  twice.point = multiply(E557, 2, fx.point);
  KLReport t = check_kl(E557, -7, twice, emb);
  CHECK(t.v_log == 2);
  CHECK(t.quantity_valuation == 1);
  CHECK(t.integral);
  CHECK_FALSE(t.unit);

  HeegnerFixture off = fx;
  off.point.y = off.point.y + QuadElem(-7, 1);
  CHECK(code_of([&] { check_kl(E557, -7, off, emb); }) == Errc::BadFixture);
  CHECK(code_of([&] { check_kl(E557, -3, fx, emb); }) == Errc::FieldMismatch);
  CHECK(code_of([&] { check_kl(E557, -7, fx, emb, 2); }) == Errc::Inconclusive);

  HeegnerFixture tors{"64a1", -7, {QuadElem(-7, 2), QuadElem(-7, 0), false}, ""};
  CHECK(code_of([&] { check_kl(E64, -7, tors, emb); }) == Errc::PreconditionFailed);
  CurveRecord inert = E557;
  inert.conductor = 3 * 557;
  CHECK(code_of([&] { check_kl(inert, -7, fx, emb); }) == Errc::PreconditionFailed);
  CurveRecord unknown = E557;
  unknown.conductor.reset();
  CHECK(code_of([&] { check_kl(unknown, -7, fx, emb); }) == Errc::PreconditionFailed);
}

TEST_CASE("log(2P) = 2 log(P) on synthetic formal points") {
  std::mt19937_64 rng(99);
  const long prec = 40, n = 48;
  int checked = 0;
  for (int i = 0; i < 50; ++i) {
    long k = 1 + static_cast<long>(rng() % 2);
    long u = 2 * static_cast<long>(rng() % 500) + 1;
    if (rng() % 2) u = -u;
    long w = 2 * static_cast<long>(rng() % 20) + 1;
    PadicNum t = PadicNum::from_rational(Rational((1L << k) * u, w), 2, prec);
    ECPoint<PadicNum> P = formal_point(E557, t, n);
    REQUIRE(on_curve(E557, P));
    ECPoint<PadicNum> P2 = add_points(E557, P, P);
    FormalLog l1 = formal_log(E557, P, n), l2 = formal_log(E557, P2, n);
    CAPTURE(i);
    CHECK(l1.m == 1);
    CHECK(l2.m == 1);
    PadicNum two = PadicNum::from_rational(2, 2, prec + kConstantSlack);
    PadicNum diff = l2.log - two * l1.log;
    CHECK(diff.is_zero_to_precision());
    CHECK(diff.precision() >= prec - 8);
    ++checked;
  }
  CHECK(checked == 50);
}

}
