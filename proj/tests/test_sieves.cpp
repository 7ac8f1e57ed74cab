#include <doctest.h>

#include <algorithm>
#include <random>

#include "h10/sieves.hpp"
#include "oracle.hpp"

using namespace h10;

namespace {

CurveRecord make(const char* label, long a1, long a2, long a3, long a4, long a6, long N) {
  CurveRecord c(label, Weierstrass{a1, a2, a3, a4, a6});
  c.conductor = N;
  return c;
}

const CurveRecord E557 = make("557b1", 0, -1, 1, -268, 1781, 557);
const CurveRecord E121 = make("121a1", 1, 1, 1, -30, -76, 121);
const oracle::Coeffs C557{0, -1, 1, -268, 1781};

// Frozen regression fixtures, found by the scans below.
constexpr long kP0 = 19, kP1 = 31, kQ0 = 43;

}  // namespace

TEST_SUITE("sieves") {

TEST_CASE("Kronecker symbol") {
  CHECK(kronecker_symbol(4, 7) == 1);
  CHECK(kronecker_symbol(3, 7) == -1);
  CHECK(kronecker_symbol(-7, 2) == 1);
  CHECK(kronecker_symbol(5, 2) == -1);
  CHECK(kronecker_symbol(6, 4) == 0);
  CHECK(kronecker_symbol(1, 0) == 1);
  CHECK(kronecker_symbol(2, 0) == 0);
  CHECK(kronecker_symbol(-1, -1) == -1);
  for (long a = -40; a <= 40; ++a)
    for (long n = -60; n <= 60; ++n) {
      CAPTURE(a);
      CAPTURE(n);
      REQUIRE(kronecker_symbol(a, n) == oracle::kronecker(a, n));
    }
}

TEST_CASE("Kronecker symbol is multiplicative in the top argument") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> top(-10000, 10000), bottom(1, 5000);
  for (int i = 0; i < 500; ++i) {
    long a = top(rng), b = top(rng), n = bottom(rng) * (rng() % 2 ? 1 : -1);
    CHECK(kronecker_symbol(a * b, n) == kronecker_symbol(a, n) * kronecker_symbol(b, n));
  }
}

TEST_CASE("splitting in Q(sqrt(-7))") {
  CHECK(field_discriminant(-7) == -7);
  CHECK(field_discriminant(-1) == -4);
  CHECK(field_discriminant(2) == 8);
  // q splits iff q is a square mod 7
  for (long q : oracle::primes(3, 200)) {
    if (q == 7) continue;
    CHECK(splits_in(-7, q) == (oracle::legendre(q, 7) == 1));
  }
  CHECK(splits_in(-7, 2));
  CHECK_FALSE(splits_in(-7, 7));
}

TEST_CASE("P membership") {
  CHECK_FALSE(in_P(E557, 3, 3));
  CHECK_FALSE(in_P(E557, 3, 557));
  CHECK_FALSE(in_P(E557, 3, 13));  // a_13 = -4 = 2 mod 3
  CHECK(in_P(E557, 3, kP0));
  CHECK(sieve_rejection(SieveSpec::P(E557, 3), 3).find("1 mod 3") != std::string::npos);
  CHECK(sieve_rejection(SieveSpec::P(E557, 3), 557).find("N") != std::string::npos);
  CHECK_THROWS_AS(SieveSpec::P(E557, 2), Error);
}

TEST_CASE("smallest members by independent scan") {
  std::vector<long> p_members, q_members;
  for (long p : oracle::primes(2, 200)) {
    if (p == 557) continue;
    long a = oracle::trace(C557, p);
    if (p % 3 == 1 && oracle::md(a - 2, 3) != 0) p_members.push_back(p);
    if (p != 2 && p % 4 == 3 && oracle::legendre(p, 7) == 1 && oracle::md(a, 2) == 1) q_members.push_back(p);
  }
  REQUIRE(p_members.size() >= 2);
  CHECK(p_members[0] == kP0);
  CHECK(p_members[1] == kP1);
  REQUIRE(!q_members.empty());
  CHECK(q_members[0] == kQ0);
  SieveReport rp = enumerate_sieve(SieveSpec::P(E557, 3), 200);
  CHECK(rp.members == p_members);
  SieveReport rq = enumerate_sieve(SieveSpec::Q(SieveKind::Q_minus, E557, -7), 200);
  CHECK(rq.members == q_members);
}

TEST_CASE("Q membership") {
  CHECK_FALSE(in_Q_minus(E557, -7, 2));
  CHECK_FALSE(in_Q_minus(E121, -7, 19));
  CHECK(in_Q_minus(E557, -7, kQ0));
  CHECK(in_Q(E557, -7, kQ0));
  CHECK_FALSE(in_Q_plus(E557, -7, kQ0));
  CHECK(in_Q_plus(E557, -7, 29));
  CHECK_FALSE(in_Q(E557, -7, 557));
  CHECK_FALSE(in_Q(E557, -7, 7));
  CHECK_THROWS_AS(SieveSpec::Q(SieveKind::Q_minus, E557, 4), Error);
  CHECK_THROWS_AS(SieveSpec::Q(SieveKind::Q_minus, E557, 1), Error);
  CHECK(parse_sieve_kind("Q-") == SieveKind::Q_minus);
  CHECK(parse_sieve_kind("Q+") == SieveKind::Q_plus);
  CHECK_THROWS_AS(parse_sieve_kind("R"), Error);
}

TEST_CASE("Q is the disjoint union of Q+ and Q-") {
  for (const CurveRecord* E : {&E557, &E121}) {
    auto all = enumerate_sieve(SieveSpec::Q(SieveKind::Q_set, *E, -7), 3000).members;
    auto plus = enumerate_sieve(SieveSpec::Q(SieveKind::Q_plus, *E, -7), 3000).members;
    auto minus = enumerate_sieve(SieveSpec::Q(SieveKind::Q_minus, *E, -7), 3000).members;
    std::vector<long> u;
    std::merge(plus.begin(), plus.end(), minus.begin(), minus.end(), std::back_inserter(u));
    CHECK(u == all);
    std::vector<long> both;
    std::set_intersection(plus.begin(), plus.end(), minus.begin(), minus.end(), std::back_inserter(both));
    CHECK(both.empty());
  }
}

TEST_CASE("enumeration is monotone and thread-count independent") {
  SieveSpec spec = SieveSpec::P(E557, 3);
  auto small = enumerate_sieve(spec, 500).members;
  auto big = enumerate_sieve(spec, 5000).members;
  REQUIRE(small.size() <= big.size());
  CHECK(std::equal(small.begin(), small.end(), big.begin()));
  CHECK(std::is_sorted(big.begin(), big.end()));
  CHECK(std::adjacent_find(big.begin(), big.end()) == big.end());
  CHECK(enumerate_sieve(spec, 5000, 1).members == big);
  CHECK(enumerate_sieve(spec, 5000, 7).members == big);
  CHECK_THROWS_AS(enumerate_sieve(spec, 99), Error);
}

TEST_CASE("empirical densities") {
  SieveReport p = enumerate_sieve(SieveSpec::P(E557, 3), 10000);
  CHECK(p.theoretical_density == Rational(5, 16));
  CHECK(std::abs(p.empirical_density.get_d() - 0.3125) <= 0.04);
  SieveReport q = enumerate_sieve(SieveSpec::Q(SieveKind::Q_minus, E557, -7), 10000);
  CHECK(q.theoretical_density == Rational(1, 12));
  CHECK(std::abs(q.empirical_density.get_d() - 1.0 / 12) <= 0.03);
  SieveReport e = enumerate_sieve(SieveSpec::Q(SieveKind::Q_minus, E121, -7), 1000);
  CHECK(e.members.empty());
  CHECK(e.theoretical_density == 0);
  CHECK(e.empirical_density == 0);
}

TEST_CASE("121a1: a_q is even for q = 3 mod 4") {
  for (long q : oracle::primes(3, 100)) {
    if (q == 11 || q % 4 != 3) continue;
    CHECK(oracle::md(trace_frobenius(E121, q), 2) == 0);
  }
}

TEST_CASE("support of twist parameters") {
  SieveSpec P = SieveSpec::P(E557, 3);
  CHECK_FALSE(check_support(Int(1), P, 3));
  CHECK_FALSE(check_support(Int(kP0 * kP0 * kP0), P, 3));
  CHECK(check_support(Int(kP0 * kP1 * kP1), P, 3));
  CHECK(check_support(Int(kP0), P, 3));
  CHECK_FALSE(check_support(Int(kP0 * 13), P, 3));
  CHECK_FALSE(check_support(Int(0), P, 3));
}

TEST_CASE("Heegner hypothesis") {
  CHECK(heegner_hypothesis(-7, Int(2 * 557)));
  CHECK_FALSE(heegner_hypothesis(-7, Int(7)));
  CHECK_FALSE(heegner_hypothesis(-7, Int(3)));
  CHECK(heegner_hypothesis(-7, Int(1)));
  CHECK(heegner_hypothesis(-7, Int(2 * 121)));  // 11 = 4 mod 7
}

}
