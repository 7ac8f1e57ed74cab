#include "h10/arith.hpp"

#include <algorithm>
#include <cctype>

#include "h10/error.hpp"

namespace h10 {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ZeroDiscriminant: return "ZeroDiscriminant";
    case Errc::BadReduction: return "BadReduction";
    case Errc::FieldMismatch: return "FieldMismatch";
    case Errc::InvalidTwist: return "InvalidTwist";
    case Errc::NotSplit: return "NotSplit";
    case Errc::PrecisionExhausted: return "PrecisionExhausted";
    case Errc::NoFormalNeighborhood: return "NoFormalNeighborhood";
    case Errc::Inconclusive: return "Inconclusive";
    case Errc::BadFixture: return "BadFixture";
    case Errc::ZeroLValue: return "ZeroLValue";
    case Errc::UnsupportedTwist: return "UnsupportedTwist";
    case Errc::IncompleteChecklist: return "IncompleteChecklist";
    case Errc::PreconditionFailed: return "PreconditionFailed";
    case Errc::ParseError: return "ParseError";
    case Errc::InvariantViolation: return "InvariantViolation";
    case Errc::SieveMembershipFailed: return "SieveMembershipFailed";
    case Errc::MissingFixture: return "MissingFixture";
  }
  return "Unknown";
}

namespace {

bool valid_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  return std::all_of(s.begin() + static_cast<long>(i), s.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; });
}

Int parse_int(std::string_view s) {
  if (!valid_integer_literal(s)) throw Error(Errc::ParseError, "not an integer: '" + std::string(s) + "'");
  std::string digits(s[0] == '+' ? s.substr(1) : s);
  return Int(digits, 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  Rational r;
  if (slash == std::string_view::npos) {
    r = Rational(parse_int(text));
  } else {
    Int num = parse_int(text.substr(0, slash));
    Int den = parse_int(text.substr(slash + 1));
    if (den == 0) throw Error(Errc::ParseError, "zero denominator in '" + std::string(text) + "'");
    r = Rational(num, den);
    r.canonicalize();
  }
  return r;
}

std::string format_rational(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::string to_string(const Int& n) { return n.get_str(); }

long valuation(const Int& n, long p) {
  if (n == 0) throw Error(Errc::InvalidArgument, "valuation of zero");
  Int m = abs(n);
  long v = 0;
  Int q, r;
  while (true) {
    mpz_fdiv_qr_ui(q.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t(), static_cast<unsigned long>(p));
    if (r != 0) break;
    m = q;
    ++v;
  }
  return v;
}

long valuation(const Rational& r, long p) { return valuation(r.get_num(), p) - valuation(r.get_den(), p); }

bool is_prime(const Int& n) {
  if (n < 2) return false;
  return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

namespace {

Int pollard_brent(const Int& n) {
  if (n % 2 == 0) return 2;
  for (unsigned long c = 1;; ++c) {
    Int y = 2, x, ys, q = 1, g = 1;
    const unsigned long m = 64;
    unsigned long r = 1;
    auto step = [&](const Int& v) {
      Int t = v * v + c;
      return Int(t % n);
    };
    do {
      x = y;
      for (unsigned long i = 0; i < r; ++i) y = step(y);
      unsigned long k = 0;
      while (k < r && g == 1) {
        ys = y;
        for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
          y = step(y);
          q = (q * abs(Int(x - y))) % n;
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += m;
      }
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = step(ys);
        Int diff = abs(Int(x - ys));
        mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_into(const Int& n, std::vector<Int>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  Int d = pollard_brent(n);
  factor_into(d, out);
  factor_into(Int(n / d), out);
}

}  // namespace

std::vector<std::pair<Int, long>> factorize(const Int& n) {
  if (n == 0) throw Error(Errc::InvalidArgument, "factorize(0)");
  Int m = abs(n);
  std::vector<Int> primes;
  for (long p = 2; p < 10000 && Int(p) * p <= m; p += (p == 2 ? 1 : 2)) {
    while (m % p == 0) {
      primes.emplace_back(p);
      m /= p;
    }
  }
  factor_into(m, primes);
  std::sort(primes.begin(), primes.end());
  std::vector<std::pair<Int, long>> result;
  for (const Int& p : primes) {
    if (!result.empty() && result.back().first == p) {
      ++result.back().second;
    } else {
      result.emplace_back(p, 1);
    }
  }
  return result;
}

Int squarefree_kernel(const Int& n) {
  Int k = 1;
  for (const auto& [p, e] : factorize(n)) {
    if (e % 2 == 1) k *= p;
  }
  return n < 0 ? Int(-k) : k;
}

bool is_squarefree(const Int& n) { return n != 0 && max_prime_exponent(n) <= 1; }

long max_prime_exponent(const Int& n) {
  long best = 0;
  for (const auto& [p, e] : factorize(n)) best = std::max(best, e);
  return best;
}

std::vector<long> primes_up_to(long bound) {
  std::vector<long> primes;
  if (bound < 2) return primes;
  std::vector<bool> composite(static_cast<std::size_t>(bound) + 1, false);
  for (long i = 2; i <= bound; ++i) {
    if (composite[static_cast<std::size_t>(i)]) continue;
    primes.push_back(i);
    for (long j = i * i; j <= bound; j += i) composite[static_cast<std::size_t>(j)] = true;
  }
  return primes;
}

long powmod(long base, unsigned long exp, long m) {
  long result = 1 % m;
  long b = mod(base, m);
  while (exp > 0) {
    if (exp & 1UL) result = mulmod(result, b, m);
    b = mulmod(b, b, m);
    exp >>= 1;
  }
  return result;
}

Int ipow(const Int& base, unsigned long exp) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

bool is_square(const Rational& r) { return is_square(r.get_num()) && is_square(r.get_den()); }

}  // namespace h10
