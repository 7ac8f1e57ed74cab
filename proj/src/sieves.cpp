#include "h10/sieves.hpp"

#include <algorithm>
#include <future>
#include <thread>

#include "h10/gl2_density.hpp"

namespace h10 {

int kronecker_symbol(long long a, long long n) {
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
  int result = 1;
  if (n < 0) {
    n = -n;
    if (a < 0) result = -result;
  }
  int twos = 0;
  while ((n & 1) == 0) {
    n >>= 1;
    ++twos;
  }
  if (twos > 0) {
    if ((a & 1) == 0) return 0;
    long long a8 = ((a % 8) + 8) % 8;
    if ((twos & 1) && (a8 == 3 || a8 == 5)) result = -result;
  }
  // Jacobi symbol (a/n), n odd positive.
  a %= n;
  if (a < 0) a += n;
  while (a != 0) {
    while ((a & 1) == 0) {
      a >>= 1;
      long long r = n % 8;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

long long field_discriminant(long long d) { return ((d % 4) + 4) % 4 == 1 ? d : 4 * d; }

bool splits_in(long long K_disc, long long q) { return kronecker_symbol(field_discriminant(K_disc), q) == 1; }

const char* to_string(SieveKind k) noexcept {
  switch (k) {
    case SieveKind::P_set: return "P";
    case SieveKind::Q_set: return "Q";
    case SieveKind::Q_plus: return "Q+";
    case SieveKind::Q_minus: return "Q-";
  }
  return "?";
}

SieveKind parse_sieve_kind(const std::string& s) {
  if (s == "P") return SieveKind::P_set;
  if (s == "Q") return SieveKind::Q_set;
  if (s == "Q+") return SieveKind::Q_plus;
  if (s == "Q-") return SieveKind::Q_minus;
  throw Error(Errc::ParseError, "unknown sieve kind '" + s + "' (expected P, Q, Q+ or Q-)");
}

SieveSpec SieveSpec::P(CurveRecord curve, long ell) {
  SieveSpec s;
  s.kind = SieveKind::P_set;
  s.curve = std::move(curve);
  s.ell = ell;
  s.validate();
  return s;
}

SieveSpec SieveSpec::Q(SieveKind kind, CurveRecord curve, long K_disc) {
  SieveSpec s;
  s.kind = kind;
  s.curve = std::move(curve);
  s.K_disc = K_disc;
  s.validate();
  return s;
}

void SieveSpec::validate() const {
  if (kind == SieveKind::P_set) {
    if (ell <= 2 || !is_prime(static_cast<long long>(ell))) {
      throw Error(Errc::InvalidArgument, "P-set needs an odd prime ell, got " + std::to_string(ell));
    }
  } else if (K_disc == 0 || K_disc == 1 || !is_squarefree(Int(K_disc))) {
    throw Error(Errc::InvalidArgument, "K_disc must be squarefree and not 0 or 1, got " + std::to_string(K_disc));
  }
}

std::string sieve_rejection(const SieveSpec& spec, long p) {
  if (p < 2 || !is_prime(static_cast<long long>(p))) return std::to_string(p) + " is not prime";
  const CurveRecord& E = spec.curve;
  if (spec.kind == SieveKind::P_set) {
    if (is_bad_prime(E, p)) return std::to_string(p) + " divides N";
    if (p % spec.ell != 1) return std::to_string(p) + " is not 1 mod " + std::to_string(spec.ell);
    long ap = trace_frobenius(E, p);
    if (mod(ap, spec.ell) == 2 % spec.ell) {
      return "a_" + std::to_string(p) + " = " + std::to_string(ap) + " is 2 mod " + std::to_string(spec.ell);
    }
    return {};
  }
  if (p == 2 || is_bad_prime(E, p)) return std::to_string(p) + " divides 2N";
  if (!splits_in(spec.K_disc, p)) return std::to_string(p) + " does not split in Q(sqrt(" + std::to_string(spec.K_disc) + "))";
  long ap = trace_frobenius(E, p);
  if (mod(ap, 2) != 1) return "a_" + std::to_string(p) + " = " + std::to_string(ap) + " is even";
  if (spec.kind == SieveKind::Q_plus && p % 4 != 1) return std::to_string(p) + " is not 1 mod 4";
  if (spec.kind == SieveKind::Q_minus && p % 4 != 3) return std::to_string(p) + " is not -1 mod 4";
  return {};
}

bool in_sieve(const SieveSpec& spec, long p) { return sieve_rejection(spec, p).empty(); }

namespace {

SieveSpec unchecked(SieveKind kind, const CurveRecord& curve, long ell, long K_disc) {
  SieveSpec s;
  s.kind = kind;
  s.curve = curve;
  s.ell = ell;
  s.K_disc = K_disc;
  return s;
}

}  // namespace

bool in_P(const CurveRecord& curve, long ell, long p) {
  return in_sieve(unchecked(SieveKind::P_set, curve, ell, 0), p);
}
bool in_Q(const CurveRecord& curve, long K_disc, long q) {
  return in_sieve(unchecked(SieveKind::Q_set, curve, 0, K_disc), q);
}
bool in_Q_plus(const CurveRecord& curve, long K_disc, long q) {
  return in_sieve(unchecked(SieveKind::Q_plus, curve, 0, K_disc), q);
}
bool in_Q_minus(const CurveRecord& curve, long K_disc, long q) {
  return in_sieve(unchecked(SieveKind::Q_minus, curve, 0, K_disc), q);
}

Rational theoretical_density(const SieveSpec& spec) {
  if (spec.kind == SieveKind::P_set) return density_P(spec.ell);
  TwoDivision two = classify_two_division(spec.curve);
  std::optional<QCase> c = lemma_case(two, spec.K_disc);
  QDensities d = c ? lemma_primes_density(*c) : q_densities(two, spec.K_disc);
  switch (spec.kind) {
    case SieveKind::Q_plus: return d.plus;
    case SieveKind::Q_minus: return d.minus;
    default: return d.all;
  }
}

SieveReport enumerate_sieve(const SieveSpec& spec, long bound, unsigned workers) {
  spec.validate();
  if (bound < 100) throw Error(Errc::InvalidArgument, "sieve bound must be at least 100");
  const std::vector<long> primes = primes_up_to(bound);
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, 64);

  // Interleaved chunks balance the O(p) point counts across workers.
  const std::size_t chunk = 64;
  std::vector<std::future<std::vector<long>>> jobs;
  for (unsigned w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      std::vector<long> found;
      for (std::size_t start = w * chunk; start < primes.size(); start += workers * chunk) {
        for (std::size_t i = start; i < std::min(primes.size(), start + chunk); ++i) {
          if (in_sieve(spec, primes[i])) found.push_back(primes[i]);
        }
      }
      return found;
    }));
  }
  SieveReport rep;
  rep.spec = spec;
  rep.bound = bound;
  for (auto& j : jobs) {
    auto part = j.get();
    rep.members.insert(rep.members.end(), part.begin(), part.end());
  }
  std::sort(rep.members.begin(), rep.members.end());
  rep.empirical_density = Rational(Int(static_cast<long>(rep.members.size())), Int(static_cast<long>(primes.size())));
  rep.empirical_density.canonicalize();
  rep.theoretical_density = theoretical_density(spec);
  return rep;
}

bool check_support(const Int& a, const SieveSpec& spec, long ell) {
  if (a <= 1) return false;
  for (const auto& [p, e] : factorize(a)) {
    if (e >= ell) return false;
    if (!p.fits_slong_p() || !in_sieve(spec, p.get_si())) return false;
  }
  return true;
}

bool heegner_hypothesis(long K_disc, const Int& M) {
  if (M < 1) throw Error(Errc::InvalidArgument, "M must be positive");
  if (M == 1) return true;
  for (const auto& [p, e] : factorize(M)) {
    if (!p.fits_slong_p() || !splits_in(K_disc, p.get_si())) return false;
  }
  return true;
}

}  // namespace h10
