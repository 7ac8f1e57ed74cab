#pragma once

// Exact integer and rational helpers shared by every module.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace h10 {

using Int = mpz_class;
using Rational = mpq_class;

/// Parses "n", "-n" or "n/d". The result is canonical (lowest terms, d > 0).
Rational parse_rational(std::string_view text);

/// Always "num/den", also for integers ("2/1").
std::string format_rational(const Rational& r);

std::string to_string(const Int& n);

/// p-adic valuation; the argument must be nonzero.
long valuation(const Int& n, long p);
long valuation(const Rational& r, long p);

bool is_prime(const Int& n);
inline bool is_prime(long long n) { return is_prime(Int(static_cast<long>(n))); }

/// Prime factorisation of |n| (n != 0), primes ascending.
std::vector<std::pair<Int, long>> factorize(const Int& n);

/// Sign times the product of primes dividing n to odd multiplicity.
Int squarefree_kernel(const Int& n);
bool is_squarefree(const Int& n);

/// Largest exponent in the factorisation of |n|; 0 for |n| = 1.
long max_prime_exponent(const Int& n);

std::vector<long> primes_up_to(long bound);

inline long mod(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

inline long mod(const Int& a, long m) {
  Int r = a % m;
  if (r < 0) r += m;
  return r.get_si();
}

inline long mulmod(long a, long b, long m) {
  return static_cast<long>((static_cast<__int128>(a) * b) % m);
}

long powmod(long base, unsigned long exp, long m);

Int ipow(const Int& base, unsigned long exp);

/// Floor of the square root for n >= 0.
inline Int isqrt(const Int& n) {
  Int r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

inline bool is_square(const Int& n) { return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0; }

bool is_square(const Rational& r);

}  // namespace h10
