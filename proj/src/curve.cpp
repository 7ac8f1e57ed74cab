#include "h10/curve.hpp"

#include <cmath>
#include <vector>

namespace h10 {

Int discriminant(const Weierstrass& curve) {
  Int d = curve.raw_discriminant();
  if (d == 0) throw Error(Errc::ZeroDiscriminant, "singular Weierstrass equation");
  return d;
}

bool is_bad_prime(const CurveRecord& curve, long p) {
  if (curve.conductor) return *curve.conductor % p == 0;
  return curve.raw_discriminant() % p == 0;
}

namespace {

void require_good(const Weierstrass& curve, long p) {
  if (p < 2 || !is_prime(static_cast<long long>(p))) {
    throw Error(Errc::InvalidArgument, std::to_string(p) + " is not prime");
  }
  if (discriminant(curve) % p == 0) {
    throw Error(Errc::BadReduction, "p = " + std::to_string(p) + " divides the discriminant");
  }
}

struct Reduced {
  long a1, a2, a3, a4, a6;
};

Reduced reduce(const Weierstrass& c, long p) {
  return {mod(c.a1, p), mod(c.a2, p), mod(c.a3, p), mod(c.a4, p), mod(c.a6, p)};
}

template <class Visit>
void for_each_affine_point(const Weierstrass& curve, long p, Visit&& visit) {
  Reduced r = reduce(curve, p);
  for (long x = 0; x < p; ++x) {
    long rhs = mod(mulmod(mulmod(x, x, p), x, p) + mulmod(r.a2, mulmod(x, x, p), p) + mulmod(r.a4, x, p) + r.a6, p);
    for (long y = 0; y < p; ++y) {
      long lhs = mod(mulmod(y, y, p) + mulmod(mulmod(r.a1, x, p), y, p) + mulmod(r.a3, y, p), p);
      if (lhs == rhs) visit(x, y, r);
    }
  }
}

}  // namespace

long count_points_exhaustive(const Weierstrass& curve, long p) {
  require_good(curve, p);
  long n = 1;
  for_each_affine_point(curve, p, [&](long, long, const Reduced&) { ++n; });
  return n;
}

long count_nonsingular_points(const Weierstrass& curve, long p) {
  if (p < 2 || !is_prime(static_cast<long long>(p))) {
    throw Error(Errc::InvalidArgument, std::to_string(p) + " is not prime");
  }
  long n = 1;
  for_each_affine_point(curve, p, [&](long x, long y, const Reduced& r) {
    long fy = mod(2 * y + mulmod(r.a1, x, p) + r.a3, p);
    long fx = mod(mulmod(r.a1, y, p) - 3 * mulmod(x, x, p) - 2 * mulmod(r.a2, x, p) - r.a4, p);
    if (fx != 0 || fy != 0) ++n;
  });
  return n;
}

long count_points(const Weierstrass& curve, long p) {
  if (p == 2) return count_points_exhaustive(curve, p);
  require_good(curve, p);
  // (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
  long b2 = mod(curve.b2(), p), b4 = mod(curve.b4(), p), b6 = mod(curve.b6(), p);
  std::vector<signed char> chi(static_cast<std::size_t>(p), -1);
  chi[0] = 0;
  for (long s = 1; s < p; ++s) chi[static_cast<std::size_t>(mulmod(s, s, p))] = 1;
  long n = 1 + p;
  for (long x = 0; x < p; ++x) {
    long x2 = mulmod(x, x, p);
    long f = mod(4 * mulmod(x2, x, p) + mulmod(b2, x2, p) + mulmod(2 * b4, x, p) + b6, p);
    n += chi[static_cast<std::size_t>(f)];
  }
  return n;
}

long trace_frobenius(const Weierstrass& curve, long p) { return p + 1 - count_points(curve, p); }

CurveRecord quadratic_twist(const CurveRecord& curve, const Int& d) {
  if (d == 0 || !is_squarefree(d)) throw Error(Errc::InvalidTwist, "twist parameter " + to_string(d) + " is not squarefree");
  if (d == 1) return curve;
  Weierstrass t;
  if (curve.a1 == 0 && curve.a3 == 0) {
    t = {0, d * curve.a2, 0, d * d * curve.a4, d * d * d * curve.a6};
  } else {
    t = {0, d * curve.b2(), 0, 8 * d * d * curve.b4(), 16 * d * d * d * curve.b6()};
  }
  return CurveRecord(curve.label + "^(" + to_string(d) + ")", t);
}

const char* to_string(TwoDivisionCase c) noexcept {
  switch (c) {
    case TwoDivisionCase::RationalTwoTorsion: return "RationalTwoTorsion";
    case TwoDivisionCase::Cyclic3: return "Cyclic3";
    case TwoDivisionCase::S3: return "S3";
  }
  return "Unknown";
}

namespace {

std::vector<Int> divisors(const Int& n) {
  std::vector<Int> out{1};
  for (const auto& [p, e] : factorize(n)) {
    std::size_t base = out.size();
    Int pk = 1;
    for (long k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(Int(out[i] * pk));
    }
  }
  return out;
}

}  // namespace

TwoDivision classify_two_division(const Weierstrass& curve) {
  Int delta = discriminant(curve);
  // X = 4x turns the 2-division cubic into X^3 + b2 X^2 + 8 b4 X + 16 b6, monic
  // integral, so rational roots are integer divisors of the constant term.
  Int c2 = curve.b2(), c1 = 8 * curve.b4(), c0 = 16 * curve.b6();
  auto g = [&](const Int& X) -> Int { return ((X + c2) * X + c1) * X + c0; };
  bool root = (c0 == 0);
  if (!root) {
    for (const Int& dv : divisors(c0)) {
      if (g(dv) == 0 || g(Int(-dv)) == 0) {
        root = true;
        break;
      }
    }
  }
  // disc(4x^3 + b2 x^2 + 2 b4 x + b6) = 16 Delta.
  Int kernel = squarefree_kernel(delta);
  TwoDivisionCase kind = root ? TwoDivisionCase::RationalTwoTorsion
                              : (kernel == 1 ? TwoDivisionCase::Cyclic3 : TwoDivisionCase::S3);
  return {kind, kernel};
}

}  // namespace h10
