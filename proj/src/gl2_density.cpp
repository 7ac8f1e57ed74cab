#include "h10/gl2_density.hpp"

#include <algorithm>
#include <set>

namespace h10 {

namespace {

void require_small_prime(long ell) {
  if (ell < 2 || ell > kMaxEnumeratedEll || !is_prime(static_cast<long long>(ell))) {
    throw Error(Errc::InvalidArgument,
                "enumeration needs a prime ell <= " + std::to_string(kMaxEnumeratedEll) + ", got " + std::to_string(ell));
  }
}

void require_odd_prime(long ell) {
  if (ell <= 2 || !is_prime(static_cast<long long>(ell))) {
    throw Error(Errc::InvalidArgument, "ell must be an odd prime, got " + std::to_string(ell));
  }
}

}  // namespace

GL2Census gl2_census(long ell) {
  require_small_prime(ell);
  GL2Census c;
  c.ell = ell;
  c.sl2_by_trace.assign(static_cast<std::size_t>(ell), 0);
  for (long a = 0; a < ell; ++a)
    for (long b = 0; b < ell; ++b)
      for (long cc = 0; cc < ell; ++cc)
        for (long d = 0; d < ell; ++d) {
          long det = mod(a * d - b * cc, ell);
          if (det == 0) continue;
          ++c.gl2_order;
          if (det != 1) continue;
          ++c.sl2_order;
          long tr = (a + d) % ell;
          ++c.sl2_by_trace[static_cast<std::size_t>(tr)];
          if (tr != 2 % ell) ++c.det1_trace_not2;
        }
  return c;
}

long sl2_trace_count(long ell, long trace) {
  return gl2_census(ell).sl2_by_trace[static_cast<std::size_t>(mod(trace, ell))];
}

Rational density_P(long ell) {
  require_odd_prime(ell);
  Rational r(Int(ell * ell - ell - 1), Int((ell - 1) * (ell * ell - 1)));
  r.canonicalize();
  return r;
}

DensityReport density_P_report(long ell) {
  require_odd_prime(ell);
  DensityReport rep;
  rep.ell = ell;
  Int l = ell;
  rep.set_size = l * (l * l - l - 1);
  rep.group_size = (l * l - 1) * (l * l - l);
  rep.density = Rational(rep.set_size, rep.group_size);
  rep.density.canonicalize();
  return rep;
}

DensityReport density_P_enumerated(long ell) {
  require_odd_prime(ell);
  GL2Census c = gl2_census(ell);
  DensityReport rep;
  rep.ell = ell;
  rep.set_size = c.det1_trace_not2;
  rep.group_size = c.gl2_order;
  rep.density = Rational(rep.set_size, rep.group_size);
  rep.density.canonicalize();
  return rep;
}

const char* to_string(QCase c) noexcept {
  switch (c) {
    case QCase::Cyclic3: return "Cyclic3";
    case QCase::S3Disjoint: return "S3-disjoint";
    case QCase::S3ContainsI: return "S3-contains-i";
    case QCase::RationalTwoTorsion: return "RationalTwoTorsion";
  }
  return "Unknown";
}

QDensities lemma_primes_density(QCase c) {
  switch (c) {
    case QCase::Cyclic3: return {Rational(1, 3), Rational(1, 6), Rational(1, 6)};
    case QCase::S3Disjoint: return {Rational(1, 6), Rational(1, 12), Rational(1, 12)};
    case QCase::S3ContainsI: return {Rational(1, 6), Rational(1, 6), Rational(0)};
    case QCase::RationalTwoTorsion: return {Rational(0), Rational(0), Rational(0)};
  }
  throw Error(Errc::InvalidArgument, "unknown QCase");
}

std::optional<QCase> lemma_case(const TwoDivision& two, long K_disc) {
  if (two.kind == TwoDivisionCase::RationalTwoTorsion) return QCase::RationalTwoTorsion;
  Int k = squarefree_kernel(Int(K_disc));
  if (k == -1) return std::nullopt;
  if (two.kind == TwoDivisionCase::Cyclic3) return QCase::Cyclic3;
  if (two.kernel == -1) return QCase::S3ContainsI;
  if (two.kernel == k) return std::nullopt;
  return QCase::S3Disjoint;
}

namespace {

// A square class of Q* as the set of "atoms" (-1 and primes) dividing it to
// odd order. Distinct atoms are independent in Q*/Q*^2.
std::set<Int> atoms(const Int& n) {
  std::set<Int> s;
  if (n < 0) s.insert(Int(-1));
  for (const auto& [p, e] : factorize(n)) {
    if (e % 2 == 1) s.insert(p);
  }
  return s;
}

}  // namespace

QDensities q_densities(const TwoDivision& two, long K_disc) {
  if (two.kind == TwoDivisionCase::RationalTwoTorsion) return {Rational(0), Rational(0), Rational(0)};
  std::set<Int> fF = atoms(two.kernel), fK = atoms(Int(K_disc)), fI{Int(-1)};
  std::vector<Int> basis;
  for (const auto* s : {&fF, &fK, &fI}) basis.insert(basis.end(), s->begin(), s->end());
  std::sort(basis.begin(), basis.end());
  basis.erase(std::unique(basis.begin(), basis.end()), basis.end());

  const bool has_F = two.kind == TwoDivisionCase::S3;
  long all = 0, plus = 0, minus = 0;
  const long total = 1L << basis.size();
  for (long mask = 0; mask < total; ++mask) {
    auto chi = [&](const std::set<Int>& s) {
      int v = 1;
      for (std::size_t i = 0; i < basis.size(); ++i) {
        if ((mask >> i & 1L) && s.count(basis[i])) v = -v;
      }
      return v;
    };
    if (has_F && chi(fF) != 1) continue;  // Frob must be even in S3
    if (chi(fK) != 1) continue;           // split in K
    ++all;
    (chi(fI) == 1 ? plus : minus) += 1;
  }
  auto dens = [&](long hits) {
    Rational r(Int(2 * hits), Int(3 * total));
    r.canonicalize();
    return r;
  };
  return {dens(all), dens(plus), dens(minus)};
}

}  // namespace h10
