#include "h10/padic.hpp"

#include <algorithm>

#include "h10/sieves.hpp"

namespace h10 {

namespace {

Int ppow(long p, long k) { return k <= 0 ? Int(1) : ipow(Int(p), static_cast<unsigned long>(k)); }

Int mod_int(const Int& a, const Int& m) {
  Int r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

Int inverse_mod(const Int& a, const Int& m) {
  Int r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) {
    throw Error(Errc::InvalidArgument, "no inverse of " + a.get_str() + " mod " + m.get_str());
  }
  return r;
}

void require_prime(long p) {
  if (p < 2 || !is_prime(static_cast<long long>(p))) throw Error(Errc::InvalidArgument, std::to_string(p) + " is not prime");
}

}  // namespace

PadicNum PadicNum::exact_zero(long p) {
  PadicNum z;
  z.p_ = p;
  return z;
}

PadicNum PadicNum::zero_to(long p, long prec) {
  PadicNum z;
  z.p_ = p;
  z.exact_ = false;
  z.val_ = prec;
  z.prec_ = prec;
  z.unit_ = 0;
  return z;
}

PadicNum PadicNum::normalized(long p, const Int& scaled, long shift, long prec) {
  if (prec <= shift) return zero_to(p, prec);
  Int reduced = mod_int(scaled, ppow(p, prec - shift));
  if (reduced == 0) return zero_to(p, prec);
  long v = h10::valuation(reduced, p);
  PadicNum r;
  r.p_ = p;
  r.exact_ = false;
  r.val_ = shift + v;
  r.prec_ = prec;
  r.unit_ = reduced / ppow(p, v);
  r.unit_ = mod_int(r.unit_, ppow(p, prec - r.val_));
  return r;
}

PadicNum PadicNum::from_rational(const Rational& r, long p, long prec) {
  require_prime(p);
  if (r == 0) return exact_zero(p);
  long v = h10::valuation(r, p);
  if (v >= prec) return zero_to(p, prec);
  Int num = r.get_num(), den = r.get_den();
  if (v > 0) num /= ppow(p, v);
  if (v < 0) den /= ppow(p, -v);
  Int M = ppow(p, prec - v);
  PadicNum out;
  out.p_ = p;
  out.exact_ = false;
  out.val_ = v;
  out.prec_ = prec;
  out.unit_ = mod_int(num * inverse_mod(den, M), M);
  return out;
}

long PadicNum::valuation() const {
  if (exact_) return LONG_MAX;
  if (val_ >= prec_) {
    throw Error(Errc::PrecisionExhausted, "value is O(" + std::to_string(p_) + "^" + std::to_string(prec_) + ")");
  }
  return val_;
}

Rational PadicNum::to_rational() const {
  if (exact_ || val_ >= prec_) return Rational(0);
  Rational r(unit_);
  if (val_ >= 0) {
    r *= Rational(ppow(p_, val_));
  } else {
    r /= Rational(ppow(p_, -val_));
  }
  r.canonicalize();
  return r;
}

PadicNum PadicNum::with_precision(long prec) const {
  if (exact_ || prec >= prec_) return *this;
  if (val_ >= prec) return zero_to(p_, prec);
  PadicNum r = *this;
  r.prec_ = prec;
  r.unit_ = mod_int(unit_, ppow(p_, prec - val_));
  return r;
}

bool PadicNum::agrees_with(const PadicNum& o) const { return (*this - o).is_zero_to_precision(); }

void require_same_field(const PadicNum& a, const PadicNum& b) {
  if (a.p() != b.p()) {
    throw Error(Errc::FieldMismatch, "Q_" + std::to_string(a.p()) + " vs Q_" + std::to_string(b.p()));
  }
}

PadicNum PadicNum::operator-() const {
  if (!is_certified_nonzero()) return *this;
  PadicNum r = *this;
  r.unit_ = mod_int(-unit_, ppow(p_, prec_ - val_));
  return r;
}

PadicNum operator+(const PadicNum& a, const PadicNum& b) {
  require_same_field(a, b);
  if (a.exact_) return b;
  if (b.exact_) return a;
  long prec = std::min(a.prec_, b.prec_);
  long w = std::min(a.val_, b.val_);
  if (w >= prec) return PadicNum::zero_to(a.p_, prec);
  Int s = a.unit_ * ppow(a.p_, a.val_ - w) + b.unit_ * ppow(a.p_, b.val_ - w);
  return PadicNum::normalized(a.p_, s, w, prec);
}

PadicNum operator*(const PadicNum& a, const PadicNum& b) {
  require_same_field(a, b);
  if (a.exact_ || b.exact_) return PadicNum::exact_zero(a.p_);
  long prec = std::min(a.prec_ + b.val_, b.prec_ + a.val_);
  return PadicNum::normalized(a.p_, a.unit_ * b.unit_, a.val_ + b.val_, prec);
}

PadicNum operator/(const PadicNum& a, const PadicNum& b) {
  require_same_field(a, b);
  if (b.exact_) throw Error(Errc::InvalidArgument, "p-adic division by zero");
  if (!b.is_certified_nonzero()) {
    throw Error(Errc::PrecisionExhausted, "divisor is O(" + std::to_string(b.p_) + "^" + std::to_string(b.prec_) + ")");
  }
  if (a.exact_) return a;
  long rel = std::min(a.prec_ - a.val_, b.prec_ - b.val_);
  long v = a.val_ - b.val_;
  if (!a.is_certified_nonzero()) return PadicNum::zero_to(a.p_, v + rel);
  Int M = ppow(a.p_, rel);
  return PadicNum::normalized(a.p_, mod_int(a.unit_ * inverse_mod(b.unit_, M), M), v, v + rel);
}

PadicNum PadicNum::pow(unsigned long e) const {
  PadicNum result = from_rational(Rational(1), p_, precision() == kInfinitePrecision ? kDefaultPadicPrecision : precision() + kConstantSlack);
  PadicNum base = *this;
  while (e > 0) {
    if (e & 1UL) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

std::string PadicNum::str() const {
  std::string p = std::to_string(p_);
  if (exact_) return "0";
  if (val_ >= prec_) return "O(" + p + "^" + std::to_string(prec_) + ")";
  return p + "^" + std::to_string(val_) + " * " + unit_.get_str() + " + O(" + p + "^" + std::to_string(prec_) + ")";
}

// ---------------------------------------------------------------------------

namespace {

long sqrt_mod_prime(long a, long p) {
  a = mod(a, p);
  if (a == 0) return 0;
  if (p % 4 == 3) return powmod(a, static_cast<unsigned long>((p + 1) / 4), p);
  // Tonelli-Shanks
  long q = p - 1, s = 0;
  while (q % 2 == 0) {
    q /= 2;
    ++s;
  }
  long z = 2;
  while (powmod(z, static_cast<unsigned long>((p - 1) / 2), p) != p - 1) ++z;
  long m = s, c = powmod(z, static_cast<unsigned long>(q), p);
  long t = powmod(a, static_cast<unsigned long>(q), p), r = powmod(a, static_cast<unsigned long>((q + 1) / 2), p);
  while (t != 1) {
    long i = 0, tt = t;
    while (tt != 1) {
      tt = mulmod(tt, tt, p);
      ++i;
    }
    long b = c;
    for (long j = 0; j < m - i - 1; ++j) b = mulmod(b, b, p);
    m = i;
    c = mulmod(b, b, p);
    t = mulmod(t, c, p);
    r = mulmod(r, b, p);
  }
  return r;
}

}  // namespace

PadicNum hensel_sqrt(const Int& D, long p, long precision) {
  require_prime(p);
  if (precision < 1) throw Error(Errc::InvalidArgument, "precision must be positive");
  if (p == 2) {
    if (mod(D, 8) != 1) throw Error(Errc::NotSplit, "D = " + D.get_str() + " is not 1 mod 8");
    Int r = 1;
    for (long k = 3; k <= precision; ++k) {
      if (mod_int(Int(r * r - D), ppow(2, k + 1)) != 0) r += ppow(2, k - 1);
    }
    if (mod(r, 4) == 3) r = -r;
    return PadicNum::from_rational(Rational(r), 2, precision);
  }
  long d = mod(D, p);
  if (d == 0) throw Error(Errc::NotSplit, std::to_string(p) + " ramifies in Q(sqrt(" + D.get_str() + "))");
  if (powmod(d, static_cast<unsigned long>((p - 1) / 2), p) != 1) {
    throw Error(Errc::NotSplit, D.get_str() + " is not a square mod " + std::to_string(p));
  }
  long r0 = sqrt_mod_prime(d, p);
  Int r = std::min(r0, p - r0);
  for (long k = 1; k < precision;) {
    long k2 = std::min(2 * k, precision);
    Int M = ppow(p, k2);
    r = mod_int(Int(r - (r * r - D) * inverse_mod(Int(2 * r), M)), M);
    k = k2;
  }
  return PadicNum::from_rational(Rational(r), p, precision);
}

EmbeddingChoice EmbeddingChoice::make(long D, long p, long precision, bool other_branch) {
  if (D == 0 || D == 1 || !is_squarefree(Int(D))) {
    throw Error(Errc::InvalidArgument, "D must be squarefree and not 0 or 1");
  }
  PadicNum root = hensel_sqrt(Int(D), p, precision);
  return {D, p, other_branch ? -root : root};
}

PadicNum embed(const Rational& r, long p, long precision) { return PadicNum::from_rational(r, p, precision); }

PadicNum embed(const QuadElem& elem, const EmbeddingChoice& emb) {
  if (elem.D() != emb.D) {
    throw Error(Errc::FieldMismatch, "element of Q(sqrt(" + std::to_string(elem.D()) + ")) under an embedding of Q(sqrt(" +
                                         std::to_string(emb.D) + "))");
  }
  if (elem.is_zero()) return PadicNum::exact_zero(emb.p);
  long prec = emb.root.precision();
  PadicNum out = PadicNum::from_rational(elem.u(), emb.p, prec);
  if (elem.v() != 0) out += PadicNum::from_rational(elem.v(), emb.p, prec) * emb.root;
  if (!out.is_certified_nonzero()) {
    throw Error(Errc::PrecisionExhausted, "embedding of " + elem.str() + " is indistinguishable from 0");
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

template <class T>
std::vector<T> mul_trunc(const std::vector<T>& a, const std::vector<T>& b, std::size_t n) {
  std::vector<T> c(n, T(0));
  for (std::size_t i = 0; i < std::min(n, a.size()); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size() && i + j < n; ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}

// t^k * s, truncated
template <class T>
std::vector<T> shift(const std::vector<T>& s, std::size_t k, std::size_t n) {
  std::vector<T> c(n, T(0));
  for (std::size_t i = 0; i + k < n && i < s.size(); ++i) c[i + k] = s[i];
  return c;
}

}  // namespace

std::vector<Int> formal_w(const Weierstrass& E, long n) {
  if (n < 1) throw Error(Errc::InvalidArgument, "series length must be positive");
  const auto N = static_cast<std::size_t>(n);
  // W = 1 + a1 t W + a2 t^2 W + a3 t^3 W^2 + a4 t^4 W^2 + a6 t^6 W^3; each
  // pass fixes one more coefficient.
  std::vector<Int> W(N, Int(0));
  W[0] = 1;
  for (long pass = 0; pass < n; ++pass) {
    std::vector<Int> W2 = mul_trunc(W, W, N), W3 = mul_trunc(W2, W, N);
    std::vector<Int> next(N, Int(0));
    next[0] = 1;
    auto acc = [&](const Int& c, const std::vector<Int>& s, std::size_t k) {
      if (c == 0) return;
      auto sh = shift(s, k, N);
      for (std::size_t i = 0; i < N; ++i) next[i] += c * sh[i];
    };
    acc(E.a1, W, 1);
    acc(E.a2, W, 2);
    acc(E.a3, W2, 3);
    acc(E.a4, W2, 4);
    acc(E.a6, W3, 6);
    W = std::move(next);
  }
  return W;
}

FormalSeries formal_differential(const Weierstrass& E, long n) {
  const auto N = static_cast<std::size_t>(n);
  std::vector<Int> W = formal_w(E, n);
  // V = 1/W, x = t^-2 V, y = -t^-3 V, so omega = (-2V + tV') / (-2V + a1 t V + a3 t^3).
  std::vector<Int> V(N, Int(0));
  V[0] = 1;
  for (std::size_t k = 1; k < N; ++k) {
    Int s = 0;
    for (std::size_t j = 1; j <= k; ++j) s += W[j] * V[k - j];
    V[k] = -s;
  }
  std::vector<Rational> num(N), den(N);
  for (std::size_t k = 0; k < N; ++k) {
    num[k] = Rational(-2 * V[k] + Int(static_cast<long>(k)) * V[k]);
    den[k] = Rational(-2 * V[k]);
    if (k >= 1) den[k] += Rational(E.a1 * V[k - 1]);
  }
  if (N > 3) den[3] += Rational(E.a3);
  std::vector<Rational> q(N);
  for (std::size_t k = 0; k < N; ++k) {
    Rational s = num[k];
    for (std::size_t j = 1; j <= k; ++j) s -= den[j] * q[k - j];
    q[k] = s / den[0];
  }
  FormalSeries out;
  out.coeffs.reserve(N);
  for (std::size_t k = 0; k < N; ++k) {
    q[k].canonicalize();
    if (q[k].get_den() != 1) {
      throw Error(Errc::InvariantViolation, "non-integral coefficient " + format_rational(q[k]) + " of t^" + std::to_string(k));
    }
    out.coeffs.push_back(q[k].get_num());
  }
  return out;
}

ECPoint<PadicNum> formal_point(const Weierstrass& E, const PadicNum& t, long terms) {
  if (!t.is_certified_nonzero() || t.valuation() < 1) {
    throw Error(Errc::NoFormalNeighborhood, "t = " + t.str() + " needs positive exact valuation");
  }
  std::vector<Int> W = formal_w(E, terms);
  PadicNum sum = PadicNum::exact_zero(t.p());
  PadicNum tk = field_const(t, 1);
  for (long k = 0; k < terms; ++k) {
    sum += field_const(t, W[static_cast<std::size_t>(k)]) * tk;
    tk *= t;
  }
  sum = sum.with_precision(terms * t.valuation());
  PadicNum t2w = t * t * sum;
  PadicNum x = field_const(t, 1) / t2w;
  PadicNum y = -(field_const(t, 1) / (t2w * t));
  return {x, y, false};
}

PadicNum partial_integral(const FormalSeries& series, const PadicNum& a, long n) {
  if (n < 1 || static_cast<std::size_t>(n) > series.size()) {
    throw Error(Errc::InvalidArgument, "series has " + std::to_string(series.size()) + " coefficients, need " + std::to_string(n));
  }
  PadicNum sum = PadicNum::exact_zero(a.p());
  PadicNum ar = a;
  for (long r = 1; r <= n; ++r) {
    const Int& b = series.coeffs[static_cast<std::size_t>(r - 1)];
    if (b != 0) sum += field_const(a, b) * ar / field_const(a, Int(r));
    if (r < n) ar *= a;
  }
  return sum;
}

std::optional<long> certified_valuation(const FormalSeries& series, const PadicNum& a, long n) {
  if (!a.is_certified_nonzero() || a.valuation() < 1) {
    throw Error(Errc::InvalidArgument, "certified_valuation needs v_p(a) >= 1, got " + a.str());
  }
  PadicNum s = partial_integral(series, a, n);
  if (!s.is_certified_nonzero()) return std::nullopt;
  long m = s.valuation();
  if (n - m <= 0) return std::nullopt;
  if (ipow(Int(a.p()), static_cast<unsigned long>(n - m)) > n) return m;
  return std::nullopt;
}

namespace {

long floor_log(long r, long p) {
  long k = 0;
  for (long q = p; q <= r; q *= p) ++k;
  return k;
}

struct Landing {
  long m = 1;
  bool torsion = false;
  PadicNum t;
};

template <class F, class Embed>
Landing land_in_formal_group(const Weierstrass& E, const ECPoint<F>& P, Embed&& to_padic, long p) {
  if (P.infinity) return {1, true, PadicNum::exact_zero(p)};
  ECPoint<F> Q = P;
  for (long m = 1; m <= kMaxFormalMultiplier; ++m) {
    if (m > 1) Q = add_points(E, Q, P);
    if (Q.infinity) return {m, true, PadicNum::exact_zero(p)};
    if (field_is_zero(Q.y) || field_is_zero(Q.x)) continue;
    PadicNum x = to_padic(Q.x), y = to_padic(Q.y);
    if (!x.is_certified_nonzero() || !y.is_certified_nonzero()) continue;
    if (x.valuation() >= 0) continue;
    PadicNum t = -(x / y);
    if (t.is_certified_nonzero() && t.valuation() >= 1) return {m, false, t};
  }
  throw Error(Errc::NoFormalNeighborhood, "no m <= " + std::to_string(kMaxFormalMultiplier) + " puts the point in the formal group");
}

FormalLog finish_log(const Weierstrass& E, const Landing& land, long p, long n) {
  FormalLog out;
  out.m = land.m;
  out.torsion = land.torsion;
  out.t = land.t;
  if (land.torsion) {
    out.truncation_bound = kInfinitePrecision;
    out.log = PadicNum::exact_zero(p);
    return out;
  }
  FormalSeries omega = formal_differential(E, n);
  long vt = land.t.valuation();
  // r v(t) - floor(log_p r) is nondecreasing in r, so its tail minimum is at n + 1.
  out.truncation_bound = (n + 1) * vt - floor_log(n + 1, p);
  for (long r = 1; r <= n; ++r) out.partial_sums.push_back(partial_integral(omega, land.t, r));
  PadicNum s = out.partial_sums.back().with_precision(out.truncation_bound);
  out.log = s / field_const(s.is_exact_zero() ? land.t : s, Int(land.m));
  return out;
}

}  // namespace

FormalLog formal_log(const Weierstrass& E, const ECPoint<Rational>& P, long p, long n, long precision) {
  require_prime(p);
  auto to_padic = [&](const Rational& r) { return PadicNum::from_rational(r, p, precision); };
  return finish_log(E, land_in_formal_group(E, P, to_padic, p), p, n);
}

FormalLog formal_log(const Weierstrass& E, const ECPoint<QuadElem>& P, const EmbeddingChoice& emb, long n) {
  auto to_padic = [&](const QuadElem& a) { return embed(a, emb); };
  return finish_log(E, land_in_formal_group(E, P, to_padic, emb.p), emb.p, n);
}

FormalLog formal_log(const Weierstrass& E, const ECPoint<PadicNum>& P, long n) {
  long p = P.x.p();
  auto to_padic = [](const PadicNum& a) { return a; };
  return finish_log(E, land_in_formal_group(E, P, to_padic, p), p, n);
}

// ---------------------------------------------------------------------------

KLReport check_kl(const CurveRecord& E, long K_disc, const HeegnerFixture& fixture, const EmbeddingChoice& emb, long ceiling) {
  if (fixture.point.infinity || !on_curve(E, fixture.point)) {
    throw Error(Errc::BadFixture, "Heegner fixture point is not on " + E.label);
  }
  if (fixture.point.x.D() != K_disc) {
    throw Error(Errc::FieldMismatch, "fixture lives over Q(sqrt(" + std::to_string(fixture.point.x.D()) + "))");
  }
  if (E.torsion_order % 2 == 0) throw Error(Errc::PreconditionFailed, "E(Q)[2] != 0 for " + E.label);
  if (!E.conductor) throw Error(Errc::PreconditionFailed, "conductor of " + E.label + " unknown");
  if (!heegner_hypothesis(K_disc, 2 * *E.conductor)) {
    throw Error(Errc::PreconditionFailed, "Heegner hypothesis for 2N fails for K_disc " + std::to_string(K_disc));
  }
  if (emb.p != 2) throw Error(Errc::InvalidArgument, "the unit condition is 2-adic");

  KLReport rep;
  rep.ns_count = count_nonsingular_points(E, 2);
  rep.manin_constant = E.manin_constant;
  auto to_padic = [&](const QuadElem& a) { return embed(a, emb); };
  Landing land = land_in_formal_group(E, fixture.point, to_padic, 2);
  rep.m = land.m;
  if (land.torsion) {
    // log vanishes: never a unit
    rep.v_log = kInfinitePrecision;
    rep.quantity_valuation = kInfinitePrecision;
    rep.integral = true;
    rep.unit = false;
    return rep;
  }
  rep.v_t = land.t.valuation();
  std::optional<long> v;
  for (long n = 1; n <= ceiling && !v; ++n) {
    v = certified_valuation(formal_differential(E, n), land.t, n);
    if (v) rep.n_used = n;
  }
  if (!v) throw Error(Errc::Inconclusive, "no n <= " + std::to_string(ceiling) + " certifies v_2(log)");
  rep.v_log = *v - valuation(Int(land.m), 2);
  rep.quantity_valuation = valuation(Int(rep.ns_count), 2) - valuation(Int(2 * rep.manin_constant), 2) + rep.v_log;
  rep.integral = rep.quantity_valuation >= 0;
  rep.unit = rep.quantity_valuation == 0;
  return rep;
}

bool check_kl_unit(const CurveRecord& E, long K_disc, const HeegnerFixture& fixture, const EmbeddingChoice& emb, long ceiling) {
  return check_kl(E, K_disc, fixture, emb, ceiling).unit;
}

}  // namespace h10
