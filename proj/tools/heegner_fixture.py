#!/usr/bin/env python3
"""Regenerate the 557b1 / Q(sqrt(-7)) Heegner fixture.

Evaluates the modular parametrization at a Heegner point of level 557,
recognises x as a rational by continued fractions and solves for y exactly.

    python3 tools/heegner_fixture.py [digits] [terms] > data/fixtures/heegner_557b1_-7.json
"""

import json
import sys
from fractions import Fraction
from math import isqrt

import mpmath as mp

A = (0, -1, 1, -268, 1781)
N = 557
D = -7


def primes_upto(n):
    flags = bytearray([1]) * (n + 1)
    flags[0:2] = b"\0\0"
    for i in range(2, isqrt(n) + 1):
        if flags[i]:
            flags[i * i :: i] = bytearray(len(flags[i * i :: i]))
    return [i for i, f in enumerate(flags) if f]


def trace(p):
    a1, a2, a3, a4, a6 = A
    count = 1
    for x in range(p):
        for y in range(p):
            if (y * y + a1 * x * y + a3 * y - (x**3 + a2 * x * x + a4 * x + a6)) % p == 0:
                count += 1
    return p + 1 - count


def trace_fast(p):
    a1, a2, a3, a4, a6 = A
    b2, b4, b6 = a1 * a1 + 4 * a2, 2 * a4 + a1 * a3, a3 * a3 + 4 * a6
    chi = [-1] * p
    chi[0] = 0
    for z in range(1, p):
        chi[z * z % p] = 1
    return -sum(chi[(4 * x**3 + b2 * x * x + 2 * b4 * x + b6) % p] for x in range(p))


def coefficients(terms, a_bad):
    ps = primes_upto(terms)
    ap = {p: (a_bad if p == N else (trace(p) if p == 2 else trace_fast(p))) for p in ps}
    an = [0] * (terms + 1)
    an[1] = 1
    spf = list(range(terms + 1))
    for p in ps:
        for m in range(p, terms + 1, p):
            if spf[m] == m:
                spf[m] = p
    prime_power = {}
    for p in ps:
        prev, cur, pk = 1, ap[p], p
        while pk <= terms:
            prime_power[pk] = cur
            prev, cur = cur, ap[p] * cur - (0 if p == N else p * prev)
            pk *= p
    for n in range(2, terms + 1):
        p, m, pk = spf[n], n, 1
        while m % p == 0:
            m //= p
            pk *= p
        an[n] = prime_power[pk] * an[m]
    return an


def main():
    mp.mp.dps = int(sys.argv[1]) if len(sys.argv) > 1 else 130
    terms = int(sys.argv[2]) if len(sys.argv) > 2 else 21000
    a1, a2, a3, a4, a6 = A
    b2, b4, b6 = a1 * a1 + 4 * a2, 2 * a4 + a1 * a3, a3 * a3 + 4 * a6

    # Root number +1 (L(E,1) != 0) forces a_N = +1 for split multiplicative reduction.
    an = coefficients(terms, 1)
    beta = min(b for b in range(2 * N) if (b * b - D) % (4 * N) == 0)
    tau = (-beta + mp.sqrt(-D) * 1j) / (2 * N)

    roots = sorted((mp.mpf(r.real) for r in mp.polyroots([4, b2, 2 * b4, b6], maxsteps=200, extraprec=200)), reverse=True)
    e1, e2, e3 = roots
    w1 = mp.pi / mp.agm(mp.sqrt(e1 - e3), mp.sqrt(e1 - e2))
    w2 = 1j * mp.pi / mp.agm(mp.sqrt(e1 - e3), mp.sqrt(e2 - e3))
    ql = mp.exp(2j * mp.pi * w2 / w1)

    def wp(z):
        u = mp.exp(2j * mp.pi * z / w1)
        s = mp.mpf(1) / 12 + u / (1 - u) ** 2
        n = 1
        while True:
            qn = ql**n
            t = qn * u / (1 - qn * u) ** 2 + qn / u / (1 - qn / u) ** 2 - 2 * qn / (1 - qn) ** 2
            s += t
            if abs(t) < mp.mpf(10) ** (-mp.mp.dps + 5):
                return (2j * mp.pi / w1) ** 2 * s
            n += 1

    q = mp.exp(2j * mp.pi * tau)
    z, qn = mp.mpc(0), mp.mpc(1)
    for n in range(1, terms + 1):
        qn *= q
        if an[n]:
            z += an[n] * qn / n
    x_num = (wp(z) - mp.mpf(b2) / 12).real
    x = Fraction(mp.nstr(x_num, mp.mp.dps - 10)).limit_denominator(10 ** (mp.mp.dps // 3))

    # y = (-a1 x - a3 + w sqrt(D)) / 2 with w rational.
    f = 4 * x**3 + b2 * x * x + 2 * b4 * x + b6
    w2r = f / D
    if w2r < 0 or isqrt(w2r.numerator) ** 2 != w2r.numerator or isqrt(w2r.denominator) ** 2 != w2r.denominator:
        sys.exit("x was not recognised as the x-coordinate of a Q(sqrt(%d))-point" % D)
    w = Fraction(isqrt(w2r.numerator), isqrt(w2r.denominator))
    yu = (-a1 * x - a3) / 2
    yv = w / 2

    def frac(r):
        return "%d/%d" % (r.numerator, r.denominator)

    print(json.dumps({
        "curve_label": "557b1",
        "K_disc": D,
        "x": {"u": frac(x), "v": "0/1"},
        "y": {"u": frac(yu), "v": frac(yv)},
        "provenance": "tools/heegner_fixture.py: modular parametrization at tau = (-%d + sqrt(%d))/%d, %d terms at %d digits"
        % (beta, D, 2 * N, terms, mp.mp.dps),
    }, indent=2))


if __name__ == "__main__":
    main()
