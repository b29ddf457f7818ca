"""Pure-Python enumeration kernel.

Reference implementation of the hot loops; ``_kernel.pyx`` mirrors it line
for line with C integers.  Both return, for a cutoff X, every *reduced*
integral form with ``0 < |P| <= X`` whose sign is normalised (``a > 0``, or
``a == 0`` and ``b > 0``), tagged with its position relative to the closed
fundamental domain: 1 on the boundary, 2 in the interior.

Reduction point of a form: the Hessian root in the upper half plane when
P > 0, the non-real root of ``x(t, 1)`` when P < 0.
"""

from __future__ import annotations

from math import isqrt, sqrt

BOUNDARY = 1
INTERIOR = 2

IMPLEMENTATION = "python"


def _cubic_at(a, b, c, d, p, q):
    return ((a * p + b * q) * p + c * q * q) * p + d * q * q * q


def reduced_state(a, b, c, d, disc):
    """0 if not reduced, BOUNDARY or INTERIOR otherwise.  Exact."""
    if disc > 0:
        A = b * b - 3 * a * c
        B = b * c - 9 * a * d
        C = c * c - 3 * b * d
        if A < 0:
            A, B, C = -A, -B, -C
        absB = abs(B)
        if absB > A or A > C:
            return 0
        return INTERIOR if (absB < A and A < C) else BOUNDARY
    if a == 0:
        if b < 0:
            b, c, d = -b, -c, -d
        absc = abs(c)
        if absc > b or d < b:
            return 0
        return INTERIOR if (absc < b and d > b) else BOUNDARY
    # sign(sg * F(p, q)) == sign(p/q - theta) for q > 0, theta the real root
    sg = 1 if a > 0 else -1
    qa = a * sg
    s1 = sg * _cubic_at(a, b, c, d, -b * sg - qa, qa)
    if s1 > 0:
        return 0
    s2 = sg * _cubic_at(a, b, c, d, -b * sg + qa, qa)
    if s2 < 0:
        return 0
    strict = s1 < 0 and s2 > 0
    if d == 0:
        t = c * sg - qa
        if t < 0:
            return 0
        strict = strict and t > 0
    else:
        ad = abs(d)
        s3 = sg * _cubic_at(a, b, c, d, ad, qa)
        if s3 < 0:
            return 0
        s4 = sg * _cubic_at(a, b, c, d, -ad, qa)
        if s4 > 0:
            return 0
        strict = strict and s3 > 0 and s4 < 0
    return INTERIOR if strict else BOUNDARY


def _disc(a, b, c, d):
    return b * b * c * c + 18 * a * b * c * d - 4 * a * c * c * c - 4 * b * b * b * d - 27 * a * a * d * d


def _ceil_div(n, m):
    return -((-n) // m)


def scan_positive(X, part=0, nparts=1):
    """Reduced forms with ``0 < P <= X`` (Hessian reduced, sign normalised)."""
    out = []
    # a == 0: x = v (b u^2 + c u v + d v^2), Hessian (b^2, bc, c^2 - 3bd)
    b = 1
    while b ** 4 <= X:
        if b % nparts == part:
            b3 = b * b * b
            for c in range(-b, b + 1):
                dmax = min((c * c - b * b) // (3 * b), (c * c - 1) // (4 * b))
                dmin = _ceil_div(c * c * b * b - X, 4 * b3)
                for d in range(dmin, dmax + 1):
                    P = b * b * (c * c - 4 * b * d)
                    if 0 < P <= X:
                        st = reduced_state(0, b, c, d, P)
                        if st:
                            out.append((P, st, 0, b, c, d))
        b += 1
    # a >= 1: loop over the Hessian leading coefficient A <= sqrt(X)
    for A in range(1, isqrt(X) + 1):
        if A % nparts != part:
            continue
        amax = isqrt(4 * A // 27)
        bmax = isqrt(A) + 1
        for a in range(1, amax + 1):
            m = 3 * a
            bound = bmax + (3 * a + 1) // 2
            for b in range(-bound, bound + 1):
                num = b * b - A
                if num % m:
                    continue
                c = num // m
                bc = b * c
                dlo = _ceil_div(bc - A, 9 * a)
                dhi = (bc + A) // (9 * a)
                for d in range(dlo, dhi + 1):
                    P = _disc(a, b, c, d)
                    if 0 < P <= X:
                        st = reduced_state(a, b, c, d, P)
                        if st:
                            out.append((P, st, a, b, c, d))
    return out


def negative_bounds(X, a):
    """Coefficient boxes for reduced forms with ``-X <= P < 0`` and leading coefficient a >= 1.

    With the complex root ``x0 + i y0`` in the closed fundamental domain and
    real root theta, ``|P| = 4 a^4 y0^2 |theta - rho|^4``.
    """
    Dmax = sqrt(X / 3.0) / (a * a)  # bound on |theta - rho|^2
    y2max = min(Dmax, (X / (4.0 * a ** 4)) ** (1.0 / 3.0))
    rd = sqrt(Dmax)
    bmax = int(a * (1.5 + rd)) + 1
    cmin = int(a * (0.75 - max(Dmax - 0.75, 0.0) / 3.0)) - 1
    cmax = int(a * (0.75 + rd + y2max)) + 1
    dabs = int(a * (0.5 + rd) * (0.25 + y2max)) + 1
    return bmax, cmin, cmax, dabs


def scan_negative(X, part=0, nparts=1):
    """Reduced forms with ``-X <= P < 0`` (complex root in the fundamental domain)."""
    out = []
    b = 1
    while 3 * b ** 4 <= X:
        if b % nparts == part:
            b3 = b * b * b
            for c in range(-b, b + 1):
                dmax = (X + b * b * c * c) // (4 * b3)
                for d in range(b, dmax + 1):
                    P = b * b * (c * c - 4 * b * d)
                    if -X <= P < 0:
                        st = reduced_state(0, b, c, d, P)
                        if st:
                            out.append((P, st, 0, b, c, d))
        b += 1
    a = 1
    while 27 * a ** 4 <= 16 * X:
        if a % nparts == part:
            bmax, cmin, cmax, dabs = negative_bounds(X, a)
            a2 = a * a
            for b in range(-bmax, bmax + 1):
                for c in range(cmin, cmax + 1):
                    # P(d) = -27 a^2 d^2 + beta d + gamma, need -X <= P(d) < 0
                    beta = 18 * a * b * c - 4 * b * b * b
                    gamma = b * b * c * c - 4 * a * c * c * c
                    disc = beta * beta + 108 * a2 * (gamma + X)
                    if disc < 0:
                        continue
                    r = isqrt(disc) + 1
                    dlo = max(-dabs, (beta - r) // (54 * a2) - 1)
                    dhi = min(dabs, (beta + r) // (54 * a2) + 1)
                    for d in range(dlo, dhi + 1):
                        P = -27 * a2 * d * d + beta * d + gamma
                        if -X <= P < 0:
                            st = reduced_state(a, b, c, d, P)
                            if st:
                                out.append((P, st, a, b, c, d))
        a += 1
    return out
