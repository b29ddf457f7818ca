# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernel; a line-for-line port of ``_kernel_py``.

All arithmetic is in 64-bit integers, which is exact for cutoffs up to
``kernel.MAX_CUTOFF``.
"""

from libc.math cimport sqrt, pow

ctypedef long long i64

DEF BOUNDARY = 1
DEF INTERIOR = 2

IMPLEMENTATION = "cython"


cdef inline i64 floordiv(i64 n, i64 m) nogil:
    cdef i64 q = n / m
    if (n % m != 0) and ((n < 0) != (m < 0)):
        q -= 1
    return q


cdef inline i64 ceildiv(i64 n, i64 m) nogil:
    return -floordiv(-n, m)


cdef inline i64 isqrt64(i64 n) nogil:
    cdef i64 r = <i64>sqrt(<double>n)
    while r * r > n:
        r -= 1
    while (r + 1) * (r + 1) <= n:
        r += 1
    return r


cdef inline i64 cubic_at(i64 a, i64 b, i64 c, i64 d, i64 p, i64 q) nogil:
    return ((a * p + b * q) * p + c * q * q) * p + d * q * q * q


cdef inline i64 disc(i64 a, i64 b, i64 c, i64 d) nogil:
    return b * b * c * c + 18 * a * b * c * d - 4 * a * c * c * c - 4 * b * b * b * d - 27 * a * a * d * d


cdef int state(i64 a, i64 b, i64 c, i64 d, i64 P) nogil:
    cdef i64 A, B, C, absB, absc, sg, qa, s1, s2, s3, s4, t, ad
    cdef bint strict
    if P > 0:
        A = b * b - 3 * a * c
        B = b * c - 9 * a * d
        C = c * c - 3 * b * d
        if A < 0:
            A = -A
            B = -B
            C = -C
        absB = B if B >= 0 else -B
        if absB > A or A > C:
            return 0
        return INTERIOR if (absB < A and A < C) else BOUNDARY
    if a == 0:
        if b < 0:
            b = -b
            c = -c
            d = -d
        absc = c if c >= 0 else -c
        if absc > b or d < b:
            return 0
        return INTERIOR if (absc < b and d > b) else BOUNDARY
    sg = 1 if a > 0 else -1
    qa = a * sg
    s1 = sg * cubic_at(a, b, c, d, -b * sg - qa, qa)
    if s1 > 0:
        return 0
    s2 = sg * cubic_at(a, b, c, d, -b * sg + qa, qa)
    if s2 < 0:
        return 0
    strict = s1 < 0 and s2 > 0
    if d == 0:
        t = c * sg - qa
        if t < 0:
            return 0
        strict = strict and t > 0
    else:
        ad = d if d >= 0 else -d
        s3 = sg * cubic_at(a, b, c, d, ad, qa)
        if s3 < 0:
            return 0
        s4 = sg * cubic_at(a, b, c, d, -ad, qa)
        if s4 > 0:
            return 0
        strict = strict and s3 > 0 and s4 < 0
    return INTERIOR if strict else BOUNDARY


def reduced_state(a, b, c, d, P):
    return state(a, b, c, d, P)


def scan_positive(i64 X, i64 part=0, i64 nparts=1):
    cdef list out = []
    cdef i64 A, a, b, c, d, m, bound, num, bc, dlo, dhi, amax, bmax, b3, dmin, dmax, P, t
    cdef int st
    b = 1
    while b * b * b * b <= X:
        if b % nparts == part:
            b3 = b * b * b
            for c in range(-b, b + 1):
                dmax = floordiv(c * c - b * b, 3 * b)
                t = floordiv(c * c - 1, 4 * b)
                if t < dmax:
                    dmax = t
                dmin = ceildiv(c * c * b * b - X, 4 * b3)
                for d in range(dmin, dmax + 1):
                    P = b * b * (c * c - 4 * b * d)
                    if 0 < P <= X:
                        st = state(0, b, c, d, P)
                        if st:
                            out.append((P, st, 0, b, c, d))
        b += 1
    for A in range(1, isqrt64(X) + 1):
        if A % nparts != part:
            continue
        amax = isqrt64(4 * A / 27)
        bmax = isqrt64(A) + 1
        for a in range(1, amax + 1):
            m = 3 * a
            bound = bmax + (3 * a + 1) / 2
            for b in range(-bound, bound + 1):
                num = b * b - A
                if num % m != 0:
                    continue
                c = num / m
                bc = b * c
                dlo = ceildiv(bc - A, 9 * a)
                dhi = floordiv(bc + A, 9 * a)
                for d in range(dlo, dhi + 1):
                    P = disc(a, b, c, d)
                    if 0 < P <= X:
                        st = state(a, b, c, d, P)
                        if st:
                            out.append((P, st, a, b, c, d))
    return out


def negative_bounds(X, a):
    cdef double Dmax = sqrt(X / 3.0) / (a * a)
    cdef double y2 = pow(X / (4.0 * pow(a, 4)), 1.0 / 3.0)
    cdef double rd
    if Dmax < y2:
        y2 = Dmax
    rd = sqrt(Dmax)
    bmax = <i64>(a * (1.5 + rd)) + 1
    cmin = <i64>(a * (0.75 - max(Dmax - 0.75, 0.0) / 3.0)) - 1
    cmax = <i64>(a * (0.75 + rd + y2)) + 1
    dabs = <i64>(a * (0.5 + rd) * (0.25 + y2)) + 1
    return bmax, cmin, cmax, dabs


def scan_negative(i64 X, i64 part=0, i64 nparts=1):
    cdef list out = []
    cdef i64 a, b, c, d, b3, dmax, a2, beta, gamma, dsc, r, dlo, dhi, P, bmax, cmin, cmax, dabs, t
    cdef int st
    b = 1
    while 3 * b * b * b * b <= X:
        if b % nparts == part:
            b3 = b * b * b
            for c in range(-b, b + 1):
                dmax = floordiv(X + b * b * c * c, 4 * b3)
                for d in range(b, dmax + 1):
                    P = b * b * (c * c - 4 * b * d)
                    if -X <= P < 0:
                        st = state(0, b, c, d, P)
                        if st:
                            out.append((P, st, 0, b, c, d))
        b += 1
    a = 1
    while 27 * a * a * a * a <= 16 * X:
        if a % nparts == part:
            bmax, cmin, cmax, dabs = negative_bounds(X, a)
            a2 = a * a
            for b in range(-bmax, bmax + 1):
                for c in range(cmin, cmax + 1):
                    beta = 18 * a * b * c - 4 * b * b * b
                    gamma = b * b * c * c - 4 * a * c * c * c
                    dsc = beta * beta + 108 * a2 * (gamma + X)
                    if dsc < 0:
                        continue
                    r = isqrt64(dsc) + 1
                    dlo = floordiv(beta - r, 54 * a2) - 1
                    if dlo < -dabs:
                        dlo = -dabs
                    dhi = floordiv(beta + r, 54 * a2) + 1
                    if dhi > dabs:
                        dhi = dabs
                    for d in range(dlo, dhi + 1):
                        P = -27 * a2 * d * d + beta * d + gamma
                        if -X <= P < 0:
                            st = state(a, b, c, d, P)
                            if st:
                                out.append((P, st, a, b, c, d))
        a += 1
    return out
