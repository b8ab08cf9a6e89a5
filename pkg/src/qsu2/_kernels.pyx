# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled normal-ordering kernel for A_q(SU(2)); same API as _kernels_py."""

from libc.math cimport pow

cdef enum:
    MAXN = 512


cdef void _qbin_row(int n, double Q, double* row) noexcept:
    cdef int m, j
    row[0] = 1.0
    for m in range(1, n + 1):
        row[m] = 1.0
        j = m - 1
        while j >= 1:
            row[j] = row[j - 1] + pow(Q, j) * row[j]
            j -= 1


cdef int _mono_mul(int k1, int b1, int c1, int k2, int b2, int c2, double q,
                   int* ks, int* js, double* ws) noexcept:
    """Fill (k, j, weight) triples; the monomial is (k, b1+b2+j, c1+c2+j)."""
    cdef double pre = pow(q, -k2 * (b1 + c1))
    cdef double Q = q * q
    cdef double row[MAXN]
    cdef int a, d, j, n
    if (k1 >= 0 and k2 >= 0) or (k1 <= 0 and k2 <= 0):
        ks[0] = k1 + k2
        js[0] = 0
        ws[0] = pre
        return 1
    if k1 > 0:
        a = k1
        d = -k2
        if a >= d:
            n = d
            _qbin_row(n, Q, row)
            for j in range(n + 1):
                ks[j] = a - d
                js[j] = j
                ws[j] = pre * row[j] * pow(q, j * j)
        else:
            n = a
            _qbin_row(n, Q, row)
            for j in range(n + 1):
                ks[j] = a - d
                js[j] = j
                ws[j] = pre * row[j] * pow(q, j * j + 2 * j * (d - a))
    else:
        d = -k1
        a = k2
        if d >= a:
            n = a
            _qbin_row(n, Q, row)
            for j in range(n + 1):
                ks[j] = a - d
                js[j] = j
                ws[j] = pre * row[j] * pow(q, j * j - 2 * j * a)
        else:
            n = d
            _qbin_row(n, Q, row)
            for j in range(n + 1):
                ks[j] = a - d
                js[j] = j
                ws[j] = pre * row[j] * pow(q, j * j - 2 * j * d - 2 * j * (a - d))
    return n + 1


cdef inline void _check(int k1, int k2) except *:
    if abs(k1) >= MAXN - 1 or abs(k2) >= MAXN - 1:
        raise OverflowError("monomial degree too large for the compiled kernel")


def mono_mul(m1, m2, double q):
    """Product of two monomials as a list of ``(monomial, coefficient)``."""
    cdef int k1 = m1[0], b1 = m1[1], c1 = m1[2]
    cdef int k2 = m2[0], b2 = m2[1], c2 = m2[2]
    cdef int ks[MAXN]
    cdef int js[MAXN]
    cdef double ws[MAXN]
    _check(k1, k2)
    cdef int n = _mono_mul(k1, b1, c1, k2, b2, c2, q, ks, js, ws)
    cdef int i
    return [((ks[i], b1 + b2 + js[i], c1 + c2 + js[i]), ws[i]) for i in range(n)]


def mul_terms(dict x, dict y, double q):
    """Product of two term dictionaries ``{monomial: coefficient}``."""
    cdef dict out = {}
    cdef int k1, b1, c1, k2, b2, c2, n, i
    cdef int ks[MAXN]
    cdef int js[MAXN]
    cdef double ws[MAXN]
    cdef double complex u, v, uv
    cdef tuple key
    for m1, uo in x.items():
        k1 = m1[0]; b1 = m1[1]; c1 = m1[2]
        u = uo
        for m2, vo in y.items():
            k2 = m2[0]; b2 = m2[1]; c2 = m2[2]
            _check(k1, k2)
            v = vo
            uv = u * v
            n = _mono_mul(k1, b1, c1, k2, b2, c2, q, ks, js, ws)
            for i in range(n):
                key = (ks[i], b1 + b2 + js[i], c1 + c2 + js[i])
                prev = out.get(key)
                if prev is None:
                    out[key] = uv * ws[i]
                else:
                    out[key] = <double complex>prev + uv * ws[i]
    return out


def mul_tensor_terms(dict x, dict y, double q):
    """Product of two tensor dictionaries ``{(mono, mono): coefficient}``."""
    cdef dict out = {}
    cdef int nl, nr, i, j
    cdef int kl[MAXN]
    cdef int jl[MAXN]
    cdef double wl[MAXN]
    cdef int kr[MAXN]
    cdef int jr[MAXN]
    cdef double wr[MAXN]
    cdef double complex uv
    cdef tuple key
    for (l1, r1), uo in x.items():
        for (l2, r2), vo in y.items():
            _check(l1[0], l2[0])
            _check(r1[0], r2[0])
            uv = <double complex>uo * <double complex>vo
            nl = _mono_mul(l1[0], l1[1], l1[2], l2[0], l2[1], l2[2], q, kl, jl, wl)
            nr = _mono_mul(r1[0], r1[1], r1[2], r2[0], r2[1], r2[2], q, kr, jr, wr)
            for i in range(nl):
                ml = (kl[i], l1[1] + l2[1] + jl[i], l1[2] + l2[2] + jl[i])
                for j in range(nr):
                    key = (ml, (kr[j], r1[1] + r2[1] + jr[j], r1[2] + r2[2] + jr[j]))
                    prev = out.get(key)
                    if prev is None:
                        out[key] = uv * wl[i] * wr[j]
                    else:
                        out[key] = <double complex>prev + uv * wl[i] * wr[j]
    return out
