"""Scalar q-calculus: q-shifted factorials, q-binomials and basic
hypergeometric series.

All routines work in double precision complex arithmetic with a real base
``0 < q < 1``.  Infinite products are truncated once the remaining factors
differ from one by less than ``INF_TOL`` (the tail of ``(a;q)_inf`` after
``K`` factors is bounded by ``exp(2|a|q^K/(1-q)) - 1``).
"""
from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

INF_TOL = 1e-17
MAX_INF_FACTORS = 20000
SERIES_TOL = 1e-17
MAX_SERIES_TERMS = 100000
DEGREE_RTOL = 1e-12


class QCoreError(ValueError):
    """Base class for domain errors raised by the q-calculus routines."""


class PoleError(QCoreError):
    """A lower parameter produces a zero denominator inside the summed range."""


class DivergenceError(QCoreError):
    """A non-terminating series was requested outside its disc of convergence."""


def check_q(q: float) -> float:
    """Return ``q`` as a float, rejecting anything outside the open unit interval."""
    q = float(q)
    if not 0.0 < q < 1.0:
        raise QCoreError(f"base q must lie strictly inside (0, 1), got {q!r}")
    return q


def _inf_depth(amax: float, q: float, tol: float = INF_TOL) -> int:
    # smallest K with amax * q**K < tol
    if amax == 0.0:
        return 0
    k = math.ceil(math.log(tol / amax) / math.log(q)) if amax > tol else 0
    if k > MAX_INF_FACTORS:
        raise QCoreError("infinite q-product needs too many factors; q too close to 1")
    return max(k, 0) + 1


def q_shifted(a, q: float, k=math.inf):
    """q-shifted factorial ``(a;q)_k``.

    ``k`` is a non-negative integer or ``math.inf``.  ``a`` may be a scalar or
    a numpy array (evaluated elementwise).
    """
    q = check_q(q)
    arr = isinstance(a, np.ndarray)
    av = np.asarray(a, dtype=complex) if arr else complex(a)
    if k == math.inf or k is None:
        amax = float(np.max(np.abs(av))) if arr else abs(av)
        kk = _inf_depth(amax, q)
    else:
        kk = int(k)
        if kk < 0:
            raise QCoreError("q_shifted needs k >= 0")
    if arr:
        out = np.ones_like(av)
        qi = 1.0
        for _ in range(kk):
            out = out * (1.0 - av * qi)
            qi *= q
        return out
    out = 1.0 + 0j
    qi = 1.0
    for _ in range(kk):
        out *= 1.0 - av * qi
        qi *= q
    return out


def q_shifted_multi(params: Iterable, q: float, k=math.inf):
    """``(a_1, ..., a_r; q)_k`` as a product of single factorials."""
    out = 1.0 + 0j
    for a in params:
        out = out * q_shifted(a, q, k)
    return out


def q_binomial(n: int, k: int, q: float) -> float:
    """Gaussian binomial ``[n k]_q = (q^n; q^{-1})_k / (q; q)_k``."""
    q = check_q(q)
    if not (0 <= k <= n):
        raise QCoreError(f"q_binomial needs 0 <= k <= n, got n={n}, k={k}")
    num = 1.0
    den = 1.0
    for i in range(k):
        num *= 1.0 - q ** (n - i)
        den *= 1.0 - q ** (i + 1)
    return num / den


def terminating_degree(uppers: Sequence, q: float, rtol: float = DEGREE_RTOL):
    """Smallest ``n >= 0`` such that some upper parameter equals ``q^{-n}``.

    Returns ``None`` when no upper parameter has that form.
    """
    best = None
    lq = math.log(q)
    for a in uppers:
        a = complex(a)
        if a == 0 or abs(a.imag) > rtol * abs(a) or a.real <= 0:
            continue
        n = round(-math.log(a.real) / lq)
        if n < 0:
            continue
        if abs(a.real - q ** (-n)) <= rtol * abs(a):
            if best is None or n < best:
                best = n
    return best


def basic_hypergeometric(uppers: Sequence, lowers: Sequence, q: float, z,
                         degree: int | None = None) -> complex:
    """Basic hypergeometric series ``r+1 phi r``.

    Parameters
    ----------
    uppers, lowers
        Upper parameters ``a_1..a_{r+1}`` and lower parameters ``b_1..b_r``.
    degree
        Explicit termination degree.  When omitted, the series terminates at
        the smallest ``n`` with an upper parameter equal to ``q^{-n}``
        (relative tolerance ``1e-12``); otherwise it is summed as a convergent
        power series in ``z`` and requires ``|z| < 1``.
    """
    q = check_q(q)
    uppers = [complex(a) for a in uppers]
    lowers = [complex(b) for b in lowers]
    if len(uppers) != len(lowers) + 1:
        raise QCoreError("need exactly one more upper than lower parameter")
    z = complex(z)
    if degree is None:
        degree = terminating_degree(uppers, q)
    if degree is not None:
        return _sum_terminating(uppers, lowers, q, z, int(degree))
    if abs(z) >= 1.0:
        raise DivergenceError(f"non-terminating series with |z| = {abs(z)} >= 1")
    return _sum_convergent(uppers, lowers, q, z)


def _sum_terminating(uppers, lowers, q, z, degree):
    term = 1.0 + 0j
    total = term
    qk = 1.0
    for k in range(degree):
        num = 1.0 + 0j
        for a in uppers:
            num *= 1.0 - a * qk
        den = 1.0 - q * qk
        for b in lowers:
            f = 1.0 - b * qk
            if f == 0 or abs(f) < 1e-300:
                raise PoleError(f"lower parameter {b} hits a pole at k={k + 1}")
            den *= f
        term = term * num / den * z
        total += term
        qk *= q
    return total


def _sum_convergent(uppers, lowers, q, z):
    term = 1.0 + 0j
    total = term
    qk = 1.0
    small = 0
    for k in range(MAX_SERIES_TERMS):
        num = 1.0 + 0j
        for a in uppers:
            num *= 1.0 - a * qk
        den = 1.0 - q * qk
        for b in lowers:
            f = 1.0 - b * qk
            if abs(f) < 1e-300:
                raise PoleError(f"lower parameter {b} hits a pole at k={k + 1}")
            den *= f
        term = term * num / den * z
        total += term
        qk *= q
        if abs(term) < SERIES_TOL * max(abs(total), 1e-300):
            small += 1
            if small >= 3:
                return total
        else:
            small = 0
    raise DivergenceError("series did not converge within the term budget")
