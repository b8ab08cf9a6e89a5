"""Basic hypergeometric orthogonal polynomial families, their orthogonality
measures, closed-form norms and numerical integration against them.

Every evaluator accepts scalar or numpy-array arguments ``x``.  For the
trigonometric families (Askey-Wilson, q-ultraspherical, q-Hermite, Chebyshev)
``x`` is the variable ``cos(theta) = (z + 1/z)/2`` and may be any complex
number; the choice of the branch of ``z`` does not matter because the
polynomials are symmetric under ``z -> 1/z``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import mpmath
import numpy as np

from .qcore import (
    QCoreError,
    basic_hypergeometric,
    check_q,
    q_shifted,
    q_shifted_multi,
)


class ParameterError(QCoreError):
    """Invalid or unsupported polynomial parameters."""


class DegreeError(QCoreError):
    """Degree outside the range of a finite family."""


class ConvergenceError(QCoreError):
    """Quadrature did not reach the requested tolerance."""


class Family(str, enum.Enum):
    ASKEY_WILSON = "askey_wilson"
    AW_JACOBI = "aw_jacobi"
    CONT_Q_ULTRASPHERICAL = "cont_q_ultraspherical"
    CONT_Q_HERMITE = "cont_q_hermite"
    LITTLE_Q_JACOBI = "little_q_jacobi"
    Q_HAHN = "q_hahn"
    Q_KRAWTCHOUK = "q_krawtchouk"
    DUAL_Q_KRAWTCHOUK = "dual_q_krawtchouk"
    CHEBYSHEV_U = "chebyshev_U"


FAMILY_PARAMS = {
    Family.ASKEY_WILSON: ("a", "b", "c", "d", "q"),
    Family.AW_JACOBI: ("alpha", "beta", "s", "t", "q"),
    Family.CONT_Q_ULTRASPHERICAL: ("beta", "q"),
    Family.CONT_Q_HERMITE: ("q",),
    Family.LITTLE_Q_JACOBI: ("a", "b", "q"),
    Family.Q_HAHN: ("a", "b", "N", "q"),
    Family.Q_KRAWTCHOUK: ("sigma", "N", "q"),
    Family.DUAL_Q_KRAWTCHOUK: ("sigma", "N", "q"),
    Family.CHEBYSHEV_U: (),
}

FINITE_FAMILIES = {Family.Q_HAHN, Family.Q_KRAWTCHOUK, Family.DUAL_Q_KRAWTCHOUK}


def _as_array(x):
    scalar = np.ndim(x) == 0
    return np.asarray(x, dtype=complex), scalar


def _ret(val, scalar):
    return complex(val) if scalar else val


def z_of_x(x):
    """A root ``z`` of ``(z + 1/z)/2 = x``."""
    x = np.asarray(x, dtype=complex)
    return x + np.sqrt(x * x - 1.0)


# --------------------------------------------------------------------------
# evaluators


def askey_wilson(n: int, x, a, b, c, d, q: float):
    """Askey-Wilson polynomial ``p_n(x; a, b, c, d | q)``.

    Evaluated through the monic three-term recurrence and rescaled by the
    leading coefficient ``2^n (abcd q^{n-1}; q)_n``.  The defining 4phi3 loses
    about ``n^2 log10(1/q)/2`` digits to cancellation, the recurrence does not;
    :func:`askey_wilson_phi` keeps the series route for cross-checks.
    """
    q = check_q(q)
    xv, scalar = _as_array(x)
    vals = sorted((complex(v) for v in (a, b, c, d)), key=abs, reverse=True)
    a, b, c, d = vals
    if n == 0:
        return _ret(np.ones_like(xv), scalar)
    if a == 0:
        raise ParameterError("Askey-Wilson with all parameters zero: use cont_q_hermite")
    abcd = a * b * c * d

    def big_a(k):
        return ((1 - a * b * q ** k) * (1 - a * c * q ** k) * (1 - a * d * q ** k)
                * (1 - abcd * q ** (k - 1))
                / (a * (1 - abcd * q ** (2 * k - 1)) * (1 - abcd * q ** (2 * k))))

    def big_c(k):
        if k == 0:
            return 0.0
        return (a * (1 - q ** k) * (1 - b * c * q ** (k - 1)) * (1 - b * d * q ** (k - 1))
                * (1 - c * d * q ** (k - 1))
                / ((1 - abcd * q ** (2 * k - 2)) * (1 - abcd * q ** (2 * k - 1))))

    prev = np.zeros_like(xv)
    cur = np.ones_like(xv)
    ak_prev = 0.0
    for k in range(n):
        ak, ck = big_a(k), big_c(k)
        diag = (a + 1 / a - ak - ck) / 2
        prev, cur = cur, (xv - diag) * cur - (ak_prev * ck / 4) * prev
        ak_prev = ak
    lead = 2 ** n * q_shifted(abcd * q ** (n - 1), q, n)
    return _ret(lead * cur, scalar)


def askey_wilson_phi(n: int, x, a, b, c, d, q: float) -> complex:
    """Askey-Wilson polynomial through the generic ``basic_hypergeometric``
    routine (scalar ``x`` only).  Used as an independent route."""
    z = complex(z_of_x(x))
    a, b, c, d = (complex(v) for v in (a, b, c, d))
    phi = basic_hypergeometric(
        [q ** (-n), a * b * c * d * q ** (n - 1), a * z, a / z],
        [a * b, a * c, a * d], q, q, degree=n)
    return a ** (-n) * q_shifted_multi([a * b, a * c, a * d], q, n) * phi


def aw_jacobi_params(alpha, beta, s, t, q):
    """Askey-Wilson parameters of ``p_n^{(alpha,beta)}(x; s, t | q)``."""
    r = math.sqrt(q)
    return (r * t / s, r * q ** alpha * s / t, -r / (s * t), -s * t * r * q ** beta)


def aw_jacobi(n: int, x, alpha, beta, s, t, q: float):
    """Jacobi-type Askey-Wilson polynomial ``p_n^{(alpha,beta)}(x; s, t | q)``."""
    return askey_wilson(n, x, *aw_jacobi_params(alpha, beta, s, t, q), q)


def cont_q_ultraspherical(n: int, x, beta, q: float):
    """Rogers' continuous q-ultraspherical polynomial ``C_n(x; beta | q)``."""
    q = check_q(q)
    xv, scalar = _as_array(x)
    z = z_of_x(xv)
    total = np.zeros_like(xv)
    for k in range(n + 1):
        coef = (q_shifted(beta, q, k) * q_shifted(beta, q, n - k)
                / (q_shifted(q, q, k) * q_shifted(q, q, n - k)))
        total = total + coef * z ** (n - 2 * k)
    return _ret(total, scalar)


def cont_q_hermite(n: int, x, q: float):
    """Continuous q-Hermite ``H_n(x | q)`` from its three-term recurrence."""
    q = check_q(q)
    xv, scalar = _as_array(x)
    prev = np.zeros_like(xv)
    cur = np.ones_like(xv)
    for k in range(n):
        prev, cur = cur, 2 * xv * cur - (1 - q ** k) * prev
    return _ret(cur, scalar)


def little_q_jacobi(n: int, x, a, b, q: float):
    """Little q-Jacobi ``p_n(x; a, b; q) = 2phi1(q^-n, ab q^{n+1}; aq; q, qx)``."""
    q = check_q(q)
    xv, scalar = _as_array(x)
    # the terms grow like q^{-nk} near x = 1 and cancel; extended precision
    # buys about three digits
    ql, a, b = np.longdouble(q), np.clongdouble(a), np.clongdouble(b)
    xl = xv.astype(np.clongdouble)
    total = np.zeros_like(xl)
    coef = np.clongdouble(1)
    for k in range(n + 1):
        total = total + coef * (ql * xl) ** k
        if k == n:
            break
        coef *= ((1 - ql ** (k - n)) * (1 - a * b * ql ** (n + 1 + k))
                 / ((1 - a * ql ** (k + 1)) * (1 - ql ** (k + 1))))
    return _ret(total.astype(complex), scalar)


def q_hahn(n: int, x, a, b, N: int, q: float):
    """q-Hahn ``Q_n(x; a, b, N; q) = 3phi2(q^-n, ab q^{n+1}, x; aq, q^-N; q, q)``."""
    q = check_q(q)
    _check_degree(n, N)
    xv, scalar = _as_array(x)
    ql, a, b = np.longdouble(q), np.clongdouble(a), np.clongdouble(b)
    xl = xv.astype(np.clongdouble)
    total = np.zeros_like(xl)
    coef = np.clongdouble(1)
    xfac = np.ones_like(xl)
    for k in range(n + 1):
        total = total + coef * xfac
        if k == n:
            break
        coef *= ((1 - ql ** (k - n)) * (1 - a * b * ql ** (n + 1 + k)) * ql
                 / ((1 - a * ql ** (k + 1)) * (1 - ql ** (k - N)) * (1 - ql ** (k + 1))))
        xfac = xfac * (1 - xl * ql ** k)
    return _ret(total.astype(complex), scalar)


def q_krawtchouk(n: int, x, sigma, N: int, q: float):
    """q-Krawtchouk ``K_n(x; q^sigma, N; q)``."""
    q = check_q(q)
    _check_degree(n, N)
    xv, scalar = _as_array(x)
    c = -q ** (n - N - sigma)
    total = np.zeros_like(xv)
    coef = 1.0 + 0j
    xfac = np.ones_like(xv)
    for k in range(n + 1):
        total = total + coef * xfac
        if k == n:
            break
        coef *= ((1 - q ** (k - n)) * (1 - c * q ** k) * q
                 / ((1 - q ** (k - N)) * (1 - q ** (k + 1))))
        xfac = xfac * (1 - xv * q ** k)
    return _ret(total, scalar)


def dual_q_krawtchouk(n: int, mu, sigma, N: int, q: float):
    """Dual q-Krawtchouk ``R_n(mu; q^sigma, N; q)`` as a polynomial in
    ``mu = q^-x - q^{x-N-sigma}``."""
    q = check_q(q)
    _check_degree(n, N)
    mv, scalar = _as_array(mu)
    c = q ** (-N - sigma)
    total = np.zeros_like(mv)
    coef = 1.0 + 0j
    mfac = np.ones_like(mv)
    for k in range(n + 1):
        total = total + coef * mfac
        if k == n:
            break
        coef *= (1 - q ** (k - n)) * q / ((1 - q ** (k - N)) * (1 - q ** (k + 1)))
        # (q^-x, -q^{x-N-sigma}; q)_k is a polynomial in mu
        mfac = mfac * (1 - c * q ** (2 * k) - q ** k * mv)
    return _ret(total, scalar)


def dual_q_krawtchouk_grid(n: int, x: int, sigma, N: int, q: float) -> complex:
    """``R_n(q^-x - q^{x-N-sigma}; q^sigma, N; q)`` at the lattice point ``x``.

    Uses the factored Pochhammers, which avoids the cancellation in the
    mu-polynomial form when ``q^{-N-sigma}`` is large.  The alternating sum
    still cancels near ``x = N``, so it is accumulated with 40 digits."""
    q = check_q(q)
    _check_degree(n, N)
    with mpmath.workdps(40):
        mq, ms = mpmath.mpf(q), mpmath.mpf(float(sigma))
        total = mpmath.mpf(0)
        coef = mpmath.mpf(1)
        fac = mpmath.mpf(1)
        for k in range(n + 1):
            total += coef * fac
            if k == n:
                break
            coef *= (1 - mq ** (k - n)) * mq / ((1 - mq ** (k - N)) * (1 - mq ** (k + 1)))
            fac *= (1 - mq ** (k - x)) * (1 + mq ** (k + x - N - ms))
        return complex(float(total), 0.0)


def chebyshev_U(n: int, x):
    """Chebyshev polynomial of the second kind, ``U_n(cos t) = sin((n+1)t)/sin t``."""
    xv, scalar = _as_array(x)
    prev = np.zeros_like(xv)
    cur = np.ones_like(xv)
    for _ in range(n):
        prev, cur = cur, 2 * xv * cur - prev
    return _ret(cur, scalar)


def _check_degree(n, N):
    if not 0 <= n <= N:
        raise DegreeError(f"degree {n} outside 0..{N}")


_EVALUATORS: dict[Family, Callable] = {
    Family.ASKEY_WILSON: askey_wilson,
    Family.AW_JACOBI: aw_jacobi,
    Family.CONT_Q_ULTRASPHERICAL: cont_q_ultraspherical,
    Family.CONT_Q_HERMITE: cont_q_hermite,
    Family.LITTLE_Q_JACOBI: little_q_jacobi,
    Family.Q_HAHN: q_hahn,
    Family.Q_KRAWTCHOUK: q_krawtchouk,
    Family.DUAL_Q_KRAWTCHOUK: dual_q_krawtchouk,
    Family.CHEBYSHEV_U: lambda n, x: chebyshev_U(n, x),
}


def family_params(family, params: dict) -> dict:
    """Validate a parameter record against the family's arity."""
    family = Family(family)
    names = FAMILY_PARAMS[family]
    missing = [k for k in names if k not in params]
    extra = [k for k in params if k not in names]
    if missing or extra:
        raise ParameterError(
            f"{family.value} takes parameters {names}; missing {missing}, unexpected {extra}")
    out = dict(params)
    if "N" in out:
        out["N"] = int(out["N"])
    if "q" in out:
        out["q"] = check_q(out["q"])
    return out


def eval_poly(family, n: int, x, **params):
    """Evaluate the degree-``n`` member of ``family`` at ``x``."""
    family = Family(family)
    p = family_params(family, params)
    if n < 0:
        raise DegreeError("negative degree")
    if family in FINITE_FAMILIES:
        _check_degree(n, p["N"])
    return _EVALUATORS[family](n, x, *(p[k] for k in FAMILY_PARAMS[family]))


# --------------------------------------------------------------------------
# Askey-Wilson measure


@dataclass(frozen=True)
class AWParams:
    a: complex
    b: complex
    c: complex
    d: complex
    q: float

    def __post_init__(self):
        check_q(self.q)

    @property
    def values(self):
        return (self.a, self.b, self.c, self.d)

    def check_measure_domain(self):
        vals = [complex(v) for v in self.values]
        real = all(abs(v.imag) <= 1e-14 * max(1.0, abs(v)) for v in vals)
        if not real:
            # complex parameters must come in conjugate pairs
            rest = list(vals)
            while rest:
                v = rest.pop()
                if abs(v.imag) <= 1e-14 * max(1.0, abs(v)):
                    continue
                match = [i for i, u in enumerate(rest) if abs(u - v.conjugate()) <= 1e-12 * abs(v)]
                if not match:
                    raise ParameterError("complex Askey-Wilson parameters must occur in conjugate pairs")
                rest.pop(match[0])
        for i in range(4):
            for j in range(i + 1, 4):
                p = vals[i] * vals[j]
                if abs(p.imag) > 1e-12 * max(1.0, abs(p)):
                    if real:
                        raise ParameterError(f"pairwise product {p} is not real")
                    continue    # a conjugate pair times a real parameter
                if p.real >= 1.0:
                    raise ParameterError(f"pairwise product {p.real} >= 1 outside the measure domain")


def aw_h0(a, b, c, d, q) -> float:
    """Total mass ``h_0`` of the Askey-Wilson weight."""
    num = q_shifted(a * b * c * d, q)
    den = q_shifted_multi([q, a * b, a * c, a * d, b * c, b * d, c * d], q)
    return (num / den).real


def aw_hn_ratio(n: int, a, b, c, d, q) -> float:
    """``h_n / h_0`` for the Askey-Wilson polynomials."""
    abcd = a * b * c * d
    val = ((1 - q ** (n - 1) * abcd) * q_shifted_multi([q, a * b, a * c, a * d, b * c, b * d, c * d], q, n)
           / ((1 - q ** (2 * n - 1) * abcd) * q_shifted(abcd, q, n)))
    return complex(val).real


def aw_weight(theta, a, b, c, d, q):
    """``w(cos theta)`` for the Askey-Wilson weight (vectorised in ``theta``)."""
    z = np.exp(1j * np.asarray(theta, dtype=float))
    num = q_shifted(z * z, q) * q_shifted(1 / (z * z), q)
    den = np.ones_like(z)
    for e in (a, b, c, d):
        den = den * q_shifted(e * z, q) * q_shifted(e / z, q)
    return (num / den).real


def aw_mass(e, k: int, others, q) -> float:
    """Point mass of the Askey-Wilson weight at ``x = (e q^k + 1/(e q^k))/2``.

    This is the residue of ``z -> w((z + 1/z)/2) / z`` at ``z = e q^k``, with
    the vanishing factor of ``(e/z; q)_inf`` cancelled analytically.
    """
    z0 = e * q ** k
    num = q_shifted(z0 * z0, q) * q_shifted(1 / (z0 * z0), q)
    den = q_shifted(e * z0, q)
    # (e/z0; q)_inf without its k-th factor: prod_{j<k}(1 - q^{j-k}) * (q; q)_inf
    for j in range(k):
        den *= 1 - q ** (j - k)
    den *= q_shifted(q, q)
    for f in others:
        den *= q_shifted(f * z0, q) * q_shifted(f / z0, q)
    return complex(num / den).real


@dataclass(frozen=True)
class SpectralMeasure:
    """Normalised orthogonality measure: a density in ``theta`` on ``[0, pi]``
    (with respect to ``dtheta``, for ``x = cos theta``) plus point masses."""

    density: Callable
    masses: tuple = ()
    h0: float = 1.0
    params: tuple = field(default=())

    @property
    def total_mass(self) -> float:
        return integrate(self, lambda x: np.ones_like(x))


def aw_measure(params: AWParams) -> SpectralMeasure:
    """Normalised Askey-Wilson measure ``dm(x; a, b, c, d | q)``."""
    params.check_measure_domain()
    a, b, c, d = (complex(v) for v in params.values)
    q = params.q
    h0 = aw_h0(a, b, c, d, q)
    vals = [a, b, c, d]
    masses = []
    for idx, e in enumerate(vals):
        if abs(e) <= 1:
            continue
        others = vals[:idx] + vals[idx + 1:]
        k = 0
        while abs(e * q ** k) > 1:
            x_k = ((e * q ** k + 1 / (e * q ** k)) / 2).real
            masses.append((x_k, aw_mass(e, k, others, q) / h0))
            k += 1

    def density(theta, _p=(a, b, c, d, q), _h0=h0):
        return aw_weight(theta, *_p) / (2 * math.pi * _h0)

    return SpectralMeasure(density=density, masses=tuple(masses), h0=h0, params=(a, b, c, d, q))


# --------------------------------------------------------------------------
# quadrature

_GL_CACHE: dict[int, tuple] = {}


def _gauss_legendre(m: int):
    if m not in _GL_CACHE:
        _GL_CACHE[m] = np.polynomial.legendre.leggauss(m)
    return _GL_CACHE[m]


def theta_quadrature(g: Callable, panels: int = 8, nodes: int = 32):
    """Composite Gauss-Legendre rule for ``int_0^pi g(theta) dtheta``."""
    t, w = _gauss_legendre(nodes)
    edges = np.linspace(0.0, math.pi, panels + 1)
    half = (edges[1:] - edges[:-1]) / 2
    mid = (edges[1:] + edges[:-1]) / 2
    th = (mid[:, None] + half[:, None] * t[None, :]).ravel()
    ww = (half[:, None] * w[None, :]).ravel()
    return np.sum(np.asarray(g(th)) * ww)


def integrate_theta(g: Callable, rtol: float = 1e-9, panels: int = 8, nodes: int = 32,
                    max_panels: int = 512):
    """Adaptive (panel-doubling) version of :func:`theta_quadrature`.

    Convergence is judged against ``int |g|``, so integrals that cancel to
    zero still terminate.
    """
    prev = theta_quadrature(g, panels, nodes)
    while panels < max_panels:
        panels *= 2
        cur = theta_quadrature(g, panels, nodes)
        scale = theta_quadrature(lambda th: np.abs(g(th)), panels, nodes)
        if abs(cur - prev) <= rtol * max(scale, 1e-300):
            return cur
        prev = cur
    raise ConvergenceError(f"theta quadrature did not converge to rtol={rtol}")


def integrate(measure: SpectralMeasure, f: Callable, rtol: float = 1e-9):
    """``int f dm`` for a :class:`SpectralMeasure`; ``f`` must accept arrays of x."""
    cont = integrate_theta(lambda th: f(np.cos(th)) * measure.density(th), rtol=rtol)
    disc = sum(f(np.array([x]))[0] * w for x, w in measure.masses)
    val = cont + disc
    if np.iscomplexobj(val) and abs(np.imag(val)) <= 1e-15 * max(abs(val), 1.0):
        return float(np.real(val))
    return val


# --------------------------------------------------------------------------
# norms and discrete measures


def qkrawtchouk_h(n: int, sigma, N: int, q: float) -> float:
    """The constant ``h_n(q^sigma, N)`` appearing in the q-Krawtchouk
    orthogonality relations."""
    val = ((1 + q ** (2 * n - N - sigma)) / (-q ** (n - 2 * N - sigma)) ** n
           * q_shifted_multi([-q ** (-N - sigma), q ** (-N)], q, n)
           / q_shifted_multi([q, -q ** (1 - sigma)], q, n))
    return complex(val).real


def qkrawtchouk_w(x: int, sigma, N: int, q: float) -> float:
    """The weight ``w_x(q^sigma, N)`` of the q-Krawtchouk orthogonality."""
    val = (-q ** (N + sigma)) ** x * q_shifted(q ** (-N), q, x) / q_shifted(q, q, x)
    return complex(val).real


def norm_h(family, n: int, **params) -> float:
    """Closed-form norm constant for the families where one is known.

    * ``askey_wilson``: ``h_n`` of the weight ``w`` (so ``h_n / h_0`` is the
      squared norm under the normalised measure).
    * ``cont_q_hermite``: ``2 pi (q;q)_n / (q;q)_inf`` for the weight
      ``(e^{2i theta}, e^{-2i theta}; q)_inf d theta`` on ``[0, pi]``.
    * ``q_krawtchouk``: ``h_n(q^sigma, N)``; the orthogonality sum equals its
      reciprocal.
    * ``dual_q_krawtchouk``: ``w_n(q^sigma, N)``; the orthogonality sum equals
      its reciprocal.
    * ``chebyshev_U``: ``pi/2`` for the weight ``sqrt(1-x^2) dx``.
    """
    family = Family(family)
    p = family_params(family, params)
    if family is Family.ASKEY_WILSON:
        a, b, c, d, q = (p[k] for k in ("a", "b", "c", "d", "q"))
        return aw_h0(a, b, c, d, q) * aw_hn_ratio(n, a, b, c, d, q)
    if family is Family.CONT_Q_HERMITE:
        q = p["q"]
        return (2 * math.pi * q_shifted(q, q, n) / q_shifted(q, q)).real
    if family is Family.Q_KRAWTCHOUK:
        _check_degree(n, p["N"])
        return qkrawtchouk_h(n, p["sigma"], p["N"], p["q"])
    if family is Family.DUAL_Q_KRAWTCHOUK:
        _check_degree(n, p["N"])
        return qkrawtchouk_w(n, p["sigma"], p["N"], p["q"])
    if family is Family.CHEBYSHEV_U:
        return math.pi / 2
    raise ParameterError(f"no closed-form norm for {family.value}; use numeric_norm")


def discrete_measure(family, **params):
    """Support points and weights of the finite or discrete measure of a
    family, as ``(points, weights)`` arrays.

    Little q-Jacobi weights are truncated once the tail falls below 1e-16
    relative to the total.
    """
    family = Family(family)
    p = family_params(family, params)
    q = p.get("q")
    if family is Family.Q_HAHN:
        a, b, N = p["a"], p["b"], p["N"]
        xs = np.array([q ** (-x) for x in range(N + 1)])
        ws = np.array([(q_shifted(a * q, q, x) * q_shifted(b * q, q, N - x)
                        / (q_shifted(q, q, x) * q_shifted(q, q, N - x)) * (a * q) ** (-x)).real
                       for x in range(N + 1)])
        return xs, ws
    if family is Family.Q_KRAWTCHOUK:
        sigma, N = p["sigma"], p["N"]
        pref = q ** (N + sigma) / q_shifted(-q ** sigma, q, N + 1).real
        xs = np.array([q ** (-x) for x in range(N + 1)])
        ws = np.array([pref * qkrawtchouk_w(x, sigma, N, q) for x in range(N + 1)])
        return xs, ws
    if family is Family.DUAL_Q_KRAWTCHOUK:
        sigma, N = p["sigma"], p["N"]
        pref = q ** (N + sigma) / q_shifted(-q ** sigma, q, N + 1).real
        xs = np.array([q ** (-x) - q ** (x - N - sigma) for x in range(N + 1)])
        ws = np.array([pref * qkrawtchouk_h(x, sigma, N, q) for x in range(N + 1)])
        return xs, ws
    if family is Family.LITTLE_Q_JACOBI:
        a, b = p["a"], p["b"]
        xs, ws = [], []
        total = 0.0
        x = 0
        while True:
            w = (q_shifted(b * q, q, x) / q_shifted(q, q, x) * (a * q) ** x).real
            xs.append(q ** x)
            ws.append(w)
            total += abs(w)
            if abs(w) < 1e-18 * total and x > 5:
                break
            x += 1
            if x > 100000:
                raise ConvergenceError("little q-Jacobi weights do not decay; need |aq| < 1")
        return np.array(xs), np.array(ws)
    raise ParameterError(f"{family.value} has no discrete measure")


def numeric_norm(family, n: int, **params) -> float:
    """Squared norm computed from :func:`discrete_measure` (numeric, not a
    closed form)."""
    xs, ws = discrete_measure(family, **params)
    vals = eval_poly(family, n, xs, **params)
    return float(np.sum(np.abs(vals) ** 2 * ws))


# --------------------------------------------------------------------------
# the r-function of the discrete orthogonality relations


def r_fn(n: int, p: int, sigma, tau, theta, N: int, q: float) -> complex:
    """``r_n(q^p; sigma, tau, e^{i theta}, N; q)``.

    A two-parameter extension of the dual q-Krawtchouk polynomials; pass a
    very large ``tau`` to recover ``R_n(q^-p - q^{p-N-sigma}; q^sigma, N; q)``.
    """
    q = check_q(q)
    if not (0 <= n <= N and 0 <= p <= N):
        raise DegreeError(f"need 0 <= n, p <= N, got n={n}, p={p}, N={N}")
    e = complex(math.cos(theta), math.sin(theta))
    h = (tau - sigma) / 2
    pref = q_shifted(e * q ** (h - n), q, p) * q_shifted(-e * q ** ((tau + sigma) / 2 - n), q, N - p)
    phi = basic_hypergeometric(
        [q ** (-n), q ** (-p), -q ** (tau - n), -q ** (p - N - sigma)],
        [q ** (-N), q ** (1 + h - n) / e, q ** (h - n) * e],
        q, q, degree=min(n, p))
    return complex(pref * phi)


def r_fn_weight(p: int, sigma, N: int, q: float) -> float:
    """Weight at ``q^p`` in the discrete orthogonality of :func:`r_fn`."""
    val = ((1 + q ** (2 * p - N - sigma)) / (-q ** (p - 2 * N - sigma)) ** p
           * q_shifted_multi([q ** (-N), -q ** (-N - sigma)], q, p)
           / q_shifted_multi([q, -q ** (1 - sigma)], q, p))
    return complex(val).real


def r_fn_h(n: int, sigma, tau, theta, N: int, q: float) -> float:
    """The constant ``h_n`` in the discrete orthogonality of :func:`r_fn`."""
    e = complex(math.cos(theta), math.sin(theta))
    val = ((-q ** (2 * N - sigma + 1)) ** n
           * q ** (2 * N + sigma + tau) * (1 + q ** (2 * n - N - tau))
           * q_shifted_multi([q ** (-N), -q ** (-N - tau)], q, n)
           / (q_shifted_multi([-q ** tau, -q ** sigma], q, N + 1) * q_shifted_multi([q, -q ** (1 - tau)], q, n))
           * q_shifted_multi([q ** ((sigma - tau) / 2) * e, q ** ((sigma - tau) / 2) / e], q, n)
           / q_shifted_multi([-q ** (1 - (tau + sigma) / 2) * e, -q ** (1 - (tau + sigma) / 2) / e], q, n))
    return complex(val).real


# --------------------------------------------------------------------------
# power-basis coefficients (for substituting algebra elements)


def little_q_jacobi_coeffs(n: int, a, b, q: float) -> np.ndarray:
    """Coefficients of ``x^k``, ``k = 0..n``, in ``p_n(x; a, b; q)``."""
    out = np.zeros(n + 1, dtype=complex)
    coef = 1.0 + 0j
    for k in range(n + 1):
        out[k] = coef * q ** k
        if k == n:
            break
        coef *= ((1 - q ** (k - n)) * (1 - a * b * q ** (n + 1 + k))
                 / ((1 - a * q ** (k + 1)) * (1 - q ** (k + 1))))
    return out


def askey_wilson_coeffs(n: int, a, b, c, d, q: float) -> np.ndarray:
    """Coefficients of ``x^k``, ``k = 0..n``, in ``p_n(x; a, b, c, d | q)``,
    from the same monic recurrence as :func:`askey_wilson`."""
    from numpy.polynomial import polynomial as P

    q = check_q(q)
    vals = sorted((complex(v) for v in (a, b, c, d)), key=abs, reverse=True)
    a, b, c, d = vals
    if n == 0:
        return np.ones(1, dtype=complex)
    abcd = a * b * c * d
    prev = np.zeros(1, dtype=complex)
    cur = np.ones(1, dtype=complex)
    ak_prev = 0.0
    for k in range(n):
        ak = ((1 - a * b * q ** k) * (1 - a * c * q ** k) * (1 - a * d * q ** k)
              * (1 - abcd * q ** (k - 1))
              / (a * (1 - abcd * q ** (2 * k - 1)) * (1 - abcd * q ** (2 * k))))
        ck = 0.0 if k == 0 else (a * (1 - q ** k) * (1 - b * c * q ** (k - 1)) * (1 - b * d * q ** (k - 1))
              * (1 - c * d * q ** (k - 1))
              / ((1 - abcd * q ** (2 * k - 2)) * (1 - abcd * q ** (2 * k - 1))))
        diag = (a + 1 / a - ak - ck) / 2
        nxt = P.polysub(P.polymul([-diag, 1], cur), (ak_prev * ck / 4) * prev)
        prev, cur = cur, nxt
        ak_prev = ak
    return np.asarray(cur, dtype=complex) * 2 ** n * q_shifted(abcd * q ** (n - 1), q, n)
