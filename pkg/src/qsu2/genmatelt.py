"""Generalised matrix elements of A_q(SU(2)).

Matrix elements t^l_{n,m}, eigenvectors v^{l,j}(σ) of the twisted primitive
element X_σA, the two-sided spherical elements a^l_{ij}(τ,σ) and
b^l_{ij}(τ,σ) = A.a^l_{ij}(τ,σ), the spherical element ρ_{τ,σ}, the shift
elements and the expansions of b^l_{ij} as Askey-Wilson polynomials in ρ.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .hopf import AqElement, one_dim_rep
from .qcore import check_q, q_binomial, q_shifted
from .qpolys import askey_wilson_coeffs, aw_jacobi_params, dual_q_krawtchouk_grid, little_q_jacobi_coeffs
from .uqsl2 import ExtendedParameter, SpinError, idx, spin_range, two_l


class GenMatEltError(ValueError):
    pass


def _half(x) -> float:
    return round(2 * float(x)) / 2


def _check_label(l, j):
    tl = two_l(l)
    tj = round(2 * float(j))
    if abs(2 * float(j) - tj) > 1e-12 or abs(tj) > tl or (tl - tj) % 2:
        raise SpinError(f"label {j} is not in -{l}..{l}")


def _param(sigma) -> ExtendedParameter:
    return ExtendedParameter.parse(sigma)


# --------------------------------------------------------------------------
# eigenvalues and eigenvectors of X_σ A


def lambda_j(j, sigma, q) -> float:
    """Eigenvalue of t^l(X_σ A) on v^{l,j}(σ); ``1 - q^{∓2j}`` at σ = ±∞."""
    q = check_q(q)
    s = _param(sigma)
    j = _half(j)
    if not s.finite:
        return 1 - q ** (-2 * j) if s.value > 0 else 1 - q ** (2 * j)
    sv = s.value
    return (q ** (-2 * j - sv) - q ** (sv + 2 * j) + q ** sv - q ** (-sv)) / (q - 1 / q)


def c_const(l, j, sigma, q) -> float:
    """Normalising constant C^{l,j}(σ) of v^{l,j}(σ)."""
    q = check_q(q)
    l, j = _half(l), _half(j)
    _check_label(l, j)
    sv = _param(sigma).value
    Q = q * q
    out = q ** (l + j) * math.sqrt(q_binomial(round(2 * l), round(l - j), Q))
    out *= math.sqrt((1 + q ** (-4 * j - 2 * sv)) / (1 + q ** (-2 * sv)))
    out /= math.sqrt(np.real(q_shifted(-q ** (2 - 2 * sv), Q, round(l - j))
                     * q_shifted(-q ** (2 + 2 * sv), Q, round(l + j))))
    return out


@lru_cache(maxsize=4096)
def _v_cached(l, j, sv, q):
    dim = round(2 * l) + 1
    v = np.zeros(dim, dtype=complex)
    if math.isinf(sv):
        if sv > 0:
            v[idx(l, j)] = 1j ** round(l - j)
        else:
            v[idx(l, -j)] = (-1j) ** round(l + j)
        v.setflags(write=False)
        return v
    if sv < 0:
        # evaluate only σ ≥ 0 and use v^{l,j}(σ) = conj(v^{l,-j}(-σ))
        v = np.conj(_v_cached(l, -j, -sv, q))
        v.setflags(write=False)
        return v
    Q = q * q
    C = c_const(l, j, sv, q)
    for n in spin_range(l):
        d = round(l - n)
        rad = float(np.real(_down(q ** (4 * l), q, d) / q_shifted(Q, Q, d)))
        R = dual_q_krawtchouk_grid(d, round(l - j), sv, round(2 * l), Q)
        v[idx(l, n)] = (C * (-1j) ** d * q ** (sv * d) * q ** (d * (d - 1) / 2)
                        * math.sqrt(rad) * R)
    v.setflags(write=False)
    return v


def v_vector(l, j, sigma, q) -> np.ndarray:
    """Unit eigenvector v^{l,j}(σ) of t^l(X_σ A), components indexed n = -l..l."""
    q = check_q(q)
    l, j = _half(l), _half(j)
    _check_label(l, j)
    return _v_cached(l, j, float(_param(sigma).value), q)


def eigen_basis(l, sigma, q) -> np.ndarray:
    """Columns v^{l,j}(σ) for j = -l..l."""
    return np.column_stack([v_vector(l, j, sigma, q) for j in spin_range(l)])


# --------------------------------------------------------------------------
# matrix elements t^l_{n,m}


def _down(x, q, k) -> float:
    # (x; q^{-2})_k = Π_{r<k} (1 - x q^{-2r})
    out = 1.0
    for r in range(k):
        out *= 1 - x * q ** (-2 * r)
    return out


def _cnm(l, n, m, q) -> float:
    Q = q * q
    return (math.sqrt(q_binomial(round(l - m), round(n - m), Q)
                      * q_binomial(round(l + n), round(n - m), Q))
            * q ** (-(n - m) * (l - n)))


def _bg_poly(coeffs, scale, q) -> AqElement:
    # Σ_k c_k (scale · βγ)^k
    return AqElement({(0, k, k): c * scale ** k for k, c in enumerate(coeffs)}, q)


@lru_cache(maxsize=4096)
def _t_cached(l, n, m, q):
    Q = q * q
    k = max(abs(n), abs(m))
    deg = round(l - k)
    p = little_q_jacobi_coeffs(deg, Q ** abs(n - m), Q ** abs(n + m), Q)
    s, d = round(n + m), round(n - m)
    if n >= abs(m):
        # δ^{n+m} γ^{n-m}
        return _cnm(l, n, m, q) * AqElement.monomial(-s, 0, d, q) * _bg_poly(p, -1 / q, q)
    if m >= abs(n):
        return _cnm(l, m, n, q) * AqElement.monomial(-s, -d, 0, q) * _bg_poly(p, -1 / q, q)
    lead = _bg_poly(p, -q ** (2 * m + 2 * n - 1), q)
    if -n >= abs(m):
        # β^{m-n} α^{-m-n}
        return (_cnm(l, -n, -m, q) * AqElement.monomial(0, -d, 0, q)
                * AqElement.monomial(-s, 0, 0, q) * lead)
    # γ^{n-m} α^{-m-n}
    return (_cnm(l, -m, -n, q) * AqElement.monomial(0, 0, d, q)
            * AqElement.monomial(-s, 0, 0, q) * lead)


def t_elt(l, n, m, q) -> AqElement:
    """Matrix element t^l_{n,m} of the spin-l corepresentation."""
    q = check_q(q)
    l, n, m = _half(l), _half(n), _half(m)
    _check_label(l, n)
    _check_label(l, m)
    return _t_cached(l, n, m, q)


# --------------------------------------------------------------------------
# generalised matrix elements


def _combine(l, i, j, tau, sigma, q, weight) -> AqElement:
    vj = v_vector(l, j, sigma, q)
    vi = v_vector(l, i, tau, q)
    out = AqElement({}, q)
    for n in spin_range(l):
        cn = np.conj(vi[idx(l, n)])
        if cn == 0:
            continue
        for m in spin_range(l):
            c = vj[idx(l, m)] * cn * weight(m)
            if c != 0:
                out = out + c * t_elt(l, n, m, q)
    return out


def a_elt(l, i, j, tau, sigma, q) -> AqElement:
    """a^l_{ij}(τ,σ) = Σ_{n,m} v^{l,j}_m(σ) conj(v^{l,i}_n(τ)) t^l_{n,m}."""
    q = check_q(q)
    return _combine(_half(l), _half(i), _half(j), tau, sigma, q, lambda m: 1.0)


def b_elt(l, i, j, tau, sigma, q) -> AqElement:
    """b^l_{ij}(τ,σ) = A.a^l_{ij}(τ,σ) (extra weight q^{-m})."""
    q = check_q(q)
    return _combine(_half(l), _half(i), _half(j), tau, sigma, q, lambda m: q ** (-m))


def rho(tau, sigma, q) -> AqElement:
    """The self-adjoint (τ,σ)-spherical element ρ_{τ,σ}."""
    q = check_q(q)
    t, s = _param(tau).value, _param(sigma).value
    if not (math.isfinite(t) and math.isfinite(s)):
        raise GenMatEltError("ρ_{τ,σ} needs finite τ, σ")
    es = q ** (-s) - q ** s
    et = q ** (-t) - q ** t
    al = AqElement.generator("alpha", q)
    be = AqElement.generator("beta", q)
    ga = AqElement.generator("gamma", q)
    de = AqElement.generator("delta", q)
    x = (al * al + de * de + q * ga * ga + be * be / q
         + 1j * es * (q * de * ga + be * al)
         - 1j * et * (de * be + q * ga * al)
         + es * et * be * ga)
    return 0.5 * x


# --------------------------------------------------------------------------
# symmetries


def psi(x: AqElement) -> AqElement:
    """Algebra automorphism exchanging β and γ (fixing α, δ)."""
    return AqElement({(k, c, b): v for (k, b, c), v in x.terms.items()}, x.q)


def conj_coeffs(x: AqElement) -> AqElement:
    """Complex conjugation of the coefficients in the normal-ordered basis."""
    return AqElement({m: np.conj(v) for m, v in x.terms.items()}, x.q)


# --------------------------------------------------------------------------
# shift elements


def shift_elements(tau, sigma, q):
    """(α_{τ,σ}, β_{τ,σ}, γ_{τ,σ}, δ_{τ,σ})."""
    q = check_q(q)
    t, s = float(tau), float(sigma)
    r = math.sqrt(q)

    def lin(ca, cb, cg, cd):
        return AqElement({(1, 0, 0): ca, (0, 1, 0): cb, (0, 0, 1): cg, (-1, 0, 0): cd}, q)

    a = lin(r, -1j * q ** (s - .5), 1j * q ** (t + .5), q ** (s + t - .5))
    b = lin(-q ** (s + .5), -1j / r, -1j * q ** (s + t + .5), q ** (t - .5))
    g = lin(-q ** (t + .5), 1j * q ** (t + s - .5), 1j * r, q ** (s - .5))
    d = lin(q ** (t + s + .5), 1j * q ** (t - .5), -1j * q ** (s + .5), 1 / r)
    return a, b, g, d


def b_extremal(l, m, tau, sigma, q) -> AqElement:
    """b^l_{l,m}(τ,σ) as an ordered product of shift elements."""
    q = check_q(q)
    l, m = _half(l), _half(m)
    _check_label(l, m)
    t, s = float(tau), float(sigma)
    E = (c_const(l, m, s, q) * c_const(l, l, t, q) * q ** (s * (m - l))
         * q ** ((l - m) * (l - m - 1) / 2))
    out = AqElement.scalar(E, q)
    for k in range(round(l + m)):
        out = out * shift_elements(t + 2 * l - 1 - k, s + 2 * m - 1 - k, q)[3]
    for j in range(round(l - m)):
        out = out * shift_elements(t + l - m - 1 - j, s - l + m + 1 + j, q)[2]
    return out


# --------------------------------------------------------------------------
# Askey-Wilson expansion in ρ

_CASES = ("i", "ii", "iii", "iv")
_CASE_ALIASES = {"i": "i", "j": "ii", "-i": "iii", "-j": "iv",
                 "ii": "ii", "iii": "iii", "iv": "iv"}


def _case(case) -> str:
    try:
        return _CASE_ALIASES[str(case).replace("−", "-")]
    except KeyError:
        raise GenMatEltError(f"unknown case {case!r}") from None


def d_const(l, i, j, tau, sigma, q) -> float:
    """d^l_{ij}(τ,σ), the ratio between b^l_{ij} and b^i_{ij} p_{l-i}(ρ)."""
    q = check_q(q)
    l, i, j = _half(l), _half(i), _half(j)
    num = c_const(l, j, sigma, q) * c_const(l, i, tau, q)
    den = c_const(i, j, sigma, q) * c_const(i, i, tau, q)
    return num / den * q ** (i - l) / _down(q ** (4 * l), q, round(l - i))


def case_data(case, i, j, tau, sigma):
    """(m, d-arguments, α, β, s-exponent, t-exponent) for one of the four
    regions i ≥ |j|, j ≥ |i|, -i ≥ |j|, -j ≥ |i|."""
    case = _case(case)
    t, s = float(tau), float(sigma)
    if case == "i":
        return i, (i, j, t, s), i - j, i + j, t, s
    if case == "ii":
        return j, (j, i, s, t), j - i, i + j, s, t
    if case == "iii":
        return -i, (-i, -j, -t, -s), j - i, -i - j, -t, -s
    return -j, (-j, -i, -s, -t), i - j, -i - j, -s, -t


def applicable_cases(i, j) -> list:
    """All case labels whose region contains (i, j)."""
    i, j = _half(i), _half(j)
    return [c for c in _CASES if case_data(c, i, j, 0, 0)[0] >= max(abs(i), abs(j)) - 1e-12]


def applicable_case(i, j) -> str:
    """First applicable case; (i) when i = j = 0."""
    return applicable_cases(i, j)[0]


def _check_case(case, l, i, j):
    m = case_data(case, i, j, 0.0, 0.0)[0]
    if m < max(abs(i), abs(j)) - 1e-12 or m > l + 1e-12:
        raise GenMatEltError(f"case {case} does not apply to (l,i,j) = ({l},{i},{j})")
    return m


def aw_params_for(case, i, j, tau, sigma, q):
    """Askey-Wilson parameters (base q²) of the polynomial in ρ."""
    _, _, al, be, se, te = case_data(case, _half(i), _half(j), tau, sigma)
    return aw_jacobi_params(al, be, q ** se, q ** te, q * q)


@lru_cache(maxsize=256)
def _power(which, tau, sigma, q, k):
    if k == 0:
        return AqElement.scalar(1.0, q)
    if which == "rho":
        base = rho(tau, sigma, q)
    else:
        from .uqsl2 import act
        base = act("left", "D", rho(tau, sigma, q))
    return _power(which, tau, sigma, q, k - 1) * base


def _expand(which, l, i, j, tau, sigma, q, case):
    q = check_q(q)
    l, i, j = _half(l), _half(i), _half(j)
    case = applicable_case(i, j) if case is None else _case(case)
    m = _check_case(case, l, i, j)
    _, dargs, *_ = case_data(case, i, j, tau, sigma)
    d = d_const(l, *dargs, q)
    coeffs = askey_wilson_coeffs(round(l - m), *aw_params_for(case, i, j, tau, sigma, q), q * q)
    p = AqElement({}, q)
    for k, c in enumerate(coeffs):
        p = p + c * _power(which, float(tau), float(sigma), q, k)
    elt = a_elt if which == "Drho" else b_elt
    rhs = d * elt(m, i, j, tau, sigma, q) * p
    return rhs, rhs.dist(elt(l, i, j, tau, sigma, q))


def b_expansion(l, i, j, tau, sigma, q, case=None):
    """Rebuild b^l_{ij}(τ,σ) as d · b^m_{ij} · p_{l-m}(ρ_{τ,σ}) with the
    Askey-Wilson polynomial expanded in powers of ρ.

    Returns ``(element, residual)``, the residual being the largest
    coefficient difference against :func:`b_elt`.  ``case`` is one of
    ``i, j, -i, -j`` (or ``i, ii, iii, iv``); by default the first one that
    applies."""
    return _expand("rho", l, i, j, tau, sigma, q, case)


def a_expansion(l, i, j, tau, sigma, q, case=None):
    """Same as :func:`b_expansion` for a^l_{ij}(τ,σ), polynomial in D.ρ."""
    return _expand("Drho", l, i, j, tau, sigma, q, case)


# --------------------------------------------------------------------------
# one-dimensional representations


def tau_lambda(lam, x: AqElement) -> complex:
    """One-dimensional representation α ↦ λ, δ ↦ 1/λ, β, γ ↦ 0."""
    return one_dim_rep(lam, x)


def _minimal_product(case, i, j, tau, sigma, lam, q, shift):
    # shift = 1 for b, 0 for a; the b form carries q^{∓m}
    i, j = _half(i), _half(j)
    t, s = float(tau), float(sigma)
    Q = q * q
    L = lam * lam
    case = _case(case)
    if case == "i":
        return (c_const(i, j, s, q) * c_const(i, i, t, q) * q ** (-i * shift) * lam ** round(-2 * i)
                * q_shifted(L * q ** (shift + t - s), Q, round(i - j))
                * q_shifted(-L * q ** (shift + t + s), Q, round(i + j)))
    if case == "ii":
        return (c_const(j, i, t, q) * c_const(j, j, s, q) * q ** (-j * shift) * lam ** round(-2 * j)
                * q_shifted(L * q ** (shift + s - t), Q, round(j - i))
                * q_shifted(-L * q ** (shift + t + s), Q, round(i + j)))
    if case == "iii":
        return (c_const(-i, -j, -s, q) * c_const(-i, -i, -t, q) * q ** (i * shift) * lam ** round(2 * i)
                * q_shifted(L * q ** (shift - t + s), Q, round(j - i))
                * q_shifted(-L * q ** (shift - t - s), Q, round(-i - j)))
    return (c_const(-j, -i, -t, q) * c_const(-j, -j, -s, q) * q ** (j * shift) * lam ** round(2 * j)
            * q_shifted(L * q ** (shift - s + t), Q, round(i - j))
            * q_shifted(-L * q ** (shift - t - s), Q, round(-i - j)))


def tau_b_minimal(case, i, j, tau, sigma, lam, q) -> complex:
    """τ_λ(b^m_{ij}(τ,σ)) in product form, m the minimal spin of the case."""
    return _minimal_product(case, i, j, tau, sigma, lam, check_q(q), 1)


def tau_a_minimal(case, i, j, tau, sigma, lam, q) -> complex:
    """τ_λ(a^m_{ij}(τ,σ)) in product form."""
    return _minimal_product(case, i, j, tau, sigma, lam, check_q(q), 0)


def _inf_ratio(x, k, Q):
    # (x; Q)_∞ / (x Q^k; Q)_∞ for integer k of either sign
    if k >= 0:
        return q_shifted(x, Q, k)
    return 1 / q_shifted(x * Q ** k, Q, -k)


def tau_a_4phi3(l, i, j, tau, sigma, lam, q) -> complex:
    """τ_λ(a^l_{ij}(τ,σ)) as a single terminating 4φ3, valid for all (i, j)."""
    from .qcore import basic_hypergeometric

    q = check_q(q)
    l, i, j = _half(l), _half(i), _half(j)
    t, s = float(tau), float(sigma)
    Q = q * q
    L = lam * lam
    li, lj = round(l - i), round(l - j)
    pre = ((-1) ** li * c_const(l, j, s, q) * c_const(l, i, t, q)
           * q ** ((l - i) * (l - i - 1)) * q ** ((s - t) * (l - i)) * lam ** round(-2 * i)
           * q_shifted(q ** (t - s + 2 - 2 * l + 2 * i) / L, Q, li)
           * q_shifted(L * q ** (t - s + 2 * i - 2 * l), Q, lj)
           * _inf_ratio(-L * q ** (t + s), round(i + j), Q))
    phi = basic_hypergeometric(
        [Q ** (-li), Q ** (-lj), -q ** (2 * t - 2 * l + 2 * i), -q ** (-2 * s - 2 * l - 2 * j)],
        [q ** (-4 * l), q ** (2 - s + t - 2 * l + 2 * i) / L, q ** (t - s - 2 * l + 2 * i) * L],
        Q, Q, degree=min(li, lj))
    return pre * phi


def tau_b_closed(case, l, i, j, tau, sigma, lam, q, route="product") -> complex:
    """τ_λ(b^l_{ij}(τ,σ)) in closed form.

    ``route="product"``: d · (product form of the minimal element) · p_{l-m}
    at x = (λ² + λ^{-2})/2.  ``route="4phi3"``: the single 4φ3 for
    τ_{λ q^{1/2}}(a^l_{ij}), using a = D.b."""
    from .qpolys import askey_wilson

    q = check_q(q)
    l, i, j = _half(l), _half(i), _half(j)
    m = _check_case(case, l, i, j)
    if route == "4phi3":
        return tau_a_4phi3(l, i, j, tau, sigma, lam * math.sqrt(q), q)
    if route != "product":
        raise GenMatEltError(f"unknown route {route!r}")
    _, dargs, *_ = case_data(case, i, j, tau, sigma)
    x = (lam * lam + lam ** -2) / 2
    p = askey_wilson(round(l - m), x, *aw_params_for(case, i, j, tau, sigma, q), q * q)
    return d_const(l, *dargs, q) * tau_b_minimal(case, i, j, tau, sigma, lam, q) * p


def tau_a_closed(case, l, i, j, tau, sigma, lam, q) -> complex:
    """τ_λ(a^l_{ij}(τ,σ)) from the product form, polynomial at
    x = (q^{-1}λ² + qλ^{-2})/2."""
    from .qpolys import askey_wilson

    q = check_q(q)
    l, i, j = _half(l), _half(i), _half(j)
    m = _check_case(case, l, i, j)
    _, dargs, *_ = case_data(case, i, j, tau, sigma)
    x = (lam * lam / q + q / lam ** 2) / 2
    p = askey_wilson(round(l - m), x, *aw_params_for(case, i, j, tau, sigma, q), q * q)
    return d_const(l, *dargs, q) * tau_a_minimal(case, i, j, tau, sigma, lam, q) * p


def dual_qk_generating(t, x: int, sigma, N: int, q) -> tuple:
    """Both sides of the generating function of the dual q-Krawtchouk
    polynomials in the variable ``t``; returns ``(series, product)``."""
    from .qpolys import dual_q_krawtchouk_grid

    q = check_q(q)
    s = float(sigma)
    lhs = 0j
    for n in range(N + 1):
        lhs += (t ** n * q ** (n * (N + s) / 2) * q_shifted(q ** (-N), q, n) / q_shifted(q, q, n)
                * dual_q_krawtchouk_grid(n, x, s, N, q))
    rhs = (q_shifted(-t * q ** (-(N + s) / 2), q, x)
           * q_shifted(t * q ** ((s - N) / 2), q, N - x))
    return lhs, rhs
