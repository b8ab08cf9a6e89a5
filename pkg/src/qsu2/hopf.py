"""The Hopf *-algebra A_q(SU(2)).

Elements are finite linear combinations of the normal-ordered monomials
``alpha^k beta^b gamma^c`` (``k >= 0``) and ``delta^d beta^b gamma^c``
(``d > 0``), stored as ``{(k, b, c): coeff}`` with ``k = -d`` for the delta
branch.  Multiplication runs through the compiled kernel when it is built and
falls back to the pure-Python one otherwise (set ``QSU2_PURE_PYTHON=1`` to
force the fallback).
"""
from __future__ import annotations

import cmath
import math
import os
import threading
from typing import Callable, Iterable

import numpy as np

from .qcore import check_q

if os.environ.get("QSU2_PURE_PYTHON") == "1":
    from . import _kernels_py as _kern
    KERNEL_BACKEND = "python"
else:
    try:
        from . import _kernels as _kern
        KERNEL_BACKEND = "cython"
    except ImportError:  # extension not built
        from . import _kernels_py as _kern
        KERNEL_BACKEND = "python"

DROP_TOL = 1e-14

LETTERS = {"alpha": (1, 0, 0), "beta": (0, 1, 0), "gamma": (0, 0, 1), "delta": (-1, 0, 0)}


class HopfError(ValueError):
    pass


def _canonical(terms: dict, tol: float = DROP_TOL) -> dict:
    if not terms:
        return {}
    big = max(abs(v) for v in terms.values())
    if big == 0:
        return {}
    cut = tol * big
    return {m: complex(v) for m, v in terms.items() if abs(v) > cut}


def _same_q(x, y):
    if x.q != y.q:
        raise HopfError(f"elements over different bases q={x.q} and q={y.q}")


class AqElement:
    """Immutable element of A_q(SU(2))."""

    __slots__ = ("terms", "q")

    def __init__(self, terms: dict, q: float, canonical: bool = True):
        self.q = check_q(q)
        self.terms = _canonical(terms) if canonical else dict(terms)

    # construction ---------------------------------------------------------
    @classmethod
    def scalar(cls, value, q) -> "AqElement":
        return cls({(0, 0, 0): complex(value)}, q)

    @classmethod
    def monomial(cls, k: int, b: int, c: int, q, coeff=1.0) -> "AqElement":
        if b < 0 or c < 0:
            raise HopfError("negative beta/gamma exponent")
        return cls({(int(k), int(b), int(c)): complex(coeff)}, q)

    @classmethod
    def generator(cls, name: str, q) -> "AqElement":
        return cls({LETTERS[name]: 1.0}, q)

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, AqElement):
            other = AqElement.scalar(other, self.q)
        _same_q(self, other)
        out = dict(self.terms)
        for m, v in other.terms.items():
            out[m] = out.get(m, 0) + v
        return AqElement(out, self.q)

    __radd__ = __add__

    def __neg__(self):
        return AqElement({m: -v for m, v in self.terms.items()}, self.q, canonical=False)

    def __sub__(self, other):
        return self + (-other if isinstance(other, AqElement) else -complex(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, AqElement):
            _same_q(self, other)
            return AqElement(_kern.mul_terms(self.terms, other.terms, self.q), self.q)
        c = complex(other)
        return AqElement({m: c * v for m, v in self.terms.items()}, self.q)

    def __rmul__(self, other):
        c = complex(other)
        return AqElement({m: c * v for m, v in self.terms.items()}, self.q)

    def __truediv__(self, other):
        return self * (1 / complex(other))

    def __pow__(self, n: int):
        if n < 0:
            raise HopfError("negative powers are not defined in A_q")
        out = AqElement.scalar(1, self.q)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    # inspection -----------------------------------------------------------
    def coeff(self, k, b, c) -> complex:
        return self.terms.get((k, b, c), 0j)

    def max_abs(self) -> float:
        return max((abs(v) for v in self.terms.values()), default=0.0)

    def dist(self, other) -> float:
        """Largest coefficient of ``self - other`` (no dropping)."""
        keys = set(self.terms) | set(other.terms)
        return max((abs(self.terms.get(m, 0) - other.terms.get(m, 0)) for m in keys), default=0.0)

    def degree(self) -> int:
        return max((abs(k) + b + c for k, b, c in self.terms), default=0)

    def is_zero(self, tol=0.0) -> bool:
        return self.max_abs() <= tol

    def __repr__(self):
        return f"AqElement({len(self.terms)} terms, q={self.q})"

    def to_text(self) -> str:
        """Sorted ``coeff · α^a δ^d β^b γ^c`` lines, one per monomial."""
        lines = []
        for (k, b, c) in sorted(self.terms, key=lambda m: (abs(m[0]) + m[1] + m[2], -m[0], m[1], m[2])):
            v = self.terms[(k, b, c)]
            a, d = (k, 0) if k >= 0 else (0, -k)
            lines.append(f"({v.real:+.16e}{v.imag:+.16e}j) · α^{a} δ^{d} β^{b} γ^{c}")
        return "\n".join(lines)

    def map_terms(self, f: Callable) -> "AqElement":
        """Apply a linear map given on monomials as ``f(mono) -> AqElement``."""
        out: dict = {}
        for m, v in self.terms.items():
            for m2, w in f(m).terms.items():
                out[m2] = out.get(m2, 0) + v * w
        return AqElement(out, self.q)


def generators(q):
    """``(1, alpha, beta, gamma, delta)`` over base ``q``."""
    one = AqElement.scalar(1, q)
    return (one,) + tuple(AqElement.generator(n, q) for n in ("alpha", "beta", "gamma", "delta"))


def multiply(x: AqElement, y: AqElement) -> AqElement:
    return x * y


# --------------------------------------------------------------------------
# tensor products


class TensorElement:
    """Element of A_q ⊗ A_q as ``{(mono, mono): coeff}``."""

    __slots__ = ("terms", "q")

    def __init__(self, terms: dict, q: float, canonical: bool = True):
        self.q = check_q(q)
        self.terms = _canonical(terms) if canonical else dict(terms)

    @classmethod
    def pure(cls, x: AqElement, y: AqElement) -> "TensorElement":
        _same_q(x, y)
        return cls({(m1, m2): u * v for m1, u in x.terms.items() for m2, v in y.terms.items()}, x.q)

    def __add__(self, other):
        _same_q(self, other)
        out = dict(self.terms)
        for m, v in other.terms.items():
            out[m] = out.get(m, 0) + v
        return TensorElement(out, self.q)

    def __sub__(self, other):
        return self + other * -1

    def __mul__(self, other):
        if isinstance(other, TensorElement):
            _same_q(self, other)
            return TensorElement(_kern.mul_tensor_terms(self.terms, other.terms, self.q), self.q)
        c = complex(other)
        return TensorElement({m: c * v for m, v in self.terms.items()}, self.q)

    __rmul__ = __mul__

    def max_abs(self) -> float:
        return max((abs(v) for v in self.terms.values()), default=0.0)

    def dist(self, other) -> float:
        keys = set(self.terms) | set(other.terms)
        return max((abs(self.terms.get(m, 0) - other.terms.get(m, 0)) for m in keys), default=0.0)

    def flip(self) -> "TensorElement":
        return TensorElement({(m2, m1): v for (m1, m2), v in self.terms.items()}, self.q)

    def map(self, f_left: Callable | None = None, f_right: Callable | None = None) -> "TensorElement":
        """``(f_left ⊗ f_right)`` for linear maps given on monomials."""
        q = self.q
        ident = lambda m: AqElement({m: 1.0}, q, canonical=False)
        fl = f_left or ident
        fr = f_right or ident
        out: dict = {}
        for (m1, m2), v in self.terms.items():
            for l, u in fl(m1).terms.items():
                for r, w in fr(m2).terms.items():
                    out[(l, r)] = out.get((l, r), 0) + v * u * w
        return TensorElement(out, q)

    def contract(self, side: str, phi: Callable) -> AqElement:
        """Apply a scalar functional ``phi(mono)`` to one leg."""
        out: dict = {}
        for (m1, m2), v in self.terms.items():
            if side == "left":
                s, keep = phi(m1), m2
            else:
                s, keep = phi(m2), m1
            if s != 0:
                out[keep] = out.get(keep, 0) + v * s
        return AqElement(out, self.q)

    def multiply_out(self, f_left: Callable | None = None) -> AqElement:
        """``m ∘ (f_left ⊗ id)``."""
        q = self.q
        out = AqElement({}, q)
        groups: dict = {}
        for (m1, m2), v in self.terms.items():
            groups.setdefault(m1, {})[m2] = v
        for m1, right in groups.items():
            left = f_left(m1) if f_left else AqElement({m1: 1.0}, q)
            out = out + left * AqElement(right, q, canonical=False)
        return out


# --------------------------------------------------------------------------
# structure maps

_DELTA_CACHE: dict = {}
_DELTA_LOCK = threading.Lock()


def _delta_gen(name, q):
    a, b, c, d = LETTERS["alpha"], LETTERS["beta"], LETTERS["gamma"], LETTERS["delta"]
    table = {
        "alpha": {(a, a): 1.0, (b, c): 1.0},
        "beta": {(a, b): 1.0, (b, d): 1.0},
        "gamma": {(c, a): 1.0, (d, c): 1.0},
        "delta": {(c, b): 1.0, (d, d): 1.0},
    }
    return TensorElement(table[name], q, canonical=False)


def _delta_power(name, n, q) -> TensorElement:
    key = (q, name, n)
    hit = _DELTA_CACHE.get(key)
    if hit is not None:
        return hit
    if n == 0:
        val = TensorElement({((0, 0, 0), (0, 0, 0)): 1.0}, q, canonical=False)
    else:
        val = _delta_power(name, n - 1, q) * _delta_gen(name, q)
    with _DELTA_LOCK:
        _DELTA_CACHE[key] = val
    return val


def comultiply_mono(m, q) -> TensorElement:
    k, b, c = m
    out = _delta_power("alpha" if k >= 0 else "delta", abs(k), q)
    if b:
        out = out * _delta_power("beta", b, q)
    if c:
        out = out * _delta_power("gamma", c, q)
    return out


def comultiply(x: AqElement) -> TensorElement:
    """Δ, extended from the generators as an algebra homomorphism."""
    out: dict = {}
    for m, v in x.terms.items():
        for key, w in comultiply_mono(m, x.q).terms.items():
            out[key] = out.get(key, 0) + v * w
    return TensorElement(out, x.q)


def counit_mono(m) -> float:
    return 1.0 if m[1] == 0 and m[2] == 0 else 0.0


def counit(x: AqElement) -> complex:
    return sum((v for m, v in x.terms.items() if m[1] == 0 and m[2] == 0), 0j)


def antipode_mono(m, q) -> AqElement:
    k, b, c = m
    coef = (-1) ** (b + c) * q ** (c - b + k * (b + c))
    return AqElement({(-k, b, c): coef}, q, canonical=False)


def antipode(x: AqElement) -> AqElement:
    q = x.q
    out = {}
    for (k, b, c), v in x.terms.items():
        out[(-k, b, c)] = out.get((-k, b, c), 0) + v * (-1) ** (b + c) * q ** (c - b + k * (b + c))
    return AqElement(out, q)


def star(x: AqElement) -> AqElement:
    """The antilinear antimultiplicative involution with α* = δ, β* = −qγ."""
    q = x.q
    out = {}
    for (k, b, c), v in x.terms.items():
        key = (-k, c, b)
        out[key] = out.get(key, 0) + v.conjugate() * (-1) ** (b + c) * q ** (b - c + k * (b + c))
    return AqElement(out, q)


def haar_mono(m, q) -> float:
    k, b, c = m
    if k != 0 or b != c:
        return 0.0
    return (-q) ** b * (1 - q * q) / (1 - q ** (2 * b + 2))


def haar(x: AqElement) -> complex:
    """Haar functional; nonzero only on powers of βγ."""
    return sum((v * haar_mono(m, x.q) for m, v in x.terms.items()), 0j)


# --------------------------------------------------------------------------
# *-representations


def one_dim_rep(lam, x: AqElement) -> complex:
    """τ_λ: α ↦ λ, δ ↦ 1/λ, β, γ ↦ 0."""
    lam = complex(lam)
    if lam == 0:
        raise HopfError("one-dimensional representation needs λ ≠ 0")
    return sum((v * lam ** k for (k, b, c), v in x.terms.items() if b == 0 and c == 0), 0j)


def pi_theta(theta: float, x: AqElement) -> complex:
    """The one-dimensional *-representation π_θ = τ_{e^{iθ}}."""
    return one_dim_rep(cmath.exp(1j * theta), x)


def pi_infty_gens(theta: float, N: int, q: float):
    """Truncated matrices of α, β, γ, δ on span(f_0..f_N) in ℓ²(Z_+)."""
    n = np.arange(N + 1)
    alpha = np.zeros((N + 1, N + 1), dtype=complex)
    alpha[n[:-1], n[1:]] = np.sqrt(1 - q ** (2 * n[1:]))
    delta = alpha.conj().T
    gamma = np.diag(np.exp(1j * theta) * q ** n)
    beta = -q * gamma.conj().T
    return alpha, beta, gamma, delta


def pi_infty(x: AqElement, theta: float, N: int):
    """Truncated matrix of π^∞_θ(x) on span(f_0..f_N).

    Returns ``(matrix, exact)``: columns ``0..exact`` agree with the
    untruncated operator.
    """
    deg = x.degree()
    if N < deg:
        raise HopfError(f"truncation N={N} smaller than degree {deg}")
    q = x.q
    alpha, beta, gamma, delta = pi_infty_gens(theta, N, q)
    out = np.zeros((N + 1, N + 1), dtype=complex)
    eye = np.eye(N + 1)
    for (k, b, c), v in x.terms.items():
        base = np.linalg.matrix_power(alpha if k >= 0 else delta, abs(k)) if k else eye
        mat = base @ np.linalg.matrix_power(beta, b) @ np.linalg.matrix_power(gamma, c)
        out += v * mat
    return out, N - deg


def random_element(rng: np.random.Generator, q: float, degree: int = 4, nterms: int = 6) -> AqElement:
    """Random element with monomials of total degree ≤ ``degree``."""
    terms = {}
    for _ in range(nterms):
        k = int(rng.integers(-degree, degree + 1))
        rest = degree - abs(k)
        b = int(rng.integers(0, rest + 1))
        c = int(rng.integers(0, rest - b + 1))
        terms[(k, b, c)] = complex(rng.normal(), rng.normal())
    return AqElement(terms, q)


def monomials_up_to(degree: int) -> Iterable[tuple]:
    for tot in range(degree + 1):
        for k in range(-tot, tot + 1):
            rest = tot - abs(k)
            for b in range(rest + 1):
                yield (k, b, rest - b)
