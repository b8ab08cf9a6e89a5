"""U_q(su(2)): generator words, spin-l representations, the Casimir, the
twisted primitive elements X_sigma, and the left and right actions of U_q on
A_q(SU(2)) through the duality pairing."""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .hopf import AqElement, counit
from .qcore import check_q

LETTERS = "ABCD"


class SpinError(ValueError):
    pass


def two_l(l) -> int:
    """``2l`` as an int, rejecting anything outside ½Z_+."""
    tl = round(2 * float(l))
    if tl < 0 or abs(2 * float(l) - tl) > 1e-12:
        raise SpinError(f"spin must lie in ½Z_+, got {l}")
    return tl


def spin_range(l):
    """``[-l, -l+1, ..., l]`` as floats."""
    tl = two_l(l)
    return [(-tl + 2 * i) / 2 for i in range(tl + 1)]


def idx(l, n) -> int:
    """Position of basis vector ``e^l_n``."""
    return round(n + l)


@dataclass(frozen=True)
class ExtendedParameter:
    """σ ∈ R ∪ {+∞, -∞}; ``s(q) = q^σ`` for finite σ."""

    value: float

    @classmethod
    def parse(cls, text) -> "ExtendedParameter":
        if isinstance(text, ExtendedParameter):
            return text
        if isinstance(text, str):
            t = text.strip().lower()
            if t in ("inf", "+inf", "infinity", "+infinity"):
                return cls(math.inf)
            if t in ("-inf", "-infinity"):
                return cls(-math.inf)
        return cls(float(text))

    @property
    def finite(self) -> bool:
        return math.isfinite(self.value)

    def s(self, q: float) -> float:
        if not self.finite:
            raise ValueError("q^σ undefined for infinite σ")
        return q ** self.value

    def __neg__(self):
        return ExtendedParameter(-self.value)

    def __str__(self):
        return str(self.value)


# --------------------------------------------------------------------------
# U_q elements as linear combinations of words


class UqElement:
    """Finite linear combination of words over {A, B, C, D}."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict):
        for w in terms:
            if any(ch not in LETTERS for ch in w):
                raise ValueError(f"invalid generator word {w!r}")
        self.terms = {w: complex(v) for w, v in terms.items() if v != 0}

    @classmethod
    def word(cls, w: str, coeff=1.0) -> "UqElement":
        return cls({w: coeff})

    def __add__(self, other):
        out = dict(self.terms)
        for w, v in other.terms.items():
            out[w] = out.get(w, 0) + v
        return UqElement(out)

    def __sub__(self, other):
        return self + other * -1

    def __mul__(self, other):
        if isinstance(other, UqElement):
            out: dict = {}
            for w1, u in self.terms.items():
                for w2, v in other.terms.items():
                    out[w1 + w2] = out.get(w1 + w2, 0) + u * v
            return UqElement(out)
        return UqElement({w: v * complex(other) for w, v in self.terms.items()})

    def __rmul__(self, other):
        return UqElement({w: v * complex(other) for w, v in self.terms.items()})

    def __repr__(self):
        return " + ".join(f"({v:.6g}){w or '1'}" for w, v in self.terms.items())


def as_uq(x) -> UqElement:
    return x if isinstance(x, UqElement) else UqElement.word(x)


def x_sigma(sigma, q) -> UqElement:
    """X_σ = i q^{1/2} B − i q^{-1/2} C − (q^σ − q^{-σ})/(q − q^{-1}) (A − D),
    and X_{±∞} = D − A."""
    sigma = ExtendedParameter.parse(sigma)
    if not sigma.finite:
        return UqElement({"D": 1.0, "A": -1.0})
    s = sigma.s(q)
    k = (s - 1 / s) / (q - 1 / q)
    return UqElement({"B": 1j * math.sqrt(q), "C": -1j / math.sqrt(q), "A": -k, "D": k})


# --------------------------------------------------------------------------
# representations


@dataclass(frozen=True)
class RepMatrices:
    l: float
    q: float
    mA: np.ndarray
    mB: np.ndarray
    mC: np.ndarray
    mD: np.ndarray

    def gen(self, letter: str) -> np.ndarray:
        return {"A": self.mA, "B": self.mB, "C": self.mC, "D": self.mD}[letter]


@lru_cache(maxsize=256)
def rep_gen(l, q) -> RepMatrices:
    """Generator matrices of t^l on the basis e^l_{-l..l}."""
    q = check_q(q)
    tl = two_l(l)
    l = tl / 2
    dim = tl + 1
    ns = spin_range(l)
    mA = np.diag([q ** (-n) for n in ns]).astype(complex)
    mD = np.diag([q ** n for n in ns]).astype(complex)
    mB = np.zeros((dim, dim), dtype=complex)
    mC = np.zeros((dim, dim), dtype=complex)
    for n in ns:
        if n > -l:
            rad = (q ** (-l + n - 1) - q ** (l - n + 1)) * (q ** (-l - n) - q ** (l + n))
            mB[idx(l, n - 1), idx(l, n)] = math.sqrt(rad) / (1 / q - q)
        if n < l:
            rad = (q ** (-l + n) - q ** (l - n)) * (q ** (-l - n - 1) - q ** (l + n + 1))
            mC[idx(l, n + 1), idx(l, n)] = math.sqrt(rad) / (1 / q - q)
    for m in (mA, mB, mC, mD):
        m.setflags(write=False)
    return RepMatrices(l, q, mA, mB, mC, mD)


def rep_word(l, w, q) -> np.ndarray:
    """t^l(w) for a word or a :class:`UqElement`."""
    R = rep_gen(l, q)
    dim = two_l(l) + 1
    x = as_uq(w)
    out = np.zeros((dim, dim), dtype=complex)
    for word, v in x.terms.items():
        m = np.eye(dim, dtype=complex)
        for ch in word:
            m = m @ R.gen(ch)
        out += v * m
    return out


def casimir(l, q) -> np.ndarray:
    """t^l(Ω) built from Ω = (q^{-1}A² + qD² − 2)/(q^{-1} − q)² + BC."""
    R = rep_gen(l, q)
    return ((R.mA @ R.mA / q + q * R.mD @ R.mD - 2 * np.eye(len(R.mA))) / (1 / q - q) ** 2
            + R.mB @ R.mC)


def casimir_scalar(l, q) -> float:
    return q ** (1 - 2 * l) * (1 - q ** (2 * l + 1)) ** 2 / (1 - q * q) ** 2


def x_sigma_matrix(l, sigma, q) -> np.ndarray:
    return rep_word(l, x_sigma(sigma, q), q)


def x_sigma_a_matrix(l, sigma, q) -> np.ndarray:
    """t^l(X_σ A); self-adjoint."""
    return x_sigma_matrix(l, sigma, q) @ rep_gen(l, q).mA


# --------------------------------------------------------------------------
# actions on A_q

_HALF_A_LEFT = {0: 0.5, 1: -0.5, 2: 0.5, 3: -0.5}   # exponent of q in A.g
_HALF_A_RIGHT = {0: 0.5, 1: 0.5, 2: -0.5, 3: -0.5}  # exponent of q in g.A
_ALPHA, _BETA, _GAMMA, _DELTA = (1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, 0, 0)
_LEFT_BC = {
    "B": {3: _GAMMA, 1: _ALPHA},   # B.β = α, B.δ = γ
    "C": {0: _BETA, 2: _DELTA},    # C.α = β, C.γ = δ
}
_RIGHT_BC = {
    "B": {0: _GAMMA, 1: _DELTA},   # α.B = γ, β.B = δ
    "C": {2: _ALPHA, 3: _BETA},    # γ.C = α, δ.C = β
}
_CACHE: dict = {}
_LOCK = threading.Lock()


def _letters(m):
    # generator codes 0..3 = α, β, γ, δ of a normal-ordered monomial
    k, b, c = m
    return [0 if k > 0 else 3] * abs(k) + [1] * b + [2] * c


def _mono_of(codes):
    k = codes.count(0) - codes.count(3)
    return (k, codes.count(1), codes.count(2))


def _act_mono(side: str, letter: str, m, q) -> AqElement:
    key = (side, letter, m, q)
    hit = _CACHE.get(key)
    if hit is not None:
        return hit
    k, b, c = m
    if letter in "AD":
        e = (k - b + c) / 2 if side == "left" else (k + b - c) / 2
        if letter == "D":
            e = -e
        out = AqElement({m: q ** e}, q, canonical=False)
    else:
        codes = _letters(m)
        half = _HALF_A_LEFT if side == "left" else _HALF_A_RIGHT
        table = (_LEFT_BC if side == "left" else _RIGHT_BC)[letter]
        out = AqElement({}, q)
        for i, g in enumerate(codes):
            img = table.get(g)
            if img is None:
                continue
            # X.(ξη) = (A.ξ)(X.η) + (X.ξ)(D.η), and the mirror rule on the right
            pre, post = codes[:i], codes[i + 1:]
            scal = q ** (sum(half[h] for h in pre) - sum(half[h] for h in post))
            term = (AqElement({_mono_of(pre): scal}, q, canonical=False)
                    * AqElement({img: 1.0}, q, canonical=False)
                    * AqElement({_mono_of(post): 1.0}, q, canonical=False))
            out = out + term
    with _LOCK:
        _CACHE[key] = out
    return out


def _act_letter(side, letter, x: AqElement) -> AqElement:
    return x.map_terms(lambda m: _act_mono(side, letter, m, x.q))


def act(side: str, w, x: AqElement) -> AqElement:
    """``w.x`` (side="left") or ``x.w`` (side="right") for a word or
    :class:`UqElement` ``w``."""
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    u = as_uq(w)
    out = AqElement({}, x.q)
    for word, v in u.terms.items():
        y = x
        seq = reversed(word) if side == "left" else word
        for ch in seq:
            y = _act_letter(side, ch, y)
        out = out + v * y
    return out


def pairing(w, x: AqElement) -> complex:
    """⟨w, x⟩ = ε(w.x)."""
    return counit(act("left", w, x))


# --------------------------------------------------------------------------
# tensor products and Clebsch-Gordan


def tensor_gen(l1, l2, q) -> dict:
    """(t^{l1} ⊗ t^{l2}) Δ of the four generators."""
    R1, R2 = rep_gen(l1, q), rep_gen(l2, q)
    return {
        "A": np.kron(R1.mA, R2.mA),
        "B": np.kron(R1.mA, R2.mB) + np.kron(R1.mB, R2.mD),
        "C": np.kron(R1.mA, R2.mC) + np.kron(R1.mC, R2.mD),
        "D": np.kron(R1.mD, R2.mD),
    }


def tensor_word(l1, l2, w, q) -> np.ndarray:
    """(t^{l1} ⊗ t^{l2}) Δ(w) for a word or :class:`UqElement`."""
    G = tensor_gen(l1, l2, q)
    dim = len(G["A"])
    out = np.zeros((dim, dim), dtype=complex)
    for word, v in as_uq(w).terms.items():
        m = np.eye(dim, dtype=complex)
        for ch in word:
            m = m @ G[ch]
        out += v * m
    return out


def tensor_casimir(l1, l2, q) -> np.ndarray:
    G = tensor_gen(l1, l2, q)
    eye = np.eye(len(G["A"]))
    return (G["A"] @ G["A"] / q + q * G["D"] @ G["D"] - 2 * eye) / (1 / q - q) ** 2 + G["B"] @ G["C"]


class CGError(RuntimeError):
    pass


def isotypic_blocks(l1, l2, q, rtol=1e-8):
    """Orthonormal bases of the isotypic components of t^{l1} ⊗ t^{l2},
    keyed by spin."""
    T = tensor_casimir(l1, l2, q)
    T = (T + T.conj().T) / 2
    vals, vecs = np.linalg.eigh(T)
    blocks = {}
    used = np.zeros(len(vals), dtype=bool)
    lo, hi = abs(l1 - l2), l1 + l2
    l = lo
    while l <= hi + 1e-12:
        target = casimir_scalar(l, q)
        sel = np.abs(vals - target) <= rtol * abs(target)
        if sel.sum() != two_l(l) + 1:
            gaps = np.diff(np.sort(vals))
            raise CGError(f"spin {l}: found {sel.sum()} eigenvalues near {target}, "
                          f"expected {two_l(l) + 1}; min gap {gaps.min() if len(gaps) else 0:.3e}")
        blocks[l] = vecs[:, sel]
        used |= sel
        l += 1
    if not used.all():
        raise CGError("tensor Casimir has eigenvalues outside the Clebsch-Gordan series")
    return blocks


def cg_invariant_coeffs(l1, l2, sigma, q) -> dict:
    """``{l: |C^{l1,l2,l}_{0,0,0}(σ)|²}`` for integer spins ``l1, l2``.

    In each isotypic block the kernel vector of the tensor X_σA is located
    through its smallest singular value; the returned weight is its squared
    overlap with v^{l1,0}(σ) ⊗ v^{l2,0}(σ).
    """
    from .genmatelt import v_vector

    for s in (l1, l2):
        if two_l(s) % 2:
            raise SpinError("cg_invariant_coeffs needs integer spins")
    T = tensor_word(l1, l2, x_sigma(sigma, q) * UqElement.word("A"), q)
    v = np.kron(v_vector(l1, 0, sigma, q), v_vector(l2, 0, sigma, q))
    out = {}
    for l, P in isotypic_blocks(l1, l2, q).items():
        M = P.conj().T @ T @ P
        _, sv, vh = np.linalg.svd(M)
        w = P @ vh[-1].conj()
        out[l] = float(abs(np.vdot(w, v)) ** 2)
    return out
