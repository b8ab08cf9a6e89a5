"""Catalog of numerical identity checks.

Every check evaluates both sides of one identity on the configured grids and
records a list of parts, each with its own error measure and tolerance.  A
check passes when every part is within its tolerance.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numpy.polynomial import polynomial as P

from ..qcore import basic_hypergeometric, check_q, q_shifted, q_shifted_multi
from ..qpolys import (AWParams, askey_wilson, askey_wilson_coeffs, aw_jacobi, aw_jacobi_params,
                      aw_measure, chebyshev_U, cont_q_hermite, cont_q_ultraspherical,
                      dual_q_krawtchouk_grid, integrate, integrate_theta, little_q_jacobi, q_hahn,
                      qkrawtchouk_h, r_fn, r_fn_h, r_fn_weight)
from ..uqsl2 import ExtendedParameter, rep_word, spin_range, idx
from .. import hopf
from ..hopf import AqElement, TensorElement
from .. import genmatelt as gm

DEFAULT_THETA = tuple(float(x) for x in np.linspace(0.1, 3.0, 10))


class CatalogError(KeyError):
    pass


class ResourceError(ValueError):
    pass


def default_lambda_grid(q: float) -> tuple:
    r = math.sqrt(q)
    circle = [r * complex(math.cos(a), math.sin(a)) for a in (2 * math.pi * (k + 0.5) / 8 for k in range(8))]
    return tuple(circle + [0.6 + 0j, 0.9 + 0j, 1.3 + 0j, 1.7 + 0j])


@dataclass(frozen=True)
class CheckConfig:
    q: float = 0.5
    sigma: float = 0.3
    tau: float = -0.4
    mu: float = 0.9
    lmax: float | None = None       # None: every check uses its own default range
    theta_grid: tuple = DEFAULT_THETA
    lambda_grid: tuple | None = None
    tolerances: dict = field(default_factory=dict)
    workers: int = 1

    def __post_init__(self):
        check_q(self.q)
        for name in ("sigma", "tau", "mu"):
            object.__setattr__(self, name, ExtendedParameter.parse(getattr(self, name)).value)
        if self.lambda_grid is None:
            object.__setattr__(self, "lambda_grid", default_lambda_grid(self.q))
        if not self.theta_grid or not self.lambda_grid:
            raise ValueError("grids must be nonempty")
        if self.lmax is not None:
            lm = round(2 * float(self.lmax)) / 2
            if lm < 0 or abs(lm - float(self.lmax)) > 1e-12:
                raise ValueError(f"lmax must be a nonnegative half-integer, got {self.lmax}")
            if lm > 3:
                raise ResourceError("lmax is capped at 3")
            object.__setattr__(self, "lmax", lm)

    def params(self) -> dict:
        def enc(v):
            return v if math.isfinite(v) else ("inf" if v > 0 else "-inf")
        return {"q": self.q, "sigma": enc(self.sigma), "tau": enc(self.tau), "mu": enc(self.mu),
                "lmax": self.lmax}

    def cap(self, default: float) -> float:
        return default if self.lmax is None else min(default, self.lmax)


@dataclass
class CheckResult:
    id: str
    params: dict
    maxAbsErr: float
    maxRelErr: float
    passed: bool
    runtimeMs: float
    notes: str

    def as_dict(self, timings: bool = True) -> dict:
        return {"id": self.id, "params": self.params, "maxAbsErr": self.maxAbsErr,
                "maxRelErr": self.maxRelErr, "pass": self.passed,
                "runtimeMs": round(self.runtimeMs, 3) if timings else 0.0, "notes": self.notes}


class _Skip(Exception):
    pass


class _Parts:
    """Accumulates (name, error, tolerance) parts for one check."""

    def __init__(self, tol_override=None):
        self.parts: list = []       # name -> [err, tol, abs, rel, worst]
        self.extra: list = []
        self.override = tol_override

    def _get(self, name, tol):
        for p in self.parts:
            if p[0] == name:
                return p
        p = [name, 0.0, self.override if self.override is not None else tol, 0.0, 0.0, ""]
        self.parts.append(p)
        return p

    def err(self, name, err, tol, abs_err=None, rel_err=None, where=""):
        p = self._get(name, tol)
        err = float(err)
        if not math.isfinite(err):
            err = math.inf
        p[3] = max(p[3], float(err if abs_err is None else abs_err))
        p[4] = max(p[4], float(err if rel_err is None else rel_err))
        if err > p[1] or (err == math.inf and p[1] != math.inf):
            p[1] = err
            p[5] = where

    def values(self, name, lhs, rhs, tol, mode="rel", where=""):
        """Compare arrays; ``rel`` divides by the largest |rhs| (or |lhs|),
        ``scaled`` by max(1, that), ``abs`` takes the raw difference."""
        lhs = np.atleast_1d(np.asarray(lhs, dtype=complex)).ravel()
        rhs = np.atleast_1d(np.asarray(rhs, dtype=complex)).ravel()
        diff = np.abs(lhs - rhs)
        k = int(np.argmax(diff))
        a = float(diff[k])
        scale = float(max(np.abs(lhs).max(), np.abs(rhs).max()))
        rel = a / scale if scale > 0 else a
        e = {"rel": rel, "scaled": a / max(1.0, scale), "abs": a}[mode]
        loc = f"{where} idx={k} lhs={_c(lhs[k])} rhs={_c(rhs[k])}" if where or lhs.size > 1 else where
        self.err(name, e, tol, a, rel, loc)

    def elements(self, name, x, y, tol, where=""):
        """Coefficientwise comparison of A_q (or tensor) elements, scaled."""
        a = x.dist(y)
        scale = max(x.max_abs(), y.max_abs())
        rel = a / scale if scale > 0 else a
        self.err(name, a / max(1.0, scale), tol, a, rel, where)

    def note(self, text):
        self.extra.append(text)


def _c(z) -> str:
    z = complex(z)
    if z.imag == 0:
        return f"{z.real:.6g}"
    return f"{z.real:.6g}{z.imag:+.6g}j"


def _need_finite(cfg, *names):
    for n in names:
        if not math.isfinite(getattr(cfg, n)):
            raise _Skip(f"needs finite {n}")


def _ints(upto) -> range:
    return range(int(math.floor(upto + 1e-9)) + 1)


def _halves(upto) -> list:
    return [k / 2 for k in range(int(round(2 * upto)) + 1)]


# --------------------------------------------------------------------------
# addition formula, Fourier series, coaction, linearisation


def _addition_sides(l, lam, nu, t, s, mu, q):
    Q = q * q

    def xi(z):
        return (z / q + q / z) / 2

    def Pj(n, x, al, a, b):
        return aw_jacobi(n, x, al, al, a, b, Q)

    lhs = q_shifted(Q, Q, l) * q ** (-l) * Pj(l, xi(lam * nu), 0, q ** t, q ** s)
    rhs = (Pj(l, xi(lam), 0, q ** mu, q ** t) * Pj(l, xi(nu), 0, q ** mu, q ** s)
           / q_shifted_multi([-q ** (2 - 2 * mu), -q ** (2 + 2 * mu)], Q, l))
    for p in range(1, l + 1):
        for sg in (1, -1):
            m_, t_, s_ = sg * mu, sg * t, sg * s
            fac = ((1 + q ** (4 * p + 2 * m_)) * q_shifted(Q, Q, l + p) * (lam * nu) ** (-p)
                   / ((1 + q ** (2 * m_)) * q_shifted(Q, Q, l - p)
                      * q_shifted(-q ** (2 - 2 * m_), Q, l - p) * q_shifted(-q ** (2 + 2 * m_), Q, l + p)))
            poch = np.array([q_shifted_multi([a * q ** (m_ - t_), -a * q ** (t_ + m_),
                                              b * q ** (m_ - s_), -b * q ** (m_ + s_)], Q, p)
                             for a, b in zip(np.atleast_1d(lam), np.atleast_1d(nu))])
            rhs = rhs + (fac * poch * Pj(l - p, xi(lam), p, q ** m_, q ** t_)
                         * Pj(l - p, xi(nu), p, q ** m_, q ** s_))
    return lhs, rhs


def check_addition_formula(cfg, acc):
    _need_finite(cfg, "sigma", "tau", "mu")
    lam_grid = np.array(cfg.lambda_grid)
    lam, nu = np.meshgrid(lam_grid, lam_grid)
    lam, nu = lam.ravel(), nu.ravel()
    for l in _ints(cfg.cap(3)):
        lhs, rhs = _addition_sides(l, lam, nu, cfg.tau, cfg.sigma, cfg.mu, cfg.q)
        acc.values("addition formula", lhs, rhs, 1e-8, mode="scaled", where=f"l={l}")


def check_fourier_series(cfg, acc):
    _need_finite(cfg, "sigma", "tau")
    q, s, t = cfg.q, cfg.sigma, cfg.tau
    Q = q * q
    th = np.array(cfg.theta_grid)
    for l in _ints(cfg.cap(3)):
        vs, vt = gm.v_vector(l, 0, s, q), gm.v_vector(l, 0, t, q)
        lhs = aw_jacobi(l, np.cos(th), 0, 0, q ** s, q ** t, Q)
        rhs = sum(vs[idx(l, n)] * np.conj(vt[idx(l, n)]) * q ** (-n) * np.exp(-1j * n * th)
                  for n in spin_range(l))
        # constant from the e^{-ilθ} coefficient
        top_l = askey_wilson_coeffs(l, *aw_jacobi_params(0, 0, q ** s, q ** t, Q), Q)[l] / 2 ** l
        top_r = vs[idx(l, l)] * np.conj(vt[idx(l, l)]) * q ** (-l)
        C = top_l / top_r
        acc.values("Fourier series", lhs, C * rhs, 1e-9, mode="scaled", where=f"l={l}")
        acc.values("constant = 1/d", C, 1 / gm.d_const(l, 0, 0, t, s, q), 1e-10, where=f"l={l}")


def check_coaction(cfg, acc):
    q, s, t, mu = cfg.q, cfg.sigma, cfg.tau, cfg.mu
    for l in _ints(cfg.cap(1)):
        for i in spin_range(l):
            lhs = hopf.comultiply(gm.b_elt(l, i, 0, t, s, q))
            rhs = TensorElement({}, q)
            for p in spin_range(l):
                rhs = rhs + TensorElement.pure(gm.a_elt(l, i, p, t, mu, q), gm.b_elt(l, p, 0, mu, s, q))
            acc.elements("coaction", lhs, rhs, 1e-9, where=f"l={l} i={i}")


def _rho_haar_measure(tau, sigma, q):
    return aw_measure(AWParams(-q ** (sigma + tau + 1), -q ** (-sigma - tau + 1),
                               q ** (sigma - tau + 1), q ** (-sigma + tau + 1), q * q))


def check_linearisation(cfg, acc):
    _need_finite(cfg, "sigma")
    q, s = cfg.q, cfg.sigma
    Q = q * q
    meas = _rho_haar_measure(s, s, q)
    th = np.array(cfg.theta_grid)
    L = int(math.floor(cfg.cap(2) + 1e-9))

    def p(n, x):
        return aw_jacobi(n, x, 0, 0, q ** s, q ** s, Q)

    norms = {n: integrate(meas, lambda x, n=n: p(n, x) ** 2) for n in range(2 * L + 1)}
    for l1 in range(L + 1):
        for l2 in range(l1, L + 1):
            cg = gm_cg(l1, l2, s, q)
            recon = 0
            for l in range(l1 + l2 + 1):
                c = integrate(meas, lambda x: p(l1, x) * p(l2, x) * p(l, x)) / norms[l]
                c = complex(c)
                acc.err("non-negative", max(0.0, -c.real), 1e-10, where=f"l1={l1} l2={l2} l={l}")
                acc.err("real", abs(c.imag), 1e-10, where=f"l1={l1} l2={l2} l={l}")
                if l < abs(l1 - l2):
                    acc.err("support", abs(c), 1e-8, where=f"l1={l1} l2={l2} l={l}")
                else:
                    pred = cg.get(l, 0.0) * gm.d_const(l, 0, 0, s, s, q) / (
                        gm.d_const(l1, 0, 0, s, s, q) * gm.d_const(l2, 0, 0, s, s, q))
                    acc.values("CG cross-check", c, pred, 1e-6, mode="scaled",
                               where=f"l1={l1} l2={l2} l={l}")
                recon = recon + c * p(l, np.cos(th))
            acc.values("product reconstruction", p(l1, np.cos(th)) * p(l2, np.cos(th)), recon, 1e-8,
                       mode="scaled", where=f"l1={l1} l2={l2}")


def gm_cg(l1, l2, s, q):
    from ..uqsl2 import cg_invariant_coeffs
    return cg_invariant_coeffs(l1, l2, s, q)


# --------------------------------------------------------------------------
# one-dimensional representations, bilinear sums, discrete orthogonality


def check_prop91_closed_form(cfg, acc):
    _need_finite(cfg, "sigma", "tau")
    q, s, t = cfg.q, cfg.sigma, cfg.tau
    lams = list(cfg.lambda_grid)
    for l in _halves(cfg.cap(2)):
        for i in spin_range(l):
            for j in spin_range(l):
                a = gm.a_elt(l, i, j, t, s, q)
                b = gm.b_elt(l, i, j, t, s, q)
                va = np.array([gm.tau_lambda(z, a) for z in lams])
                vb = np.array([gm.tau_lambda(z, b) for z in lams])
                where = f"l={l} i={i} j={j}"
                acc.values("single 4phi3 form", va, [gm.tau_a_4phi3(l, i, j, t, s, z, q) for z in lams],
                           1e-10, where=where)
                for case in gm.applicable_cases(i, j):
                    if gm.case_data(case, i, j, 0, 0)[0] > l + 1e-12:
                        continue
                    acc.values("product form", va,
                               [gm.tau_a_closed(case, l, i, j, t, s, z, q) for z in lams], 1e-10,
                               where=f"{where} case={case}")
                    acc.values("product form", vb,
                               [gm.tau_b_closed(case, l, i, j, t, s, z, q) for z in lams], 1e-10,
                               where=f"{where} case={case} (b)")
    # dual q-Krawtchouk generating function, with t running over λ²
    for N in _ints(2 * cfg.cap(2)):
        for x in range(N + 1):
            ser, prod = zip(*(gm.dual_qk_generating(z * z, x, s, N, q) for z in lams))
            acc.values("generating function", ser, prod, 1e-10, where=f"N={N} x={x}")


def _bilinear_lhs(N, i, j, tt, s, t, q):
    out = 0j
    for n in range(N + 1):
        w = (q ** (n * (s + t) / 2) * q ** (n * (n - 1) / 2)
             * np.prod([1 - q ** (N - k) for k in range(n)]) / q_shifted(q, q, n))
        out += w * tt ** n * dual_q_krawtchouk_grid(n, j, s, N, q) * dual_q_krawtchouk_grid(n, i, t, N, q)
    return out


def _bilinear_rhs(N, i, j, tt, s, t, q, printed=False):
    # printed=True uses (t^{-1} q^{(σ-τ)/2+1-i}; q)_i as it stands in print
    e1 = (s - t) / 2 if printed else (t - s) / 2
    pre = ((-1) ** i * q ** (i * (i - 1) / 2) * q ** (i * (s - t) / 2) * tt ** i
           * q_shifted(q ** (e1 + 1 - i) / tt, q, i) * q_shifted(tt * q ** ((t - s) / 2 - i), q, j)
           * gm._inf_ratio(-tt * q ** ((t + s) / 2), N - i - j, q))
    phi = basic_hypergeometric([q ** -i, q ** -j, -q ** (t - i), -q ** (j - N - s)],
                               [q ** -N, q ** ((t - s) / 2 + 1 - i) / tt, tt * q ** ((t - s) / 2 - i)],
                               q, q, degree=min(i, j))
    return pre * phi


def check_prop92_bilinear(cfg, acc):
    _need_finite(cfg, "sigma", "tau")
    q, s, t = cfg.q, cfg.sigma, cfg.tau
    ts = [z * z for z in cfg.lambda_grid]
    printed_worst = 0.0
    for N in _ints(2 * cfg.cap(3)):
        for i in range(N + 1):
            for j in range(N + 1):
                lhs = [_bilinear_lhs(N, i, j, tt, s, t, q) for tt in ts]
                acc.values("bilinear sum", lhs, [_bilinear_rhs(N, i, j, tt, s, t, q) for tt in ts], 1e-10,
                           where=f"N={N} i={i} j={j}")
                pr = np.array([_bilinear_rhs(N, i, j, tt, s, t, q, printed=True) for tt in ts])
                sc = max(np.abs(lhs).max(), 1e-300)
                printed_worst = max(printed_worst, float(np.abs(np.array(lhs) - pr).max() / sc))
                if i == 0:
                    gen = [gm.dual_qk_generating(-tt * q ** ((t + N) / 2), j, s, N, q)[1] for tt in ts]
                    acc.values("i=0 gives the generating function", lhs, gen, 1e-10, where=f"N={N} j={j}")
        # σ = τ, t = 1: the 4φ3 collapses and the sum is diagonal
        G = np.array([[_bilinear_lhs(N, i, j, 1.0, s, s, q) for j in range(N + 1)] for i in range(N + 1)])
        diag = np.diag(G)
        acc.err("sigma=tau, t=1 off-diagonal", np.abs(G - np.diag(diag)).max() / np.abs(diag).max(),
                1e-11, where=f"N={N}")
        coll = []
        for i in range(N + 1):
            pre = (-1) ** i * q ** (i * (i - 1) / 2) * gm._inf_ratio(-q ** s, N - 2 * i, q)
            coll.append(pre * q_shifted_multi([q ** -i, q ** -i, -q ** (s - i), -q ** (i - N - s)], q, i)
                        / q_shifted_multi([q ** -N, q], q, i) * q ** i)
        acc.values("sigma=tau, t=1 collapse", diag, coll, 1e-10, where=f"N={N}")
        norm = q_shifted(-q ** s, q, N + 1) / q ** (N + s)
        acc.values("sigma=tau, t=1 vs q-Krawtchouk norms", diag,
                   [norm / qkrawtchouk_h(i, s, N, q) for i in range(N + 1)], 1e-10, where=f"N={N}")
    if printed_worst > 1e-10:
        acc.note(f"printed prefactor (t^-1 q^((sigma-tau)/2+1-i);q)_i disagrees (rel err {printed_worst:.2e}); "
                 "checked with (t^-1 q^((tau-sigma)/2+1-i);q)_i, matching the single 4phi3 form")


def check_prop94_orthogonality(cfg, acc):
    _need_finite(cfg, "sigma", "tau")
    q = cfg.q
    for s, t, label in ((cfg.sigma, cfg.tau, "discrete orthogonality"), (cfg.tau, cfg.sigma, "discrete orthogonality, dual")):
        for N in _ints(2 * cfg.cap(3)):
            for th in cfg.theta_grid:
                R = np.array([[r_fn(n, p, s, t, th, N, q) for p in range(N + 1)] for n in range(N + 1)])
                w = np.array([r_fn_weight(p, s, N, q) for p in range(N + 1)])
                h = np.array([r_fn_h(n, s, t, th, N, q) for n in range(N + 1)])
                G = (R * w) @ R.conj().T
                # normalised Gram matrix sqrt(h_n h_m) G_{nm} should be the identity
                Gn = G * np.sqrt(np.outer(h, h))
                acc.values(label, Gn, np.eye(N + 1), 1e-9, mode="abs", where=f"N={N} theta={th:.3f}")


# --------------------------------------------------------------------------
# tridiagonal matrix and monic orthogonal polynomials


def _A_matrix(l, sigma, q):
    V = gm.eigen_basis(l, sigma, q)
    D2 = np.diag([q ** (2 * m) for m in spin_range(l)])
    return V.conj().T @ D2 @ V


def check_tridiagonal(cfg, acc):
    q, s = cfg.q, cfg.sigma
    for l in _ints(cfg.cap(3)):
        V = gm.eigen_basis(l, s, q)
        A = _A_matrix(l, s, q)
        Arep = V.conj().T @ rep_word(l, "DD", q) @ V
        sc = max(1.0, np.abs(A).max())
        acc.err("matches t^l(D^2)", np.abs(A - Arep).max() / sc, 1e-12, where=f"l={l}")
        band = np.abs(np.subtract.outer(np.arange(len(A)), np.arange(len(A)))) > 1
        acc.err("tridiagonal", (np.abs(A[band]).max() if band.any() else 0.0) / sc, 1e-12, where=f"l={l}")
        acc.err("real", np.abs(A.imag).max() / sc, 1e-12, where=f"l={l}")
        acc.err("symmetric", np.abs(A - A.T).max() / sc, 1e-12, where=f"l={l}")
        acc.err("positive diagonal", max(0.0, -float(np.diag(A).real.min())), 1e-12, where=f"l={l}")
        Am = _A_matrix(l, -s, q)
        acc.err("A_{-i,-j}(-sigma) = A_{i,j}(sigma)", np.abs(Am[::-1, ::-1] - A).max() / sc, 1e-12,
                where=f"l={l}")
        # t^l(D^{2k}) v^{l,0} only reaches v^{l,p} with |p| <= k, and c_p(σ) = c_{-p}(-σ)
        Vm = gm.eigen_basis(l, -s, q)
        e0 = np.zeros(len(A))
        e0[idx(l, 0)] = 1.0
        for k in range(l + 1):
            Dk = rep_word(l, "DD" * k, q) if k else np.eye(len(A))
            c = V.conj().T @ Dk @ V @ e0
            cm = Vm.conj().T @ Dk @ Vm @ e0
            csc = max(1.0, np.abs(c).max())
            far = [idx(l, p) for p in spin_range(l) if abs(p) > k]
            acc.err("D^2k v^0 support |p| <= k", (np.abs(c[far]).max() if far else 0.0) / csc, 1e-12,
                    where=f"l={l} k={k}")
            acc.err("c_p(sigma) = c_-p(-sigma)", np.abs(cm[::-1] - c).max() / csc, 1e-12, where=f"l={l} k={k}")


def monic_polys(l, sigma, q):
    """Monic orthogonal polynomials (coefficient arrays) for the weights
    |v^{l,0}_n(σ)|² at x_n = q^{2n}, built by the Stieltjes procedure (the
    three-term recurrence form of Gram-Schmidt, which stays stable)."""
    v = gm.v_vector(l, 0, sigma, q)
    x = np.array([q ** (2 * n) for n in spin_range(l)])
    w = np.abs(v) ** 2
    polys = [np.array([1.0])]
    vals = [np.ones_like(x)]
    norms = [w.sum()]
    for k in range(l):
        b = np.sum(w * x * vals[k] ** 2) / norms[k]
        nxt = P.polysub(P.polymulx(polys[k]), b * polys[k])
        nval = (x - b) * vals[k]
        if k:
            c = norms[k] / norms[k - 1]
            nxt = P.polysub(nxt, c * polys[k - 1])
            nval = nval - c * vals[k - 1]
        polys.append(nxt)
        vals.append(nval)
        norms.append(np.sum(w * nval ** 2))
    return polys


def _two_sided_err(l, s, q):
    """Worst scaled deviation of t^l(p_k(D²))v^{l,0}(σ) from the two-sided
    form A_k(σ)v^{l,k} + A_k(-σ)v^{l,-k}, plus the offending k and coefficients."""
    A = _A_matrix(l, s, q)
    e0 = np.zeros(len(A))
    e0[idx(l, 0)] = 1.0
    worst = (0.0, 0, None)
    for k, p in enumerate(monic_polys(l, s, q)):
        c = sum(ck * np.linalg.matrix_power(A, j) for j, ck in enumerate(p)) @ e0
        want = np.zeros(len(A), dtype=complex)
        Ak = np.linalg.matrix_power(A, k)
        want[idx(l, k)] += Ak[idx(l, k), idx(l, 0)]
        if k:
            want[idx(l, -k)] += Ak[idx(l, -k), idx(l, 0)]
        e = np.abs(c - want).max() / max(1.0, np.abs(want).max())
        if e > worst[0]:
            worst = (e, k, c)
    return worst


def check_monic_orthogonal(cfg, acc):
    q, s = cfg.q, cfg.sigma
    _need_finite(cfg, "sigma")
    Q = q * q
    for l in _ints(cfg.cap(3)):
        v0 = gm.v_vector(l, 0, s, q)
        x = np.array([q ** (2 * n) for n in spin_range(l)])
        w = np.abs(v0) ** 2
        Ap, Am = _A_matrix(l, s, q), _A_matrix(l, -s, q)
        ps = monic_polys(l, s, q)
        for k, p in enumerate(ps):
            acc.values("monic", p[-1], 1.0, 1e-14, where=f"l={l} k={k}")
            gk = np.sum(w * P.polyval(x, p) ** 2)
            for m, pm in enumerate(ps[:k]):
                g = np.sum(w * np.conj(P.polyval(x, p)) * P.polyval(x, pm))
                g /= np.sqrt(gk * np.sum(w * P.polyval(x, pm) ** 2))
                acc.values("orthogonality (normalised)", g, 0.0, 1e-10, mode="abs", where=f"l={l} n={k} m={m}")
            if k == 0:
                continue
            Ak_p = np.linalg.matrix_power(Ap, k)[idx(l, k), idx(l, 0)]
            Ak_m = np.linalg.matrix_power(Am, k)[idx(l, k), idx(l, 0)]
            # the Krylov vector's top coefficients give the leading part of the norm
            acc.values("stated norm A_k(s)^2 + A_k(-s)^2", gk, abs(Ak_p) ** 2 + abs(Ak_m) ** 2, 1e-10,
                       where=f"l={l} k={k}")
            lhs = P.polyval(x, p) * v0
            rhs = Ak_p * gm.v_vector(l, k, s, q) + Ak_m * gm.v_vector(l, -k, s, q)
            acc.values("two-sided form", lhs, rhs, 1e-10, mode="scaled", where=f"l={l} k={k}")
        for k in range(l + 1):
            mom = np.sum(w * x ** k)
            phi = basic_hypergeometric([Q ** -l, Q ** (1 + l), Q ** -k, Q ** (1 + k)],
                                       [Q, -q ** (2 - 2 * s), -q ** (2 + 2 * s)], Q, Q, degree=min(l, k))
            acc.values("moment 4phi3", mom, phi, 1e-10, where=f"l={l} k={k}")
    # the same two-sided form at σ = 0, where A_jj = A_-j,-j
    l0 = max(_ints(cfg.cap(3)))
    acc.err("two-sided form at sigma=0", _two_sided_err(l0, 0.0, q)[0], 1e-10, where=f"l={l0}")
    if s != 0 and l0 >= 2:
        A = _A_matrix(l0, s, q)
        acc.note("the v^{l,+-1} coefficients of p_2(D^2)v^{l,0} equal A_{+-1,0}(A_00 + A_{+-1,+-1} - b), "
                 "so the two-sided form needs A_11(sigma) = A_11(-sigma); here "
                 f"A_11 = {A[idx(l0, 1), idx(l0, 1)].real:.6g}, A_-1-1 = {A[idx(l0, -1), idx(l0, -1)].real:.6g}")


def check_lemma103_weights(cfg, acc):
    q = cfg.q
    q4 = q ** 4
    for l in _ints(cfg.cap(3)):
        v = gm.v_vector(l, 0, 0.0, q)
        for n in spin_range(l):
            got = abs(v[idx(l, n)]) ** 2
            n = int(n)
            if (l - n) % 2:
                acc.err("odd l-n vanish", got, 1e-13, where=f"l={l} n={n}")
            else:
                a, b = (l - n) // 2, (l + n) // 2
                want = (q ** (l + n) * q_shifted(q * q, q4, a) * q_shifted(q * q, q4, b)
                        / (q_shifted(q4, q4, a) * q_shifted(q4, q4, b)))
                acc.values("even l-n closed form", got, want, 1e-12, mode="abs", where=f"l={l} n={n}")


def check_qhahn_connection(cfg, acc):
    q, t = cfg.q, cfg.tau
    Q = q * q
    th = np.array(cfg.theta_grid)
    z = np.exp(1j * th)
    # at σ = 0 the monic polynomials are rescaled q-Hahn polynomials
    xs = np.array([0.15, 0.6, 1.1, 2.3, 3.7])
    for l in _ints(cfg.cap(3)):
        if l == 0:
            continue
        ps = monic_polys(l, 0.0, q)
        pts = np.concatenate([xs, [q ** (2 * n) for n in spin_range(l)]])
        for m, p in enumerate(ps):
            want = (q ** (2 * l * m) * q_shifted(Q, q ** 4, m) * q_shifted(q ** (-4 * l), q ** 4, m)
                    / q_shifted(q ** (4 * m), q ** 4, m) * q_hahn(m, q ** (-2 * l) * pts, 1 / Q, 1 / Q, l, q ** 4))
            acc.values("monic = scaled q-Hahn", P.polyval(pts, p), want, 1e-10, where=f"l={l} m={m}")
    if not math.isfinite(t):
        acc.note("q-Hahn shift operator skipped: needs finite tau")
    for l in _ints(cfg.cap(5)):
        for m in range(l + 1):
            def shift_op(f):
                # E_- z^r = q^{-r} z^r, so Q_m(q^{-l} E_-) scales mode r by Q_m(q^{-l-r})
                modes = _fourier_modes(f, l)
                mult = q_hahn(m, q ** (-l - np.arange(-l, l + 1.0)), 1 / q, 1 / q, l, Q)
                return sum(modes[r + l] * mult[r + l] * z ** r for r in range(-l, l + 1))
            if math.isfinite(t):
                lhs = shift_op(lambda th_: aw_jacobi(l, np.cos(th_), 0, 0, 1, q ** (t / 2), q))
                f1 = np.array([q_shifted_multi([zi * q ** ((1 - t) / 2), -zi * q ** ((1 + t) / 2)], q, m) for zi in z])
                f2 = np.array([q_shifted_multi([zi * q ** ((1 + t) / 2), -zi * q ** ((1 - t) / 2)], q, m) for zi in z])
                rhs = 0.5 * q_shifted(q ** (l + 1), q, m) * np.exp(-1j * m * th) * (
                    f1 * aw_jacobi(l - m, np.cos(th), m, m, 1, q ** (t / 2), q)
                    + f2 * aw_jacobi(l - m, np.cos(th), m, m, 1, q ** (-t / 2), q))
                acc.values("q-Hahn shift operator", lhs, rhs, 1e-9, where=f"l={l} m={m}")
            lhs = shift_op(lambda th_: cont_q_ultraspherical(l, np.cos(th_), q, Q))
            rhs = (q_shifted(q, Q, m) / q_shifted(q ** (2 * l - 2 * m + 2), Q, m) * np.exp(-1j * m * th)
                   * np.array([q_shifted(q * zi ** 2, Q, m) for zi in z])
                   * cont_q_ultraspherical(l - m, np.cos(th), q ** (1 + 2 * m), Q))
            acc.values("tau=0 specialisation", lhs, rhs, 1e-9, where=f"l={l} m={m}")


def _fourier_modes(f, deg):
    """Coefficients of z^r, r = -deg..deg, of the trig polynomial f(θ)."""
    M = 2 * deg + 2
    th = 2 * np.pi * np.arange(M) / M
    vals = np.asarray(f(th), dtype=complex)
    r = np.arange(-deg, deg + 1)
    return (np.exp(-1j * np.outer(r, th)) @ vals) / M


# --------------------------------------------------------------------------
# characters


def _cheb_U_aq(n, x: AqElement) -> AqElement:
    prev, cur = AqElement.scalar(1.0, x.q), 2 * x
    if n == 0:
        return prev
    for _ in range(n - 1):
        prev, cur = cur, 2 * x * cur - prev
    return cur


def _character_expansion(l, sigma, th, q, printed=False):
    Q = q * q
    z = np.exp(1j * th)
    tot = np.zeros_like(th, dtype=complex)
    for sg in (sigma, -sigma):
        for m in range(math.ceil(l - 1) + 1):
            k = round(2 * l - 2 * m)
            tot = tot + (abs(gm.c_const(l, l - m, sg, q)) ** 2 * q ** (-l) / gm._down(q ** (4 * l), q, m)
                         * np.exp(-1j * (l - m) * th)
                         * np.array([q_shifted(-zi * q ** (1 + 2 * sg), Q, k) for zi in z])
                         * aw_jacobi(m, np.cos(th), 0, k, q ** sg, q ** sg, Q))
    if round(2 * l) % 2 == 0:
        L = round(l)
        den = gm._down(q ** (2 * l) if printed else q ** (4 * l), q, L)
        tot = tot + abs(gm.c_const(l, 0, sigma, q)) ** 2 * q ** (-l) / den * aw_jacobi(L, np.cos(th), 0, 0, q ** sigma, q ** sigma, Q)
    return tot


def check_characters(cfg, acc):
    q = cfg.q
    al, de = AqElement.generator("alpha", q), AqElement.generator("delta", q)
    x = 0.5 * (al + de)
    for l in _halves(cfg.cap(2)):
        chi = AqElement({}, q)
        for n in spin_range(l):
            chi = chi + gm.t_elt(l, n, n, q)
        U = _cheb_U_aq(round(2 * l), x)
        acc.elements("chi_l = U_2l((alpha+delta)/2)", chi, U, 1e-10, where=f"l={l}")
        D = hopf.comultiply(chi)
        acc.elements("cocentral", D, D.flip(), 1e-10, where=f"l={l}")
        alt = AqElement({}, q)
        for n in spin_range(l):
            alt = alt + gm.a_elt(l, n, n, cfg.sigma, cfg.sigma, q)
        acc.elements("chi_l = sum a_nn(sigma,sigma)", alt, chi, 1e-10, where=f"l={l}")
    # semicircle law for the Haar functional on cocentral elements
    pw = AqElement.scalar(1.0, q)
    for k in range(7):
        if k:
            pw = pw * x
        want = math.comb(k, k // 2) / (k // 2 + 1) / 4 ** (k // 2) if k % 2 == 0 else 0.0
        acc.values("semicircle Haar", hopf.haar(pw), want, 1e-10, mode="abs", where=f"k={k}")
    # character expansion at two values of σ
    if not math.isfinite(cfg.sigma):
        acc.note("character expansion skipped: needs finite sigma")
        return
    th = np.array(cfg.theta_grid)
    s2 = -1.3 if abs(cfg.sigma + 1.3) > 1e-9 else 0.7
    printed_worst = 0.0
    for l in _halves(cfg.cap(3)):
        U = chebyshev_U(round(2 * l), (math.sqrt(q) * np.exp(0.5j * th) + np.exp(-0.5j * th) / math.sqrt(q)) / 2)
        e1 = _character_expansion(l, cfg.sigma, th, q)
        e2 = _character_expansion(l, s2, th, q)
        acc.values("character expansion", e1, U, 1e-9, where=f"l={l} sigma={cfg.sigma}")
        acc.values("character expansion", e2, U, 1e-9, where=f"l={l} sigma={s2}")
        acc.values("character expansion sigma-independence", e1, e2, 1e-9, where=f"l={l}")
        pr = _character_expansion(l, cfg.sigma, th, q, printed=True)
        printed_worst = max(printed_worst, float(np.abs(pr - U).max() / np.abs(U).max()))
    if printed_worst > 1e-9:
        acc.note(f"printed last term 1/(q^2l;q^-2)_l disagrees (rel err {printed_worst:.2e}); "
                 "checked with 1/(q^4l;q^-2)_l, the m=l value of the sums")


def _hermite(n, x, Q):
    return cont_q_hermite(n, x, Q) if n >= 0 else np.zeros_like(x)


def check_ul_hermite_expansion(cfg, acc):
    q = cfg.q
    Q = q * q
    x = np.cos(np.array(cfg.theta_grid))
    for l in _halves(cfg.cap(2.5)):
        for p in range(7):
            tot = np.zeros_like(x, dtype=complex)
            for m in range(math.ceil(l - 1) + 1):
                k = round(2 * l - 2 * m)
                b = q ** (4 * l - 4 * m)
                tot = tot + little_q_jacobi(m, Q ** p, 1, b, Q) * _hermite(p + k, x, Q)
                tot = tot + gm._down(Q ** p, q, k) * little_q_jacobi(m, Q ** (p - k), 1, b, Q) * _hermite(p - k, x, Q)
            if round(2 * l) % 2 == 0:
                tot = tot + little_q_jacobi(round(l), Q ** p, 1, 1, Q) * _hermite(p, x, Q)
            acc.values("Chebyshev times Hermite", chebyshev_U(round(2 * l), x) * _hermite(p, x, Q), tot, 1e-9,
                       mode="scaled", where=f"l={l} p={p}")


def _pair_inf(z, q):
    # (z, 1/z; q)_∞ = |(z; q)_∞|² for |z| = 1
    out = np.ones_like(z, dtype=complex)
    k = 0
    while q ** k > 1e-18:
        out *= (1 - z * q ** k) * (1 - q ** k / z)
        k += 1
    return out.real


def check_integral_rep(cfg, acc):
    q = cfg.q
    for l in _ints(cfg.cap(4)):
        for p in range(7):
            def g(th, l=l, p=p):
                return (chebyshev_U(2 * l, np.cos(th)) * cont_q_hermite(p, np.cos(th), q) ** 2
                        * _pair_inf(np.exp(2j * th), q))
            val = q_shifted(q ** (p + 1), q) / (2 * math.pi) * integrate_theta(g, rtol=1e-12)
            acc.values("little q-Legendre integral", val, little_q_jacobi(l, q ** p, 1, 1, q), 1e-6, mode="abs",
                       where=f"l={l} p={p}")


# --------------------------------------------------------------------------
# remaining structure checks


def check_recurrence_consistency(cfg, acc):
    _need_finite(cfg, "sigma", "tau")
    q, s, t = cfg.q, cfg.sigma, cfg.tau
    x = np.cos(np.array(cfg.theta_grid))
    r = gm.rho(t, s, q)
    top = cfg.cap(3)
    for (i, j) in ((0.0, 0.0), (0.5, -0.5), (1.0, 0.0)):
        case = gm.applicable_case(i, j)
        m = gm.case_data(case, i, j, 0, 0)[0]
        _, dargs, *_ = gm.case_data(case, i, j, t, s)
        params = gm.aw_params_for(case, i, j, t, s, q)
        l = m
        while l + 1 <= top + 1e-9:
            basis = [gm.b_elt(l + 1, i, j, t, s, q), gm.b_elt(l, i, j, t, s, q)]
            if l - 1 >= m - 1e-9:
                basis.append(gm.b_elt(l - 1, i, j, t, s, q))
            target = gm.b_elt(l, i, j, t, s, q) * r
            keys = sorted(set().union(target.terms, *(e.terms for e in basis)))
            M = np.array([[e.coeff(*k) for e in basis] for k in keys])
            rhs = np.array([target.coeff(*k) for k in keys])
            coef, *_ = np.linalg.lstsq(M, rhs, rcond=None)
            fit = AqElement({}, q)
            for c, e in zip(coef, basis):
                fit = fit + c * e
            acc.elements("three-term relation in A_q", target, fit, 1e-9, where=f"i={i} j={j} l={l}")
            dl = gm.d_const(l, *dargs, q)
            n = round(l - m)
            lhs = x * askey_wilson(n, x, *params, q * q)
            rhs = coef[0] * gm.d_const(l + 1, *dargs, q) / dl * askey_wilson(n + 1, x, *params, q * q)
            rhs = rhs + coef[1] * askey_wilson(n, x, *params, q * q)
            if len(coef) > 2:
                rhs = rhs + coef[2] * gm.d_const(l - 1, *dargs, q) / dl * askey_wilson(n - 1, x, *params, q * q)
            acc.values("recurrence of the expansion polynomials", lhs, rhs, 1e-9, mode="scaled",
                       where=f"i={i} j={j} n={n}")
            l += 1


def check_schur_orthogonality(cfg, acc):
    q = cfg.q
    spins = _halves(cfg.cap(1.5))
    elts = {(l, n, m): gm.t_elt(l, n, m, q) for l in spins for n in spin_range(l) for m in spin_range(l)}
    stars = {k: hopf.star(v) for k, v in elts.items()}
    for (l, i, j), xs in stars.items():
        for (k, n, m), y in elts.items():
            got = hopf.haar(xs * y)
            want = q ** (2 * (l - i)) * (1 - q * q) / (1 - q ** (4 * l + 2)) if (l, i, j) == (k, n, m) else 0.0
            acc.values("h((t^l_ij)* t^k_nm)", got, want, 1e-10, mode="abs", where=f"({l},{i},{j}) ({k},{n},{m})")


def check_spherical_haar(cfg, acc):
    _need_finite(cfg, "sigma", "tau")
    q = cfg.q
    sets = [(cfg.tau, cfg.sigma)]
    alt = (cfg.tau, -1.3)
    if alt != sets[0]:
        sets.append(alt)
    for t, s in sets:
        meas = _rho_haar_measure(t, s, q)
        r = gm.rho(t, s, q)
        pw = AqElement.scalar(1.0, q)
        for n in range(7):
            if n:
                pw = pw * r
            mom = integrate(meas, lambda y, n=n: y ** n, rtol=1e-11)
            acc.values("h(rho^n) = AW moment", hopf.haar(pw), mom, 1e-6, mode="abs",
                       where=f"tau={t} sigma={s} n={n} masses={len(meas.masses)}")


CATALOG: dict[str, Callable] = {
    "addition_formula": check_addition_formula,
    "fourier_series": check_fourier_series,
    "coaction": check_coaction,
    "linearisation": check_linearisation,
    "prop91_closed_form": check_prop91_closed_form,
    "prop92_bilinear": check_prop92_bilinear,
    "prop94_orthogonality": check_prop94_orthogonality,
    "tridiagonal": check_tridiagonal,
    "monic_orthogonal": check_monic_orthogonal,
    "lemma103_weights": check_lemma103_weights,
    "qhahn_connection": check_qhahn_connection,
    "characters": check_characters,
    "ul_hermite_expansion": check_ul_hermite_expansion,
    "integral_rep": check_integral_rep,
    "recurrence_consistency": check_recurrence_consistency,
    "schur_orthogonality": check_schur_orthogonality,
    "spherical_haar": check_spherical_haar,
}


def _fmt(x) -> str:
    return "inf" if x == math.inf else f"{x:.3e}"


def run_check(check_id: str, cfg: CheckConfig | None = None) -> CheckResult:
    """Run one catalog entry."""
    cfg = cfg or CheckConfig()
    if check_id not in CATALOG:
        raise CatalogError(f"unknown check {check_id!r}; known: {', '.join(CATALOG)}")
    acc = _Parts(cfg.tolerances.get(check_id))
    t0 = time.perf_counter()
    skipped = None
    try:
        CATALOG[check_id](cfg, acc)
    except _Skip as exc:
        skipped = str(exc)
    ms = (time.perf_counter() - t0) * 1000
    if skipped:
        return CheckResult(check_id, cfg.params(), 0.0, 0.0, True, ms, f"skipped: {skipped}")
    ok = all(p[1] <= p[2] for p in acc.parts)
    notes = []
    for name, err, tol, _, _, where in acc.parts:
        line = f"{name}: {_fmt(err)} (tol {tol:.0e})"
        if err > tol:
            line += f" FAIL at {where}"
        notes.append(line)
    notes.extend(acc.extra)
    max_abs = max((p[3] for p in acc.parts), default=0.0)
    max_rel = max((p[4] for p in acc.parts), default=0.0)
    return CheckResult(check_id, cfg.params(), float(max_abs), float(max_rel), ok, ms, "; ".join(notes))


def run_suite(cfg: CheckConfig | None = None, ids=None) -> list:
    """Run the given ids (default: the whole catalog) in catalog order."""
    cfg = cfg or CheckConfig()
    ids = list(CATALOG) if ids is None else list(ids)
    for i in ids:
        if i not in CATALOG:
            raise CatalogError(f"unknown check {i!r}")
    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as ex:
            return list(ex.map(lambda i: run_check(i, cfg), ids))
    return [run_check(i, cfg) for i in ids]
