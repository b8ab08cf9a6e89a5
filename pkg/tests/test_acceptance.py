"""Acceptance criteria 1-12 at their stated tolerances and time limits.

Each test records a one-line verdict (printed in the terminal summary and on
stdout) before asserting, so failing criteria still report their numbers.
"""
import itertools
import json
import re
import subprocess
import sys
import time

import jsonschema
import numpy as np
import pytest

from qsu2 import genmatelt as gm
from qsu2 import hopf
from qsu2.hopf import AqElement, TensorElement, comultiply, counit, counit_mono, star
from qsu2.identities import REPORT_SCHEMA, CheckConfig, run_check
from qsu2.identities.catalog import _rho_haar_measure
from qsu2.uqsl2 import idx, pairing, rep_word, spin_range, x_sigma_a_matrix

Q = 0.5
TAU, SIGMA = -0.4, 0.3


def record(log, k, ok, detail):
    log[k] = (bool(ok), detail)
    print(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")


_PART = re.compile(r"(?:^|; )([^;:]+): ([0-9.e+-]+|inf) \(tol ([0-9.e+-]+)\)")


def parts(r) -> dict:
    """``{part name: (err, tol)}`` parsed from a check's notes."""
    return {m.group(1): (float(m.group(2)), float(m.group(3))) for m in _PART.finditer(r.notes)}


def check_parts(results, want: dict):
    """Every named part exists, was checked at a tolerance no looser than the
    criterion asks for, and is within it.  Returns (ok, failures, worst)."""
    found = {}
    for r in results:
        found.update(parts(r))
    bad, worst = [], {}
    for name, tol in want.items():
        if name not in found:
            bad.append(f"{name}: missing")
            continue
        err, used = found[name]
        worst[name] = err
        if used > tol or err > tol:
            bad.append(f"{name}: {err:.2e} > {tol:.0e}")
    return not bad, bad, worst


def run_ids(ids, cfg=None):
    cfg = cfg or CheckConfig()
    return [run_check(i, cfg) for i in ids]


def _triple(t: TensorElement, leg: str) -> dict:
    out: dict = {}
    for (m1, m2), v in t.terms.items():
        split = comultiply(AqElement({m1 if leg == "left" else m2: 1.0}, t.q))
        for (a, b), w in split.terms.items():
            key = (a, b, m2) if leg == "left" else (m1, a, b)
            out[key] = out.get(key, 0) + v * w
    return out


def _ddist(x: dict, y: dict) -> float:
    return max((abs(x.get(k, 0) - y.get(k, 0)) for k in set(x) | set(y)), default=0.0)


# --------------------------------------------------------------------------


def test_criterion_01_hopf_axioms(acceptance_log):
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    elts = [AqElement({m: 1.0}, Q) for m in hopf.monomials_up_to(4)]
    elts += [hopf.random_element(rng, Q, degree=4) for _ in range(100)]
    S = lambda m: hopf.antipode_mono(m, Q)  # noqa: E731
    st = lambda m: star(AqElement({m: 1.0}, Q))  # noqa: E731
    worst = 0.0
    for i, x in enumerate(elts):
        dx = comultiply(x)
        sc = max(1.0, dx.max_abs(), x.max_abs())
        eps1 = AqElement.scalar(counit(x), Q)
        errs = [
            _ddist(_triple(dx, "left"), _triple(dx, "right")),
            dx.contract("left", counit_mono).dist(x),
            dx.contract("right", counit_mono).dist(x),
            dx.multiply_out(S).dist(eps1),
            dx.map(None, S).multiply_out().dist(eps1),
            TensorElement({k: np.conj(v) for k, v in dx.terms.items()}, Q).map(st, st).dist(comultiply(star(x))),
            star(star(x)).dist(x),
            hopf.antipode(star(hopf.antipode(star(x)))).dist(x),
            dx.contract("left", lambda m: hopf.haar_mono(m, Q)).dist(AqElement.scalar(hopf.haar(x), Q)),
            dx.contract("right", lambda m: hopf.haar_mono(m, Q)).dist(AqElement.scalar(hopf.haar(x), Q)),
        ]
        y = elts[(i * 7 + 3) % len(elts)]
        xy = x * y
        sc2 = max(sc, xy.max_abs(), comultiply(xy).max_abs())
        errs.append(comultiply(xy).dist(comultiply(x) * comultiply(y)) * sc / sc2)
        errs.append(hopf.antipode(xy).dist(hopf.antipode(y) * hopf.antipode(x)) * sc / sc2)
        errs.append(star(xy).dist(star(y) * star(x)) * sc / sc2)
        worst = max(worst, max(errs) / sc)
    dt = time.perf_counter() - t0
    ok = worst <= 1e-11 and dt < 10
    record(acceptance_log, 1, ok, f"Hopf axioms on {len(elts)} elements: max scaled err {worst:.2e} (tol 1e-11), "
                                  f"{dt:.1f} s (limit 10 s)")
    assert ok


def test_criterion_02_corepresentation_and_pairing(acceptance_log):
    t0 = time.perf_counter()
    words = [""] + ["".join(w) for n in range(1, 5) for w in itertools.product("ABCD", repeat=n)]
    worst_corep = worst_pair = 0.0
    for tl in range(4):
        l = tl / 2
        S_ = spin_range(l)
        T = {(n, m): gm.t_elt(l, n, m, Q) for n in S_ for m in S_}
        mats = {w: rep_word(l, w, Q) for w in words}
        for (n, m), t in T.items():
            rhs = TensorElement({}, Q)
            for k in S_:
                rhs = rhs + TensorElement.pure(T[(n, k)], T[(k, m)])
            dt_ = comultiply(t)
            worst_corep = max(worst_corep, dt_.dist(rhs) / max(1.0, dt_.max_abs()),
                              abs(counit(t) - (n == m)),
                              hopf.antipode(t).dist(star(T[(m, n)])))
            for w in words:
                want = mats[w][idx(l, n), idx(l, m)]
                worst_pair = max(worst_pair, abs(pairing(w, t) - want) / max(1.0, abs(want)))
    dt = time.perf_counter() - t0
    worst = max(worst_corep, worst_pair)
    ok = worst <= 1e-11 and dt < 10
    record(acceptance_log, 2, ok, f"corep laws {worst_corep:.2e}, pairing over {len(words)} words "
                                  f"{worst_pair:.2e} (tol 1e-11), {dt:.1f} s (limit 10 s)")
    assert ok


def test_criterion_03_schur_orthogonality(acceptance_log):
    (r,) = run_ids(["schur_orthogonality"])
    ok, bad, worst = check_parts([r], {"h((t^l_ij)* t^k_nm)": 1e-10})
    record(acceptance_log, 3, ok, f"Schur orthogonality l,k <= 3/2: {worst} {bad or ''}")
    assert ok


def test_criterion_04_eigenvectors(acceptance_log):
    worst = 0.0
    for s in (-1.3, 0.0, 0.7):
        for tl in range(7):
            l = tl / 2
            V = gm.eigen_basis(l, s, Q)
            M = x_sigma_a_matrix(l, s, Q)
            lam = np.array([gm.lambda_j(j, s, Q) for j in spin_range(l)])
            worst = max(worst, np.abs(V.conj().T @ V - np.eye(tl + 1)).max(),
                        np.abs(M @ V - V * lam).max() / max(1.0, np.abs(lam).max()))
    ok = worst <= 1e-10
    record(acceptance_log, 4, ok, f"orthonormal eigenvectors l <= 3: residual {worst:.2e} (tol 1e-10)")
    assert ok


def test_criterion_05_spherical_haar(acceptance_log):
    t0 = time.perf_counter()
    (r,) = run_ids(["spherical_haar"])
    dt = time.perf_counter() - t0
    kinds = {len(_rho_haar_measure(TAU, s, Q).masses) > 0 for s in (SIGMA, -1.3)}
    ok, bad, worst = check_parts([r], {"h(rho^n) = AW moment": 1e-6})
    ok = ok and kinds == {True, False} and dt < 20
    record(acceptance_log, 5, ok, f"h(rho^n) n <= 6, continuous and mass-point sets: {worst} {bad or ''} "
                                  f"{dt:.1f} s (limit 20 s)")
    assert ok


def test_criterion_06_askey_wilson_expansion(acceptance_log):
    t0 = time.perf_counter()
    worst, count = 0.0, 0
    labels = [k / 2 for k in range(-3, 4)]
    for i in labels:
        for j in labels:
            if (round(2 * i) - round(2 * j)) % 2:
                continue
            lo = max(abs(i), abs(j))
            for tl in range(round(2 * lo), 6, 2):
                l = tl / 2
                b = gm.b_elt(l, i, j, TAU, SIGMA, Q)
                a = gm.a_elt(l, i, j, TAU, SIGMA, Q)
                for case in gm.applicable_cases(i, j):
                    _, r1 = gm.b_expansion(l, i, j, TAU, SIGMA, Q, case=case)
                    _, r2 = gm.a_expansion(l, i, j, TAU, SIGMA, Q, case=case)
                    worst = max(worst, r1 / max(1.0, b.max_abs()), r2 / max(1.0, a.max_abs()))
                    count += 1
    dt = time.perf_counter() - t0
    ok = worst <= 1e-9 and dt < 60
    record(acceptance_log, 6, ok, f"{count} (l,i,j,case) expansions: residual {worst:.2e} (tol 1e-9), "
                                  f"{dt:.1f} s (limit 60 s)")
    assert ok


def test_criterion_07_one_dim_three_way(acceptance_log):
    (r,) = run_ids(["prop91_closed_form"])
    ok, bad, worst = check_parts([r], {"single 4phi3 form": 1e-10, "product form": 1e-10,
                                       "generating function": 1e-10})
    record(acceptance_log, 7, ok, f"tau_lambda three-way agreement on the lambda grid: {worst} {bad or ''}")
    assert ok


def test_criterion_08_addition_fourier_coaction_linearisation(acceptance_log):
    rs = run_ids(["addition_formula", "fourier_series", "coaction", "linearisation"])
    ok, bad, worst = check_parts(rs, {"addition formula": 1e-8, "Fourier series": 1e-9, "coaction": 1e-9,
                                      "non-negative": 1e-10, "product reconstruction": 1e-8,
                                      "CG cross-check": 1e-6})
    ok = ok and all(r.passed for r in rs)
    record(acceptance_log, 8, ok, f"addition, Fourier, coaction, linearisation: {worst} {bad or ''}")
    assert ok


def test_criterion_09_bilinear_sum_and_discrete_orthogonality(acceptance_log):
    rs = run_ids(["prop92_bilinear", "prop94_orthogonality"])
    ok, bad, worst = check_parts(rs, {"bilinear sum": 1e-10, "i=0 gives the generating function": 1e-10,
                                      "sigma=tau, t=1 off-diagonal": 1e-11, "sigma=tau, t=1 collapse": 1e-10,
                                      "discrete orthogonality": 1e-9, "discrete orthogonality, dual": 1e-9})
    ok = ok and all(r.passed for r in rs)
    record(acceptance_log, 9, ok, f"bilinear sum and discrete orthogonality N <= 6: {worst} {bad or ''}")
    assert ok


def test_criterion_10_tridiagonal_and_monic_polynomials(acceptance_log):
    rs = run_ids(["tridiagonal", "monic_orthogonal", "lemma103_weights", "qhahn_connection"])
    ok, bad, worst = check_parts(rs, {
        "tridiagonal": 1e-12, "real": 1e-12, "symmetric": 1e-12, "positive diagonal": 1e-12,
        "A_{-i,-j}(-sigma) = A_{i,j}(sigma)": 1e-12,
        "monic": 1e-10, "orthogonality (normalised)": 1e-10, "moment 4phi3": 1e-10,
        "two-sided form": 1e-10, "stated norm A_k(s)^2 + A_k(-s)^2": 1e-10,
        "even l-n closed form": 1e-12, "odd l-n vanish": 1e-13,
        "q-Hahn shift operator": 1e-9, "tau=0 specialisation": 1e-9})
    ok = ok and all(r.passed for r in rs)
    record(acceptance_log, 10, ok, f"tridiagonal, monic orthogonal, weights, q-Hahn: {bad or worst}")
    assert ok


def test_criterion_11_characters(acceptance_log):
    rs = run_ids(["characters", "ul_hermite_expansion", "integral_rep"])
    ok, bad, worst = check_parts(rs, {"chi_l = U_2l((alpha+delta)/2)": 1e-10, "character expansion sigma-independence": 1e-9,
                                      "Chebyshev times Hermite": 1e-9, "little q-Legendre integral": 1e-6, "semicircle Haar": 1e-10})
    ok = ok and all(r.passed for r in rs)
    record(acceptance_log, 11, ok, f"characters, Chebyshev-Hermite, little q-Legendre, semicircle: {worst} {bad or ''}")
    assert ok


def test_criterion_12_full_cli_run(acceptance_log, tmp_path):
    runs = []
    for k in range(2):
        path = tmp_path / f"report{k}.json"
        t0 = time.perf_counter()
        proc = subprocess.run([sys.executable, "-m", "qsu2", "verify", "--suite", "all", "--report", str(path)],
                              capture_output=True, text=True)
        runs.append((proc.returncode, time.perf_counter() - t0, path.read_bytes()))
    rep = json.loads(runs[0][2])
    schema_ok = True
    try:
        jsonschema.validate(rep, REPORT_SCHEMA)
    except jsonschema.ValidationError:
        schema_ok = False
    stable = runs[0][2] == runs[1][2]
    exit_ok = all(code == 0 for code, _, _ in runs)
    fast = all(dt < 180 for _, dt, _ in runs)
    failed = [r["id"] for r in rep["results"] if not r["pass"]]
    ok = exit_ok and fast and schema_ok and stable
    record(acceptance_log, 12, ok, f"exit codes {[c for c, _, _ in runs]} (want 0), "
                                   f"{max(dt for _, dt, _ in runs):.1f} s (limit 180 s), schema valid {schema_ok}, "
                                   f"byte-stable {stable}, failing ids {failed}")
    assert schema_ok and stable and fast
    assert exit_ok, f"failing checks: {failed}"
