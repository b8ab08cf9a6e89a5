import itertools
import math

import mpmath
import numpy as np
import pytest

from qsu2.qcore import basic_hypergeometric, q_shifted, q_shifted_multi
from qsu2.qpolys import (AWParams, DegreeError, Family, ParameterError, askey_wilson, askey_wilson_phi,
                         aw_h0, aw_hn_ratio, aw_jacobi, aw_measure, aw_weight, chebyshev_U,
                         cont_q_hermite, cont_q_ultraspherical, discrete_measure, dual_q_krawtchouk,
                         dual_q_krawtchouk_grid, eval_poly, integrate, integrate_theta, little_q_jacobi,
                         norm_h, numeric_norm, q_hahn, q_krawtchouk, qkrawtchouk_h, r_fn, r_fn_h,
                         r_fn_weight)

Q = 0.5
AW = dict(a=0.3, b=0.2, c=0.1, d=-0.2, q=Q)

FAMILY_SAMPLES = {
    "askey_wilson": AW,
    "aw_jacobi": dict(alpha=0.5, beta=1.0, s=0.8, t=0.6, q=Q),
    "cont_q_ultraspherical": dict(beta=0.3, q=Q),
    "cont_q_hermite": dict(q=Q),
    "little_q_jacobi": dict(a=0.4, b=0.3, q=Q),
    "q_hahn": dict(a=0.4, b=0.6, N=5, q=Q),
    "q_krawtchouk": dict(sigma=0.4, N=5, q=Q),
    "dual_q_krawtchouk": dict(sigma=0.4, N=5, q=Q),
    "chebyshev_U": dict(),
}


@pytest.mark.parametrize("family", list(FAMILY_SAMPLES))
def test_degree_zero_is_one(family):
    assert eval_poly(family, 0, 0.37, **FAMILY_SAMPLES[family]) == pytest.approx(1.0)


def test_parameter_records_are_checked():
    with pytest.raises(ParameterError):
        eval_poly("q_hahn", 1, 0.2, a=0.1, b=0.2, q=Q)
    with pytest.raises(ParameterError):
        eval_poly("cont_q_hermite", 1, 0.2, q=Q, beta=0.3)
    with pytest.raises(DegreeError):
        eval_poly("q_krawtchouk", 6, 0.2, sigma=0.1, N=5, q=Q)
    with pytest.raises(ValueError):
        Family("jacobi")


def test_hermite_first_degrees():
    x = np.linspace(-1, 1, 7)
    assert np.allclose(cont_q_hermite(1, x, Q), 2 * x)
    assert np.allclose(cont_q_hermite(2, x, Q), 4 * x * x - (1 - Q))


def test_askey_wilson_degree_one_two_term_sum():
    a, b, c, d, x = 0.3, 0.2, 0.1, -0.2, 0.4
    z = x + 1j * math.sqrt(1 - x * x)
    abcd = a * b * c * d
    term1 = (1 - 1 / Q) * (1 - abcd) * (1 - a * z) * (1 - a / z) * Q / ((1 - a * b) * (1 - a * c) * (1 - a * d) * (1 - Q))
    want = (1 - a * b) * (1 - a * c) * (1 - a * d) / a * (1 + term1)
    assert abs(askey_wilson(1, x, a, b, c, d, Q) - want) < 1e-14


def test_askey_wilson_recurrence_against_high_precision_series():
    a, b, c, d = 0.3, 0.2, 0.1, -0.2
    for n in range(7):
        for x in (-0.9, -0.2, 0.4, 0.95):
            with mpmath.workdps(40):
                mq = mpmath.mpf(Q)
                z = mpmath.mpc(x, mpmath.sqrt(1 - mpmath.mpf(x) ** 2))
                pa, pb, pc, pd = (mpmath.mpf(v) for v in (a, b, c, d))
                up = [mq ** -n, pa * pb * pc * pd * mq ** (n - 1), pa * z, pa / z]
                lo = [pa * pb, pa * pc, pa * pd, mq]
                phi = sum(mpmath.fprod(mpmath.qp(u, mq, k) for u in up)
                          / mpmath.fprod(mpmath.qp(v, mq, k) for v in lo) * mq ** k for k in range(n + 1))
                want = complex(pa ** -n * mpmath.qp(pa * pb, mq, n) * mpmath.qp(pa * pc, mq, n)
                               * mpmath.qp(pa * pd, mq, n) * phi)
            got = askey_wilson(n, x, a, b, c, d, Q)
            assert abs(got - want) <= 1e-12 * max(1.0, abs(want)), (n, x)


def test_askey_wilson_symmetric_in_parameters():
    vals = (0.3, 0.2, 0.1, -0.2)
    x = np.array([-0.7, 0.1, 0.55])
    ref = askey_wilson(4, x, *vals, Q)
    for perm in itertools.permutations(vals):
        got = askey_wilson(4, x, *perm, Q)
        assert np.max(np.abs(got - ref) / np.maximum(np.abs(ref), 1e-300)) <= 1e-11
        # the series route singles out the first parameter and cancels more
        assert abs(askey_wilson_phi(4, 0.1, *perm, Q) - ref[1]) <= 1e-9 * abs(ref[1])


def test_chebyshev_sine_identity():
    th = np.linspace(0.05, 3.1, 40)
    for n in range(9):
        assert np.max(np.abs(chebyshev_U(n, np.cos(th)) * np.sin(th) - np.sin((n + 1) * th))) <= 1e-12
    assert chebyshev_U(2, 0.5) == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("alpha", [0.0, 1.0, 0.5])
def test_quadratic_relation_ultraspherical_vs_jacobi(alpha):
    th = np.linspace(0.0, math.pi, 20)
    x = np.cos(th)
    for n in range(7):
        lhs = cont_q_ultraspherical(n, x, Q ** (1 + 2 * alpha), Q * Q)
        fac = q_shifted(Q ** (1 + 2 * alpha), Q, n) / q_shifted_multi([Q ** (2 + 2 * alpha), Q * Q], Q * Q, n)
        rhs = fac * aw_jacobi(n, x, alpha, alpha, 1.0, 1.0, Q)
        assert np.max(np.abs(lhs - rhs)) <= 1e-10 * max(1.0, np.max(np.abs(lhs)))


# ---------------------------------------------------------------- measures


def test_absolutely_continuous_measure_has_unit_mass():
    m = aw_measure(AWParams(0.3, 0.2, 0.1, -0.2, Q))
    assert m.masses == ()
    assert m.total_mass == pytest.approx(1.0, abs=1e-10)


def test_one_mass_point_for_a_1_2():
    a = 1.2
    m = aw_measure(AWParams(a, 0.2, 0.1, -0.3, Q))
    assert len(m.masses) == 1
    assert m.masses[0][0] == pytest.approx((a + 1 / a) / 2)
    assert m.total_mass == pytest.approx(1.0, abs=1e-10)


def test_mass_points_match_counting_rule():
    a = 5.0
    m = aw_measure(AWParams(a, 0.1, 0.05, -0.1, Q))
    expected = sum(1 for k in range(20) if abs(a * Q ** k) > 1)
    assert len(m.masses) == expected == 3
    assert m.total_mass == pytest.approx(1.0, abs=1e-10)


def test_mass_by_numeric_residue():
    # the closed-form residue against a contour integral around z = a
    a, b, c, d = 1.4, 0.2, 0.1, -0.3
    m = aw_measure(AWParams(a, b, c, d, Q))
    r, center = 1e-3, a
    ts = np.linspace(0, 2 * np.pi, 400, endpoint=False)
    zs = center + r * np.exp(1j * ts)
    vals = []
    for z in zs:
        num = q_shifted(z * z, Q) * q_shifted(1 / (z * z), Q)
        den = 1.0
        for e in (a, b, c, d):
            den *= q_shifted(e * z, Q) * q_shifted(e / z, Q)
        vals.append(num / den / z)
    res = np.mean(np.array(vals) * (zs - center))
    # orientation: the mass is minus the residue, and the density carries a 1/(2 pi) (z, 1/z) doubling
    assert abs(abs(m.masses[0][1]) - abs(res.real) / aw_h0(a, b, c, d, Q)) <= 1e-6 * abs(m.masses[0][1])


def test_measure_domain_error():
    with pytest.raises(ParameterError):
        aw_measure(AWParams(1.5, 0.8, 0.1, 0.1, Q))
    with pytest.raises(ParameterError):
        aw_measure(AWParams(0.3 + 0.2j, 0.3 + 0.1j, 0.1, 0.1, Q))


@pytest.mark.parametrize("params", [(0.3, 0.2, 0.1, -0.2), (1.2, 0.2, 0.1, -0.3), (0.4 + 0.3j, 0.4 - 0.3j, 0.2, -0.5)])
def test_askey_wilson_orthogonality(params):
    m = aw_measure(AWParams(*params, Q))
    for n in range(7):
        pn = lambda x, n=n: askey_wilson(n, x, *params, Q)  # noqa: E731
        hn = aw_hn_ratio(n, *params, Q)
        assert integrate(m, lambda x: pn(x) * np.conj(pn(x))) == pytest.approx(hn, rel=1e-9)
        for k in range(n):
            pk = lambda x, k=k: askey_wilson(k, x, *params, Q)  # noqa: E731
            val = integrate(m, lambda x: pn(x) * np.conj(pk(x)))
            assert abs(val) <= 1e-9 * math.sqrt(hn * aw_hn_ratio(k, *params, Q))


def test_askey_wilson_h0_closed_form():
    a, b, c, d = 0.3, 0.2, 0.1, -0.2
    h0 = norm_h("askey_wilson", 0, **AW)
    num = integrate_theta(lambda th: aw_weight(th, a, b, c, d, Q), rtol=1e-12)
    assert num / (2 * math.pi) == pytest.approx(h0, rel=1e-10)


def test_hermite_orthogonality_and_norm():
    w = lambda th: (q_shifted(np.exp(2j * th), Q) * q_shifted(np.exp(-2j * th), Q)).real  # noqa: E731
    for n in range(7):
        for m in range(n + 1):
            val = integrate_theta(lambda th: cont_q_hermite(n, np.cos(th), Q) * cont_q_hermite(m, np.cos(th), Q) * w(th),
                                  rtol=1e-12).real
            if m == n:
                assert val == pytest.approx(norm_h("cont_q_hermite", n, q=Q), rel=1e-10)
            else:
                assert abs(val) <= 1e-9 * norm_h("cont_q_hermite", n, q=Q)


def test_hermite_norm_n2():
    assert norm_h("cont_q_hermite", 2, q=Q) == pytest.approx(
        2 * math.pi * (1 - Q) * (1 - Q * Q) / q_shifted(Q, Q).real, rel=1e-14)


@pytest.mark.parametrize("family", ["q_hahn", "q_krawtchouk", "dual_q_krawtchouk", "little_q_jacobi"])
def test_discrete_orthogonality(family):
    p = FAMILY_SAMPLES[family]
    xs, ws = discrete_measure(family, **p)
    top = p.get("N", 6)
    vals = [eval_poly(family, n, xs, **p) for n in range(top + 1)]
    norms = [float(np.sum(ws * np.abs(v) ** 2)) for v in vals]
    for n in range(top + 1):
        for m in range(n):
            assert abs(np.sum(ws * vals[n] * np.conj(vals[m]))) <= 1e-9 * math.sqrt(norms[n] * norms[m])


def test_q_krawtchouk_norm_is_reciprocal_h():
    p = FAMILY_SAMPLES["q_krawtchouk"]
    for n in range(p["N"] + 1):
        assert numeric_norm("q_krawtchouk", n, **p) == pytest.approx(1 / norm_h("q_krawtchouk", n, **p), rel=1e-10)


def test_q_krawtchouk_h0_direct_product():
    sigma, N = 0.4, 4
    val = (1 + Q ** (-N - sigma))
    assert qkrawtchouk_h(0, sigma, N, Q) == pytest.approx(val, rel=1e-14)


def test_dual_q_krawtchouk_duality_and_grid_form():
    sigma, N = 0.4, 5
    for n in range(N + 1):
        for x in range(N + 1):
            mu = Q ** (-x) - Q ** (x - N - sigma)
            a = dual_q_krawtchouk(n, mu, sigma, N, Q)
            b = dual_q_krawtchouk_grid(n, x, sigma, N, Q)
            # duality: R_n(mu(x)) = K_x(q^-n)
            c = q_krawtchouk(x, Q ** (-n), sigma, N, Q)
            assert abs(a - b) <= 1e-9 * max(1, abs(b))
            assert abs(c - b) <= 1e-9 * max(1, abs(b))


def test_little_q_jacobi_norm_is_numeric():
    p = FAMILY_SAMPLES["little_q_jacobi"]
    with pytest.raises(ParameterError):
        norm_h("little_q_jacobi", 1, **p)
    assert numeric_norm("little_q_jacobi", 0, **p) == pytest.approx(
        (q_shifted(p["a"] * p["b"] * Q * Q, Q) / q_shifted(p["a"] * Q, Q)).real, rel=1e-12)


def test_q_hahn_against_series():
    a, b, N = 0.4, 0.6, 5
    for n in range(N + 1):
        for x in (0.3, 2.0, Q ** -3):
            want = basic_hypergeometric([Q ** -n, a * b * Q ** (n + 1), x], [a * Q, Q ** -N], Q, Q, degree=n)
            assert abs(q_hahn(n, x, a, b, N, Q) - want) <= 1e-12 * max(1, abs(want))


def test_little_q_jacobi_against_series():
    a, b = 0.4, 0.3
    for n in range(6):
        want = basic_hypergeometric([Q ** -n, a * b * Q ** (n + 1)], [a * Q], Q, Q * 0.7, degree=n)
        assert abs(little_q_jacobi(n, 0.7, a, b, Q) - want) <= 1e-13 * max(1, abs(want))


# ---------------------------------------------------------------- r-function


def test_r_fn_degree_zero():
    sigma, tau, th, N = 0.3, -0.4, 0.7, 3
    e = complex(math.cos(th), math.sin(th))
    for p in range(N + 1):
        want = q_shifted(e * Q ** ((tau - sigma) / 2), Q, p) * q_shifted(-e * Q ** ((tau + sigma) / 2), Q, N - p)
        assert abs(r_fn(0, p, sigma, tau, th, N, Q) - want) < 1e-14


def test_r_fn_two_term_value():
    n, p, sigma, tau, th, N = 1, 1, 0.3, -0.4, 0.7, 3
    e = complex(math.cos(th), math.sin(th))
    h = (tau - sigma) / 2
    pref = q_shifted(e * Q ** (h - 1), Q, 1) * q_shifted(-e * Q ** ((tau + sigma) / 2 - 1), Q, 2)
    t1 = ((1 - Q ** -1) ** 2 * (1 + Q ** (tau - 1)) * (1 + Q ** (1 - N - sigma))
          / ((1 - Q ** -N) * (1 - Q ** (h - 1 + 1) / e) * (1 - Q ** (h - 1) * e)) * Q / (1 - Q))
    assert abs(r_fn(n, p, sigma, tau, th, N, Q) - pref * (1 + t1)) < 1e-13


def test_r_fn_reduces_to_dual_q_krawtchouk():
    # large tau: r_n / (value at n = 0) tends to R_n
    sigma, N, th = 0.3, 4, 0.9
    tau = 1e3
    for n in range(N + 1):
        for p in range(N + 1):
            got = r_fn(n, p, sigma, tau, th, N, Q) / r_fn(0, p, sigma, tau, th, N, Q)
            want = dual_q_krawtchouk_grid(n, p, sigma, N, Q)
            assert abs(got - want) <= 1e-8 * max(1, abs(want))


def test_r_fn_orthogonality():
    sigma, tau, th, N = 0.3, -0.4, 0.7, 4
    w = [r_fn_weight(p, sigma, N, Q) for p in range(N + 1)]
    for n in range(N + 1):
        for m in range(N + 1):
            s = sum(w[p] * r_fn(n, p, sigma, tau, th, N, Q) * np.conj(r_fn(m, p, sigma, tau, th, N, Q))
                    for p in range(N + 1))
            want = 1 / r_fn_h(n, sigma, tau, th, N, Q) if n == m else 0.0
            scale = math.sqrt(abs(1 / r_fn_h(n, sigma, tau, th, N, Q) / r_fn_h(m, sigma, tau, th, N, Q)))
            assert abs(s - want) <= 1e-9 * scale
