"""Pure-Python normal-ordering kernel for A_q(SU(2)).

A monomial is a triple ``(k, b, c)`` standing for ``alpha^k beta^b gamma^c``
when ``k >= 0`` and ``delta^{-k} beta^b gamma^c`` when ``k < 0``.  The compiled
module ``_kernels`` exposes the same functions.
"""
from __future__ import annotations


def _qbin_row(n, Q):
    # [n j]_Q for j = 0..n via the q-Pascal rule
    row = [1.0]
    for m in range(1, n + 1):
        new = [1.0] * (m + 1)
        for j in range(1, m):
            new[j] = row[j - 1] + Q ** j * row[j]
        row = new
    return row


def mono_mul(m1, m2, q):
    """Product of two monomials as a list of ``(monomial, coefficient)``."""
    k1, b1, c1 = m1
    k2, b2, c2 = m2
    pre = q ** (-k2 * (b1 + c1))
    b = b1 + b2
    c = c1 + c2
    if k1 >= 0 and k2 >= 0 or k1 <= 0 and k2 <= 0:
        return [((k1 + k2, b, c), pre)]
    Q = q * q
    out = []
    if k1 > 0:
        a, d = k1, -k2
        if a >= d:
            row = _qbin_row(d, Q)
            for j in range(d + 1):
                out.append(((a - d, b + j, c + j), pre * row[j] * q ** (j * j)))
        else:
            row = _qbin_row(a, Q)
            for j in range(a + 1):
                out.append(((a - d, b + j, c + j), pre * row[j] * q ** (j * j + 2 * j * (d - a))))
    else:
        d, a = -k1, k2
        if d >= a:
            row = _qbin_row(a, Q)
            for j in range(a + 1):
                out.append(((a - d, b + j, c + j), pre * row[j] * q ** (j * j - 2 * j * a)))
        else:
            row = _qbin_row(d, Q)
            for j in range(d + 1):
                out.append(((a - d, b + j, c + j),
                            pre * row[j] * q ** (j * j - 2 * j * d - 2 * j * (a - d))))
    return out


def mul_terms(x, y, q):
    """Product of two term dictionaries ``{monomial: coefficient}``."""
    out = {}
    get = out.get
    for m1, u in x.items():
        for m2, v in y.items():
            uv = u * v
            for m, w in mono_mul(m1, m2, q):
                out[m] = get(m, 0.0) + uv * w
    return out


def mul_tensor_terms(x, y, q):
    """Product of two tensor dictionaries ``{(mono, mono): coefficient}``."""
    out = {}
    get = out.get
    cache = {}
    for (l1, r1), u in x.items():
        for (l2, r2), v in y.items():
            key_l = (l1, l2)
            left = cache.get(key_l)
            if left is None:
                left = cache[key_l] = mono_mul(l1, l2, q)
            key_r = (r1, r2)
            right = cache.get(key_r)
            if right is None:
                right = cache[key_r] = mono_mul(r1, r2, q)
            uv = u * v
            for ml, wl in left:
                for mr, wr in right:
                    key = (ml, mr)
                    out[key] = get(key, 0.0) + uv * wl * wr
    return out
