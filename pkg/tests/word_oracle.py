"""Naive letter-by-letter rewriting of words in α, β, γ, δ; an oracle for
the closed-form normal-ordering kernel."""
from functools import lru_cache

ORDER_OK = {("a", "b"), ("a", "c"), ("d", "b"), ("d", "c"), ("b", "c"),
            ("a", "a"), ("b", "b"), ("c", "c"), ("d", "d")}


def normal_form(word: str, q: float) -> dict:
    """``{(k, b, c): coeff}`` for the word read left to right."""

    @lru_cache(maxsize=None)
    def rec(w):
        for i in range(len(w) - 1):
            x, y = w[i], w[i + 1]
            if (x, y) in ORDER_OK:
                continue
            pre, post = w[:i], w[i + 2:]
            if (x, y) == ("b", "a"):
                return scale(rec(pre + "ab" + post), 1 / q)
            if (x, y) == ("c", "a"):
                return scale(rec(pre + "ac" + post), 1 / q)
            if (x, y) == ("b", "d"):
                return scale(rec(pre + "db" + post), q)
            if (x, y) == ("c", "d"):
                return scale(rec(pre + "dc" + post), q)
            if (x, y) == ("c", "b"):
                return rec(pre + "bc" + post)
            if (x, y) == ("a", "d"):
                return add(rec(pre + post), scale(rec(pre + "bc" + post), q))
            if (x, y) == ("d", "a"):
                return add(rec(pre + post), scale(rec(pre + "bc" + post), 1 / q))
            raise AssertionError((x, y))
        k = w.count("a") - w.count("d")
        return {(k, w.count("b"), w.count("c")): 1.0}

    return dict(rec(word))


def scale(d, s):
    return {m: v * s for m, v in d.items()}


def add(x, y):
    out = dict(x)
    for m, v in y.items():
        out[m] = out.get(m, 0) + v
    return out


def mono_word(m):
    k, b, c = m
    return ("a" * k if k >= 0 else "d" * -k) + "b" * b + "c" * c
