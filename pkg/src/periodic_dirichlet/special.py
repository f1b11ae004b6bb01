"""Exponential integral E1 and its entire companion Ein.

E1(x) = int_x^inf exp(-t)/t dt,   Ein(x) = int_0^x (1 - exp(-t))/t dt,
related by E1(x) = -gamma - log(x) + Ein(x) for x > 0.
"""
import numpy as np

EULER_GAMMA = 0.57721566490153286061

_SERIES_TERMS = 40
_CF_DEPTH = 120


def ein(x):
    """Ein(x) for x >= 0, by the power series below 4 and via E1 above."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = x <= 4.0
    if np.any(small):
        xs = x[small]
        term = xs.copy()
        total = term.copy()
        for n in range(2, _SERIES_TERMS + 1):
            # term_n = (-1)^(n+1) x^n / n!
            term = term * (-xs) / n
            total = total + term / n
        out[small] = total
    if np.any(~small):
        xl = x[~small]
        out[~small] = _e1_cf(xl) + EULER_GAMMA + np.log(xl)
    return out


def _e1_cf(x, depth=_CF_DEPTH):
    # E1(x) = exp(-x) / (x + 1 - 1/(x + 3 - 4/(x + 5 - ...))), evaluated
    # bottom-up at fixed depth; backward evaluation keeps rounding at ~1 ulp
    tail = np.zeros_like(x)
    for i in range(depth, 0, -1):
        tail = i * i / (x + 2 * i + 1 - tail)
    return np.exp(-x) / (x + 1 - tail)


def exp1(x):
    """E1(x) for x > 0: series for x <= 1, continued fraction beyond."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("exp1 requires strictly positive arguments")
    out = np.empty_like(x)
    small = x <= 1.0
    if np.any(small):
        xs = x[small]
        out[small] = -EULER_GAMMA - np.log(xs) + ein(xs)
    if np.any(~small):
        out[~small] = _e1_cf(x[~small])
    return out
