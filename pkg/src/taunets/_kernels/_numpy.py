"""Vectorized numpy implementations of the hot kernels.

Every function here has a loop twin in ``_numba.py`` with the same signature.
Inputs are float64 arrays that already broadcast against each other.
"""

import numpy as np

_HALF = 0.5


def slog_add(sa, la, sb, lb):
    with np.errstate(all="ignore"):
        swap = lb > la
        hs = np.where(swap, sb, sa)
        hi = np.where(swap, lb, la)
        ls = np.where(swap, sa, sb)
        lo = np.where(swap, la, lb)
        d = lo - hi
        same = hs == ls
        mag = np.where(same, np.log1p(np.exp(d)), np.log1p(-np.exp(d)))
        out_l = hi + mag
        out_s = hs.copy()
        cancel = (~same) & (d == 0.0)
        out_s = np.where(cancel, 0.0, out_s)
        out_l = np.where(cancel, -np.inf, out_l)
        both_inf = np.isposinf(hi) & np.isposinf(lo) & ~same
        out_l = np.where(both_inf, np.nan, out_l)
        out_l = np.where(np.isposinf(hi) & ~both_inf, np.inf, out_l)
        # zero operands pass the other one through untouched
        out_s = np.where(sa == 0.0, sb, np.where(sb == 0.0, sa, out_s))
        out_l = np.where(sa == 0.0, lb, np.where(sb == 0.0, la, out_l))
        nan = np.isnan(la) | np.isnan(lb)
        out_l = np.where(nan, np.nan, out_l)
    return out_s, out_l


def row_norms(X):
    """Euclidean norms of the rows of ``X`` without overflow for huge entries."""
    if X.shape[1] == 1:
        return np.abs(X[:, 0])
    return np.hypot.reduce(X, axis=1)


def _phi(t):
    with np.errstate(all="ignore"):
        return np.where(t > 0.0, np.exp(-1.0 / np.where(t > 0.0, t, 1.0)), 0.0)


def sigma(r):
    a = _phi(1.0 - r)
    b = _phi(r - _HALF)
    with np.errstate(all="ignore"):
        out = a / (a + b)
    out = np.where(r <= _HALF, 1.0, out)
    return np.where(r >= 1.0, 0.0, out)


def sigma_prime(r):
    inside = (r > _HALF) & (r < 1.0)
    rr = np.where(inside, r, 0.75)
    a = _phi(1.0 - rr)
    b = _phi(rr - _HALF)
    da = -a / (1.0 - rr) ** 2
    db = b / (rr - _HALF) ** 2
    return np.where(inside, (da * b - a * db) / (a + b) ** 2, 0.0)


def log_g(r, ln_eps):
    with np.errstate(divide="ignore"):
        lr = np.log(r)
    return lr * lr / ln_eps


def u_values(r, ln_eps):
    lg = log_g(np.where(r > 0.0, r, 1.0), ln_eps)
    g = np.exp(lg)
    s = sigma(r)
    out = (1.0 - s) * g + s
    out = np.where(r >= 1.0, g, out)
    return np.where(r <= _HALF, 1.0, out)


def log_u(r, ln_eps):
    lg = log_g(np.where(r > 0.0, r, 1.0), ln_eps)
    s = sigma(r)
    with np.errstate(divide="ignore", under="ignore"):
        band = np.log((1.0 - s) * np.exp(lg) + s)
    out = np.where(r >= 1.0, lg, band)
    return np.where(r <= _HALF, 0.0, out)


def grad_g(X, ln_eps):
    r = row_norms(X)
    lg = log_g(r, ln_eps)
    coef = 2.0 * np.exp(lg) * np.log(r) / (r * r * ln_eps)
    return coef[:, None] * X


def grad_u(X, ln_eps):
    r = row_norms(X)
    safe = np.where(r > _HALF, r, 1.0)
    lg = log_g(safe, ln_eps)
    g = np.exp(lg)
    s = sigma(safe)
    ds = sigma_prime(safe)
    radial = (1.0 - s) * 2.0 * g * np.log(safe) / (safe * ln_eps) + ds * (1.0 - g)
    radial = np.where(r > _HALF, radial, 0.0)
    return (radial / safe)[:, None] * X
