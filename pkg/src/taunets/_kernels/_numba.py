"""numba loop kernels, signature-compatible with ``_numpy.py``."""

import math

import numpy as np
from numba import njit

_HALF = 0.5


@njit(cache=True, nogil=True)
def _slog_add1(sa, la, sb, lb):
    if math.isnan(la) or math.isnan(lb):
        return 1.0, math.nan
    if sa == 0.0:
        return sb, lb
    if sb == 0.0:
        return sa, la
    if lb > la:
        hs, hi, ls, lo = sb, lb, sa, la
    else:
        hs, hi, ls, lo = sa, la, sb, lb
    same = hs == ls
    if hi == math.inf:
        if lo == math.inf and not same:
            return hs, math.nan
        return hs, math.inf
    d = lo - hi
    if same:
        return hs, hi + math.log1p(math.exp(d))
    if d == 0.0:
        return 0.0, -math.inf
    return hs, hi + math.log1p(-math.exp(d))


@njit(cache=True, nogil=True)
def slog_add(sa, la, sb, lb):
    n = sa.size
    out_s = np.empty(n)
    out_l = np.empty(n)
    for i in range(n):
        out_s[i], out_l[i] = _slog_add1(sa[i], la[i], sb[i], lb[i])
    return out_s, out_l


@njit(cache=True, nogil=True)
def _phi1(t):
    if t > 0.0:
        return math.exp(-1.0 / t)
    return 0.0


@njit(cache=True, nogil=True)
def _sigma1(r):
    if r <= _HALF:
        return 1.0
    if r >= 1.0:
        return 0.0
    a = _phi1(1.0 - r)
    return a / (a + _phi1(r - _HALF))


@njit(cache=True, nogil=True)
def _sigma_prime1(r):
    if r <= _HALF or r >= 1.0:
        return 0.0
    a = _phi1(1.0 - r)
    b = _phi1(r - _HALF)
    da = -a / (1.0 - r) ** 2
    db = b / (r - _HALF) ** 2
    return (da * b - a * db) / (a + b) ** 2


@njit(cache=True, nogil=True)
def sigma(r):
    out = np.empty(r.size)
    for i in range(r.size):
        out[i] = _sigma1(r[i])
    return out


@njit(cache=True, nogil=True)
def sigma_prime(r):
    out = np.empty(r.size)
    for i in range(r.size):
        out[i] = _sigma_prime1(r[i])
    return out


@njit(cache=True, nogil=True)
def log_g(r, ln_eps):
    out = np.empty(r.size)
    for i in range(r.size):
        if r[i] > 0.0:
            lr = math.log(r[i])
        else:
            lr = -math.inf
        out[i] = lr * lr / ln_eps[i]
    return out


@njit(cache=True, nogil=True)
def u_values(r, ln_eps):
    out = np.empty(r.size)
    for i in range(r.size):
        ri = r[i]
        if ri <= _HALF:
            out[i] = 1.0
            continue
        lr = math.log(ri)
        g = math.exp(lr * lr / ln_eps[i])
        if ri >= 1.0:
            out[i] = g
        else:
            s = _sigma1(ri)
            out[i] = (1.0 - s) * g + s
    return out


@njit(cache=True, nogil=True)
def log_u(r, ln_eps):
    out = np.empty(r.size)
    for i in range(r.size):
        ri = r[i]
        if ri <= _HALF:
            out[i] = 0.0
            continue
        lr = math.log(ri)
        lg = lr * lr / ln_eps[i]
        if ri >= 1.0:
            out[i] = lg
        else:
            s = _sigma1(ri)
            out[i] = math.log((1.0 - s) * math.exp(lg) + s)
    return out


@njit(cache=True, nogil=True)
def _row_norm(X, i):
    # scaled so |x| up to the float max does not overflow
    m = 0.0
    for k in range(X.shape[1]):
        m = max(m, abs(X[i, k]))
    if m == 0.0 or math.isinf(m):
        return m
    acc = 0.0
    for k in range(X.shape[1]):
        t = X[i, k] / m
        acc += t * t
    return m * math.sqrt(acc)


@njit(cache=True, nogil=True)
def grad_g(X, ln_eps):
    n, d = X.shape
    out = np.empty((n, d))
    for i in range(n):
        r = _row_norm(X, i)
        lr = math.log(r)
        coef = 2.0 * math.exp(lr * lr / ln_eps[i]) * lr / (r * r * ln_eps[i])
        for k in range(d):
            out[i, k] = coef * X[i, k]
    return out


@njit(cache=True, nogil=True)
def grad_u(X, ln_eps):
    n, d = X.shape
    out = np.zeros((n, d))
    for i in range(n):
        r = _row_norm(X, i)
        if r <= _HALF:
            continue
        lr = math.log(r)
        g = math.exp(lr * lr / ln_eps[i])
        s = _sigma1(r)
        radial = (1.0 - s) * 2.0 * g * lr / (r * ln_eps[i]) + _sigma_prime1(r) * (1.0 - g)
        for k in range(d):
            out[i, k] = radial / r * X[i, k]
    return out
