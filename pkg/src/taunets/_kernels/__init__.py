"""Kernel dispatch.

The numba implementations are used when numba imports cleanly and the
environment variable ``TAUNETS_DISABLE_NUMBA`` is unset or ``0``.  Otherwise
the pure-numpy path is used.  The choice is made once, at import time.
"""

import os

import numpy as np

from . import _numpy

NAMES = (
    "slog_add",
    "sigma",
    "sigma_prime",
    "log_g",
    "u_values",
    "log_u",
    "grad_g",
    "grad_u",
)


def _want_numba():
    return os.environ.get("TAUNETS_DISABLE_NUMBA", "0").strip().lower() in ("", "0", "false", "no")


_impl = _numpy
BACKEND = "numpy"
if _want_numba():
    try:
        from . import _numba

        _impl = _numba
        BACKEND = "numba"
    except ImportError:  # pragma: no cover - numba is a declared dependency
        pass


def _flat(*arrays):
    arrs = [np.asarray(a, dtype=np.float64) for a in arrays]
    shape = np.broadcast_shapes(*(a.shape for a in arrs))
    arrs = [np.broadcast_to(a, shape) for a in arrs]
    return shape, [np.require(a, np.float64, ("C", "W")).ravel() for a in arrs]


def row_norms(X) -> np.ndarray:
    """Overflow-safe Euclidean norms of the rows of an ``(n, d)`` array."""
    return _numpy.row_norms(np.atleast_2d(np.asarray(X, dtype=np.float64)))


def slog_add(sa, la, sb, lb):
    shape, flat = _flat(sa, la, sb, lb)
    s, l = _impl.slog_add(*flat)
    return s.reshape(shape), l.reshape(shape)


def sigma(r):
    shape, (rr,) = _flat(r)
    return _impl.sigma(rr).reshape(shape)


def sigma_prime(r):
    shape, (rr,) = _flat(r)
    return _impl.sigma_prime(rr).reshape(shape)


def log_g(r, ln_eps):
    shape, flat = _flat(r, ln_eps)
    return _impl.log_g(*flat).reshape(shape)


def u_values(r, ln_eps):
    shape, flat = _flat(r, ln_eps)
    return _impl.u_values(*flat).reshape(shape)


def log_u(r, ln_eps):
    shape, flat = _flat(r, ln_eps)
    return _impl.log_u(*flat).reshape(shape)


def _grad(fn, X, ln_eps):
    X = np.ascontiguousarray(np.atleast_2d(np.asarray(X, dtype=np.float64)))
    le = np.require(np.broadcast_to(np.asarray(ln_eps, dtype=np.float64), (X.shape[0],)), np.float64, ("C", "W"))
    return fn(X, le)


def grad_g(X, ln_eps):
    return _grad(_impl.grad_g, X, ln_eps)


def grad_u(X, ln_eps):
    return _grad(_impl.grad_u, X, ln_eps)
