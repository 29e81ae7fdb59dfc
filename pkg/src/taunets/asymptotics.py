"""eps-grids, signed log-space arithmetic and asymptotic order estimation.

All nets in this package are evaluated in *signed log form*: a pair of arrays
``(sign, logabs)`` with ``sign`` in {-1, 0, +1} and ``logabs = ln|value|``
(``-inf`` for an exact zero).  This keeps quantities such as ``eps**49`` at
``eps = 2**-40`` comparable even though they underflow as float64 values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import _kernels
from .errors import DomainError, NetEvaluationError

DEFAULT_P_MAX = 8
DEFAULT_N_MAX = 16
DEFAULT_M_MAX = 24
DEFAULT_TAIL_FRACTION = 0.5
STRUCTURAL_SLACK = 1.0
ESTIMATE_SLACK = 16.0
# Tolerance for non-strict log-space comparisons, in units of |ln eps|.
LOG_TOL = 1e-12

Slog = tuple[np.ndarray, np.ndarray]


# ---------------------------------------------------------------------------
# scalar primitives


def eps_pow(eps: float, t: float) -> float:
    """``eps**t`` evaluated as ``exp(t*ln eps)``; underflows to 0, overflows to inf."""
    if not 0.0 < eps < 1.0:
        raise DomainError(f"eps must lie in (0, 1), got {eps!r}")
    with np.errstate(over="ignore", under="ignore"):
        return float(np.exp(t * math.log(eps)))


def log_eps(x: float, eps: float) -> float:
    """Logarithm of ``x`` to base ``eps``."""
    if not x > 0.0:
        raise DomainError(f"log_eps needs x > 0, got {x!r}")
    if not 0.0 < eps < 1.0:
        raise DomainError(f"eps must lie in (0, 1), got {eps!r}")
    return math.log(x) / math.log(eps)


# ---------------------------------------------------------------------------
# signed log arithmetic


def to_slog(values) -> Slog:
    v = np.asarray(values, dtype=np.float64)
    with np.errstate(divide="ignore"):
        return np.sign(v), np.log(np.abs(v))


def from_slog(s, l) -> np.ndarray:
    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        out = np.asarray(s, dtype=np.float64) * np.exp(l)
    return np.where(np.asarray(s) == 0.0, 0.0, out)


def slog_add(a: Slog, b: Slog) -> Slog:
    return _kernels.slog_add(a[0], a[1], b[0], b[1])


def slog_neg(a: Slog) -> Slog:
    return -a[0], a[1]


def slog_sub(a: Slog, b: Slog) -> Slog:
    return slog_add(a, slog_neg(b))


def slog_mul(a: Slog, b: Slog) -> Slog:
    s = a[0] * b[0]
    with np.errstate(invalid="ignore"):
        l = a[1] + b[1]
    # 0 * anything finite stays an exact zero
    return s, np.where(s == 0.0, -np.inf, l)


def slog_div(a: Slog, b: Slog) -> Slog:
    if np.any(b[0] == 0.0):
        raise ZeroDivisionError("division by an exact zero in a net")
    s = a[0] * b[0]
    with np.errstate(invalid="ignore"):
        l = a[1] - b[1]
    return s, np.where(s == 0.0, -np.inf, l)


def slog_abs(a: Slog) -> Slog:
    return np.abs(a[0]), a[1]


def slog_less(a: Slog, b: Slog) -> np.ndarray:
    """Elementwise ``a < b`` for signed-log values."""
    sa, la = a
    sb, lb = b
    pos = (sa > 0) & (sb > 0) & (la < lb)
    neg = (sa < 0) & (sb < 0) & (la > lb)
    return (sa < sb) | pos | neg


def slog_min(a: Slog, b: Slog) -> Slog:
    pick_b = slog_less(b, a)
    return np.where(pick_b, b[0], a[0]), np.where(pick_b, b[1], a[1])


def check_finite_slog(s, l, eps) -> None:
    """Raise NetEvaluationError on NaN or +inf log-magnitudes."""
    bad = np.isnan(l) | np.isposinf(l) | np.isnan(s)
    if np.any(bad):
        idx = int(np.flatnonzero(np.ravel(bad))[0])
        e = np.broadcast_to(np.asarray(eps, dtype=np.float64), np.shape(l)).ravel()[idx]
        raise NetEvaluationError("net is NaN or infinite", eps=float(e))


# ---------------------------------------------------------------------------
# grids


@dataclass(frozen=True)
class EpsGrid:
    """A finite, strictly decreasing sample of (0, 1]."""

    eps_values: np.ndarray
    max_ratio: float = 0.95

    def __post_init__(self):
        e = np.asarray(self.eps_values, dtype=np.float64)
        if e.ndim != 1 or e.size < 8:
            raise DomainError("an eps-grid needs at least 8 values")
        if np.any(e <= 0.0) or np.any(e > 1.0):
            raise DomainError("eps values must lie in (0, 1]")
        if np.any(np.diff(e) >= 0.0):
            raise DomainError("eps values must be strictly decreasing")
        if np.any(e[1:] / e[:-1] > self.max_ratio):
            raise DomainError("consecutive eps values are too close for log-log fits")
        e = e.copy()
        e.setflags(write=False)
        object.__setattr__(self, "eps_values", e)

    @classmethod
    def geometric(cls, min_exp: float = 40, count: int = 37, start_exp: float = 4) -> "EpsGrid":
        """``2**-k`` for ``count`` values of ``k`` evenly spaced in ``[start_exp, min_exp]``."""
        return cls(2.0 ** -np.linspace(start_exp, min_exp, count))

    @classmethod
    def default(cls) -> "EpsGrid":
        return cls.geometric(40, 37)

    def __len__(self):
        return self.eps_values.size

    def __iter__(self):
        return iter(self.eps_values)

    @property
    def ln_eps(self) -> np.ndarray:
        return np.log(self.eps_values)

    def tail(self, fraction: float = DEFAULT_TAIL_FRACTION) -> np.ndarray:
        """The smallest ``fraction`` of the grid (at least two points)."""
        n = self.eps_values.size
        k = max(2, int(math.ceil(n * fraction)))
        return self.eps_values[n - k:]


def _eps_array(grid) -> np.ndarray:
    if isinstance(grid, EpsGrid):
        return grid.eps_values
    return np.asarray(grid, dtype=np.float64)


# ---------------------------------------------------------------------------
# scalar nets


@dataclass(frozen=True, eq=False)
class ScalarNet:
    """A map ``eps -> R`` evaluated in signed log form.

    ``slog_fn`` receives a 1-d array of eps values and returns ``(sign, logabs)``.
    Use :meth:`from_values` for nets given as plain (vectorized) value functions.
    """

    slog_fn: Callable[[np.ndarray], Slog]
    label: str = "net"
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def from_values(cls, fn: Callable[[np.ndarray], np.ndarray], label: str = "net") -> "ScalarNet":
        def slog_fn(eps):
            with np.errstate(all="ignore"):
                v = np.broadcast_to(np.asarray(fn(eps), dtype=np.float64), eps.shape)
            return to_slog(v)

        return cls(slog_fn, label)

    @classmethod
    def constant(cls, c: float) -> "ScalarNet":
        s, l = float(np.sign(c)), (math.log(abs(c)) if c != 0 else -math.inf)
        return cls(lambda eps: (np.full(eps.shape, s), np.full(eps.shape, l)), f"{c!r}")

    @classmethod
    def power(cls, p: float, coef: float = 1.0) -> "ScalarNet":
        """``coef * eps**p``."""
        if coef == 0:
            return cls.constant(0.0)
        s, lc = float(np.sign(coef)), math.log(abs(coef))
        return cls(lambda eps: (np.full(eps.shape, s), lc + p * np.log(eps)), f"{coef!r}*eps^{p!r}")

    @classmethod
    def exp_decay(cls, a: float = 1.0, coef: float = 1.0, power: float = 0.0) -> "ScalarNet":
        """``coef * eps**power * exp(-a/eps)``, kept in log form so it never underflows."""
        if coef == 0:
            return cls.constant(0.0)
        s, lc = float(np.sign(coef)), math.log(abs(coef))
        return cls(
            lambda eps: (np.full(eps.shape, s), lc + power * np.log(eps) - a / eps),
            f"{coef!r}*eps^{power!r}*exp(-{a!r}/eps)",
        )

    def slog(self, eps) -> Slog:
        e = np.atleast_1d(np.asarray(eps, dtype=np.float64))
        key = e.tobytes()
        hit = self._cache.get(key)
        if hit is None:
            s, l = self.slog_fn(e)
            s = np.array(np.broadcast_to(s, e.shape), dtype=np.float64)
            l = np.array(np.broadcast_to(l, e.shape), dtype=np.float64)
            s.setflags(write=False)
            l.setflags(write=False)
            hit = (s, l)
            if len(self._cache) < 64:
                self._cache[key] = hit
        return hit

    def values(self, eps) -> np.ndarray:
        return from_slog(*self.slog(eps))

    def __call__(self, eps):
        v = self.values(eps)
        return float(v[0]) if np.ndim(eps) == 0 else v

    # arithmetic -----------------------------------------------------------
    def __add__(self, other: "ScalarNet") -> "ScalarNet":
        return ScalarNet(lambda e: slog_add(self.slog(e), other.slog(e)), f"({self.label} + {other.label})")

    def __sub__(self, other: "ScalarNet") -> "ScalarNet":
        return ScalarNet(lambda e: slog_sub(self.slog(e), other.slog(e)), f"({self.label} - {other.label})")

    def __mul__(self, other: "ScalarNet") -> "ScalarNet":
        return ScalarNet(lambda e: slog_mul(self.slog(e), other.slog(e)), f"({self.label} * {other.label})")

    def __neg__(self) -> "ScalarNet":
        return ScalarNet(lambda e: slog_neg(self.slog(e)), f"(-{self.label})")

    def abs(self) -> "ScalarNet":
        return ScalarNet(lambda e: slog_abs(self.slog(e)), f"|{self.label}|")

    def reciprocal(self) -> "ScalarNet":
        def fn(e):
            s, l = self.slog(e)
            return s, np.where(s == 0.0, np.inf, -l)

        return ScalarNet(fn, f"1/{self.label}")


# ---------------------------------------------------------------------------
# order estimation


@dataclass(frozen=True)
class OrderEstimate:
    """Least-squares exponent ``p`` with ``|net(eps)| ~ eps**p`` on a grid."""

    slope: float
    residual: float
    min_log_value: float
    exact_zero: bool = False
    n_points: int = 0


def _checked_slog(net: ScalarNet, eps: np.ndarray) -> Slog:
    s, l = net.slog(eps)
    check_finite_slog(s, l, eps)
    return s, l


def fit_order(ln_eps: np.ndarray, logabs: np.ndarray) -> OrderEstimate:
    """Fit ``logabs ~ slope*ln_eps + c`` over the finite entries of ``logabs``."""
    nz = np.isfinite(logabs)
    if not np.any(nz):
        return OrderEstimate(math.inf, 0.0, -math.inf, True, 0)
    x = ln_eps[nz]
    y = logabs[nz]
    if x.size == 1:
        return OrderEstimate(float(y[0] / x[0]), 0.0, float(y[0]), False, 1)
    xm = math.fsum(x) / x.size
    ym = math.fsum(y) / y.size
    dx = x - xm
    slope = math.fsum(dx * (y - ym)) / math.fsum(dx * dx)
    resid = y - (ym + slope * dx)
    rms = math.sqrt(math.fsum(resid * resid) / resid.size)
    return OrderEstimate(slope, rms, float(np.min(y)), False, int(x.size))


def estimate_order(net: ScalarNet, grid) -> OrderEstimate:
    """Empirical exponent of ``net`` over the grid (or any array of eps values)."""
    eps = _eps_array(grid)
    _, l = _checked_slog(net, eps)
    return fit_order(np.log(eps), l)


def is_O_eps_power(net: ScalarNet, p: float, grid, slack: float = STRUCTURAL_SLACK,
                   tail_fraction: float = DEFAULT_TAIL_FRACTION) -> bool:
    """``|net(eps)| <= slack * eps**p`` on the tail of the grid."""
    if slack < 0:
        raise DomainError("slack must be non-negative")
    eps = _tail(grid, tail_fraction)
    s, l = _checked_slog(net, eps)
    if np.all(s == 0.0):
        return True
    with np.errstate(divide="ignore"):
        bound = math.log(slack) + p * np.log(eps) if slack > 0 else np.full(eps.shape, -np.inf)
    return bool(np.all((s == 0.0) | (l <= bound)))


def _tail(grid, tail_fraction: float) -> np.ndarray:
    if isinstance(grid, EpsGrid):
        return grid.tail(tail_fraction)
    return np.asarray(grid, dtype=np.float64)


def is_negligible(net: ScalarNet, grid, p_max: int = DEFAULT_P_MAX, slack: float = STRUCTURAL_SLACK,
                  tail_fraction: float = DEFAULT_TAIL_FRACTION) -> bool:
    """Negligibility up to ``p_max``: every integer ``p <= p_max`` holds and the tail slope is ``>= p_max``."""
    if p_max < 1:
        raise DomainError("p_max must be at least 1")
    eps = _tail(grid, tail_fraction)
    s, l = _checked_slog(net, eps)
    if np.all(s == 0.0):
        return True
    for p in range(1, p_max + 1):
        if not is_O_eps_power(net, p, eps, slack):
            return False
    return fit_order(np.log(eps), l).slope >= p_max


def moderate_exponent(net: ScalarNet, grid, n_max: int = DEFAULT_N_MAX, slack: float = STRUCTURAL_SLACK,
                      tail_fraction: float = DEFAULT_TAIL_FRACTION) -> int | None:
    """Smallest ``N <= n_max`` with ``|net| <= slack * eps**-N`` on the tail, else None."""
    eps = _tail(grid, tail_fraction)
    for n in range(0, n_max + 1):
        if is_O_eps_power(net, -n, eps, slack):
            return n
    return None
