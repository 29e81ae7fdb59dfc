"""Boxes and moderate generalized points.

A point's coordinates are stored as ``anchor + offset`` where the anchor is a
fixed real vector and the offset is a net in signed log form.  Anchoring a
coordinate at a box endpoint lets boundary-hugging points such as
``exp(-1/eps)`` stay strictly inside the box at every grid eps, even where the
float value of the coordinate would round onto the endpoint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .asymptotics import (
    DEFAULT_M_MAX,
    DEFAULT_N_MAX,
    DEFAULT_P_MAX,
    EpsGrid,
    ScalarNet,
    from_slog,
    is_negligible,
    moderate_exponent,
    slog_add,
    slog_sub,
    to_slog,
)
from .errors import DomainError, ModerationError
from .gnumber import GeneralizedNumber, inf_min, is_strictly_positive


@dataclass(frozen=True, eq=False)
class Box:
    """Product of open intervals ``(lower[j], upper[j])``; endpoints may be infinite."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = np.atleast_1d(np.asarray(self.lower, dtype=np.float64)).copy()
        hi = np.atleast_1d(np.asarray(self.upper, dtype=np.float64)).copy()
        if lo.shape != hi.shape or lo.ndim != 1 or lo.size < 1:
            raise DomainError("box bounds must be 1-d arrays of equal length >= 1")
        if np.any(np.isnan(lo)) or np.any(np.isnan(hi)) or np.any(lo >= hi):
            raise DomainError("every interval needs lower < upper")
        if np.any(lo == np.inf) or np.any(hi == -np.inf):
            raise DomainError("lower bounds may be -inf only, upper bounds +inf only")
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @classmethod
    def whole(cls, d: int) -> "Box":
        return cls(np.full(d, -np.inf), np.full(d, np.inf))

    @classmethod
    def unit(cls, d: int) -> "Box":
        return cls(np.zeros(d), np.ones(d))

    @classmethod
    def half_space(cls, d: int) -> "Box":
        """``(0, inf) x R^(d-1)``."""
        lo = np.full(d, -np.inf)
        lo[0] = 0.0
        return cls(lo, np.full(d, np.inf))

    @property
    def dim(self) -> int:
        return self.lower.size

    @property
    def is_whole_space(self) -> bool:
        return bool(np.all(np.isinf(self.lower)) and np.all(np.isinf(self.upper)))

    @property
    def is_bounded(self) -> bool:
        return bool(np.all(np.isfinite(self.lower)) and np.all(np.isfinite(self.upper)))

    def contains(self, X) -> np.ndarray:
        X = np.atleast_2d(X)
        return np.all((X > self.lower) & (X < self.upper), axis=1)

    def same_as(self, other: "Box") -> bool:
        return bool(np.array_equal(self.lower, other.lower) and np.array_equal(self.upper, other.upper))

    def finite_endpoints(self):
        """Yield ``(axis, endpoint, side)`` with side +1 for lower and -1 for upper."""
        for j in range(self.dim):
            if np.isfinite(self.lower[j]):
                yield j, float(self.lower[j]), 1
            if np.isfinite(self.upper[j]):
                yield j, float(self.upper[j]), -1

    def to_dict(self):
        def enc(v):
            return v if math.isfinite(v) else ("inf" if v > 0 else "-inf")

        return {"lower": [enc(float(v)) for v in self.lower], "upper": [enc(float(v)) for v in self.upper]}


def as_point_array(v, n: int, d: int) -> np.ndarray:
    """Coerce a point-valued function result to shape ``(n, d)``.

    Accepts a length-``d`` sequence of scalars or length-``n`` arrays, an
    ``(n,)`` array when ``d == 1``, or an ``(n, d)`` array.
    """
    if isinstance(v, (list, tuple)):
        if len(v) != d:
            raise DomainError(f"expected {d} coordinates, got {len(v)}")
        return np.stack([np.broadcast_to(np.asarray(c, dtype=np.float64), (n,)) for c in v], axis=1)
    v = np.asarray(v, dtype=np.float64)
    if v.ndim <= 1 and d == 1:
        return np.broadcast_to(v, (n,)).reshape(n, 1)
    return np.broadcast_to(v, (n, d))


def endpoint_distance(anchor: float, s, l, endpoint: float, side: int):
    """Signed distance of ``anchor + offset`` to an endpoint, in signed log form."""
    if anchor == endpoint:
        return side * s, l
    diff = to_slog(np.full(np.shape(s), anchor - endpoint))
    ds, dl = slog_add(diff, (s, l))
    return side * ds, dl


OffsetFn = Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]


@dataclass(frozen=True, eq=False)
class GeneralizedPoint:
    """A moderate net of points strictly inside ``box`` (checked at grid points)."""

    offset_fn: OffsetFn
    anchor: np.ndarray
    box: Box
    grid: EpsGrid = None
    label: str = "point"
    n_max: int = DEFAULT_N_MAX
    moderate_n: int = None

    def __post_init__(self):
        if self.grid is None:
            object.__setattr__(self, "grid", EpsGrid.default())
        anchor = np.atleast_1d(np.asarray(self.anchor, dtype=np.float64)).copy()
        if anchor.shape != (self.box.dim,):
            raise DomainError("anchor dimension does not match the box")
        anchor.setflags(write=False)
        object.__setattr__(self, "anchor", anchor)
        eps = self.grid.eps_values
        for j, endpoint, side in self.box.finite_endpoints():
            s, _ = self.endpoint_distance_slog(eps, j, endpoint, side)
            if np.any(s <= 0.0):
                bad = float(eps[np.flatnonzero(s <= 0.0)[0]])
                raise DomainError(f"{self.label} leaves the box along axis {j} at eps={bad!r}")
        n = moderate_exponent(self.norm_net(), self.grid, self.n_max)
        if n is None:
            raise ModerationError(f"{self.label} is not moderate with N <= {self.n_max}")
        object.__setattr__(self, "moderate_n", n)

    # construction ---------------------------------------------------------
    @classmethod
    def from_values(cls, fn: Callable[[np.ndarray], np.ndarray], box: Box, grid: EpsGrid | None = None,
                    label: str = "point") -> "GeneralizedPoint":
        d = box.dim

        def offset(eps):
            return to_slog(as_point_array(fn(eps), eps.shape[0], d))

        return cls(offset, np.zeros(d), box, grid, label)

    @classmethod
    def constant(cls, c, box: Box, grid: EpsGrid | None = None) -> "GeneralizedPoint":
        c = np.atleast_1d(np.asarray(c, dtype=np.float64))
        zero = (np.zeros(box.dim), np.full(box.dim, -np.inf))

        def offset(eps):
            n = eps.shape[0]
            return np.broadcast_to(zero[0], (n, box.dim)), np.broadcast_to(zero[1], (n, box.dim))

        return cls(offset, c, box, grid, f"const{c.tolist()}")

    @classmethod
    def from_nets(cls, nets: Sequence[ScalarNet], box: Box, anchor=None, grid: EpsGrid | None = None,
                  label: str | None = None) -> "GeneralizedPoint":
        """Coordinate ``j`` is ``anchor[j] + nets[j](eps)``."""
        if len(nets) != box.dim:
            raise DomainError("one net per coordinate is required")
        anchor = np.zeros(box.dim) if anchor is None else anchor

        def offset(eps):
            parts = [n.slog(eps) for n in nets]
            return np.stack([p[0] for p in parts], axis=1), np.stack([p[1] for p in parts], axis=1)

        label = label or "(" + ", ".join(n.label for n in nets) + ")"
        return cls(offset, anchor, box, grid, label)

    # evaluation -----------------------------------------------------------
    def offsets(self, eps) -> tuple[np.ndarray, np.ndarray]:
        e = np.atleast_1d(np.asarray(eps, dtype=np.float64))
        s, l = self.offset_fn(e)
        shape = (e.shape[0], self.box.dim)
        return np.broadcast_to(s, shape), np.broadcast_to(l, shape)

    def coordinates_slog(self, eps) -> tuple[np.ndarray, np.ndarray]:
        s, l = self.offsets(eps)
        a = to_slog(np.broadcast_to(self.anchor, s.shape))
        return slog_add(a, (s, l))

    def values(self, eps) -> np.ndarray:
        """Float coordinates, shape ``(len(eps), d)``."""
        s, l = self.offsets(eps)
        return self.anchor + from_slog(s, l)

    def __call__(self, eps):
        v = self.values(eps)
        return v[0] if np.ndim(eps) == 0 else v

    def endpoint_distance_slog(self, eps, axis: int, endpoint: float, side: int):
        """Signed distance ``x - a`` (side=+1) or ``b - x`` (side=-1) in signed log form."""
        s, l = self.offsets(eps)
        return endpoint_distance(self.anchor[axis], s[:, axis], l[:, axis], endpoint, side)

    def norm_net(self) -> ScalarNet:
        """``max_j |x_eps^(j)|`` as a scalar net."""
        def fn(eps):
            s, l = self.coordinates_slog(eps)
            l = np.where(s == 0.0, -np.inf, l)
            m = np.max(l, axis=1)
            return np.where(np.isneginf(m), 0.0, 1.0), m

        return ScalarNet(fn, f"|{self.label}|")

    def __repr__(self):
        return f"GeneralizedPoint({self.label}, N={self.moderate_n})"


def _check_same_box(x: GeneralizedPoint, y: GeneralizedPoint):
    if not x.box.same_as(y.box):
        raise DomainError("points live in different boxes")


def difference_net(x: GeneralizedPoint, y: GeneralizedPoint) -> ScalarNet:
    """``max_j |x_eps^(j) - y_eps^(j)|`` computed anchor-aware."""
    _check_same_box(x, y)

    def fn(eps):
        xs, xl = x.offsets(eps)
        ys, yl = y.offsets(eps)
        ds, dl = slog_sub((xs, xl), (ys, yl))
        da = x.anchor - y.anchor
        if np.any(da != 0.0):
            ds, dl = slog_add(to_slog(np.broadcast_to(da, ds.shape)), (ds, dl))
        dl = np.where(ds == 0.0, -np.inf, dl)
        m = np.max(dl, axis=1)
        return np.where(np.isneginf(m), 0.0, 1.0), m

    return ScalarNet(fn, f"|{x.label} - {y.label}|")


def equivalent(x: GeneralizedPoint, y: GeneralizedPoint, p_max: int = DEFAULT_P_MAX) -> bool:
    """``x ~ y``: the coordinate difference is negligible up to ``p_max``."""
    return is_negligible(difference_net(x, y), x.grid, p_max)


def distance_to_boundary(x: GeneralizedPoint) -> GeneralizedNumber:
    """Minimum over the finite endpoints of the coordinate distances."""
    terms = []
    for j, endpoint, side in x.box.finite_endpoints():
        def fn(eps, j=j, endpoint=endpoint, side=side):
            s, l = x.endpoint_distance_slog(eps, j, endpoint, side)
            return np.abs(s), l

        terms.append(GeneralizedNumber(ScalarNet(fn, f"d_{j}{'+' if side > 0 else '-'}"), x.grid))
    if not terms:
        raise DomainError("distance to the boundary is undefined on the whole space")
    return inf_min(terms)


def has_positive_boundary_distance(x: GeneralizedPoint, m_max: int = DEFAULT_M_MAX) -> bool:
    return is_strictly_positive(distance_to_boundary(x), m_max)[0]


# ---------------------------------------------------------------------------
# sample generator


def _base_coordinate(rng: np.random.Generator, lo: float, hi: float) -> float:
    if math.isfinite(lo) and math.isfinite(hi):
        return lo + (hi - lo) * rng.uniform(0.125, 0.875)
    if math.isfinite(lo):
        return lo + math.exp(rng.normal())
    if math.isfinite(hi):
        return hi - math.exp(rng.normal())
    return float(rng.normal(0.0, 2.0))


def _power_net(sign: float, log_coef: float, power: float, label: str) -> ScalarNet:
    return ScalarNet(lambda eps: (np.full(eps.shape, sign), log_coef + power * np.log(eps)), label)


def _exp_net(sign: float, log_coef: float, label: str) -> ScalarNet:
    return ScalarNet(lambda eps: (np.full(eps.shape, sign), log_coef - 1.0 / eps), label)


def _point_kinds(box: Box, include_huggers: bool) -> list[str]:
    kinds = ["constant"]
    unbounded = np.isinf(box.upper) | np.isinf(box.lower)
    kinds.append("escape")
    if np.any(unbounded):
        kinds.append("witness")
    if include_huggers and any(True for _ in box.finite_endpoints()):
        kinds += ["hug_power", "hug_exp"]
    return kinds


def sample_moderate_points(box: Box, grid: EpsGrid | None, count: int, seed: int = 0,
                           include_huggers: bool = True) -> list[GeneralizedPoint]:
    """Deterministic mixed family of moderate points.

    Kinds cycle through constants, power-law escapes ``c*eps**-m`` (clamped to
    ``b - eps`` along bounded axes), the counterexample witnesses ``eps**-j``
    and, when the box has finite endpoints, huggers ``a + c*eps**m`` and
    ``a + c*exp(-1/eps)``.
    """
    grid = grid or EpsGrid.default()
    rng = np.random.default_rng(seed)
    kinds = _point_kinds(box, include_huggers)
    endpoints = list(box.finite_endpoints())
    out = []
    d = box.dim
    for i in range(count):
        kind = kinds[i % len(kinds)]
        base = np.array([_base_coordinate(rng, box.lower[j], box.upper[j]) for j in range(d)])
        nets = [ScalarNet.constant(0.0) for _ in range(d)]
        anchor = base.copy()
        if kind == "escape":
            j = int(rng.integers(d))
            m = int(rng.integers(1, 5))
            c = float(rng.uniform(0.5, 2.0))
            lo, hi = box.lower[j], box.upper[j]
            if math.isinf(hi) and (math.isfinite(lo) or rng.uniform() < 0.5):
                anchor[j] = lo if math.isfinite(lo) else 0.0
                nets[j] = _power_net(1.0, math.log(c), -m, f"{c:.3g}*eps^-{m}")
            elif math.isinf(lo):
                anchor[j] = hi if math.isfinite(hi) else 0.0
                nets[j] = _power_net(-1.0, math.log(c), -m, f"-{c:.3g}*eps^-{m}")
            else:
                anchor[j] = hi
                nets[j] = _power_net(-1.0, 0.0, 1.0, "-eps")
        elif kind == "witness":
            axes = [j for j in range(d) if math.isinf(box.upper[j])]
            jexp = int(rng.integers(0, 5))
            if axes:
                j = axes[int(rng.integers(len(axes)))]
                anchor[j] = 0.0 if math.isinf(box.lower[j]) else box.lower[j]
                nets[j] = _power_net(1.0, 0.0, -jexp, f"eps^-{jexp}")
            else:
                j = int(np.flatnonzero(np.isinf(box.lower))[0])
                anchor[j] = 0.0 if math.isinf(box.upper[j]) else box.upper[j]
                nets[j] = _power_net(-1.0, 0.0, -jexp, f"-eps^-{jexp}")
        elif kind in ("hug_power", "hug_exp"):
            j, endpoint, side = endpoints[int(rng.integers(len(endpoints)))]
            width = box.upper[j] - box.lower[j]
            c = float(rng.uniform(0.25, 1.0)) * (min(1.0, width / 2.0) if math.isfinite(width) else 1.0)
            anchor[j] = endpoint
            head = f"{endpoint:g}{'+' if side > 0 else '-'}{c:.3g}"
            if kind == "hug_power":
                m = int(rng.integers(1, 4))
                nets[j] = _power_net(float(side), math.log(c), m, f"{head}*eps^{m}")
            else:
                nets[j] = _exp_net(float(side), math.log(c), f"{head}*exp(-1/eps)")
        label = f"{kind}#{i}"
        out.append(GeneralizedPoint.from_nets(nets, box, anchor, grid, label))
    return out
