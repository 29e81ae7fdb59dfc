"""Tempered generalized functions: classification, point values, scaling maps
and the invertibility checks (global, pointwise, unit-ball, witness search,
interior nudge).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .asymptotics import (
    DEFAULT_M_MAX,
    DEFAULT_N_MAX,
    DEFAULT_P_MAX,
    DEFAULT_TAIL_FRACTION,
    LOG_TOL,
    STRUCTURAL_SLACK,
    EpsGrid,
    ScalarNet,
    fit_order,
    from_slog,
    slog_add,
    slog_mul,
    slog_neg,
    slog_sub,
    to_slog,
)
from ._kernels import row_norms
from .errors import DomainError, NetEvaluationError, NudgeConstructionError
from .gnumber import GeneralizedNumber
from .gpoint import Box, GeneralizedPoint, endpoint_distance, has_positive_boundary_distance
from .sampling import XSampleSpec, unit_ball_samples

SlogFn = Callable[[float, np.ndarray], tuple[np.ndarray, np.ndarray]]
GradFn = Callable[[float, np.ndarray], np.ndarray]

FD_REL_STEP = 1e-6
SEGMENT_POINTS = 9


def _as_x(X, d: int) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 0 or (X.ndim == 1 and d > 1 and X.size == d):
        X = X.reshape(1, -1)
    elif X.ndim == 1:
        X = X.reshape(-1, d)
    return X


@dataclass(frozen=True, eq=False)
class FunctionNet:
    """A net ``(eps, x) -> R`` of smooth functions on ``box``.

    ``slog_fn(eps, X)`` takes a scalar eps and an ``(n, d)`` array and returns
    ``(sign, logabs)`` arrays of shape ``(n,)``.  ``gradient(eps, X)`` is
    optional; without it, central differences are used.
    """

    slog_fn: SlogFn
    box: Box
    label: str = "f"
    gradient: GradFn | None = None

    @classmethod
    def from_values(cls, fn: Callable[[float, np.ndarray], np.ndarray], box: Box, label: str = "f",
                    gradient: GradFn | None = None) -> "FunctionNet":
        def slog_fn(eps, X):
            with np.errstate(all="ignore"):
                v = np.broadcast_to(np.asarray(fn(eps, X), dtype=np.float64), (X.shape[0],))
            return to_slog(v)

        return cls(slog_fn, box, label, gradient)

    @classmethod
    def constant(cls, c: float, box: Box) -> "FunctionNet":
        s = float(np.sign(c))
        l = math.log(abs(c)) if c != 0 else -math.inf
        return cls(lambda eps, X: (np.full(X.shape[0], s), np.full(X.shape[0], l)), box, f"{c!r}",
                   lambda eps, X: np.zeros_like(X))

    @property
    def dim(self) -> int:
        return self.box.dim

    def slog(self, eps: float, X) -> tuple[np.ndarray, np.ndarray]:
        X = _as_x(X, self.dim)
        s, l = self.slog_fn(float(eps), X)
        n = X.shape[0]
        return np.broadcast_to(s, (n,)).astype(np.float64), np.broadcast_to(l, (n,)).astype(np.float64)

    def checked_slog(self, eps: float, X) -> tuple[np.ndarray, np.ndarray]:
        X = _as_x(X, self.dim)
        s, l = self.slog(eps, X)
        bad = np.isnan(l) | np.isposinf(l)
        if np.any(bad):
            i = int(np.flatnonzero(bad)[0])
            raise NetEvaluationError(f"{self.label} is NaN or infinite", eps=eps, x=X[i])
        return s, l

    def values(self, eps: float, X) -> np.ndarray:
        return from_slog(*self.slog(eps, X))

    def __call__(self, eps: float, x):
        X = _as_x(x, self.dim)
        v = self.values(eps, X)
        return float(v[0]) if np.ndim(x) <= 1 and X.shape[0] == 1 else v

    def grad(self, eps: float, X) -> np.ndarray:
        X = _as_x(X, self.dim)
        if self.gradient is not None:
            return np.asarray(self.gradient(float(eps), X), dtype=np.float64).reshape(X.shape)
        return finite_difference_gradient(self, eps, X)

    # algebra --------------------------------------------------------------
    def _other(self, other) -> "FunctionNet":
        if isinstance(other, FunctionNet):
            if not self.box.same_as(other.box):
                raise DomainError("nets live on different boxes")
            return other
        return FunctionNet.constant(float(other), self.box)

    def __add__(self, other):
        o = self._other(other)
        grad = None
        if self.gradient is not None and o.gradient is not None:
            grad = lambda e, X: self.gradient(e, X) + o.gradient(e, X)  # noqa: E731
        return FunctionNet(lambda e, X: slog_add(self.slog(e, X), o.slog(e, X)), self.box,
                           f"({self.label} + {o.label})", grad)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._other(other))

    def __neg__(self):
        grad = None if self.gradient is None else (lambda e, X: -self.gradient(e, X))
        return FunctionNet(lambda e, X: slog_neg(self.slog(e, X)), self.box, f"(-{self.label})", grad)

    def __mul__(self, other):
        o = self._other(other)
        def product_rule(e, X):
            return (self.gradient(e, X) * o.values(e, X)[:, None]
                    + o.gradient(e, X) * self.values(e, X)[:, None])

        grad = product_rule if self.gradient is not None and o.gradient is not None else None
        return FunctionNet(lambda e, X: slog_mul(self.slog(e, X), o.slog(e, X)), self.box,
                           f"({self.label} * {o.label})", grad)

    __rmul__ = __mul__

    def reciprocal(self) -> "FunctionNet":
        def fn(e, X):
            s, l = self.slog(e, X)
            return s, np.where(s == 0.0, np.inf, -l)

        return FunctionNet(fn, self.box, f"1/{self.label}")


def finite_difference_gradient(f: FunctionNet, eps: float, X) -> np.ndarray:
    """Central differences with step ``1e-6 * (1 + |x|)``."""
    X = _as_x(X, f.dim)
    h = FD_REL_STEP * (1.0 + row_norms(X))
    out = np.empty_like(X)
    for i in range(f.dim):
        step = np.zeros_like(X)
        step[:, i] = h
        out[:, i] = (f.values(eps, X + step) - f.values(eps, X - step)) / (2.0 * h)
    return out


def gradient_relative_error(f: FunctionNet, eps: float, X) -> np.ndarray:
    """Error of ``f.gradient`` against central differences.

    Measured relative to ``max(|grad f|, |f|/(1+|x|))``; the second term is the
    natural gradient scale of a tempered function and keeps the ratio finite
    where the gradient itself vanishes.
    """
    X = _as_x(X, f.dim)
    an = f.grad(eps, X)
    fd = finite_difference_gradient(f, eps, X)
    scale = np.maximum(row_norms(an), np.abs(f.values(eps, X)) / (1.0 + row_norms(X)))
    with np.errstate(invalid="ignore", divide="ignore"):
        err = row_norms(fd - an) / scale
    return np.where(scale == 0.0, row_norms(fd - an), err)


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class ModerationCertificate:
    """Outcome of a tempered moderateness check.

    ``worst_margin`` is ``max ln|u| - ln(eps**-N (1+|x|)**N)`` over the tail
    samples for the certified ``N`` (or for ``n_max`` when ``ok`` is False, in
    which case ``witness`` holds the worst ``(eps, x)``).
    """

    ok: bool
    N: int | None
    worst_margin: float
    worst_margin_scaled: float
    witness: tuple[float, list[float]] | None
    spec: XSampleSpec


@dataclass(frozen=True)
class NegligibilityVerdict:
    negligible: bool
    N: int | None
    p_max: int
    worst_margin_scaled: float
    witness: tuple[float, list[float]] | None


@dataclass
class _Sweep:
    eps: np.ndarray
    ln_eps: np.ndarray
    logs: list  # per-eps logabs arrays (exact zeros as -inf)
    log1p_norm: list
    points: list


def _sweep(f: FunctionNet, eps_values, spec: XSampleSpec) -> _Sweep:
    logs, weights, points = [], [], []
    for e in eps_values:
        X = spec.points(float(e), f.box)
        s, l = f.checked_slog(float(e), X)
        logs.append(np.where(s == 0.0, -np.inf, l))
        weights.append(np.log1p(row_norms(X)))
        points.append(X)
    eps = np.asarray(eps_values, dtype=np.float64)
    return _Sweep(eps, np.log(eps), logs, weights, points)


def _witness(sw: _Sweep, i: int, k: int):
    return float(sw.eps[i]), [float(v) for v in sw.points[i][k]]


def _moderate_from_sweep(sw: _Sweep, spec: XSampleSpec, n_max: int, slack: float) -> ModerationCertificate:
    lslack = math.log(slack)
    last = None
    for n in range(0, n_max + 1):
        worst, worst_scaled, arg = -math.inf, -math.inf, None
        for i, (l, w) in enumerate(zip(sw.logs, sw.log1p_norm)):
            margin = l + n * sw.ln_eps[i] - n * w
            k = int(np.argmax(margin))
            if margin[k] > worst:
                worst, arg = float(margin[k]), (i, k)
            worst_scaled = max(worst_scaled, float(margin[k] / abs(sw.ln_eps[i])))
        last = (worst, worst_scaled, arg)
        if worst <= lslack:
            return ModerationCertificate(True, n, worst, worst_scaled, None, spec)
    worst, worst_scaled, arg = last
    return ModerationCertificate(False, None, worst, worst_scaled, _witness(sw, *arg), spec)


def check_moderate(f: FunctionNet, grid: EpsGrid | None = None, spec: XSampleSpec | None = None,
                   n_max: int = DEFAULT_N_MAX, slack: float = STRUCTURAL_SLACK,
                   tail_fraction: float = DEFAULT_TAIL_FRACTION) -> ModerationCertificate:
    """Smallest ``N <= n_max`` with ``|f| <= slack * eps**-N (1+|x|)**N`` on the tail samples."""
    grid = grid or EpsGrid.default()
    spec = spec or XSampleSpec()
    return _moderate_from_sweep(_sweep(f, grid.tail(tail_fraction), spec), spec, n_max, slack)


def _negligible_from_sweep(sw: _Sweep, p_max: int, n_max: int, slack: float) -> NegligibilityVerdict:
    lslack = math.log(slack)
    if all(np.all(np.isneginf(l)) for l in sw.logs):
        return NegligibilityVerdict(True, 0, p_max, -math.inf, None)
    last = None
    for n in range(0, n_max + 1):
        sup = np.empty(sw.eps.size)
        worst_scaled, arg = -math.inf, None
        for i, (l, w) in enumerate(zip(sw.logs, sw.log1p_norm)):
            weighted = l - n * w
            k = int(np.argmax(weighted))
            sup[i] = weighted[k]
            scaled = float((weighted[k] - p_max * sw.ln_eps[i]) / abs(sw.ln_eps[i]))
            if scaled > worst_scaled:
                worst_scaled, arg = scaled, (i, k)
        last = (worst_scaled, arg)
        bounds_hold = all(
            np.all(sup <= lslack + p * sw.ln_eps) for p in range(1, p_max + 1)
        )
        if bounds_hold and fit_order(sw.ln_eps, sup).slope >= p_max:
            return NegligibilityVerdict(True, n, p_max, worst_scaled, None)
    worst_scaled, arg = last
    return NegligibilityVerdict(False, None, p_max, worst_scaled, _witness(sw, *arg))


def check_negligible(f: FunctionNet, grid: EpsGrid | None = None, spec: XSampleSpec | None = None,
                     p_max: int = DEFAULT_P_MAX, n_max: int = DEFAULT_N_MAX, slack: float = STRUCTURAL_SLACK,
                     tail_fraction: float = DEFAULT_TAIL_FRACTION) -> NegligibilityVerdict:
    """``exists N <= n_max, forall p <= p_max``: ``sup |f| (1+|x|)**-N <= slack * eps**p`` on the tail.

    As for scalar nets, the tail slope of the weighted sup must also reach ``p_max``.
    """
    grid = grid or EpsGrid.default()
    spec = spec or XSampleSpec()
    return _negligible_from_sweep(_sweep(f, grid.tail(tail_fraction), spec), p_max, n_max, slack)


# ---------------------------------------------------------------------------
# point values and scaling


def evaluate_at_point(f: FunctionNet, x: GeneralizedPoint) -> GeneralizedNumber:
    """The generalized number ``[(f_eps(x_eps))_eps]``."""
    if not f.box.same_as(x.box):
        raise DomainError("function and point live on different boxes")

    def fn(eps):
        X = x.values(eps)
        s = np.empty(eps.shape[0])
        l = np.empty(eps.shape[0])
        for i, e in enumerate(eps):
            si, li = f.checked_slog(float(e), X[i:i + 1])
            s[i], l[i] = si[0], li[0]
        return s, l

    return GeneralizedNumber(ScalarNet(fn, f"{f.label}({x.label})"), x.grid)


def _scale_factor(eps: float, m: float) -> float:
    return math.exp(m * math.log(eps))


def scale_map(f: FunctionNet, m: float) -> FunctionNet:
    """``s_m``: ``(eps, x) -> f(eps, eps**m * x)``, defined on the whole space."""
    if not f.box.is_whole_space:
        raise DomainError("the scaling map is defined on R^d only")

    def fn(eps, X):
        return f.slog(eps, _scale_factor(eps, m) * X)

    def grad(eps, X):
        c = _scale_factor(eps, m)
        return c * f.grad(eps, c * X)

    return FunctionNet(fn, f.box, f"s_{m!r}({f.label})", grad)


def unit_ball_strictly_nonzero(f: FunctionNet, m: float, grid: EpsGrid | None = None,
                               ball_samples: np.ndarray | None = None, n_search_max: int = 100,
                               tail_fraction: float = DEFAULT_TAIL_FRACTION) -> tuple[bool, int | None]:
    """Smallest integer ``N`` with ``inf_{|x|<=1} |f(eps, eps**m x)| >= eps**N`` on the tail.

    ``m`` is the signed scaling exponent; ``m = -k`` dilates the unit ball to
    radius ``eps**-k``.  The non-strict comparison allows ``LOG_TOL`` (in units of
    ``|ln eps|``) for rounding.
    """
    grid = grid or EpsGrid.default()
    B = unit_ball_samples(f.dim) if ball_samples is None else np.asarray(ball_samples, dtype=np.float64)
    need = 0.0
    for e in grid.tail(tail_fraction):
        s, l = f.checked_slog(float(e), _scale_factor(float(e), m) * B)
        if np.any(s == 0.0):
            return False, None
        need = max(need, float(np.min(l)) / math.log(e))
    n = max(0, int(math.ceil(need - LOG_TOL)))
    if n > n_search_max:
        return False, None
    return True, n


@dataclass(frozen=True)
class SweepEntry:
    dilation: int
    scale_exponent: float
    ok: bool
    N: int | None


@dataclass(frozen=True)
class InvertibilitySweep:
    entries: tuple[SweepEntry, ...]

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)


def pointwise_invertibility_sweep(f: FunctionNet, dilations: Sequence[int], grid: EpsGrid | None = None,
                                  ball_samples: np.ndarray | None = None,
                                  n_search_max: int = 100) -> InvertibilitySweep:
    """Run the unit-ball criterion for each dilation ``k`` (scale exponent ``-k``)."""
    entries = []
    for k in dilations:
        ok, n = unit_ball_strictly_nonzero(f, -k, grid, ball_samples, n_search_max)
        entries.append(SweepEntry(int(k), float(-k), ok, n))
    return InvertibilitySweep(tuple(entries))


@dataclass(frozen=True)
class ReciprocalVerdict:
    invertible: bool
    reason: str
    moderate: ModerationCertificate | None
    negligible: NegligibilityVerdict | None
    witness: tuple[float, list[float]] | None


def reciprocal_test(f: FunctionNet, grid: EpsGrid | None = None, spec: XSampleSpec | None = None,
                    n_max: int = DEFAULT_N_MAX, p_max: int = DEFAULT_P_MAX,
                    slack: float = STRUCTURAL_SLACK) -> ReciprocalVerdict:
    """Candidate inverse ``v = 1/f``: invertible iff ``v`` is moderate and ``f*v - 1`` negligible.

    On unbounded boxes the sample reach is raised to ``j_max >= n_max + 2`` so a
    reciprocal that outgrows every ``eps**-N (1+|x|)**N`` with ``N <= n_max``
    can actually be seen.
    """
    grid = grid or EpsGrid.default()
    spec = spec or XSampleSpec()
    if not f.box.is_bounded and spec.j_max < n_max + 2:
        spec = XSampleSpec(n_max + 2, spec.extra_directions, spec.layer_depth, spec.seed)
    sw = _sweep(f, grid.tail(), spec)
    for i, l in enumerate(sw.logs):
        zero = np.flatnonzero(np.isneginf(l))
        if zero.size:
            return ReciprocalVerdict(False, "exact zero", None, None, _witness(sw, i, int(zero[0])))
    inv = _Sweep(sw.eps, sw.ln_eps, [-l for l in sw.logs], sw.log1p_norm, sw.points)
    cert = _moderate_from_sweep(inv, spec, n_max, slack)
    if not cert.ok:
        return ReciprocalVerdict(False, "reciprocal not moderate", cert, None, cert.witness)
    one = (np.ones(1), np.zeros(1))
    resid_logs = []
    for e, X in zip(sw.eps, sw.points):
        s, l = f.slog(float(e), X)
        prod = slog_mul((s, l), (s, -l))
        rs, rl = slog_sub(prod, one)
        resid_logs.append(np.where(rs == 0.0, -np.inf, rl))
    resid = _Sweep(sw.eps, sw.ln_eps, resid_logs, sw.log1p_norm, sw.points)
    neg = _negligible_from_sweep(resid, p_max, n_max, slack)
    if not neg.negligible:
        return ReciprocalVerdict(False, "f*v - 1 not negligible", cert, neg, neg.witness)
    return ReciprocalVerdict(True, "invertible", cert, neg, None)


# ---------------------------------------------------------------------------
# witness search


def witness_noninvertible_point(f: FunctionNet, grid: EpsGrid | None = None, spec: XSampleSpec | None = None,
                                k_target: int = DEFAULT_M_MAX + 1) -> GeneralizedPoint | None:
    """Assemble a point ``x~`` with ``f(x~)`` not strictly non-zero, if the samples allow.

    For decreasing grid values ``eps_k`` a sample ``x_k`` with
    ``|f(eps_k, x_k)| < eps_k**k`` is chosen for ``k = 1, 2, ...``; the search
    succeeds once ``k`` reaches ``k_target``.  The point is piecewise constant:
    ``x_eps = x_k`` for ``eps_k <= eps < eps_(k-1)``.  Grid values past the last
    index keep the sample minimizing ``|f|`` when it still beats ``eps**k_target``.
    """
    grid = grid or EpsGrid.default()
    spec = spec or XSampleSpec()
    k = 1
    chosen_eps: list[float] = []
    chosen_x: list[np.ndarray] = []
    for e in grid.eps_values:
        e = float(e)
        X = spec.points(e, f.box)
        s, l = f.checked_slog(e, X)
        l = np.where(s == 0.0, -np.inf, l)
        i = int(np.argmin(l))
        ratio = l[i] / math.log(e)
        best_k = math.inf if math.isinf(ratio) else math.ceil(ratio) - 1
        if k <= k_target:
            if best_k >= k:
                chosen_eps.append(e)
                chosen_x.append(X[i].copy())
                k += 1
        elif best_k >= k_target:
            chosen_eps.append(e)
            chosen_x.append(X[i].copy())
    if k <= k_target:
        return None
    eps_k = np.asarray(chosen_eps)
    xs = np.vstack(chosen_x)
    neg_eps = -eps_k  # ascending

    def fn(eps):
        idx = np.searchsorted(neg_eps, -np.asarray(eps), side="right") - 1
        idx = np.clip(idx, 0, xs.shape[0] - 1)
        return xs[idx]

    return GeneralizedPoint.from_values(fn, f.box, grid, label=f"witness[{f.label}]")


# ---------------------------------------------------------------------------
# interior nudge


@dataclass(frozen=True)
class NudgeRow:
    eps: float
    log_abs_f_x: float
    log_abs_f_y: float
    log_gradient_term: float
    log_bound: float
    holds: bool


@dataclass(frozen=True)
class NudgeReport:
    m: int
    rows: tuple[NudgeRow, ...]
    y_positive_distance: bool
    proof_exponent: int
    certified_exponent: float
    gradient_N: int | None
    point_N: int
    signs: tuple[float, ...]
    nudged: GeneralizedPoint = field(repr=False, compare=False)

    @property
    def bound_holds(self) -> bool:
        return all(r.holds for r in self.rows)


def _nudge_signs(x: GeneralizedPoint, eps: np.ndarray) -> np.ndarray:
    """Per-eps, per-axis sign pointing away from the nearest finite endpoint (ties -> +1)."""
    n, d = eps.shape[0], x.box.dim
    signs = np.ones((n, d))
    for j in range(d):
        best = np.full(n, np.inf)
        for axis, endpoint, side in x.box.finite_endpoints():
            if axis != j:
                continue
            _, l = x.endpoint_distance_slog(eps, j, endpoint, side)
            closer = l < best
            if side < 0:
                signs[:, j] = np.where(closer, -1.0, signs[:, j])
            else:
                signs[:, j] = np.where(closer | (l == best), 1.0, signs[:, j])
            best = np.minimum(best, l)
    return signs


def interior_nudge_check(f: FunctionNet, x: GeneralizedPoint, m: int, grid: EpsGrid | None = None,
                         spec: XSampleSpec | None = None, exponent_cap: float = 64.0,
                         tail_fraction: float = DEFAULT_TAIL_FRACTION) -> NudgeReport:
    """Mean-value bound ``|f(x)| <= |f(y)| + sup|grad f| * sqrt(d) * eps**m`` at a nudged point ``y``.

    ``y = x + delta * eps**m`` coordinatewise, with ``delta`` chosen per axis to
    move away from the nearest finite endpoint.
    """
    if f.box.is_whole_space:
        raise DomainError("the nudge check needs a box with a boundary")
    if not f.box.same_as(x.box):
        raise DomainError("function and point live on different boxes")
    grid = grid or x.grid
    d = f.dim

    def offset(eps):
        s, l = x.offsets(eps)
        sg = _nudge_signs(x, eps)
        step = (sg, np.broadcast_to((m * np.log(eps))[:, None], sg.shape))
        return slog_add((s, l), step)

    all_eps = grid.eps_values
    ln_all = np.log(all_eps)
    ys, yl = offset(all_eps)
    for j, endpoint, side in x.box.finite_endpoints():
        s, l = endpoint_distance(x.anchor[j], ys[:, j], yl[:, j], endpoint, side)
        bad = np.flatnonzero((s <= 0.0) | (l < m * ln_all - LOG_TOL * np.abs(ln_all)))
        if bad.size:
            raise NudgeConstructionError(
                f"no sign keeps axis {j} at distance > eps**{m} from the boundary", float(all_eps[bad[0]]))
    y = GeneralizedPoint(offset, x.anchor, x.box, grid, f"nudge({x.label})", x.n_max)

    tail = grid.tail(tail_fraction)
    Xs, Ys = x.values(tail), y.values(tail)
    rows = []
    t = np.linspace(0.0, 1.0, SEGMENT_POINTS)
    for i, e in enumerate(tail):
        e = float(e)
        le = math.log(e)
        sx, lx = f.checked_slog(e, Xs[i:i + 1])
        sy, ly = f.checked_slog(e, Ys[i:i + 1])
        lx = -math.inf if sx[0] == 0 else float(lx[0])
        ly = -math.inf if sy[0] == 0 else float(ly[0])
        Z = Xs[i][None, :] + t[:, None] * (Ys[i] - Xs[i])[None, :]
        G = float(np.max(row_norms(f.grad(e, Z))))
        with np.errstate(divide="ignore"):
            lg = math.log(G) + 0.5 * math.log(d) + m * le if G > 0 else -math.inf
        lb = float(np.logaddexp(ly, lg))
        rows.append(NudgeRow(e, lx, ly, lg, lb, lx <= lb + LOG_TOL * abs(le)))

    certified = min(
        (exponent_cap if math.isinf(r.log_bound) else r.log_bound / math.log(r.eps)) for r in rows
    )
    certified = float(min(exponent_cap, math.floor(certified + LOG_TOL)))

    grad_net = FunctionNet(
        lambda e, X: to_slog(row_norms(f.grad(e, X))), f.box, f"|grad {f.label}|"
    )
    gcert = check_moderate(grad_net, grid, spec or XSampleSpec(j_max=2, layer_depth=4))
    n_grad = gcert.N if gcert.ok else None
    n_point = max(x.moderate_n, y.moderate_n)
    proof_exp = m - (n_grad if n_grad is not None else 0) * (2 + n_point)
    signs = tuple(float(v) for v in _nudge_signs(x, tail[-1:])[0])
    return NudgeReport(m, tuple(rows), has_positive_boundary_distance(y), int(proof_exp), certified,
                       n_grad, n_point, signs, y)
