"""The non-invertible but pointwise-invertible net and its verification suites.

    u_eps(x) = (1 - sigma(|x|)) * g_eps(x) + sigma(|x|),
    g_eps(x) = eps ** (log_eps |x|) ** 2 = exp((ln|x|)**2 / ln eps).

``g`` is always evaluated through ``ln g = (ln|x|)**2 / ln eps``; for
``|x| >= 1`` the cutoff vanishes and ``ln u = ln g`` exactly, so values such as
``u_eps(eps**-6) = eps**36`` stay exact in log form at ``eps = 2**-40``.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from . import _kernels
from ._kernels import row_norms
from .asymptotics import DEFAULT_M_MAX, LOG_TOL, EpsGrid
from .errors import DomainError
from .gfunction import FunctionNet, evaluate_at_point, gradient_relative_error, pointwise_invertibility_sweep
from .gnumber import is_strictly_nonzero
from .gpoint import Box, sample_moderate_points
from .report import CheckRecord, VerificationReport

GRADIENT_BOUND_CONSTANT = 16.0


def _norms(x) -> np.ndarray:
    X = np.asarray(x, dtype=np.float64)
    if X.ndim <= 1:
        return np.atleast_1d(np.abs(X)) if X.ndim == 0 else row_norms(X.reshape(1, -1))
    return row_norms(X)


def _scalar_out(x, arr):
    X = np.asarray(x)
    return float(arr[0]) if X.ndim <= 1 else arr


def _check_eps(eps):
    e = np.asarray(eps, dtype=np.float64)
    if np.any((e <= 0.0) | (e >= 1.0)):
        raise DomainError("eps must lie in (0, 1)")
    return e


def sigma(r):
    """Cutoff profile: 1 on ``r <= 1/2``, 0 on ``r >= 1``, smooth and non-increasing between.

    ``phi(1-r) / (phi(1-r) + phi(r-1/2))`` with ``phi(t) = exp(-1/t)`` for ``t > 0``.
    """
    r_arr = np.asarray(r, dtype=np.float64)
    if np.any(r_arr < 0.0):
        raise DomainError("sigma is defined for r >= 0")
    out = _kernels.sigma(r_arr)
    return float(out) if r_arr.ndim == 0 else out


def log_g_eps(eps, x):
    _check_eps(eps)
    r = _norms(x)
    if np.any(r == 0.0):
        raise DomainError("g_eps is undefined at x = 0")
    return _scalar_out(x, _kernels.log_g(r, np.log(eps)))


def g_eps(eps, x):
    """``exp((ln|x|)**2 / ln eps)``; ``x`` is a vector (a scalar is read as a 1-d point)."""
    lg = log_g_eps(eps, x)
    return math.exp(lg) if isinstance(lg, float) else np.exp(lg)


def log_u_eps(eps, x):
    _check_eps(eps)
    return _scalar_out(x, _kernels.log_u(_norms(x), np.log(eps)))


def u_eps(eps, x):
    _check_eps(eps)
    return _scalar_out(x, _kernels.u_values(_norms(x), np.log(eps)))


def u1_eps(eps, x1):
    """Half-space profile ``(1 - sigma(x1)) eps**(log_eps x1)**2 + sigma(x1)``."""
    _check_eps(eps)
    r = np.atleast_1d(np.asarray(x1, dtype=np.float64))
    out = _kernels.u_values(r, np.log(eps))
    return float(out[0]) if np.ndim(x1) == 0 else out


def grad_g_eps(eps, x):
    """``2 g x_i ln|x| / (|x|**2 ln eps)``, valid for ``|x| >= 1/2``."""
    _check_eps(eps)
    X = np.asarray(x, dtype=np.float64)
    single = X.ndim <= 1
    X2 = np.atleast_2d(X) if X.ndim == 1 else (X.reshape(1, 1) if X.ndim == 0 else X)
    if np.any(row_norms(X2) < 0.5):
        raise DomainError("grad_g_eps is derived for |x| >= 1/2")
    out = _kernels.grad_g(X2, math.log(eps))
    return out[0] if single else out


def counterexample_net(d: int = 1) -> FunctionNet:
    """``u`` on ``R^d`` with its analytic gradient."""
    def slog_fn(eps, X):
        r = row_norms(X)
        return np.ones(r.shape), _kernels.log_u(r, math.log(eps))

    def grad(eps, X):
        return _kernels.grad_u(X, math.log(eps))

    return FunctionNet(slog_fn, Box.whole(d), "u", grad)


def g_net(d: int = 1) -> FunctionNet:
    """``g`` alone on ``R^d`` (undefined at the origin)."""
    def slog_fn(eps, X):
        r = row_norms(X)
        return np.ones(r.shape), _kernels.log_g(r, math.log(eps))

    def grad(eps, X):
        return _kernels.grad_g(X, math.log(eps))

    return FunctionNet(slog_fn, Box.whole(d), "g", grad)


def half_space_net(d: int = 1) -> FunctionNet:
    """``u(x) = u1(x_1)`` on ``(0, inf) x R^(d-1)``."""
    def slog_fn(eps, X):
        r = np.ascontiguousarray(X[:, 0])
        return np.ones(r.shape), _kernels.log_u(r, math.log(eps))

    def grad(eps, X):
        out = np.zeros_like(X)
        out[:, :1] = _kernels.grad_u(np.ascontiguousarray(X[:, :1]), math.log(eps))
        return out

    return FunctionNet(slog_fn, Box.half_space(d), "u1", grad)


# ---------------------------------------------------------------------------
# verification suites


def _grid(grid):
    return grid or EpsGrid.default()


def _below_one(grid: EpsGrid) -> np.ndarray:
    e = grid.eps_values
    return e[e < 1.0]


def verify_estimate_61(grid: EpsGrid | None = None, j_max: int = 6, shells_per_decade: int = 16,
                       d: int = 1, seed: int = 0) -> VerificationReport:
    """``(j+1)**2 ln eps < ln u(x) <= j**2 ln eps`` for ``eps**-j <= |x| < eps**-(j+1)``.

    ``shells_per_decade`` log-spaced radii are taken in every shell.  Margins
    are reported in units of ``|ln eps|``.  The upper bound is non-strict and
    allows ``LOG_TOL`` for rounding; at the shell left edges it must be tight
    to within ``LOG_TOL``.
    """
    grid = _grid(grid)
    eps = _below_one(grid)
    rng = np.random.default_rng(seed)
    rep = VerificationReport("estimate_61", {"j_max": j_max, "shells_per_decade": shells_per_decade, "dim": d})
    frac = np.arange(shells_per_decade) / shells_per_decade
    max_edge_gap = 0.0
    for j in range(j_max + 1):
        t = j + frac  # exponents in [j, j+1)
        E = eps[:, None]
        r = np.power(E, -t[None, :])
        if d > 1:
            v = rng.normal(size=(r.size, d))
            v /= np.linalg.norm(v, axis=1, keepdims=True)
            r = row_norms(v * r.reshape(-1, 1)).reshape(r.shape)
        ln_e = np.broadcast_to(np.log(E), r.shape)
        lu = _kernels.log_u(r, ln_e)
        scale = np.abs(ln_e)
        lower = (lu - (j + 1) ** 2 * ln_e) / scale
        upper = (j * j * ln_e - lu) / scale
        edge_gap = float(np.max(np.abs(upper[:, 0])))
        max_edge_gap = max(max_edge_gap, edge_gap)
        ok = bool(np.all(lower > 0.0) and np.all(upper >= -LOG_TOL))
        i, k = np.unravel_index(int(np.argmin(lower)), lower.shape)
        rep.add(CheckRecord(
            f"estimate_61/j={j}", ok, True, float(lower.min()),
            None if ok else {"eps": float(eps[i]), "x": [float(r[i, k])]},
            {"worst_upper_margin": float(upper.min()), "left_edge_gap": edge_gap, "samples": int(r.size)},
        ))
    rep.add(CheckRecord("estimate_61/upper_tight_at_left_edges", max_edge_gap <= LOG_TOL, True, max_edge_gap))
    return rep


def verify_estimate_62(grid: EpsGrid | None = None, mesh: int = 1000, d: int = 1,
                       seed: int = 0) -> VerificationReport:
    """``u_eps(x) == 1`` bit-exactly on ``|x| <= 1/2``."""
    grid = _grid(grid)
    rng = np.random.default_rng(seed)
    dirs = rng.normal(size=(mesh, d))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    radii = rng.uniform(0.0, 0.5, size=mesh)
    radii[:3] = [0.0, 0.5, 0.25]
    X = dirs * radii[:, None]
    r = np.minimum(row_norms(X), 0.5)
    worst = 0.0
    for e in grid.eps_values:
        vals = _kernels.u_values(r, np.full(r.shape, math.log(e)) if e < 1 else np.full(r.shape, -1.0))
        worst = max(worst, float(np.max(np.abs(vals - 1.0))))
    ok = worst == 0.0
    rep = VerificationReport("estimate_62", {"mesh": mesh, "dim": d})
    rep.add(CheckRecord("estimate_62/u_equals_one", ok, True, worst,
                        detail={"points": int(mesh), "eps_values": len(grid)}))
    return rep


def verify_band_63(grid: EpsGrid | None = None, mesh: int = 1000, j_max: int = 6) -> VerificationReport:
    """Attained range of ``g`` and ``u`` on ``1/2 <= |x| <= 1`` for ``eps < 1/2``.

    Asserts ``1/2 + 1e-12 < g <= 1`` and ``1/2 < u <= 1`` there, records whether
    the printed band ``1 <= g < 2`` holds (it does not; only ``|x| = 1`` reaches
    ``g = 1``), and asserts ``0 < u < 3`` over a radial sweep out to ``eps**-j_max``.
    """
    grid = _grid(grid)
    eps = grid.eps_values[grid.eps_values < 0.5]
    r = np.linspace(0.5, 1.0, mesh)
    E = eps[:, None]
    ln_e = np.broadcast_to(np.log(E), (eps.size, mesh))
    R = np.broadcast_to(r[None, :], ln_e.shape)
    g = np.exp(_kernels.log_g(R, ln_e))
    u = _kernels.u_values(R, ln_e)
    rep = VerificationReport("band_63", {"mesh": mesh, "j_max": j_max})
    g_ok = bool(np.all(g > 0.5 + 1e-12) and np.all(g <= 1.0))
    rep.add(CheckRecord("band_63/g_in_(1/2,1]", g_ok, True, float(g.min() - 0.5),
                        detail={"g_min": float(g.min()), "g_max": float(g.max())}))
    u_ok = bool(np.all(u > 0.5) and np.all(u <= 1.0))
    rep.add(CheckRecord("band_63/u_in_(1/2,1]", u_ok, True, float(u.min() - 0.5),
                        detail={"u_min": float(u.min()), "u_max": float(u.max())}))
    printed = (g >= 1.0) & (g < 2.0)
    rep.add(CheckRecord("band_63/printed_band_1<=g<2", bool(np.all(printed)), False, None,
                        detail={"fraction_satisfied": float(np.mean(printed)),
                                "note": "printed band not attained; g <= 1 on the band with equality only at |x| = 1"}))
    # used consequence: 0 < u < 3 on a radial sweep covering the cutoff region and the shells
    rs = np.concatenate([np.linspace(0.0, 1.0, mesh), np.geomspace(1.0, 2.0 ** 240, mesh)])
    worst_hi, all_pos = -math.inf, True
    for e in eps:
        t = np.minimum(rs, np.power(e, -float(j_max)))
        lu = _kernels.log_u(t, np.full(t.shape, math.log(e)))
        all_pos &= bool(np.all(np.isfinite(lu)))
        worst_hi = max(worst_hi, float(np.max(lu)))
    used_ok = all_pos and worst_hi < math.log(3.0)
    rep.add(CheckRecord("band_63/used_consequence_0<u<3", used_ok, True, worst_hi - math.log(3.0),
                        detail={"max_log_u": worst_hi}))
    return rep


def verify_point_identity(grid: EpsGrid | None = None, j_max: int = 6) -> VerificationReport:
    """``ln u_eps(eps**-j) = j**2 ln eps`` to relative ``1e-12`` (absolute at ``j = 0``)."""
    grid = _grid(grid)
    eps = _below_one(grid)
    rep = VerificationReport("point_identity", {"j_max": j_max})
    worst = 0.0
    for j in range(j_max + 1):
        r = np.power(eps, -float(j))
        lu = _kernels.log_u(r, np.log(eps))
        target = j * j * np.log(eps)
        err = np.abs(lu - target) / np.where(target == 0.0, 1.0, np.abs(target))
        worst = max(worst, float(err.max()))
    rep.add(CheckRecord("point_identity/u(eps^-j)=eps^(j^2)", worst < 1e-12, True, worst))
    return rep


def noninvertibility_exponent(N: int) -> tuple[int, int]:
    """``j = 3N+1`` and the exponent ``j**2 - N(1+2j)`` of the product bound."""
    j = 3 * N + 1
    return j, j * j - N * (1 + 2 * j)


def verify_noninvertibility(N_list: Sequence[int] = range(6), grid: EpsGrid | None = None) -> VerificationReport:
    """For each ``N``: the exponent identity at ``j = 3N+1`` and the divergence of
    ``v_eps(eps**-j) / (eps**-N (1+eps**-j)**N)`` with ``v = 1/u`` on the grid tail."""
    grid = _grid(grid)
    tail = grid.tail()
    rep = VerificationReport("noninvertibility", {"N_list": list(N_list)})
    ln_e = np.log(tail)
    for N in N_list:
        j, expo = noninvertibility_exponent(N)
        identity = expo == 3 * N * N + 3 * N + 1 and expo >= 1
        x = np.power(tail, -float(j))
        log_v = -_kernels.log_u(x, ln_e)
        v_exact = bool(np.all(np.abs(log_v + j * j * ln_e) <= 1e-12 * j * j * np.abs(ln_e)))
        log_bound = -N * ln_e + N * np.log1p(x)
        excess = log_v - log_bound
        diverging = bool(np.all(excess > 0.0) and np.all(np.diff(excess) > 0.0))
        ok = identity and v_exact and diverging
        rep.add(CheckRecord(
            f"noninvertibility/N={N}", ok, True, float(np.min(excess / np.abs(ln_e))),
            None if ok else {"eps": float(tail[int(np.argmin(excess))]), "x": [float(x[int(np.argmin(excess))])]},
            {"j": j, "product_exponent": expo, "identity": identity, "v_equals_eps^-j^2": v_exact,
             "log_excess_first": float(excess[0]), "log_excess_last": float(excess[-1])},
        ))
    return rep


def expected_unit_ball_exponent(m: int) -> int:
    """Smallest integer ``N`` with ``inf_{|x| <= eps**-m} u_eps(x) >= eps**N``.

    For ``m >= 1`` the worst point is the rim ``|x| = eps**-m`` where
    ``u = eps**(m*m)``.  For ``m = 0`` the infimum is attained on
    ``1/2 <= |x| <= 1`` where ``u < 1``, so ``N = 0`` never holds and ``N = 1`` is
    the first integer that does.
    """
    return max(m * m, 1)


def verify_pointwise_invertibility(grid: EpsGrid | None = None, m_max: int = 5, d: int = 1,
                                   count: int = 64, seed: int = 0,
                                   strict_m_max: int = DEFAULT_M_MAX) -> VerificationReport:
    """Unit-ball criterion for dilations ``0..m_max`` (expect ``N = m**2``) and strict
    non-zeroness of ``u`` at a seeded family of moderate points, scanning exponents
    up to ``strict_m_max``."""
    dilation_max, m_max = m_max, strict_m_max
    grid = _grid(grid)
    u = counterexample_net(d)
    rep = VerificationReport("pointwise_invertibility", {"dilation_max": dilation_max, "dim": d,
                                                         "points": count, "seed": seed, "m_max": m_max})
    sweep = pointwise_invertibility_sweep(u, range(dilation_max + 1), grid)
    for e in sweep.entries:
        expected = expected_unit_ball_exponent(e.dilation)
        rep.add(CheckRecord(f"unit_ball/dilation={e.dilation}", e.ok and e.N == expected, True, None,
                            detail={"N": e.N, "expected_N": expected, "m_squared": e.dilation ** 2}))
    points = sample_moderate_points(u.box, grid, count, seed, include_huggers=False)
    failures = []
    ms = []
    for p in points:
        ok, m = is_strictly_nonzero(evaluate_at_point(u, p), m_max)
        ms.append(m)
        if not ok:
            failures.append(p.label)
    rep.add(CheckRecord("moderate_points/strictly_nonzero", not failures, True, None,
                        detail={"points": len(points), "failures": failures,
                                "max_m": max((m for m in ms if m is not None), default=None)}))
    return rep


def verify_gradient(samples: int = 10_000, d: int = 2, seed: int = 0, rtol: float = 1e-5,
                    min_exp: float = 40.0) -> VerificationReport:
    """``grad_g_eps`` against central differences on ``1/2 <= |x| <= eps**-3`` and the
    moderate bound ``|d_i g| < 16 (1+|x|)**2 eps**-2``."""
    rng = np.random.default_rng(seed)
    f = g_net(d)
    eps_all = 2.0 ** -rng.uniform(1.0, min_exp, size=samples)
    worst_err, worst_bound = 0.0, -math.inf
    for e in np.unique(eps_all):
        n = int(np.sum(eps_all == e))
        top = -3.0 * math.log(e)
        radius = np.exp(rng.uniform(math.log(0.5), top, size=n))
        v = rng.normal(size=(n, d))
        X = v / np.linalg.norm(v, axis=1, keepdims=True) * radius[:, None]
        X = X[row_norms(X) >= 0.5]
        err = gradient_relative_error(f, float(e), X)
        worst_err = max(worst_err, float(err.max()))
        grad = _kernels.grad_g(X, math.log(e))
        with np.errstate(divide="ignore"):
            lhs = np.log(np.abs(grad))
        bound = math.log(GRADIENT_BOUND_CONSTANT) + 2 * np.log1p(row_norms(X)) - 2 * math.log(e)
        worst_bound = max(worst_bound, float(np.max(lhs - bound[:, None])))
    rep = VerificationReport("gradient", {"samples": samples, "dim": d, "seed": seed})
    rep.add(CheckRecord("gradient/finite_differences", worst_err < rtol, True, worst_err))
    rep.add(CheckRecord("gradient/moderate_bound_16(1+|x|)^2/eps^2", worst_bound < 0.0, True, worst_bound))
    return rep
