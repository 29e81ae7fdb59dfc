"""Deterministic x-samples standing in for ``sup`` over a box or the unit ball."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gpoint import Box


def _directions(d: int, extra: int, seed: int) -> np.ndarray:
    if d == 1:
        return np.array([[1.0], [-1.0]])
    eye = np.eye(d)
    dirs = [eye, -eye, np.full((1, d), 1.0 / math.sqrt(d)), np.full((1, d), -1.0 / math.sqrt(d))]
    if extra:
        rng = np.random.default_rng(seed)
        v = rng.normal(size=(extra, d))
        dirs.append(v / np.linalg.norm(v, axis=1, keepdims=True))
    return np.vstack(dirs)


def _box_center(box: Box) -> np.ndarray:
    c = np.zeros(box.dim)
    for j in range(box.dim):
        lo, hi = box.lower[j], box.upper[j]
        if math.isfinite(lo) and math.isfinite(hi):
            c[j] = 0.5 * (lo + hi)
        elif math.isfinite(lo):
            c[j] = lo + 1.0
        elif math.isfinite(hi):
            c[j] = hi - 1.0
    return c


@dataclass(frozen=True)
class XSampleSpec:
    """Radial shells ``{0} U {2**t : t = -2..T(eps)}`` plus boundary layers.

    ``T(eps)`` is chosen so the shells reach ``|x| = eps**-j_max``; the exact
    radii ``eps**-j`` for ``j <= j_max`` are always included.  For every finite
    box endpoint, layers at distance ``2**-s`` from the face reach down to
    ``eps**layer_depth``.  Points are clipped into the box and deduplicated.
    """

    j_max: int = 6
    extra_directions: int = 2
    layer_depth: int = 25
    seed: int = 0

    def radii(self, eps: float) -> np.ndarray:
        lg = -math.log2(eps)
        top = int(math.ceil(self.j_max * lg))
        shells = 2.0 ** np.arange(-2, top + 1, dtype=np.float64)
        exact = np.exp(-np.arange(self.j_max + 1) * math.log(eps))
        return np.unique(np.concatenate([[0.0], shells, exact]))

    def points(self, eps: float, box: Box) -> np.ndarray:
        d = box.dim
        dirs = _directions(d, self.extra_directions, self.seed)
        radial = (self.radii(eps)[:, None, None] * dirs[None, :, :]).reshape(-1, d)
        lo = box.lower.copy()
        hi = box.upper.copy()
        width = hi - lo
        margin = np.where(np.isfinite(width), np.minimum(0.25, width / 4.0), 0.25)
        lo_c = np.where(np.isfinite(lo), lo + margin, -np.inf)
        hi_c = np.where(np.isfinite(hi), hi - margin, np.inf)
        pts = [np.clip(radial, lo_c, hi_c)]
        center = _box_center(box)
        pts.append(center[None, :])
        depth = int(math.ceil(self.layer_depth * -math.log2(eps))) + 1
        offsets = 2.0 ** -np.arange(1, depth + 1, dtype=np.float64)
        for j in range(d):
            for endpoint, side in ((lo[j], 1.0), (hi[j], -1.0)):
                if not math.isfinite(endpoint):
                    continue
                layer = np.repeat(center[None, :], offsets.size, axis=0)
                layer[:, j] = endpoint + side * offsets
                pts.append(layer)
        allp = np.vstack(pts)
        allp = allp[box.contains(allp)]
        return np.unique(allp, axis=0)


def unit_ball_samples(d: int, n_radii: int = 24, extra_directions: int = 2, seed: int = 0) -> np.ndarray:
    """Points covering ``|x| <= 1``: the origin, dyadic and uniform radii, ``|x| = 1``."""
    dirs = _directions(d, extra_directions, seed)
    radii = np.unique(np.concatenate([
        2.0 ** -np.arange(0, n_radii, dtype=np.float64),
        np.linspace(0.0, 1.0, n_radii + 1),
    ]))
    pts = (radii[:, None, None] * dirs[None, :, :]).reshape(-1, d)
    return np.unique(pts, axis=0)
