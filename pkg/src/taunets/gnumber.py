"""Generalized numbers: moderate scalar nets modulo negligible ones."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .asymptotics import (
    DEFAULT_M_MAX,
    DEFAULT_N_MAX,
    DEFAULT_P_MAX,
    DEFAULT_TAIL_FRACTION,
    EpsGrid,
    OrderEstimate,
    ScalarNet,
    estimate_order,
    is_negligible,
    moderate_exponent,
    slog_min,
)
from .errors import DomainError, ModerationError

DEFAULT_PERTURBATIONS = 32


@dataclass(frozen=True, eq=False)
class GeneralizedNumber:
    """A moderate representative, certified on ``grid``.

    Construction fails with :class:`ModerationError` when no ``N <= n_max``
    bounds the representative by ``eps**-N`` on the grid tail.
    """

    rep: ScalarNet
    grid: EpsGrid = None
    n_max: int = DEFAULT_N_MAX
    moderate_n: int = None
    moderate_cert: OrderEstimate = None

    def __post_init__(self):
        if self.grid is None:
            object.__setattr__(self, "grid", EpsGrid.default())
        n = moderate_exponent(self.rep, self.grid, self.n_max)
        if n is None:
            raise ModerationError(f"{self.rep.label} is not moderate with N <= {self.n_max}")
        object.__setattr__(self, "moderate_n", n)
        object.__setattr__(self, "moderate_cert", estimate_order(self.rep, self.grid.tail()))

    @classmethod
    def of(cls, net, grid: EpsGrid | None = None) -> "GeneralizedNumber":
        """Wrap a ScalarNet, a plain float, or a vectorized value function."""
        if isinstance(net, GeneralizedNumber):
            return net
        if isinstance(net, ScalarNet):
            return cls(net, grid)
        if callable(net):
            return cls(ScalarNet.from_values(net), grid)
        return cls(ScalarNet.constant(float(net)), grid)

    def _wrap(self, rep: ScalarNet) -> "GeneralizedNumber":
        return GeneralizedNumber(rep, self.grid, self.n_max)

    def __add__(self, other):
        return self._wrap(self.rep + GeneralizedNumber.of(other, self.grid).rep)

    __radd__ = __add__

    def __sub__(self, other):
        return self._wrap(self.rep - GeneralizedNumber.of(other, self.grid).rep)

    def __rsub__(self, other):
        return GeneralizedNumber.of(other, self.grid) - self

    def __mul__(self, other):
        return self._wrap(self.rep * GeneralizedNumber.of(other, self.grid).rep)

    __rmul__ = __mul__

    def __neg__(self):
        return self._wrap(-self.rep)

    def slog(self, eps=None):
        return self.rep.slog(self.grid.eps_values if eps is None else eps)

    def __repr__(self):
        return f"GeneralizedNumber({self.rep.label}, N={self.moderate_n})"


def add(a: GeneralizedNumber, b: GeneralizedNumber) -> GeneralizedNumber:
    return a + b


def mul(a: GeneralizedNumber, b: GeneralizedNumber) -> GeneralizedNumber:
    return a * b


def neg(a: GeneralizedNumber) -> GeneralizedNumber:
    return -a


def eq_in_rtilde(a: GeneralizedNumber, b: GeneralizedNumber, p_max: int = DEFAULT_P_MAX) -> bool:
    """Equality in R~: the difference of representatives is negligible up to ``p_max``."""
    if p_max < 1:
        raise DomainError("p_max must be at least 1")
    return is_negligible(a.rep - b.rep, a.grid, p_max)


def random_negligible_net(rng: np.random.Generator) -> ScalarNet:
    """A random net that is O(eps**p) for every p (exp(-a/eps) family)."""
    kind = rng.integers(3)
    coef = float(rng.uniform(-2.0, 2.0))
    a = float(rng.uniform(0.25, 2.0))
    if kind == 0:
        return ScalarNet.exp_decay(a, coef)
    if kind == 1:
        return ScalarNet.exp_decay(a, coef, power=float(rng.uniform(-6.0, 6.0)))
    b = float(rng.uniform(0.5, 1.0))
    lc = math.log(abs(coef)) if coef else -math.inf
    sgn = float(np.sign(coef))
    return ScalarNet(
        lambda eps: (np.full(eps.shape, sgn), lc - a / eps ** b),
        f"{coef!r}*exp(-{a!r}/eps^{b!r})",
    )


def _representatives(a: GeneralizedNumber, perturbations: int, seed: int):
    yield a.rep
    rng = np.random.default_rng(seed)
    for _ in range(perturbations):
        yield a.rep + random_negligible_net(rng)


def _smallest_exponent(a: GeneralizedNumber, m_max: int, signed: bool, strict: bool,
                       perturbations: int, seed: int,
                       tail_fraction: float = DEFAULT_TAIL_FRACTION) -> int | None:
    eps = a.grid.tail(tail_fraction)
    ln_eps = np.log(eps)
    worst = None
    for rep in _representatives(a, perturbations, seed):
        s, l = rep.slog(eps)
        if signed and np.any(s <= 0.0):
            return None
        if np.any(s == 0.0):
            return None
        # smallest integer m with l > m*ln_eps (strict) or l >= m*ln_eps at every tail point
        found = None
        for m in range(0, m_max + 1):
            ok = l > m * ln_eps if strict else l >= m * ln_eps
            if np.all(ok):
                found = m
                break
        if found is None:
            return None
        worst = found if worst is None else max(worst, found)
    return worst


def is_strictly_nonzero(a: GeneralizedNumber, m_max: int = DEFAULT_M_MAX,
                        perturbations: int = DEFAULT_PERTURBATIONS, seed: int = 0) -> tuple[bool, int | None]:
    """``|x_eps| > eps**m`` on the tail for the smallest such integer ``m <= m_max``.

    The check runs on the given representative and on ``perturbations`` random
    negligible perturbations of it; the reported ``m`` is the largest needed.
    """
    if m_max < 0:
        raise DomainError("m_max must be non-negative")
    m = _smallest_exponent(a, m_max, signed=False, strict=True, perturbations=perturbations, seed=seed)
    return m is not None, m


def is_strictly_positive(a: GeneralizedNumber, m_max: int = DEFAULT_M_MAX,
                         perturbations: int = DEFAULT_PERTURBATIONS, seed: int = 0) -> tuple[bool, int | None]:
    """Signed variant of :func:`is_strictly_nonzero`: ``x_eps > eps**m``."""
    if m_max < 0:
        raise DomainError("m_max must be non-negative")
    m = _smallest_exponent(a, m_max, signed=True, strict=True, perturbations=perturbations, seed=seed)
    return m is not None, m


def inf_min(numbers: Sequence[GeneralizedNumber]) -> GeneralizedNumber:
    """Pointwise-in-eps minimum of the representatives."""
    if not numbers:
        raise DomainError("inf_min needs at least one generalized number")
    if len(numbers) == 1:
        return numbers[0]
    reps = [n.rep for n in numbers]

    def fn(eps):
        acc = reps[0].slog(eps)
        for r in reps[1:]:
            acc = slog_min(acc, r.slog(eps))
        return acc

    label = "min(" + ", ".join(r.label for r in reps) + ")"
    first = numbers[0]
    return GeneralizedNumber(ScalarNet(fn, label), first.grid, first.n_max)


def strict_less(a: GeneralizedNumber, b: GeneralizedNumber, m_max: int = DEFAULT_M_MAX,
                perturbations: int = DEFAULT_PERTURBATIONS, seed: int = 0) -> bool:
    """``b_eps - a_eps >= eps**m`` for some ``m <= m_max`` on the tail."""
    diff = b - a
    m = _smallest_exponent(diff, m_max, signed=True, strict=False, perturbations=perturbations, seed=seed)
    return m is not None
