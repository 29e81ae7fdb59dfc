import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from taunets.asymptotics import ScalarNet
from taunets.errors import DomainError, ModerationError
from taunets.gnumber import GeneralizedNumber, eq_in_rtilde, is_strictly_positive
from taunets.gpoint import (
    Box,
    GeneralizedPoint,
    as_point_array,
    distance_to_boundary,
    equivalent,
    has_positive_boundary_distance,
    sample_moderate_points,
)

UNIT1 = Box.unit(1)
UNIT2 = Box.unit(2)


def half_plus(net, box=UNIT1):
    return GeneralizedPoint.from_nets([net], box, anchor=[0.5])


def boundary_examples():
    const = GeneralizedPoint.constant([0.5, 0.5], UNIT2)
    hug = GeneralizedPoint.from_nets([ScalarNet.constant(0.0), ScalarNet.power(1.0)], UNIT2, anchor=[0.5, 0.0])
    hug_exp = GeneralizedPoint.from_nets([ScalarNet.constant(0.0), ScalarNet.exp_decay()], UNIT2, anchor=[0.5, 0.0])
    return const, hug, hug_exp


class TestBox:
    def test_constructors(self):
        assert Box.whole(3).is_whole_space and not Box.whole(3).is_bounded
        assert UNIT2.is_bounded and UNIT2.dim == 2
        hs = Box.half_space(2)
        assert list(hs.finite_endpoints()) == [(0, 0.0, 1)]

    @pytest.mark.parametrize("lo,hi", [([1.0], [0.0]), ([0.0], [0.0]), ([np.inf], [np.inf]), ([0, 0], [1])])
    def test_invalid(self, lo, hi):
        with pytest.raises(DomainError):
            Box(np.array(lo, dtype=float), np.array(hi, dtype=float))

    def test_contains_is_strict(self):
        assert list(UNIT1.contains(np.array([[0.0], [0.5], [1.0]]))) == [False, True, False]

    def test_to_dict(self):
        assert Box.half_space(1).to_dict() == {"lower": [0.0], "upper": ["inf"]}


def test_as_point_array_shapes():
    assert as_point_array([1.0, np.arange(3.0)], 3, 2).shape == (3, 2)
    assert as_point_array(np.arange(3.0), 3, 1).shape == (3, 1)
    with pytest.raises(DomainError):
        as_point_array([1.0], 3, 2)


class TestConstruction:
    def test_containment_is_enforced(self):
        with pytest.raises(DomainError):
            GeneralizedPoint.constant([1.5], UNIT1)
        with pytest.raises(DomainError):
            half_plus(ScalarNet.constant(0.5))  # lands on the boundary

    def test_moderateness_is_enforced(self):
        with pytest.raises(ModerationError):
            GeneralizedPoint.from_values(lambda e: e ** -17.0, Box.whole(1))
        big = ScalarNet(lambda e: (np.ones(e.shape), 1.0 / e), "exp(1/eps)")
        with pytest.raises(ModerationError):
            GeneralizedPoint.from_nets([big], Box.whole(1))

    def test_exp_hugger_stays_inside(self, grid):
        x = boundary_examples()[2]
        s, l = x.endpoint_distance_slog(grid.eps_values, 1, 0.0, 1)
        assert np.all(s > 0)
        assert np.allclose(l, -1 / grid.eps_values)


class TestEquivalence:
    def test_examples(self):
        x = GeneralizedPoint.constant([0.5], UNIT1)
        assert equivalent(x, half_plus(ScalarNet.exp_decay()))
        assert not equivalent(x, half_plus(ScalarNet.power(1.0, 0.25)))
        assert equivalent(x, x)

    def test_different_boxes(self):
        with pytest.raises(DomainError):
            equivalent(GeneralizedPoint.constant([0.5], UNIT1), GeneralizedPoint.constant([0.5], Box.whole(1)))

    @given(st.lists(st.tuples(st.sampled_from(["const", "pow", "exp"]), st.floats(0.01, 0.2)), min_size=3, max_size=3))
    def test_equivalence_relation(self, specs):
        def make(kind, c):
            if kind == "const":
                return half_plus(ScalarNet.constant(c))
            if kind == "pow":
                return half_plus(ScalarNet.power(1.0, c))
            return half_plus(ScalarNet.constant(c) + ScalarNet.exp_decay())

        x, y, z = (make(*s) for s in specs)
        assert equivalent(x, x)
        assert equivalent(x, y) == equivalent(y, x)
        if equivalent(x, y) and equivalent(y, z):
            assert equivalent(x, z)


class TestBoundaryDistance:
    def test_examples(self, grid):
        const, hug, hug_exp = boundary_examples()
        e = grid.eps_values
        assert np.allclose(distance_to_boundary(const).rep.values(e), 0.5, rtol=1e-15)
        d = distance_to_boundary(hug)
        assert np.allclose(d.rep.values(e), e, rtol=1e-14)
        assert is_strictly_positive(d)[0]
        assert not is_strictly_positive(distance_to_boundary(hug_exp))[0]
        assert [has_positive_boundary_distance(p) for p in (const, hug, hug_exp)] == [True, True, False]

    def test_whole_space(self):
        with pytest.raises(DomainError):
            distance_to_boundary(GeneralizedPoint.constant([0.0], Box.whole(1)))

    def test_unbounded_axes_do_not_contribute(self, grid):
        x = GeneralizedPoint.constant([2.0, 100.0], Box.half_space(2))
        assert np.allclose(distance_to_boundary(x).rep.values(grid.eps_values), 2.0)

    @given(st.floats(0.05, 0.95), st.floats(0.05, 0.95), st.integers(0, 2 ** 32 - 1))
    def test_constant_points_have_positive_distance(self, a, b, seed):
        x = GeneralizedPoint.constant([a, b], UNIT2)
        assert has_positive_boundary_distance(x)
        rng = np.random.default_rng(seed)
        # representative independence of the distance
        def bump():
            return ScalarNet.exp_decay(rng.uniform(0.25, 2.0), rng.uniform(-0.04, 0.04))

        y = GeneralizedPoint.from_nets([bump(), bump()], UNIT2,
                                       anchor=[a, b])
        assert eq_in_rtilde(distance_to_boundary(x), distance_to_boundary(y))


class TestSampling:
    @pytest.mark.parametrize("box", [Box.whole(1), Box.whole(2), UNIT2, Box.half_space(2)])
    def test_points_are_valid_and_deterministic(self, box, grid):
        a = sample_moderate_points(box, grid, 24, seed=3)
        b = sample_moderate_points(box, grid, 24, seed=3)
        assert len(a) == 24
        for p, q in zip(a, b):
            assert p.label == q.label
            assert np.array_equal(p.values(grid.eps_values), q.values(grid.eps_values))
            assert p.moderate_n <= 16

    def test_kinds(self, grid):
        labels = {p.label.split("#")[0] for p in sample_moderate_points(Box.whole(1), grid, 10)}
        assert labels == {"constant", "escape", "witness"}
        labels = {p.label.split("#")[0] for p in sample_moderate_points(UNIT2, grid, 10)}
        assert labels == {"constant", "escape", "hug_power", "hug_exp"}
        labels = {p.label.split("#")[0] for p in sample_moderate_points(UNIT2, grid, 10, include_huggers=False)}
        assert labels == {"constant", "escape"}

    def test_exp_huggers_are_not_strictly_positive(self, grid):
        for p in sample_moderate_points(UNIT2, grid, 16, seed=1):
            if p.label.startswith("hug_exp"):
                assert not has_positive_boundary_distance(p)
            elif p.label.startswith(("constant", "hug_power")):
                assert has_positive_boundary_distance(p)


def test_generalized_number_of_distance_is_moderate():
    const = boundary_examples()[0]
    assert isinstance(distance_to_boundary(const), GeneralizedNumber)
    assert math.isclose(float(distance_to_boundary(const).rep(0.25)), 0.5)
