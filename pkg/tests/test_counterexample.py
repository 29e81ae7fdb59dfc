import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from taunets.counterexample import (
    counterexample_net,
    expected_unit_ball_exponent,
    g_eps,
    grad_g_eps,
    half_space_net,
    log_u_eps,
    noninvertibility_exponent,
    sigma,
    u1_eps,
    u_eps,
    verify_band_63,
    verify_estimate_61,
    verify_estimate_62,
    verify_gradient,
    verify_noninvertibility,
    verify_point_identity,
    verify_pointwise_invertibility,
)
from taunets.errors import DomainError
from taunets.gfunction import evaluate_at_point, reciprocal_test
from taunets.gnumber import is_strictly_nonzero
from taunets.gpoint import Box, GeneralizedPoint


class TestSigma:
    @pytest.mark.parametrize("r, want", [(0.0, 1.0), (0.25, 1.0), (0.5, 1.0), (1.0, 0.0), (2.0, 0.0)])
    def test_support(self, r, want):
        assert sigma(r) == want

    def test_transition(self):
        r = np.linspace(0.5, 1.0, 10_001)
        s = sigma(r)
        assert 0.0 < sigma(0.75) < 1.0
        assert np.all(np.diff(s) <= 0.0)
        assert sigma(0.75) == pytest.approx(0.5)  # the partition is symmetric about 3/4

    def test_negative_radius(self):
        with pytest.raises(DomainError):
            sigma(-0.1)

    def test_scalar_in_scalar_out(self):
        assert isinstance(sigma(0.6), float)


class TestG:
    def test_examples(self):
        assert g_eps(0.1, [10.0]) == pytest.approx(0.1, rel=1e-14)
        assert g_eps(0.37, [1.0]) == 1.0
        assert g_eps(0.25, [0.5]) == pytest.approx(2 ** -0.5, rel=1e-14)

    def test_vector_argument_uses_norm(self):
        assert g_eps(0.1, [6.0, 8.0]) == pytest.approx(0.1, rel=1e-14)

    def test_domain(self):
        with pytest.raises(DomainError):
            g_eps(0.1, [0.0])
        with pytest.raises(DomainError):
            g_eps(1.5, [2.0])

    def test_gradient_vanishes_on_unit_sphere(self):
        np.testing.assert_array_equal(grad_g_eps(0.1, [0.6, 0.8]), 0.0)

    def test_gradient_needs_band(self):
        with pytest.raises(DomainError):
            grad_g_eps(0.1, [0.2])


class TestU:
    @given(e=st.floats(1e-12, 0.99), r=st.floats(0.0, 0.5))
    def test_one_inside_half_ball(self, e, r):
        assert u_eps(e, [r]) == 1.0

    @pytest.mark.parametrize("j", range(7))
    def test_escape_identity(self, j):
        e = 2.0 ** -10
        assert log_u_eps(e, [e ** -j]) == pytest.approx(j * j * math.log(e), rel=1e-12, abs=1e-15)

    def test_positive_far_out(self):
        assert log_u_eps(2.0 ** -40, [1e300]) > -math.inf

    def test_half_space_depends_on_first_coordinate(self, rng):
        f = half_space_net(3)
        for e in (0.3, 2.0 ** -20):
            x1 = np.abs(rng.normal(size=20)) * 10 + 1e-3
            A = np.column_stack([x1, rng.normal(size=(20, 2)) * 1e6])
            B = np.column_stack([x1, rng.normal(size=(20, 2))])
            np.testing.assert_array_equal(f.slog(e, A), f.slog(e, B))

    def test_half_space_example(self):
        e = 2.0 ** -8
        f = half_space_net(2)
        assert f(e, [e ** -2, 123.0]) == pytest.approx(e ** 4, rel=1e-12)
        assert u1_eps(e, e ** -2) == pytest.approx(e ** 4, rel=1e-12)

    def test_net_matches_pointwise(self, rng):
        u = counterexample_net(2)
        X = rng.normal(size=(30, 2)) * 50
        want = np.array([u_eps(0.01, x) for x in X])
        np.testing.assert_allclose(u.values(0.01, X), want, rtol=1e-14)


class TestSuites:
    def test_estimate_61(self, grid):
        rep = verify_estimate_61(grid)
        assert rep.overall
        assert all(c.worst_margin > 0 for c in rep.checks if c.identifier.startswith("estimate_61/j="))

    def test_estimate_61_two_dimensional(self, grid):
        assert verify_estimate_61(grid, j_max=3, d=2).overall

    def test_estimate_62(self, grid):
        rep = verify_estimate_62(grid, d=3)
        assert rep.overall and rep["estimate_62/u_equals_one"].worst_margin == 0.0

    def test_band_63(self, grid):
        rep = verify_band_63(grid)
        assert rep.overall
        printed = rep["band_63/printed_band_1<=g<2"]
        assert printed.observed is False and printed.expected is False
        d = rep["band_63/g_in_(1/2,1]"].detail
        assert d["g_max"] == 1.0 and d["g_min"] > 0.5 + 1e-12

    def test_point_identity(self, grid):
        assert verify_point_identity(grid).overall

    @pytest.mark.parametrize("N, j, expo", [(0, 1, 1), (1, 4, 7), (2, 7, 19), (5, 16, 91)])
    def test_noninvertibility_exponent(self, N, j, expo):
        assert noninvertibility_exponent(N) == (j, expo)
        assert expo == 3 * N * N + 3 * N + 1

    def test_noninvertibility(self, grid):
        rep = verify_noninvertibility(range(6), grid)
        assert rep.overall and len(rep.checks) == 6

    def test_pointwise_invertibility(self, grid):
        rep = verify_pointwise_invertibility(grid, m_max=5)
        assert rep.overall
        assert rep["unit_ball/dilation=3"].detail["N"] == 9

    def test_gradient(self):
        rep = verify_gradient(samples=2000)
        assert rep.overall


@pytest.mark.parametrize("m, N", [(0, 1), (1, 1), (2, 4), (3, 9), (5, 25)])
def test_unit_ball_oracle(m, N):
    assert expected_unit_ball_exponent(m) == N


def test_value_at_origin_is_one(grid):
    val = evaluate_at_point(counterexample_net(1), GeneralizedPoint.constant([0.0], Box.whole(1)))
    assert is_strictly_nonzero(val) == (True, 1)


def test_value_at_escape_point(grid):
    x = GeneralizedPoint.from_values(lambda e: (np.asarray(e) ** -4.0)[:, None], Box.whole(1))
    val = evaluate_at_point(counterexample_net(1), x)
    assert is_strictly_nonzero(val) == (True, 17)


def test_pointwise_but_not_globally_invertible(grid):
    assert verify_pointwise_invertibility(grid).overall
    r = reciprocal_test(counterexample_net(1), grid)
    assert not r.invertible
