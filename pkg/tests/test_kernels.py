import math
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from taunets import _kernels
from taunets._kernels import _numba, _numpy

finite = st.floats(-700, 700, allow_nan=False)
signs = st.sampled_from([-1.0, 0.0, 1.0])


@pytest.mark.skipif(bool(os.environ.get("TAUNETS_DISABLE_NUMBA")), reason="numpy fallback requested")
def test_backend_default_is_numba():
    assert _kernels.BACKEND == "numba"


def test_env_flag_selects_numpy():
    env = dict(os.environ, TAUNETS_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", "import taunets; print(taunets.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"


@given(st.lists(st.tuples(signs, finite, signs, finite), min_size=1, max_size=30))
def test_slog_add_backends_agree(rows):
    a = np.array(rows, dtype=np.float64).T
    s1, l1 = _numpy.slog_add(*a)
    s2, l2 = _numba.slog_add(*a)
    assert np.array_equal(s1, s2)
    assert np.allclose(l1, l2, rtol=1e-14, atol=1e-13, equal_nan=True)


@given(st.lists(st.tuples(signs, st.floats(-30, 30), signs, st.floats(-30, 30)), min_size=1, max_size=30))
def test_slog_add_matches_float_sum(rows):
    sa, la, sb, lb = np.array(rows, dtype=np.float64).T
    s, l = _kernels.slog_add(sa, la, sb, lb)
    a = np.where(sa == 0, 0.0, sa * np.exp(la))
    b = np.where(sb == 0, 0.0, sb * np.exp(lb))
    got = np.where(s == 0, 0.0, s * np.exp(l))
    assert np.allclose(got, a + b, rtol=1e-12, atol=1e-12 * (np.abs(a) + np.abs(b)).max())


def test_slog_add_infinities():
    inf = math.inf
    s, l = _kernels.slog_add([1.0], [inf], [-1.0], [inf])
    assert np.isnan(l[0])
    s, l = _kernels.slog_add([1.0], [inf], [1.0], [3.0])
    assert s[0] == 1.0 and l[0] == inf
    s, l = _kernels.slog_add([1.0], [2.0], [-1.0], [2.0])
    assert s[0] == 0.0 and l[0] == -inf


r_values = st.floats(0.0, 1e300, allow_nan=False)
ln_eps_values = st.floats(-40 * math.log(2), -1e-3)


@given(st.lists(st.tuples(r_values, ln_eps_values), min_size=1, max_size=40))
def test_value_kernels_agree(rows):
    r, le = np.array(rows).T
    for name in ("sigma", "sigma_prime"):
        assert np.allclose(getattr(_numpy, name)(r), getattr(_numba, name)(r), rtol=1e-13, atol=1e-300)
    for name in ("log_u", "u_values"):
        a, b = getattr(_numpy, name)(r, le), getattr(_numba, name)(r, le)
        assert np.allclose(a, b, rtol=1e-13, atol=1e-300)


@given(st.lists(st.tuples(st.floats(-1e6, 1e6), st.floats(-1e6, 1e6), ln_eps_values), min_size=1, max_size=40))
def test_gradient_kernels_agree(rows):
    arr = np.array(rows)
    X = np.ascontiguousarray(arr[:, :2])
    le = np.ascontiguousarray(arr[:, 2])
    keep = np.hypot(X[:, 0], X[:, 1]) >= 0.5
    X, le = X[keep], le[keep]
    if X.shape[0] == 0:
        return
    assert np.allclose(_numpy.grad_u(X, le), _numba.grad_u(X, le), rtol=1e-12, atol=1e-300)
    assert np.allclose(_numpy.grad_g(X, le), _numba.grad_g(X, le), rtol=1e-12, atol=1e-300)


def test_row_norms_do_not_overflow():
    X = np.array([[3e200, 4e200], [0.0, 0.0], [-3.0, 4.0]])
    assert np.allclose(_kernels.row_norms(X), [5e200, 0.0, 5.0], rtol=1e-15)
    # the numba gradient uses the same scaling
    g = _numba.grad_u(X[:1], np.array([-math.log(2.0) * 10]))
    assert np.all(np.isfinite(g))


@pytest.mark.parametrize("mod", [_numpy, _numba])
def test_u_exact_inside_half_ball(mod):
    r = np.linspace(0.0, 0.5, 1001)
    le = np.full(r.shape, -math.log(2) * 40)
    assert np.all(mod.u_values(r, le) == 1.0)
    assert np.all(mod.log_u(r, le) == 0.0)
