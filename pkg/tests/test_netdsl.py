import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from taunets.asymptotics import ScalarNet, from_slog
from taunets.counterexample import counterexample_net
from taunets.errors import NetEvaluationError
from taunets.gfunction import FunctionNet
from taunets.gpoint import Box
from taunets.netdsl import (
    ABS_X,
    EPS,
    FUNCTIONS,
    BinOp,
    Call,
    Neg,
    Num,
    ParseError,
    compile_expr,
    compile_source,
    evaluate,
    parse,
    parse_vector,
    pretty_print,
    x,
)

U_SRC = "(1 - sigma(|x|)) * eps^(log_eps(|x|)^2) + sigma(|x|)"


class TestParse:
    def test_precedence(self):
        assert parse("x1 + eps * x2 ^ |x|", 2) == BinOp("+", x(1), BinOp("*", EPS, BinOp("^", x(2), ABS_X)))

    def test_power_right_associative(self):
        assert parse("eps^2^3") == BinOp("^", EPS, BinOp("^", Num(2.0), Num(3.0)))

    def test_left_associative_sub_div(self):
        assert parse("1 - 2 - 3") == BinOp("-", BinOp("-", Num(1.0), Num(2.0)), Num(3.0))
        assert parse("1 / 2 / 3") == BinOp("/", BinOp("/", Num(1.0), Num(2.0)), Num(3.0))

    def test_unary_minus_binds_tighter_than_power(self):
        assert parse("-x1^2") == BinOp("^", Neg(x(1)), Num(2.0))
        assert parse("eps^-2") == BinOp("^", EPS, Neg(Num(2.0)))

    def test_whitespace_and_numbers(self):
        assert parse(" | x |  *  1.5e-3 ") == BinOp("*", ABS_X, Num(1.5e-3))
        assert parse(".5") == Num(0.5)

    def test_functions(self):
        for fn in FUNCTIONS:
            assert parse(f"{fn}(eps)") == Call(fn, EPS)

    def test_counterexample_source(self):
        e = parse(U_SRC)
        assert isinstance(e, BinOp) and e.op == "+"

    def test_vector(self):
        assert parse_vector("eps^-2, 0.5") == [BinOp("^", EPS, Neg(Num(2.0))), Num(0.5)]


class TestParseErrors:
    @pytest.mark.parametrize("src, offset, fragment", [
        ("eps^(", 5, "expression"),
        ("x3", 0, "index out of range"),
        ("", 0, "expression"),
        ("eps eps", 4, "end of input"),
        ("foo(eps)", 0, "known identifier"),
        ("ln eps", 3, "'('"),
        ("(eps", 4, "')'"),
        ("eps $ 2", 4, "operator"),
        ("2 * x0", 4, "index out of range"),
    ])
    def test_golden(self, src, offset, fragment):
        with pytest.raises(ParseError) as ei:
            parse(src, 2)
        assert ei.value.offset == offset
        assert fragment in ei.value.expected
        assert 0 <= ei.value.offset <= len(src.encode())

    def test_byte_offsets(self):
        with pytest.raises(ParseError) as ei:
            parse("eps + é", 1)
        assert ei.value.offset == 6
        with pytest.raises(ParseError) as ei:
            parse("é", 1)
        assert ei.value.offset == 0

    def test_is_value_error(self):
        with pytest.raises(ValueError):
            parse(")")


class TestEvaluate:
    def test_scalar_compile(self):
        net = compile_expr(parse("eps"))
        assert isinstance(net, ScalarNet)
        np.testing.assert_allclose(from_slog(*net.slog([0.5, 0.01])), [0.5, 0.01], rtol=1e-15)

    def test_function_compile(self, rng):
        f = compile_expr(parse("|x|^2", 3), 3)
        assert isinstance(f, FunctionNet)
        X = rng.normal(size=(20, 3))
        np.testing.assert_allclose(f.values(0.3, X), np.sum(X * X, axis=1), rtol=1e-13)

    def test_as_function(self):
        f = compile_source("eps", 2, as_function=True)
        assert isinstance(f, FunctionNet) and f(0.25, [1.0, 2.0]) == pytest.approx(0.25)

    def test_box_passthrough(self):
        assert compile_source("x1", 1, Box.unit(1)).box.is_bounded

    @pytest.mark.parametrize("src, want", [
        ("(-2)^3", -8.0), ("0^0", 1.0), ("2^-1", 0.5), ("abs(-3)", 3.0), ("ln(exp(2))", 2.0),
        ("log_eps(eps^3)", 3.0), ("sigma(0.25)", 1.0), ("sigma(2)", 0.0), ("0 * ln(0)", 0.0),
        ("exp(-1/eps)", math.exp(-4.0)), ("-x1 + 1", 0.0),
    ])
    def test_values(self, src, want):
        s, l = evaluate(parse(src), 0.25, np.array([[1.0]]))
        assert from_slog(s, l)[0] == pytest.approx(want, rel=1e-14, abs=1e-300)

    def test_deep_underflow_stays_exact(self):
        s, l = evaluate(parse("eps^(log_eps(|x|)^2)"), 2.0 ** -40, np.array([[2.0 ** 240]]))
        assert s[0] == 1.0 and l[0] == pytest.approx(36 * math.log(2.0 ** -40), rel=1e-12)

    @pytest.mark.parametrize("src, x1", [
        ("ln(x1)", -1.0), ("log_eps(|x|)", 0.0), ("1/x1", 0.0), ("x1^0.5", -2.0), ("x1^-1", 0.0),
        ("sigma(x1)", -1.0), ("ln(10 - x1)", 10.0),
    ])
    def test_domain_errors_carry_location(self, src, x1):
        with pytest.raises(NetEvaluationError) as ei:
            evaluate(parse(src), 0.125, np.array([[5.0], [x1]]))
        assert ei.value.eps == 0.125
        assert list(ei.value.x) == [x1]

    def test_counterexample_matches_builtin(self, rng):
        f = compile_source(U_SRC, 2)
        u = counterexample_net(2)
        worst = 0.0
        for _ in range(1000):
            e = 2.0 ** -rng.uniform(1.0, 40.0)
            r = math.exp(rng.uniform(math.log(1e-3), -6.0 * math.log(e)))
            v = rng.normal(size=2)
            X = (v / np.linalg.norm(v) * r)[None, :]
            (sa, la), (sb, lb) = f.slog(e, X), u.slog(e, X)
            assert sa[0] == sb[0] == 1.0
            # relative error of the values, measured in log form (u underflows far out)
            worst = max(worst, abs(math.expm1(la[0] - lb[0])))
        assert worst < 1e-12


# random ASTs


def _num():
    return st.floats(0.0, 1e6, allow_nan=False, allow_infinity=False).map(Num) | st.sampled_from(
        [Num(0.0), Num(1.0), Num(2.0), Num(0.5), Num(1e-300)])


_leaf = st.one_of(_num(), st.just(EPS), st.just(ABS_X), st.integers(1, 3).map(x))


def _extend(children):
    return st.one_of(
        children.map(Neg),
        st.tuples(st.sampled_from(FUNCTIONS), children).map(lambda t: Call(*t)),
        st.tuples(st.sampled_from(["+", "-", "*", "/", "^"]), children, children).map(lambda t: BinOp(*t)),
    )


asts = st.recursive(_leaf, _extend, max_leaves=12)


@settings(max_examples=1000)
@given(asts)
def test_pretty_print_round_trip(e):
    assert parse(pretty_print(e), 3) == e


def _eval_or_error(e, eps, X):
    try:
        return evaluate(e, eps, X)
    except NetEvaluationError as exc:
        return ("error", str(exc))


@settings(max_examples=300)
@given(asts, st.floats(1e-9, 0.9), st.lists(st.floats(-1e3, 1e3), min_size=3, max_size=3))
def test_round_trip_compiles_identically(e, eps, pt):
    X = np.array([pt])
    a = _eval_or_error(e, eps, X)
    b = _eval_or_error(parse(pretty_print(e), 3), eps, X)
    if isinstance(a[0], str):
        assert a == b
    else:
        np.testing.assert_array_equal(a[0], b[0])
        np.testing.assert_array_equal(a[1], b[1])


@settings(max_examples=300)
@given(asts, st.floats(1e-9, 0.9), st.lists(st.floats(-1e3, 1e3), min_size=3, max_size=3))
def test_evaluation_never_panics(e, eps, pt):
    try:
        s, l = evaluate(e, eps, np.array([pt]))
    except NetEvaluationError:
        return
    assert not np.isnan(l).any() and not np.isposinf(l).any()
    assert set(np.unique(s)) <= {-1.0, 0.0, 1.0}
