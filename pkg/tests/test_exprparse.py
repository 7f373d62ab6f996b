import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from carleman.errors import (ExprDivisionByZeroError, ExprSyntaxError, NonIntegerExponentError,
                             UnboundVariableError)
from carleman.exprparse import BinOp, Call, Neg, Num, Pow, Var, evaluate, parse, unparse, variables_of


def ev(src, **kw):
    return evaluate(parse(src), **kw)


def test_mixed_expression():
    assert ev("t^2 + (1+2i)*t - 0.5/t", t=1) == pytest.approx(1.5 + 2j)


def test_conjugate():
    assert ev("conj(t)", t=1j) == pytest.approx(-1j)


def test_incomplete_expression_offset():
    with pytest.raises(ExprSyntaxError) as info:
        parse("t +")
    assert info.value.offset == 3
    assert info.value.expected


def test_negative_exponent():
    assert ev("t^(-2)", t=1j) == pytest.approx(-1)


def test_exp():
    assert ev("exp(t)", t=0) == pytest.approx(1)


def test_two_variables():
    assert ev("t*tau", t=2, tau=3j) == pytest.approx(6j)


def test_precedence():
    assert ev("1+2*t^2", t=2) == pytest.approx(9)


def test_power_right_associative():
    assert ev("t^2^3", t=1.1) == pytest.approx(1.1 ** 8)


def test_unary_minus_binds_to_base():
    # '-' belongs to the base, so -t^2 squares (-t)
    assert ev("-t^2", t=3) == pytest.approx(9)
    assert ev("0 - t^2", t=3) == pytest.approx(-9)


def test_non_integer_exponent():
    with pytest.raises(NonIntegerExponentError):
        parse("t^0.5")


def test_unknown_function_and_name():
    with pytest.raises(ExprSyntaxError):
        parse("sin(t)")
    with pytest.raises(ExprSyntaxError):
        parse("theta + 1")


def test_division_by_zero():
    with pytest.raises(ExprDivisionByZeroError):
        ev("1/(t - 1)", t=1)
    with pytest.raises(ExprDivisionByZeroError):
        ev("t^(-1)", t=0)


def test_unbound_variable():
    with pytest.raises(UnboundVariableError):
        evaluate(parse("t*tau"), t=1.0)


def test_vectorized():
    t = np.exp(1j * np.linspace(0, 1, 5))
    assert np.allclose(ev("(1 + t)/2", t=t), (1 + t) / 2)


def test_variables_of():
    assert variables_of(parse("exp(t) + 2*tau^3")) == {"t", "tau"}
    assert variables_of(parse("2i")) == set()


def test_extra_variables():
    node = parse("theta + pi/3", ("theta",))
    assert evaluate(node, theta=0.0) == pytest.approx(np.pi / 3)


FIXED_CASES = [
    ("1", 0.3, 1),
    ("i", 0.3, 1j),
    ("2.5e-1", 0, 0.25),
    ("3i*t", 2, 6j),
    ("t - 1", 1j, 1j - 1),
    ("(t - 1)/(t + 1)", 2, 1 / 3),
    ("t^3", 1j, -1j),
    ("t^(-1)", 2j, -0.5j),
    ("re(t)", 1 + 2j, 1),
    ("im(t)", 1 + 2j, 2),
    ("conj(t)*t", 3 + 4j, 25),
    ("exp(i*pi)", 0, -1),
    ("(1 + t^2)/2", 1j, 0),
    ("(1 - t^(-2))/4", 1j, 0.5),
    ("2*t - t*2", 5, 0),
    ("-(t + 1)", 1, -2),
    ("--t", 4, 4),
    ("1/2/4", 0, 0.125),
    ("8 - 2 - 1", 0, 5),
    ("t^0", 7j, 1),
]


@pytest.mark.parametrize("src,t,expected", FIXED_CASES)
def test_fixed_corpus(src, t, expected):
    assert ev(src, t=t) == pytest.approx(expected, abs=1e-14)


def _trees():
    leaves = st.one_of(
        st.sampled_from(["t", "tau"]).map(Var),
        st.integers(0, 99).map(lambda k: Num(complex(k), str(k))),
        st.sampled_from(["0.5", "2.25", "3i", "1e-3"]).map(lambda s: parse(s)),
    )

    def extend(children):
        return st.one_of(
            st.tuples(st.sampled_from("+-*/"), children, children).map(lambda a: BinOp(*a)),
            st.tuples(children, st.integers(-4, 4)).map(lambda a: Pow(*a)),
            children.map(Neg),
            st.tuples(st.sampled_from(["exp", "conj", "re", "im"]), children).map(lambda a: Call(*a)),
        )
    return st.recursive(leaves, extend, max_leaves=12)


@settings(max_examples=300, deadline=None)
@given(_trees())
def test_unparse_round_trip(tree):
    text = unparse(tree)
    assert parse(text) == tree
    assert unparse(parse(text)) == text
