"""Expression-layer tests: parsing, canonical forms, calculus, and ring laws.

The derivative oracle here is central finite differences on the float
evaluator; it is independent of the symbolic diff rules and pins them down
before anything downstream relies on them.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spraylie.symexpr import (
    CanonicalExpr,
    EvaluationError,
    ExpArgumentError,
    LinForm,
    Monomial,
    ParseError,
    SymExprError,
    UnitDivisionError,
    const,
    exponential,
    parse_expr,
    xvar,
    yvar,
)

FD_STEP = 1e-4
FD_RTOL = 1e-6


def _rand_point(rng, names):
    grid = [Q(k, 2) for k in range(-4, 5) if k != 0]
    return {name: rng.choice(grid) for name in names}


def _var_names(expr):
    names = [f"x{i}" for i in range(1, expr.max_x_index() + 1)]
    names += [f"y{i}" for i in range(1, expr.max_y_index() + 1)]
    return names


def _fd_derivative(expr, var, point):
    shifted_up = dict(point)
    shifted_dn = dict(point)
    shifted_up[var] = float(point[var]) + FD_STEP
    shifted_dn[var] = float(point[var]) - FD_STEP
    # eval() accepts Fractions; go through float-valued Fractions for the shift
    up = {k: (Q(v).limit_denominator(10**12) if not isinstance(v, Q) else v) for k, v in shifted_up.items()}
    dn = {k: (Q(v).limit_denominator(10**12) if not isinstance(v, Q) else v) for k, v in shifted_dn.items()}
    return (expr.eval(up) - expr.eval(dn)) / (2 * FD_STEP)


def _rel_err(a, b):
    return abs(a - b) / max(1.0, abs(a), abs(b))


# ---------------------------------------------------------------------------
# parsing and canonicalization, frozen cases
# ---------------------------------------------------------------------------


def test_canonicalize_quotient_by_exponential_unit():
    e = parse_expr("(y1-y2)^2 / exp(-x3)")
    expected = (
        (yvar(1) * yvar(1)) * exponential({3: 1})
        - 2 * yvar(1) * yvar(2) * exponential({3: 1})
        + (yvar(2) * yvar(2)) * exponential({3: 1})
    )
    assert e == expected
    assert e.term_count() == 3


def test_canonicalize_exponential_cancellation_to_one():
    assert parse_expr("exp((x2-x1)/2)*exp((x1-x2)/2)") == const(1)


def test_canonicalize_rational_constants():
    assert parse_expr("3/4") == const(Q(3, 4))
    assert parse_expr("-3/4 + 1/4") == const(Q(-1, 2))
    assert parse_expr("0").is_zero()


def test_precedence_power_unary_product():
    assert parse_expr("-x1^2") == -(xvar(1) ** 2)
    assert parse_expr("2*x1^2") == 2 * xvar(1) ** 2
    assert parse_expr("1/2*x1") == Q(1, 2) * xvar(1)
    assert parse_expr("x1 - x2 - x3") == xvar(1) - xvar(2) - xvar(3)


def test_negative_powers_of_units():
    assert parse_expr("exp(x1)^-2") == exponential({1: -2})
    assert parse_expr("2^-1") == const(Q(1, 2))
    with pytest.raises(UnitDivisionError):
        parse_expr("x1^-1")


def test_division_errors():
    with pytest.raises(UnitDivisionError):
        parse_expr("1/(x1+1)")
    with pytest.raises(UnitDivisionError):
        parse_expr("x1/0")
    # sums of two exponentials are not units either
    with pytest.raises(UnitDivisionError):
        parse_expr("1/(exp(x1)+exp(x2))")


def test_exp_argument_errors():
    with pytest.raises(ExpArgumentError):
        parse_expr("exp(1)")
    with pytest.raises(ExpArgumentError):
        parse_expr("exp(x1+1)")
    with pytest.raises(ExpArgumentError):
        parse_expr("exp(y1)")
    with pytest.raises(ExpArgumentError):
        parse_expr("exp(x1^2)")
    with pytest.raises(ExpArgumentError):
        parse_expr("exp(exp(x1))")
    # a constant part that cancels is fine
    assert parse_expr("exp(x1 + 1 - 1)") == exponential({1: 1})


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as err:
        parse_expr("x1 + )")
    assert err.value.line == 1 and err.value.col == 6
    with pytest.raises(ParseError):
        parse_expr("z3 + 1")
    with pytest.raises(ParseError):
        parse_expr("x1 +")
    with pytest.raises(ParseError):
        parse_expr("exp x1")
    with pytest.raises(SymExprError):
        parse_expr("x0")


def test_exp_collects_like_forms():
    e = parse_expr("exp(x1/2 + x1/2 - x2)")
    assert e == exponential({1: 1, 2: -1})


# ---------------------------------------------------------------------------
# ring laws (randomized structural equality)
# ---------------------------------------------------------------------------

_fractions = st.fractions(min_value=-3, max_value=3, max_denominator=4)
_small_frac = st.sampled_from([Q(0), Q(1), Q(-1), Q(1, 2), Q(-1, 2)])


@st.composite
def _monomials(draw):
    xs = draw(st.dictionaries(st.integers(1, 2), st.integers(1, 2), max_size=2))
    ys = draw(st.dictionaries(st.integers(1, 2), st.integers(1, 2), max_size=2))
    return Monomial.make(xs, ys)


@st.composite
def _linforms(draw):
    coeffs = draw(st.dictionaries(st.integers(1, 2), _small_frac, max_size=2))
    return LinForm.make(coeffs)


@st.composite
def exprs(draw):
    n_terms = draw(st.integers(0, 4))
    terms = {}
    for _ in range(n_terms):
        key = (draw(_monomials()), draw(_linforms()))
        terms[key] = terms.get(key, Q(0)) + draw(_fractions)
    return CanonicalExpr(terms)


@settings(max_examples=60, deadline=None)
@given(exprs(), exprs(), exprs())
def test_ring_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + CanonicalExpr() == a
    assert a * const(1) == a
    assert (a - a).is_zero()


@settings(max_examples=60, deadline=None)
@given(exprs())
def test_print_parse_round_trip(a):
    assert parse_expr(str(a)) == a


@settings(max_examples=40, deadline=None)
@given(exprs(), _linforms(), _fractions.filter(lambda q: q != 0))
def test_unit_division_round_trip(a, lin, c):
    unit = CanonicalExpr({(Monomial.make(None, None), lin): c})
    assert (a / unit) * unit == a
    assert (a * unit) / unit == a


@settings(max_examples=40, deadline=None)
@given(exprs(), exprs())
def test_zero_test_agrees_with_numeric_evaluation(a, b):
    diff_expr = a - b
    rng = random.Random(11)
    names = sorted(set(_var_names(a)) | set(_var_names(b)))
    if diff_expr.is_zero():
        for _ in range(20):
            pt = _rand_point(rng, names)
            assert abs(a.eval(pt) - b.eval(pt)) < 1e-9


@settings(max_examples=40, deadline=None)
@given(exprs())
def test_mixed_partials_commute(a):
    for u, v in [("x1", "x2"), ("x1", "y1"), ("y1", "y2")]:
        assert a.diff(u).diff(v) == a.diff(v).diff(u)


# ---------------------------------------------------------------------------
# derivative oracle: central finite differences
# ---------------------------------------------------------------------------


def test_diff_matches_finite_differences():
    rng = random.Random(223)
    samples = [
        parse_expr("x1^2*y1*exp(x2/2) - 3*y2^2 + x2*exp(-x1)"),
        parse_expr("(y1-y2)^2 / exp(-x3)"),
        parse_expr("exp(x1/2 - x2/2)*x2*y1 + 1/3*x1^3"),
    ]
    for expr in samples:
        names = _var_names(expr)
        for var in names:
            sym = expr.diff(var)
            for _ in range(10):
                pt = _rand_point(rng, names)
                got = sym.eval(pt)
                want = _fd_derivative(expr, var, pt)
                assert _rel_err(got, want) <= FD_RTOL, (str(expr), var, pt)


def test_diff_chain_rule_on_exponentials():
    e = exponential({1: Q(1, 2), 2: -1})
    assert e.diff("x1") == Q(1, 2) * e
    assert e.diff("x2") == -e
    assert e.diff("x3").is_zero()
    assert e.diff("y1").is_zero()


def test_diff_power_rule():
    e = xvar(1) ** 3 * yvar(2)
    assert e.diff("x1") == 3 * xvar(1) ** 2 * yvar(2)
    assert e.diff("y2") == xvar(1) ** 3


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


def test_eval_requires_all_variables():
    e = parse_expr("x1*y2*exp(x3)")
    with pytest.raises(EvaluationError):
        e.eval({"x1": 1, "y2": 1})
    val = e.eval({"x1": 2, "y2": Q(1, 2), "x3": 0})
    assert val == pytest.approx(1.0)


def test_eval_of_exponential():
    e = parse_expr("exp(x1/2)")
    assert e.eval({"x1": 3}) == pytest.approx(math.exp(1.5))


def test_eval_is_deterministic():
    e = parse_expr("x1*exp(x2) - y1^2*exp(-x2) + 7/3")
    pt = {"x1": Q(3, 2), "x2": Q(-1, 2), "y1": Q(2)}
    assert e.eval(pt) == e.eval(pt)


# ---------------------------------------------------------------------------
# structure helpers used by the geometry layer
# ---------------------------------------------------------------------------


def test_y_linear_decomposition():
    e = parse_expr("y1*exp(x1) - 2*y3*x2")
    parts = e.y_linear_parts()
    assert set(parts) == {1, 3}
    assert parts[1] == exponential({1: 1})
    assert parts[3] == -2 * xvar(2)
    with pytest.raises(SymExprError):
        parse_expr("y1^2").y_linear_parts()


def test_y_homogeneity():
    assert parse_expr("y1*y2 + y3^2").is_y_homogeneous(2)
    assert not parse_expr("y1*y2 + y3").is_y_homogeneous(2)
    assert CanonicalExpr().is_y_homogeneous(2)


def test_as_unit():
    assert parse_expr("exp(x1)*3").as_unit() == (Q(3), LinForm.make({1: 1}))
    assert parse_expr("x1").as_unit() is None
    assert parse_expr("exp(x1)+1").as_unit() is None
