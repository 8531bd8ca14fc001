"""Exact expression kernel: differentiation, canonical forms, evaluation.

The derivative rules are checked against a central finite difference, the
canonical-form engine against independent numeric evaluation, and the
structural laws (commutativity, involutions, idempotence) with hypothesis.
"""
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from shapeinv.rationals import GaussRat
from shapeinv.symx import (
    Add, Const, Cos, Exp, Hermite, Mul, Pow, Sin, Sym,
    IMAG, ONE, PHI, PSI, R, THETA, ZERO,
    canonical, canonical_key, conjugate_expr, cot, csc, diff, equivalent,
    evaluate, evaluate_fast, expand_hermite, free_symbols, is_zero_expr,
    render, simplify_basic, substitute, trig_to_exp,
)

B0 = {"theta": 0.83, "psi": 1.21, "phi": 2.47, "r": 1.37}


def _fd(e, coord, binding, h=1e-6):
    up = dict(binding)
    dn = dict(binding)
    up[coord] += h
    dn[coord] -= h
    return (evaluate(e, up) - evaluate(e, dn)) / (2 * h)


DIFF_CASES = [
    Mul(Sin(THETA), Cos(PSI)),
    Pow(Sin(THETA), Fraction(-1)),
    Exp(Mul(Const(Fraction(-1, 2)), Pow(R, Fraction(2)))),
    Mul(cot(PSI), csc(THETA)),
    Add(Pow(R, Fraction(1, 2)), Mul(IMAG, Sin(PHI))),
    Hermite(3, Mul(R, Sin(PSI))),
    Exp(Mul(IMAG, PHI)),
    Mul(Pow(R, Fraction(-2)), Cos(Mul(Const(2), THETA))),
]


@pytest.mark.parametrize("e", DIFF_CASES, ids=render)
@pytest.mark.parametrize("coord", ["theta", "psi", "phi", "r"])
def test_diff_matches_finite_difference(e, coord):
    got = evaluate(diff(e, coord), B0)
    want = _fd(e, coord, B0)
    assert abs(got - want) <= 1e-5 * (abs(want) + 1)


def test_hermite_three_term_recurrence():
    # H_{n+1}(x) = 2x H_n(x) - 2n H_{n-1}(x), checked by evaluation
    for n in range(1, 7):
        for x in (-1.3, 0.2, 0.9, 2.4):
            b = dict(B0, r=x)
            left = evaluate(Hermite(n + 1, R), b)
            right = (2 * x * evaluate(Hermite(n, R), b)
                     - 2 * n * evaluate(Hermite(n - 1, R), b))
            assert abs(left - right) <= 1e-9 * (abs(left) + 1)


def test_hermite_derivative_rule():
    # d/dx H_n(x) = 2n H_{n-1}(x)
    for n in range(1, 6):
        d = diff(Hermite(n, R), "r")
        ref = Mul(Const(2 * n), Hermite(n - 1, R))
        assert equivalent(d, ref)


def test_expand_hermite_agrees_with_node():
    for n in range(0, 7):
        e = Hermite(n, Mul(R, Sin(THETA)))
        x = expand_hermite(e)
        assert "hermite" not in render(x).lower()
        assert abs(evaluate(e, B0) - evaluate(x, B0)) <= 1e-9 * (
            abs(evaluate(e, B0)) + 1)


def test_pythagoras_is_exactly_zero():
    e = Add(Pow(Sin(PSI), Fraction(2)), Pow(Cos(PSI), Fraction(2)),
            Const(-1))
    assert is_zero_expr(e)
    assert canonical(e) is ZERO or is_zero_expr(canonical(e))


def test_exponent_merge():
    e = Mul(Exp(Mul(IMAG, PHI)), Exp(Mul(Const(2), IMAG, PHI)))
    assert equivalent(e, Exp(Mul(Const(3), IMAG, PHI)))
    # and the inverse pair collapses to one
    f = Mul(Exp(Mul(IMAG, PHI)), Exp(Mul(Const(-1), IMAG, PHI)))
    assert equivalent(f, ONE)


def test_rational_power_arithmetic_is_exact():
    # 2^(1/2) * 2^(1/2) = 2 without floating error
    s = Pow(Const(2), Fraction(1, 2))
    assert equivalent(Mul(s, s), Const(2))
    w = Pow(Const(Fraction(1, 2)), Fraction(1, 2))
    assert equivalent(Mul(w, w), Const(Fraction(1, 2)))


def test_trig_to_exp_preserves_value():
    for e in (Sin(PHI), Cos(PHI), Mul(Sin(PHI), Cos(PHI), Sin(THETA))):
        x = trig_to_exp(e, "phi")
        assert abs(evaluate(e, B0) - evaluate(x, B0)) <= 1e-12
        assert "sin(phi)" not in render(x) and "cos(phi)" not in render(x)


def test_substitute_replaces_symbol():
    e = Mul(Sym("q"), Sin(THETA))
    assert equivalent(substitute(e, "q", Const(3)),
                      Mul(Const(3), Sin(THETA)))
    assert "q" not in free_symbols(substitute(e, "q", R))


def test_conjugate_matches_complex_conjugate():
    e = Add(Mul(IMAG, Sin(PHI)), Exp(Mul(IMAG, PHI)), Pow(R, Fraction(2)))
    v = evaluate(e, B0)
    vc = evaluate(conjugate_expr(e), B0)
    assert abs(vc - v.conjugate()) <= 1e-12


def test_free_symbols_and_coordinates():
    e = Mul(Sym("q"), Sin(THETA), Exp(Mul(IMAG, PHI)))
    assert free_symbols(e) == frozenset({"q", "theta", "phi"})


def test_evaluate_fast_matches_evaluate():
    cache = {}
    for e in DIFF_CASES:
        assert abs(evaluate_fast(e, B0, cache) - evaluate(e, B0)) <= 1e-12


def test_simplify_basic_keeps_value():
    e = Add(Mul(Const(0), Sin(THETA)), Mul(Const(1), Cos(PSI)),
            Mul(Const(2), Const(Fraction(1, 2)), R))
    s = simplify_basic(e)
    assert abs(evaluate(s, B0) - evaluate(e, B0)) <= 1e-12


def test_gauss_rational_constants():
    c = Const(GaussRat(Fraction(1, 2), Fraction(-3, 4)))
    assert evaluate(c, B0) == 0.5 - 0.75j
    assert evaluate(conjugate_expr(c), B0) == 0.5 + 0.75j


# ---------------------------------------------------------------------------
# Property-based structure laws
# ---------------------------------------------------------------------------

_leaves = st.sampled_from([
    THETA, PSI, R, ONE, Const(2), Const(Fraction(1, 2)), IMAG,
    Sin(THETA), Cos(PSI), Pow(R, Fraction(2)),
    Exp(Mul(Const(Fraction(-1, 3)), Pow(R, Fraction(2)))),
    Hermite(2, R),
])


def _combine(kids):
    return st.one_of(
        st.tuples(kids, kids).map(lambda ab: Add(*ab)),
        st.tuples(kids, kids).map(lambda ab: Mul(*ab)),
        kids.map(lambda a: Mul(Const(Fraction(-2, 3)), a)),
    )


_exprs = st.recursive(_leaves, _combine, max_leaves=5)


@settings(max_examples=60, deadline=None)
@given(_exprs, _exprs)
def test_addition_commutes(a, b):
    assert canonical_key(Add(a, b)) == canonical_key(Add(b, a))


@settings(max_examples=60, deadline=None)
@given(_exprs, _exprs)
def test_multiplication_commutes(a, b):
    assert canonical_key(Mul(a, b)) == canonical_key(Mul(b, a))


@settings(max_examples=60, deadline=None)
@given(_exprs)
def test_canonical_is_idempotent(e):
    c = canonical(e)
    assert canonical_key(c) == canonical_key(e)


@settings(max_examples=60, deadline=None)
@given(_exprs)
def test_conjugation_is_an_involution(e):
    assert canonical_key(conjugate_expr(conjugate_expr(e))) == canonical_key(e)


@settings(max_examples=40, deadline=None)
@given(_exprs, _exprs)
def test_diff_is_linear(a, b):
    left = diff(Add(a, b), "theta")
    right = Add(diff(a, "theta"), diff(b, "theta"))
    assert canonical_key(left) == canonical_key(right)


@settings(max_examples=40, deadline=None)
@given(_exprs, _exprs)
def test_product_rule(a, b):
    left = diff(Mul(a, b), "r")
    right = Add(Mul(diff(a, "r"), b), Mul(a, diff(b, "r")))
    assert canonical_key(left) == canonical_key(right)


@settings(max_examples=40, deadline=None)
@given(_exprs)
def test_canonical_preserves_value(e):
    v = evaluate(e, B0)
    w = evaluate(canonical(e), B0)
    assert abs(v - w) <= 1e-9 * (abs(v) + 1)
