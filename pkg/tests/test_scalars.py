from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twistorharm.errors import ConfigError
from twistorharm.scalars import (
    Parameter,
    ParameterSet,
    Polynomial,
    evaluate,
    format_scalar,
    parse_scalar,
    substitute,
    substitute_sign,
)

P = ParameterSet.of(["a1", "a2", "a3", "a4"], ["epsilon1", "epsilon2"])
a1, a2, a3, a4 = (P.var(n) for n in ("a1", "a2", "a3", "a4"))
e1, e2 = P.var("epsilon1"), P.var("epsilon2")


def parse(text):
    return parse_scalar(text, P)


# -- ring operations -----------------------------------------------------------

def test_monomial_product():
    assert a2 * a2 == parse("a2^2")


def test_sign_squares_reduce():
    assert (1 - e1) * (1 + e1) == 0
    assert e1 * e1 * e2 == e2


def test_like_terms_collect():
    assert a1 * a2 / 2 + a1 * a2 / 2 == a1 * a2


def test_zero_polynomial_has_no_terms():
    assert (a1 - a1).terms == {}
    assert Polynomial(P, {(1, 0, 0, 0, 0, 0): Fraction(0)}).terms == {}


def test_mismatched_parameter_sets():
    other = ParameterSet.of(["b"]).var("b")
    with pytest.raises(ConfigError):
        a1 + other


def test_division_only_by_rationals():
    assert a1 / 2 == Fraction(1, 2) * a1
    with pytest.raises(ZeroDivisionError):
        a1 / a2
    with pytest.raises(ZeroDivisionError):
        a1 / 0


def test_duplicate_parameter_names_rejected():
    with pytest.raises(ConfigError):
        ParameterSet([Parameter("a"), Parameter("a")])


def test_free_real_alias():
    assert Parameter("a", "free-real").kind == "real"
    with pytest.raises(ConfigError):
        Parameter("a", "complex")


# -- evaluation and substitution -----------------------------------------------

def test_evaluate_examples():
    assert evaluate(-a2 * a2 / 2, {"a2": 1}) == Fraction(-1, 2)
    assert evaluate(parse("-(a3^2+a4^2+4)/2"), {"a3": 0, "a4": 0}) == -2
    assert evaluate((1 - e1) * a4, {"epsilon1": 1, "a4": 7}) == 0


def test_evaluate_errors():
    with pytest.raises(ConfigError, match="a2"):
        evaluate(a1 + a2, {"a1": 1})
    with pytest.raises(ConfigError, match="epsilon1"):
        evaluate(e1, {"epsilon1": 2})


def test_substitute_sign_examples():
    p = (1 - e1) * a4
    assert substitute_sign(p, "epsilon1", 1) == 0
    assert substitute_sign(p, "epsilon1", -1) == 2 * a4
    assert substitute_sign(a3, "epsilon1", 1) == a3
    assert "epsilon1" not in substitute_sign(p * e2, "epsilon1", -1).variables()


def test_substitute_sign_rejects_real_parameter():
    with pytest.raises(ConfigError):
        substitute_sign(a1 * a2, "a1", 1)


def test_substitute_polynomial_values():
    assert substitute(a1 * a1 + a2, {"a1": a3 + 1}) == a3 * a3 + 2 * a3 + 1 + a2


# -- text form -------------------------------------------------------------------

def test_canonical_format():
    assert format_scalar(parse("-3/2 - a1^2/2")) == "-3/2 - 1/2*a1^2"
    assert format_scalar(parse("a2^2 + a1^2 + 2*a1 + 1")) == "1 + 2*a1 + a1^2 + a2^2"
    assert format_scalar(Fraction(-7, 3)) == "-7/3"
    assert format_scalar(a4 - a4) == "0"


def test_parse_constant_is_fraction():
    assert parse("-(1/2)*4") == -2
    assert isinstance(parse("3/6"), Fraction)


@pytest.mark.parametrize("text", ["", "a1 +", "a9", "2^a1", "a1/a2", "(a1", "a1 $ 2", "1/0"])
def test_parse_errors(text):
    with pytest.raises(ConfigError):
        parse(text)


# -- properties ------------------------------------------------------------------

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
exps = st.tuples(*[st.integers(0, 2)] * 6)
polys = st.dictionaries(exps, coeffs, max_size=4).map(lambda t: Polynomial(P, t))
assignments = st.fixed_dictionaries({
    "a1": coeffs, "a2": coeffs, "a3": coeffs, "a4": coeffs,
    "epsilon1": st.sampled_from((1, -1)), "epsilon2": st.sampled_from((1, -1)),
})


@settings(max_examples=60)
@given(polys, polys, polys)
def test_ring_axioms(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p + q == q + p and p * q == q * p
    assert p * (q + r) == p * q + p * r


@settings(max_examples=60)
@given(polys)
def test_sign_exponents_normalized(p):
    for e in p.terms:
        assert e[4] in (0, 1) and e[5] in (0, 1)
    assert all(c != 0 for c in p.terms.values())


@settings(max_examples=60)
@given(polys, polys, assignments)
def test_evaluate_is_a_homomorphism(p, q, sigma):
    assert evaluate(p * q, sigma) == evaluate(p, sigma) * evaluate(q, sigma)
    assert evaluate(p + q, sigma) == evaluate(p, sigma) + evaluate(q, sigma)


@settings(max_examples=60)
@given(polys)
def test_sign_parts_reconstruct(p):
    plus = substitute_sign(p, "epsilon1", 1)
    minus = substitute_sign(p, "epsilon1", -1)
    assert (plus + minus) / 2 + e1 * (plus - minus) / 2 == p


@settings(max_examples=60)
@given(polys)
def test_format_parse_round_trip(p):
    assert parse(format_scalar(p)) == p
