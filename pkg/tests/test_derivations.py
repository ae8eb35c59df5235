import random

import pytest

from twistalg.core import CoefficientField, LocalFraction, Polynomial
from twistalg.core.presentation import RingPresentation
from twistalg.derivations import DerivationSpec, check_linearity, derive, factor_through, kahler_presentation

Q = CoefficientField.rationals()


def _ring(relations=(), names=("x", "y", "Z")):
    return RingPresentation(Q, names, relations)


def test_partial_z():
    S = _ring()
    D = DerivationSpec(S, {"Z": 1})
    assert derive(D, S.poly("Z^2")) == S.poly("2 Z")
    assert derive(D, S.poly("7")).is_zero()
    assert derive(D, 3).is_zero()


def test_quotient_rule():
    S = RingPresentation(Q, ("x", "y", "Z"), prime=("x", "y", "Z"), inverted=("Z",))
    D = DerivationSpec(S, {"Z": 1})
    inv = S.frac("1/Z")
    assert derive(D, inv) == S.frac("-1/Z^2")
    assert derive(D, S.frac("Z") * inv).is_zero()


def test_unknown_variable_rejected():
    D = DerivationSpec(_ring(), {"Z": 1})
    with pytest.raises(ValueError):
        derive(D, Polynomial.var(Q, ("x", "w"), "w"))
    with pytest.raises(ValueError):
        DerivationSpec(_ring(), {"w": 1})


def test_linearity():
    S = _ring()
    assert check_linearity(DerivationSpec(S, {"Z": 1}, linearity_base=("x", "y")))
    res = check_linearity(DerivationSpec(S, {"x": 1}, linearity_base=("x",)))
    assert not res and res.witness == S.poly("x")
    res = check_linearity(DerivationSpec(S, {"Z": 1}, linearity_base=("x", "x Z")), random.Random(0))
    assert not res and res.witness == S.poly("x Z")


def test_relation_compatibility():
    S = RingPresentation(Q, ("x", "Z"), (Polynomial.var(Q, ("x", "Z"), "Z", 2) - Polynomial.var(Q, ("x", "Z"), "x"),))
    with pytest.raises(ValueError):
        DerivationSpec(S, {"Z": 1})
    DerivationSpec(S, {"x": S.poly("2 Z"), "Z": 1})


def test_kahler_examples():
    names = ("x", "Z")
    S = RingPresentation(Q, names)
    free = kahler_presentation(S, base=("x",))
    assert free.generators == ("dZ",) and not free.relations
    rel = Polynomial.var(Q, names, "Z", 2) - Polynomial.var(Q, names, "x")
    P = kahler_presentation(RingPresentation(Q, names, (rel,)), base=("x",))
    assert P.generators == ("dZ",)
    assert P.relations == ((Polynomial.var(Q, names, "Z").scale(2),),)
    A = RingPresentation(Q, ("x",))
    assert kahler_presentation(A, base=("x",)).is_zero_module


def test_factor_through_recovers_derivation():
    S = _ring()
    D = DerivationSpec(S, {"Z": S.poly("x")}, linearity_base=("x", "y"))
    P = kahler_presentation(S, base=("x", "y"))
    alpha = factor_through(P, D)
    f = S.poly("Z^3 y + x Z")
    assert alpha(P.d(f)) == derive(D, f)
    bad = DerivationSpec(S, {"x": 1})
    with pytest.raises(ValueError):
        factor_through(P, bad)
