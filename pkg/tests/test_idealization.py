import random

import pytest
from hypothesis import given, settings, strategies as st

from twistalg.core import CoefficientField
from twistalg.core.finite import box_algebra, free_module, semigroup_algebra
from twistalg.core.poly import polynomial_ring
from twistalg.idealization import (IdealizationIdeal, IdealizationRing, embedding_dimension, ideal_span,
                                   local_idealization_model, quotient_model, star_mul)

F5 = CoefficientField.prime(5)
Q = CoefficientField.rationals()


def test_symbolic_multiplication():
    R = IdealizationRing.free(F5, ["t"], 1)
    (t,) = polynomial_ring(F5, ["t"])
    a = R.element(t, [1])
    sq = a * a
    assert sq.ring_part == t ** 2 and sq.module_part == (2 * t,)
    b = R.element(t + 3, [t ** 2])
    assert R.one() * b == b
    l1, l2 = R.element(0, [t]), R.element(0, [t + 1])
    assert star_mul(l1, l2) == R.zero()


def _model():
    base = box_algebra(F5, ["t"], [4])
    return IdealizationRing(base, free_module(base, 2))


@settings(max_examples=50, deadline=None)
@given(st.randoms(use_true_random=False))
def test_finite_model_is_commutative_ring(rnd):
    R = _model()
    a, b, c = (R.random_element(rnd) for _ in range(3))
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert R.one() * a == a
    la, lb = R.element(R.algebra.zero(), a.module_part), R.element(R.algebra.zero(), b.module_part)
    assert la * lb == R.zero()


def test_ideal_span_examples():
    base = box_algebra(F5, ["t"], [2])
    R = IdealizationRing(base, free_module(base, 1))
    assert ideal_span([R.one()], R).dim == R.dim
    span = ideal_span([R.element((0, 0), (1, 0))], R)
    assert span.dim == 2
    assert span.contains(R.to_vector(R.element((0, 0), (0, 1))))
    assert ideal_span([], R).dim == 0


def test_ideal_span_needs_finite_model():
    R = IdealizationRing.free(F5, ["t"], 1)
    with pytest.raises(Exception):
        ideal_span([R.one()], R)


def test_quotient_model_examples():
    base = box_algebra(F5, ["t"], [2])
    R = IdealizationRing(base, free_module(base, 1))
    q = quotient_model(R, IdealizationIdeal((R.element((0, 1), (0, 0)), R.element((0, 0), (0, 1)))))
    assert q.dim == 2
    alg = q.algebra
    m = [i for i in range(2) if alg.labels[i].startswith("(0,")]
    assert len(m) == 1
    e = tuple(1 if i == m[0] else 0 for i in range(2))
    assert not any(alg.mul(e, e))
    assert quotient_model(R, [R.one()]).dim == 0
    assert quotient_model(R, []).dim == R.dim


@pytest.mark.parametrize("names,rank,expected", [(["X", "Y"], 3, 5), (["X"], 0, 1), (["X", "Y"], 0, 2),
                                                  (["X", "Y"], 1, 3)])
def test_embedding_dimension(names, rank, expected):
    assert embedding_dimension(local_idealization_model(Q, names, rank)) == expected


def test_embedding_dimension_of_cusp():
    assert embedding_dimension(semigroup_algebra(F5, "t", [2, 3], 7)) == 2
