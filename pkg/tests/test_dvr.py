import pytest
from hypothesis import given, settings, strategies as st

from twistalg.core import CoefficientField
from twistalg.core.expr import to_polynomial
from twistalg.core.finite import direct_sum, free_module, ideal_of, local_truncation, semigroup_algebra
from twistalg.dvr import (DvrModel, DvrModulePresentation, is_stable_ideal,
                          minimal_generators, quotient_dimension, quotient_freeness, tffr_rank)

F5 = CoefficientField.prime(5)
MODEL = DvrModel(F5, 16)


def K(*gens, n=None):
    return DvrModulePresentation.build(MODEL, [[MODEL.poly(c) for c in g] for g in gens], n)


def test_tffr_examples():
    assert tffr_rank(K(("1", "0"), ("0", "t"))) == 2
    assert tffr_rank(K(n=2)) == 0
    assert tffr_rank(K(("t", "t"))) == 1


def test_quotient_freeness_examples():
    res = quotient_freeness(K(("1", "0"), ("0", "t")), 2)
    assert res and res.rank == 2 and res.dimension == 4
    res = quotient_freeness(K(("t", "t")), 3)
    assert res and res.rank == 1
    free = K(("1", "0", "0"), ("0", "1", "0"), ("0", "0", "1"))
    for m in (1, 2, 5):
        assert quotient_freeness(free, m).rank == 3


def test_precision_guard():
    with pytest.raises(Exception):
        quotient_freeness(K(("t^10", "0")), 8)


def _rand_entry(rnd):
    return "+".join(f"{rnd.randrange(1, 5)}*t^{rnd.randrange(0, 4)}" for _ in range(rnd.randrange(0, 3))) or "0"


@settings(max_examples=25, deadline=None)
@given(st.randoms(use_true_random=False))
def test_rank_invariant_under_unimodular_change(rnd):
    gens = [tuple(_rand_entry(rnd) for _ in range(2)) for _ in range(3)]
    k = K(*gens, n=2)
    r = tffr_rank(k)
    # add a multiple of one generator to another and permute
    g = [list(map(MODEL.poly, x)) for x in gens]
    c = MODEL.poly(_rand_entry(rnd))
    g[0] = [a + c * b for a, b in zip(g[0], g[1])]
    g.reverse()
    assert tffr_rank(DvrModulePresentation.build(MODEL, g, 2)) == r
    assert quotient_dimension(k, 1) == r


def test_stable_ideals():
    cusp = semigroup_algebra(F5, "t", [2, 3], 7)
    gens = [cusp.from_polynomial(MODEL.poly(p)) for p in ("t^2", "t^3")]
    res = is_stable_ideal(cusp, gens)
    assert res and cusp.to_polynomial(res.witness) == MODEL.poly("t^2")
    plane = local_truncation(F5, ["x", "y"], 4)
    xs = [plane.from_polynomial(to_polynomial(v, F5, ("x", "y"))) for v in ("x", "y")]
    res = is_stable_ideal(plane, xs)
    assert not res and res.caveat
    principal = [plane.from_polynomial(to_polynomial("x + y^2", F5, ("x", "y")))]
    assert is_stable_ideal(plane, principal)


def test_minimal_generators():
    cusp = semigroup_algebra(F5, "t", [2, 3], 7)
    gens = [cusp.from_polynomial(MODEL.poly(p)) for p in ("t^2", "t^3")]
    assert minimal_generators(cusp, ideal_of(cusp, gens)) == 2
    dvr = local_truncation(F5, ["t"], 5)
    for e in (0, 1, 3):
        assert minimal_generators(free_module(dvr, e)) == e


@pytest.mark.parametrize("a,b", [(1, 2), (0, 3), (2, 2)])
def test_minimal_generators_additive(a, b):
    dvr = local_truncation(F5, ["t"], 4)
    assert minimal_generators(direct_sum(free_module(dvr, a), free_module(dvr, b))) == a + b
