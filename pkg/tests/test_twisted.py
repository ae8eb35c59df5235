import random

import pytest
from hypothesis import given, settings, strategies as st

from twistalg.core import CoefficientField, Polynomial, TruncatedSeries
from twistalg.errors import PrecisionError
from twistalg.twisted import (GlobalStableSpec, Scenario, alpha_iso_check, analytic_iso_check,
                              associated_prime_witness, decompose, f_map, global_stable_instance,
                              intermediate_correspondence, kq_generators, one_case_check, ring_closure_check,
                              scenario_contract_extend, scenario_generator_bound, scenario_quadratic)

F5 = CoefficientField.prime(5)


@pytest.fixture(scope="module")
def gl():
    return Scenario.gl()


# -- membership -----------------------------------------------------------------------


def test_membership_examples(gl):
    v = gl.membership("Z/x")
    assert v.in_R == "no" and v.valuation_evidence == -1
    v = gl.membership("x^3 y")
    assert v.in_R == "yes" and v.derivative == "0"
    v = gl.membership("Z^2/x")
    assert v.in_R == "yes" and v.valuation_evidence == 0
    assert gl.membership("Z/x^2").summary() == "no (not in S)"


def test_membership_against_hand_valuation(gl):
    # (Z - x)/x lies in S since val(z - x) = 2; its derivative 1/x has valuation -1
    assert gl.membership("(Z - x)/x").in_R == "no"
    # x Z has derivative x: a member
    assert gl.membership("x Z").in_R == "yes"
    assert gl.membership("(Z - x)/x", threshold=-1).in_R == "yes"
    assert gl.membership("Z/x", threshold=None).in_R == "yes"


def test_indeterminate_when_derivative_vanishes_to_precision():
    sc = Scenario.gl(precision=6, v0=8)
    v = sc.membership("x^6 Z")
    assert v.in_R == "indeterminate"
    with pytest.raises(PrecisionError):
        sc.is_member("x^6 Z")


def test_scenario_validation():
    with pytest.raises(ValueError):
        Scenario(F5, 8, TruncatedSeries(F5, 8, [1, 1]), TruncatedSeries(F5, 8, [0, 1]))
    with pytest.raises(ValueError):
        Scenario(F5, 8, TruncatedSeries(F5, 8, [0, 0, 1]), TruncatedSeries(F5, 8, [0, 1]), dz=0)


_monomials = st.tuples(st.integers(0, 3), st.integers(0, 2), st.integers(0, 2), st.integers(0, 3))


@settings(max_examples=40, deadline=None)
@given(st.lists(_monomials, min_size=1, max_size=3))
def test_membership_is_monotone_in_precision(terms):
    # determinate verdicts never flip when the precision grows
    text = " + ".join(f"x^{a} y^{b} Z^{c} / x^{d}" for a, b, c, d in terms)
    low, high = Scenario.gl(precision=16), Scenario.gl(precision=32)
    v1, v2 = low.membership(text), high.membership(text)
    if v1.in_R != "indeterminate":
        assert v1.in_R == v2.in_R


# -- closure and isomorphisms -----------------------------------------------------------


def test_closure_examples(gl):
    assert ring_closure_check(gl, [("Z^2/x", "x")])
    assert ring_closure_check(gl, [("x", "y"), ("x^2 y", "1 + y")])
    res = ring_closure_check(gl, [("Z/x", "x")])
    assert res and res.evidence["rejected_draws"] == 1 and res.evidence["pairs_tested"] == 0


def test_random_closure(gl):
    assert ring_closure_check(gl, 40, random.Random(5))


def test_alpha_iso(gl):
    assert alpha_iso_check(gl, 1)
    assert alpha_iso_check(gl, 0)
    assert alpha_iso_check(gl, 6)
    with pytest.raises(PrecisionError):
        alpha_iso_check(gl, 24)


def test_f_map_examples(gl):
    R = gl.model(1).ring
    assert f_map(gl, "Z") == R.element(R.algebra.zero(), (1,))
    y = gl.model(1).rho(gl.var("y"))
    assert f_map(gl, "y") == R.element(y, (0,))
    assert f_map(gl, "x") == R.zero()
    assert f_map(gl, "1") == R.one()
    m = gl.model(1)
    fz = m.f_map(gl.var("Z"))
    assert fz * fz == m.f_map(gl.element("Z^2")) == m.ring.zero()


@pytest.mark.parametrize("c,k", [("x", 1), ("x^2", 2)])
def test_analytic_iso_dimensions(gl, c, k):
    res = analytic_iso_check(gl, c=c, rng=random.Random(0))
    ev = res.evidence
    assert res
    assert ev["dim_R_model"] == ev["dim_S_part"] + ev["dim_K_part"]
    assert ev["dim_K_part"] == k and ev["dim_S_part"] == gl.d * k


def test_one_case(gl):
    assert one_case_check(gl, ["x", "Z"], 2)
    assert one_case_check(gl, ["1"], 2)


def test_correspondence(gl):
    assert intermediate_correspondence(gl, 0)
    assert intermediate_correspondence(gl, -1)
    assert intermediate_correspondence(gl, None)


# -- K/aK and associated primes ----------------------------------------------------------


def test_kq_generators(gl):
    assert kq_generators(gl, "x") == {"valuation": 1, "dim": 1, "generators": 1}
    assert kq_generators(gl, "1 + x")["generators"] == 0
    assert kq_generators(gl, "x^2") == {"valuation": 2, "dim": 2, "generators": 1}


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 4), st.integers(1, 4))
def test_kq_depends_only_on_valuation(k, c):
    gl = Scenario.gl()
    a = f"{c} x^{k} (1 + y)"
    assert kq_generators(gl, a) == kq_generators(gl, f"x^{k}")


def test_associated_prime(gl):
    res = associated_prime_witness(gl)
    assert res and res.evidence["witness"] == str(gl.sigma(-1))
    assert gl.sigma(-1) == gl.element("(Z - x)/x")
    # the witness pattern for a shifted lattice is the element with D = x^(v0 - 1)
    for v0 in (-1, 2):
        sc = Scenario.gl(v0=v0)
        res = associated_prime_witness(sc)
        assert res and res.evidence["witness"] == str(sc.sigma(v0 - 1))
    assert str(Scenario.gl(v0=-1).sigma(-2)) == str(Scenario.gl().element("(Z - x - x^2)/x^2"))
    with pytest.raises(ValueError):
        associated_prime_witness(Scenario.gl(v0=None))


# -- extension-level checks on the scenario ------------------------------------------------


def test_quadratic(gl):
    assert scenario_quadratic(gl, [("Z/x", "Z/x")])


def test_decompose(gl):
    a, s = decompose(gl, "Z", 2)
    assert a + gl.element("x^2") * s == gl.element("Z")
    assert gl.in_S(s)


def test_generator_bound(gl):
    res = scenario_generator_bound(gl, ["x"])
    assert res and res.evidence["count"] <= 2
    q = scenario_generator_bound(gl, ["x"], quasilocal=True)
    assert q and q.evidence["count"] <= 1


def test_contract_extend(gl):
    assert scenario_contract_extend(gl, ["x"], "big")


# -- global stable domains -------------------------------------------------------------


def _t(shift):
    return Polynomial(F5, ("t",), {(1,): 1, (0,): -shift} if shift else {(1,): 1})


@pytest.mark.parametrize("ranks", [(1, 2), (0,), (3,), (1, 2, 3)])
def test_global_stable(ranks):
    spec = GlobalStableSpec(F5, "t", tuple(_t(i) for i in range(len(ranks))), ranks)
    res = global_stable_instance(spec)
    assert res and res.evidence["embedding_dimensions"] == [e + 1 for e in ranks]


def test_global_stable_validation():
    with pytest.raises(ValueError):
        GlobalStableSpec(F5, "t", (_t(0), _t(0)), (1, 1))
    with pytest.raises(ValueError):
        GlobalStableSpec(F5, "t", (_t(0),), (-1,))
    reducible = Polynomial(F5, ("t",), {(2,): 1, (0,): -1})
    with pytest.raises(ValueError):
        global_stable_instance(GlobalStableSpec(F5, "t", (reducible,), (1,)))
