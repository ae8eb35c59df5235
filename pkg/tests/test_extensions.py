import pytest

from twistalg.core import CoefficientField
from twistalg.extensions import (ExtensionInstance, contract_extend, generator_bound, induced_quotient_map,
                                 is_c_analytic, is_quadratic)
from twistalg.twisted import Scenario

F5 = CoefficientField.prime(5)


def ident():
    return ExtensionInstance(F5, ["x"], ["x"], ["x"], c="x")


def test_identity_extension_passes_everything():
    inst = ident()
    assert is_quadratic(inst)
    assert is_c_analytic(inst)
    assert contract_extend(inst, ["x"], "small")
    res = generator_bound(inst, ["x"], quasilocal=True)
    assert res and res.evidence["generators"] == ["x"]


def test_cubic_subring_is_not_quadratic():
    res = is_quadratic(ExtensionInstance(F5, ["x"], ["x^3"], ["x"]), [("x", "x")])
    assert not res and res.evidence["witness"] == ["x", "x"]


def test_even_subring_is_quadratic():
    # x^2 already lies in k[x^2], so the pair (x, x) is no witness there
    assert is_quadratic(ExtensionInstance(F5, ["x"], ["x^2"], ["x"]), [("x", "x")])


def test_even_subring_not_c_analytic():
    res = is_c_analytic(ExtensionInstance(F5, ["x"], ["x^2"], ["x"], c="x^2"))
    assert not res and res.evidence["witness"] == "x"


def test_scenario_dispatch():
    gl = Scenario.gl()
    assert is_c_analytic(gl, 1)
    assert is_quadratic(gl, [("Z/x", "Z/x")])
    assert contract_extend(gl, ["x"], "big")
    assert generator_bound(gl, ["x"], quasilocal=True).evidence["count"] == 1


def test_ideal_must_meet_c():
    inst = ExtensionInstance(F5, ["x", "y"], ["x", "y"], c="x", precision=6)
    with pytest.raises(Exception):
        contract_extend(inst, ["y"], "small")


def test_generator_bound_two_variables():
    inst = ExtensionInstance(F5, ["x", "y"], ["x", "y"], c="x", precision=8)
    res = generator_bound(inst, ["x", "y"])
    assert res and res.evidence["count"] <= 3


def test_subring_must_be_contained():
    with pytest.raises(ValueError):
        ExtensionInstance(F5, ["x", "y"], ["x", "y"], ["x"], precision=6)


def test_induced_quotient_map_identity():
    assert induced_quotient_map(ident(), ["x"])
