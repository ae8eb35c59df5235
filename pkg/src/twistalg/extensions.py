"""Quadratic and C-analytic extensions A ⊆ S of polynomial subalgebras.

An :class:`ExtensionInstance` lives in k[vars] truncated at total degree
N.  A and S are the subalgebras generated by given polynomials; spans of
subalgebras and ideals are computed exactly in the truncation.  Failures
are sound (a truncated failure is a real failure); passes hold "within
bounds", comparisons being made only in degrees below a safety margin.

The GL scenario has its own exact versions of these checks in
:mod:`twistalg.twisted`; :func:`is_quadratic` and friends dispatch there
when handed a :class:`~twistalg.twisted.Scenario`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .core.fields import CoefficientField
from .core.finite import FiniteAlgebra, local_truncation
from .core.linalg import Subspace, linear_solve, rank
from .core.poly import Polynomial
from .errors import BoundsError
from .twisted import (CheckResult, Scenario, scenario_c_analytic, scenario_contract_extend,
                      scenario_generator_bound, scenario_quadratic)


class ExtensionInstance:
    def __init__(self, field: CoefficientField, names: Sequence[str], small: Sequence, big: Sequence = None,
                 c=None, precision: int = 12, quasilocal: bool = False, max_exponent: int = 3):
        self.field = field
        self.names = tuple(names)
        self.N = precision
        self.quasilocal = quasilocal
        self.max_exponent = max_exponent
        self.ambient = local_truncation(field, self.names, precision)
        self.small_gens = [self._poly(g) for g in small]
        self.big_gens = [self._poly(g) for g in (big if big is not None else self.names)]
        self.c = self._poly(c if c is not None else self.names[0])
        if self.c.is_zero() or self.c.is_constant():
            raise ValueError("c must be a nonconstant polynomial")
        self.A = self._subalgebra(self.small_gens)
        self.S = self._subalgebra(self.big_gens)
        if not self.S.contains_space(self.A):
            raise ValueError("small ring is not contained in the big ring")
        self._check_nonzerodivisor()

    def _poly(self, g) -> Polynomial:
        from .core.expr import to_polynomial
        if isinstance(g, Polynomial):
            return g.change_variables(self.names) if g.variables != self.names else g
        return to_polynomial(str(g) if isinstance(g, int) else g, self.field, self.names)

    def vec(self, p) -> tuple:
        return self.ambient.from_polynomial(self._poly(p))

    def poly_of(self, v) -> Polynomial:
        return self.ambient.to_polynomial(v)

    def _subalgebra(self, gens) -> Subspace:
        amb = self.ambient
        span = Subspace(self.field, amb.dim, [amb.one])
        gvecs = [amb.from_polynomial(g) for g in gens]
        while True:
            grown = span.extend([amb.mul(b, g) for b in span.basis for g in gvecs])
            if grown.dim == span.dim:
                return span
            span = grown

    def _check_nonzerodivisor(self):
        amb = self.ambient
        cv = amb.from_polynomial(self.c)
        low = [i for i, e in enumerate(amb.exponents) if sum(e) < self.N - self.c.total_degree()]
        imgs = [amb.mul(cv, amb.basis_vector(i)) for i in low]
        if rank(imgs, self.field, amb.dim) != len(low):
            raise ValueError("c is a zero divisor in the truncated big ring")

    # -- helpers ---------------------------------------------------------------

    def reliable_degree(self, slack: int = 0) -> int:
        return self.N - slack

    def project(self, v, bound: int) -> tuple:
        return tuple(c if sum(e) < bound else 0 for c, e in zip(v, self.ambient.exponents))

    def projected(self, space: Subspace, bound: int) -> Subspace:
        return Subspace(self.field, self.ambient.dim, [self.project(v, bound) for v in space.basis])

    def times(self, p_vec, space: Subspace) -> Subspace:
        amb = self.ambient
        return Subspace(self.field, amb.dim, [amb.mul(p_vec, b) for b in space.basis])

    def ideal(self, gens: Sequence, ring: Subspace) -> Subspace:
        amb = self.ambient
        vecs = [self.vec(g) if not isinstance(g, tuple) else g for g in gens]
        return Subspace(self.field, amb.dim, [amb.mul(g, b) for g in vecs for b in ring.basis])

    def c_power(self, k: int) -> tuple:
        return self.ambient.from_polynomial(self.c ** k)


def _in_span(space: Subspace, v) -> bool:
    return space.contains(v)


def is_quadratic(inst, samples: Sequence = None) -> CheckResult:
    """st ∈ sR + tR + R for every sampled pair (s, t)."""
    if isinstance(inst, Scenario):
        return scenario_quadratic(inst, samples)
    amb, f = inst.ambient, inst.field
    if samples is None:
        samples = [(g, h) for g in inst.big_gens for h in inst.big_gens]
    R = inst.A
    for s, t in samples:
        sv, tv = inst.vec(s), inst.vec(t)
        ds, dt = inst._poly(s).total_degree(), inst._poly(t).total_degree()
        bound = inst.N - max(ds, dt)
        low = Subspace(f, amb.dim, [b for b in (inst.project(v, bound) for v in R.basis) if any(b)])
        # st = s r + t r' + r'' with r, r' of degree below the margin
        cols = [amb.mul(sv, b) for b in low.basis] + [amb.mul(tv, b) for b in low.basis] + list(R.basis)
        target = amb.mul(sv, tv)
        M = [[col[i] for col in cols] for i in range(amb.dim)]
        sol, _ = linear_solve(M, target, f) if cols else (None, [])
        if sol is None:
            return CheckResult(False, {"witness": [str(inst._poly(s)), str(inst._poly(t))]})
    return CheckResult(True, {"pairs": len(samples), "truncation": inst.N})


def is_c_analytic(inst, m: int = 1) -> CheckResult:
    """S = A + c^m S and A ∩ c^m S ⊆ c^m A, checked for c^m, c^(2m), …, c^(Mm)."""
    if isinstance(inst, Scenario):
        return scenario_c_analytic(inst, m)
    amb = inst.ambient
    certs = []
    for i in range(1, inst.max_exponent + 1):
        e = m * i
        cm = inst.c_power(e)
        bound = inst.N - e * inst.c.total_degree()
        if bound <= 0:
            raise BoundsError(f"precision {inst.N} too small for c^{e}")
        cmS = inst.times(cm, inst.S)
        cover = inst.projected(inst.A + cmS, bound)
        for v in inst.S.basis:
            pv = inst.project(v, bound)
            if not cover.contains(pv):
                return CheckResult(False, {"exponent": e, "reason": "S ≠ A + c^m S",
                                           "witness": str(inst.poly_of(pv))})
        cmA = inst.projected(inst.times(cm, inst.A), bound)
        meet = inst.A.intersect(cmS)
        for w in meet.basis:
            pw = inst.project(w, bound)
            if not cmA.contains(pw):
                return CheckResult(False, {"exponent": e, "reason": "A ∩ c^m S ⊄ c^m A",
                                           "witness": str(inst.poly_of(pw))})
        certs.append({"exponent": e, "dim_A_part": inst.projected(inst.A, bound).dim,
                      "dim_cover": cover.dim})
    return CheckResult(True, {"verified_up_to_exponent": inst.max_exponent, "m": m, "certificates": certs})


def _c_exponent(inst: ExtensionInstance, ideal: Subspace) -> int:
    for k in range(0, inst.max_exponent + 1):
        if ideal.contains(inst.c_power(k)):
            return k
    raise BoundsError(f"ideal does not contain c^k for k ≤ {inst.max_exponent}")


def contract_extend(inst, gens: Sequence, side: str = "small") -> CheckResult:
    """Round trip I = IS ∩ A (side small) or J = (J ∩ A)S (side big) within bounds."""
    if isinstance(inst, Scenario):
        return scenario_contract_extend(inst, gens, side)
    if side not in ("small", "big"):
        raise ValueError("side must be 'small' or 'big'")
    home = inst.A if side == "small" else inst.S
    for g in gens:
        if not home.contains(inst.vec(g)):
            raise ValueError(f"generator {g} is not in the {side} ring")
    ideal = inst.ideal(gens, home)
    k = _c_exponent(inst, ideal)
    bound = inst.N - (k + 1) * inst.c.total_degree() - max(inst._poly(g).total_degree() for g in gens)
    if bound <= 0:
        raise BoundsError("precision too small for this ideal")
    if side == "small":
        ext = inst.ideal(gens, inst.S)
        back = ext.intersect(inst.A)
        ok = inst.projected(back, bound) == inst.projected(ideal, bound)
        ev = {"extension_dim": inst.projected(ext, bound).dim}
    else:
        contr = ideal.intersect(inst.A)
        back = inst.ideal(list(contr.basis), inst.S)
        ok = inst.projected(back, bound) == inst.projected(ideal, bound)
        ev = {"contraction_dim": inst.projected(contr, bound).dim}
    ev.update({"c_exponent": k, "compared_below_degree": bound})
    return CheckResult(ok, ev)


def generator_bound(inst, gens: Sequence, quasilocal: bool = None) -> CheckResult:
    """Write x_i = a_i + c^(2k) s_i and return (a_1, …, a_n, c^(2k)) generating J ∩ A."""
    if isinstance(inst, Scenario):
        return scenario_generator_bound(inst, gens, bool(quasilocal))
    quasilocal = inst.quasilocal if quasilocal is None else quasilocal
    amb, f = inst.ambient, inst.field
    for g in gens:
        if not inst.S.contains(inst.vec(g)):
            raise ValueError(f"generator {g} is not in the big ring")
    J = inst.ideal(gens, inst.S)
    k = _c_exponent(inst, J)
    if k == 0:
        return CheckResult(True, {"generators": ["1"], "count": 1, "note": "J = S"})
    c2 = inst.c_power(2 * k)
    c2S = inst.times(c2, inst.S)
    a_list = []
    for g in gens:
        gv = inst.vec(g)
        cols = list(inst.A.basis) + list(c2S.basis)
        M = [[col[i] for col in cols] for i in range(amb.dim)]
        sol, _ = linear_solve(M, gv, f)
        if sol is None:
            raise BoundsError(f"no decomposition {g} = a + c^{2 * k} s at truncation {inst.N}")
        a = tuple(f.reduce(sum(c * col[i] for c, col in zip(sol[: inst.A.dim], inst.A.basis)))
                  for i in range(amb.dim))
        a_list.append(a)
    bound = inst.N - (2 * k + 1) * inst.c.total_degree() - max(inst._poly(g).total_degree() for g in gens)
    contr = inst.projected(J.intersect(inst.A), bound)
    for a in a_list:
        if not J.contains(a) or not inst.A.contains(a):
            return CheckResult(False, {"reason": f"{inst.poly_of(a)} is not in J ∩ A"})
    out = a_list + [c2]
    if inst.projected(inst.ideal(out, inst.A), bound) != contr:
        return CheckResult(False, {"reason": "outputs do not generate J ∩ A within bounds"})
    dropped = False
    if quasilocal and inst.projected(inst.ideal(a_list, inst.A), bound) == contr:
        out, dropped = a_list, True
    limit = len(gens) if quasilocal else len(gens) + 1
    return CheckResult(len(out) <= limit, {"generators": [str(inst.poly_of(v)) for v in out],
                                           "count": len(out), "bound": limit, "dropped_c2": dropped})


def induced_quotient_map(inst: ExtensionInstance, P_gens: Sequence) -> CheckResult:
    """A/(P ∩ A) → S/PS is bijective within bounds, for P meeting C."""
    PA = inst.ideal(P_gens, inst.A)
    k = _c_exponent(inst, PA)
    PS = inst.ideal(P_gens, inst.S)
    bound = inst.N - (k + 1) * inst.c.total_degree() - max(inst._poly(g).total_degree() for g in P_gens)
    onto = inst.projected(inst.A + PS, bound) == inst.projected(inst.S, bound)
    into = inst.projected(inst.A.intersect(PS), bound) == inst.projected(PA, bound)
    dim_a = inst.projected(inst.A, bound).dim - inst.projected(PA, bound).dim
    dim_s = inst.projected(inst.S, bound).dim - inst.projected(PS, bound).dim
    return CheckResult(onto and into, {"surjective": onto, "injective": into,
                                       "dim_small_quotient": dim_a, "dim_big_quotient": dim_s})
