"""Finite-rank torsion-free modules over a DVR, stable ideals, generator counts.

The DVR is k[t] localized at (t) and read modulo t^N.  A module is the
V-span of finitely many vectors in V^n; its invariants come from the Smith
form of the generator matrix, computed over k[t] by lifting.  Unit factors
of the invariant factors are irrelevant over V, so only valuations matter.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .core.fields import CoefficientField
from .core.finite import (FiniteAlgebra, FiniteModule, ideal_of, ideal_times_module, maximal_ideal,
                          product_space, submodule_of)
from .core.linalg import Subspace
from .core.poly import Polynomial
from .core.series import AtLeast
from .core.snf import poly_mat_mul, smith_normal_form
from .errors import BoundsError, PrecisionError


@dataclass(frozen=True)
class DvrModel:
    field: CoefficientField
    precision: int
    var: str = "t"

    def poly(self, v) -> Polynomial:
        if isinstance(v, Polynomial):
            return v.change_variables((self.var,)) if v.variables != (self.var,) else v
        if isinstance(v, str):
            from .core.expr import to_polynomial
            return to_polynomial(v, self.field, (self.var,))
        return Polynomial.constant(self.field, (self.var,), v)

    def valuation(self, p: Polynomial):
        """t-adic valuation, a sentinel when p vanishes modulo t^N."""
        if p.is_zero():
            return AtLeast(self.precision)
        v = p.min_degree(self.var)
        return AtLeast(self.precision) if v >= self.precision else v

    def t(self, k: int = 1) -> Polynomial:
        return Polynomial.var(self.field, (self.var,), self.var, k)


@dataclass(frozen=True)
class DvrModulePresentation:
    model: DvrModel
    n: int
    generators: Tuple[Tuple[Polynomial, ...], ...]

    @classmethod
    def build(cls, model: DvrModel, generators: Sequence[Sequence], n: int = None) -> "DvrModulePresentation":
        gens = tuple(tuple(model.poly(c) for c in g) for g in generators)
        if n is None:
            if not gens:
                raise ValueError("give n for the zero module")
            n = len(gens[0])
        if any(len(g) != n for g in gens):
            raise ValueError(f"every generator must have {n} coordinates")
        return cls(model, n, gens)

    def matrix(self) -> List[List[Polynomial]]:
        """n × g matrix whose columns are the generators."""
        return [[g[i] for g in self.generators] for i in range(self.n)]


def _smith(K: DvrModulePresentation):
    if not K.generators:
        return None
    return smith_normal_form(K.matrix())


def invariant_valuations(K: DvrModulePresentation) -> list:
    sf = _smith(K)
    if sf is None:
        return []
    out = []
    for d in sf.invariant_factors:
        out.append(K.model.valuation(d))
    return out


def _lattice_span(K: DvrModulePresentation, M: int) -> Subspace:
    """k-span of K modulo t^M V^n inside (k[t]/t^M)^n (coordinates t^j e_i)."""
    f = K.model.field
    vecs = []
    for g in K.generators:
        for j in range(M):
            v = [f.zero] * (K.n * M)
            for i, c in enumerate(g):
                for (k,), a in c.terms.items():
                    if k + j < M:
                        v[i * M + k + j] = f.reduce(v[i * M + k + j] + a)
            vecs.append(tuple(v))
    return Subspace(f, K.n * M, vecs)


def quotient_dimension(K: DvrModulePresentation, m: int, M: int = None) -> int:
    """dim_k K / t^m K, from k-spans alone (no Smith form)."""
    vals = [v for v in invariant_valuations(K) if not isinstance(v, AtLeast)]
    M = M or (m + (max(vals) if vals else 0) + 1)
    big = _lattice_span(K, M)
    shifted = DvrModulePresentation(K.model, K.n, tuple(tuple(c * K.model.t(m) for c in g) for g in K.generators))
    small = _lattice_span(shifted, M)
    return big.dim - small.dim


def tffr_rank(K: DvrModulePresentation) -> int:
    """Rank r of a torsion-free module: number of nonzero invariant factors = dim K/tK."""
    sf = _smith(K)
    r = 0
    for d in (sf.invariant_factors if sf else []):
        if d.is_zero():
            continue
        if isinstance(K.model.valuation(d), AtLeast):
            raise PrecisionError("a nonzero invariant factor vanishes to the model precision")
        r += 1
    if K.generators:
        check = quotient_dimension(K, 1)
        if check != r:
            raise ArithmeticError(f"rank mismatch: Smith form gives {r}, dim K/tK = {check}")
    return r


@dataclass(frozen=True)
class FreenessResult:
    passed: bool
    rank: int
    basis: Tuple[Tuple[Polynomial, ...], ...]
    dimension: int

    def __bool__(self):
        return self.passed


def quotient_freeness(K: DvrModulePresentation, m: int) -> FreenessResult:
    """K/t^m K is free over V/t^m with basis the nonzero columns of M·V."""
    if m < 1:
        raise ValueError("m must be at least 1")
    model = K.model
    if not K.generators:
        return FreenessResult(True, 0, (), 0)
    sf = _smith(K)
    vals = [model.valuation(d) for d in sf.invariant_factors]
    finite = [v for v in vals if not isinstance(v, AtLeast)]
    top = max(finite) if finite else 0
    if m + top > model.precision:
        raise PrecisionError(f"m + max valuation = {m + top} exceeds precision {model.precision}")
    zero = Polynomial.zero(model.field, (model.var,))
    MV = poly_mat_mul(K.matrix(), sf.V, zero)
    basis = []
    for j, d in enumerate(sf.invariant_factors):
        if not d.is_zero():
            basis.append(tuple(MV[i][j] for i in range(K.n)))
    r = len(basis)
    M = m + top + 1
    whole = _lattice_span(K, M)
    tmK = _lattice_span(DvrModulePresentation(model, K.n, tuple(tuple(c * model.t(m) for c in g) for g in K.generators)), M)
    dim = whole.dim - tmK.dim
    B = DvrModulePresentation(model, K.n, tuple(basis))
    tj_basis = []
    # V/t^m-span of the basis: t^j b_i for j < m
    for b in basis:
        for j in range(m):
            tj_basis.append(tuple(c * model.t(j) for c in b))
    span_b = _lattice_span(DvrModulePresentation(model, K.n, tuple(tj_basis)), M) if tj_basis else Subspace(model.field, K.n * M)
    # spanning: basis + t^m K covers K; independence: m·r vectors stay independent mod t^m K
    spans = (span_b + tmK) == whole and whole.contains_space(span_b)
    independent = (span_b + tmK).dim - tmK.dim == m * r
    ok = spans and independent and dim == m * r
    return FreenessResult(ok, r, tuple(basis), dim)


# -- local finite algebras: stability and generator counts --------------------------


def _candidates(algebra: FiniteAlgebra, gens: Sequence, depth: int = 2):
    f = algebra.field
    coeffs = f.small_elements(2) if not (f.is_finite and f.characteristic <= 25) else list(f.elements())
    seen = set()
    for g in gens:
        key = tuple(g)
        if key not in seen:
            seen.add(key)
            yield g
    if len(gens) < 2:
        return
    for size in range(2, min(depth, len(gens)) + 1):
        for combo in itertools.combinations(range(len(gens)), size):
            for cs in itertools.product([c for c in coeffs if c], repeat=size):
                v = algebra.zero()
                for c, i in zip(cs, combo):
                    v = algebra.add(v, algebra.scale(c, gens[i]))
                key = tuple(v)
                if key not in seen:
                    seen.add(key)
                    yield v


@dataclass(frozen=True)
class StabilityResult:
    passed: bool
    witness: Optional[tuple]
    candidates_tried: int
    caveat: str = ""

    def __bool__(self):
        return self.passed


def is_stable_ideal(algebra: FiniteAlgebra, gens: Sequence, depth: int = 2) -> StabilityResult:
    """Search i ∈ I with iI = I² among generators and small k-combinations."""
    gens = [tuple(algebra.field.coerce(c) for c in g) for g in gens]
    I = ideal_of(algebra, gens)
    if I.dim == 0:
        raise ValueError("I must be nonzero")
    I2 = product_space(algebra, I, I)
    tried = 0
    for cand in _candidates(algebra, gens, depth):
        if algebra.is_zero(cand):
            continue
        tried += 1
        iI = Subspace(algebra.field, algebra.dim, [algebra.mul(cand, b) for b in I.basis])
        if iI == I2:
            return StabilityResult(True, cand, tried)
    return StabilityResult(False, None, tried, "no witness among generators and combinations of depth "
                                                f"{depth}; a witness outside the family is not excluded")


def minimal_generators(module, ideal: Subspace = None) -> int:
    """dim_k M/mM for a module over a local finite algebra (or an ideal of it)."""
    if isinstance(module, FiniteModule):
        alg = module.algebra
        m = maximal_ideal(alg)
        residue = alg.dim - m.dim
        whole = submodule_of(module, [tuple(1 if i == j else 0 for i in range(module.dim)) for j in range(module.dim)]) if ideal is None else ideal
        mM = ideal_times_module(module, m, whole)
        gap = whole.dim - mM.dim
    else:
        alg = module
        if ideal is None:
            raise ValueError("give the ideal as a subspace")
        m = maximal_ideal(alg)
        residue = alg.dim - m.dim
        gap = ideal.dim - product_space(alg, m, ideal).dim
    if gap % residue:
        raise BoundsError("quotient is not a vector space over the residue field")
    return gap // residue
