"""The idealization A ⋆ M: element arithmetic, ideals, quotients, embedding dimension.

Two flavours share one element type.  A *symbolic* idealization has
polynomial ring parts and free-module parts (tuples of polynomials); a
*finite* idealization sits on a :class:`FiniteAlgebra` and a
:class:`FiniteModule` and can be turned into a multiplication table, which
is where ideals, quotients and local invariants are computed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .core.fields import CoefficientField
from .core.finite import (FiniteAlgebra, FiniteModule, free_module, ideal_of,
                          local_truncation, maximal_ideal, product_space)
from .core.linalg import Subspace
from .core.poly import Polynomial
from .errors import BoundsError


@dataclass(frozen=True)
class IdealizationElement:
    ring_part: object
    module_part: tuple
    ring: "IdealizationRing" = None

    def __eq__(self, other):
        return (isinstance(other, IdealizationElement) and self.ring_part == other.ring_part
                and tuple(self.module_part) == tuple(other.module_part))

    def __hash__(self):
        return hash((self.ring_part, tuple(self.module_part)))

    def __mul__(self, other):
        return star_mul(self, other)

    def __add__(self, other):
        return self.ring.add(self, other)

    def __sub__(self, other):
        return self.ring.add(self, self.ring.neg(other))

    def __str__(self):
        mp = ", ".join(str(m) for m in self.module_part)
        rp = self.ring_part
        if self.ring is not None and self.ring.algebra is not None:
            rp = _format_vec(self.ring.algebra.labels, rp)
            mp = _format_vec(self.ring.module.labels, self.module_part)
            return f"({rp}, {mp})"
        if len(self.module_part) == 1:
            return f"({rp}, {mp})"
        return f"({rp}, [{mp}])"


def _format_vec(labels, v):
    parts = []
    for lab, c in zip(labels, v):
        if c:
            parts.append(lab if c == 1 else f"{c}*{lab}")
    return " + ".join(parts) if parts else "0"


class IdealizationRing:
    """A ⋆ M with multiplication (a, l)(b, m) = (ab, a m + b l)."""

    def __init__(self, algebra: FiniteAlgebra = None, module: FiniteModule = None, *,
                 poly_ring: Tuple[CoefficientField, Tuple[str, ...]] = None, rank: int = None):
        if algebra is not None:
            if module is None or module.algebra is not algebra:
                raise ValueError("the module's scalar ring must be the base algebra")
            self.algebra = algebra
            self.module = module
            self.field = algebra.field
            self.poly_ring = None
            self.rank = None
        else:
            if poly_ring is None or rank is None:
                raise ValueError("need a finite algebra and module, or a polynomial ring and a rank")
            self.algebra = None
            self.module = None
            self.field, names = poly_ring
            self.poly_ring = (self.field, tuple(names))
            self.rank = rank
        self._table = None

    @classmethod
    def free(cls, field: CoefficientField, names: Sequence[str], rank: int) -> "IdealizationRing":
        """k[names] ⋆ k[names]^rank with polynomial entries."""
        return cls(poly_ring=(field, tuple(names)), rank=rank)

    @property
    def is_finite(self) -> bool:
        return self.algebra is not None

    # -- elements ---------------------------------------------------------

    def element(self, ring_part, module_part) -> IdealizationElement:
        if self.is_finite:
            rp = tuple(self.field.coerce(c) for c in ring_part)
            mp = tuple(self.field.coerce(c) for c in module_part)
            if len(rp) != self.algebra.dim or len(mp) != self.module.dim:
                raise ValueError("element does not match the model dimensions")
            return IdealizationElement(rp, mp, self)
        f, names = self.poly_ring

        def lift(v):
            if isinstance(v, Polynomial):
                if v.variables != names:
                    v = v.change_variables(names)
                return v
            return Polynomial.constant(f, names, v)

        mp = tuple(lift(m) for m in module_part)
        if len(mp) != self.rank:
            raise ValueError(f"module part must have length {self.rank}")
        return IdealizationElement(lift(ring_part), mp, self)

    def one(self) -> IdealizationElement:
        if self.is_finite:
            return IdealizationElement(self.algebra.one, self.module.zero(), self)
        return self.element(1, [0] * self.rank)

    def zero(self) -> IdealizationElement:
        if self.is_finite:
            return IdealizationElement(self.algebra.zero(), self.module.zero(), self)
        return self.element(0, [0] * self.rank)

    def add(self, a: IdealizationElement, b: IdealizationElement) -> IdealizationElement:
        if self.is_finite:
            return IdealizationElement(self.algebra.add(a.ring_part, b.ring_part),
                                       self.module.add(a.module_part, b.module_part), self)
        return IdealizationElement(a.ring_part + b.ring_part,
                                   tuple(x + y for x, y in zip(a.module_part, b.module_part)), self)

    def neg(self, a: IdealizationElement) -> IdealizationElement:
        f = self.field
        if self.is_finite:
            return IdealizationElement(tuple(f.reduce(-c) for c in a.ring_part),
                                       tuple(f.reduce(-c) for c in a.module_part), self)
        return IdealizationElement(-a.ring_part, tuple(-m for m in a.module_part), self)

    def act(self, r, m):
        if self.is_finite:
            return self.module.act(r, m)
        return tuple(r * x for x in m)

    def random_element(self, rng: random.Random) -> IdealizationElement:
        if not self.is_finite:
            raise TypeError("random elements need a finite model")
        return IdealizationElement(self.algebra.random_element(rng),
                                   tuple(self.field.random(rng) for _ in range(self.module.dim)), self)

    # -- finite model -----------------------------------------------------

    @property
    def dim(self) -> int:
        if not self.is_finite:
            raise TypeError("symbolic idealization has no finite dimension")
        return self.algebra.dim + self.module.dim

    def to_vector(self, a: IdealizationElement) -> tuple:
        return tuple(a.ring_part) + tuple(a.module_part)

    def from_vector(self, v: Sequence) -> IdealizationElement:
        n = self.algebra.dim
        return IdealizationElement(tuple(v[:n]), tuple(v[n:]), self)

    def as_algebra(self) -> FiniteAlgebra:
        """Multiplication table of the idealization on basis (e_i, 0), (0, m_j)."""
        if self._table is not None:
            return self._table
        if not self.is_finite:
            raise TypeError("need a finite model")
        alg, mod, f = self.algebra, self.module, self.field
        n, k = alg.dim, mod.dim
        table = [[() for _ in range(n + k)] for _ in range(n + k)]
        for i in range(n):
            for j in range(n):
                table[i][j] = alg.table[i][j]
            for j in range(k):
                col = tuple((n + r, mod.action[i][r][j]) for r in range(k) if mod.action[i][r][j])
                table[i][n + j] = col
                table[n + j][i] = col
        labels = [f"({lab},0)" for lab in alg.labels] + [f"(0,{lab})" for lab in mod.labels]
        one = tuple(alg.one) + (f.zero,) * k
        self._table = FiniteAlgebra(f, labels, table, one)
        return self._table

    def __repr__(self):
        if self.is_finite:
            return f"IdealizationRing(dim {self.algebra.dim} ⋆ dim {self.module.dim})"
        return f"IdealizationRing({self.field.name}[{','.join(self.poly_ring[1])}] ⋆ free rank {self.rank})"


@dataclass(frozen=True)
class IdealizationIdeal:
    generators: Tuple[IdealizationElement, ...]


def star_mul(a: IdealizationElement, b: IdealizationElement) -> IdealizationElement:
    """(a1, l1)·(a2, l2) = (a1 a2, a1 l2 + a2 l1)."""
    R = a.ring
    if R is None or b.ring is not R:
        raise ValueError("elements of different idealization rings")
    if R.is_finite:
        rp = R.algebra.mul(a.ring_part, b.ring_part)
        mp = R.module.add(R.module.act(a.ring_part, b.module_part), R.module.act(b.ring_part, a.module_part))
        return IdealizationElement(rp, mp, R)
    rp = a.ring_part * b.ring_part
    mp = tuple(a.ring_part * m2 + b.ring_part * m1 for m1, m2 in zip(a.module_part, b.module_part))
    return IdealizationElement(rp, mp, R)


def ideal_span(gens: Sequence[IdealizationElement], ring: IdealizationRing) -> Subspace:
    """k-basis of the ideal generated by ``gens`` in a finite idealization model."""
    if not ring.is_finite:
        raise BoundsError("ambient idealization is not finite-dimensional; reduce it first")
    alg = ring.as_algebra()
    return ideal_of(alg, [ring.to_vector(g) for g in gens])


@dataclass(frozen=True)
class QuotientModel:
    algebra: FiniteAlgebra
    kept: Tuple[int, ...]
    ideal: Subspace

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def project(self, v: Sequence) -> tuple:
        r = self.ideal.reduce(v)
        return tuple(r[i] for i in self.kept)


def quotient_model(ring, ideal) -> QuotientModel:
    """Finite algebra ring/ideal with basis and multiplication table.

    ``ring`` is an IdealizationRing (finite) or a FiniteAlgebra; ``ideal`` is
    an IdealizationIdeal, a list of generators, or an ideal Subspace.
    """
    if isinstance(ring, IdealizationRing):
        alg = ring.as_algebra()
        if isinstance(ideal, IdealizationIdeal):
            ideal = ideal_span(list(ideal.generators), ring)
        elif not isinstance(ideal, Subspace):
            ideal = ideal_span(list(ideal), ring)
    else:
        alg = ring
        if not isinstance(ideal, Subspace):
            ideal = ideal_of(alg, list(ideal))
    f = alg.field
    closed = ideal_of(alg, ideal.basis)
    if closed.dim != ideal.dim:
        raise BoundsError("the given subspace is not an ideal of the model")
    kept = tuple(ideal.complement_basis())

    def proj(v):
        r = ideal.reduce(v)
        return tuple(r[i] for i in kept)

    table = []
    for i in kept:
        row = []
        for j in kept:
            p = proj(alg.mul(alg.basis_vector(i), alg.basis_vector(j)))
            row.append(tuple((k, c) for k, c in enumerate(p) if c))
        table.append(row)
    one = proj(alg.one)
    labels = [alg.labels[i] for i in kept]
    return QuotientModel(FiniteAlgebra(f, labels, table, one), kept, ideal)


def embedding_dimension(model) -> int:
    """dim of m/m^2 over the residue field of a local finite model."""
    alg = model.as_algebra() if isinstance(model, IdealizationRing) else model
    if alg.dim == 0:
        raise BoundsError("zero ring has no maximal ideal")
    m = maximal_ideal(alg)
    m2 = product_space(alg, m, m)
    residue = alg.dim - m.dim
    gap = m.dim - m2.dim
    if gap % residue:
        raise BoundsError("m/m^2 is not a vector space over the residue field of the expected size")
    return gap // residue


def local_idealization_model(field: CoefficientField, names: Sequence[str], rank: int,
                             order: int = 3) -> IdealizationRing:
    """(k[names]_(names) ⋆ free rank n) modulo the order-th power of its maximal ideal.

    That quotient is k[names]/m^order ⋆ (k[names]/m^(order-1))^n.
    """
    base = local_truncation(field, names, order)
    if rank == 0:
        module = free_module(base, 0, [])
    else:
        mexps = [e for e in base.exponents if sum(e) < order - 1]
        module = free_module(base, rank, mexps)
    return IdealizationRing(base, module)
