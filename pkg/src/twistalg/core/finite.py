"""Finite-dimensional commutative algebras and modules given by tables.

Every infinite ring in the package is studied through one of these: a
quotient by a power of the maximal ideal (or a box of monomials), with an
explicit basis and structure constants.
"""

from __future__ import annotations

import itertools
import random
from typing import Dict, List, Optional, Sequence, Tuple

from ..errors import BoundsError
from .fields import CoefficientField
from .linalg import Subspace, rank, rref
from .poly import Polynomial

Vec = Tuple


class FiniteAlgebra:
    """Commutative unital algebra with basis e_0..e_{n-1}.

    ``table[i][j]`` is the sparse product e_i * e_j as ((k, c), ...).
    Monomial algebras also carry ``names`` and ``exponents``.
    """

    def __init__(self, field: CoefficientField, labels: Sequence[str], table, one: Sequence,
                 names: Sequence[str] = None, exponents: Sequence[tuple] = None, beyond=None):
        self.field = field
        self._beyond_fn = beyond
        self.labels = list(labels)
        self.table = table
        self.one = tuple(one)
        self.names = tuple(names) if names else None
        self.exponents = list(exponents) if exponents is not None else None
        self._index = {e: i for i, e in enumerate(self.exponents)} if self.exponents is not None else None
        self.modulus = None

    @property
    def dim(self) -> int:
        return len(self.labels)

    def zero(self) -> Vec:
        return (self.field.zero,) * self.dim

    def basis_vector(self, i: int) -> Vec:
        v = [self.field.zero] * self.dim
        v[i] = self.field.one
        return tuple(v)

    def add(self, a: Vec, b: Vec) -> Vec:
        f = self.field
        return tuple(f.reduce(x + y) for x, y in zip(a, b))

    def sub(self, a: Vec, b: Vec) -> Vec:
        f = self.field
        return tuple(f.reduce(x - y) for x, y in zip(a, b))

    def scale(self, c, a: Vec) -> Vec:
        f = self.field
        return tuple(f.reduce(c * x) for x in a)

    def mul(self, a: Vec, b: Vec) -> Vec:
        f = self.field
        out = [0] * self.dim
        nz_b = [(j, y) for j, y in enumerate(b) if y]
        for i, x in enumerate(a):
            if not x:
                continue
            row = self.table[i]
            for j, y in nz_b:
                xy = x * y
                for k, c in row[j]:
                    out[k] += xy * c
        return tuple(f.reduce(v) for v in out)

    def power(self, a: Vec, n: int) -> Vec:
        out = self.one
        for _ in range(n):
            out = self.mul(out, a)
        return out

    def is_zero(self, a: Vec) -> bool:
        return all(self.field.is_zero(x) for x in a)

    def left_matrix(self, a: Vec) -> list:
        """Matrix of b -> a*b (columns are images of basis vectors)."""
        cols = [self.mul(a, self.basis_vector(j)) for j in range(self.dim)]
        return [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)]

    def is_unit(self, a: Vec) -> bool:
        return rank(self.left_matrix(a), self.field, self.dim) == self.dim

    def is_nilpotent(self, a: Vec) -> bool:
        return self.is_zero(self.power(a, self.dim))

    def random_element(self, rng: random.Random) -> Vec:
        return tuple(self.field.random(rng) for _ in range(self.dim))

    # -- monomial helpers -------------------------------------------------

    def monomial(self, exps: tuple, coeff=1) -> Vec:
        if self._index is None:
            raise TypeError("not a monomial algebra")
        v = [self.field.zero] * self.dim
        i = self._index.get(tuple(exps))
        if i is not None:
            v[i] = self.field.coerce(coeff)
        return tuple(v)

    def from_polynomial(self, p: Polynomial) -> Vec:
        """Image of a polynomial (in ``names``) in a monomial algebra."""
        if self._index is None:
            raise TypeError("not a monomial algebra")
        if p.variables != self.names:
            p = p.change_variables(self.names)
        if self.modulus is not None:
            p = p % self.modulus
        v = [0] * self.dim
        for e, c in p.terms.items():
            i = self._index.get(e)
            if i is not None:
                v[i] += c
            elif not self._beyond(e):
                raise BoundsError(f"monomial {e} is neither a basis element nor in the truncation ideal")
        return tuple(self.field.reduce(x) for x in v)

    def to_polynomial(self, v: Vec) -> Polynomial:
        if self._index is None:
            raise TypeError("not a monomial algebra")
        return Polynomial(self.field, self.names, {e: c for e, c in zip(self.exponents, v) if c})

    def _beyond(self, e) -> bool:
        # monomials outside the basis are zero only if they lie in the truncation ideal
        return self._beyond_fn is not None and self._beyond_fn(e)

    def __repr__(self):
        return f"FiniteAlgebra(dim={self.dim}, field={self.field.name})"


def _table_from_exponents(field, exponents, index):
    one = field.one
    table = []
    for a in exponents:
        row = []
        for b in exponents:
            k = index.get(tuple(x + y for x, y in zip(a, b)))
            row.append(((k, one),) if k is not None else ())
        table.append(row)
    return table


def _label(names, e):
    s = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
    return s or "1"


def monomial_algebra(field: CoefficientField, names: Sequence[str], exponents: Sequence[tuple], beyond=None) -> FiniteAlgebra:
    """k-span of the given monomials; products landing outside are zero.

    The complement of ``exponents`` inside the semigroup they generate must
    be closed under multiplication by them (true for the truncations below).
    """
    exponents = sorted({tuple(e) for e in exponents}, key=lambda e: (sum(e), e))
    zero = (0,) * len(names)
    if zero not in exponents:
        raise ValueError("monomial algebra must contain 1")
    index = {e: i for i, e in enumerate(exponents)}
    table = _table_from_exponents(field, exponents, index)
    one = [field.zero] * len(exponents)
    one[index[zero]] = field.one
    return FiniteAlgebra(field, [_label(names, e) for e in exponents], table, one, names, exponents, beyond)


def box_algebra(field: CoefficientField, names: Sequence[str], bounds: Sequence[int]) -> FiniteAlgebra:
    """k[names]/(name_i^bound_i)."""
    if any(b < 1 for b in bounds):
        raise BoundsError("box bounds must be positive")
    exps = list(itertools.product(*[range(b) for b in bounds]))
    bounds = tuple(bounds)
    return monomial_algebra(field, names, exps, lambda e: any(k >= b for k, b in zip(e, bounds)))


def local_truncation(field: CoefficientField, names: Sequence[str], order: int) -> FiniteAlgebra:
    """k[names]/m^order with m the ideal of the variables."""
    n = len(names)
    exps = [e for e in itertools.product(range(order), repeat=n) if sum(e) < order]
    return monomial_algebra(field, names, exps, lambda e: sum(e) >= order)


def semigroup_algebra(field: CoefficientField, name: str, generators: Sequence[int], bound: int) -> FiniteAlgebra:
    """k[t^g : g in generators] modulo monomials of degree >= bound."""
    reach = {0}
    frontier = [0]
    while frontier:
        a = frontier.pop()
        for g in generators:
            b = a + g
            if b < bound and b not in reach:
                reach.add(b)
                frontier.append(b)
    return monomial_algebra(field, (name,), [(e,) for e in reach], lambda e: e[0] >= bound)


def polynomial_quotient_algebra(modulus: Polynomial) -> FiniteAlgebra:
    """k[t]/(g) with basis 1, t, ..., t^(deg g - 1)."""
    field, names = modulus.field, modulus.variables
    if len(names) != 1:
        raise ValueError("need a univariate modulus")
    d = modulus.degree()
    if d < 1:
        raise ValueError("modulus must have positive degree")
    t = Polynomial.var(field, names, names[0])
    table = []
    for i in range(d):
        row = []
        for j in range(d):
            r = (t ** (i + j)) % modulus
            row.append(tuple((e[0], c) for e, c in sorted(r.terms.items())))
        table.append(row)
    one = [field.zero] * d
    one[0] = field.one
    labels = [_label(names, (i,)) for i in range(d)]
    alg = FiniteAlgebra(field, labels, table, one, names, [(i,) for i in range(d)])
    alg.modulus = modulus
    return alg


class FiniteModule:
    """Finite-dimensional module over a FiniteAlgebra.

    ``action[i]`` is the matrix of multiplication by algebra basis element i
    (column j is the image of module basis vector j).
    """

    def __init__(self, algebra: FiniteAlgebra, labels: Sequence[str], action: Sequence[Sequence[Sequence]]):
        self.algebra = algebra
        self.field = algebra.field
        self.labels = list(labels)
        self.action = [[list(r) for r in mat] for mat in action]
        if len(self.action) != algebra.dim:
            raise ValueError("need one action matrix per algebra basis element")
        n = len(self.labels)
        # sparse columns: _cols[i][j] lists the nonzero (k, entry) of column j of action[i]
        self._cols = [[[(k, mat[k][j]) for k in range(n) if mat[k][j]] for j in range(n)] for mat in self.action]

    @property
    def dim(self) -> int:
        return len(self.labels)

    def zero(self) -> Vec:
        return (self.field.zero,) * self.dim

    def act(self, a: Vec, m: Vec) -> Vec:
        f = self.field
        out = [0] * len(self.labels)
        for i, c in enumerate(a):
            if not c:
                continue
            cols = self._cols[i]
            for j, mj in enumerate(m):
                if mj:
                    cm = c * mj
                    for k, v in cols[j]:
                        out[k] += cm * v
        return tuple(f.reduce(v) for v in out)

    def add(self, a: Vec, b: Vec) -> Vec:
        f = self.field
        return tuple(f.reduce(x + y) for x, y in zip(a, b))

    def check_module_axioms(self) -> bool:
        """(ab)m = a(bm) and 1m = m on basis elements."""
        alg = self.algebra
        for j in range(self.dim):
            m = tuple(self.field.one if k == j else self.field.zero for k in range(self.dim))
            if self.act(alg.one, m) != m:
                return False
            for a in range(alg.dim):
                ea = alg.basis_vector(a)
                for b in range(alg.dim):
                    eb = alg.basis_vector(b)
                    if self.act(alg.mul(ea, eb), m) != self.act(ea, self.act(eb, m)):
                        return False
        return True

    def __repr__(self):
        return f"FiniteModule(dim={self.dim}, over algebra of dim {self.algebra.dim})"


def free_module(algebra: FiniteAlgebra, rank_: int, truncate_exponents: Sequence[tuple] = None) -> FiniteModule:
    """(algebra)^rank, optionally cut down to the monomials in ``truncate_exponents``.

    The cut-down version is A^rank / (monomials outside the set)·A^rank, so it
    is only valid for monomial algebras and downward-closed exponent sets.
    """
    f = algebra.field
    if truncate_exponents is None:
        labels = [f"{lab}*e{r + 1}" for r in range(rank_) for lab in algebra.labels]
        n = algebra.dim
        action = []
        for i in range(algebra.dim):
            mat = [[f.zero] * (n * rank_) for _ in range(n * rank_)]
            for r in range(rank_):
                for j in range(n):
                    for k, c in algebra.table[i][j]:
                        mat[r * n + k][r * n + j] = c
            action.append(mat)
        return FiniteModule(algebra, labels, action)
    if algebra.exponents is None:
        raise TypeError("truncated free modules need a monomial algebra")
    mexps = sorted({tuple(e) for e in truncate_exponents}, key=lambda e: (sum(e), e))
    idx = {e: i for i, e in enumerate(mexps)}
    n = len(mexps)
    labels = [f"{_label(algebra.names, e)}*e{r + 1}" for r in range(rank_) for e in mexps]
    action = []
    for a in algebra.exponents:
        mat = [[f.zero] * (n * rank_) for _ in range(n * rank_)]
        for r in range(rank_):
            for j, e in enumerate(mexps):
                k = idx.get(tuple(x + y for x, y in zip(a, e)))
                if k is not None:
                    mat[r * n + k][r * n + j] = f.one
        action.append(mat)
    return FiniteModule(algebra, labels, action)


def module_from_generator_action(algebra: FiniteAlgebra, labels: Sequence[str], generator_mats: Dict[str, list]) -> FiniteModule:
    """Module over a monomial algebra from the matrices of its variables."""
    if algebra.exponents is None:
        raise TypeError("need a monomial algebra")
    f = algebra.field
    n = len(labels)
    ident = [[f.one if i == j else f.zero for j in range(n)] for i in range(n)]

    def mm(a, b):
        return [[f.reduce(sum(a[i][k] * b[k][j] for k in range(n))) for j in range(n)] for i in range(n)]

    cache = {}

    def power(name, k):
        key = (name, k)
        if key not in cache:
            out = ident
            for _ in range(k):
                out = mm(out, generator_mats[name])
            cache[key] = out
        return cache[key]

    action = []
    for e in algebra.exponents:
        mat = ident
        for name, k in zip(algebra.names, e):
            if k:
                mat = mm(mat, power(name, k))
        action.append(mat)
    mod = FiniteModule(algebra, labels, action)
    # products that fall outside the monomial basis are zero in the algebra, so
    # they must act as zero on the module
    for a in algebra.exponents:
        for b in algebra.exponents:
            s = tuple(x + y for x, y in zip(a, b))
            if s in algebra._index:
                continue
            mat = ident
            for name, k in zip(algebra.names, s):
                if k:
                    mat = mm(mat, power(name, k))
            if any(v for row in mat for v in row):
                raise BoundsError(
                    f"monomial {_label(algebra.names, s)} is zero in the algebra but acts nontrivially on the module")
    return mod


def direct_sum(m1: FiniteModule, m2: FiniteModule) -> FiniteModule:
    if m1.algebra is not m2.algebra:
        raise ValueError("modules over different algebras")
    f = m1.field
    n1, n2 = m1.dim, m2.dim
    action = []
    for a1, a2 in zip(m1.action, m2.action):
        mat = [[f.zero] * (n1 + n2) for _ in range(n1 + n2)]
        for i in range(n1):
            for j in range(n1):
                mat[i][j] = a1[i][j]
        for i in range(n2):
            for j in range(n2):
                mat[n1 + i][n1 + j] = a2[i][j]
        action.append(mat)
    return FiniteModule(m1.algebra, [f"{l}|1" for l in m1.labels] + [f"{l}|2" for l in m2.labels], action)


# -- ideals and submodules inside finite models -------------------------------


def ideal_of(algebra: FiniteAlgebra, generators: Sequence[Vec]) -> Subspace:
    """k-basis of the ideal generated by ``generators``.

    Saturates under multiplication by the algebra basis until stable.
    """
    f = algebra.field
    span = Subspace(f, algebra.dim, [g for g in generators if not algebra.is_zero(g)])
    while True:
        new = [algebra.mul(v, algebra.basis_vector(j)) for v in span.basis for j in range(algebra.dim)]
        grown = span.extend(new)
        if grown.dim == span.dim:
            return span
        span = grown


def product_space(algebra: FiniteAlgebra, a: Subspace, b: Subspace) -> Subspace:
    return Subspace(algebra.field, algebra.dim, [algebra.mul(u, v) for u in a.basis for v in b.basis])


def maximal_ideal(algebra: FiniteAlgebra) -> Subspace:
    """Maximal ideal of a local model.

    Every basis element must be a unit or nilpotent; the nilpotent ones
    span the maximal ideal.
    """
    nil = []
    for i in range(algebra.dim):
        e = algebra.basis_vector(i)
        if algebra.is_nilpotent(e):
            nil.append(e)
        elif not algebra.is_unit(e):
            raise BoundsError(f"basis element {algebra.labels[i]} is neither a unit nor nilpotent: model is not local")
    m = Subspace(algebra.field, algebra.dim, nil)
    # nilpotents spanning a proper ideal of codimension >= 1
    if m.dim == algebra.dim:
        raise BoundsError("model has no unit: not local")
    check = ideal_of(algebra, m.basis)
    if check.dim != m.dim:
        raise BoundsError("nilpotent basis elements do not span an ideal: model is not local")
    return m


def submodule_of(module: FiniteModule, generators: Sequence[Vec]) -> Subspace:
    f = module.field
    alg = module.algebra
    span = Subspace(f, module.dim, generators)
    while True:
        new = [module.act(alg.basis_vector(i), v) for v in span.basis for i in range(alg.dim)]
        grown = span.extend(new)
        if grown.dim == span.dim:
            return span
        span = grown


def ideal_times_module(module: FiniteModule, ideal: Subspace, sub: Subspace = None) -> Subspace:
    if sub is None:
        sub = Subspace(module.field, module.dim, [tuple(1 if i == j else 0 for i in range(module.dim)) for j in range(module.dim)])
    return Subspace(module.field, module.dim, [module.act(a, m) for a in ideal.basis for m in sub.basis])
