"""Exact linear algebra over coefficient fields."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .fields import CoefficientField
from .kernels import rref_modp

Vector = Tuple


@dataclass(frozen=True)
class MatrixOverRing:
    """Rectangular matrix; ``base`` is a field or a polynomial-ring descriptor."""

    entries: Tuple[Tuple, ...]
    base: object

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.entries)
        widths = {len(r) for r in rows}
        if len(widths) > 1:
            raise ValueError("matrix rows have different lengths")
        object.__setattr__(self, "entries", rows)

    @property
    def shape(self):
        return (len(self.entries), len(self.entries[0]) if self.entries else 0)


def rref(rows: Sequence[Sequence], field: CoefficientField, ncols: int = None):
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    rows = [list(r) for r in rows]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if not rows or ncols == 0:
        return [], []
    if field.p is not None:
        return rref_modp(rows, ncols, field.p)
    m = [[field.coerce(v) for v in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence], field: CoefficientField, ncols: int = None) -> int:
    return len(rref(rows, field, ncols)[1])


def mat_vec(field: CoefficientField, m: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(field.reduce(sum(a * b for a, b in zip(row, v))) for row in m)


def mat_mul(field: CoefficientField, a: Sequence[Sequence], b: Sequence[Sequence]) -> list:
    bt = list(zip(*b))
    return [[field.reduce(sum(x * y for x, y in zip(row, col))) for col in bt] for row in a]


def kernel(m: Sequence[Sequence], field: CoefficientField, ncols: int = None) -> List[tuple]:
    """Basis of {v : m v = 0}."""
    if ncols is None:
        ncols = len(m[0]) if m else 0
    red, pivots = rref(m, field, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [field.zero] * ncols
        v[fc] = field.one
        for row, pc in zip(red, pivots):
            v[pc] = field.reduce(-row[fc])
        basis.append(tuple(v))
    return basis


def linear_solve(M, target: Sequence, field: CoefficientField = None):
    """Solve ``M x = target`` exactly.

    Returns ``(solution or None, kernel_basis)``.  ``M`` may be a
    :class:`MatrixOverRing` whose base is a field, or a list of rows.
    """
    if isinstance(M, MatrixOverRing):
        if field is None:
            field = M.base
        rows = M.entries
    else:
        rows = M
    if not isinstance(field, CoefficientField):
        raise TypeError("linear_solve needs entries over a CoefficientField")
    nrows = len(rows)
    if len(target) != nrows:
        raise ValueError(f"dimension mismatch: {nrows} rows, target of length {len(target)}")
    ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [target[i]] for i, r in enumerate(rows)]
    red, pivots = rref(aug, field, ncols + 1)
    ker = kernel(rows, field, ncols) if ncols else []
    if ncols in pivots:
        return None, ker
    sol = [field.zero] * ncols
    for row, pc in zip(red, pivots):
        sol[pc] = field.reduce(row[ncols])
    return tuple(sol), ker


class Subspace:
    """A subspace of k^n stored as a reduced echelon basis."""

    __slots__ = ("field", "n", "basis", "pivots")

    def __init__(self, field: CoefficientField, n: int, vectors: Sequence[Sequence] = ()):
        self.field = field
        self.n = n
        vecs = [list(v) for v in vectors]
        if vecs:
            red, piv = rref(vecs, field, n)
        else:
            red, piv = [], []
        self.basis = [tuple(r) for r in red]
        self.pivots = list(piv)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce(self, v: Sequence) -> tuple:
        f = self.field
        v = [f.coerce(a) for a in v]
        for row, pc in zip(self.basis, self.pivots):
            c = v[pc]
            if not f.is_zero(c):
                v = [f.reduce(a - c * b) for a, b in zip(v, row)]
        return tuple(v)

    def contains(self, v: Sequence) -> bool:
        return all(self.field.is_zero(a) for a in self.reduce(v))

    def contains_space(self, other: "Subspace") -> bool:
        return all(self.contains(b) for b in other.basis)

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.n == other.n
                and self.basis == other.basis)

    def __hash__(self):
        return hash((self.n, tuple(self.basis)))

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace(self.field, self.n, self.basis + other.basis)

    def extend(self, vectors: Sequence[Sequence]) -> "Subspace":
        return Subspace(self.field, self.n, self.basis + [tuple(v) for v in vectors])

    def intersect(self, other: "Subspace") -> "Subspace":
        f = self.field
        if not self.basis or not other.basis:
            return Subspace(f, self.n)
        a, b = self.basis, other.basis
        # columns: coefficients on a then on b; rows: ambient coordinates
        cols = list(a) + [tuple(f.reduce(-x) for x in v) for v in b]
        m = [[cols[j][i] for j in range(len(cols))] for i in range(self.n)]
        ker = kernel(m, f, len(cols))
        vecs = []
        for k in ker:
            v = [f.zero] * self.n
            for coef, vec in zip(k[: len(a)], a):
                if not f.is_zero(coef):
                    v = [f.reduce(x + coef * y) for x, y in zip(v, vec)]
            vecs.append(v)
        return Subspace(f, self.n, vecs)

    def coordinates(self, v: Sequence) -> Optional[tuple]:
        """Coefficients of ``v`` on the echelon basis, or None if outside."""
        if not self.contains(v):
            return None
        return tuple(self.field.coerce(v[pc]) for pc in self.pivots)

    def complement_basis(self) -> List[int]:
        """Standard-basis indices spanning a complement."""
        return [i for i in range(self.n) if i not in self.pivots]

    def __repr__(self):
        return f"Subspace(dim={self.dim}, n={self.n})"


def unit_vector(field: CoefficientField, n: int, i: int) -> tuple:
    v = [field.zero] * n
    v[i] = field.one
    return tuple(v)
