"""Smith normal form over k[x], and over k[x]/(x^N) by lifting.

``smith_normal_form(M)`` returns U, D, V with U*M*V = D, U and V
invertible over k[x] and the diagonal of D a monic divisibility chain.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence

from ..errors import PrecisionError
from .linalg import MatrixOverRing
from .poly import Polynomial
from .series import AtLeast


@dataclass(frozen=True)
class SmithForm:
    U: list
    D: list
    V: list
    invariant_factors: list
    truncation: Optional[int] = None

    @property
    def rank(self) -> int:
        return sum(1 for d in self.invariant_factors if not d.is_zero())

    def valuations(self) -> list:
        """x-adic valuation of each invariant factor (sentinel when zero mod x^N)."""
        out = []
        for d in self.invariant_factors:
            if d.is_zero():
                out.append(AtLeast(self.truncation) if self.truncation else None)
                continue
            v = d.min_degree(d.variables[0])
            if self.truncation is not None and v >= self.truncation:
                out.append(AtLeast(self.truncation))
            else:
                out.append(v)
        return out


def _identity(ring_one, ring_zero, n):
    return [[ring_one if i == j else ring_zero for j in range(n)] for i in range(n)]


def poly_mat_mul(a: Sequence[Sequence[Polynomial]], b: Sequence[Sequence[Polynomial]], zero: Polynomial):
    out = []
    for row in a:
        new_row = []
        for j in range(len(b[0])):
            acc = zero
            for k, x in enumerate(row):
                if not x.is_zero() and not b[k][j].is_zero():
                    acc = acc + x * b[k][j]
            new_row.append(acc)
        out.append(new_row)
    return out


def _entries(M):
    if isinstance(M, MatrixOverRing):
        return [list(r) for r in M.entries]
    return [list(r) for r in M]


def smith_normal_form(M, truncation: int = None) -> SmithForm:
    """Smith form of a matrix of univariate polynomials.

    With ``truncation=N`` the input is read as a matrix over k[x]/(x^N):
    the computation runs over k[x] on the lifted entries and U, D, V are
    reduced mod x^N afterwards.
    """
    A = _entries(M)
    if not A or not A[0]:
        raise ValueError("empty matrix")
    sample = A[0][0]
    if not isinstance(sample, Polynomial) or len(sample.variables) != 1:
        raise TypeError("unsupported base ring: need univariate polynomials over a field")
    field, variables = sample.field, sample.variables
    for row in A:
        for e in row:
            if not isinstance(e, Polynomial) or e.variables != variables or e.field != field:
                raise TypeError("unsupported base ring: mixed entry types")
    zero = Polynomial.zero(field, variables)
    one = Polynomial.constant(field, variables, 1)
    m, n = len(A), len(A[0])
    U = _identity(one, zero, m)
    V = _identity(one, zero, n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for row in A:
            row[dst] = row[dst] + q * row[src]
        for row in V:
            row[dst] = row[dst] + q * row[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if not A[i][j].is_zero():
                    d = A[i][j].degree()
                    if best is None or d < best[0]:
                        best = (d, i, j)
        if best is None:
            break
        while True:
            _, i, j = best
            swap_rows(t, i)
            swap_cols(t, j)
            piv = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if not A[i][t].is_zero():
                    q, r = divmod(A[i][t], piv)
                    add_row(i, t, -q)
                    if not r.is_zero():
                        clean = False
            for j in range(t + 1, n):
                if not A[t][j].is_zero():
                    q, r = divmod(A[t][j], piv)
                    add_col(j, t, -q)
                    if not r.is_zero():
                        clean = False
            if clean:
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if not (A[i][j] % piv).is_zero():
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                add_row(t, bad, one)
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if not A[i][j].is_zero():
                        d = A[i][j].degree()
                        if best is None or d < best[0]:
                            best = (d, i, j)
        lc_inv = field.inv(A[t][t].leading_coefficient())
        if lc_inv != field.one:
            A[t] = [a.scale(lc_inv) for a in A[t]]
            U[t] = [a.scale(lc_inv) for a in U[t]]
        t += 1

    if truncation is not None:
        x = Polynomial.var(field, variables, variables[0])
        modulus = x ** truncation
        A = [[e % modulus for e in row] for row in A]
        U = [[e % modulus for e in row] for row in U]
        V = [[e % modulus for e in row] for row in V]
    diag = [A[i][i] for i in range(min(m, n))]
    return SmithForm(U, A, V, diag, truncation)


def check_divisibility_chain(factors: Sequence[Polynomial]) -> bool:
    nz = list(factors)
    for a, b in zip(nz, nz[1:]):
        if a.is_zero():
            if not b.is_zero():
                return False
            continue
        if not a.divides(b):
            return False
    return True
