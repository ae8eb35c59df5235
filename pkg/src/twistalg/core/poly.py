"""Sparse multivariate polynomials over a :class:`CoefficientField`.

Terms are stored as ``{exponent tuple: coefficient}`` with no zero
coefficients.  Multivariate reduction uses graded lexicographic order
(total degree first, then lexicographic in the declared variable order).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Mapping, Sequence, Tuple

from .fields import CoefficientField

Exps = Tuple[int, ...]


def grlex_key(e: Exps):
    return (sum(e), e)


class Polynomial:
    __slots__ = ("field", "variables", "terms", "_hash")

    def __init__(self, field: CoefficientField, variables: Sequence[str],
                 terms: Mapping[Exps, object] = None):
        self.field = field
        self.variables = tuple(variables)
        n = len(self.variables)
        clean: Dict[Exps, object] = {}
        if terms:
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != n:
                    raise ValueError(f"exponent {e} does not match variables {self.variables}")
                c = field.coerce(c)
                if not field.is_zero(c):
                    clean[e] = c
        self.terms = clean
        self._hash = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def _raw(cls, field, variables, terms):
        p = cls.__new__(cls)
        p.field = field
        p.variables = variables
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, field, variables):
        return cls._raw(field, tuple(variables), {})

    @classmethod
    def constant(cls, field, variables, c):
        variables = tuple(variables)
        c = field.coerce(c)
        if field.is_zero(c):
            return cls.zero(field, variables)
        return cls._raw(field, variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, field, variables, name, power=1):
        variables = tuple(variables)
        if name not in variables:
            raise ValueError(f"unknown variable {name!r}")
        e = tuple(power if v == name else 0 for v in variables)
        return cls._raw(field, variables, {e: field.one})

    @classmethod
    def monomial(cls, field, variables, exps, coeff=1):
        return cls(field, variables, {tuple(exps): field.coerce(coeff)})

    # -- basic protocol ---------------------------------------------------

    def _check(self, other: "Polynomial"):
        if other.field != self.field or other.variables != self.variables:
            raise ValueError(
                f"polynomial ring mismatch: {self.field.name}{list(self.variables)} vs "
                f"{other.field.name}{list(other.variables)}")

    def _lift(self, other):
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.field, self.variables, other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.field, self.variables, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return (self.field == other.field and self.variables == other.variables
                and self.terms == other.terms)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.variables, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_term(self):
        return self.terms.get((0,) * len(self.variables), self.field.zero)

    # -- ring operations --------------------------------------------------

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        f = self.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = f.reduce(out.get(e, 0) + c)
            if f.is_zero(v):
                out.pop(e, None)
            else:
                out[e] = v
        return Polynomial._raw(f, self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        f = self.field
        return Polynomial._raw(f, self.variables, {e: f.reduce(-c) for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        f = self.field
        out: Dict[Exps, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        res = {}
        for e, c in out.items():
            c = f.reduce(c)
            if not f.is_zero(c):
                res[e] = c
        return Polynomial._raw(f, self.variables, res)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Polynomial.constant(self.field, self.variables, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c):
        f = self.field
        c = f.coerce(c)
        return Polynomial(f, self.variables, {e: v * c for e, v in self.terms.items()})

    # -- degrees and leading terms ----------------------------------------

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree(self, var: str = None) -> int:
        if var is None:
            if len(self.variables) != 1:
                return self.total_degree()
            var = self.variables[0]
        i = self.variables.index(var)
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def min_degree(self, var: str) -> int:
        i = self.variables.index(var)
        if not self.terms:
            return -1
        return min(e[i] for e in self.terms)

    def leading_exponent(self) -> Exps:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return max(self.terms, key=grlex_key)

    def leading_coefficient(self):
        return self.terms[self.leading_exponent()]

    def monic(self) -> "Polynomial":
        return self.scale(self.field.inv(self.leading_coefficient()))

    # -- division ---------------------------------------------------------

    def __divmod__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        f = self.field
        lead_e = other.leading_exponent()
        lead_inv = f.inv(other.terms[lead_e])
        q: Dict[Exps, object] = {}
        r: Dict[Exps, object] = {}
        p = dict(self.terms)
        while p:
            e = max(p, key=grlex_key)
            c = p[e]
            if all(a >= b for a, b in zip(e, lead_e)):
                te = tuple(a - b for a, b in zip(e, lead_e))
                tc = f.reduce(c * lead_inv)
                q[te] = f.reduce(q.get(te, 0) + tc)
                for e2, c2 in other.terms.items():
                    ee = tuple(a + b for a, b in zip(te, e2))
                    v = f.reduce(p.get(ee, 0) - tc * c2)
                    if f.is_zero(v):
                        p.pop(ee, None)
                    else:
                        p[ee] = v
            else:
                r[e] = c
                del p[e]
        return (Polynomial(f, self.variables, q), Polynomial(f, self.variables, r))

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def reduce_by(self, divisors: Sequence["Polynomial"]) -> "Polynomial":
        """Remainder of multivariate division by a list of polynomials (grlex)."""
        f = self.field
        divs = [(d.leading_exponent(), f.inv(d.leading_coefficient()), d)
                for d in divisors if not d.is_zero()]
        p = dict(self.terms)
        r: Dict[Exps, object] = {}
        while p:
            e = max(p, key=grlex_key)
            c = p[e]
            for le, linv, d in divs:
                if all(a >= b for a, b in zip(e, le)):
                    te = tuple(a - b for a, b in zip(e, le))
                    tc = f.reduce(c * linv)
                    for e2, c2 in d.terms.items():
                        ee = tuple(a + b for a, b in zip(te, e2))
                        v = f.reduce(p.get(ee, 0) - tc * c2)
                        if f.is_zero(v):
                            p.pop(ee, None)
                        else:
                            p[ee] = v
                    break
            else:
                r[e] = c
                del p[e]
        return Polynomial._raw(f, self.variables, r)

    def divides(self, other: "Polynomial") -> bool:
        return divmod(other, self)[1].is_zero()

    # -- univariate helpers -----------------------------------------------

    def gcd(self, other: "Polynomial") -> "Polynomial":
        """Monic gcd; univariate only."""
        if len(self.variables) != 1:
            raise ValueError("gcd is only available for univariate polynomials")
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a if a.is_zero() else a.monic()

    def coefficient_list(self) -> list:
        """Dense coefficients (ascending) of a univariate polynomial."""
        if len(self.variables) != 1:
            raise ValueError("coefficient_list needs a univariate polynomial")
        d = self.degree()
        out = [self.field.zero] * (d + 1)
        for (k,), c in self.terms.items():
            out[k] = c
        return out

    # -- calculus and substitution ----------------------------------------

    def derivative(self, var: str) -> "Polynomial":
        i = self.variables.index(var)
        f = self.field
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1:]
                out[ne] = f.reduce(c * e[i])
        return Polynomial(f, self.variables, out)

    def coefficients_in(self, var: str) -> Dict[int, "Polynomial"]:
        """Split as sum_j c_j * var^j; the c_j keep the full variable list."""
        i = self.variables.index(var)
        parts: Dict[int, Dict[Exps, object]] = {}
        for e, c in self.terms.items():
            k = e[i]
            parts.setdefault(k, {})[e[:i] + (0,) + e[i + 1:]] = c
        return {k: Polynomial._raw(self.field, self.variables, t) for k, t in parts.items()}

    def substitute(self, values: Mapping[str, "Polynomial"]) -> "Polynomial":
        """Replace variables by polynomials over the same ring."""
        result = Polynomial.zero(self.field, self.variables)
        powers: Dict[Tuple[int, int], Polynomial] = {}
        for e, c in self.terms.items():
            term = Polynomial.constant(self.field, self.variables, c)
            for i, k in enumerate(e):
                if not k:
                    continue
                name = self.variables[i]
                if name in values:
                    key = (i, k)
                    if key not in powers:
                        powers[key] = values[name] ** k
                    term = term * powers[key]
                else:
                    term = term * Polynomial.var(self.field, self.variables, name, k)
            result = result + term
        return result

    def evaluate(self, point: Mapping[str, object]):
        """Evaluate at field values; every variable must be assigned."""
        f = self.field
        total = 0
        for e, c in self.terms.items():
            v = c
            for name, k in zip(self.variables, e):
                if k:
                    v = v * f.coerce(point[name]) ** k
            total += v
        return f.reduce(total)

    def change_variables(self, variables: Sequence[str]) -> "Polynomial":
        """Re-express over a variable list containing every variable in use."""
        variables = tuple(variables)
        idx = []
        for i, v in enumerate(self.variables):
            if v in variables:
                idx.append((i, variables.index(v)))
            elif any(e[i] for e in self.terms):
                raise ValueError(f"variable {v!r} is used but not in {variables}")
        out = {}
        for e, c in self.terms.items():
            ne = [0] * len(variables)
            for i, j in idx:
                ne[j] = e[i]
            out[tuple(ne)] = c
        return Polynomial._raw(self.field, variables, out)

    def uses(self) -> set:
        return {v for i, v in enumerate(self.variables) if any(e[i] for e in self.terms)}

    # -- printing ---------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        f = self.field
        parts = []
        for e in sorted(self.terms, key=grlex_key, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                (v if k == 1 else f"{v}^{k}") for v, k in zip(self.variables, e) if k)
            cs = f.format(c)
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            else:
                if "/" in cs:
                    cs = f"({cs})"
                parts.append(f"{cs}*{mono}")
        s = " + ".join(parts)
        return s.replace("+ -", "- ")

    def __repr__(self):
        return f"Polynomial({self}, {self.field.name}[{','.join(self.variables)}])"


def poly_arith(op: str, a: Polynomial, b: Polynomial):
    """Dispatch ``add``, ``mul`` or ``divmod`` on two polynomials."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "divmod":
        return divmod(a, b)
    raise ValueError(f"unknown polynomial operation {op!r}")


def polynomial_ring(field: CoefficientField, names: Iterable[str]):
    """Return the generators of ``field[names]`` as polynomials."""
    names = tuple(names)
    return tuple(Polynomial.var(field, names, n) for n in names)
