"""Fractions in a localization of a polynomial ring at a monomial prime.

The prime is generated by a subset of the variables.  Optionally a further
subset of variables is inverted outright (the multiplicative set of their
monomials), which is how elements like Z/x of S_C are written.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence, Tuple

from .poly import Polynomial


def monomial_content(p: Polynomial, names: Sequence[str]) -> Tuple[int, ...]:
    """Largest monomial in ``names`` dividing ``p`` (exponent per variable)."""
    out = []
    for v in p.variables:
        if v in names and p.terms:
            out.append(p.min_degree(v))
        else:
            out.append(0)
    return tuple(out)


def _divide_monomial(p: Polynomial, e: Tuple[int, ...]) -> Polynomial:
    return Polynomial._raw(p.field, p.variables,
                           {tuple(a - b for a, b in zip(k, e)): c for k, c in p.terms.items()})


def outside_prime(p: Polynomial, prime: Sequence[str]) -> bool:
    """True iff ``p`` is not in the ideal generated by the ``prime`` variables."""
    idx = [p.variables.index(v) for v in prime]
    return any(all(e[i] == 0 for i in idx) for e in p.terms)


class LocalFraction:
    __slots__ = ("num", "den", "prime", "inverted")

    def __init__(self, num: Polynomial, den: Polynomial = None, prime: Sequence[str] = None,
                 inverted: Sequence[str] = ()):
        if den is None:
            den = Polynomial.constant(num.field, num.variables, 1)
        num._check(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        prime = tuple(num.variables if prime is None else prime)
        inverted = tuple(inverted)
        for v in prime + inverted:
            if v not in num.variables:
                raise ValueError(f"only primes generated by variables are supported; {v!r} is not a variable")
        # cancel the common monomial factor
        common = tuple(min(a, b) for a, b in zip(monomial_content(num, num.variables) if num.terms else (0,) * len(num.variables),
                                                 monomial_content(den, den.variables)))
        if any(common) and num.terms:
            num = _divide_monomial(num, common)
            den = _divide_monomial(den, common)
        content = monomial_content(den, inverted)
        unit = _divide_monomial(den, content)
        if not outside_prime(unit, prime):
            raise ValueError(f"denominator {den} is not a unit at the prime ({', '.join(prime)})")
        # exact cancellation when the denominator divides the numerator
        if not den.is_constant():
            q, r = divmod(num, den)
            if r.is_zero():
                num, den = q, Polynomial.constant(num.field, num.variables, 1)
        # normalize so the unit part has constant-free leading behaviour fixed
        lead = den.terms[max(den.terms, key=lambda e: (sum(e), e))]
        if lead != den.field.one:
            inv = den.field.inv(lead)
            num, den = num.scale(inv), den.scale(inv)
        self.num = num
        self.den = den
        self.prime = prime
        self.inverted = inverted

    @property
    def field(self):
        return self.num.field

    @property
    def variables(self):
        return self.num.variables

    def _like(self, num, den):
        return LocalFraction(num, den, self.prime, self.inverted)

    def _lift(self, other):
        if isinstance(other, LocalFraction):
            if other.prime != self.prime or other.inverted != self.inverted:
                raise ValueError("localization mismatch")
            return other
        if isinstance(other, Polynomial):
            return self._like(other, None)
        if isinstance(other, (int, Fraction)):
            return self._like(Polynomial.constant(self.field, self.variables, other), None)
        return NotImplemented

    def denominator_content(self) -> Tuple[int, ...]:
        """Exponents of the inverted variables in the denominator."""
        return monomial_content(self.den, self.inverted)

    def unit_part(self) -> Polynomial:
        return _divide_monomial(self.den, self.denominator_content())

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return self._like(self.num + other.num, self.den)
        return self._like(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return LocalFraction(-self.num, self.den, self.prime, self.inverted)

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
        return self._like(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if other.num.is_zero():
            raise ZeroDivisionError("division by zero fraction")
        return self._like(self.num * other.den, self.den * other.num)

    def __pow__(self, n: int):
        if n < 0:
            return self._like(self.den ** (-n), self.num ** (-n))
        return self._like(self.num ** n, self.den ** n)

    def __eq__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return False
        return self.num * other.den == other.num * self.den

    __hash__ = None

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __str__(self):
        if self.den.is_constant() and self.den.constant_term() == self.field.one:
            return str(self.num)
        n, d = str(self.num), str(self.den)
        if len(self.num.terms) > 1:
            n = f"({n})"
        if len(self.den.terms) > 1 or "*" in d:
            d = f"({d})"
        return f"{n}/{d}"

    def __repr__(self):
        return f"LocalFraction({self})"
