"""Coefficient fields: the rationals and prime fields.

Elements are plain Python values (``Fraction`` for Q, ``int`` in ``[0, p)``
for F_p).  Callers do arithmetic with the native operators and pass the
result through :meth:`CoefficientField.reduce`.
"""

from __future__ import annotations

import random
import re
from fractions import Fraction
from typing import Iterator, Optional


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class CoefficientField:
    __slots__ = ("p",)

    def __init__(self, p: Optional[int] = None):
        if p is not None and not _is_prime(p):
            raise ValueError(f"prime field needs a prime modulus, got {p}")
        self.p = p

    @classmethod
    def rationals(cls) -> "CoefficientField":
        return cls(None)

    @classmethod
    def prime(cls, p: int) -> "CoefficientField":
        return cls(p)

    @classmethod
    def parse(cls, name: str) -> "CoefficientField":
        """Accepts ``Q``, ``QQ``, ``F5``, ``GF5`` or ``GF(5)``."""
        s = name.strip()
        if s in ("Q", "QQ"):
            return cls(None)
        m = re.fullmatch(r"(?:F|GF)\(?(\d+)\)?", s)
        if not m:
            raise ValueError(f"unknown field {name!r}")
        return cls(int(m.group(1)))

    @property
    def kind(self) -> str:
        return "rationals" if self.p is None else "prime-field"

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    @property
    def is_finite(self) -> bool:
        return self.p is not None

    @property
    def name(self) -> str:
        return "Q" if self.p is None else f"F{self.p}"

    def __eq__(self, other):
        return isinstance(other, CoefficientField) and other.p == self.p

    def __hash__(self):
        return hash(("field", self.p))

    def __repr__(self):
        return f"CoefficientField({self.name})"

    # -- element handling -------------------------------------------------

    @property
    def zero(self):
        return Fraction(0) if self.p is None else 0

    @property
    def one(self):
        return Fraction(1) if self.p is None else 1

    def reduce(self, v):
        if self.p is None:
            return v if isinstance(v, Fraction) else Fraction(v)
        return v % self.p

    def coerce(self, v):
        if self.p is None:
            return Fraction(v)
        if isinstance(v, Fraction):
            if v.denominator % self.p == 0:
                raise ZeroDivisionError(f"{v} has no image in F{self.p}")
            return v.numerator * pow(v.denominator, -1, self.p) % self.p
        return int(v) % self.p

    def inv(self, v):
        if self.is_zero(v):
            raise ZeroDivisionError("inverse of zero")
        if self.p is None:
            return 1 / Fraction(v)
        return pow(v, -1, self.p)

    def div(self, a, b):
        return self.reduce(a * self.inv(b))

    def neg(self, v):
        return self.reduce(-v)

    def is_zero(self, v) -> bool:
        if self.p is None:
            return v == 0
        return v % self.p == 0

    def elements(self) -> Iterator:
        if self.p is None:
            raise ValueError("Q is infinite")
        return iter(range(self.p))

    def small_elements(self, height: int = 2) -> list:
        """All of F_p, or the rationals a/b with |a|, b <= height."""
        if self.p is not None:
            return list(range(self.p))
        out = {Fraction(0)}
        for b in range(1, height + 1):
            for a in range(-height, height + 1):
                out.add(Fraction(a, b))
        return sorted(out)

    def random(self, rng: random.Random, height: int = 5):
        if self.p is not None:
            return rng.randrange(self.p)
        num = rng.randint(-height, height)
        den = rng.randint(1, height)
        return Fraction(num, den)

    def format(self, v) -> str:
        if self.p is not None:
            return str(v)
        v = Fraction(v)
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


QQ = CoefficientField(None)
