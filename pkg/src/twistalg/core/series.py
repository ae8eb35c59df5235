"""Truncated univariate power series and precision-tracked Laurent series."""

from __future__ import annotations

import math
from typing import List, Optional, Sequence

from ..errors import PrecisionError
from .fields import CoefficientField
from .kernels import series_mul_modp


class AtLeast:
    """Valuation of a series that vanishes to the known precision.

    Deliberately not ordered against integers: callers must raise the
    precision or report the value as indeterminate.
    """

    __slots__ = ("bound",)

    def __init__(self, bound: int):
        self.bound = bound

    def __eq__(self, other):
        return isinstance(other, AtLeast) and other.bound == self.bound

    def __hash__(self):
        return hash(("AtLeast", self.bound))

    def __str__(self):
        return f"≥ {self.bound}"

    def __repr__(self):
        return f"AtLeast({self.bound})"

    def to_json(self):
        return {"at_least": self.bound}


def _mul_lists(field: CoefficientField, a: Sequence, b: Sequence, n: int) -> list:
    if n <= 0:
        return []
    if field.p is not None:
        return series_mul_modp(a, b, n, field.p)
    out = [field.zero] * n
    for i, ai in enumerate(a[:n]):
        if ai:
            for j, bj in enumerate(b[: n - i]):
                if bj:
                    out[i + j] += ai * bj
    return out


def _inverse_list(field: CoefficientField, a: Sequence, n: int) -> list:
    """Inverse of a unit power series given by ``a``, to ``n`` terms."""
    a0inv = field.inv(a[0])
    b = [field.zero] * n
    if n == 0:
        return b
    b[0] = a0inv
    for k in range(1, n):
        s = 0
        for i in range(1, min(k, len(a) - 1) + 1):
            if a[i]:
                s += a[i] * b[k - i]
        b[k] = field.reduce(-s * a0inv)
    return b


class TruncatedSeries:
    """An element of k[[x]]/(x^N)."""

    __slots__ = ("field", "precision", "coeffs", "var")

    def __init__(self, field: CoefficientField, precision: int, coeffs: Sequence = (), var: str = "x"):
        if precision < 1:
            raise ValueError("precision must be positive")
        c = [field.coerce(v) for v in list(coeffs)[:precision]]
        c += [field.zero] * (precision - len(c))
        self.field = field
        self.precision = precision
        self.coeffs = tuple(c)
        self.var = var

    @classmethod
    def monomial(cls, field, precision, k, coeff=1, var="x"):
        c = [0] * precision
        if k < precision:
            c[k] = coeff
        return cls(field, precision, c, var)

    @classmethod
    def from_exponents(cls, field, precision, exponents, var="x"):
        c = [0] * precision
        for k in exponents:
            if k < precision:
                c[k] = field.reduce(c[k] + 1)
        return cls(field, precision, c, var)

    def _check(self, other: "TruncatedSeries"):
        if not isinstance(other, TruncatedSeries):
            raise TypeError("expected a TruncatedSeries")
        if other.precision != self.precision:
            raise ValueError(f"precision mismatch: {self.precision} vs {other.precision}")
        if other.field != self.field:
            raise ValueError("field mismatch")

    def __eq__(self, other):
        return (isinstance(other, TruncatedSeries) and self.field == other.field
                and self.precision == other.precision and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.field, self.precision, self.coeffs))

    def __add__(self, other):
        self._check(other)
        f = self.field
        return TruncatedSeries(f, self.precision, [f.reduce(a + b) for a, b in zip(self.coeffs, other.coeffs)], self.var)

    def __neg__(self):
        f = self.field
        return TruncatedSeries(f, self.precision, [f.reduce(-a) for a in self.coeffs], self.var)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int,)) or not isinstance(other, TruncatedSeries):
            c = self.field.coerce(other)
            return TruncatedSeries(self.field, self.precision, [a * c for a in self.coeffs], self.var)
        self._check(other)
        return TruncatedSeries(self.field, self.precision,
                               _mul_lists(self.field, self.coeffs, other.coeffs, self.precision), self.var)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = TruncatedSeries.monomial(self.field, self.precision, 0, 1, self.var)
        for _ in range(n):
            out = out * self
        return out

    def valuation(self):
        for i, c in enumerate(self.coeffs):
            if not self.field.is_zero(c):
                return i
        return AtLeast(self.precision)

    def invert(self) -> "TruncatedSeries":
        if self.field.is_zero(self.coeffs[0]):
            raise ZeroDivisionError("series with positive valuation is not invertible")
        return TruncatedSeries(self.field, self.precision,
                               _inverse_list(self.field, self.coeffs, self.precision), self.var)

    def is_zero(self) -> bool:
        return all(self.field.is_zero(c) for c in self.coeffs)

    def __str__(self):
        f = self.field
        parts = []
        for i, c in enumerate(self.coeffs):
            if f.is_zero(c):
                continue
            cs = f.format(c)
            mono = "" if i == 0 else (self.var if i == 1 else f"{self.var}^{i}")
            if not mono:
                parts.append(cs)
            else:
                parts.append(mono if cs == "1" else f"{cs}*{mono}")
        body = " + ".join(parts) if parts else "0"
        return f"{body} + O({self.var}^{self.precision})"

    def __repr__(self):
        return f"TruncatedSeries({self})"


def series_arith(op: str, a: TruncatedSeries, b: TruncatedSeries = None):
    """Dispatch ``add``, ``mul``, ``invert`` or ``valuation``."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "invert":
        return a.invert()
    if op == "valuation":
        return a.valuation()
    raise ValueError(f"unknown series operation {op!r}")


def liouville(field: CoefficientField, precision: int, step: int = 1, var: str = "x") -> TruncatedSeries:
    """Truncation of sum_{i>=1} x^((step*i)!)."""
    exps = []
    i = 1
    while True:
        e = math.factorial(step * i)
        if e >= precision:
            break
        exps.append(e)
        i += 1
    return TruncatedSeries.from_exponents(field, precision, exps, var)


class LaurentSeries:
    """A Laurent series known modulo x^prec (absolute precision).

    ``coeffs[i]`` is the coefficient of x^(start + i) for
    start <= start + i < prec.
    """

    __slots__ = ("field", "start", "coeffs", "prec")

    def __init__(self, field: CoefficientField, start: int, coeffs: Sequence, prec: int):
        n = max(prec - start, 0)
        c = list(coeffs)[:n]
        c += [field.zero] * (n - len(c))
        self.field = field
        self.start = start
        self.coeffs = c
        self.prec = prec

    @classmethod
    def exact_zero(cls, field, prec):
        return cls(field, prec, [], prec)

    @classmethod
    def from_truncated(cls, s: TruncatedSeries) -> "LaurentSeries":
        return cls(s.field, 0, list(s.coeffs), s.precision)

    @classmethod
    def constant(cls, field, c, prec):
        return cls(field, 0, [field.coerce(c)], prec)

    @classmethod
    def monomial(cls, field, k, prec, coeff=1):
        if k >= prec:
            return cls.exact_zero(field, prec)
        return cls(field, k, [field.coerce(coeff)], prec)

    def coefficient(self, k: int):
        if k >= self.prec:
            raise PrecisionError(f"coefficient of x^{k} unknown (precision {self.prec})")
        if k < self.start:
            return self.field.zero
        return self.coeffs[k - self.start]

    def valuation(self):
        f = self.field
        for i, c in enumerate(self.coeffs):
            if not f.is_zero(c):
                return self.start + i
        return AtLeast(self.prec)

    def _val_or_prec(self) -> int:
        v = self.valuation()
        return v.bound if isinstance(v, AtLeast) else v

    def with_precision(self, prec: int) -> "LaurentSeries":
        if prec > self.prec:
            raise PrecisionError("cannot raise precision")
        return LaurentSeries(self.field, self.start, self.coeffs, prec)

    def __add__(self, other: "LaurentSeries"):
        f = self.field
        prec = min(self.prec, other.prec)
        start = min(self.start, other.start, prec)
        out = [f.zero] * (prec - start)
        for s in (self, other):
            for i, c in enumerate(s.coeffs):
                k = s.start + i
                if k < prec and c:
                    out[k - start] += c
        return LaurentSeries(f, start, [f.reduce(c) for c in out], prec)

    def __neg__(self):
        f = self.field
        return LaurentSeries(f, self.start, [f.reduce(-c) for c in self.coeffs], self.prec)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "LaurentSeries":
        f = self.field
        c = f.coerce(c)
        return LaurentSeries(f, self.start, [f.reduce(v * c) for v in self.coeffs], self.prec)

    def __mul__(self, other: "LaurentSeries"):
        if not isinstance(other, LaurentSeries):
            return self.scale(other)
        f = self.field
        va, vb = self._val_or_prec(), other._val_or_prec()
        prec = min(self.prec + vb, other.prec + va)
        start = va + vb
        if start >= prec:
            return LaurentSeries.exact_zero(f, prec)
        a = self.coeffs[va - self.start:]
        b = other.coeffs[vb - other.start:]
        n = prec - start
        return LaurentSeries(f, start, _mul_lists(f, a, b, n), prec)

    __rmul__ = __mul__

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by x^k."""
        return LaurentSeries(self.field, self.start + k, self.coeffs, self.prec + k)

    def inverse(self) -> "LaurentSeries":
        v = self.valuation()
        if isinstance(v, AtLeast):
            raise PrecisionError(f"cannot invert a series that vanishes mod x^{v.bound}")
        unit = self.coeffs[v - self.start:]
        n = self.prec - v
        inv = _inverse_list(self.field, unit, n)
        return LaurentSeries(self.field, -v, inv, self.prec - 2 * v)

    def is_zero_to_precision(self) -> bool:
        return isinstance(self.valuation(), AtLeast)

    def __str__(self):
        f = self.field
        parts = []
        for i, c in enumerate(self.coeffs):
            if f.is_zero(c):
                continue
            k = self.start + i
            cs = f.format(c)
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            parts.append(cs if not mono else (mono if cs == "1" else f"{cs}*{mono}"))
        body = " + ".join(parts) if parts else "0"
        return f"{body} + O(x^{self.prec})"

    def __repr__(self):
        return f"LaurentSeries({self})"
