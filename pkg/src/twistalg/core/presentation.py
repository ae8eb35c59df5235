"""Finitely presented rings: variables, relations, localization data, embeddings."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

from .fields import CoefficientField
from .localfrac import LocalFraction
from .poly import Polynomial
from .series import TruncatedSeries


@dataclass(frozen=True)
class RingPresentation:
    """k[variables]/(relations), optionally localized at a monomial prime.

    ``embeddings`` sends some variables to power series in the uniformizer;
    ``inverted`` lists variables whose powers may appear in denominators.
    """

    field: CoefficientField
    variables: Tuple[str, ...]
    relations: Tuple[Polynomial, ...] = ()
    prime: Optional[Tuple[str, ...]] = None
    inverted: Tuple[str, ...] = ()
    embeddings: Tuple[Tuple[str, TruncatedSeries], ...] = ()
    name: str = ""

    def __post_init__(self):
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("repeated variable name")
        for r in self.relations:
            if r.variables != self.variables:
                raise ValueError("relation over a different variable list")
        for v in (self.prime or ()) + self.inverted:
            if v not in self.variables:
                raise ValueError(f"unknown variable {v!r}")

    @property
    def is_local(self) -> bool:
        return self.prime is not None

    def embedding(self, var: str) -> Optional[TruncatedSeries]:
        return dict(self.embeddings).get(var)

    def var(self, name: str) -> Polynomial:
        return Polynomial.var(self.field, self.variables, name)

    def poly(self, text_or_expr) -> Polynomial:
        from .expr import to_polynomial
        return to_polynomial(text_or_expr, self.field, self.variables)

    def frac(self, text_or_expr) -> LocalFraction:
        from .expr import to_fraction
        return to_fraction(text_or_expr, self.field, self.variables, self.prime, self.inverted)

    def adjoin(self, var: str, embedding: TruncatedSeries = None) -> "RingPresentation":
        if var in self.variables:
            raise ValueError(f"variable {var!r} already present")
        names = self.variables + (var,)
        rels = tuple(r.change_variables(names) for r in self.relations)
        prime = None if self.prime is None else self.prime + (var,)
        emb = self.embeddings + (((var, embedding),) if embedding is not None else ())
        return RingPresentation(self.field, names, rels, prime, self.inverted, emb)

    def localize(self, at: Sequence[str]) -> "RingPresentation":
        return RingPresentation(self.field, self.variables, self.relations, tuple(at), self.inverted, self.embeddings)
