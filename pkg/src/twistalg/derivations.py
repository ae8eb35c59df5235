"""Derivations given by generator images; Kähler differentials by Jacobians."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .core.localfrac import LocalFraction
from .core.poly import Polynomial
from .core.presentation import RingPresentation

Element = Union[Polynomial, LocalFraction]


def _as_poly(domain: RingPresentation, v) -> Element:
    if isinstance(v, (Polynomial, LocalFraction)):
        if v.variables != domain.variables:
            if isinstance(v, Polynomial):
                return v.change_variables(domain.variables)
            raise ValueError("image over a different variable list")
        return v
    return Polynomial.constant(domain.field, domain.variables, v)


class DerivationSpec:
    """A derivation of ``domain`` into itself fixed by the images of the variables.

    Relation compatibility is checked on construction: the Leibniz expansion
    of every relation must reduce to zero modulo the relations.
    """

    def __init__(self, domain: RingPresentation, images: Dict[str, object], linearity_base: Sequence = ()):
        self.domain = domain
        imgs = {}
        for v in domain.variables:
            imgs[v] = _as_poly(domain, images.get(v, 0))
        unknown = set(images) - set(domain.variables)
        if unknown:
            raise ValueError(f"images given for unknown variables {sorted(unknown)}")
        self.images = imgs
        base = []
        for b in linearity_base:
            if isinstance(b, str):
                b = domain.var(b) if b in domain.variables else domain.poly(b)
            base.append(_as_poly(domain, b))
        self.linearity_base = tuple(base)
        for rel in domain.relations:
            img = self._derive_poly(rel)
            if isinstance(img, LocalFraction):
                ok = img.num.reduce_by(list(domain.relations)).is_zero()
            else:
                ok = img.reduce_by(list(domain.relations)).is_zero()
            if not ok:
                raise ValueError(f"images are not compatible with the relation {rel} = 0")

    @property
    def variables(self):
        return self.domain.variables

    def _derive_poly(self, f: Polynomial) -> Element:
        total = Polynomial.zero(f.field, f.variables)
        frac_total = None
        for v in f.uses():
            img = self.images[v]
            if isinstance(img, Polynomial) and img.is_zero():
                continue
            part = f.derivative(v)
            if isinstance(img, LocalFraction):
                term = img * part
                frac_total = term if frac_total is None else frac_total + term
            else:
                total = total + part * img
        if frac_total is not None:
            return frac_total + total
        return total

    def __call__(self, f: Element) -> Element:
        return derive(self, f)

    def __repr__(self):
        shown = ", ".join(f"D({v}) = {img}" for v, img in self.images.items())
        return f"DerivationSpec({shown})"


def derive(D: DerivationSpec, f) -> Element:
    """D(f) by additivity, the Leibniz rule and the quotient rule."""
    names = D.domain.variables
    if isinstance(f, (int,)) or not hasattr(f, "variables"):
        return Polynomial.zero(D.domain.field, names)
    if tuple(f.variables) != names:
        extra = set(f.uses() if isinstance(f, Polynomial) else f.num.uses() | f.den.uses()) - set(names)
        if extra:
            raise ValueError(f"unknown variables {sorted(extra)}")
        if isinstance(f, Polynomial):
            f = f.change_variables(names)
        else:
            raise ValueError("fraction over a different variable list")
    if isinstance(f, Polynomial):
        return D._derive_poly(f)
    # (u/v)' = (v u' - u v') / v^2
    du = D._derive_poly(f.num)
    dv = D._derive_poly(f.den)
    top = _lift(f, du) * _lift(f, f.den) - _lift(f, f.num) * _lift(f, dv)
    return top / _lift(f, f.den * f.den)


def _lift(template: LocalFraction, v: Element) -> LocalFraction:
    if isinstance(v, LocalFraction):
        return v
    return LocalFraction(v, None, template.prime, template.inverted)


@dataclass(frozen=True)
class LinearityResult:
    passed: bool
    witness: Optional[Element] = None

    def __bool__(self):
        return self.passed


def _is_zero(v: Element) -> bool:
    return v.is_zero()


def check_linearity(D: DerivationSpec, rng: random.Random = None, samples: int = 20) -> LinearityResult:
    """D kills the declared base and sampled products of base elements."""
    base = list(D.linearity_base)
    if not base:
        raise ValueError("empty linearity base")
    for b in base:
        if not _is_zero(derive(D, b)):
            return LinearityResult(False, b)
    rng = rng or random.Random(0)
    f = D.domain.field
    for _ in range(samples):
        a = base[rng.randrange(len(base))]
        b = base[rng.randrange(len(base))]
        prod = a * b + a.scale(f.random(rng, 3))
        if not _is_zero(derive(D, prod)):
            return LinearityResult(False, prod)
    return LinearityResult(True)


@dataclass(frozen=True)
class KahlerPresentation:
    """Ω_{S/A}: generators dv for the free variables, one Jacobian row per relation."""

    ring: RingPresentation
    free_variables: Tuple[str, ...]
    relations: Tuple[Tuple[Polynomial, ...], ...]

    @property
    def generators(self) -> Tuple[str, ...]:
        return tuple("d" + v for v in self.free_variables)

    @property
    def is_zero_module(self) -> bool:
        return not self.free_variables

    def d(self, f: Polynomial) -> Tuple[Polynomial, ...]:
        """Universal derivation: coordinates of d(f) on the generators."""
        return tuple(f.derivative(v) for v in self.free_variables)

    def factor_through(self, D: DerivationSpec) -> "KahlerMap":
        return factor_through(self, D)

    def __str__(self):
        gens = ", ".join(self.generators) or "0"
        if not self.relations:
            return f"<{gens}>"
        rows = "; ".join(" + ".join(f"({c})*{g}" for c, g in zip(row, self.generators) if not c.is_zero()) or "0"
                         for row in self.relations)
        return f"<{gens}> / ({rows})"


def kahler_presentation(S: RingPresentation, base: Sequence[str] = ()) -> KahlerPresentation:
    """Presentation of Ω_{S/A} where A is generated by the ``base`` variables."""
    for b in base:
        if b not in S.variables:
            raise ValueError(f"base variable {b!r} not in the ring")
    free = tuple(v for v in S.variables if v not in base)
    rows = tuple(tuple(r.derivative(v) for v in free) for r in S.relations)
    return KahlerPresentation(S, free, rows)


@dataclass(frozen=True)
class KahlerMap:
    """The linear map α on Ω with α(dv) = D(v), so that D = α ∘ d."""

    presentation: KahlerPresentation
    images: Tuple[Element, ...]

    def __call__(self, coords: Sequence[Polynomial]) -> Element:
        total = None
        for c, img in zip(coords, self.images):
            term = img * c if isinstance(img, LocalFraction) else c * img
            total = term if total is None else total + term
        if total is None:
            return Polynomial.zero(self.presentation.ring.field, self.presentation.ring.variables)
        return total


def factor_through(pres: KahlerPresentation, D: DerivationSpec) -> KahlerMap:
    ring = pres.ring
    for v in ring.variables:
        if v not in pres.free_variables and not _is_zero(D.images[v]):
            raise ValueError(f"D does not vanish on the base variable {v}")
    alpha = KahlerMap(pres, tuple(D.images[v] for v in pres.free_variables))
    rels = list(ring.relations)
    for row in pres.relations:
        val = alpha(row)
        num = val.num if isinstance(val, LocalFraction) else val
        if not num.reduce_by(rels).is_zero():
            raise ValueError("α does not respect the Jacobian relations")
    return alpha
