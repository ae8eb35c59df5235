"""Syntax tree of check scripts.  Source locations never take part in equality."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

from ..core.expr import Expr


@dataclass(frozen=True)
class Loc:
    line: int
    column: int


def _loc():
    return field(default=None, compare=False, repr=False)


# -- ring expressions -----------------------------------------------------------


@dataclass(frozen=True)
class RingRef:
    name: str
    loc: Optional[Loc] = _loc()


@dataclass(frozen=True)
class PolyRing:
    variables: Tuple[str, ...]
    loc: Optional[Loc] = _loc()


@dataclass(frozen=True)
class Localize:
    ring: "RingExpr"
    at: Tuple[str, ...]
    loc: Optional[Loc] = _loc()


@dataclass(frozen=True)
class Adjoin:
    ring: "RingExpr"
    var: str
    series: Optional[str] = None
    loc: Optional[Loc] = _loc()


RingExpr = Union[RingRef, PolyRing, Localize, Adjoin]


# -- argument values --------------------------------------------------------------


@dataclass(frozen=True)
class ListValue:
    items: Tuple["Value", ...]


Value = Union[Expr, ListValue]


@dataclass(frozen=True)
class Arg:
    key: Optional[str]
    value: Value


# -- statements -------------------------------------------------------------------


@dataclass(frozen=True)
class FieldDecl:
    name: str
    loc: Optional[Loc] = _loc()


@dataclass(frozen=True)
class PrecisionDecl:
    value: int
    loc: Optional[Loc] = _loc()


@dataclass(frozen=True)
class SeriesDecl:
    name: str
    kind: str  # "liouville" or "list"
    value: Union[int, Tuple[int, ...]]
    loc: Optional[Loc] = _loc()


@dataclass(frozen=True)
class RingDecl:
    name: str
    ring: RingExpr
    loc: Optional[Loc] = _loc()


@dataclass(frozen=True)
class DerivationDecl:
    name: str
    ring: str
    over: str
    var: str
    image: Expr
    loc: Optional[Loc] = _loc()


@dataclass(frozen=True)
class SetDecl:
    name: str
    var: str
    loc: Optional[Loc] = _loc()


@dataclass(frozen=True)
class ModuleDecl:
    name: str
    kind: str  # "lattice", "all" or "span"
    value: Union[int, Tuple[Expr, ...], None] = None
    loc: Optional[Loc] = _loc()


@dataclass(frozen=True)
class ScenarioDecl:
    name: str
    ring: str
    derivation: str
    module: str
    mult_set: str
    loc: Optional[Loc] = _loc()


@dataclass(frozen=True)
class SpecDecl:
    name: str
    constructor: str
    args: Tuple[Arg, ...]
    loc: Optional[Loc] = _loc()


@dataclass(frozen=True)
class CheckCmd:
    kind: str
    target: str
    args: Tuple[Arg, ...] = ()
    loc: Optional[Loc] = _loc()


Statement = Union[FieldDecl, PrecisionDecl, SeriesDecl, RingDecl, DerivationDecl, SetDecl,
                  ModuleDecl, ScenarioDecl, SpecDecl, CheckCmd]


@dataclass(frozen=True)
class ScriptAst:
    statements: Tuple[Statement, ...]

    @property
    def commands(self) -> Tuple[CheckCmd, ...]:
        return tuple(s for s in self.statements if isinstance(s, CheckCmd))

    @property
    def declarations(self) -> tuple:
        return tuple(s for s in self.statements if not isinstance(s, CheckCmd))

    @property
    def precision(self) -> int:
        for s in self.statements:
            if isinstance(s, PrecisionDecl):
                return s.value
        raise LookupError("no precision declaration")


CHECK_KINDS = (
    "membership", "closure", "alpha-iso", "analytic-iso", "one-case", "correspondence",
    "c-analytic", "quadratic", "contract-extend", "generator-bound", "kq-generators",
    "assoc-prime", "tffr", "quotient-free", "stable", "emb-dim", "global-stable",
)

SPEC_CONSTRUCTORS = ("global_stable", "dvr_module", "semigroup_ring", "local_ring",
                     "idealization", "extension")

# names usable as check targets without a declaration
BUILTIN_TARGETS = ("GL",)
