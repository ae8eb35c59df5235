"""Canonical text for syntax trees; parse(pretty(ast)) == ast."""

from __future__ import annotations

from ..core.expr import format_expr
from .ast import (Adjoin, Arg, CheckCmd, DerivationDecl, FieldDecl, ListValue, Localize, ModuleDecl,
                  PolyRing, PrecisionDecl, RingDecl, RingRef, ScenarioDecl, ScriptAst, SeriesDecl,
                  SetDecl, SpecDecl)


def format_ring(r) -> str:
    if isinstance(r, RingRef):
        return r.name
    if isinstance(r, PolyRing):
        return f"poly({', '.join(r.variables)})"
    if isinstance(r, Localize):
        return f"localize({format_ring(r.ring)}, at=({', '.join(r.at)}))"
    if isinstance(r, Adjoin):
        tail = f" -> {r.series}" if r.series else ""
        return f"adjoin({format_ring(r.ring)}, {r.var}{tail})"
    raise TypeError(r)


def format_value(v) -> str:
    if isinstance(v, ListValue):
        return "[" + ", ".join(format_value(i) for i in v.items) + "]"
    return format_expr(v)


def format_args(args) -> str:
    return ", ".join((f"{a.key} = " if a.key else "") + format_value(a.value) for a in args)


def format_statement(s) -> str:
    if isinstance(s, FieldDecl):
        return f"field {s.name}"
    if isinstance(s, PrecisionDecl):
        return f"precision {s.value}"
    if isinstance(s, SeriesDecl):
        if s.kind == "liouville":
            return f"series {s.name} = liouville({s.value})"
        return f"series {s.name} = [{', '.join(str(c) for c in s.value)}]"
    if isinstance(s, RingDecl):
        return f"ring {s.name} = {format_ring(s.ring)}"
    if isinstance(s, DerivationDecl):
        return f"derivation {s.name} on {s.ring} over {s.over} : {s.var} = {format_expr(s.image)}"
    if isinstance(s, SetDecl):
        return f"set {s.name} = powers({s.var})"
    if isinstance(s, ModuleDecl):
        if s.kind == "all":
            return f"module {s.name} = lattice(all)"
        if s.kind == "lattice":
            return f"module {s.name} = lattice(val >= {s.value})"
        return f"module {s.name} = span({', '.join(format_expr(e) for e in s.value)})"
    if isinstance(s, ScenarioDecl):
        return f"scenario {s.name} = twist({s.ring}, {s.derivation}, {s.module}, {s.mult_set})"
    if isinstance(s, SpecDecl):
        return f"spec {s.name} = {s.constructor}({format_args(s.args)})"
    if isinstance(s, CheckCmd):
        tail = f" : {format_args(s.args)}" if s.args else ""
        return f"check {s.kind} {s.target}{tail}"
    raise TypeError(s)


def pretty(ast: ScriptAst) -> str:
    return "\n".join(format_statement(s) for s in ast.statements) + "\n"
