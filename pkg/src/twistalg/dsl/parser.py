"""Line-oriented recursive-descent parser for check scripts.

One statement per line; ``#`` starts a comment.  See ``docs`` in the
README for the grammar.
"""

from __future__ import annotations

from typing import Dict, List, Tuple

from ..core.expr import ExprParser, Neg, Num, Token, tokenize
from ..errors import DslError
from .ast import (Adjoin, Arg, BUILTIN_TARGETS, CHECK_KINDS, CheckCmd, DerivationDecl, FieldDecl,
                  ListValue, Loc, Localize, ModuleDecl, PolyRing, PrecisionDecl, RingDecl, RingRef,
                  SPEC_CONSTRUCTORS, ScenarioDecl, ScriptAst, SeriesDecl, SetDecl, SpecDecl)

_KEYWORDS = {"field", "precision", "series", "ring", "derivation", "set", "module", "scenario", "spec", "check"}


class _Parser(ExprParser):
    def __init__(self, tokens):
        super().__init__(tokens)
        self.symbols: Dict[str, str] = {}

    def loc(self, tok: Token = None) -> Loc:
        tok = tok or self.tok
        return Loc(tok.line, tok.column)

    def ident(self, what="identifier") -> Token:
        if self.tok.kind != "ident":
            self.error(f"expected {what}, found {self.tok.text or 'end of line'!r}")
        return self.advance()

    def accept(self, text) -> bool:
        if self.tok.text == text and self.tok.kind != "eof":
            self.advance()
            return True
        return False

    def end_of_statement(self):
        if self.tok.kind not in ("newline", "eof"):
            self.error(f"unexpected {self.tok.text!r} at end of statement")

    def declare(self, tok: Token, kind: str):
        if tok.text in self.symbols:
            raise DslError(f"{tok.text!r} is already declared", tok.line, tok.column)
        self.symbols[tok.text] = kind

    def use(self, tok: Token, *kinds: str):
        kind = self.symbols.get(tok.text)
        if kind is None:
            raise DslError(f"undeclared identifier {tok.text!r}", tok.line, tok.column)
        if kinds and kind not in kinds:
            raise DslError(f"{tok.text!r} is a {kind}, expected {' or '.join(kinds)}", tok.line, tok.column)

    def int_literal(self) -> int:
        neg = self.accept("-")
        if self.tok.kind != "number":
            self.error("expected an integer")
        v = int(self.advance().text)
        return -v if neg else v

    def name_list(self) -> Tuple[str, ...]:
        names = [self.ident("variable name").text]
        while self.accept(","):
            names.append(self.ident("variable name").text)
        return tuple(names)

    # -- statements -------------------------------------------------------------

    def script(self) -> ScriptAst:
        stmts = []
        precision_seen = None
        while self.tok.kind != "eof":
            if self.tok.kind == "newline":
                self.advance()
                continue
            start = self.tok
            if start.kind != "ident" or start.text not in _KEYWORDS:
                self.error(f"expected a declaration or 'check', found {start.text!r}")
            stmt = getattr(self, "stmt_" + start.text)()
            self.end_of_statement()
            if isinstance(stmt, PrecisionDecl):
                if precision_seen is not None:
                    raise DslError(f"duplicate precision declaration (first at line {precision_seen})",
                                   start.line, start.column)
                precision_seen = start.line
            stmts.append(stmt)
        if precision_seen is None:
            raise DslError("missing precision declaration", 1, 1)
        return ScriptAst(tuple(stmts))

    def stmt_field(self):
        loc = self.loc()
        self.advance()
        name = self.ident("field name").text
        if self.accept("("):
            name = f"{name}({self.int_literal()})"
            self.expect(")")
        from ..core.fields import CoefficientField
        try:
            CoefficientField.parse(name)
        except ValueError as exc:
            raise DslError(str(exc), loc.line, loc.column) from None
        return FieldDecl(name, loc)

    def stmt_precision(self):
        loc = self.loc()
        self.advance()
        v = self.int_literal()
        if v < 1:
            raise DslError("precision must be positive", loc.line, loc.column)
        return PrecisionDecl(v, loc)

    def stmt_series(self):
        loc = self.loc()
        self.advance()
        name = self.ident("series name")
        self.expect("=")
        if self.accept("["):
            vals = [self.int_literal()]
            while self.accept(","):
                vals.append(self.int_literal())
            self.expect("]")
            decl = SeriesDecl(name.text, "list", tuple(vals), loc)
        else:
            fn = self.ident("series constructor")
            if fn.text != "liouville":
                raise DslError(f"unknown series constructor {fn.text!r}", fn.line, fn.column)
            self.expect("(")
            k = self.int_literal()
            self.expect(")")
            if k < 1:
                raise DslError("liouville step must be positive", fn.line, fn.column)
            decl = SeriesDecl(name.text, "liouville", k, loc)
        self.declare(name, "series")
        return decl

    def ring_expr(self):
        tok = self.ident("ring expression")
        loc = self.loc(tok)
        if tok.text == "poly" and self.tok.text == "(":
            self.expect("(")
            names = self.name_list()
            self.expect(")")
            return PolyRing(names, loc)
        if tok.text == "localize" and self.tok.text == "(":
            self.expect("(")
            inner = self.ring_expr()
            self.expect(",")
            key = self.ident("'at'")
            if key.text != "at":
                raise DslError("expected 'at='", key.line, key.column)
            self.expect("=")
            self.expect("(")
            names = self.name_list()
            self.expect(")")
            self.expect(")")
            return Localize(inner, names, loc)
        if tok.text == "adjoin" and self.tok.text == "(":
            self.expect("(")
            inner = self.ring_expr()
            self.expect(",")
            var = self.ident("variable name").text
            series = None
            if self.accept("->"):
                s = self.ident("series name")
                self.use(s, "series")
                series = s.text
            self.expect(")")
            return Adjoin(inner, var, series, loc)
        self.use(tok, "ring")
        return RingRef(tok.text, loc)

    def stmt_ring(self):
        loc = self.loc()
        self.advance()
        name = self.ident("ring name")
        self.expect("=")
        r = self.ring_expr()
        self.declare(name, "ring")
        return RingDecl(name.text, r, loc)

    def stmt_derivation(self):
        loc = self.loc()
        self.advance()
        name = self.ident("derivation name")
        on_kw = self.ident("'on'")
        if on_kw.text != "on":
            raise DslError("expected 'on'", on_kw.line, on_kw.column)
        ring = self.ident("ring name")
        self.use(ring, "ring")
        over_kw = self.ident("'over'")
        if over_kw.text != "over":
            raise DslError("expected 'over'", over_kw.line, over_kw.column)
        base = self.ident("ring name")
        self.use(base, "ring")
        self.expect(":")
        var = self.ident("variable name").text
        self.expect("=")
        image = self.parse_expr()
        self.declare(name, "derivation")
        return DerivationDecl(name.text, ring.text, base.text, var, image, loc)

    def stmt_set(self):
        loc = self.loc()
        self.advance()
        name = self.ident("set name")
        self.expect("=")
        fn = self.ident("'powers'")
        if fn.text != "powers":
            raise DslError(f"unknown set constructor {fn.text!r}", fn.line, fn.column)
        self.expect("(")
        var = self.ident("variable name").text
        self.expect(")")
        self.declare(name, "set")
        return SetDecl(name.text, var, loc)

    def stmt_module(self):
        loc = self.loc()
        self.advance()
        name = self.ident("module name")
        self.expect("=")
        fn = self.ident("module constructor")
        self.expect("(")
        if fn.text == "lattice":
            if self.tok.text == "all":
                self.advance()
                decl = ModuleDecl(name.text, "all", None, loc)
            else:
                kw = self.ident("'val'")
                if kw.text != "val":
                    raise DslError("expected 'val >= <v>' or 'all'", kw.line, kw.column)
                self.expect(">=")
                decl = ModuleDecl(name.text, "lattice", self.int_literal(), loc)
        elif fn.text == "span":
            items = [self.parse_expr()]
            while self.accept(","):
                items.append(self.parse_expr())
            decl = ModuleDecl(name.text, "span", tuple(items), loc)
        else:
            raise DslError(f"unknown module constructor {fn.text!r}", fn.line, fn.column)
        self.expect(")")
        self.declare(name, "module")
        return decl

    def stmt_scenario(self):
        loc = self.loc()
        self.advance()
        name = self.ident("scenario name")
        self.expect("=")
        fn = self.ident("'twist'")
        if fn.text != "twist":
            raise DslError(f"unknown scenario constructor {fn.text!r}", fn.line, fn.column)
        self.expect("(")
        parts = []
        for i, kind in enumerate(("ring", "derivation", "module", "set")):
            if i:
                self.expect(",")
            t = self.ident(f"{kind} name")
            self.use(t, kind)
            parts.append(t.text)
        self.expect(")")
        self.declare(name, "scenario")
        return ScenarioDecl(name.text, *parts, loc=loc)

    def value(self):
        if self.accept("["):
            items = []
            if self.tok.text != "]":
                items.append(self.value())
                while self.accept(","):
                    items.append(self.value())
            self.expect("]")
            return ListValue(tuple(items))
        return self.parse_expr()

    def arg_list(self, closing=None) -> Tuple[Arg, ...]:
        args = []
        stop = ("newline", "eof")
        if self.tok.kind in stop or (closing and self.tok.text == closing):
            return ()
        while True:
            if (self.tok.kind == "ident" and self.tokens[self.pos + 1].text == "="):
                key = self.advance().text
                self.advance()
                args.append(Arg(key, self.value()))
            else:
                args.append(Arg(None, self.value()))
            if not self.accept(","):
                break
        return tuple(args)

    def stmt_spec(self):
        loc = self.loc()
        self.advance()
        name = self.ident("spec name")
        self.expect("=")
        fn = self.ident("spec constructor")
        if fn.text not in SPEC_CONSTRUCTORS:
            raise DslError(f"unknown spec constructor {fn.text!r}", fn.line, fn.column)
        self.expect("(")
        args = self.arg_list(")")
        self.expect(")")
        self.declare(name, "spec")
        return SpecDecl(name.text, fn.text, args, loc)

    def stmt_check(self):
        loc = self.loc()
        self.advance()
        first = self.ident("check kind")
        kind = first.text
        while self.tok.text == "-" and self.tokens[self.pos + 1].kind == "ident":
            self.advance()
            kind += "-" + self.advance().text
        if kind not in CHECK_KINDS:
            raise DslError(f"unknown check kind {kind!r}", first.line, first.column)
        target = self.ident("check target")
        if target.text not in self.symbols and target.text in BUILTIN_TARGETS:
            pass
        else:
            self.use(target, "scenario", "spec")
        args = ()
        if self.accept(":"):
            args = self.arg_list()
        return CheckCmd(kind, target.text, args, loc)


def parse(text: str) -> ScriptAst:
    """Parse a script; raises DslError with line and column on any problem."""
    p = _Parser(tokenize(text))
    return p.script()
