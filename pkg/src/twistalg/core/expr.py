"""Polynomial / fraction expressions: tokenizer, tree, printer, evaluator.

Grammar::

    expr  := term (('+' | '-') term)*
    term  := unary (('*' | '/' | <juxtaposition>) unary)*
    unary := '-' unary | power
    power := atom ('^' '-'? INT)?
    atom  := INT | IDENT | '(' expr ')'
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Union

from ..errors import DslError

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<newline>\n)
  | (?P<number>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<op>->|>=|<=|[-+*/^()\[\],=:<>.])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise DslError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        s = m.group()
        if kind == "newline":
            tokens.append(Token("newline", s, line, col))
            line += 1
            col = 1
        else:
            if kind not in ("ws", "comment"):
                tokens.append(Token(kind, s, line, col))
            col += len(s)
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


# -- expression tree -------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int


Expr = Union[Num, Var, Neg, BinOp, Pow]

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def format_expr(e: Expr, parent: int = 0) -> str:
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Neg):
        s = "-" + format_expr(e.operand, 3)
        return f"({s})" if parent >= 2 else s
    if isinstance(e, Pow):
        base = format_expr(e.base, 4)
        if isinstance(e.base, Pow):
            base = f"({base})"
        return f"{base}^{e.exponent}"
    if isinstance(e, BinOp):
        p = _PREC[e.op]
        left = format_expr(e.left, p)
        # operators associate to the left
        right = format_expr(e.right, p + 1)
        s = f"{left} {e.op} {right}" if p == 1 else f"{left}*{right}" if e.op == "*" else f"{left}/{right}"
        return f"({s})" if p < parent else s
    raise TypeError(e)


def variables_of(e: Expr) -> set:
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, Num):
        return set()
    if isinstance(e, Neg):
        return variables_of(e.operand)
    if isinstance(e, Pow):
        return variables_of(e.base)
    return variables_of(e.left) | variables_of(e.right)


class ExprParser:
    """Recursive-descent parser over a token list; used standalone and by the DSL."""

    def __init__(self, tokens: Sequence[Token], pos: int = 0):
        self.tokens = tokens
        self.pos = pos

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.tok
        raise DslError(msg, tok.line, tok.column)

    def expect(self, text):
        if self.tok.text != text:
            self.error(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        return self.advance()

    def parse_expr(self) -> Expr:
        left = self.parse_term()
        while self.tok.kind == "op" and self.tok.text in "+-" and self.tok.text:
            op = self.advance().text
            left = BinOp(op, left, self.parse_term())
        return left

    def parse_term(self) -> Expr:
        left = self.parse_unary()
        while True:
            t = self.tok
            if t.kind == "op" and t.text in ("*", "/"):
                op = self.advance().text
                left = BinOp(op, left, self.parse_unary())
            elif t.kind in ("ident", "number") or (t.kind == "op" and t.text == "("):
                left = BinOp("*", left, self.parse_unary())
            else:
                return left

    def parse_unary(self) -> Expr:
        if self.tok.kind == "op" and self.tok.text == "-":
            self.advance()
            return Neg(self.parse_unary())
        return self.parse_power()

    def parse_power(self) -> Expr:
        base = self.parse_atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.advance()
            sign = 1
            if self.tok.text == "-":
                self.advance()
                sign = -1
            if self.tok.kind != "number":
                self.error("expected an integer exponent")
            return Pow(base, sign * int(self.advance().text))
        return base

    def parse_atom(self) -> Expr:
        t = self.tok
        if t.kind == "number":
            self.advance()
            return Num(int(t.text))
        if t.kind == "ident":
            self.advance()
            return Var(t.text)
        if t.kind == "op" and t.text == "(":
            self.advance()
            e = self.parse_expr()
            self.expect(")")
            return e
        self.error(f"unexpected {t.text or 'end of input'!r} in expression")


def parse_expr(text: str) -> Expr:
    toks = [t for t in tokenize(text) if t.kind != "newline"]
    p = ExprParser(toks)
    e = p.parse_expr()
    if p.tok.kind != "eof":
        p.error(f"unexpected {p.tok.text!r} after expression")
    return e


def evaluate(e: Expr, make_const, make_var):
    """Fold an expression with caller-supplied leaf constructors.

    The leaf values must support ``+ - * /`` and integer ``**``.
    """
    if isinstance(e, Num):
        return make_const(e.value)
    if isinstance(e, Var):
        return make_var(e.name)
    if isinstance(e, Neg):
        return -evaluate(e.operand, make_const, make_var)
    if isinstance(e, Pow):
        b = evaluate(e.base, make_const, make_var)
        return b ** e.exponent
    a = evaluate(e.left, make_const, make_var)
    b = evaluate(e.right, make_const, make_var)
    if e.op == "+":
        return a + b
    if e.op == "-":
        return a - b
    if e.op == "*":
        return a * b
    return a / b


def to_polynomial(e: Union[Expr, str], field, variables):
    """Evaluate to a Polynomial; division only by nonzero constants."""
    from .poly import Polynomial

    if isinstance(e, str):
        e = parse_expr(e)
    variables = tuple(variables)

    class _P:
        __slots__ = ("p",)

        def __init__(self, p):
            self.p = p

        def __add__(self, o):
            return _P(self.p + o.p)

        def __sub__(self, o):
            return _P(self.p - o.p)

        def __neg__(self):
            return _P(-self.p)

        def __mul__(self, o):
            return _P(self.p * o.p)

        def __pow__(self, n):
            if n < 0:
                raise ValueError("negative exponent in a polynomial expression")
            return _P(self.p ** n)

        def __truediv__(self, o):
            if not o.p.is_constant() or o.p.is_zero():
                raise ValueError("polynomial expressions may only divide by nonzero constants")
            return _P(self.p.scale(field.inv(o.p.constant_term())))

    def var(name):
        if name not in variables:
            raise ValueError(f"unknown variable {name!r}")
        return _P(Polynomial.var(field, variables, name))

    return evaluate(e, lambda n: _P(Polynomial.constant(field, variables, n)), var).p


def to_fraction(e: Union[Expr, str], field, variables, prime=None, inverted=()):
    """Evaluate to a LocalFraction in the given localization."""
    from .localfrac import LocalFraction
    from .poly import Polynomial

    if isinstance(e, str):
        e = parse_expr(e)
    variables = tuple(variables)

    def const(n):
        return LocalFraction(Polynomial.constant(field, variables, n), None, prime, inverted)

    def var(name):
        if name not in variables:
            raise ValueError(f"unknown variable {name!r}")
        return LocalFraction(Polynomial.var(field, variables, name), None, prime, inverted)

    return evaluate(e, const, var)
