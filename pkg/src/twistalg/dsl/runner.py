"""Execute a parsed script: build the declared objects, run the checks, report.

Every command gets its own generator ``random.Random(f"{seed}:{index}")`` so a
report depends only on the script, the options and the seed.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field as dc_field
from typing import Any, Callable, Dict, List, Optional

from ..core.expr import BinOp, Expr, Neg, Num, Pow, Var, format_expr, to_polynomial
from ..core.fields import CoefficientField
from ..core.finite import ideal_of, local_truncation, semigroup_algebra
from ..core.series import AtLeast, TruncatedSeries, liouville
from ..dvr import DvrModel, DvrModulePresentation, is_stable_ideal, quotient_freeness, tffr_rank
from ..errors import DslError, PrecisionError
from ..extensions import ExtensionInstance, contract_extend, generator_bound, is_c_analytic, is_quadratic
from ..idealization import embedding_dimension, local_idealization_model
from ..twisted import (INDETERMINATE, GlobalStableSpec, Scenario, alpha_iso_check, analytic_iso_check,
                       associated_prime_witness, global_stable_instance, intermediate_correspondence,
                       kq_generators, one_case_check, ring_closure_check)
from ..twisted import scenario_c_analytic  # noqa: F401  (dispatched through is_c_analytic)
from .ast import (Adjoin, CheckCmd, DerivationDecl, FieldDecl, ListValue, Localize, ModuleDecl, PolyRing,
                  PrecisionDecl, RingDecl, RingRef, ScenarioDecl, ScriptAst, SeriesDecl, SetDecl, SpecDecl)
from .printer import format_statement

SCHEMA = "twistalg-report/1"
VERDICTS = ("pass", "fail", "indeterminate", "error")


@dataclass
class RunOptions:
    seed: int = 0
    precision: Optional[int] = None
    strict: bool = False
    max_exponent: Optional[int] = None
    y_degree: Optional[int] = None


@dataclass
class Record:
    index: int
    line: int
    command: str
    kind: str
    target: str
    verdict: str
    summary: str
    evidence: dict
    elapsed_ms: float

    def to_json(self, timings: bool) -> dict:
        d = {"index": self.index, "line": self.line, "command": self.command, "kind": self.kind,
             "target": self.target, "verdict": self.verdict, "summary": self.summary,
             "evidence": self.evidence}
        if timings:
            d["elapsed_ms"] = round(self.elapsed_ms, 3)
        return d


@dataclass
class Report:
    script: str
    seed: int
    precision: int
    records: List[Record] = dc_field(default_factory=list)
    strict: bool = False

    def counts(self) -> Dict[str, int]:
        out = {v: 0 for v in VERDICTS}
        for r in self.records:
            out[r.verdict] += 1
        return out

    @property
    def exit_code(self) -> int:
        c = self.counts()
        if c["fail"] or c["error"]:
            return 1
        if self.strict and c["indeterminate"]:
            return 2
        return 0

    def to_json(self, timings: bool = False) -> str:
        doc = {"schema": SCHEMA, "script": self.script, "seed": self.seed, "precision": self.precision,
               "records": [r.to_json(timings) for r in self.records], "counts": self.counts(),
               "exit_code": self.exit_code}
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"

    def to_text(self, timings: bool = True) -> str:
        head = ["#", "line", "verdict", "command", "result"] + (["ms"] if timings else [])
        rows = []
        for r in self.records:
            row = [str(r.index), str(r.line), r.verdict, r.command, r.summary]
            if timings:
                row.append(f"{r.elapsed_ms:.1f}")
            rows.append(row)
        widths = [max(len(head[i]), *(len(row[i]) for row in rows)) if rows else len(head[i])
                  for i in range(len(head))]
        lines = [f"{self.script}: seed {self.seed}, precision {self.precision}"]
        fmt = lambda row: "  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip()  # noqa: E731
        lines.append(fmt(head))
        lines.extend(fmt(row) for row in rows)
        c = self.counts()
        lines.append(", ".join(f"{c[v]} {v}" for v in VERDICTS) + f"; exit {self.exit_code}")
        return "\n".join(lines) + "\n"


# -- JSON-safe evidence ---------------------------------------------------------------


def jsonable(v):
    if v is None or isinstance(v, (bool, int, str)):
        return v
    if isinstance(v, float):
        return round(v, 6)
    if isinstance(v, AtLeast):
        return v.to_json()
    if isinstance(v, dict):
        return {str(k): jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [jsonable(x) for x in v]
    return str(v)


def _brief(evidence: dict, limit: int = 72) -> str:
    parts = []
    for k, v in evidence.items():
        if isinstance(v, (dict, list)) and len(str(v)) > 24:
            continue
        parts.append(f"{k}={v}")
    s = ", ".join(parts)
    return s if len(s) <= limit else s[: limit - 3] + "..."


# -- value helpers --------------------------------------------------------------------


def _int(v, what="an integer") -> int:
    if isinstance(v, Num):
        return v.value
    if isinstance(v, Neg) and isinstance(v.operand, Num):
        return -v.operand.value
    raise ValueError(f"expected {what}, got {_show(v)}")


def _name(v, what="a name") -> str:
    if isinstance(v, Var):
        return v.name
    raise ValueError(f"expected {what}, got {_show(v)}")


def _bool(v) -> bool:
    n = _name(v, "yes/no").lower() if isinstance(v, Var) else None
    if n in ("true", "yes"):
        return True
    if n in ("false", "no"):
        return False
    raise ValueError(f"expected a boolean, got {_show(v)}")


def _list(v, what="a list") -> list:
    if isinstance(v, ListValue):
        return list(v.items)
    raise ValueError(f"expected {what}, got {_show(v)}")


def _show(v) -> str:
    if isinstance(v, ListValue):
        return "[" + ", ".join(_show(i) for i in v.items) + "]"
    return format_expr(v)


def _bind(args, positional, required=()) -> dict:
    """Match positional and keyword arguments to parameter names."""
    out = {}
    pos = list(positional)
    for a in args:
        if a.key is None:
            if not pos:
                raise ValueError(f"too many positional arguments (expected at most {len(positional)})")
            key = pos.pop(0)
        else:
            key = a.key
            if key not in positional:
                raise ValueError(f"unknown argument {key!r}; expected one of {', '.join(positional)}")
            if key in pos:
                pos.remove(key)
        if key in out:
            raise ValueError(f"argument {key!r} given twice")
        out[key] = a.value
    for r in required:
        if r not in out:
            raise ValueError(f"missing argument {r!r}")
    return out


# -- environment ----------------------------------------------------------------------


@dataclass
class _Flat:
    variables: tuple
    embeddings: dict
    local: bool


class Environment:
    """Declared objects, built lazily; a failed build is remembered as its error."""

    def __init__(self, ast: ScriptAst, opts: RunOptions):
        self.opts = opts
        self.field = CoefficientField.prime(5)
        self.precision = opts.precision or ast.precision
        self.decls: Dict[str, Any] = {}
        for s in ast.statements:
            if isinstance(s, FieldDecl):
                self.field = CoefficientField.parse(s.name)
            elif isinstance(s, PrecisionDecl):
                pass
            elif not isinstance(s, CheckCmd):
                self.decls[s.name] = s
        self._built: Dict[str, Any] = {}
        self._errors: Dict[str, Exception] = {}

    def target(self, name: str):
        if name in self._errors:
            raise self._errors[name]
        if name not in self._built:
            try:
                self._built[name] = self._build(name)
            except Exception as exc:
                self._errors[name] = exc
                raise
        return self._built[name]

    def _build(self, name):
        decl = self.decls.get(name)
        if decl is None:
            if name == "GL":
                return Scenario.gl(self.field, self.precision, y_degree=self.opts.y_degree or 6,
                                   **self._max_exp())
            raise ValueError(f"undeclared target {name!r}")
        if isinstance(decl, ScenarioDecl):
            return self._scenario(decl)
        if isinstance(decl, SpecDecl):
            return getattr(self, "_spec_" + decl.constructor)(decl)
        raise ValueError(f"{name!r} is not a check target")

    def _max_exp(self) -> dict:
        return {"max_exponent": self.opts.max_exponent} if self.opts.max_exponent else {}

    # series and rings

    def _series(self, name: str) -> Callable[[int], TruncatedSeries]:
        d = self.decls[name]
        f = self.field
        if d.kind == "liouville":
            return lambda n, step=d.value: liouville(f, n, step)
        return lambda n, cs=d.value: TruncatedSeries(f, n, cs)

    def _flatten(self, r) -> _Flat:
        if isinstance(r, RingRef):
            return self._flatten(self.decls[r.name].ring)
        if isinstance(r, PolyRing):
            if len(set(r.variables)) != len(r.variables):
                raise ValueError("repeated variable in poly(...)")
            return _Flat(tuple(r.variables), {}, False)
        if isinstance(r, Localize):
            inner = self._flatten(r.ring)
            if set(r.at) != set(inner.variables):
                raise ValueError("only localization at the ideal of all variables is supported")
            return _Flat(inner.variables, inner.embeddings, True)
        if isinstance(r, Adjoin):
            inner = self._flatten(r.ring)
            if r.var in inner.variables:
                raise ValueError(f"variable {r.var!r} is already present")
            emb = dict(inner.embeddings)
            if r.series:
                emb[r.var] = r.series
            return _Flat(inner.variables + (r.var,), emb, inner.local)
        raise TypeError(r)

    def _scenario(self, decl: ScenarioDecl) -> Scenario:
        S = self._flatten(self.decls[decl.ring].ring)
        D: DerivationDecl = self.decls[decl.derivation]
        K: ModuleDecl = self.decls[decl.module]
        C: SetDecl = self.decls[decl.mult_set]
        if D.ring != decl.ring:
            raise ValueError(f"derivation {D.name} is not defined on {decl.ring}")
        A = self._flatten(self.decls[D.over].ring)
        if not (A.local and S.local):
            raise ValueError("A and S must be localized at their maximal ideals")
        if len(A.variables) != 2 or len(S.variables) != 3 or S.variables[:2] != A.variables:
            raise ValueError("the scenario shape is A = k[x, y] localized and S = A[Z]")
        z = S.variables[2]
        unembedded = [v for v in A.variables if v not in A.embeddings]
        if len(unembedded) != 1 or z not in S.embeddings:
            raise ValueError("exactly one variable of A is the uniformizer; y and Z need series embeddings")
        x = unembedded[0]
        y = next(v for v in A.variables if v != x)
        if D.var != z:
            raise ValueError(f"the derivation must act on {z}")
        dz = to_polynomial(D.image, self.field, ())
        if not dz.is_constant() or dz.is_zero():
            raise ValueError("D(Z) must be a nonzero constant")
        if C.var != x:
            raise ValueError(f"the multiplicative set must be the powers of the uniformizer {x}")
        if K.kind == "all":
            v0 = None
        elif K.kind == "lattice":
            v0 = K.value
        else:
            exps = []
            for e in K.value:
                exps.append(_monomial_exponent(e, x))
            v0 = min(exps)
        return Scenario(self.field, self.precision, self._series(A.embeddings[y]), self._series(S.embeddings[z]),
                        v0=v0, y_degree=self.opts.y_degree or 6, names=(x, y, z),
                        dz=dz.constant_term(), name=decl.name, **self._max_exp())

    # specs

    def _spec_global_stable(self, d):
        a = _bind(d.args, ("var", "primes", "ranks"), ("primes", "ranks"))
        var = _name(a["var"]) if "var" in a else "t"
        primes = tuple(to_polynomial(p, self.field, (var,)) for p in _list(a["primes"]))
        ranks = tuple(_int(r) for r in _list(a["ranks"]))
        return GlobalStableSpec(self.field, var, primes, ranks)

    def _spec_dvr_module(self, d):
        a = _bind(d.args, ("var", "generators", "n"), ("generators",))
        var = _name(a["var"]) if "var" in a else "t"
        model = DvrModel(self.field, self.precision, var)
        gens = [[to_polynomial(c, self.field, (var,)) for c in _list(g, "a vector")] for g in _list(a["generators"])]
        return DvrModulePresentation.build(model, gens, _int(a["n"]) if "n" in a else None)

    def _spec_semigroup_ring(self, d):
        a = _bind(d.args, ("var", "gens", "bound"), ("gens", "bound"))
        var = _name(a["var"]) if "var" in a else "t"
        return semigroup_algebra(self.field, var, [_int(g) for g in _list(a["gens"])], _int(a["bound"]))

    def _spec_local_ring(self, d):
        a = _bind(d.args, ("vars", "order"), ("vars", "order"))
        return local_truncation(self.field, [_name(v) for v in _list(a["vars"])], _int(a["order"]))

    def _spec_idealization(self, d):
        a = _bind(d.args, ("vars", "rank", "order"), ("vars", "rank"))
        return local_idealization_model(self.field, [_name(v) for v in _list(a["vars"])], _int(a["rank"]),
                                        _int(a["order"]) if "order" in a else 3)

    def _spec_extension(self, d):
        a = _bind(d.args, ("vars", "small", "big", "c", "quasilocal", "precision"), ("vars", "small"))
        names = [_name(v) for v in _list(a["vars"])]
        return ExtensionInstance(self.field, names, _list(a["small"]),
                                 _list(a["big"]) if "big" in a else None, a.get("c"),
                                 precision=_int(a["precision"]) if "precision" in a else 12,
                                 quasilocal=_bool(a["quasilocal"]) if "quasilocal" in a else False,
                                 **self._max_exp())


def _monomial_exponent(e: Expr, x: str) -> int:
    if isinstance(e, Num) and e.value != 0:
        return 0
    if isinstance(e, Var) and e.name == x:
        return 1
    if isinstance(e, Pow) and isinstance(e.base, Var) and e.base.name == x:
        return e.exponent
    if isinstance(e, BinOp) and e.op == "*" and isinstance(e.left, Num) and e.left.value:
        return _monomial_exponent(e.right, x)
    raise ValueError(f"span generators must be powers of {x}, got {format_expr(e)}")


# -- checks ---------------------------------------------------------------------------


def _from_check(res) -> tuple:
    ev = jsonable(res.evidence)
    return ("pass" if res.passed else "fail"), _brief(ev), ev


def _expect(result: int, args: dict, label: str) -> tuple:
    if "expect" in args:
        want = _int(args["expect"])
        ok = result == want
        return ("pass" if ok else "fail"), f"{label} {result}" + ("" if ok else f" (expected {want})"), \
            {label.replace(" ", "_"): result, "expected": want}
    return "pass", f"{label} {result}", {label.replace(" ", "_"): result}


def _need(obj, kind, *types):
    if not isinstance(obj, types):
        raise ValueError(f"check {kind} does not apply to this target")


def _alg_vec(alg, e):
    return alg.from_polynomial(to_polynomial(e, alg.field, alg.names))


def _check_scenario_or_extension(kind, obj, args, rng):
    if kind == "quadratic":
        a = _bind(args, ("pairs",))
        pairs = None
        if "pairs" in a:
            pairs = [tuple(_list(p, "a pair")) for p in _list(a["pairs"])]
            if any(len(p) != 2 for p in pairs):
                raise ValueError("pairs must have two entries")
        return _from_check(is_quadratic(obj, pairs))
    if kind == "c-analytic":
        a = _bind(args, ("m",))
        return _from_check(is_c_analytic(obj, _int(a["m"]) if "m" in a else 1))
    if kind == "contract-extend":
        a = _bind(args, ("ideal", "side"), ("ideal",))
        default = "big" if isinstance(obj, Scenario) else "small"
        side = _name(a["side"]) if "side" in a else default
        return _from_check(contract_extend(obj, _list(a["ideal"]), side))
    if kind == "generator-bound":
        a = _bind(args, ("ideal", "quasilocal"), ("ideal",))
        q = _bool(a["quasilocal"]) if "quasilocal" in a else None
        if isinstance(obj, Scenario) and q is None:
            q = False
        return _from_check(generator_bound(obj, _list(a["ideal"]), q))
    raise AssertionError(kind)


def run_check(cmd: CheckCmd, obj, rng: random.Random) -> tuple:
    """(verdict, summary, evidence) of one command against a built target."""
    kind, args = cmd.kind, cmd.args
    if kind in ("quadratic", "c-analytic", "contract-extend", "generator-bound"):
        _need(obj, kind, Scenario, ExtensionInstance)
        return _check_scenario_or_extension(kind, obj, args, rng)
    if kind in ("membership", "closure", "alpha-iso", "analytic-iso", "one-case", "correspondence",
                "kq-generators", "assoc-prime"):
        _need(obj, kind, Scenario)
        sc: Scenario = obj
        if kind == "membership":
            a = _bind(args, ("element",), ("element",))
            v = sc.membership(a["element"])
            verdict = "indeterminate" if v.in_R == INDETERMINATE else "pass"
            return verdict, v.summary(), jsonable(v.to_json())
        if kind == "closure":
            a = _bind(args, ("pairs",))
            return _from_check(ring_closure_check(sc, _int(a["pairs"]) if "pairs" in a else 200, rng))
        if kind == "alpha-iso":
            a = _bind(args, ("j",))
            return _from_check(alpha_iso_check(sc, _int(a["j"]) if "j" in a else 6))
        if kind == "analytic-iso":
            a = _bind(args, ("c", "m"))
            return _from_check(analytic_iso_check(sc, _int(a["m"]) if "m" in a else 1, a.get("c"), rng))
        if kind == "one-case":
            a = _bind(args, ("gens", "m"), ("gens", "m"))
            return _from_check(one_case_check(sc, _list(a["gens"]), _int(a["m"])))
        if kind == "correspondence":
            a = _bind(args, ("v",))
            v = a.get("v")
            if isinstance(v, Var) and v.name in ("none", "all"):
                v1 = None
            elif v is None:
                v1 = sc.v0
            else:
                v1 = _int(v)
            return _from_check(intermediate_correspondence(sc, v1))
        if kind == "kq-generators":
            a = _bind(args, ("a", "expect"), ("a",))
            out = kq_generators(sc, a["a"])
            verdict, summary, ev = _expect(out["generators"], a, "generators")
            ev.update(jsonable(out))
            return verdict, f"{summary}, dim {out['dim']}", ev
        if kind == "assoc-prime":
            _bind(args, ())
            return _from_check(associated_prime_witness(sc))
    if kind in ("tffr", "quotient-free"):
        _need(obj, kind, DvrModulePresentation)
        if kind == "tffr":
            a = _bind(args, ("expect",))
            return _expect(tffr_rank(obj), a, "rank")
        a = _bind(args, ("m",))
        res = quotient_freeness(obj, _int(a["m"]) if "m" in a else 1)
        ev = {"rank": res.rank, "dimension": res.dimension, "basis": jsonable(res.basis)}
        return ("pass" if res.passed else "fail"), f"rank {res.rank}, dim {res.dimension}", ev
    if kind == "stable":
        from ..core.finite import FiniteAlgebra
        _need(obj, kind, FiniteAlgebra)
        a = _bind(args, ("ideal",), ("ideal",))
        gens = [_alg_vec(obj, g) for g in _list(a["ideal"])]
        res = is_stable_ideal(obj, gens)
        witness = str(obj.to_polynomial(res.witness)) if res.witness is not None else None
        ev = {"witness": witness, "candidates_tried": res.candidates_tried}
        if res.caveat:
            ev["caveat"] = res.caveat
        summary = f"i = {witness}" if res.passed else f"no witness among {res.candidates_tried} candidates"
        return ("pass" if res.passed else "fail"), summary, ev
    if kind == "emb-dim":
        a = _bind(args, ("expect",))
        return _expect(embedding_dimension(obj), a, "embedding dimension")
    if kind == "global-stable":
        _need(obj, kind, GlobalStableSpec)
        _bind(args, ())
        return _from_check(global_stable_instance(obj))
    raise ValueError(f"unknown check kind {kind!r}")


def run(ast: ScriptAst, opts: RunOptions = None, script_name: str = "<script>") -> Report:
    opts = opts or RunOptions()
    env = Environment(ast, opts)
    report = Report(script_name, opts.seed, env.precision, strict=opts.strict)
    for index, cmd in enumerate(ast.commands, 1):
        rng = random.Random(f"{opts.seed}:{index}")
        start = time.perf_counter()
        try:
            obj = env.target(cmd.target)
            verdict, summary, evidence = run_check(cmd, obj, rng)
        except PrecisionError as exc:
            verdict, summary, evidence = "indeterminate", f"precision exhausted: {exc}", {"reason": str(exc)}
        except Exception as exc:  # every failure becomes a reported error verdict
            msg = f"{type(exc).__name__}: {exc}"
            verdict, summary, evidence = "error", msg, {"error": msg}
        elapsed = (time.perf_counter() - start) * 1000.0
        report.records.append(Record(index, cmd.loc.line if cmd.loc else 0, format_statement(cmd), cmd.kind,
                                     cmd.target, verdict, summary, evidence, elapsed))
    return report


def run_text(text: str, opts: RunOptions = None, script_name: str = "<script>") -> Report:
    from .parser import parse
    return run(parse(text), opts, script_name)
