import json
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from twistalg.cli import main
from twistalg.core.expr import BinOp, Neg, Num, Pow, Var
from twistalg.dsl import CHECK_KINDS, RunOptions, parse, pretty, run, run_text
from twistalg.dsl.ast import Arg, CheckCmd, ListValue, ScriptAst, SpecDecl
from twistalg.errors import DslError

SCRIPTS = Path(__file__).resolve().parent.parent / "examples_scripts"
GOLDEN = (SCRIPTS / "gl.tw").read_text()


def test_minimal_script():
    ast = parse("field F5\nprecision 24\ncheck membership GL : Z/x\n")
    assert len(ast.commands) == 1
    cmd = ast.commands[0]
    assert (cmd.kind, cmd.target, cmd.loc.line) == ("membership", "GL", 3)


def test_golden_parse():
    ast = parse(GOLDEN)
    assert len(ast.commands) == 5
    assert ast.precision == 24
    assert parse(pretty(ast)) == ast


@pytest.mark.parametrize("text,fragment,line", [
    ("precision 4\ncheck bogus GL : x\n", "unknown check kind 'bogus'", 2),
    ("precision 4\ncheck membership H : x\n", "undeclared identifier 'H'", 2),
    ("precision 4\nprecision 5\n", "duplicate precision", 2),
    ("field F5\n", "missing precision", 1),
    ("precision 4\nfield F6\n", "prime", 2),
    ("precision 4\ncheck membership GL : x +\n", "unexpected", 2),
    ("precision 4\nring S = adjoin(A, Z)\n", "undeclared identifier 'A'", 2),
    ("precision 4\nseries s = liouville(1)\nseries s = [0, 1]\n", "already declared", 3),
    ("precision 4\ncheck membership GL : x $\n", "unexpected character", 2),
])
def test_diagnostics(text, fragment, line):
    with pytest.raises(DslError) as info:
        parse(text)
    assert fragment in str(info.value)
    assert info.value.line == line


def test_locations_do_not_affect_equality():
    a = parse("precision 4\ncheck membership GL : x\n")
    b = parse("\n\nprecision 4\n\n   check   membership GL:x   # note\n")
    assert a == b


# -- round trip over generated trees ---------------------------------------------------

names = st.sampled_from(["x", "y", "Z", "t", "a1", "yes", "big"])
leaves = st.one_of(st.integers(0, 30).map(Num), names.map(Var))


def _compound(children):
    return st.one_of(
        st.builds(BinOp, st.sampled_from(["+", "-", "*", "/"]), children, children),
        st.builds(Neg, children),
        st.builds(Pow, children, st.integers(-4, 6)),
    )


exprs = st.recursive(leaves, _compound, max_leaves=8)
values = st.recursive(exprs, lambda c: st.lists(c, max_size=3).map(lambda xs: ListValue(tuple(xs))), max_leaves=6)
args = st.lists(st.builds(Arg, st.one_of(st.none(), st.sampled_from(["m", "c", "gens", "ideal"])), values),
                max_size=3)
checks = st.builds(CheckCmd, st.sampled_from(CHECK_KINDS), st.just("GL"), args.map(tuple))
specs = st.builds(SpecDecl, st.sampled_from(["G", "V", "E"]), st.sampled_from(["global_stable", "extension"]),
                  args.map(tuple))


@settings(max_examples=150, deadline=None)
@given(st.lists(checks, min_size=1, max_size=5), st.integers(1, 64))
def test_pretty_parse_round_trip(cmds, n):
    from twistalg.dsl.ast import FieldDecl, PrecisionDecl
    ast = ScriptAst((FieldDecl("F5"), PrecisionDecl(n)) + tuple(cmds))
    assert parse(pretty(ast)) == ast


@settings(max_examples=60, deadline=None)
@given(specs)
def test_spec_round_trip(spec):
    from twistalg.dsl.ast import PrecisionDecl
    ast = ScriptAst((PrecisionDecl(8), spec))
    assert parse(pretty(ast)) == ast


# -- runner -----------------------------------------------------------------------------


def test_golden_run_all_pass():
    report = run(parse(GOLDEN), RunOptions(seed=0))
    assert [r.verdict for r in report.records] == ["pass"] * 5
    assert report.exit_code == 0


def test_membership_no_is_an_answer():
    report = run_text("field F5\nprecision 24\ncheck membership GL : Z/x\n")
    (rec,) = report.records
    assert rec.verdict == "pass" and rec.summary == "no (val = -1)"
    assert report.exit_code == 0


INDETERMINATE = """\
field F5
precision 6
series zs = liouville(1)
series ys = liouville(2)
ring A = localize(adjoin(poly(x), y -> ys), at=(x, y))
ring S = adjoin(A, Z -> zs)
derivation D on S over A : Z = 1
set C = powers(x)
module K = lattice(val >= 8)
scenario T = twist(S, D, K, C)
check membership T : x^6 Z
"""


def test_strict_indeterminate_exit_code():
    assert run_text(INDETERMINATE).exit_code == 0
    report = run_text(INDETERMINATE, RunOptions(strict=True))
    assert report.records[0].verdict == "indeterminate"
    assert report.exit_code == 2


def test_declared_scenario_matches_builtin():
    text = GOLDEN.replace("scenario GL", "scenario H").replace("GL", "H")
    a = run(parse(GOLDEN))
    b = run(parse(text))
    assert [r.summary for r in a.records] == [r.summary for r in b.records]


def test_errors_are_reported_not_raised():
    text = """\
precision 8
spec V = dvr_module(var = t, generators = [[1, 0]])
check membership V : x
check tffr V : expect = 1
check quotient-free V : m = 20
spec B = extension(vars = [x], small = [x, y])
check quadratic B
"""
    report = run_text(text)
    verdicts = [r.verdict for r in report.records]
    assert verdicts == ["error", "pass", "indeterminate", "error"]
    assert report.exit_code == 1


def test_bad_scenario_shape_is_an_error():
    text = GOLDEN.replace("derivation D on S over A : Z = 1", "derivation D on S over A : Z = x")
    report = run_text(text)
    assert {r.verdict for r in report.records} == {"error"}


def test_report_is_deterministic():
    a = run(parse(GOLDEN), RunOptions(seed=3)).to_json()
    b = run(parse(GOLDEN), RunOptions(seed=3)).to_json()
    assert a == b
    doc = json.loads(a)
    assert doc["schema"].startswith("twistalg-report/")
    assert {"index", "line", "command", "kind", "target", "verdict", "evidence"} <= set(doc["records"][0])


def test_tour_script():
    report = run_text((SCRIPTS / "tour.tw").read_text())
    failing = [r.command for r in report.records if r.verdict != "pass"]
    # the three deliberate negative cases
    assert failing == ["check stable P : ideal = [x, y]", "check quadratic E", "check c-analytic E2"]
    assert all(r.verdict == "fail" for r in report.records if r.command in failing)


# -- command line ----------------------------------------------------------------------


def test_cli_run_and_json(tmp_path, capsys):
    script = tmp_path / "gl.tw"
    script.write_text(GOLDEN)
    assert main(["run", str(script)]) == 0
    out = capsys.readouterr().out
    assert "no (val = -1)" in out
    assert main(["run", str(script), "--json", "--seed", "4"]) == 0
    first = capsys.readouterr().out
    assert main(["run", str(script), "--json", "--seed", "4"]) == 0
    assert capsys.readouterr().out == first
    assert "elapsed_ms" not in first


def test_cli_fmt_and_errors(tmp_path, capsys):
    script = tmp_path / "s.tw"
    script.write_text("precision 4\ncheck  membership GL:Z/x\n")
    assert main(["fmt", str(script)]) == 0
    assert capsys.readouterr().out == "precision 4\ncheck membership GL : Z/x\n"
    script.write_text("precision 4\ncheck bogus GL : x\n")
    assert main(["run", str(script)]) == 1
    assert "unknown check kind 'bogus' at line 2" in capsys.readouterr().err
    assert main(["run", str(tmp_path / "missing.tw")]) == 1
    script.write_text("precision 4\ncheck membership GL : Z/x\n")
    assert main(["run", str(script), "--precision", "0"]) == 1
    assert "must be positive" in capsys.readouterr().err
