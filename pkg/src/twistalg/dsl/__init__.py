"""Check-script language: parser, pretty printer and runner."""

from .ast import CHECK_KINDS, ScriptAst
from .parser import parse
from .printer import pretty
from .runner import Report, RunOptions, run, run_text

__all__ = ["CHECK_KINDS", "ScriptAst", "parse", "pretty", "Report", "RunOptions", "run", "run_text"]
