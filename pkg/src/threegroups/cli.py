"""The ``tg`` command line tool.

Every subcommand produces one :class:`CliResult`, rendered as text or as a
single JSON document.  Exit codes: 0 for ok and unsat, 1 for unsat under
``--fail-on-unsat``, 2 for errors (including failed checks and fuzz
mismatches).  Output is byte-identical for identical arguments unless
``--timing`` is given.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from typing import Any, Sequence

from .fuzz import run_fuzz
from .qe import NotASentence, decide, qe
from .semantics import UnboundVariable, check_axioms, eval_qf, get_model, parse_assignment
from .syntax import ParseError, atomize, is_quantifier_free, parse, to_text
from .syntax.linear import format_rational
from .witness import constraints_from_formula, find_witness

OK, UNSAT, ERROR = "ok", "unsat", "error"


@dataclass(frozen=True)
class CliResult:
    command: str
    status: str
    payload: Any
    timing_ms: float | None = None

    def exit_code(self, fail_on_unsat: bool = False) -> int:
        match self.status:
            case "ok":
                return 0
            case "unsat":
                return 1 if fail_on_unsat else 0
        return 2

    def to_json(self) -> str:
        doc = {"command": self.command, "status": self.status, "payload": self.payload,
               "timing_ms": self.timing_ms}
        return json.dumps(doc, ensure_ascii=False, indent=2)

    def to_text(self) -> str:
        match self.payload:
            case str(s):
                lines = [s]
            case list(items):
                lines = [str(i) for i in items]
            case dict(d) if "lines" in d:
                lines = list(d["lines"])
            case other:
                lines = [json.dumps(other, ensure_ascii=False)]
        if self.status == ERROR and self.command and not lines[0].startswith("error"):
            lines[0] = f"error: {lines[0]}"
        if self.timing_ms is not None:
            lines.append(f"time: {self.timing_ms:.1f} ms")
        return "\n".join(lines)


def _bool(b: bool) -> str:
    return "true" if b else "false"


def _echo(ns: argparse.Namespace) -> str:
    return " ".join(ns.argv_echo)


# -- subcommands ------------------------------------------------------------

def cmd_parse(ns) -> tuple[str, Any]:
    f = parse(ns.formula)
    return OK, to_text(atomize(f) if ns.special else f)


def cmd_qe(ns) -> tuple[str, Any]:
    return OK, to_text(qe(parse(ns.formula)))


def cmd_decide(ns) -> tuple[str, Any]:
    eq, ne = decide(parse(ns.sentence))
    if ns.format == "json":
        return OK, {"Q=L": eq, "Q≠L": ne}
    return OK, [f"Q=L: {_bool(eq)}", f"Q≠L: {_bool(ne)}"]


def cmd_eval(ns) -> tuple[str, Any]:
    m = get_model(ns.model)
    f = parse(ns.formula)
    a = parse_assignment(ns.assign or "", m)
    if not is_quantifier_free(f):
        f = qe(f)
    value = eval_qf(m, f, a)
    return OK, value if ns.format == "json" else _bool(value)


def cmd_witness(ns) -> tuple[str, Any]:
    x, cs = constraints_from_formula(parse(ns.formula))
    w = find_witness(cs)
    if w is None:
        return UNSAT, "UNSAT"
    return OK, format_rational(w) if ns.format == "text" else {"variable": x, "value": format_rational(w)}


def cmd_check_axioms(ns) -> tuple[str, Any]:
    report = check_axioms(get_model(ns.model), ns.samples, ns.seed)
    payload = report.to_dict() if ns.format == "json" else report.lines()
    return (OK if report.passed else ERROR), payload


def cmd_fuzz(ns) -> tuple[str, Any]:
    report = run_fuzz(ns.cases, ns.seed)
    payload = report.to_dict() if ns.format == "json" else report.lines()
    return (OK if report.ok else ERROR), payload


# -- argument parsing -------------------------------------------------------

def _common(suppress: bool) -> argparse.ArgumentParser:
    # the same options are accepted before and after the subcommand
    p = argparse.ArgumentParser(add_help=False)
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--format", choices=("text", "json"), default=d or "text",
                   help="output format (default text)")
    p.add_argument("--fail-on-unsat", action="store_true", default=d or False,
                   help="exit with status 1 when the answer is unsat")
    p.add_argument("--timing", action="store_true", default=d or False,
                   help="report wall-clock time (makes output nondeterministic)")
    return p


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tg", parents=[_common(False)],
                     description="Quantifier elimination and decision for the theory of three groups.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = [_common(True)]

    p = sub.add_parser("parse", parents=common, help="parse and print a formula")
    p.add_argument("formula")
    p.add_argument("--special", action="store_true", help="print the atomized special form")
    p.set_defaults(run=cmd_parse)

    p = sub.add_parser("qe", parents=common, help="eliminate quantifiers")
    p.add_argument("formula")
    p.set_defaults(run=cmd_qe)

    p = sub.add_parser("decide", parents=common, help="truth in the Q=L and Q≠L completions")
    p.add_argument("sentence")
    p.set_defaults(run=cmd_decide)

    p = sub.add_parser("eval", parents=common, help="evaluate in a canonical model")
    p.add_argument("--model", choices=("std", "lex"), default="std")
    p.add_argument("--assign", default="", help='bindings such as "x=3/2, y=(1/2,3)"')
    p.add_argument("formula")
    p.set_defaults(run=cmd_eval)

    p = sub.add_parser("witness", parents=common, help="least witness of a one-variable system")
    p.add_argument("formula")
    p.set_defaults(run=cmd_witness)

    p = sub.add_parser("check-axioms", parents=common, help="sample the axioms in a model")
    p.add_argument("--model", choices=("std", "lex"), default="std")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(run=cmd_check_axioms)

    p = sub.add_parser("fuzz", parents=common, help="differential tests of the engine")
    p.add_argument("--cases", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(run=cmd_fuzz)
    return parser


def run(argv: Sequence[str]) -> tuple[int, str]:
    """Execute ``tg argv`` and return the exit code and the rendered output."""
    argv = list(argv)
    fmt = "json" if "--format=json" in argv or _follows(argv, "--format", "json") else "text"
    try:
        ns = build_parser().parse_args(argv)
    except _UsageError as e:
        return _finish(CliResult(" ".join(argv), ERROR, f"usage: {e}"), fmt, False)
    ns.argv_echo = argv
    start = time.perf_counter()
    try:
        status, payload = ns.run(ns)
    except ParseError as e:
        status, payload = ERROR, f"parse error at {e}"
    except (NotASentence, UnboundVariable, ValueError) as e:
        status, payload = ERROR, str(e)
    elapsed = (time.perf_counter() - start) * 1000 if ns.timing else None
    res = CliResult(_echo(ns), status, payload, None if elapsed is None else round(elapsed, 1))
    return _finish(res, ns.format, ns.fail_on_unsat)


def _follows(argv: list[str], flag: str, value: str) -> bool:
    return any(a == flag and b == value for a, b in zip(argv, argv[1:]))


def _finish(res: CliResult, fmt: str, fail_on_unsat: bool) -> tuple[int, str]:
    out = res.to_json() if fmt == "json" else res.to_text()
    return res.exit_code(fail_on_unsat), out


def main(argv: Sequence[str] | None = None) -> int:
    code, out = run(sys.argv[1:] if argv is None else argv)
    stream = sys.stderr if code == 2 else sys.stdout
    print(out, file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
