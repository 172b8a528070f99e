"""Command line front end.

Exit status: 0 for success, YES or VALID; 1 for NO, INVALID or
NON-TERMINATING; 2 for usage, syntax, kinding and resource errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Optional

from .algorithm import IsSubtype, KindingError, NotSubtype, SubTrace, check_context, decide, infer_kind
from .curry import decorate, decorate_ctx, erase
from .declarative import check_derivation, from_json
from .reduction import DEFAULT_FUEL, Fuel, FuelExhausted, normalize, whnf
from .surface import CHURCH, CURRY, SurfaceSyntaxError, parse_context, parse_type, print_type
from .syntax import Context, Type, freshen_binders
from .termination import DEFAULT_BUDGET, BudgetExhausted, is_sn, is_terminating

OK, NO, ERROR = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class Report:
    status: int
    verdict: str
    lines: list = field(default_factory=list)
    kind: Optional[str] = None
    trace: Optional[dict] = None
    measure: Optional[int] = None
    result: Optional[str] = None

    def text(self) -> str:
        return "\n".join([self.verdict, *self.lines]) + "\n"

    def json(self) -> str:
        data = {"verdict": self.verdict, "kind": self.kind, "trace": self.trace, "measure": self.measure}
        if self.result is not None:
            data["result"] = self.result
        if self.lines and self.status == ERROR:
            data["message"] = "\n".join(self.lines)
        return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def trace_to_data(t: SubTrace) -> dict:
    return {
        "rule": t.rule,
        "left": print_type(t.left),
        "right": print_type(t.right),
        "premises": [trace_to_data(p) for p in t.premises],
    }


def trace_from_data(obj: dict) -> SubTrace:
    return SubTrace(
        obj["rule"],
        parse_type(obj["left"]),
        parse_type(obj["right"]),
        tuple(trace_from_data(p) for p in obj.get("premises", [])),
    )


def trace_lines(t: SubTrace, depth: int = 0) -> list[str]:
    out = [f"{'  ' * depth}{t.rule}: {print_type(t.left)} <= {print_type(t.right)}"]
    for p in t.premises:
        out += trace_lines(p, depth + 1)
    return out


# -- commands -----------------------------------------------------------------


def _load_ctx(args) -> Context:
    if args.ctx is None:
        return Context()
    try:
        with open(args.ctx, encoding="utf-8") as f:
            src = f.read()
    except OSError as e:
        raise UsageError(f"cannot read context file: {e}") from e
    return parse_context(src, args.mode)


def _church(args, g: Context, src: str) -> tuple[Context, Type]:
    """Parse ``src`` and bring it and ``g`` to the annotated presentation."""
    a = parse_type(src, args.mode)
    if args.mode == CHURCH:
        return g, a
    dg = decorate_ctx(g)
    if dg is None:
        raise KindingError("context mentions an undeclared variable")
    da = decorate(a, dg)
    if da is None:
        raise KindingError(f"{src} mentions an undeclared variable")
    return dg, da


def cmd_kind(args) -> Report:
    g = _load_ctx(args)
    a = parse_type(args.type, args.mode)
    check_context(g)
    k = infer_kind(g, freshen_binders(a, g.names)).kind
    return Report(OK, str(k), kind=str(k))


def cmd_sub(args) -> Report:
    g0 = _load_ctx(args)
    g, a = _church(args, g0, args.left)
    _, b = _church(args, g0, args.right)
    d = decide(g, a, b, Fuel(args.fuel))
    match d:
        case IsSubtype(trace):
            r = Report(OK, "YES", trace=trace_to_data(trace) if args.trace else None)
            if args.trace:
                r.lines = trace_lines(trace)
            return r
        case NotSubtype():
            return Report(NO, "NO")
    return Report(ERROR, "ILL-KINDED", [str(d.error)])


def cmd_nf(args) -> Report:
    a = parse_type(args.type, args.mode)
    out = print_type(normalize(a, Fuel(args.fuel)))
    return Report(OK, out, result=out)


def cmd_whnf(args) -> Report:
    a = parse_type(args.type, args.mode)
    out = print_type(whnf(a, Fuel(args.fuel)))
    return Report(OK, out, result=out)


def cmd_measure(args) -> Report:
    _, a = _church(args, _load_ctx(args), args.type)
    v = is_terminating(a, args.budget)
    if not v:
        return Report(NO, "NON-TERMINATING")
    m = v.cert.measure
    return Report(OK, str(m), [f"explored {v.cert.explored} classes"] if args.trace else [], measure=m)


def cmd_terminates(args) -> Report:
    _, a = _church(args, _load_ctx(args), args.type)
    t = is_terminating(a, args.budget)
    sn = is_sn(a, args.budget)
    lines = [f"SN: {'YES' if sn else 'NO'}"]
    if t:
        return Report(OK, "T: YES", lines, measure=t.cert.measure)
    return Report(NO, "T: NO", lines)


def cmd_translate(args) -> Report:
    g = _load_ctx(args)
    a = parse_type(args.type, args.mode)
    if args.mode == CHURCH:
        out = print_type(erase(a))
        return Report(OK, out, result=out)
    dg = decorate_ctx(g)
    da = decorate(a, dg) if dg is not None else None
    if da is None:
        return Report(ERROR, "UNDECLARED", ["a free variable is not declared in the context"])
    out = print_type(da)
    return Report(OK, out, result=out)


def cmd_check_derivation(args) -> Report:
    try:
        with open(args.file, encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise UsageError(f"cannot read derivation: {e}") from e
    try:
        d = from_json(text, args.mode)
    except (ValueError, KeyError, TypeError) as e:
        raise UsageError(f"malformed derivation: {e}") from e
    v = check_derivation(d)
    if v:
        return Report(OK, "VALID")
    return Report(NO, "INVALID", [f"at {list(v.path)}: {v.reason}"])


# -- entry point --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ctx", metavar="FILE", help="context file, one entry per line")
    common.add_argument("--mode", choices=[CHURCH, CURRY], default=CHURCH)
    common.add_argument("--fuel", type=int, default=DEFAULT_FUEL, help="reduction step budget")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="termination exploration budget")
    common.add_argument("--trace", action="store_true", help="include the derivation trace")
    common.add_argument("--format", choices=["text", "json"], default="text")

    p = argparse.ArgumentParser(prog="hosub", description="Higher-order bounded subtyping toolkit.")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, func, help_, *positionals):
        sp = sub.add_parser(name, parents=[common], help=help_)
        for pos in positionals:
            sp.add_argument(pos)
        sp.set_defaults(func=func)

    add("kind", cmd_kind, "infer the kind of a type", "type")
    add("sub", cmd_sub, "decide subtyping", "left", "right")
    add("nf", cmd_nf, "beta normal form", "type")
    add("whnf", cmd_whnf, "weak-head normal form", "type")
    add("measure", cmd_measure, "termination measure", "type")
    add("terminates", cmd_terminates, "termination and strong normalization", "type")
    add("translate", cmd_translate, "erase (church) or decorate (curry)", "type")
    add("check-derivation", cmd_check_derivation, "validate a derivation file", "file")
    return p


def run(argv: Optional[list[str]] = None) -> tuple[int, str]:
    args = build_parser().parse_args(argv)
    if args.fuel < 0 or args.budget < 0:
        return ERROR, "error: budgets must be nonnegative\n"
    try:
        report = args.func(args)
    except SurfaceSyntaxError as e:
        report = Report(ERROR, "SYNTAX ERROR", [str(e)])
    except KindingError as e:
        report = Report(ERROR, "ILL-KINDED", [str(e)])
    except (FuelExhausted, BudgetExhausted) as e:
        report = Report(ERROR, "RESOURCE LIMIT", [str(e)])
    except UsageError as e:
        report = Report(ERROR, "USAGE ERROR", [str(e)])
    out = report.json() if args.format == "json" else report.text()
    return report.status, out


def main(argv: Optional[list[str]] = None) -> int:
    status, out = run(argv)
    sys.stdout.write(out)
    return status


if __name__ == "__main__":
    sys.exit(main())
