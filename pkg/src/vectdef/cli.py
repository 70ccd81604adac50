"""Command-line driver: verification suites and ad-hoc deformation computations.

Exit codes: 0 when every check passes, 1 when a mathematical check fails,
2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .catalog import CatalogError, export_json
from .deformation import (SymbolSpace, check_deformation_at_point, derive_conditions,
                          enumerate_component_solutions, higher_order_analysis, render_blocks,
                          second_order_factor_search)
from .report import document, verify
from .tpoly import Param

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False)


def _parse_blocks(text: str | None) -> set[int] | None:
    if not text:
        return None
    shifts = set()
    for part in text.split(","):
        key, _, value = part.strip().partition("=")
        if key != "k" or not value.lstrip("-").isdigit():
            raise UsageError(f"bad block selector {part!r}; expected k=<int>[,k=<int>...]")
        shifts.add(int(value))
    return shifts


def _parse_space(text: str) -> SymbolSpace:
    try:
        return SymbolSpace.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _parse_params(names: Sequence[str]) -> list[Param]:
    out = []
    for name in names:
        try:
            out.append(Param.parse(name))
        except ValueError as exc:
            raise UsageError(f"bad parameter {name!r}: {exc}") from None
    return out


# --------------------------------------------------------------- text output

def _verify_text(doc: dict) -> str:
    lines = [f"{doc['command']}  (catalog {doc['catalogHash']})"]
    for r in doc["records"]:
        lines.append(f"  {r['status'].upper():4}  {r['id']}  [{r['topic']}]")
    s = doc["summary"]
    lines.append(f"{s['passed']}/{s['total']} passed")
    if doc["externalAssumptions"]:
        lines.append("assumed: " + "; ".join(doc["externalAssumptions"]))
    return "\n".join(lines)


def _equations(conds: Sequence[str]) -> list[str]:
    return [f"    {c} = 0" for c in conds]


def _conditions_text(doc: dict) -> str:
    rep = doc["report"]
    lines = [f"{rep['space']}:  L1 = {rep['infinitesimal']}"]
    for order in rep["orders"]:
        lines.append(f"  order {order['order']}:")
        for b in order["blocks"]:
            if b["conditions"]:
                lines.append(f"    block {b['block']}:")
                lines += ["  " + e for e in _equations(b["conditions"])]
        for raw in order["rawConditions"]:
            if order["order"] > 2:
                tag = "implied by lower orders" if raw["implied"] else "new"
                lines.append(f"    closure: {raw['condition']} = 0  ({tag})")
        if order.get("termText"):
            lines.append("    term:")
            lines += [f"      {blk}: {body}" for blk, body in order["termText"].items()]
    lines.append("  ideal generators:")
    lines += _equations(rep["idealGenerators"]) or ["    (none)"]
    if "branches" in doc:
        br = doc["branches"]
        lines.append(f"  branches: {len(br['branches'])}")
        for b in br["branches"]:
            lines.append(f"    {', '.join(b['equations'])}  ({b['freeParameters']} free)")
        for c in br["unenumerated"]:
            lines.append(f"    not split into linear factors: {c}")
    if "terminated" in rep and doc["command"] == "analyze":
        state = "terminates" if rep["terminated"] else "not shown to terminate"
        lines.append(f"  series {state}; polynomial degree {rep['polynomialDegree']}")
    if "secondOrderFactors" in doc:
        for f in doc["secondOrderFactors"]:
            lines.append(f"  printed witnesses with factor {f['factor']}: "
                         f"{'fit' if f['valid'] else 'do not fit'}")
    return "\n".join(lines)


def _check_text(doc: dict) -> str:
    c = doc["check"]
    lines = [f"{doc['space']} at {doc['assignment']}: {'PASS' if c['passed'] else 'FAIL'}"
             f" (orders 1..{c['ordersChecked']}, monomial degree <= {c['degreeBound']})"]
    for u in c["unsatisfiedConditions"]:
        lines.append(f"  violates {u} = 0")
    for f in c["symbolicFailures"]:
        lines.append(f"  order {f['order']} block {f['block']}: defect {f['defect']}")
    for f in c["concreteFailures"]:
        lines.append(f"  concrete order {f['order']} block {f['block']} at degrees {f['degrees']}: {f['value']}")
    return "\n".join(lines)


# ----------------------------------------------------------------- commands

def _orders_with_text(rep) -> dict:
    out = rep.to_json()
    for o, order in zip(rep.orders, out["orders"]):
        order["termText"] = render_blocks(o.term)
    return out


def cmd_verify(args, suite: str) -> tuple[dict, int]:
    doc = verify(suite, _parse_blocks(args.blocks), args.assume_dimensions)
    return doc, EXIT_FAIL if doc["summary"]["failed"] else EXIT_OK


def cmd_derive(args) -> tuple[dict, int]:
    space = _parse_space(args.space)
    rep = derive_conditions(space, _parse_params(args.exclude))
    return document("derive-conditions", [], args.assume_dimensions,
                    report=_orders_with_text(rep)), EXIT_OK


def cmd_analyze(args) -> tuple[dict, int]:
    space = _parse_space(args.space)
    exclude = _parse_params(args.exclude)
    rep = higher_order_analysis(space, args.order, exclude)
    branches = enumerate_component_solutions(rep.conditions, rep.series.params.params)
    extra = {
        "report": _orders_with_text(rep),
        "branches": {"branches": [{"equations": b.render(), "freeParameters": b.free_parameters}
                                  for b in branches.branches],
                     "unenumerated": [c.render() for c in branches.unenumerated]},
    }
    if args.printed_witnesses:
        extra["secondOrderFactors"] = [
            {"factor": t.factor.pretty(), "valid": t.valid, "failing": t.failing, "leftOut": t.left_out}
            for t in second_order_factor_search(space, exclude=exclude)]
    return document("analyze", [], args.assume_dimensions, **extra), EXIT_OK


def cmd_check(args) -> tuple[dict, int]:
    from .deformation import parse_assignment
    space = _parse_space(args.space)
    try:
        with open(args.params, encoding="utf-8") as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read parameters from {args.params}: {exc}") from None
    if not isinstance(raw, dict):
        raise UsageError("parameter file must hold a JSON object mapping names to values")
    try:
        assignment = parse_assignment(raw)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rep = higher_order_analysis(space, max(args.order or 4, 2), _parse_params(args.exclude))
    try:
        res = check_deformation_at_point(rep.series, assignment, args.order, ideal=rep.ideal)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    doc = document("check", [], args.assume_dimensions, space=space.label,
                   assignment={p.name: v.pretty() for p, v in sorted(assignment.items(),
                                                                     key=lambda pv: pv[0].sort_key())},
                   check=res.to_json())
    return doc, EXIT_OK if res.passed else EXIT_FAIL


def cmd_export(args) -> tuple[dict, int]:
    try:
        return export_json(args.key), EXIT_OK
    except CatalogError as exc:
        raise UsageError(str(exc)) from None


# ------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--assume-dimensions", action=argparse.BooleanOptionalAction, default=True,
                        help="report non-coboundaries as nonzero classes using the known cohomology "
                             "dimensions")
    common.add_argument("--output", help="write the report to this file instead of stdout")

    p = argparse.ArgumentParser(prog="vectdef", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name, helptext in (("verify-table1", "1-cocycle families: closedness and nontriviality"),
                           ("verify-2cocycles", "2-cocycles, cup identities and witnesses"),
                           ("verify-conditions", "second-order conditions block by block")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("--blocks", help="restrict to shifts, e.g. k=5,k=6")
    for name, helptext in (("derive-conditions", "second-order conditions of a symbol space"),
                           ("analyze", "solve order by order, enumerate branches, detect termination"),
                           ("check", "verify a parameter point order by order")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("--space", required=True, help="e.g. n=4,delta=5 or n=2,delta=l+3")
        s.add_argument("--exclude", nargs="*", default=[], metavar="PARAM",
                       help="parameters left out of the infinitesimal deformation, e.g. t[1,3]")
        if name == "analyze":
            s.add_argument("--order", type=int, default=4, help="highest order to solve")
            s.add_argument("--printed-witnesses", action="store_true",
                           help="also test the printed second-order witnesses with factors 1/2, -1/2, 1, -1")
        if name == "check":
            s.add_argument("--params", required=True, help="JSON object, e.g. {\"t[1,3]\": \"5\"}")
            s.add_argument("--order", type=int, help="highest order to check (default: twice the degree)")
    s = sub.add_parser("export", parents=[common], help="JSON terms of a catalog cochain")
    s.add_argument("key", help="e.g. C[l,l+4], Ctilde[0,1], Omega[0,5], b[l,l+5]")
    return p


_COMMANDS = {
    "verify-table1": lambda a: cmd_verify(a, "table1"),
    "verify-2cocycles": lambda a: cmd_verify(a, "cocycles2"),
    "verify-conditions": lambda a: cmd_verify(a, "conditions"),
    "derive-conditions": cmd_derive,
    "analyze": cmd_analyze,
    "check": cmd_check,
    "export": cmd_export,
}


def _render(doc: dict, args) -> str:
    if args.format == "json":
        return _dump(doc)
    if args.command.startswith("verify"):
        return _verify_text(doc)
    if args.command in ("derive-conditions", "analyze"):
        return _conditions_text(doc)
    if args.command == "check":
        return _check_text(doc)
    return _dump(doc)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        doc, code = _COMMANDS[args.command](args)
    except (UsageError, ValueError) as exc:
        print(f"vectdef: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = _render(doc, args) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
