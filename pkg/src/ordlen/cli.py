"""Command-line front end.

Exit codes: 0 success, 1 counterexample found, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path
from typing import Any, Sequence

from .homology import ComplexError, ModuleComplex, acyclicity_check
from .io import SchemaError, load_json, module_from_json, poset_from_json, pwoexpr_from_json
from .module import canonical_form, dimension, generic_length, is_unmixed, length
from .ordinal import Ordinal, OrdinalSyntaxError, ord_sum, paper_product, parse_ordinal, shuffle_sum
from .pwo import PosetError, rank_all, symbolic_length
from .generate import CONTEXTS
from .suites import SUITES, replay, run_suite

OPS = {"+": ord_sum, "#": shuffle_sum, "*": paper_product}
# an operator is a '#' anywhere, or '+'/'*' with whitespace on both sides
_OP_SPLIT = re.compile(r"\s*(#)\s*|\s+([+*])\s+")


class UsageError(Exception):
    pass


def evaluate(expr: str) -> Ordinal:
    """Evaluate ``a OP b OP c ...`` left to right; a bare expression is just parsed."""
    parts = _OP_SPLIT.split(expr.strip())
    # re.split with two groups yields: operand, op1, op2, operand, ...
    value = parse_ordinal(parts[0])
    for k in range(1, len(parts), 3):
        op = parts[k] or parts[k + 1]
        value = OPS[op](value, parse_ordinal(parts[k + 2]))
    return value


def _emit(obj: Any) -> None:
    print(json.dumps(obj, sort_keys=True))


def cmd_ordinal(args: argparse.Namespace) -> int:
    result = evaluate(" ".join(args.expr))
    if args.json:
        _emit({"result": str(result), "degree": result.degree, "order": result.order,
               "valence": result.valence})
    else:
        print(result)
    return 0


def _module_summary(m) -> dict:
    return {
        "length": str(length(m)),
        "dimension": dimension(m),
        "generic_length": generic_length(m),
        "unmixed": is_unmixed(m),
        "structure": canonical_form(m).describe(m.ring),
    }


def cmd_len(args: argparse.Namespace) -> int:
    obj = load_json(args.file)
    if args.kind == "module":
        m = module_from_json(obj)
        out = _module_summary(m)
    elif args.kind == "poset":
        p = poset_from_json(obj)
        table = rank_all(p)
        out = {"length": str(Ordinal.of(table.length)), "rank": list(table.rank)}
    else:
        out = {"length": str(symbolic_length(pwoexpr_from_json(obj)))}
    if args.json:
        _emit(out)
    else:
        print(out["length"])
    return 0


def cmd_complex(args: argparse.Namespace) -> int:
    c = ModuleComplex.from_json(load_json(args.file))
    rep = acyclicity_check(c, args.e)
    if args.json:
        _emit(rep.to_json())
    else:
        print(f"lowlen {rep.lowlen}  hilen {rep.hilen}  verdict: {rep.verdict}")
        print("homology dimensions (i = 0..t):", " ".join(map(str, rep.homology_dims)))
    return 0 if rep.ok else 1


def _records(obj: Any) -> list[dict]:
    if isinstance(obj, dict) and "failures" in obj:
        return list(obj["failures"])
    if isinstance(obj, dict) and "suite" in obj:
        return [obj]
    if isinstance(obj, list):
        return obj
    raise SchemaError("replay file must hold a failure record, a list of them, or a report")


def cmd_verify(args: argparse.Namespace) -> int:
    if args.list:
        for name in SUITES:
            print(name)
        return 0
    if args.replay:
        records = _records(load_json(args.replay))
        reproduced = []
        for rec in records:
            if rec.get("suite") not in SUITES:
                raise UsageError(f"unknown suite {rec.get('suite')!r} in replay record")
            detail = replay(rec)
            if detail is not None:
                reproduced.append({"suite": rec["suite"], "trial": rec.get("trial"), "detail": detail})
        if args.json:
            _emit({"replayed": len(records), "reproduced": reproduced})
        else:
            print(f"replayed {len(records)} record(s), {len(reproduced)} still failing")
            for r in reproduced:
                print(f"  {r['suite']} trial {r['trial']}: {json.dumps(r['detail'], sort_keys=True)}")
        return 1 if reproduced else 0
    if args.suite is None:
        raise UsageError("verify needs a suite name (or --list / --replay)")
    if args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; try --list")
    report = run_suite(args.suite, args.seed, args.trials, args.bound, args.context)
    elapsed = report.pop("elapsed_ms")
    if args.timing:
        report["elapsed_ms"] = elapsed
    if args.json:
        _emit(report)
    else:
        n = len(report["failures"])
        print(f"{args.suite}: {args.trials} trials, seed {args.seed}, {n} failure(s)")
        for rec in report["failures"][:5]:
            print(f"  trial {rec['trial']}: {json.dumps(rec['detail'], sort_keys=True)}")
    if not args.timing:
        print(f"elapsed {elapsed} ms", file=sys.stderr)
    return 1 if report["failures"] else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ordlen", description="Ordinal lengths of orders and modules.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ordinal", help="evaluate an ordinal expression, e.g. 'w+1 # w+1'")
    p.add_argument("expr", nargs="+", help="operands and operators: + (sum), # (shuffle sum), * (copies)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_ordinal)

    p = sub.add_parser("len", help="length of a module, poset or expression file")
    p.add_argument("kind", choices=["module", "poset", "pwoexpr"])
    p.add_argument("file", type=Path)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_len)

    p = sub.add_parser("module", help="module commands")
    msub = p.add_subparsers(dest="action", required=True)
    q = msub.add_parser("len", help="length of a module file")
    q.add_argument("file", type=Path)
    q.add_argument("--json", action="store_true")
    q.set_defaults(func=cmd_len, kind="module")

    p = sub.add_parser("complex", help="acyclicity report for a complex file")
    p.add_argument("file", type=Path)
    p.add_argument("--e", type=int, default=-1, help="dimension level (default -1)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_complex)

    p = sub.add_parser("verify", help="run a named verification suite")
    p.add_argument("suite", nargs="?")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--bound", type=int, default=None, help="oracle or enumeration bound")
    p.add_argument("--context", choices=sorted(CONTEXTS), help="pin the ring for module suites")
    p.add_argument("--replay", type=Path, help="re-check failure records from a file")
    p.add_argument("--json", action="store_true")
    p.add_argument("--timing", action="store_true", help="include elapsed time in the report")
    p.add_argument("--list", action="store_true", help="list suite names")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OrdinalSyntaxError, SchemaError, ComplexError, PosetError, UsageError,
            OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        print(f"ordlen: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
