"""Command-line front end: corpus listing, single and batch verification,
coefficient dumps, and machine-readable reports.

Orders on the command line are t-units (t = q^(1/2)); --q-order is the
whole-q convenience (twice the t-order).  BAILEYKIT_DEFAULT_ORDER supplies
the default t-order when neither flag nor an order= binding is given.
Exit codes: 0 all pass, 1 any fail, 2 parse/usage error, 3 evaluation error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional

from .corpus import (
    CORPUS,
    EvalConfig,
    IdentityInstance,
    VerificationReport,
    build_sides,
    make_instance,
    verify,
)
from .errors import BaileykitError, ParseError
from .instances import format_monomial, parse_instances, parse_monomial

ENV_ORDER = "BAILEYKIT_DEFAULT_ORDER"


def _default_order(args) -> Optional[int]:
    if getattr(args, "order", None) is not None:
        return args.order
    if getattr(args, "q_order", None) is not None:
        return 2 * args.q_order
    env = os.environ.get(ENV_ORDER)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ParseError(f"{ENV_ORDER} must be an integer", 0, 0)
    return None


def _parse_cli_params(def_id: str, pairs: List[str]) -> dict:
    d = CORPUS.get(def_id)
    kinds = {p.name: p.kind for p in d.params} if d else {}
    out: dict = {}
    for pair in pairs:
        if "=" not in pair:
            raise ParseError(f"--param expects name=value, got {pair!r}", 0, 0)
        name, value = pair.split("=", 1)
        kind = kinds.get(name)
        if kind in ("nonneg-int", "pos-int"):
            out[name] = int(value)
        elif kind == "monomial":
            out[name] = parse_monomial(value)
        else:
            # defer to make_instance for the unknown-parameter diagnostic
            try:
                out[name] = int(value)
            except ValueError:
                out[name] = parse_monomial(value)
    return out


def _params_json(inst: IdentityInstance, derived: dict) -> dict:
    out = {}
    for k, v in inst.bindings.items():
        out[k] = v if isinstance(v, int) else format_monomial(v)
    for k, v in derived.items():
        out[k] = v if isinstance(v, int) else format_monomial(v)
    return out


def _report_json(rep: VerificationReport) -> dict:
    obj = {
        "id": rep.instance.def_id,
        "params": _params_json(rep.instance, rep.derived),
        "order": rep.instance.order,
        "status": rep.status,
        "terms_summed": rep.terms_summed,
        "elapsed_ms": rep.elapsed_ms,
    }
    if rep.status == "fail":
        obj["first_mismatch_texp"] = rep.first_mismatch_texp
        obj["lhs_coeff"] = str(rep.lhs_coeff)
        obj["rhs_coeff"] = str(rep.rhs_coeff)
    if rep.message:
        obj["message"] = rep.message
    return obj


def _report_line(rep: VerificationReport) -> str:
    inst = rep.instance
    params = " ".join(
        f"{k}={v if isinstance(v, int) else format_monomial(v)}"
        for k, v in inst.bindings.items()
    )
    head = f"{inst.def_id} {params}".strip() + f" order={inst.order}"
    if rep.status == "pass":
        return f"{head}  pass  ({rep.terms_summed} terms)"
    if rep.status == "fail":
        return (
            f"{head}  FAIL at t^{rep.first_mismatch_texp}: "
            f"lhs={rep.lhs_coeff} rhs={rep.rhs_coeff}"
        )
    return f"{head}  ERROR: {rep.message}"


def _run_reports(instances, jobs: int) -> list:
    if jobs <= 1:
        return [verify(i) for i in instances]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(verify, instances))


def _exit_code(reports) -> int:
    if any(r.status == "error" for r in reports):
        return 3
    if any(r.status == "fail" for r in reports):
        return 1
    return 0


def cmd_list(args) -> int:
    for d in CORPUS.values():
        params = ", ".join(f"{p.name}:{p.kind}" for p in d.params) or "(none)"
        print(f"{d.id:<12} [{d.kind}] params: {params}")
        print(f"{'':<12} {d.description}")
        print(f"{'':<12} constraints: {d.constraints}")
    return 0


def cmd_verify(args) -> int:
    order = _default_order(args)
    if order is None:
        print("error: no --order/--q-order given and no default configured", file=sys.stderr)
        return 2
    bindings = _parse_cli_params(args.id, args.param or [])
    inst = make_instance(args.id, bindings, order)
    rep = verify(inst)
    print(_report_line(rep))
    return {"pass": 0, "fail": 1}.get(rep.status, 3)


def cmd_verify_all(args) -> int:
    order = _default_order(args)
    with open(args.file, encoding="utf-8") as fh:
        text = fh.read()
    instances = parse_instances(text, order)
    reports = _run_reports([inst for _, inst in instances.entries], args.jobs)
    for rep in reports:
        print(_report_line(rep))
    bad = [r for r in reports if r.status != "pass"]
    print(f"{len(reports) - len(bad)}/{len(reports)} passed")
    return _exit_code(reports)


def cmd_coeffs(args) -> int:
    order = _default_order(args)
    if order is None:
        print("error: no --order/--q-order given and no default configured", file=sys.stderr)
        return 2
    bindings = _parse_cli_params(args.id, args.param or [])
    inst = make_instance(args.id, bindings, order)
    lhs, rhs = build_sides(inst, EvalConfig())
    side = lhs if args.side == "lhs" else rhs
    if isinstance(side, dict):
        print("error: bivariate identities have no single coefficient stream", file=sys.stderr)
        return 2
    for e, c in side.items():
        print(f"{e} {c}")
    return 0


def cmd_report(args) -> int:
    order = _default_order(args)
    with open(args.file, encoding="utf-8") as fh:
        text = fh.read()
    instances = parse_instances(text, order)
    reports = _run_reports([inst for _, inst in instances.entries], args.jobs)
    if args.format == "json":
        payload = json.dumps([_report_json(r) for r in reports], indent=2)
    else:
        payload = "\n".join(_report_line(r) for r in reports) + "\n"
        payload += f"{sum(r.status == 'pass' for r in reports)}/{len(reports)} passed"
    if args.out and args.out != "-":
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload + "\n")
    else:
        print(payload)
    return _exit_code(reports)


def _add_order_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--order", type=int, help="truncation order in t-units")
    p.add_argument("--q-order", dest="q_order", type=int, help="truncation order in whole-q units (2x t)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="baileykit", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="print corpus IDs, parameters, constraints").set_defaults(fn=cmd_list)

    pv = sub.add_parser("verify", help="verify one identity instance")
    pv.add_argument("id")
    pv.add_argument("--param", action="append", metavar="NAME=VALUE")
    _add_order_flags(pv)
    pv.set_defaults(fn=cmd_verify)

    pa = sub.add_parser("verify-all", help="verify every instance in a file")
    pa.add_argument("--file", required=True)
    pa.add_argument("--jobs", type=int, default=1)
    _add_order_flags(pa)
    pa.set_defaults(fn=cmd_verify_all)

    pc = sub.add_parser("coeffs", help="print one side's coefficients, 'texp coeff' per line")
    pc.add_argument("id")
    pc.add_argument("--side", choices=("lhs", "rhs"), required=True)
    pc.add_argument("--param", action="append", metavar="NAME=VALUE")
    _add_order_flags(pc)
    pc.set_defaults(fn=cmd_coeffs)

    pr = sub.add_parser("report", help="run a file and write a report")
    pr.add_argument("--file", required=True)
    pr.add_argument("--format", choices=("json", "text"), default="text")
    pr.add_argument("--out", default="-")
    pr.add_argument("--jobs", type=int, default=1)
    _add_order_flags(pr)
    pr.set_defaults(fn=cmd_report)
    return ap


def run(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.fn(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BaileykitError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2 if "Unknown" in type(exc).__name__ or "Constraint" in type(exc).__name__ else 3


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
