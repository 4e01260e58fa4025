"""Command-line front end.

Exit status: 0 on success, 1 when the input is mathematically rejected
(d^2 != 0, an unmet hypothesis, a failed check), 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import sys

from .blowup import toeplitz_det, toeplitz_recurrence_factor
from .cemodel import parse_cochain, parse_structure
from .cohomring import compute_cohomology
from .config import load_config, run_checks
from .errors import LeflabError, MathematicalRejection, UsageError
from .lefschetz import full_report
from .massey import is_trivial, search_triple_products, triple_product
from .reproduce import DEFAULT_INPUTS, run_reproduction

SCHEMA = "1"


def _emit(payload, fmt, table=None, out=None):
    out = out or sys.stdout
    if fmt == "json":
        payload = {"schema": SCHEMA, **payload}
        out.write(json.dumps(payload, indent=2, sort_keys=False) + "\n")
    else:
        out.write((table(payload) if table else json.dumps(payload, indent=2)) + "\n")


def _ring(args):
    return compute_cohomology(parse_structure(args.structure))


def cmd_nilcoh(args):
    ring = _ring(args)

    def table(p):
        lines = [f"structure {args.structure}  dimension {p['dimension']}",
                 "betti " + " ".join(map(str, p["betti"]))]
        for k, labels in enumerate(p["basis"]):
            lines.append(f"H^{k}: " + (", ".join(labels) or "0"))
        return "\n".join(lines)

    _emit(ring.to_json(), args.format, table)
    return 0


def cmd_lefschetz(args):
    ring = _ring(args)
    omega = ring.class_of(parse_cochain(args.omega, ring.spec.n))
    report = full_report(ring, omega)

    def table(p):
        lines = [f"{'k':>2}  {'ker':>3}  surjective  kernel"]
        for lv in p["levels"]:
            lines.append(f"{lv['k']:>2}  {lv['kernel_dim']:>3}  {str(lv['surjective']):<10}  "
                         + ", ".join(lv["kernel_labels"]))
        lines.append(f"Lefschetz property: {p['lefschetz']}")
        return "\n".join(lines)

    _emit(report.to_json(), args.format, table)
    return 0


def _certificate_json(coset, cert):
    return {
        "inputs": [v.label() for v in coset.inputs],
        "witnesses": {
            "a13": [[list(m), str(c)] for m, c in cert.a13.terms],
            "a24": [[list(m), str(c)] for m, c in cert.a24.terms],
        },
        "representative": coset.representative.label(),
        "representative_cochain": cert.representative.label(),
        "indeterminacy": [[str(c) for c in v] for v in coset.indeterminacy],
        "trivial": is_trivial(coset),
    }


def cmd_massey(args):
    ring = _ring(args)
    n = ring.spec.n
    if args.inputs:
        parts = args.inputs.split(";")
        if len(parts) != 3:
            raise UsageError("--inputs needs three classes separated by ';'")
        x, y, z = (ring.class_of(parse_cochain(t, n)) for t in parts)
        coset, cert = triple_product(ring, x, y, z)
        payload = _certificate_json(coset, cert)
    else:
        try:
            degrees = tuple(int(d) for d in args.degrees.split(","))
        except ValueError:
            raise UsageError(f"bad --degrees {args.degrees!r}")
        if len(degrees) != 3:
            raise UsageError("--degrees needs three integers")
        found = search_triple_products(ring, degrees)
        payload = {"degrees": list(degrees),
                   "nontrivial": [{"inputs": [v.label() for v in c.inputs],
                                   "representative": c.representative.label(),
                                   "indeterminacy_dim": len(c.indeterminacy)} for c in found]}

    def table(p):
        if "nontrivial" in p:
            rows = [f"<{', '.join(e['inputs'])}> = [{e['representative']}]"
                    f" (indeterminacy dim {e['indeterminacy_dim']})" for e in p["nontrivial"]]
            return "\n".join(rows) or "no nontrivial triple products"
        verdict = "trivial" if p["trivial"] else "nontrivial"
        return f"<{', '.join(p['inputs'])}> = [{p['representative']}]  {verdict}"

    _emit(payload, args.format, table)
    return 0


def cmd_blowup(args):
    scenario = load_config(args.config)
    checks = args.checks.split(",") if args.checks else None
    result = run_checks(scenario, checks, eps_report=args.eps_report)
    _emit(result, args.format)
    return 0 if result["ok"] else 1


def cmd_toeplitz(args):
    if args.sweep:
        try:
            nmax, pmax = (int(v) for v in args.sweep.split(","))
        except ValueError:
            raise UsageError("--sweep needs Nmax,Pmax")
        rows, ok = [], True
        for n in range(nmax + 1):
            for p in range(pmax + 1):
                for k in range(n + 1):
                    d = toeplitz_det(n, p, k)
                    rec = toeplitz_det(n + 1, p, k) == toeplitz_recurrence_factor(n, p, k) * d
                    good = d != 0 and rec
                    ok &= good
                    rows.append({"n": n, "p": p, "k": k, "det": d, "recurrence": rec})
        _emit({"sweep": rows, "ok": ok}, args.format,
              lambda p: f"{len(p['sweep'])} determinants, all nonzero with recurrence: {p['ok']}")
        return 0 if ok else 1
    if args.n is None or args.p is None or args.k is None:
        raise UsageError("toeplitz needs --n, --p and --k, or --sweep")
    d = toeplitz_det(args.n, args.p, args.k)
    _emit({"n": args.n, "p": args.p, "k": args.k, "det": d}, args.format, lambda p: str(p["det"]))
    return 0


def cmd_verify(args):
    overrides = {}
    for item in args.override or []:
        key, sep, value = item.partition("=")
        if not sep or key not in DEFAULT_INPUTS:
            raise UsageError(f"--override expects KEY=VALUE with KEY in {sorted(DEFAULT_INPUTS)}")
        overrides[key] = value
    results = run_reproduction(args.filter, overrides)
    ok = all(r.passed for r in results)
    payload = {"checks": [{"name": r.name, "passed": r.passed, "detail": r.detail} for r in results],
               "ok": ok}
    _emit(payload, args.format, lambda p: "\n".join(r.line() for r in results))
    return 0 if ok else 1


def build_parser():
    parser = argparse.ArgumentParser(prog="leflab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, fmt_default="table"):
        p = sub.add_parser(name)
        p.add_argument("--format", choices=("json", "table"), default=fmt_default)
        p.set_defaults(func=fn)
        return p

    p = add("nilcoh", cmd_nilcoh)
    p.add_argument("--structure", required=True)
    p = add("lefschetz", cmd_lefschetz)
    p.add_argument("--structure", required=True)
    p.add_argument("--omega", required=True)
    p = add("massey", cmd_massey)
    p.add_argument("--structure", required=True)
    p.add_argument("--degrees", default="1,1,1")
    p.add_argument("--inputs")
    p = add("blowup", cmd_blowup, fmt_default="json")
    p.add_argument("--config", required=True)
    p.add_argument("--checks")
    p.add_argument("--eps-report", action="store_true")
    p = add("toeplitz", cmd_toeplitz)
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--sweep")
    p = add("verify-paper", cmd_verify)
    p.add_argument("--filter")
    p.add_argument("--override", action="append", metavar="KEY=VALUE")
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    fmt = getattr(args, "format", "json")
    try:
        return args.func(args)
    except LeflabError as exc:
        payload = {"schema": SCHEMA, "ok": False, "error": exc.as_dict()}
        if fmt == "json":
            print(json.dumps(payload, indent=2))
        else:
            print(f"error ({exc.reason}): {exc}", file=sys.stderr)
        return 1 if isinstance(exc, MathematicalRejection) or exc.reason == "internal_check_failed" else 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
