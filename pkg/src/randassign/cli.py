"""Command-line entry point.

Exit status: 0 when the command succeeds or the checked property holds, 1
when a property fails (the witness is printed), 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .core import ProfileError, format_rational, parse_profile, parse_rational
from .mechanisms import (ED, PS, RSD, Mechanism, VectorError, catalog, linear_mechanism,
                         sd_mechanism, validate_vector)
from .properties import PROPERTIES, check, mechanism_dominates
from .transfers import (TransferError, check_ef_transfer_lemmas, check_f_axioms,
                        decompose_to_transfers, f_from_v, format_f, parse_f, parse_v,
                        transfer_mechanism, validate_transfer_function)


class UsageError(Exception):
    pass


INPUT_ERRORS = (UsageError, ProfileError, VectorError, TransferError, OSError)


# -- mechanism specs ---------------------------------------------------------------

def parse_mechanism(spec: str, n: int | None = None) -> Mechanism:
    """Resolve ``ed | rsd | ps | sd:<order> | linear:<file or vector> | pairwise:<file>``."""
    kind, _, arg = spec.partition(":")
    if kind in ("ed", "rsd", "ps") and not arg:
        return {"ed": ED, "rsd": RSD, "ps": PS}[kind]
    if kind == "sd" and arg:
        toks = arg.split(",") if "," in arg else list(arg)
        try:
            order = tuple(int(t) - 1 for t in toks)
        except ValueError:
            raise UsageError(f"sd order must list agents 1..n, got {arg!r}") from None
        if sorted(order) != list(range(len(order))):
            raise UsageError(f"sd order must be a permutation of 1..{len(order)}, got {arg!r}")
        if n is not None and len(order) != n:
            raise UsageError(f"sd order has {len(order)} agents, expected {n}")
        return sd_mechanism(order)
    if kind == "linear" and arg:
        if Path(arg).is_file():
            v = parse_v(Path(arg).read_text())
        else:
            try:
                v = validate_vector(parse_rational(t) for t in arg.strip("()").split(","))
            except ValueError as e:
                raise UsageError(f"bad vector {arg!r}: {e}") from None
        if n is not None and len(v) != n:
            raise UsageError(f"vector has {len(v)} entries, expected {n}")
        return linear_mechanism(v)
    if kind == "pairwise" and arg:
        f = parse_f(Path(arg).read_text())
        report = validate_transfer_function(f)
        if not report.holds:
            raise UsageError("transfer function is invalid:\n" + report.text())
        if n is not None and f.n != n:
            raise UsageError(f"transfer function is for n={f.n}, expected {n}")
        return transfer_mechanism(f)
    raise UsageError(f"unknown mechanism {spec!r}; use ed, rsd, ps, sd:<order>, "
                     "linear:<vector or file>, pairwise:<file>")


def _profile(path: str):
    return parse_profile(Path(path).read_text())


def _emit(args, text: str, data: dict) -> None:
    if getattr(args, "json", False):
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        sys.stdout.write(text)


# -- subcommands -------------------------------------------------------------------

def cmd_assign(args) -> int:
    prof = _profile(args.profile)
    P = parse_mechanism(args.mechanism, prof.n)(prof)
    _emit(args, P.to_tsv(prof.objects),
          {"objects": list(prof.objects),
           "assignment": [[format_rational(x) for x in row] for row in P]})
    return 0


def cmd_check(args) -> int:
    mech = parse_mechanism(args.mechanism, args.n)
    v = check(mech, args.n, args.property)
    _emit(args, f"mechanism: {mech.name}\nn: {args.n}\n" + v.report(),
          {"mechanism": mech.name, "n": args.n, "property": args.property,
           "holds": v.holds, "witness": v.witness.describe() if v.witness else None})
    return 0 if v.holds else 1


def cmd_compare(args) -> int:
    A, B = parse_mechanism(args.a, args.n), parse_mechanism(args.b, args.n)
    d = mechanism_dominates(A, B, args.n)
    _emit(args, f"A: {A.name}\nB: {B.name}\n" + d.report(),
          {"a": A.name, "b": B.name, "weak": d.weak, "strict": d.strict,
           "witness": d.witness.describe() if d.witness else None})
    return 0 if d.weak else 1


def cmd_transfers(args) -> int:
    if args.action == "check":
        f = parse_f(Path(args.f).read_text())
        valid = validate_transfer_function(f)
        text = valid.text()
        ok = valid.holds
        if ok:
            axioms = check_f_axioms(f)
            lemmas = check_ef_transfer_lemmas(f)
            text += axioms.text() + lemmas.text()
            ok = axioms.holds and lemmas.holds
        sys.stdout.write(text)
        return 0 if ok else 1
    if args.action == "from-v":
        sys.stdout.write(format_f(f_from_v(parse_v(Path(args.v).read_text()))))
        return 0
    prof = _profile(args.profile)
    P = parse_mechanism(args.mechanism, prof.n)(prof)
    sys.stdout.write(decompose_to_transfers(P, prof).to_text())
    return 0


def cmd_certify(args) -> int:
    from .certify import theorems
    if args.target == "theorem1":
        report = theorems.certify_theorem1(confirm_full=not args.quick)
        out = args.out or "theorem1.cert.txt"
        theorems.write_certificate(report.certificate, out,
                                   "SP + EF + CFE on the six profiles A-F, n = 3")
        if report.full is not None and args.full_out:
            theorems.write_certificate(report.full, args.full_out,
                                       "SP + EF + CFE on all 216 profiles, n = 3 (lifted)")
        sys.stdout.write(report.text() + f"certificate written to {out}\n")
        return 0 if report.holds else 1
    if args.target == "profile-c":
        report = theorems.derive_profile_c()
        sys.stdout.write(report.text())
        return 0 if tuple(report.assignment) == theorems.PROFILE_C_TARGET else 1
    axioms = ["SP"] + ([] if args.without_ef else ["EF"]) + ([] if args.without_neutral else ["NEUTRAL"])
    if args.without_ef:
        shown = theorems.rsd_full_allocation([a for a in axioms])
        sys.stdout.write(f"axioms: {' + '.join(axioms)} (non-theorem configuration)\n"
                         f"RSD satisfies them on all 216 profiles and reaches 1 at:\n"
                         f"{shown.line()}\n")
        return 0
    report = theorems.certify_strong_hardness(args.budget_seconds, jobs=args.jobs, axioms=axioms)
    sys.stdout.write(report.text())
    if args.out:
        Path(args.out).write_text("".join(
            f"# {m.line()}\n" + m.certificate.render() for m in report.maxima))
    return 0 if report.all_below_one or not report.theorem_configuration else 1


def cmd_decompose(args) -> int:
    from .lottery import birkhoff_decompose, render_permutation, sample
    prof = _profile(args.profile)
    P = parse_mechanism(args.mechanism, prof.n)(prof)
    lot = birkhoff_decompose(P)
    text = lot.to_text(prof.objects)
    if args.action == "sample":
        if args.seed is None:
            raise UsageError("sample needs --seed")
        text += "sample: " + render_permutation(sample(lot, args.seed), prof.objects) + "\n"
    sys.stdout.write(text)
    return 0


# -- sweep -------------------------------------------------------------------------

def default_specs(n: int) -> list[str]:
    return [m.name for m in catalog(n)]


def _sweep_cell(task):
    spec, n, prop = task
    return check(parse_mechanism(spec, n), n, prop).holds


def sweep(n: int, specs: list[str], props: list[str], jobs: int = 1) -> dict:
    """Verdict matrix in canonical order; identical for any ``jobs``."""
    mechs = [parse_mechanism(s, n) for s in specs]
    tasks = [(s, n, p) for s in specs for p in props]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            cells = list(pool.map(_sweep_cell, tasks))
    else:
        cells = [_sweep_cell(t) for t in tasks]
    rows = []
    it = iter(cells)
    for spec, mech in zip(specs, mechs):
        verdicts = {p: next(it) for p in props}
        pairwise = spec == "ed" or spec.startswith(("linear", "pairwise"))
        same = (verdicts["sp"] == verdicts["ef"]) if pairwise and {"sp", "ef"} <= set(props) else None
        rows.append({"mechanism": mech.name, "verdicts": verdicts, "sp_iff_ef": same})
    return {"n": n, "properties": props, "rows": rows,
            "sp_iff_ef_holds": all(r["sp_iff_ef"] is not False for r in rows)}


def sweep_text(data: dict) -> str:
    props = data["properties"]
    width = max(len(r["mechanism"]) for r in data["rows"])
    lines = [f"n = {data['n']}", " ".join(["mechanism".ljust(width)] + [p.rjust(7) for p in props]
                                          + ["sp<=>ef"])]
    for r in data["rows"]:
        cells = [("yes" if r["verdicts"][p] else "no").rjust(7) for p in props]
        flag = {None: "-", True: "ok", False: "BROKEN"}[r["sp_iff_ef"]]
        lines.append(" ".join([r["mechanism"].ljust(width)] + cells + [flag.rjust(7)]))
    lines.append("sp<=>ef on pairwise-exchange rows: "
                 + ("holds" if data["sp_iff_ef_holds"] else "fails"))
    return "\n".join(lines) + "\n"


def cmd_sweep(args) -> int:
    specs = args.mechanism or default_specs(args.n)
    props = args.property or list(PROPERTIES)
    for p in props:
        if p not in PROPERTIES:
            raise UsageError(f"unknown property {p!r}")
    data = sweep(args.n, specs, props, args.jobs)
    _emit(args, sweep_text(data), data)
    return 0 if data["sp_iff_ef_holds"] else 1


# -- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="randassign", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("assign", help="print a mechanism's assignment for a profile")
    p.add_argument("--mechanism", required=True)
    p.add_argument("--profile", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(run=cmd_assign)

    p = sub.add_parser("check", help="check one property over every profile")
    p.add_argument("--mechanism", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--property", required=True, choices=PROPERTIES)
    p.add_argument("--json", action="store_true")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("compare", help="does A stochastically dominate B everywhere")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(run=cmd_compare)

    p = sub.add_parser("transfers", help="transfer-function tools")
    tsub = p.add_subparsers(dest="action", required=True)
    t = tsub.add_parser("check")
    t.add_argument("--f", required=True)
    t = tsub.add_parser("from-v")
    t.add_argument("--v", required=True)
    t = tsub.add_parser("decompose")
    t.add_argument("--profile", required=True)
    t.add_argument("--mechanism", required=True)
    p.set_defaults(run=cmd_transfers)

    p = sub.add_parser("certify", help="exact impossibility certificates (n = 3)")
    csub = p.add_subparsers(dest="target", required=True)
    c = csub.add_parser("theorem1")
    c.add_argument("--out", help="certificate file (default theorem1.cert.txt)")
    c.add_argument("--full-out", help="also write the lifted 216-profile certificate")
    c.add_argument("--quick", action="store_true", help="skip the 216-profile confirmation")
    csub.add_parser("profile-c")
    c = csub.add_parser("strong-hardness")
    c.add_argument("--budget-seconds", type=float, default=None)
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--out", help="write every optimum certificate here")
    c.add_argument("--without-ef", action="store_true")
    c.add_argument("--without-neutral", action="store_true")
    p.set_defaults(run=cmd_certify)

    p = sub.add_parser("decompose", help="Birkhoff decomposition into a lottery")
    p.add_argument("--profile", required=True)
    p.add_argument("--mechanism", required=True)
    p.add_argument("action", nargs="?", choices=["sample"])
    p.add_argument("--seed", type=int)
    p.set_defaults(run=cmd_decompose)

    p = sub.add_parser("sweep", help="mechanism x property verdict matrix")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--mechanism", action="append", help="repeatable; default is the catalog")
    p.add_argument("--property", action="append", help="repeatable; default is all")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.set_defaults(run=cmd_sweep)
    return ap


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        return args.run(args)
    except INPUT_ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
