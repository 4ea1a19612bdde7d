"""Command line interface: verification suites, one-off computations and
table dumps, all with JSON-friendly output."""

from __future__ import annotations

import argparse
import json
import sys

from htl.scalars import CaseTag, Scalar

EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_INTERNAL = 3


def _case_from(label: str, psi: int = 1) -> CaseTag:
    label = label.replace("-", "").replace("_", "").lower()
    table = {
        "uhflat": ("uH", "flat"), "uhsharp": ("uH", "sharp"),
        "uhnatural": ("uH", "natural"),
        "sflat": ("S", "flat"), "ssharp": ("S", "sharp"),
        "snatural": ("S", "natural"),
        "aflat": ("A", "flat"), "anatural": ("A", "natural"),
    }
    if label not in table:
        raise SystemExit(f"unknown case label {label!r}")
    fam, var = table[label]
    return CaseTag(fam, var, psi)


def _print(data, as_json: bool):
    if as_json:
        print(json.dumps(data, indent=2, sort_keys=True, default=str))
    else:
        print(data)


def cmd_verify(args) -> int:
    from htl.suites import ConfigError, SuiteConfig, run_suite, iter_checks
    try:
        if args.config:
            with open(args.config) as fh:
                cfg = SuiteConfig.from_dict(json.load(fh))
        else:
            cfg = SuiteConfig(suite=args.suite, seed=args.seed,
                              window=args.window, max_n=args.max_n,
                              out=args.out or "")
        list(iter_checks([cfg.suite]))
    except (ConfigError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        report = run_suite(cfg)
    except Exception as exc:  # pragma: no cover
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    for name, rep in report["checks"].items():
        status = "pass" if rep["ok"] else "FAIL"
        print(f"[{status}] {name} ({rep['seconds']}s)")
    if args.json:
        _print(report, True)
    return 0 if report["ok"] else EXIT_FAIL


def cmd_compute(args) -> int:
    from htl.typcalc.types import FormalSum, format_typ, parse_typ
    from htl.typcalc.operators import apply_operator, build_operator
    from htl.typcalc.straighten import straighten
    case = _case_from(args.case, args.psi)
    try:
        values, signs = parse_typ(args.input)
    except (ValueError, IndexError) as exc:
        print(f"parse error in {args.input!r}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    sigma = FormalSum.single(values, signs)
    if args.op != "straighten":
        op = build_operator(args.op, case, k=args.k, r=len(values))
        sigma = apply_operator(op, sigma)
    result = straighten(sigma, case)
    out = [{"typ": format_typ(term, case.has_signs),
            "coeff": coeff.to_json(), "coeff_text": coeff.to_text()}
           for term, coeff in sorted(result.coeffs.items())]
    _print(out, True)
    return 0


def cmd_dump_tables(args) -> int:
    from htl.typcalc.operators import build_operator
    case = _case_from(args.case, args.psi)
    r = args.r
    out = {}
    kinds = ["dle", "circbullet", "s_sat"] if case.variant == "flat" \
        else ["dle", "s_sat"]
    for kind in kinds:
        if kind == "circbullet":
            op = build_operator(kind, case, r=r)
            out[kind] = {str(shift): c.to_text()
                         for (shift, _, _), c in sorted(op.terms.items())}
            continue
        for k in range(case.gamma * r + 1):
            op = build_operator(kind, case, k=k, r=r)
            out[f"{kind}[{k}]"] = {str(shift): c.to_text()
                                   for (shift, _, _), c in
                                   sorted(op.terms.items())}
    _print(out, True)
    return 0


def cmd_ffcount(args) -> int:
    import numpy as np
    from htl.ffcount import (
        alternating_space, classify_typ, closed_form_L,
        count_disjoint_lagrangians, eval_closed, hermitian_space,
        space_with_flagged_subspace, symmetric_space, count_isotropic,
        closed_form_S,
    )
    case = CaseTag(args.family)
    if args.what == "isotropic":
        if args.family == "S":
            sp = symmetric_space(args.q, args.dim, args.chi)
        elif args.family == "A":
            sp = alternating_space(args.q, args.dim)
        else:
            sp = hermitian_space(args.q, args.dim)
        t = classify_typ(sp)
        got = count_isotropic(sp, args.b)
        want = eval_closed(closed_form_S(args.b, t, case), sp)
        _print({"count": got, "closed_form": want, "match": got == want},
               True)
        return 0 if got == want else EXIT_FAIL
    if args.what == "lagrangians-disjoint":
        r = args.dim // 2
        chi = args.quotient_chi
        built = space_with_flagged_subspace(case, args.q, r, args.radical,
                                            args.quotient_dim, chi)
        if built is None:
            print("unrealizable combination", file=sys.stderr)
            return EXIT_CONFIG
        sp, sub = built
        got = count_disjoint_lagrangians(sp, sub)
        want = eval_closed(closed_form_L(args.radical, args.quotient_dim,
                                         chi, r, case), sp)
        _print({"count": got, "closed_form": want, "match": got == want},
               True)
        return 0 if got == want else EXIT_FAIL
    print(f"unknown request {args.what!r}", file=sys.stderr)
    return EXIT_CONFIG


def cmd_latoracle(args) -> int:
    from htl.latoracle.ambient import build_oracle
    from htl.latoracle.hecke import hecke_star
    from htl.latoracle.formulas import compare_to_delta, delta_distribution
    from htl.typcalc.types import canon_typ0, parse_typ
    case = _case_from(args.case, args.psi)
    values, signs = parse_typ(args.delta)
    delta = canon_typ0(values, signs)
    kind = {"tle": "tle", "tk": "tk", "circ": "circ"}[args.kind]
    if args.compare_delta:
        rep = compare_to_delta(case, kind, delta, args.k, args.q)
        _print({"instance": {"case": case.label(), "q": args.q,
                             "delta": args.delta, "kind": kind, "k": args.k},
                "oracle": {str(k): v for k, v in rep["oracle"].items()},
                "formula": {str(k): v for k, v in rep["formula"].items()},
                "match": rep["match"]}, True)
        return 0 if rep["match"] else EXIT_FAIL
    oracle = build_oracle(case, args.q, delta, bullet=(kind == "circ"),
                          psi_unit=args.psi)
    counts = hecke_star(oracle, kind, k=args.k)
    _print({str(c.values_tuple()): v for c, v in counts.items()}, True)
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="htl",
        description="exact workbench for spherical-function combinatorics")
    sub = parser.add_subparsers(dest="command", required=True)

    pv = sub.add_parser("verify", help="run a verification suite")
    pv.add_argument("suite", nargs="?", default="all")
    pv.add_argument("--config", help="JSON config file")
    pv.add_argument("--seed", type=int, default=20240317)
    pv.add_argument("--window", type=int, default=8)
    pv.add_argument("--max", dest="max_n", type=int, default=6)
    pv.add_argument("--out", help="write the JSON report here")
    pv.add_argument("--json", action="store_true")
    pv.set_defaults(func=cmd_verify)

    pc = sub.add_parser("compute", help="straighten or apply an operator")
    pc.add_argument("--case", required=True)
    pc.add_argument("--psi", type=int, default=1)
    pc.add_argument("--op", default="straighten",
                    choices=["straighten", "dle", "circbullet", "s_sat",
                             "natural", "half", "t_indiv"])
    pc.add_argument("--k", type=int, default=0)
    pc.add_argument("--input", required=True,
                    help="type tuple, e.g. '3,0' or '2,0:+-'")
    pc.set_defaults(func=cmd_compute)

    pd = sub.add_parser("dump-tables", help="print the operator catalogue")
    pd.add_argument("--case", required=True)
    pd.add_argument("--psi", type=int, default=1)
    pd.add_argument("--r", type=int, default=1)
    pd.set_defaults(func=cmd_dump_tables)

    pf = sub.add_parser("ffcount", help="finite-field counting instances")
    pf.add_argument("--family", required=True, choices=["uH", "S", "A"])
    pf.add_argument("--q", type=int, required=True)
    pf.add_argument("--dim", type=int, required=True)
    pf.add_argument("--what", required=True,
                    choices=["isotropic", "lagrangians-disjoint"])
    pf.add_argument("--b", type=int, default=1)
    pf.add_argument("--chi", type=int, default=1)
    pf.add_argument("--radical", type=int, default=0)
    pf.add_argument("--quotient-dim", type=int, default=0)
    pf.add_argument("--quotient-chi", type=int, default=1)
    pf.set_defaults(func=cmd_ffcount)

    pl = sub.add_parser("latoracle", help="lattice correspondence counts")
    pl.add_argument("hecke", nargs="?", default="hecke")
    pl.add_argument("--case", required=True)
    pl.add_argument("--psi", type=int, default=1)
    pl.add_argument("--q", type=int, required=True)
    pl.add_argument("--r", type=int, default=1)
    pl.add_argument("--delta", required=True)
    pl.add_argument("--kind", default="tle", choices=["tle", "tk", "circ"])
    pl.add_argument("--k", type=int, default=0)
    pl.add_argument("--compare-delta", action="store_true")
    pl.set_defaults(func=cmd_latoracle)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
