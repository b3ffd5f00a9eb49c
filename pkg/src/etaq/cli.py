"""Command line interface.

Subcommands: expand, scan, refute, certify, classify, audit, theta-cycle,
filtration. Output is a human-readable report by default, a single JSON
record with --json (sorted keys, stable bytes), and CSV for classify
with --csv. Coefficient-sized integers are serialized as decimal strings
in JSON so consumers never face float rounding; no floating point
appears anywhere in any output. Defaults come from ETAQ_* environment
variables where noted; explicit flags win.

Exit codes: 0 success (whatever the mathematical outcome), 2 usage or
validation error, 3 precision shortfall.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .congruence import (
    DEFAULT_REFUTE_HORIZON,
    DEFAULT_SCAN_HORIZON,
    audit_prime_range,
    certify,
    classify_family,
    refute,
    scan,
)
from .eisenstein import delta, delta_product_form, eisenstein
from .errors import PrecisionError
from .filtration import filtration, theta_cycle
from .series import ProductSpec, expand_product, reduce_mod
from .series import ap_extract  # noqa: F401  (re-exported for scripting convenience)

DEFAULT_EXPAND_PRECISION = 32


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name, "").strip()
    if not raw:
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"environment variable {name} must be an integer, got {raw!r}")


def _record(command: str, spec, parameters: dict, results: dict) -> dict:
    return {
        "command": command,
        "spec": spec,
        "parameters": parameters,
        "results": results,
        "version": __version__,
    }


def _emit_json(record: dict) -> None:
    sys.stdout.write(json.dumps(record, sort_keys=True, separators=(",", ":")) + "\n")


def _cert_payload(cert) -> dict:
    return {
        "route": cert.route,
        "ell": cert.ell,
        "a": cert.a,
        "witness": None
        if cert.witness is None
        else {"n": cert.witness[0], "residue": str(cert.witness[1])},
        "sturm_bound": cert.sturm_bound,
        "product_residue": cert.product_residue,
        "delta_exponent": cert.delta_exponent,
        "horizon": cert.horizon,
        "reduced_to": cert.reduced_to,
    }


def _cert_human(cert) -> str:
    bits = [f"({cert.ell}, {cert.a}): {cert.route}"]
    if cert.witness is not None:
        n, res = cert.witness
        bits.append(f"witness n={n} (coefficient index {cert.ell * n + cert.a}, residue {res})")
    if cert.sturm_bound is not None:
        bits.append(f"sturm_bound={cert.sturm_bound}")
    if cert.reduced_to is not None:
        bits.append(f"reduced to {cert.reduced_to}")
    if cert.horizon is not None:
        bits.append(f"horizon={cert.horizon}")
    return "  ".join(bits)


def _named_form(args, ell: int, precision: int):
    """Resolve --form into (series mod ell, declared weight)."""
    name = args.form
    if name == "delta":
        f = delta(precision)
        return reduce_mod(f.series, ell), f.weight
    if name in ("E4", "E6"):
        w = 4 if name == "E4" else 6
        return eisenstein(w, precision, ell).series, w
    if name == "F":
        if not args.spec:
            raise ValueError('--form F needs a product spec (-s "1^-1 1^-1")')
        spec = ProductSpec.parse(args.spec)
        form = delta_product_form(spec, ell, precision)
        if form.level != 1:
            raise ValueError(
                f"level {form.level} form: filtration and theta cycles here "
                "are level-1 only (every factor scale must be 1)"
            )
        return form.series, form.weight
    raise ValueError(f"unknown form {name!r}")


def _form_weight(args, ell: int) -> int:
    if args.form == "delta":
        return 12
    if args.form == "E4":
        return 4
    if args.form == "E6":
        return 6
    if args.form == "F":
        if not args.spec:
            raise ValueError('--form F needs a product spec (-s "1^-1 1^-1")')
        spec = ProductSpec.parse(args.spec)
        return spec.part_count * (ell * ell - 1) // 2
    raise ValueError(f"unknown form {args.form!r}")


def cmd_expand(args) -> int:
    spec = ProductSpec.parse(args.spec)
    if args.index is not None:
        lo, hi = args.index, args.index + 1
    elif args.range is not None:
        lo, hi = args.range
        if hi < lo:
            raise ValueError("range end below range start")
        hi += 1
    else:
        lo, hi = 0, args.count
    s = expand_product(spec, hi, args.modulus)
    values = [s.coeff(n) for n in range(lo, hi)]
    if args.json:
        _emit_json(
            _record(
                "expand",
                str(spec),
                {
                    "precision": hi,
                    "first": lo,
                    "modulus": args.modulus,
                },
                {"coefficients": [str(v) for v in values]},
            )
        )
    else:
        print(" ".join(str(v) for v in values))
    return 0


def cmd_scan(args) -> int:
    spec = ProductSpec.parse(args.spec)
    primes = None
    if args.primes:
        primes = sorted({int(tok) for tok in args.primes.split(",")})
    exhaustive = spec.is_reciprocal and spec.part_count % 2 == 0 and primes is None
    cands = scan(spec, args.horizon, primes)
    if args.json:
        _emit_json(
            _record(
                "scan",
                str(spec),
                {"horizon": args.horizon, "primes": primes, "exhaustive": exhaustive},
                {
                    "candidates": [
                        {"ell": c.ell, "a": c.a, "status": c.status} for c in cands
                    ]
                },
            )
        )
    else:
        if not cands:
            print(f"no congruence candidates below horizon {args.horizon}")
        for c in cands:
            print(f"({c.ell}, {c.a}) {c.status}  [all progression entries < {args.horizon} vanish]")
    return 0


def cmd_refute(args) -> int:
    spec = ProductSpec.parse(args.spec)
    cert = refute(spec, args.ell, args.a, args.horizon)
    if args.json:
        _emit_json(
            _record("refute", str(spec), {"horizon": args.horizon}, _cert_payload(cert))
        )
    else:
        print(_cert_human(cert))
    return 0


def cmd_certify(args) -> int:
    spec = ProductSpec.parse(args.spec)
    cert = certify(spec, args.ell, args.a, args.horizon)
    if args.json:
        _emit_json(
            _record("certify", str(spec), {"horizon": args.horizon}, _cert_payload(cert))
        )
    else:
        print(_cert_human(cert))
    return 0


def cmd_classify(args) -> int:
    rows = classify_family(args.n_from, args.n_to, args.horizon)
    if args.json:
        _emit_json(
            _record(
                "classify",
                "1^-1 N^-1",
                {"from": args.n_from, "to": args.n_to, "horizon": args.horizon},
                {
                    "table": [
                        {
                            "N": n,
                            "candidates": [
                                {"ell": c.ell, "a": c.a, "status": c.status}
                                for c in cands
                            ],
                        }
                        for n, cands in rows
                    ]
                },
            )
        )
    elif args.csv:
        print("N,ell,a,status")
        for n, cands in rows:
            for c in cands:
                print(f"{n},{c.ell},{c.a},{c.status}")
    else:
        for n, cands in rows:
            body = "  ".join(f"({c.ell},{c.a}) {c.status}" for c in cands) or "-"
            print(f"N={n:<3d} {body}")
    return 0


def cmd_audit(args) -> int:
    spec = ProductSpec.parse(args.spec)
    report = audit_prime_range(spec, args.p_min, args.p_max, args.horizon)
    if args.json:
        _emit_json(
            _record(
                "audit",
                str(spec),
                {
                    "p_min": args.p_min,
                    "p_max": args.p_max,
                    "horizon": args.horizon,
                    "bound": report.bound,
                },
                {
                    "entries": [
                        {
                            "ell": e.ell,
                            "forced_residue": e.forced,
                            "witnesses": [
                                {"a": a, "n": n, "residue": str(r)}
                                for a, n, r in e.witnesses
                            ],
                            "anomalies": list(e.anomalies),
                        }
                        for e in report.entries
                    ],
                    "anomaly_count": report.anomaly_count,
                },
            )
        )
    else:
        for e in report.entries:
            ws = " ".join(f"a={a}:n={n}" for a, n, _ in e.witnesses)
            print(f"ell={e.ell} forced={e.forced} refuted {len(e.witnesses)}/{e.ell}  {ws}")
            if e.anomalies:
                print(f"  ANOMALIES (no witness below {report.horizon}): {list(e.anomalies)}")
        print(f"anomaly count: {report.anomaly_count}")
    return 0


def cmd_theta_cycle(args) -> int:
    ell = args.ell
    weight = _form_weight(args, ell)
    need = (weight + (ell - 1) * (ell + 1)) // 12 + 2
    series, weight = _named_form(args, ell, max(need, 2))
    report = theta_cycle(series, weight, ell)
    if args.json:
        _emit_json(
            _record(
                "theta-cycle",
                args.spec,
                {"form": args.form, "ell": ell, "weight": weight},
                {
                    "filtrations": list(report.filtrations),
                    "k0": report.k0,
                    "case": report.case_label,
                    "drop_indices": list(report.drop_indices),
                    "drops": list(report.drops),
                    "stable": report.stable,
                },
            )
        )
    else:
        filts = " ".join(str(w) for w in report.filtrations)
        print(f"filtrations: {filts}")
        print(
            f"case {report.case_label}  k0={report.k0}  drops at {list(report.drop_indices)} "
            f"sizes {list(report.drops)}  stable={report.stable}"
        )
    return 0


def cmd_filtration(args) -> int:
    ell = args.ell
    weight = _form_weight(args, ell)
    need = weight // 12 + 2
    series, weight = _named_form(args, ell, max(need, 2))
    w = filtration(series, weight, ell)
    if args.json:
        _emit_json(
            _record(
                "filtration",
                args.spec,
                {"form": args.form, "ell": ell, "weight": weight},
                {"filtration": w},
            )
        )
    else:
        print(w)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="etaq",
        description="Exact q-series congruence toolkit for eta-type products",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    scan_horizon = _env_int("ETAQ_SCAN_HORIZON", DEFAULT_SCAN_HORIZON)
    refute_horizon = _env_int("ETAQ_REFUTE_HORIZON", DEFAULT_REFUTE_HORIZON)
    expand_precision = _env_int("ETAQ_PRECISION", DEFAULT_EXPAND_PRECISION)

    def add_json(sp):
        sp.add_argument("--json", action="store_true", help="emit one JSON record")

    sp = sub.add_parser("expand", help="expand a product spec as a q-series")
    sp.add_argument("-s", "--spec", required=True, help='factors like "1^-1 2^-1"')
    sp.add_argument("-n", "--count", type=int, default=expand_precision,
                    help="number of leading coefficients to print")
    sp.add_argument("--index", type=int, help="print the single coefficient of q^INDEX")
    sp.add_argument("--range", type=int, nargs=2, metavar=("LO", "HI"),
                    help="print coefficients of q^LO .. q^HI inclusive")
    sp.add_argument("-m", "--modulus", type=int, help="reduce coefficients mod this prime")
    add_json(sp)
    sp.set_defaults(func=cmd_expand)

    sp = sub.add_parser("scan", help="find empirical congruence candidates")
    sp.add_argument("-s", "--spec", required=True)
    sp.add_argument("--horizon", type=int, default=scan_horizon)
    sp.add_argument("--primes", help="comma-separated primes to scan (overrides the bound)")
    add_json(sp)
    sp.set_defaults(func=cmd_scan)

    sp = sub.add_parser("refute", help="search for a congruence counterexample")
    sp.add_argument("-s", "--spec", required=True)
    sp.add_argument("-l", "--ell", type=int, required=True)
    sp.add_argument("-a", type=int, required=True)
    sp.add_argument("--horizon", type=int, default=refute_horizon)
    add_json(sp)
    sp.set_defaults(func=cmd_refute)

    sp = sub.add_parser("certify", help="certify or refute a congruence claim")
    sp.add_argument("-s", "--spec", required=True)
    sp.add_argument("-l", "--ell", type=int, required=True)
    sp.add_argument("-a", type=int, required=True)
    sp.add_argument("--horizon", type=int, default=refute_horizon)
    add_json(sp)
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("classify", help="settle the two-factor family over a range of N")
    sp.add_argument("--from", dest="n_from", type=int, required=True)
    sp.add_argument("--to", dest="n_to", type=int, required=True)
    sp.add_argument("--horizon", type=int, default=scan_horizon)
    sp.add_argument("--csv", action="store_true", help="emit CSV rows")
    add_json(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("audit", help="refute all residues for primes beyond the bound")
    sp.add_argument("-s", "--spec", required=True)
    sp.add_argument("--pmin", dest="p_min", type=int, required=True)
    sp.add_argument("--pmax", dest="p_max", type=int, required=True)
    sp.add_argument("--horizon", type=int, default=refute_horizon)
    add_json(sp)
    sp.set_defaults(func=cmd_audit)

    sp = sub.add_parser("theta-cycle", help="filtration walk under the theta operator")
    sp.add_argument("--form", required=True, choices=["delta", "E4", "E6", "F"])
    sp.add_argument("-l", "--ell", type=int, required=True)
    sp.add_argument("-s", "--spec", help='spec for --form F, e.g. "1^-1 1^-1"')
    add_json(sp)
    sp.set_defaults(func=cmd_theta_cycle)

    sp = sub.add_parser("filtration", help="filtration of a named form mod ell")
    sp.add_argument("--form", required=True, choices=["delta", "E4", "E6", "F"])
    sp.add_argument("-l", "--ell", type=int, required=True)
    sp.add_argument("-s", "--spec", help='spec for --form F')
    add_json(sp)
    sp.set_defaults(func=cmd_filtration)

    return p


def main(argv=None) -> int:
    try:
        parser = _build_parser()  # reads ETAQ_* defaults, may reject them
        args = parser.parse_args(argv)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except PrecisionError as exc:
        print(f"precision shortfall: {exc}", file=sys.stderr)
        return 3
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
