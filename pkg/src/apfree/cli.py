"""Command-line surface: construct, verify, sweep, nu, discrepancy, witness-count.

Exit codes: 0 success, 1 generic error, 2 empty result, 3 input parse error,
4 oracle disagreement.  All commands are deterministic; construct's JSON
output carries a timestamp unless --reproducible is given.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import os
import sys

from . import behrend, elkin, lattice, numeric, verify as verify_mod
from .codec import APFreeSet, read_set
from .errors import ApfreeError, SetFormatError
from .numeric import ConstructionParams

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_EMPTY = 2
EXIT_PARSE = 3
EXIT_DISAGREE = 4


class _Parser(argparse.ArgumentParser):
    # Usage mistakes are generic errors (exit 1); 2 is reserved for EmptyResult.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _default_threads() -> int:
    env = os.environ.get("APFREE_THREADS", "")
    try:
        return max(1, int(env))
    except ValueError:
        return 1


def _add_common(p: argparse.ArgumentParser, threads: bool = True) -> None:
    p.add_argument("--budget", type=int, default=lattice.DEFAULT_BUDGET,
                   help="enumeration budget (points); exceeding it aborts up front")
    if threads:
        p.add_argument("--threads", type=int, default=_default_threads(),
                       help="worker threads for cube enumeration (env APFREE_THREADS)")


def _parse_range(spec: str) -> range:
    lo, _, hi = spec.partition(":")
    return range(int(lo), int(hi) + 1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="apfree", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a progression-free set")
    p.add_argument("--method", required=True, choices=["behrend", "elkin"])
    p.add_argument("--n", type=int, help="interval bound; k and y are derived")
    p.add_argument("--k", type=int, help="dimension (with --y, instead of --n)")
    p.add_argument("--y", type=int, help="cube side (with --k, instead of --n)")
    p.add_argument("--a", type=float, default=None, help="Chebyshev multiplier")
    p.add_argument("--epsilon", type=float, default=None, help="annulus width ratio")
    p.add_argument("--g", type=int, default=None, help="annulus squared-width")
    p.add_argument("--out", help="write the set to this path")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--reproducible", action="store_true",
                   help="omit the timestamp so outputs are byte-stable")
    _add_common(p)

    p = sub.add_parser("verify", help="check a serialized set for arithmetic triples")
    p.add_argument("in_path", help="apfree-set/1 JSON file")

    p = sub.add_parser("sweep", help="construct over a (k, y) grid, write a CSV")
    p.add_argument("--method", required=True, choices=["behrend", "elkin"])
    p.add_argument("--k-range", required=True, help="inclusive range, e.g. 2:4")
    p.add_argument("--y-range", required=True, help="inclusive range, e.g. 2:8")
    p.add_argument("--a", type=float, default=None)
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--g", type=int, default=None)
    p.add_argument("--out", required=True, help="CSV output path")
    _add_common(p)

    p = sub.add_parser("nu", help="exact optimum by two independent searches")
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("discrepancy", help="exact counts vs volumes of capped balls")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--t-max", type=int, required=True)
    p.add_argument("--m", type=int, required=True,
                   help="coordinates with index >= m are constrained nonnegative")
    p.add_argument("--t-step", type=int, default=1)
    p.add_argument("--out", help="CSV output path (default stdout)")
    _add_common(p, threads=False)

    p = sub.add_parser("witness-count", help="enumerate short certificate vectors")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--epsilon", type=float, default=None)
    _add_common(p, threads=False)

    p = sub.add_parser("histogram", help="squared-norm census of the cube as CSV")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--y", type=int, required=True)
    p.add_argument("--out", help="CSV output path (default stdout)")
    _add_common(p, threads=False)

    return parser


def _apply_knobs(
    params: ConstructionParams,
    method: str,
    a: float | None,
    epsilon: float | None,
    g: int | None,
) -> ConstructionParams:
    overrides: dict = {}
    if a is not None:
        overrides["a"] = a
    if epsilon is not None:
        overrides["epsilon"] = epsilon
        if g is None:
            overrides["g"] = None  # re-derive the width from the new epsilon
    if g is not None:
        overrides["g"] = g
    if overrides:
        params = dataclasses.replace(params, **overrides)
    if method == "elkin" and params.g is None:
        params = dataclasses.replace(params, g=params.effective_g())
    return params


def _resolve_params(args) -> ConstructionParams:
    explicit = args.k is not None or args.y is not None
    if (args.n is None) == (not explicit):
        raise ValueError("give exactly one of --n or (--k and --y)")
    if args.n is not None:
        params = numeric.default_params(args.n, args.method)
    else:
        if args.k is None or args.y is None:
            raise ValueError("--k and --y must be given together")
        params = ConstructionParams(n=(2 * args.y) ** args.k, k=args.k, y=args.y)
    return _apply_knobs(params, args.method, args.a, args.epsilon, args.g)


def _write_set(apset: APFreeSet, args) -> None:
    if not args.out:
        return
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        if args.format == "json":
            apset.write_json(fh, reproducible=args.reproducible)
        else:
            apset.write_csv(fh)


def _summary_line(method: str, params: ConstructionParams, shell, apset) -> str:
    return (
        f"method={method} n={params.n} k={params.k} y={params.y} "
        f"shell=[{shell.t_low},{shell.t_high}] size={apset.size} "
        f"density={apset.density}"
    )


def cmd_construct(args) -> int:
    params = _resolve_params(args)
    if args.method == "behrend":
        artifact = behrend.construct_behrend(params, budget=args.budget,
                                             threads=args.threads)
        _write_set(artifact.set, args)
        print(_summary_line("behrend", params, artifact.shell, artifact.set))
        return EXIT_OK
    artifact = elkin.construct_elkin(params, budget=args.budget, threads=args.threads)
    _write_set(artifact.set, args)
    print(_summary_line("elkin", params, artifact.shell, artifact.set))
    if artifact.is_empty:
        print("empty result: the certificate filter removed every annulus point",
              file=sys.stderr)
        return EXIT_EMPTY
    return EXIT_OK


def cmd_verify(args) -> int:
    with open(args.in_path, "r", encoding="utf-8") as fh:
        apset = read_set(fh)
    report = verify_mod.midpoint_free(apset)
    if report.ok:
        print(f"ok size={apset.size} pairs_checked={report.pairs_checked}")
        return EXIT_OK
    i, j, l = report.witness
    print(f"witness {i} = ({j}+{l})/2")
    return EXIT_ERROR


def cmd_sweep(args) -> int:
    rows = []
    for k in _parse_range(args.k_range):
        for y in _parse_range(args.y_range):
            n = (2 * y) ** k
            params = _apply_knobs(
                ConstructionParams(n=n, k=k, y=y),
                args.method, args.a, args.epsilon, args.g,
            )
            if args.method == "behrend":
                art = behrend.construct_behrend(params, budget=args.budget,
                                                threads=args.threads)
                fraction = ""
            else:
                art = elkin.construct_elkin(params, budget=args.budget,
                                            threads=args.threads)
                fraction = art.survivor_fraction
            rows.append([
                k, y, n, art.shell.t_low, art.shell.t_high, art.set.size,
                art.set.density, numeric.behrend_bound(n), numeric.elkin_bound(n),
                fraction,
            ])
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "y", "n", "shell_lo", "shell_hi", "size", "density",
                         "behrend_bound", "elkin_bound", "survivor_fraction"])
        writer.writerows(rows)
    print(f"wrote {len(rows)} rows to {args.out}")
    return EXIT_OK


def cmd_nu(args) -> int:
    value, witness = verify_mod.exact_nu(args.n)
    value_bb = verify_mod.exact_nu_bb(args.n)
    agree = value == value_bb and verify_mod.midpoint_free(witness).ok
    if agree:
        print(f"nu={value} oracle_agree=true")
        return EXIT_OK
    print(f"nu={value} nu_bb={value_bb} oracle_agree=false")
    return EXIT_DISAGREE


def cmd_discrepancy(args) -> int:
    grid = list(range(args.t_step, args.t_max + 1, args.t_step))
    records = lattice.discrepancy_scan(args.k, grid, args.m, budget=args.budget)
    out = open(args.out, "w", encoding="utf-8", newline="") if args.out else sys.stdout
    try:
        writer = csv.writer(out)
        writer.writerow(["k", "t", "m", "count_exact", "volume",
                         "reference_volume", "ratio"])
        for r in records:
            writer.writerow([r.k, r.t, r.m, r.count_exact, r.volume,
                             r.reference_volume, r.ratio])
    finally:
        if args.out:
            out.close()
    return EXIT_OK


def cmd_witness_count(args) -> int:
    check = elkin.dhat_bound_check(args.k, args.g, args.epsilon)
    ok = "true" if check.ok else "false"
    print(f"dhat={check.enumerated} bound={check.bound} ok={ok}")
    return EXIT_OK


def cmd_histogram(args) -> int:
    hist = lattice.build_histogram(args.k, args.y, budget=args.budget)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            lattice.write_histogram_csv(hist, fh)
    else:
        lattice.write_histogram_csv(hist, sys.stdout)
    return EXIT_OK


_COMMANDS = {
    "construct": cmd_construct,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
    "nu": cmd_nu,
    "discrepancy": cmd_discrepancy,
    "witness-count": cmd_witness_count,
    "histogram": cmd_histogram,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except SetFormatError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (ApfreeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
