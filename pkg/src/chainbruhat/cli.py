"""Command-line front end.

Exit codes: 0 success, 1 computation or verification failure, 2 bad arguments.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Optional, Sequence

from . import __version__
from .classify import count_n3, enumerate_labels_n3, label_to_json, rep_of_label
from .errors import BudgetExceeded, ChainBruhatError
from .experiments import (
    SUITES,
    census,
    census_grid,
    format_table,
    run_suites,
)
from .invariants import invariants_json
from .matrix import Mat, format_matrix, parse_matrix, random_gl
from .oracle import DEFAULT_BUDGET, canonical_flag, double_cosets, equiv
from .ring import RingSpec, parse_ring

CONFIG_KEYS = {"ring", "n", "format", "out", "seed", "threads", "budget", "method"}


class ArgError(Exception):
    """Invalid command-line input (exit code 2)."""


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["table", "json", "csv"], default=None, help="output format")
    common.add_argument("--out", default=None, help="write output to this file instead of stdout")
    common.add_argument("--seed", type=int, default=None, help="seed for random inputs")
    common.add_argument("--threads", type=_positive, default=1, help="worker processes for census/verify cells")
    common.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET, help="maximum flag-space size for the oracle")
    common.add_argument("--config", default=None, help="JSON file with default values for these options")

    ring_opts = argparse.ArgumentParser(add_help=False)
    ring_opts.add_argument("--ring", default=None, help="ring, e.g. zpk:p=2,k=3 or fqtk:q=3,k=2")

    parser = argparse.ArgumentParser(prog="chainbruhat", description="Double cosets B\\GL_n(A)/B over finite chain rings.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", parents=[common, ring_opts], help="number of double cosets")
    p.add_argument("--n", type=_positive, default=None)
    p.add_argument("--method", choices=["auto", "closed", "oracle"], default="auto")

    p = sub.add_parser("enumerate", parents=[common, ring_opts], help="one representative per double coset")
    p.add_argument("--n", type=_positive, default=None)
    p.add_argument("--method", choices=["oracle", "labels"], default="oracle")

    p = sub.add_parser("invariants", parents=[common, ring_opts], help="W, r and intersection types of a matrix")
    p.add_argument("--matrix", default=None, help='rows separated by ";", entries by ","')
    p.add_argument("--n", type=_positive, default=None, help="order for --random")
    p.add_argument("--random", action="store_true", help="use a random element of GL_n (see --seed)")

    p = sub.add_parser("equiv", parents=[common, ring_opts], help="whether two matrices lie in one double coset")
    p.add_argument("--n", type=_positive, default=None)
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--method", choices=["auto", "orbit", "linear", "bfs"], default="auto")

    p = sub.add_parser("canonical", parents=[common, ring_opts], help="canonical flag of a matrix")
    p.add_argument("--matrix", default=None)
    p.add_argument("--n", type=_positive, default=None, help="order for --random")
    p.add_argument("--random", action="store_true")

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("suite", choices=sorted(SUITES) + ["all"])

    p = sub.add_parser("census", parents=[common], help="per-fiber oracle counts over a grid")
    p.add_argument("--flavors", default="zpk", help="comma-separated: zpk,fqtk")
    p.add_argument("--p", type=_int_list, default=[2, 3], dest="primes")
    p.add_argument("--k", type=_int_list, default=[1, 2])
    p.add_argument("--n", type=_int_list, default=[2, 3])
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: Sequence[str]) -> argparse.Namespace:
    """Parse ``argv``; options missing from it are taken from ``--config`` when given."""
    args = parser.parse_args(argv)
    if args.config is None:
        return args
    try:
        with open(args.config) as fh:
            conf = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ArgError(f"cannot read config {args.config}: {exc}") from None
    if not isinstance(conf, dict):
        raise ArgError("config must be a JSON object")
    unknown = set(conf) - CONFIG_KEYS
    if unknown:
        raise ArgError(f"unknown config keys: {', '.join(sorted(unknown))}")
    given = {a.split("=", 1)[0] for a in argv if a.startswith("--")}
    for key, value in conf.items():
        if f"--{key}" in given or not hasattr(args, key):
            continue
        if key in ("seed", "threads", "budget") and not isinstance(value, int):
            raise ArgError(f"config key {key!r} must be an integer")
        setattr(args, key, value)
    return args


def _ring(args) -> RingSpec:
    if not args.ring:
        raise ArgError("--ring is required")
    try:
        return parse_ring(args.ring)
    except ValueError as exc:
        raise ArgError(str(exc)) from None


def _matrix(ring: RingSpec, text: str, n: Optional[int] = None) -> Mat:
    try:
        m = parse_matrix(ring, text)
    except ValueError as exc:
        raise ArgError(f"bad matrix {text!r}: {exc}") from None
    if n is not None and m.shape != (n, n):
        raise ArgError(f"matrix {text!r} is not {n}x{n}")
    return m


def _square_input(args, ring: RingSpec) -> Mat:
    if args.random:
        if args.n is None:
            raise ArgError("--random needs --n")
        return random_gl(ring, args.n, args.seed if args.seed is not None else 0)
    if args.matrix is None:
        raise ArgError("give --matrix or --random")
    m = _matrix(ring, args.matrix, args.n)
    if m.rows != m.cols:
        raise ArgError("matrix must be square")
    if not m.is_invertible:
        raise ArgError("matrix is not invertible")
    return m


def _emit(args, text: str):
    if not text.endswith("\n"):
        text += "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(rows: list[dict], header: list[str]) -> str:
    out = io.StringIO()
    w = csv.DictWriter(out, fieldnames=header, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return out.getvalue()


# -- commands --------------------------------------------------------------


def cmd_count(args) -> int:
    ring = _ring(args)
    if args.n is None:
        raise ArgError("--n is required")
    n = args.n
    method = args.method
    if method == "auto":
        method = "closed" if n <= 3 else "oracle"
    if method == "closed":
        if n > 3:
            raise ArgError("closed forms exist only for n <= 3")
        value = 1 if n == 1 else ring.k + 1 if n == 2 else count_n3(ring.q, ring.k)
    else:
        value = double_cosets(ring, n, budget=args.budget).num_cosets if n > 1 else 1
    fmt = args.format or "table"
    if fmt == "json":
        _emit(args, json.dumps({"ring": str(ring), "n": n, "method": method, "count": value}))
    elif fmt == "csv":
        _emit(args, _csv([{"ring": str(ring), "n": n, "method": method, "count": value}], ["ring", "n", "method", "count"]))
    else:
        _emit(args, str(value))
    return 0


def cmd_enumerate(args) -> int:
    ring = _ring(args)
    if args.n is None:
        raise ArgError("--n is required")
    fmt = args.format or "table"
    if args.method == "labels":
        if args.n != 3:
            raise ArgError("label enumeration is implemented for n = 3")
        labels = enumerate_labels_n3(ring)
        rows = [{"label": label_to_json(L), "matrix": format_matrix(rep_of_label(ring, L))} for L in labels]
        if fmt == "json":
            _emit(args, json.dumps({"ring": str(ring), "n": 3, "cosets": rows}))
        elif fmt == "csv":
            flat = [{"fiber": r["label"]["fiber"], "payload": json.dumps(r["label"]["payload"], sort_keys=True), "matrix": r["matrix"]} for r in rows]
            _emit(args, _csv(flat, ["fiber", "payload", "matrix"]))
        else:
            _emit(args, format_table(["fiber", "payload", "representative"], [[r["label"]["fiber"], json.dumps(r["label"]["payload"], sort_keys=True), r["matrix"]] for r in rows]))
        return 0
    report = double_cosets(ring, args.n, budget=args.budget)
    fibers = report.fibers()
    if fmt == "json":
        _emit(args, json.dumps(report.to_json()))
    elif fmt == "csv":
        rows = [{"index": t, "fiber": str(w), "orbit_size": s, "matrix": format_matrix(m)} for t, (m, w, s) in enumerate(zip(report.representatives, fibers, report.orbit_sizes))]
        _emit(args, _csv(rows, ["index", "fiber", "orbit_size", "matrix"]))
    else:
        _emit(
            args,
            format_table(
                ["#", "W", "flags", "representative"],
                [[t, w, s, format_matrix(m)] for t, (m, w, s) in enumerate(zip(report.representatives, fibers, report.orbit_sizes))],
            ),
        )
    return 0


def cmd_invariants(args) -> int:
    ring = _ring(args)
    m = _square_input(args, ring)
    data = invariants_json(m)
    fmt = args.format or "json"
    if fmt == "table":
        lines = [f"matrix  {format_matrix(m)}", f"W       {data['W']}", "r"]
        lines += ["  " + " ".join(f"{x:2d}" for x in row) for row in data["r"]]
        lines.append("profile")
        lines += [f"  {key}: {parts}" for key, parts in data["profile"].items()]
        _emit(args, "\n".join(lines))
    elif fmt == "csv":
        rows = [{"i": int(key.split(",")[0]), "j": int(key.split(",")[1]), "type": " ".join(map(str, parts))} for key, parts in data["profile"].items()]
        _emit(args, _csv(rows, ["i", "j", "type"]))
    else:
        _emit(args, json.dumps(data))
    return 0


def cmd_equiv(args) -> int:
    ring = _ring(args)
    a = _matrix(ring, args.a, args.n)
    b = _matrix(ring, args.b, args.n)
    if a.shape != b.shape:
        raise ArgError("matrices have different shapes")
    result = equiv(a, b, method=args.method, budget=args.budget)
    if (args.format or "table") == "json":
        _emit(args, json.dumps({"ring": str(ring), "a": format_matrix(a), "b": format_matrix(b), "equivalent": result}))
    else:
        _emit(args, "true" if result else "false")
    return 0


def cmd_canonical(args) -> int:
    ring = _ring(args)
    m = _square_input(args, ring)
    rep = canonical_flag(m)
    if (args.format or "table") == "json":
        _emit(args, json.dumps({"ring": str(ring), "input": format_matrix(m), "canonical": format_matrix(rep.mat), "index": rep.index}))
    else:
        _emit(args, f"{format_matrix(rep.mat)}\nindex {rep.index}")
    return 0


def cmd_verify(args) -> int:
    names = sorted(SUITES) if args.suite == "all" else [args.suite]
    results = run_suites(names, budget=args.budget, threads=args.threads)
    fmt = args.format or "table"
    if fmt == "json":
        _emit(args, json.dumps([r.to_json() for r in results]))
    else:
        blocks = []
        for r in results:
            status = "PASS" if r.passed else "FAIL"
            lines = [f"== {r.name}: {status} ({r.seconds:.1f} s)", r.table]
            lines += [f"  {'ok  ' if ok else 'FAIL'} {name}" for name, ok in r.checks.items()]
            blocks.append("\n".join(lines))
        _emit(args, "\n\n".join(blocks))
    return 0 if all(r.passed for r in results) else 1


def cmd_census(args) -> int:
    flavors = [f.strip() for f in args.flavors.split(",") if f.strip()]
    for f in flavors:
        if f not in ("zpk", "fqtk"):
            raise ArgError(f"unknown flavor {f!r}")
    for p in args.primes:
        try:
            parse_ring(f"zpk:p={p},k=1")
        except ValueError as exc:
            raise ArgError(str(exc)) from None
    if any(k < 1 for k in args.k) or any(n < 1 for n in args.n):
        raise ArgError("k and n must be >= 1")
    rows = census(census_grid(args.n, args.k, args.primes, flavors), budget=args.budget, threads=args.threads)
    header = ["flavor", "p", "k", "n", "fiber", "count", "total"]
    fmt = args.format or "csv"
    if fmt == "json":
        _emit(args, json.dumps(rows))
    elif fmt == "table":
        _emit(args, format_table(header, [[r[h] for h in header] for r in rows]))
    else:
        _emit(args, _csv(rows, header))
    return 1 if any("error" in r for r in rows) else 0


COMMANDS = {
    "count": cmd_count,
    "enumerate": cmd_enumerate,
    "invariants": cmd_invariants,
    "equiv": cmd_equiv,
    "canonical": cmd_canonical,
    "verify": cmd_verify,
    "census": cmd_census,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
    except SystemExit as exc:  # argparse usage errors
        return int(exc.code or 0)
    except ArgError as exc:
        print(f"chainbruhat: error: {exc}", file=sys.stderr)
        return 2
    try:
        return COMMANDS[args.command](args)
    except ArgError as exc:
        print(f"chainbruhat: error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceeded as exc:
        print(f"chainbruhat: budget exceeded: {exc}", file=sys.stderr)
        return 1
    except (ChainBruhatError, ArithmeticError, RuntimeError, OSError) as exc:
        print(f"chainbruhat: failed: {exc}", file=sys.stderr)
        return 1


run = main

if __name__ == "__main__":
    sys.exit(main())
