"""Compare the compiled and pure-Python flag kernels.

    python3 benchmarks/bench_oracle.py [--quick]

Times orbit enumeration (full and minimal generator sets) and bulk
canonicalisation on a few flag spaces, checks both kernels give the same
orbits, and prints a table.
"""

import argparse
import random
import sys
import time

import numpy as np

from chainbruhat.matrix import random_gl
from chainbruhat.oracle import BACKENDS
from chainbruhat.oracle.flags import FlagSpace
from chainbruhat.ring import make_ring

CASES = [("zpk", 2, 2, 3), ("fqtk", 3, 2, 3), ("fqtk", 3, 3, 3), ("zpk", 2, 2, 4)]
QUICK = CASES[:2]


def best_of(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def bench_case(flavor, q, k, n, repeat):
    R = make_ring(flavor, q, k)
    rng = random.Random(0)
    mats = [list(random_gl(R, n, rng).data) for _ in range(2000)]
    rows = []
    results = {}
    for backend in BACKENDS:
        space = FlagSpace(R, n, backend)
        for kind in ("full", "minimal"):
            gens = space.generators(kind)
            # the python kernel is slow; one run is enough there
            secs, res = best_of(lambda: space.kernel.orbits(gens), repeat if backend == "cython" else 1)
            results[(backend, kind)] = tuple(np.asarray(x).tobytes() for x in res)
            rows.append((f"{R} n={n}", space.size, backend, f"orbits/{kind}", secs))
        secs, _ = best_of(lambda: [space.kernel.canonical_rank(m) for m in mats], repeat)
        rows.append((f"{R} n={n}", space.size, backend, "rank x2000", secs))
    if len(set(results.values())) != 1:
        raise SystemExit(f"kernels disagree on {R} n={n}")
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--quick", action="store_true", help="small cases only")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if "cython" not in BACKENDS:
        print("compiled kernel not built; timing the python kernel only", file=sys.stderr)
    rows = []
    for case in QUICK if args.quick else CASES:
        rows += bench_case(*case, repeat=args.repeat)
    print(f"{'space':<24}{'flags':>9}  {'backend':<8}{'task':<16}{'seconds':>10}  {'speedup':>8}")
    base = {(r[0], r[3]): r[4] for r in rows if r[2] == "python"}
    for space, size, backend, task, secs in rows:
        speed = base[(space, task)] / secs if secs > 0 else float("inf")
        print(f"{space:<24}{size:>9}  {backend:<8}{task:<16}{secs:>10.4f}  {speed:>7.1f}x")


if __name__ == "__main__":
    main()
