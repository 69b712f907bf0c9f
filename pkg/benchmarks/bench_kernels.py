#!/usr/bin/env python3
"""Time the compiled kernels against the pure-Python fallback.

Two levels: the batched bracket kernel on its own, and whole pipeline
stages (closure, full equivalence check) on seeded random problems.
"""
import argparse
import json
import sys
import timeit

import numpy as np

from indcontrol import BipartiteDims, _backend, build_generators, check_equivalence, lie_closure
from indcontrol.systems import random_problem, random_su


def best(fn, number, repeat):
    fn()  # warm-up: first calls pay for BLAS thread start-up and caches
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def bench_brackets(n, pa, pb, repeat):
    rng = np.random.default_rng(n)
    a = np.array([random_su(n, rng) for _ in range(pa)])
    b = np.array([random_su(n, rng) for _ in range(pb)])
    out = np.empty((pa * pb, n * n))
    row = {"case": f"bracket_coords n={n} {pa}x{pb}"}
    for name in _backend.available():
        kern = _backend._AVAILABLE[name]
        row[name] = best(lambda: kern.bracket_coords(a, b, out, True), 3, repeat)
    return row


def bench_pipeline(label, fn, repeat):
    row = {"case": label}
    for name in _backend.available():
        with _backend.use(name):
            row[name] = best(fn, 1, repeat)
    return row


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=7)
    ap.add_argument("--json", action="store_true", help="print rows as JSON")
    args = ap.parse_args()
    if "cython" not in _backend.available():
        print("compiled extension not built; only the fallback can be timed", file=sys.stderr)

    rows = [bench_brackets(n, pa, pb, args.repeat) for n, pa, pb in [(4, 15, 15), (6, 35, 35), (9, 80, 80)]]
    p33 = random_problem(BipartiteDims(3, 3), np.random.default_rng(1), "generic")
    gens = build_generators(p33)
    rows.append(bench_pipeline("lie_closure su(9)", lambda: lie_closure(gens), args.repeat))
    rows.append(bench_pipeline("check_equivalence (3,3) generic", lambda: check_equivalence(p33), args.repeat))
    p24 = random_problem(BipartiteDims(2, 4), np.random.default_rng(2), "intermediate")
    rows.append(bench_pipeline("check_equivalence (2,4) intermediate", lambda: check_equivalence(p24), args.repeat))

    if args.json:
        print(json.dumps(rows, indent=2))
        return
    names = _backend.available()
    print(f"{'case':40s}" + "".join(f"{n:>12s}" for n in names) + ("     speedup" if len(names) > 1 else ""))
    for r in rows:
        line = f"{r['case']:40s}" + "".join(f"{r[n] * 1e3:10.2f}ms" for n in names)
        if len(names) > 1:
            line += f"{r['python'] / r['cython']:11.2f}x"
        print(line)


if __name__ == "__main__":
    main()
