"""Compiled versus pure-Python kernels.

Runs each dense kernel from both modules on the same seeded matrices, checks
the answers agree and prints timings.  ``--end-to-end`` also times a full
homology computation in two subprocesses, one with ``TANGHOM_PURE=1``.

    python3 benchmarks/bench_kernels.py [--sizes 40 80 160] [--knot knot_7_1] [--end-to-end]
"""
from __future__ import annotations

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from tanghom.zlinalg import _kernels_py

try:
    from tanghom.zlinalg import _kernels as _compiled
except ImportError:
    _compiled = None


def differential_blocks(name, count):
    """The largest single-quantum-degree blocks of the cube differential of a
    catalog knot: the matrices the homology code actually reduces."""
    from tanghom import catalog
    from tanghom.oracle import close_word, cube_complex
    C = cube_complex(close_word(catalog.word(name)), limit=None)
    blocks = []
    for j in sorted(C.qdeg):
        if not C.dim(j + 1):
            continue
        D = C.diff(j)
        for q in sorted(set(C.qdeg[j])):
            cols = [c for c, x in enumerate(C.qdeg[j]) if x == q]
            rows = [r for r, x in enumerate(C.qdeg[j + 1]) if x == q]
            if rows and cols:
                blocks.append(np.array(D.submatrix(rows, cols).to_dense(), dtype=np.int64))
    blocks.sort(key=lambda a: -a.size)
    return blocks[:count]


def bench(fn, a, repeat):
    return min(timeit.repeat(lambda: fn(a), number=1, repeat=repeat))


def run_kernels(sizes, repeat, seed, knot):
    rng = np.random.default_rng(seed)
    cases = [("gf2_rank", rng.integers(0, 2, size=(n, n))) for n in sizes]
    cases += [("snf_diagonal", a) for a in differential_blocks(knot, len(sizes))]
    print(f"{'kernel':<14}{'shape':>10}{'python s':>12}{'cython s':>12}{'speedup':>10}")
    for name, arg in cases:
        n = "x".join(map(str, arg.shape))
        py = getattr(_kernels_py, name)
        t_py = bench(py, arg.tolist(), repeat)
        if _compiled is None:
            print(f"{name:<14}{n:>10}{t_py:>12.4f}{'n/a':>12}{'':>10}")
            continue
        cy = getattr(_compiled, name)
        got_py, got_cy = py(arg.tolist()), cy(arg)
        if name == "snf_diagonal":
            got_py = _kernels_py.normalize_diagonal(got_py)
            got_cy = _kernels_py.normalize_diagonal(got_cy)
        if got_py != got_cy:
            raise SystemExit(f"{name} n={n}: backends disagree")
        t_cy = bench(cy, arg, repeat)
        print(f"{name:<14}{n:>10}{t_py:>12.4f}{t_cy:>12.4f}{t_py / t_cy:>9.1f}x")


END_TO_END = """
import time
from tanghom import catalog
from tanghom.khov import word_homology
from tanghom.zlinalg import BACKEND
t = time.perf_counter()
r = word_homology(catalog.word({name!r}), {ring!r})
print(BACKEND, round(time.perf_counter() - t, 3), r.poincare_string())
"""


def run_end_to_end(name, ring):
    for pure in ("0", "1"):
        env = dict(os.environ, TANGHOM_PURE=pure)
        out = subprocess.run([sys.executable, "-c", END_TO_END.format(name=name, ring=ring)],
                             env=env, capture_output=True, text=True, check=True).stdout.split(maxsplit=2)
        print(f"{name} over {ring}: backend {out[0]:<7} {out[1]:>8} s")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[40, 80, 160])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--end-to-end", action="store_true")
    ap.add_argument("--word", default="trefoil", help="catalog word for --end-to-end")
    ap.add_argument("--knot", default="knot_7_1", help="catalog knot whose differential feeds snf_diagonal")
    args = ap.parse_args(argv)
    run_kernels(args.sizes, args.repeat, args.seed, args.knot)
    if args.end_to_end:
        for ring in ("Z2", "Z"):
            run_end_to_end(args.word, ring)


if __name__ == "__main__":
    main()
