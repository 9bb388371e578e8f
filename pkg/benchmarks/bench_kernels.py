"""Compare the compiled and pure-Python integer kernels.

    python benchmarks/bench_kernels.py [--repeat 5] [--suite 10]

Kernel rows time each backend directly. The suite row runs the seeded
verification batch in a subprocess per backend.
"""

import argparse
import importlib
import os
import random
import subprocess
import sys
import time
import timeit


def make_cases(rng):
    mats = [[[rng.randint(-9, 9) for _ in range(24)] for _ in range(20)] for _ in range(4)]
    tall = [[rng.randint(-3, 3) * (j % 3 != 0) for j in range(40)] for _ in range(60)]
    polys = [[rng.randint(-50, 50) for _ in range(30)] for _ in range(2)]
    den = [rng.randint(-5, 5) for _ in range(8)] + [3]
    return {
        "echelon 20x24": lambda k: [k.echelon(m, 24) for m in mats],
        "rank 60x40 sparse": lambda k: k.rank(tall, 40),
        "poly_mul deg 29": lambda k: k.poly_mul(polys[0], polys[1]),
        "poly_pdivrem 29/8": lambda k: k.poly_pdivrem(polys[0], den),
        "row_combine x200": lambda k: [k.row_combine([polys[0], den], 3, [2, 1], [polys[1], den])
                                       for _ in range(200)],
    }


def bench_kernels(repeat):
    from bezoutdl import _kernels_py as py
    try:
        cy = importlib.import_module("bezoutdl._kernels")
    except ImportError:
        cy = None
    cases = make_cases(random.Random(7))
    print(f"{'kernel':<22}{'python ms':>12}{'cython ms':>12}{'speedup':>10}")
    for name, fn in cases.items():
        tp = min(timeit.repeat(lambda: fn(py), number=5, repeat=repeat)) / 5 * 1e3
        if cy is None:
            print(f"{name:<22}{tp:>12.3f}{'n/a':>12}{'':>10}")
            continue
        assert fn(py) == fn(cy), name
        tc = min(timeit.repeat(lambda: fn(cy), number=5, repeat=repeat)) / 5 * 1e3
        print(f"{name:<22}{tp:>12.3f}{tc:>12.3f}{tp / tc:>9.2f}x")


def bench_suite(count):
    cmd = [sys.executable, "-m", "bezoutdl", "verify", "--seed", "0", "--count", str(count),
           "--json"]
    out = {}
    for label, env in (("python", {"BEZOUTDL_PURE_PYTHON": "1"}), ("cython", {})):
        t0 = time.perf_counter()
        res = subprocess.run(cmd, env={**os.environ, **env}, capture_output=True, text=True)
        out[label] = (time.perf_counter() - t0, res.stdout)
    same = out["python"][1] == out["cython"][1]
    tp, tc = out["python"][0], out["cython"][0]
    print(f"{'verify x' + str(count):<22}{tp * 1e3:>12.0f}{tc * 1e3:>12.0f}{tp / tc:>9.2f}x"
          f"  reports identical: {same}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--suite", type=int, default=10, help="seeds for the end-to-end row; 0 skips")
    args = ap.parse_args()
    bench_kernels(args.repeat)
    if args.suite:
        bench_suite(args.suite)


if __name__ == "__main__":
    main()
