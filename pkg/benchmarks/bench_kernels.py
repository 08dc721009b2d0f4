"""Compare the compiled and pure-Python kernel backends on the verify workloads.

    python benchmarks/bench_kernels.py [--repeat N] [--samples N]
"""

import argparse
import time
from array import array

from condnorm import kernels
from condnorm.expr import ExprUniverse, random_expr

IF = array("i", [kernels.IF])
FUEL = 10**12


def _codes(exprs):
    return [kernels.encode(e, {"a": 0, "b": 1}) for e in exprs]


def universe_norm(k, codes):
    for c in codes:
        k.norm_codes(c, FUEL)


def universe_norm2(k, codes):
    for c in codes:
        k.norm2_codes(c, FUEL)


def universe_norm1(k, codes):
    for c in codes:
        k.norm1_codes(c)


def truth_tables(k, codes):
    for c in codes:
        k.truth_table(c, 2)


def fold_lemma_slice(k, pool):
    # one x against the full y, z product of the pool
    normed = [k.norm_codes(c, FUEL)[1] for c in pool]
    for x in pool[:8]:
        head = IF + x
        for j, y in enumerate(pool):
            for l, z in enumerate(pool):
                k.norm_codes(head + normed[j] + normed[l], FUEL)
                k.norm_codes(head + y + z, FUEL)


def random_norm(k, codes):
    for c in codes:
        k.norm_codes(c, FUEL)
        k.norm2_codes(c, FUEL)


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--samples", type=int, default=1000, help="random expressions of depth <= 6")
    args = ap.parse_args()

    if kernels.compiled_backend is None:
        raise SystemExit("compiled backend not available; build it with `pip install -e .`")
    universe = _codes(ExprUniverse(3, ("a", "b")))
    pool = _codes(ExprUniverse(2, ("a", "b")))
    randoms = _codes(random_expr(s, 6, ["a", "b"]) for s in range(args.samples))
    workloads = [
        ("norm, universe (1642)", universe_norm, universe),
        ("norm2, universe", universe_norm2, universe),
        ("norm1, universe", universe_norm1, universe),
        ("truth table, universe", truth_tables, universe),
        ("fold lemma, 8 x 106 x 106", fold_lemma_slice, pool),
        (f"norm+norm2, {args.samples} random", random_norm, randoms),
    ]
    backends = [("python", kernels.python_backend), ("cython", kernels.compiled_backend)]
    print(f"{'workload':<30}{'python s':>12}{'cython s':>12}{'speedup':>10}")
    for name, fn, data in workloads:
        times = [best_of(lambda: fn(b, data), args.repeat) for _, b in backends]
        print(f"{name:<30}{times[0]:>12.4f}{times[1]:>12.4f}{times[0] / times[1]:>9.1f}x")


if __name__ == "__main__":
    main()
