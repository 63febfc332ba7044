"""Compare the compiled and pure-Python kernels on real workloads.

Records every ``enumerate_points`` and ``coset_keys`` call made while
enumerating balanced points (and their classes) on full blow-ups of an evenly
spaced slice of the stable corpus, then replays the recorded calls on each
backend, checks the outputs agree and reports the best of ``--repeat`` timings.

    python3 benchmarks/bench_kernels.py [--curves 40] [--repeat 3]
"""

import argparse
import sys
import time

from neroncomb import graph, kernels, picard
from neroncomb.corpus import stable_corpus


def record(curves):
    calls = {"enumerate_points": [], "coset_keys": []}
    orig_enum, orig_keys = kernels.enumerate_points, kernels.coset_keys

    def enum_spy(*args, **kw):
        calls["enumerate_points"].append(args)
        return orig_enum(*args, **kw)

    def keys_spy(*args, **kw):
        calls["coset_keys"].append(args)
        return orig_keys(*args, **kw)

    kernels.enumerate_points, kernels.coset_keys = enum_spy, keys_spy
    try:
        for x in curves:
            g = graph.genus(x)
            for y in (x, graph.blow_up(x, range(x.edge_count)).blown):
                dcg = picard._dcg_cached(y)
                for d in range(2 * g - 2):
                    dcg.keys(picard.basic_domain_points(y, d, picard.SEMIBALANCED))
    finally:
        kernels.enumerate_points, kernels.coset_keys = orig_enum, orig_keys
    return calls


def timed(fn, calls, backend, repeat):
    best = None
    for _ in range(repeat):
        start = time.perf_counter()
        out = [fn(*args, backend=backend) for args in calls]
        elapsed = time.perf_counter() - start
        best = elapsed if best is None else min(best, elapsed)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--curves", type=int, default=40, help="number of corpus curves to sample")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if not kernels.HAVE_COMPILED:
        print("compiled kernels are not built; run: python3 setup.py build_ext --inplace")
        return 1
    corpus = stable_corpus()
    step = max(1, len(corpus) // args.curves)
    curves = corpus[::step][: args.curves]
    calls = record(curves)
    print(f"{len(curves)} curves (stable and fully blown up), all degrees 0..2g-3")
    print(f"{'kernel':<18}{'calls':>8}{'python s':>12}{'cython s':>12}{'speedup':>10}")
    for name, fn in (("enumerate_points", kernels.enumerate_points), ("coset_keys", kernels.coset_keys)):
        py_t, py_out = timed(fn, calls[name], "python", args.repeat)
        cy_t, cy_out = timed(fn, calls[name], "cython", args.repeat)
        if py_out != cy_out:
            print(f"{name}: backends disagree")
            return 1
        print(f"{name:<18}{len(calls[name]):>8}{py_t:>12.3f}{cy_t:>12.3f}{py_t / cy_t:>9.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
