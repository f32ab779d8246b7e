"""Compare the compiled and pure-Python SLT separation kernels.

Usage::

    python benchmarks/bench_slt.py [--pairs N] [--seed S] [--repeat R]

Pairs are drawn from every well-formed term over a fixed vocabulary; both
kernels must return the same assignment for every pair, and the script
exits non-zero if they do not.
"""

from __future__ import annotations

import argparse
import random
import sys
import time

from linear_bohm import _slt_kernel_py, slt

VOCABULARIES = {
    "small": (["x", "y", "z"], {"F": 1, "G": 2, "H": 3}),
    "medium": (["x", "y", "z", "w"], {"F": 2, "G": 2, "H": 3}),
    "wide": (["x", "y", "z", "w", "v"], {"F": 2, "G": 3, "H": 3, "K": 2}),
}


def load_compiled():
    try:
        from linear_bohm import _slt_kernel
    except ImportError:
        return None
    return _slt_kernel


def sample_pairs(terms, count, rng):
    pairs = []
    while len(pairs) < count:
        a, b = rng.sample(terms, 2)
        pairs.append((a, b))
    return pairs


def time_kernel(kernel, pairs, repeat):
    best = float("inf")
    answers = None
    for _ in range(repeat):
        start = time.perf_counter()
        out = [slt.separate(a, b, kernel=kernel) for a, b in pairs]
        best = min(best, time.perf_counter() - start)
        answers = out
    return best, answers


def compile_pairs(pairs):
    """Postfix programs for each pair, so kernel time can be measured alone."""
    jobs = []
    for a, b in pairs:
        firsts, seconds = slt.vocabulary(a, b)
        fi = {x: i for i, x in enumerate(firsts)}
        si = {g: i for i, (g, _) in enumerate(seconds)}
        jobs.append((slt.compile_program(a, fi, si), slt.compile_program(b, fi, si), len(firsts), [k for _, k in seconds]))
    return jobs


def time_search(kernel, jobs, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        for job in jobs:
            kernel.search(*job)
        best = min(best, time.perf_counter() - start)
    return best


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--pairs", type=int, default=2000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args(argv)

    compiled = load_compiled()
    if compiled is None:
        print("compiled kernel not built; only the Python kernel is available")
    rng = random.Random(args.seed)
    status = 0
    print("end to end: slt.separate including program compilation and the final check")
    print(f"{'vocabulary':<10} {'terms':>7} {'pairs':>6} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    kernel_rows = []
    for label, (firsts, seconds) in VOCABULARIES.items():
        terms = [t for t in slt.enumerate_slt(firsts, seconds) if slt.slt_size(t) >= 4]
        pairs = sample_pairs(terms, args.pairs, rng)
        py_time, py_out = time_kernel(_slt_kernel_py, pairs, args.repeat)
        if compiled is None:
            print(f"{label:<10} {len(terms):>7} {len(pairs):>6} {py_time:>10.3f} {'-':>10} {'-':>8}")
            continue
        c_time, c_out = time_kernel(compiled, pairs, args.repeat)
        jobs = compile_pairs(pairs)
        kernel_rows.append((label, time_search(_slt_kernel_py, jobs, args.repeat), time_search(compiled, jobs, args.repeat)))
        if py_out != c_out:
            print(f"{label}: kernels disagree", file=sys.stderr)
            status = 1
        print(f"{label:<10} {len(terms):>7} {len(pairs):>6} {py_time:>10.3f} {c_time:>10.3f} {py_time / c_time:>7.1f}x")
    if kernel_rows:
        print("\nkernel only: search() on precompiled programs")
        print(f"{'vocabulary':<10} {'python s':>10} {'cython s':>10} {'speedup':>8}")
        for label, py, cy in kernel_rows:
            print(f"{label:<10} {py:>10.4f} {cy:>10.4f} {py / cy:>7.1f}x")
    return status


if __name__ == "__main__":
    sys.exit(main())
