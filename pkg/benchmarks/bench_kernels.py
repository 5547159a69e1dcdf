#!/usr/bin/env python3
"""
Benchmark the numba posting-list kernels against the numpy fallback.

Both paths are imported from pming.kernels and called directly, so one
process times both regardless of PMING_DISABLE_NUMBA.

Usage:
    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --docs 10000 100000 --terms 100 300
    python3 benchmarks/bench_kernels.py --output results.json
"""

import argparse
import json
import platform
import sys
import time
from datetime import datetime, timezone

import numpy as np

from pming import kernels


def zipf_postings(n_docs, n_terms, rng):
    """Postings whose densities fall off like a Zipf vocabulary (1/rank)."""
    postings = []
    for rank in range(1, n_terms + 1):
        density = min(0.5, 2.0 / rank)
        mask = rng.random(n_docs) < density
        postings.append(np.flatnonzero(mask).astype(np.int64))
    return postings


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - start)
    return min(times), result


def warmup_jit():
    if not kernels.NUMBA_AVAILABLE:
        return 0.0
    start = time.perf_counter()
    a = np.arange(0, 10, 2, dtype=np.int64)
    b = np.arange(0, 10, 3, dtype=np.int64)
    kernels._intersect_sorted_numba(a, b)
    kernels._intersect_count_numba(a, b)
    indptr, indices = kernels.to_csr([a, b])
    kernels._pairwise_cooccurrence_numba(indptr, indices, 10)
    return time.perf_counter() - start


def bench_case(n_docs, n_terms, repeat, rng):
    postings = zipf_postings(n_docs, n_terms, rng)
    indptr, indices = kernels.to_csr(postings)
    a, b = postings[0], postings[min(1, n_terms - 1)]
    row = {"docs": n_docs, "terms": n_terms, "postings_total": int(indices.size)}

    t_np, m_np = best_of(lambda: kernels._pairwise_cooccurrence_numpy(indptr, indices, n_docs), repeat)
    row["pairwise_numpy_s"] = t_np
    row["intersect_numpy_s"] = best_of(lambda: kernels._intersect_sorted_numpy(a, b), repeat)[0]
    if kernels.NUMBA_AVAILABLE:
        t_nb, m_nb = best_of(lambda: kernels._pairwise_cooccurrence_numba(indptr, indices, n_docs), repeat)
        if not np.array_equal(m_np, m_nb):
            raise AssertionError(f"backends disagree at docs={n_docs} terms={n_terms}")
        row["pairwise_numba_s"] = t_nb
        row["intersect_numba_s"] = best_of(lambda: kernels._intersect_sorted_numba(a, b), repeat)[0]
        row["pairwise_speedup"] = t_np / t_nb if t_nb else float("inf")
    return row


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.strip().splitlines()[0])
    parser.add_argument("--docs", type=int, nargs="+", default=[1_000, 10_000, 100_000])
    parser.add_argument("--terms", type=int, nargs="+", default=[50, 100, 200])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--output", help="write results as JSON")
    args = parser.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    compile_s = warmup_jit()
    print(f"numba available: {kernels.NUMBA_AVAILABLE} (warm-up {compile_s:.2f}s)")
    print(f"{'docs':>8} {'terms':>6} {'numpy s':>10} {'numba s':>10} {'speedup':>8}")

    rows = []
    for n_docs in args.docs:
        for n_terms in args.terms:
            row = bench_case(n_docs, n_terms, args.repeat, rng)
            rows.append(row)
            nb = row.get("pairwise_numba_s")
            print(f"{n_docs:>8} {n_terms:>6} {row['pairwise_numpy_s']:>10.4f} "
                  f"{nb if nb is not None else float('nan'):>10.4f} {row.get('pairwise_speedup', float('nan')):>8.1f}")

    if args.output:
        report = {
            "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            "python": sys.version.split()[0],
            "platform": platform.platform(),
            "numpy": np.__version__,
            "numba_available": kernels.NUMBA_AVAILABLE,
            "jit_warmup_s": compile_s,
            "results": rows,
        }
        with open(args.output, "w") as fh:
            json.dump(report, fh, indent=2)
        print(f"wrote {args.output}")


if __name__ == "__main__":
    main()
