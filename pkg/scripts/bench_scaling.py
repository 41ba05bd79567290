#!/usr/bin/env python3
"""Scaling experiment: peeling work versus m * average degeneracy.

Runs the instrumented decomposition over complete graphs and G(n, p)
families and prints one TSV row per graph, with the scan-counter ratio
that should stay bounded by a small constant across each family.

Usage: python scripts/bench_scaling.py [--max-kn 200]
"""

import argparse
import sys
import time
from itertools import combinations

sys.path.insert(0, "src")

from trusskit import WitnessConfig, from_edges, gnp_random
from trusskit.peel import instrumented_truss_decomposition
from trusskit.witness import _truncation_cap, instrumented_truncated_decomposition


def complete(n):
    return from_edges(n, combinations(range(1, n + 1), 2))


def row(name, g, with_witness=False):
    t0 = time.perf_counter()
    labels, stats = instrumented_truss_decomposition(g)
    dt = time.perf_counter() - t0
    m_dbar = sum(min(g.degree(u), g.degree(v)) for u, v in g.edges)
    ratio = stats.scan_steps / m_dbar if m_dbar else 0.0
    fb = ""
    if with_witness and g.m:
        cfg = WitnessConfig(k_trunc=min(12, _truncation_cap(g.m)))
        _, state = instrumented_truncated_decomposition(g, cfg)
        rate = state.fallback_calls / max(state.enumeration_calls, 1)
        fb = f"\t{rate:.5f}"
    print(
        f"{name}\t{g.n}\t{g.m}\t{max(labels.tau) if labels.tau else 0}"
        f"\t{dt * 1000:.1f}\t{stats.scan_steps}\t{m_dbar}\t{ratio:.3f}{fb}"
    )


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-kn", type=int, default=200)
    ap.add_argument("--witness", action="store_true", help="also measure fallback rate")
    args = ap.parse_args()
    hdr = "graph\tn\tm\tmax_tau\tms\tscan_steps\tm_dbar\tratio"
    print(hdr + ("\tfallback" if args.witness else ""))
    for n in (50, 100, 200):
        if n <= args.max_kn:
            row(f"K{n}", complete(n), args.witness)
    for n, p in ((100, 0.05), (200, 0.05), (200, 0.1), (400, 0.05)):
        row(f"gnp_{n}_{p}", gnp_random(n, p, seed=7), args.witness)


if __name__ == "__main__":
    main()
