"""Command-line front end: stats, triangles, truss, truncated-truss,
components, generate, verify, bench.

All randomness flows from one seed in the run configuration, so every
subcommand except the wall-clock columns of ``bench`` produces identical
bytes for identical input and flags.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field

from . import checks, generators, graphs, peel, triangles, witness
from .generators import ConstructionError, InfeasibleError
from .graphs import Graph, ParseError, ValidationError
from .witness import DEFAULT_MEM_CAP, DEFAULT_SEED, ResourceLimitError, WitnessConfig

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_PARSE = 3
EXIT_VALIDATION = 4
EXIT_INFEASIBLE = 5
EXIT_RESOURCE = 6
EXIT_IO = 7

MEM_CAP_ENV = "TRUSSKIT_MEM_CAP"


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)
    input_path: str | None = None
    output_path: str | None = None
    verbosity: int = 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="trusskit",
        description="k-truss decomposition, generators, and verification",
    )
    p.add_argument("-i", "--input", help="edge-list file (default: stdin)")
    p.add_argument("-o", "--output", help="output file (default: stdout)")
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("stats", help="basic graph statistics")

    tri = sub.add_parser("triangles", help="triangle list or per-edge counts")
    tri.add_argument("--counts", action="store_true", help="emit 'u v count' TSV")

    tr = sub.add_parser("truss", help="full truss decomposition TSV 'u v tau'")
    tr.add_argument("--histogram", action="store_true", help="emit 'k count' TSV")

    tt = sub.add_parser(
        "truncated-truss",
        help="exact tau below --k-trunc, lower-bound marker at or above it",
    )
    tt.add_argument("--k-trunc", type=int, required=True)
    tt.add_argument("--seed", type=int, default=DEFAULT_SEED)
    tt.add_argument("--sets", type=int, default=None, help="random set count L")
    tt.add_argument("--prob", type=float, default=None, help="inclusion probability q")
    tt.add_argument("--init", choices=("direct", "matrix"), default="direct")
    tt.add_argument("--b", type=float, default=None, help="heavy/light exponent")
    tt.add_argument("--mem-cap", type=int, default=None, help="table budget in bytes")

    comp = sub.add_parser("components", help="k-truss component per edge")
    comp.add_argument("--k", type=int, required=True)

    gen = sub.add_parser("generate", help="emit an extremal construction")
    gsub = gen.add_subparsers(dest="generator", required=True)
    g1 = gsub.add_parser("clique-chain")
    g1.add_argument("--k", type=int, required=True)
    g1.add_argument("--s", type=int, required=True)
    g2 = gsub.add_parser("chain-remainder")
    g2.add_argument("--k", type=int, required=True)
    g2.add_argument("--n", type=int, required=True)
    g3 = gsub.add_parser("critical-2truss")
    g3.add_argument("--n", type=int, required=True)
    g4 = gsub.add_parser("suspend", help="suspend the input graph")
    g4.add_argument("--k", type=int, required=True)
    g4.add_argument("--added", type=int, choices=(1, 2), required=True)
    g5 = gsub.add_parser("torus-critical")
    g5.add_argument("--i", type=int, required=True)
    g5.add_argument("--t", type=int, required=True)
    g5.add_argument("--k", type=int, required=True)
    g6 = gsub.add_parser("critical")
    g6.add_argument("--k", type=int, required=True)
    g6.add_argument("--n", type=int, required=True)

    ver = sub.add_parser("verify", help="check truss properties or bounds")
    vsub = ver.add_subparsers(dest="check", required=True)
    v1 = vsub.add_parser("truss")
    v1.add_argument("--k", type=int, required=True)
    v1.add_argument("--format", choices=("table", "json"), default="table")
    v2 = vsub.add_parser("critical")
    v2.add_argument("--k", type=int, required=True)
    v2.add_argument("--format", choices=("table", "json"), default="table")
    v3 = vsub.add_parser("bounds")
    v3.add_argument("--format", choices=("table", "json"), default="table")

    be = sub.add_parser("bench", help="timed decomposition with work counters")
    be.add_argument("--k-trunc", type=int, default=None,
                    help="also run and measure the truncated decomposition")
    be.add_argument("--seed", type=int, default=DEFAULT_SEED)
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    params = {
        k: v
        for k, v in vars(ns).items()
        if k not in ("command", "input", "output", "verbose")
    }
    return RunConfig(
        command=ns.command,
        params=params,
        input_path=ns.input,
        output_path=ns.output,
        verbosity=ns.verbose,
    )


def _read_graph(cfg: RunConfig) -> Graph:
    if cfg.input_path:
        with open(cfg.input_path, "rb") as fh:
            data = fh.read()
    else:
        data = sys.stdin.buffer.read()
    return graphs.parse_edge_list(data)


def _mem_cap(params) -> int:
    if params.get("mem_cap") is not None:
        return params["mem_cap"]
    env = os.environ.get(MEM_CAP_ENV)
    return int(env) if env else DEFAULT_MEM_CAP


def _sorted_edge_rows(G: Graph):
    for u, v in sorted(G.edges):
        yield u, v, G.edge_id(u, v)


# -- subcommands --------------------------------------------------------------


def _cmd_stats(cfg, G, out):
    report = graphs.degeneracy(G)
    tc = triangles.triangle_counts(G)
    avg = report.average_degeneracy
    out.write(f"n\t{G.n}\n")
    out.write(f"m\t{G.m}\n")
    out.write(f"degeneracy\t{report.degeneracy}\n")
    out.write(f"average_degeneracy\t{avg.numerator}/{avg.denominator}\n")
    out.write(f"triangles\t{tc.total}\n")
    return EXIT_OK


def _cmd_triangles(cfg, G, out):
    if cfg.params.get("counts"):
        tc = triangles.triangle_counts(G)
        for u, v, e in _sorted_edge_rows(G):
            out.write(f"{G.labels[u]}\t{G.labels[v]}\t{tc.per_edge[e]}\n")
    else:
        rows: list[str] = []
        triangles.enumerate_triangles(
            G,
            lambda t: rows.append(f"{G.labels[t[0]]} {G.labels[t[1]]} {G.labels[t[2]]}"),
        )
        for row in sorted(rows):
            out.write(row + "\n")
    return EXIT_OK


def _cmd_truss(cfg, G, out):
    labels = peel.truss_decomposition(G)
    if cfg.params.get("histogram"):
        for k, cnt in labels.histogram().items():
            out.write(f"{k}\t{cnt}\n")
    else:
        for u, v, e in _sorted_edge_rows(G):
            out.write(f"{G.labels[u]}\t{G.labels[v]}\t{labels.tau[e]}\n")
    return EXIT_OK


def _cmd_truncated(cfg, G, out):
    p = cfg.params
    wc = WitnessConfig(
        k_trunc=p["k_trunc"],
        seed=p["seed"],
        sets=p.get("sets"),
        prob=p.get("prob"),
        b=p.get("b"),
        init_mode=p.get("init", "direct"),
        mem_cap_bytes=_mem_cap(p),
    )
    labels = witness.truncated_decomposition(G, wc)
    for u, v, e in _sorted_edge_rows(G):
        marker = "exact" if labels.exact[e] else "lower_bound"
        out.write(f"{G.labels[u]}\t{G.labels[v]}\t{labels.tau[e]}\t{marker}\n")
    return EXIT_OK


def _cmd_components(cfg, G, out):
    k = cfg.params["k"]
    labels = peel.truss_decomposition(G)
    comps = peel.k_truss_components(G, k, labels)
    comp_of = {}
    for cid, edges in enumerate(comps):
        for e in edges:
            comp_of[e] = cid
    for u, v, e in _sorted_edge_rows(G):
        if e in comp_of:
            out.write(f"{G.labels[u]}\t{G.labels[v]}\t{comp_of[e]}\n")
    return EXIT_OK


def _cmd_generate(cfg, out):
    p = cfg.params
    name = p["generator"]
    if name == "clique-chain":
        g, receipt = generators.clique_chain(p["k"], p["s"], return_receipt=True)
    elif name == "chain-remainder":
        g, receipt = generators.clique_chain_remainder(p["k"], p["n"], return_receipt=True)
    elif name == "critical-2truss":
        g, receipt = generators.critical_2truss(p["n"], return_receipt=True)
    elif name == "suspend":
        base = _read_graph(cfg)
        g, receipt = generators.suspend(base, p["k"], p["added"], return_receipt=True)
    elif name == "torus-critical":
        emb = generators.torus_embedding(p["i"], p["t"])
        g, receipt = generators.truss_from_embedding(emb, p["k"], return_receipt=True)
    else:
        g, receipt = generators.critical_truss(p["k"], p["n"], return_receipt=True)
    out.write(g.serialize())
    for line in receipt.lines():
        print(line, file=sys.stderr)
    return EXIT_OK


def _verify_payload(rows, fmt, out):
    if fmt == "json":
        out.write(json.dumps(rows, sort_keys=True) + "\n")
    else:
        widths = [max(len(str(r[c])) for r in rows) for c in ("check", "status", "detail")]
        for r in rows:
            out.write(
                f"{r['check']:<{widths[0]}}  {r['status']:<{widths[1]}}  {r['detail']}\n"
            )
    return EXIT_OK if all(r["status"] == "PASS" for r in rows) else EXIT_VERIFY_FAILED


def _cmd_verify(cfg, G, out):
    p = cfg.params
    kind = p["check"]
    fmt = p.get("format", "table")
    if kind == "truss":
        ok = checks.is_k_truss(G, p["k"])
        rows = [{
            "check": f"is_{p['k']}_truss",
            "status": "PASS" if ok else "FAIL",
            "detail": f"n={G.n} m={G.m}",
        }]
        return _verify_payload(rows, fmt, out)
    if kind == "critical":
        ok = checks.is_critical_k_truss(G, p["k"])
        rows = [{
            "check": f"is_critical_{p['k']}_truss",
            "status": "PASS" if ok else "FAIL",
            "detail": f"n={G.n} m={G.m}",
        }]
        return _verify_payload(rows, fmt, out)
    labels = peel.truss_decomposition(G)
    report = checks.bound_report(G, labels)
    rows = [
        {
            "check": c.name,
            "status": "PASS" if c.passed else "FAIL",
            "detail": c.detail + (f" [{c.witness}]" if c.witness else ""),
            "margin": c.margin,
        }
        for c in report.checks
    ]
    return _verify_payload(rows, fmt, out)


def _cmd_bench(cfg, G, out):
    t0 = time.perf_counter()
    labels, stats = peel.instrumented_truss_decomposition(G)
    dt = time.perf_counter() - t0
    m_dbar = sum(min(G.degree(u), G.degree(v)) for u, v in G.edges)
    ratio = stats.scan_steps / m_dbar if m_dbar else 0.0
    out.write("metric\tvalue\n")
    out.write(f"n\t{G.n}\n")
    out.write(f"m\t{G.m}\n")
    out.write(f"peel_seconds\t{dt:.6f}\n")
    out.write(f"rounds\t{stats.rounds}\n")
    out.write(f"stack_pushes\t{stats.stack_pushes}\n")
    out.write(f"scan_steps\t{stats.scan_steps}\n")
    out.write(f"m_times_avg_degeneracy\t{m_dbar}\n")
    out.write(f"scan_ratio\t{ratio:.4f}\n")
    out.write(f"max_tau\t{max(labels.tau) if labels.tau else 0}\n")
    kt = cfg.params.get("k_trunc")
    if kt is not None and G.m:
        wc = WitnessConfig(kt, seed=cfg.params["seed"], mem_cap_bytes=_mem_cap(cfg.params))
        t0 = time.perf_counter()
        _, state = witness.instrumented_truncated_decomposition(G, wc)
        dt = time.perf_counter() - t0
        rate = (
            state.fallback_calls / state.enumeration_calls
            if state.enumeration_calls
            else 0.0
        )
        out.write(f"witness_seconds\t{dt:.6f}\n")
        out.write(f"enumeration_calls\t{state.enumeration_calls}\n")
        out.write(f"fallback_rate\t{rate:.6f}\n")
    return EXIT_OK


def run(cfg: RunConfig) -> int:
    if cfg.output_path:
        out = open(cfg.output_path, "w")
    else:
        out = sys.stdout
    try:
        if cfg.command == "generate":
            return _cmd_generate(cfg, out)
        G = _read_graph(cfg)
        handler = {
            "stats": _cmd_stats,
            "triangles": _cmd_triangles,
            "truss": _cmd_truss,
            "truncated-truss": _cmd_truncated,
            "components": _cmd_components,
            "verify": _cmd_verify,
            "bench": _cmd_bench,
        }[cfg.command]
        return handler(cfg, G, out)
    finally:
        if cfg.output_path:
            out.close()


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    cfg = config_from_args(ns)
    try:
        return run(cfg)
    except ParseError as exc:
        print(f"trusskit: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ValidationError, ConstructionError, checks.CapExceeded) as exc:
        print(f"trusskit: invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except InfeasibleError as exc:
        print(f"trusskit: infeasible construction: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except ResourceLimitError as exc:
        print(f"trusskit: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except OSError as exc:
        print(f"trusskit: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
