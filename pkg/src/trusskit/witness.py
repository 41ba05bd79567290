"""Truncated truss decomposition backed by randomized witness sums.

For L random vertex sets X_1..X_L the structure keeps, per edge e = (u, v),
the table entry S[e, l] = sum of ids of the residual common neighbors of u
and v that lie in X_l, plus the exact residual triangle count of e. When a
set isolates a single common neighbor, the row entry *is* that vertex's id,
so triangles through an edge can usually be recovered by scanning its row
instead of the neighborhoods; a deterministic fallback scan keeps the
output exact (and therefore seed-independent) when the row misses some.
Removing an edge subtracts the vanished endpoints' ids from the affected
rows, keeping the table consistent without recomputation.

The state is single-threaded and mutable; the underlying Graph is shared
read-only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graphs import Graph, ValidationError
from .peel import REMOVED, TrussLabels

DEFAULT_SEED = 1729
DEFAULT_MEM_CAP = 4 * 2**30  # bytes of witness table the CLI will allocate

_INIT_CHUNK = 2048  # edge rows per vectorized chunk during direct init


class ResourceLimitError(Exception):
    """Configuration would exceed the configured memory budget."""


@dataclass(frozen=True)
class WitnessConfig:
    """Parameters of the witness structure.

    ``sets`` (L) defaults to ceil(10 * k_trunc * ln n) and ``prob`` (q) to
    1/k_trunc; the log is natural, which is what makes the miss
    probability per vertex polynomially small. ``b`` steers the
    heavy/light degree split of matrix-mode initialization and defaults
    to max(a, 2/3) with a = log_m(k_trunc).
    """

    k_trunc: int
    seed: int = DEFAULT_SEED
    sets: int | None = None
    prob: float | None = None
    b: float | None = None
    init_mode: str = "direct"
    mem_cap_bytes: int = DEFAULT_MEM_CAP


@dataclass
class EnumerationOutcome:
    """Result of enumerating the residual triangles of one edge.

    ``witnesses`` holds the third vertices; every entry is a verified
    residual common neighbor, and without fallback their number equals
    the edge's residual count.
    """

    witnesses: list[int]
    used_fallback: bool
    candidates_tested: int


class WitnessState:
    """Mutable decomposition state: random sets, witness table, counts."""

    def __init__(self, G, cfg, L, q, a, b, xmat, S, delta, heavy):
        self.G = G
        self.cfg = cfg
        self.L = L
        self.q = q
        self.a = a
        self.b = b
        self.xmat = xmat  # (n+1, L) bool; row 0 all False
        self.sets = [np.flatnonzero(xmat[v]) for v in range(G.n + 1)]
        self.S = S  # (m, L) int64
        self.delta = delta  # (m,) int64, REMOVED sentinel
        self.heavy = heavy  # (n+1,) bool
        self._stamp = np.zeros(G.n + 1, dtype=np.int64)
        self._tick = 0
        self.enumeration_calls = 0
        self.fallback_calls = 0

    def residual_edges(self) -> list[int]:
        return [e for e in range(self.G.m) if self.delta[e] != REMOVED]


def _truncation_cap(m: int) -> int:
    cap = math.isqrt(2 * m)
    if cap * cap < 2 * m:
        cap += 1
    return cap


def _resolve(G: Graph, cfg: WitnessConfig) -> tuple[int, float, float, float]:
    n, m = G.n, G.m
    k = cfg.k_trunc
    if k < 1:
        raise ValidationError("k_trunc must be positive")
    if k > _truncation_cap(m):
        raise ValidationError(
            f"k_trunc={k} exceeds ceil(sqrt(2m))={_truncation_cap(m)} for m={m}"
        )
    q = cfg.prob if cfg.prob is not None else 1.0 / k
    if not (0.0 < q <= 1.0):
        raise ValidationError(f"inclusion probability q={q} outside (0, 1]")
    L = cfg.sets if cfg.sets is not None else math.ceil(10 * k * math.log(max(n, 2)))
    if L < 1:
        raise ValidationError("number of random sets must be at least 1")
    if k == 1:
        a = 0.0
    elif m > 1:
        a = math.log(k) / math.log(m)
    else:
        a = 1.0
    b = cfg.b if cfg.b is not None else max(a, 2.0 / 3.0)
    if not (a - 1e-12 <= b <= 1.0 + 1e-12):
        raise ValidationError(f"b={b} outside [a, 1] with a={a:.4f}")
    needed = m * L * 8 + (n + 1) * L
    if needed > cfg.mem_cap_bytes:
        raise ResourceLimitError(
            f"witness table needs ~{needed} bytes ({m} edges x {L} sets), "
            f"over the {cfg.mem_cap_bytes}-byte cap; raise --mem-cap or "
            "lower k_trunc / --sets"
        )
    return L, q, a, b


def init_witness(G: Graph, cfg: WitnessConfig, _xmat=None) -> WitnessState:
    """Sample the random sets and build exact tables for the full graph.

    Direct mode derives each row from the edge's common-neighbor set;
    matrix mode splits vertices into heavy and light at degree m^(1-b),
    finds triangles with a light vertex by scanning light vertices' edge
    pairs, and heavy-only triangles through classical (cubic) integer
    matrix products on the heavy subgraph. Both produce identical tables.
    ``_xmat`` injects explicit membership for tests.
    """
    L, q, a, b = _resolve(G, cfg)
    n, m = G.n, G.m
    if _xmat is not None:
        xmat = np.asarray(_xmat, dtype=bool)
        if xmat.shape != (n + 1, L):
            raise ValidationError(f"explicit set matrix must be shape {(n + 1, L)}")
        xmat = xmat.copy()
    else:
        rng = np.random.default_rng(cfg.seed)
        xmat = rng.random((n + 1, L)) < q
    xmat[0] = False
    thresh = m ** (1.0 - b)
    heavy = np.zeros(n + 1, dtype=bool)
    for v in G.vertices:
        heavy[v] = G.degree(v) > thresh
    if cfg.init_mode == "direct":
        S, delta = _init_direct(G, xmat)
    elif cfg.init_mode == "matrix":
        S, delta = _init_matrix(G, xmat, heavy)
    else:
        raise ValidationError(f"unknown init_mode {cfg.init_mode!r}")
    return WitnessState(G, cfg, L, q, a, b, xmat, S, delta, heavy)


def _adjacency_bool(G: Graph) -> np.ndarray:
    A = np.zeros((G.n + 1, G.n + 1), dtype=bool)
    for v in G.vertices:
        nbrs = G.adj[v]
        if nbrs:
            A[v, list(nbrs)] = True
    return A


def _init_direct(G: Graph, xmat: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n, m, L = G.n, G.m, xmat.shape[1]
    S = np.zeros((m, L), dtype=np.int64)
    delta = np.zeros(m, dtype=np.int64)
    if m == 0:
        return S, delta
    A = _adjacency_bool(G)
    ids = np.arange(n + 1, dtype=np.float64)
    xf = xmat.astype(np.float64)
    us = np.fromiter((u for u, _ in G.edges), dtype=np.int64, count=m)
    vs = np.fromiter((v for _, v in G.edges), dtype=np.int64, count=m)
    for lo in range(0, m, _INIT_CHUNK):
        hi = min(lo + _INIT_CHUNK, m)
        common = A[us[lo:hi]] & A[vs[lo:hi]]  # per-edge neighborhood intersection
        delta[lo:hi] = common.sum(axis=1)
        S[lo:hi] = np.rint((common * ids) @ xf).astype(np.int64)
    return S, delta


def _init_matrix(
    G: Graph, xmat: np.ndarray, heavy: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    n, m, L = G.n, G.m, xmat.shape[1]
    S = np.zeros((m, L), dtype=np.int64)
    delta = np.zeros(m, dtype=np.int64)
    if m == 0:
        return S, delta
    sets = [np.flatnonzero(xmat[v]) for v in range(n + 1)]
    eid = G.edge_id
    # triangles with at least one light vertex: loop light vertices over
    # incident edge pairs, handling each triangle at its smallest light vertex
    for w in G.vertices:
        if heavy[w]:
            continue
        nbrs = G.adj[w]
        d = len(nbrs)
        for i in range(d):
            u = nbrs[i]
            if not heavy[u] and u < w:
                continue
            for j in range(i + 1, d):
                v = nbrs[j]
                if not heavy[v] and v < w:
                    continue
                e_uv = eid(u, v)
                if e_uv is None:
                    continue
                e_uw = eid(u, w)
                e_vw = eid(v, w)
                delta[e_uv] += 1
                delta[e_uw] += 1
                delta[e_vw] += 1
                S[e_uv, sets[w]] += w
                S[e_uw, sets[v]] += v
                S[e_vw, sets[u]] += u
    # heavy-only triangles via products on the heavy subgraph
    hv = np.flatnonzero(heavy)
    if hv.size:
        pos = {int(v): i for i, v in enumerate(hv)}
        Ah = _adjacency_bool(G)[np.ix_(hv, hv)].astype(np.float64)
        hh_edges = [
            e for e, (u, v) in enumerate(G.edges) if heavy[u] and heavy[v]
        ]
        if hh_edges:
            iu = np.array([pos[G.edges[e][0]] for e in hh_edges])
            iv = np.array([pos[G.edges[e][1]] for e in hh_edges])
            counts = Ah @ Ah.T
            delta[hh_edges] += np.rint(counts[iu, iv]).astype(np.int64)
            ids_h = hv.astype(np.float64)
            for ell in range(L):
                cols = np.flatnonzero(xmat[hv, ell])
                if cols.size == 0:
                    continue
                B = Ah[:, cols]
                Bw = B * ids_h[cols]  # weight columns by the witness id
                contrib = B @ Bw.T
                S[hh_edges, ell] += np.rint(contrib[iu, iv]).astype(np.int64)
    return S, delta


def enumerate_residual(state: WitnessState, e: int) -> EnumerationOutcome:
    """All residual triangles through residual edge e.

    The primary pass scans the witness row: any entry that is a valid
    vertex id and passes the residual-edge test for both endpoints is a
    confirmed witness. If the row does not account for every residual
    triangle, a full vertex scan recovers the exact set.
    """
    delta = state.delta
    if delta[e] == REMOVED:
        raise ValidationError(f"edge {e} already removed")
    G = state.G
    n = G.n
    u, v = G.edges[e]
    target = int(delta[e])
    state.enumeration_calls += 1
    state._tick += 1
    tick = state._tick
    stamp = state._stamp
    eid = G.edge_id
    witnesses: list[int] = []
    tested = 0
    if target > 0:
        for s in state.S[e].tolist():
            if s < 1 or s > n:
                continue
            tested += 1
            if stamp[s] == tick:
                continue
            stamp[s] = tick
            if s == u or s == v:
                continue
            f1 = eid(u, s)
            if f1 is None or delta[f1] == REMOVED:
                continue
            f2 = eid(v, s)
            if f2 is None or delta[f2] == REMOVED:
                continue
            witnesses.append(s)
            if len(witnesses) == target:
                break
    if len(witnesses) < target:
        state.fallback_calls += 1
        witnesses = []
        for w in range(1, n + 1):
            if w == u or w == v:
                continue
            f1 = eid(u, w)
            if f1 is None or delta[f1] == REMOVED:
                continue
            f2 = eid(v, w)
            if f2 is None or delta[f2] == REMOVED:
                continue
            witnesses.append(w)
        return EnumerationOutcome(witnesses, True, tested)
    return EnumerationOutcome(witnesses, False, tested)


def remove_edge(
    state: WitnessState, e: int, witnessed: EnumerationOutcome
) -> list[int]:
    """Remove edge e given its full residual triangle list.

    For every triangle (u, v, w) the two surviving edges lose one count,
    and the vanished endpoint's id is subtracted from their rows on the
    sets containing it. Returns the updated edge ids so the caller can
    re-examine their thresholds.
    """
    delta = state.delta
    if delta[e] == REMOVED:
        raise ValidationError(f"edge {e} removed twice")
    G = state.G
    u, v = G.edges[e]
    eid = G.edge_id
    S = state.S
    sets = state.sets
    delta[e] = REMOVED
    affected: list[int] = []
    for w in witnessed.witnesses:
        f_uw = eid(u, w)
        f_vw = eid(v, w)
        if f_uw is None or f_vw is None or delta[f_uw] == REMOVED or delta[f_vw] == REMOVED:
            raise ValidationError(
                f"witness list for edge {e} names non-residual triangle vertex {w}"
            )
        delta[f_uw] -= 1
        delta[f_vw] -= 1
        S[f_uw, sets[v]] -= v
        S[f_vw, sets[u]] -= u
        affected.append(f_uw)
        affected.append(f_vw)
    return affected


_EMPTY_OUTCOME = EnumerationOutcome([], False, 0)


def truncated_decomposition(G: Graph, cfg: WitnessConfig) -> TrussLabels:
    """Exact tau(e) for every edge with tau below k_trunc; the rest are
    labelled with the lower bound k_trunc.

    Rounds follow the same stack/scan-list discipline as the full peeler,
    stopping after round k_trunc. The randomness only affects how often
    the fallback scan runs, never the labels, so the output is
    seed-independent.
    """
    m = G.m
    k_trunc = cfg.k_trunc
    if k_trunc < 1:
        raise ValidationError("k_trunc must be positive")
    if m == 0:
        return TrussLabels([], [], k_trunc)
    state = init_witness(G, cfg)
    return _run_rounds(state)


def _run_rounds(state: WitnessState) -> TrussLabels:
    G = state.G
    m = G.m
    k_trunc = state.cfg.k_trunc
    delta = state.delta
    tau = [k_trunc] * m
    exact = [False] * m
    scan_list = list(range(m))
    stack: list[int] = []
    residual = m
    for k in range(1, k_trunc + 1):
        i = 0
        while i < len(scan_list):
            e = scan_list[i]
            de = delta[e]
            if de == REMOVED:
                scan_list[i] = scan_list[-1]
                scan_list.pop()
                continue
            if k == 1 and de == 0:
                remove_edge(state, e, _EMPTY_OUTCOME)
                tau[e] = 0
                exact[e] = True
                residual -= 1
                scan_list[i] = scan_list[-1]
                scan_list.pop()
                continue
            if de == k - 1:
                stack.append(e)
            i += 1
        while stack:
            e = stack.pop()
            outcome = enumerate_residual(state, e)
            affected = remove_edge(state, e, outcome)
            tau[e] = k - 1
            exact[e] = True
            residual -= 1
            for f in affected:
                if delta[f] == k - 1:
                    stack.append(f)
        if residual == 0:
            break
    return TrussLabels(tau, exact, k_trunc)


def instrumented_truncated_decomposition(
    G: Graph, cfg: WitnessConfig
) -> tuple[TrussLabels, WitnessState]:
    """Like truncated_decomposition but also returns the final state
    (enumeration/fallback counters, residual table) for benchmarks."""
    m = G.m
    if cfg.k_trunc < 1:
        raise ValidationError("k_trunc must be positive")
    if m == 0:
        raise ValidationError("instrumented run needs at least one edge")
    state = init_witness(G, cfg)
    labels = _run_rounds(state)
    return labels, state
