"""Witness-table structure: initialization, enumeration, dynamic updates."""

import random
from itertools import combinations

import numpy as np
import pytest

from trusskit import (
    ResourceLimitError,
    ValidationError,
    WitnessConfig,
    enumerate_residual,
    from_edges,
    gnp_random,
    init_witness,
    remove_edge,
    truncated_decomposition,
    truss_decomposition,
)
from trusskit.witness import _truncation_cap, instrumented_truncated_decomposition

from .oracles import residual_common_neighbors, scratch_witness_table


def complete(n):
    return from_edges(n, combinations(range(1, n + 1), 2))


def bowtie():
    return from_edges(5, [(1, 2), (1, 3), (2, 3), (3, 4), (3, 5), (4, 5)])


# -- configuration ------------------------------------------------------------


def test_k_trunc_above_cap_rejected():
    g = bowtie()  # m = 6, cap = ceil(sqrt(12)) = 4
    assert _truncation_cap(6) == 4
    with pytest.raises(ValidationError):
        init_witness(g, WitnessConfig(k_trunc=5))
    init_witness(g, WitnessConfig(k_trunc=4))


def test_memory_cap_refusal_mentions_sizes():
    g = complete(6)
    with pytest.raises(ResourceLimitError, match="cap"):
        init_witness(g, WitnessConfig(k_trunc=2, mem_cap_bytes=100))


def test_bad_probability_rejected():
    with pytest.raises(ValidationError):
        init_witness(complete(4), WitnessConfig(k_trunc=2, prob=0.0))


def test_b_outside_range_rejected():
    g = gnp_random(20, 0.5, seed=1)
    with pytest.raises(ValidationError):
        init_witness(g, WitnessConfig(k_trunc=4, b=0.05))


# -- initialization -----------------------------------------------------------


def test_triangle_free_tables_are_zero():
    star = from_edges(6, [(1, i) for i in range(2, 7)])
    state = init_witness(star, WitnessConfig(k_trunc=1, seed=9))
    assert not state.S.any()
    assert not state.delta.any()


def test_single_witness_row_is_the_id():
    g = complete(4)
    xmat = np.zeros((5, 1), dtype=bool)
    xmat[3, 0] = True  # X_1 = {3}
    state = init_witness(g, WitnessConfig(k_trunc=2, sets=1), _xmat=xmat)
    e = g.edge_id(1, 2)
    assert state.S[e, 0] == 3
    assert state.delta[e] == 2


@pytest.mark.parametrize("b", [0.5, 2 / 3, 0.9])
def test_matrix_init_equals_direct(b):
    for seed in range(20):
        g = gnp_random(30, 0.4, seed=seed)
        direct = init_witness(g, WitnessConfig(k_trunc=3, seed=seed, b=b))
        matrix = init_witness(
            g, WitnessConfig(k_trunc=3, seed=seed, b=b, init_mode="matrix")
        )
        assert np.array_equal(direct.S, matrix.S)
        assert np.array_equal(direct.delta, matrix.delta)


def test_delta_matches_common_neighbor_count():
    g = gnp_random(25, 0.4, seed=5)
    state = init_witness(g, WitnessConfig(k_trunc=3, seed=5))
    for e in range(g.m):
        assert state.delta[e] == len(residual_common_neighbors(state, e))


def test_zero_row_iff_no_witness_in_set():
    g = gnp_random(15, 0.5, seed=2)
    state = init_witness(g, WitnessConfig(k_trunc=2, seed=2))
    for e in range(g.m):
        common = residual_common_neighbors(state, e)
        for ell in range(state.L):
            has_member = any(state.xmat[w, ell] for w in common)
            assert (state.S[e, ell] == 0) == (not has_member)


# -- enumeration --------------------------------------------------------------


def test_enumerate_k5_finds_all():
    g = complete(5)
    state = init_witness(g, WitnessConfig(k_trunc=3, seed=4))
    e = g.edge_id(1, 2)
    out = enumerate_residual(state, e)
    assert sorted(out.witnesses) == [3, 4, 5]


def test_enumerate_zero_delta_no_fallback():
    star = from_edges(4, [(1, 2), (1, 3), (1, 4)])
    state = init_witness(star, WitnessConfig(k_trunc=1, seed=1))
    out = enumerate_residual(state, 0)
    assert out.witnesses == [] and not out.used_fallback


def test_enumerate_soundness_random():
    g = gnp_random(20, 0.5, seed=8)
    state = init_witness(g, WitnessConfig(k_trunc=4, seed=8))
    for e in range(g.m):
        out = enumerate_residual(state, e)
        assert sorted(out.witnesses) == residual_common_neighbors(state, e)


def test_adversarial_sum_rejected_then_fallback():
    # common neighbors {1, 2} of edge (4, 5); their id sum is 3, a real
    # vertex that is not a common neighbor, so the candidate must fail the
    # residual-edge test and trigger the fallback
    g = from_edges(5, [(1, 4), (1, 5), (2, 4), (2, 5), (4, 5), (3, 4)])
    xmat = np.zeros((6, 1), dtype=bool)
    xmat[1, 0] = xmat[2, 0] = True
    state = init_witness(g, WitnessConfig(k_trunc=2, sets=1), _xmat=xmat)
    e = g.edge_id(4, 5)
    assert state.S[e, 0] == 3
    out = enumerate_residual(state, e)
    assert out.used_fallback
    assert out.candidates_tested == 1
    assert sorted(out.witnesses) == [1, 2]
    assert 3 not in out.witnesses


def test_enumerate_removed_edge_rejected():
    g = complete(3)
    state = init_witness(g, WitnessConfig(k_trunc=1, seed=1))
    out = enumerate_residual(state, 0)
    remove_edge(state, 0, out)
    with pytest.raises(ValidationError):
        enumerate_residual(state, 0)


# -- removal ------------------------------------------------------------------


def test_remove_in_triangle_zeroes_others():
    g = complete(3)
    state = init_witness(g, WitnessConfig(k_trunc=1, seed=3))
    out = enumerate_residual(state, 0)
    remove_edge(state, 0, out)
    for e in (1, 2):
        assert state.delta[e] == 0
        assert not state.S[e].any()


def test_remove_in_k4_count_drops():
    g = complete(4)
    state = init_witness(g, WitnessConfig(k_trunc=2, seed=3))
    e = g.edge_id(1, 2)
    opposite = g.edge_id(3, 4)
    remove_edge(state, e, enumerate_residual(state, e))
    for f in range(g.m):
        if f == e:
            continue
        assert state.delta[f] == (2 if f == opposite else 1)


def test_double_removal_rejected():
    g = complete(3)
    state = init_witness(g, WitnessConfig(k_trunc=1, seed=1))
    out = enumerate_residual(state, 0)
    remove_edge(state, 0, out)
    with pytest.raises(ValidationError):
        remove_edge(state, 0, out)


def test_incremental_table_matches_scratch():
    for seed in range(20):
        g = gnp_random(20, 0.5, seed=seed)
        state = init_witness(g, WitnessConfig(k_trunc=3, seed=seed))
        order = list(range(g.m))
        random.Random(seed).shuffle(order)
        for step, e in enumerate(order):
            if state.delta[e] < 0:
                continue
            remove_edge(state, e, enumerate_residual(state, e))
            if step % 7 == 0:  # prefix checks, amortized
                ref = scratch_witness_table(state)
                resid = state.residual_edges()
                assert np.array_equal(state.S[resid], ref[resid])
        ref = scratch_witness_table(state)
        resid = state.residual_edges()
        assert np.array_equal(state.S[resid], ref[resid])


# -- truncated decomposition ---------------------------------------------------


def test_k5_truncated_all_lower_bound():
    labels = truncated_decomposition(complete(5), WitnessConfig(k_trunc=2))
    assert labels.tau == [2] * 10
    assert labels.exact == [False] * 10
    assert labels.truncated_at == 2


def test_bowtie_truncated_exact():
    labels = truncated_decomposition(bowtie(), WitnessConfig(k_trunc=3))
    assert labels.tau == [1] * 6
    assert labels.exact == [True] * 6


def test_truncated_matches_clamped_peeler():
    for seed in range(12):
        g = gnp_random(40, 0.3, seed=seed)
        full = truss_decomposition(g).tau
        for k_trunc in (1, 2, 3, 5):
            labels = truncated_decomposition(g, WitnessConfig(k_trunc=k_trunc, seed=seed))
            assert labels.tau == [min(t, k_trunc) for t in full]
            assert labels.exact == [t < k_trunc for t in full]


def test_labels_independent_of_seed_and_mode():
    g = gnp_random(30, 0.4, seed=99)
    base = truncated_decomposition(g, WitnessConfig(k_trunc=3, seed=0))
    for seed in (1, 2, 3):
        for mode in ("direct", "matrix"):
            lab = truncated_decomposition(
                g, WitnessConfig(k_trunc=3, seed=seed, init_mode=mode)
            )
            assert lab.tau == base.tau and lab.exact == base.exact


def test_instrumented_counts_calls():
    g = gnp_random(30, 0.4, seed=13)
    labels, state = instrumented_truncated_decomposition(
        g, WitnessConfig(k_trunc=3, seed=13)
    )
    removed = sum(labels.exact)
    zero_tau = sum(1 for t, ex in zip(labels.tau, labels.exact) if ex and t == 0)
    # every non-shortcut removal goes through one enumeration call
    assert state.enumeration_calls == removed - zero_tau
