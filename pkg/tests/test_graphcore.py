import itertools

import networkx as nx
import numpy as np
import pytest
from hypothesis import given

from netstab import (SystemPattern, bipartite_view, build_graph, hall_deficiency, hall_witness, matching_size,
                     max_matching, scc_decompose, term_rank)
from netstab import kernels
from netstab._jit import python_impl

from helpers import brute_hall_deficiency, nx_matching_size, nx_reachable, patterns, undirected_graph


def test_p11_graph(p11):
    g = build_graph(p11)
    assert g.reachable == {1, 2, 4, 5}
    assert g.unreachable == {3, 6, 7, 8, 9, 10, 11}
    assert scc_decompose(g, g.unreachable) == [frozenset({3, 6, 7}), frozenset({8, 9, 10, 11})]
    # x_j -> x_i whenever (i, j) is a star
    assert (2, 1) in g.state_edges and (1, 2) in g.state_edges
    assert g.input_edges == {(1, 1), (1, 4)}


def test_p11_matching(p11):
    view = bipartite_view(p11)
    assert term_rank(view) == 9
    assert matching_size(view, {1, 2, 4, 5}) == 3
    assert hall_deficiency(view, {1, 2, 4, 5}) == 1
    w = hall_witness(view, {1, 2, 4, 5})
    assert len(w) - len(view.neighborhood(w)) == 1
    assert w <= {1, 2, 4, 5}


def test_trivial_views():
    p = SystemPattern.from_edges(3)
    assert term_rank(bipartite_view(p)) == 0
    assert hall_deficiency(bipartite_view(p)) == 3
    assert scc_decompose(build_graph(p)) == [frozenset({1}), frozenset({2}), frozenset({3})]


def test_include_inputs_flag(p11):
    assert len(bipartite_view(p11).columns) == 12
    assert len(bipartite_view(p11, include_inputs=False).columns) == 11


@given(patterns(max_n=8, max_m=3))
def test_reachability_matches_networkx(p):
    g = build_graph(p)
    assert set(g.reachable) == nx_reachable(p)
    assert g.reachable | g.unreachable == set(range(1, p.n + 1))
    assert not g.reachable & g.unreachable


@given(patterns(max_n=8, max_m=2))
def test_scc_partition(p):
    g = build_graph(p)
    comps = scc_decompose(g)
    expected = sorted((frozenset(c) for c in nx.connected_components(undirected_graph(p))), key=min)
    assert comps == expected
    assert [min(c) for c in comps] == sorted(min(c) for c in comps)
    sub = scc_decompose(g, g.unreachable)
    assert set().union(*sub) == set(g.unreachable) if sub else not g.unreachable


@given(patterns(max_n=8, max_m=3))
def test_matching_valid_and_maximum(p):
    view = bipartite_view(p)
    mt = max_matching(view)
    cols = [c for c, _ in mt.pairs]
    rows = [r for _, r in mt.pairs]
    assert len(set(rows)) == len(rows) and len(set(cols)) == len(cols)
    for c, r in mt.pairs:
        assert view.columns.index(c) in view.row_adj[r - 1]
    assert len(mt) == nx_matching_size(p)


@given(patterns(max_n=7, max_m=2))
def test_hall_brute_force(p):
    view = bipartite_view(p)
    d = hall_deficiency(view)
    assert d == brute_hall_deficiency(p)
    w = hall_witness(view)
    assert len(w) - len(view.neighborhood(w)) == d
    g = build_graph(p)
    assert hall_deficiency(view, g.reachable) == brute_hall_deficiency(p, g.reachable)


def test_hall_deficiency_is_koenig(p11):
    view = bipartite_view(p11)
    for rows in [range(1, 12), [3, 6, 7], [1, 2, 4, 5]]:
        assert hall_deficiency(view, rows) == len(set(rows)) - matching_size(view, rows)


def test_hopcroft_karp_python_matches_jit():
    rng = np.random.default_rng(1)
    hk = python_impl(kernels.hopcroft_karp)
    for _ in range(30):
        n_rows, n_cols = rng.integers(1, 12, size=2)
        dense = rng.random((n_rows, n_cols)) < 0.3
        indptr = np.concatenate([[0], np.cumsum(dense.sum(axis=1))]).astype(np.int64)
        indices = np.nonzero(dense)[1].astype(np.int64)
        active = np.ones(n_rows, dtype=np.bool_)
        mr1, _ = kernels.hopcroft_karp(indptr, indices, n_cols, active)
        mr2, _ = hk(indptr, indices, n_cols, active)
        assert (mr1 >= 0).sum() == (mr2 >= 0).sum()
