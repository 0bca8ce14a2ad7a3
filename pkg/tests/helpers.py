"""Random instance generators and brute-force oracles shared by the tests.

The oracles deliberately avoid the library's own search code: they enumerate
subsets, or lean on networkx where a second implementation is enough.
"""

from __future__ import annotations

import itertools

import networkx as nx
import numpy as np
from hypothesis import strategies as st

from netstab import CandidatePattern, SystemPattern


def random_pattern(rng, n, m, edge_p=0.3, loop_p=0.3, b_p=0.2) -> SystemPattern:
    a = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1) if rng.random() < edge_p]
    a += [(i, i) for i in range(1, n + 1) if rng.random() < loop_p]
    b = [(i, j) for i in range(1, n + 1) for j in range(1, m + 1) if rng.random() < b_p]
    return SystemPattern.from_edges(n, a, b, m=m)


def random_candidates(rng, n, m_can, p=0.2) -> CandidatePattern:
    entries = {(i, j) for i in range(1, n + 1) for j in range(1, m_can + 1) if rng.random() < p}
    return CandidatePattern(m_can, frozenset(entries))


@st.composite
def patterns(draw, max_n=7, max_m=3, min_n=1):
    n = draw(st.integers(min_n, max_n))
    m = draw(st.integers(0, max_m))
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i, n + 1)]
    a = draw(st.sets(st.sampled_from(pairs))) if pairs else set()
    bpairs = [(i, j) for i in range(1, n + 1) for j in range(1, m + 1)]
    b = draw(st.sets(st.sampled_from(bpairs))) if bpairs else set()
    return SystemPattern.from_edges(n, sorted(a), sorted(b), m=m)


# ---------------------------------------------------------------------------
# brute-force oracles

def rows_and_columns(pattern: SystemPattern):
    """Row -> set of column labels ('x', j) / ('u', j) with a star in [A, B]."""
    adj = {i: set() for i in range(1, pattern.n + 1)}
    for i, j in pattern.a_entries:
        adj[i].add(("x", j))
    for i, j in pattern.b_entries:
        adj[i].add(("u", j))
    return adj


def nx_matching_size(pattern: SystemPattern, rows=None) -> int:
    adj = rows_and_columns(pattern)
    rows = set(adj) if rows is None else set(rows)
    g = nx.Graph()
    g.add_nodes_from((("r", i) for i in rows))
    for i in rows:
        for c in adj[i]:
            g.add_edge(("r", i), c)
    top = [("r", i) for i in rows]
    return len(nx.bipartite.maximum_matching(g, top_nodes=top)) // 2


def brute_hall_deficiency(pattern: SystemPattern, rows=None) -> int:
    adj = rows_and_columns(pattern)
    rows = sorted(adj if rows is None else rows)
    best = 0
    for r in range(1, len(rows) + 1):
        for s in itertools.combinations(rows, r):
            nb = set().union(*(adj[i] for i in s))
            best = max(best, len(s) - len(nb))
    return best


def undirected_graph(pattern: SystemPattern, vertices=None) -> nx.Graph:
    vs = set(range(1, pattern.n + 1)) if vertices is None else set(vertices)
    g = nx.Graph()
    g.add_nodes_from(vs)
    for i, j in pattern.a_entries:
        if i in vs and j in vs:
            g.add_edge(i, j)
    return g


def nx_reachable(pattern: SystemPattern) -> set:
    out = set()
    for i, _ in pattern.b_entries:
        out |= nx.node_connected_component(undirected_graph(pattern), i)
    return out


def brute_independent_set(pattern: SystemPattern, vertices) -> int:
    """Largest vertex set with no internal edge, self-loops included."""
    vs = sorted(v for v in vertices if (v, v) not in pattern.a_entries)
    for r in range(len(vs), 0, -1):
        for s in itertools.combinations(vs, r):
            if all((i, j) not in pattern.a_entries for i, j in itertools.combinations(s, 2)):
                return r
    return 0


def simple_cycles(pattern: SystemPattern, vertices):
    """Every loop, edge and simple cycle of length >= 3 as a vertex frozenset."""
    vs = set(vertices)
    out = {frozenset([v]) for v in vs if (v, v) in pattern.a_entries}
    g = undirected_graph(pattern, vs)
    g.remove_edges_from(nx.selfloop_edges(g))
    out |= {frozenset(e) for e in g.edges}
    out |= {frozenset(c) for c in nx.simple_cycles(g) if len(c) >= 3}
    return sorted(out, key=lambda c: (len(c), sorted(c)))


def brute_packing_value(pattern: SystemPattern, vertices) -> int:
    cycles = simple_cycles(pattern, vertices)

    def best(idx, used):
        if idx == len(cycles):
            return 0
        skip = best(idx + 1, used)
        c = cycles[idx]
        if c & used:
            return skip
        return max(skip, (len(c) + 1) // 2 + best(idx + 1, used | c))

    return best(0, frozenset())


def is_cycle(pattern: SystemPattern, cyc) -> bool:
    """``cyc`` lists the vertices of a loop, an edge or a closed walk without repeats."""
    if len(cyc) == 1:
        return (cyc[0], cyc[0]) in pattern.a_entries
    if len(set(cyc)) != len(cyc):
        return False
    if len(cyc) == 2:
        return (cyc[0], cyc[1]) in pattern.a_entries
    return all((cyc[k], cyc[(k + 1) % len(cyc)]) in pattern.a_entries for k in range(len(cyc)))


def rng(seed):
    return np.random.default_rng(seed)
