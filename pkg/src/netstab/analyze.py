"""Structural stabilizability and bounds on the stabilizable-subspace dimension.

For a pattern split into input-reachable states X_r and unreachable states
X_u (no edges run between the two, A being symmetric):

* the pair is structurally stabilizable iff every unreachable state carries a
  self-loop and the reachable rows satisfy Hall's condition in the system
  bipartite graph;
* the largest stabilizable dimension over all realizations ("m-dim") equals
  t-rank([A11, B1]) on the reachable block plus the largest number of negative
  eigenvalues of any realization of the unreachable block A22.  That second
  term is bracketed below by vertex-disjoint cycles (an odd cycle of length L
  is worth (L+1)/2, an even one L/2) and above, by eigenvalue interlacing, by
  |X_u| minus the size of an independent set without self-loops.

The two NP-hard witness searches run per connected component of X_u, exactly
up to a vertex limit and greedily above it.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from . import kernels
from .errors import SearchLimitError
from .graphcore import (SystemGraph, bipartite_view, build_graph, hall_deficiency, hall_witness,
                        matching_size, scc_decompose)
from .pattern import SystemPattern

IS_EXACT_LIMIT = 24
PACKING_EXACT_LIMIT = 18
_BITMASK_CAP = 62

ESTIMATORS = ("lower", "upper", "exact")


def exact_limits(limit: int | None = None) -> tuple:
    """(independent-set limit, cycle-packing limit); ``NETSTAB_EXACT_LIMIT`` overrides both."""
    if limit is None:
        env = os.environ.get("NETSTAB_EXACT_LIMIT", "").strip()
        if env:
            limit = int(env)
    if limit is None:
        return IS_EXACT_LIMIT, PACKING_EXACT_LIMIT
    return limit, limit


@dataclass(frozen=True)
class StabilizabilityVerdict:
    stabilizable: bool
    missing_selfloops: frozenset
    hall_deficiency: int
    deficient_witness: frozenset | None


@dataclass(frozen=True)
class IndependentSet:
    vertices: frozenset
    exact: bool


@dataclass(frozen=True)
class CyclePacking:
    """Vertex-disjoint cycles, each a vertex tuple in traversal order.

    A 1-tuple is a self-loop and a 2-tuple an undirected edge.
    """

    value: int
    cycles: tuple
    exact: bool


@dataclass(frozen=True)
class ComponentBound:
    """Bounds on the negative-eigenvalue count of one autonomous block."""

    vertices: frozenset
    lower: int
    upper: int
    trank: int
    cycles: tuple
    independent_set: frozenset
    exact_search: bool

    @property
    def tight(self) -> bool:
        return self.lower == self.upper


@dataclass(frozen=True)
class MdimEstimate:
    lower: int
    upper: int
    reachable_trank: int
    cycle_packing: tuple
    independent_set: frozenset
    components: tuple
    search_exact: bool

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    def value(self, estimator: str = "lower") -> int:
        if estimator not in ESTIMATORS:
            raise ValueError(f"unknown estimator {estimator!r}")
        return self.upper if estimator == "upper" else self.lower


def cycle_value(cycle) -> int:
    """Contribution of one cycle to the packing bound: ceil(len / 2)."""
    return (len(cycle) + 1) // 2


# ---------------------------------------------------------------------------
# Stabilizability and controllability

def check_stabilizable(pattern: SystemPattern) -> StabilizabilityVerdict:
    graph = build_graph(pattern)
    missing = frozenset(i for i in graph.unreachable if i not in pattern.self_loops)
    view = bipartite_view(pattern)
    deficiency = hall_deficiency(view, graph.reachable)
    witness = hall_witness(view, graph.reachable) if deficiency else None
    return StabilizabilityVerdict(not missing and deficiency == 0, missing, deficiency, witness)


def is_structurally_controllable(pattern: SystemPattern) -> bool:
    graph = build_graph(pattern)
    if graph.unreachable:
        return False
    return hall_deficiency(bipartite_view(pattern)) == 0


def generic_controllable_dim(pattern: SystemPattern) -> int:
    """Term rank of [A11, B1] over the input-reachable rows."""
    graph = build_graph(pattern)
    if not graph.reachable:
        return 0
    return matching_size(bipartite_view(pattern), graph.reachable)


# ---------------------------------------------------------------------------
# Per-component searches on a relabelled local graph

def _local(pattern: SystemPattern, vertices: Iterable[int]):
    verts = sorted(vertices)
    pos = {v: k for k, v in enumerate(verts)}
    edges = tuple(sorted((pos[i], pos[j]) for i, j in pattern.a_entries
                         if i < j and i in pos and j in pos))
    loops = tuple(sorted(pos[i] for i in pattern.self_loops if i in pos))
    return verts, len(verts), edges, loops


def _adjacency(k, edges):
    nbrs = [[] for _ in range(k)]
    for a, b in edges:
        nbrs[a].append(b)
        nbrs[b].append(a)
    return [sorted(x) for x in nbrs]


def _greedy_independent(k, edges, loops):
    nbrs = [set(x) for x in _adjacency(k, edges)]
    cand = set(range(k)) - set(loops)
    chosen = []
    while cand:
        v = min(cand, key=lambda x: (len(nbrs[x] & cand), x))
        chosen.append(v)
        cand -= nbrs[v] | {v}
    return tuple(sorted(chosen))


@lru_cache(maxsize=8192)
def _independent_local(k, edges, loops, limit, on_limit):
    if k > min(limit, _BITMASK_CAP):
        if on_limit == "raise":
            raise SearchLimitError(f"independent-set search on {k} vertices exceeds exact limit {limit}")
        return _greedy_independent(k, edges, loops), False
    adj = np.zeros(k, dtype=np.int64)
    for a, b in edges:
        adj[a] |= np.int64(1) << np.int64(b)
        adj[b] |= np.int64(1) << np.int64(a)
    allowed = 0
    for v in range(k):
        if v not in loops:
            allowed |= 1 << v
    best = int(kernels.max_independent_bitmask(adj, np.int64(allowed)))
    return tuple(v for v in range(k) if best >> v & 1), True


def _exact_packing(k, edges, loops):
    nbrs = _adjacency(k, edges)
    loopset = set(loops)
    memo = {}

    def odd_cycles(v, mask):
        # simple cycles through v (v is the lowest vertex of mask), odd length >= 3,
        # each listed once via path[1] < path[-1]
        path = [v]
        used = 1 << v

        def extend(u):
            nonlocal used
            for w in nbrs[u]:
                if not (mask >> w) & 1 or (used >> w) & 1:
                    continue
                path.append(w)
                used |= 1 << w
                if len(path) >= 3 and len(path) % 2 == 1 and v in nbrs[w] and path[1] < w:
                    yield tuple(path)
                yield from extend(w)
                used &= ~(1 << w)
                path.pop()

        yield from extend(v)

    def best(mask):
        if mask == 0:
            return 0, ()
        hit = memo.get(mask)
        if hit is not None:
            return hit
        v = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << v)
        skip = best(rest)
        bound = skip[0] + 1
        top = None

        def options():
            if v in loopset:
                yield (v,), rest
            for u in nbrs[v]:
                if (rest >> u) & 1:
                    yield (v, u), rest & ~(1 << u)
            for cyc in odd_cycles(v, mask):
                left = mask
                for w in cyc:
                    left &= ~(1 << w)
                yield cyc, left

        for cyc, left in options():
            sub = best(left)
            val = cycle_value(cyc) + sub[0]
            if top is None or val > top[0]:
                top = (val, (cyc,) + sub[1])
                if val == bound:
                    break
        if top is None or skip[0] > top[0]:
            top = skip
        memo[mask] = top
        return top

    return best((1 << k) - 1)


def _greedy_packing(k, edges, loops):
    import networkx as nx

    nbrs = [set(x) for x in _adjacency(k, edges)]
    cycles = [(v,) for v in sorted(loops)]
    free = set(range(k)) - set(loops)
    g = nx.Graph()
    g.add_nodes_from(sorted(free))
    g.add_edges_from((a, b) for a, b in edges if a in free and b in free)
    matching = sorted(tuple(sorted(e)) for e in nx.max_weight_matching(g, maxcardinality=True))
    used = {v for e in matching for v in e}
    pairs = []
    for a, b in matching:
        partner = next((w for w in sorted(free - used) if a in nbrs[w] and b in nbrs[w]), None)
        if partner is not None:
            used.add(partner)
            pairs.append((a, b, partner))
        else:
            pairs.append((a, b))
    return sum(cycle_value(c) for c in cycles + pairs), tuple(cycles + pairs)


@lru_cache(maxsize=8192)
def _packing_local(k, edges, loops, limit, on_limit):
    if k > limit:
        if on_limit == "raise":
            raise SearchLimitError(f"cycle-packing search on {k} vertices exceeds exact limit {limit}")
        value, cycles = _greedy_packing(k, edges, loops)
        return value, cycles, False
    value, cycles = _exact_packing(k, edges, loops)
    return value, cycles, True


def _components(graph: SystemGraph, restrict) -> list:
    return scc_decompose(graph, restrict)


def max_independent_set(graph: SystemGraph, restrict: Iterable[int] | None = None,
                        limit: int | None = None, on_limit: str = "heuristic") -> IndependentSet:
    """Largest vertex set in ``restrict`` with no self-loops and no internal edge.

    Exact (branch and bound) per connected component up to ``limit`` vertices;
    larger components use a minimum-degree greedy pass and ``exact=False``.
    Among maximum sets the lexicographically smallest is returned.
    """
    is_limit, _ = exact_limits(limit)
    restrict = range(1, graph.n + 1) if restrict is None else restrict
    chosen = set()
    exact = True
    for comp in _components(graph, restrict):
        verts, k, edges, loops = _local(graph.pattern, comp)
        local, ok = _independent_local(k, edges, loops, is_limit, on_limit)
        chosen.update(verts[v] for v in local)
        exact &= ok
    return IndependentSet(frozenset(chosen), exact)


def max_cycle_packing(graph: SystemGraph, restrict: Iterable[int] | None = None,
                      limit: int | None = None, on_limit: str = "heuristic") -> CyclePacking:
    """Vertex-disjoint cycles maximising the sum of ceil(|C| / 2).

    Self-loops count as length-1 cycles and undirected edges as 2-cycles.
    Longer even cycles are never needed (an edge matching of the cycle scores
    the same), so the exact search only builds loops, edges and odd cycles.
    """
    _, pk_limit = exact_limits(limit)
    restrict = range(1, graph.n + 1) if restrict is None else restrict
    total = 0
    cycles = []
    exact = True
    for comp in _components(graph, restrict):
        verts, k, edges, loops = _local(graph.pattern, comp)
        value, local, ok = _packing_local(k, edges, loops, pk_limit, on_limit)
        total += value
        cycles.extend(tuple(verts[v] for v in c) for c in local)
        exact &= ok
    return CyclePacking(total, tuple(cycles), exact)


def autonomous_bound(pattern: SystemPattern, vertices: Iterable[int],
                     limit: int | None = None, on_limit: str = "heuristic") -> ComponentBound:
    """Bounds on max #negative eigenvalues of A restricted to ``vertices`` (inputs ignored)."""
    vertices = frozenset(vertices)
    graph = build_graph(SystemPattern(pattern.n, 0, pattern.a_entries, frozenset()))
    packing = max_cycle_packing(graph, vertices, limit, on_limit)
    indep = max_independent_set(graph, vertices, limit, on_limit)
    trank = matching_size(bipartite_view(pattern, include_inputs=False), vertices) if vertices else 0
    return ComponentBound(vertices, packing.value, len(vertices) - len(indep.vertices), trank,
                          packing.cycles, indep.vertices, packing.exact and indep.exact)


def mdim_bounds(pattern: SystemPattern, limit: int | None = None,
                on_limit: str = "heuristic") -> MdimEstimate:
    """Certified interval for the maximum stabilizable-subspace dimension."""
    graph = build_graph(pattern)
    reach_trank = matching_size(bipartite_view(pattern), graph.reachable) if graph.reachable else 0
    comps = tuple(autonomous_bound(pattern, c, limit, on_limit)
                  for c in scc_decompose(graph, graph.unreachable))
    lower = reach_trank + sum(c.lower for c in comps)
    upper = reach_trank + sum(c.upper for c in comps)
    cycles = tuple(cyc for c in comps for cyc in c.cycles)
    indep = frozenset().union(*(c.independent_set for c in comps))
    return MdimEstimate(lower, upper, reach_trank, cycles, indep, comps,
                        all(c.exact_search for c in comps))
