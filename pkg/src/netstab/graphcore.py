"""Graph constructions over a system pattern.

* the system digraph: state edge x_j -> x_i for every star (i, j) of A and
  input edge u_j -> x_i for every star (i, j) of B, with input reachability;
* the system bipartite graph: columns (states and inputs) on one side, state
  rows on the other, an edge wherever the concatenated matrix [A, B] has a
  star.  Maximum matchings on it give term ranks and Hall deficiencies.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

from . import kernels
from .pattern import SystemPattern


@dataclass(frozen=True)
class SystemGraph:
    pattern: SystemPattern
    reachable: frozenset
    unreachable: frozenset

    @property
    def n(self) -> int:
        return self.pattern.n

    @property
    def m(self) -> int:
        return self.pattern.m

    @cached_property
    def state_edges(self) -> frozenset:
        """Directed pairs (x_j, x_i) as ``(j, i)``."""
        return frozenset((j, i) for i, j in self.pattern.a_entries)

    @cached_property
    def input_edges(self) -> frozenset:
        """Directed pairs (u_j, x_i) as ``(j, i)``."""
        return frozenset((j, i) for i, j in self.pattern.b_entries)

    def neighbors(self, i: int) -> frozenset:
        return self.pattern.state_neighbors[i]

    def has_loop(self, i: int) -> bool:
        return i in self.pattern.self_loops


def build_graph(pattern: SystemPattern) -> SystemGraph:
    """System digraph with the input-reachable states found by graph search."""
    nbrs = pattern.state_neighbors
    seen = set()
    stack = []
    for j in range(1, pattern.m + 1):
        for i in pattern.input_targets[j]:
            if i not in seen:
                seen.add(i)
                stack.append(i)
    while stack:
        v = stack.pop()
        for w in nbrs[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    reachable = frozenset(seen)
    return SystemGraph(pattern, reachable, frozenset(range(1, pattern.n + 1)) - reachable)


def scc_decompose(graph: SystemGraph, restrict: Iterable[int] | None = None) -> list:
    """Strongly connected components of the state digraph induced on ``restrict``.

    Tarjan's algorithm, iterative.  Components are returned as frozensets in
    ascending order of their smallest member.
    """
    verts = sorted(range(1, graph.n + 1) if restrict is None else set(restrict))
    inside = set(verts)
    # out-neighbours: x_j -> x_i whenever (i, j) is a star, i.e. j's neighbours
    succ = {v: sorted(w for w in graph.pattern.state_neighbors[v] if w in inside) for v in verts}
    index = {}
    low = {}
    on_stack = set()
    stack = []
    comps = []
    counter = 0
    for root in verts:
        if root in index:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, k = work[-1]
            out = succ[v]
            if k < len(out):
                work[-1] = (v, k + 1)
                w = out[k]
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, 0))
                elif w in on_stack:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == v:
                        break
                comps.append(frozenset(comp))
    comps.sort(key=min)
    return comps


# ---------------------------------------------------------------------------
# Bipartite graph

@dataclass(frozen=True)
class BipartiteView:
    """Rows are states 1..n; ``columns`` are labels ``("x", i)`` / ``("u", j)``.

    ``row_adj[r - 1]`` lists the (0-based) column positions with a star in row r.
    """

    n_rows: int
    columns: tuple
    row_adj: tuple

    @cached_property
    def csr(self):
        indptr = np.zeros(self.n_rows + 1, dtype=np.int64)
        for r, cols in enumerate(self.row_adj):
            indptr[r + 1] = indptr[r] + len(cols)
        indices = np.fromiter((c for cols in self.row_adj for c in cols), dtype=np.int64,
                              count=int(indptr[-1]))
        return indptr, indices

    @cached_property
    def edges(self) -> frozenset:
        return frozenset((self.columns[c], r + 1) for r, cols in enumerate(self.row_adj) for c in cols)

    def neighborhood(self, rows: Iterable[int]) -> frozenset:
        """Columns adjacent to any of ``rows``."""
        return frozenset(self.columns[c] for r in rows for c in self.row_adj[r - 1])


def bipartite_view(pattern: SystemPattern, include_inputs: bool = True) -> BipartiteView:
    """System bipartite graph of [A, B] (or of A alone)."""
    n = pattern.n
    columns = [("x", i) for i in range(1, n + 1)]
    if include_inputs:
        columns += [("u", j) for j in range(1, pattern.m + 1)]
    adj = [[] for _ in range(n)]
    for i, j in pattern.a_entries:
        adj[i - 1].append(j - 1)
    if include_inputs:
        for i, j in pattern.b_entries:
            adj[i - 1].append(n + j - 1)
    return BipartiteView(n, tuple(columns), tuple(tuple(sorted(a)) for a in adj))


@dataclass(frozen=True)
class Matching:
    """Matched (column, row) pairs."""

    pairs: frozenset

    def __len__(self) -> int:
        return len(self.pairs)

    @property
    def rows(self) -> frozenset:
        return frozenset(r for _, r in self.pairs)

    @property
    def cols(self) -> frozenset:
        return frozenset(c for c, _ in self.pairs)


def _row_mask(view: BipartiteView, rows) -> np.ndarray:
    mask = np.zeros(view.n_rows, dtype=np.bool_)
    if rows is None:
        mask[:] = True
    else:
        for r in rows:
            if not 1 <= r <= view.n_rows:
                raise ValueError(f"row {r} out of range 1..{view.n_rows}")
            mask[r - 1] = True
    return mask


def _match(view: BipartiteView, rows):
    indptr, indices = view.csr
    mask = _row_mask(view, rows)
    match_row, match_col = kernels.hopcroft_karp(indptr, indices, len(view.columns), mask)
    return mask, match_row, match_col


def max_matching(view: BipartiteView, row_restrict: Iterable[int] | None = None) -> Matching:
    """Maximum matching (Hopcroft-Karp) using only rows in ``row_restrict``."""
    _, match_row, _ = _match(view, row_restrict)
    pairs = frozenset((view.columns[c], r + 1) for r, c in enumerate(match_row) if c >= 0)
    return Matching(pairs)


def matching_size(view: BipartiteView, row_restrict: Iterable[int] | None = None) -> int:
    _, match_row, _ = _match(view, row_restrict)
    return int(np.count_nonzero(match_row >= 0))


def term_rank(view: BipartiteView) -> int:
    """Term rank of the structured matrix behind ``view``."""
    return matching_size(view)


def hall_deficiency(view: BipartiteView, rows: Iterable[int] | None = None) -> int:
    """max over S within ``rows`` of |S| - |N(S)|, by Konig duality (0 if Hall holds)."""
    mask, match_row, _ = _match(view, rows)
    return int(np.count_nonzero(mask & (match_row < 0)))


def hall_witness(view: BipartiteView, rows: Iterable[int] | None = None) -> frozenset:
    """A row set S attaining the Hall deficiency (empty when Hall holds).

    S is everything reachable from the unmatched rows by alternating paths;
    its neighbourhood is exactly the columns met on the way, all matched.
    """
    mask, match_row, match_col = _match(view, rows)
    start = [r for r in range(view.n_rows) if mask[r] and match_row[r] < 0]
    seen = set(start)
    queue = deque(start)
    while queue:
        r = queue.popleft()
        for c in view.row_adj[r]:
            r2 = int(match_col[c])
            if r2 >= 0 and r2 not in seen:
                seen.add(r2)
                queue.append(r2)
    return frozenset(r + 1 for r in seen)
