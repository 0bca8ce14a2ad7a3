"""Actuator-disabling attacks: remove at most k inputs to minimise m-dim.

Three routes are provided:

* :func:`attack_exact` enumerates every removal set;
* under the Hall condition on A alone, :func:`build_min_k_union_instance`
  turns the attack into a Min-k-Union instance, m-dim(A, B(J)) being an
  affine function of the union of per-input sets, solved by
  :func:`solve_min_k_union` (:func:`attack_via_reduction`);
* :func:`reduce_min_k_union_to_attack` goes the other way and embeds any
  Min-k-Union instance into an attack instance built from disjoint 2-cycles.
"""

from __future__ import annotations

import itertools
import json
import logging
from dataclasses import dataclass
from math import comb

from .analyze import ESTIMATORS, autonomous_bound, mdim_bounds
from .errors import AssumptionError, PatternError, SearchLimitError
from .graphcore import bipartite_view, build_graph, hall_deficiency, hall_witness, scc_decompose
from .pattern import SystemPattern, select_columns

log = logging.getLogger(__name__)

MAX_ENUMERATION = 2_000_000


@dataclass(frozen=True)
class SetSystem:
    """Sets over the universe ``1..universe_size``, listed in input order."""

    universe_size: int
    sets: tuple
    base_value: int = 0
    approximate: bool = False

    def __post_init__(self):
        for k, s in enumerate(self.sets, start=1):
            for e in s:
                if not 1 <= e <= self.universe_size:
                    raise PatternError(f"set {k}: element {e} outside universe 1..{self.universe_size}")

    def union_size(self, chosen) -> int:
        out = set()
        for j in chosen:
            out |= self.sets[j - 1]
        return len(out)

    def to_dict(self) -> dict:
        return {"universe": self.universe_size, "sets": [sorted(s) for s in self.sets]}


@dataclass(frozen=True)
class AttackResult:
    removed: frozenset
    objective: int
    estimator: str
    method: str
    budget: int
    approximate: bool = False
    clamped: bool = False


def parse_set_system(text) -> SetSystem:
    """Parse ``{"universe": int, "sets": [[...], ...]}``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PatternError(f"malformed JSON: {exc}") from None
    if not isinstance(doc, dict) or "universe" not in doc or "sets" not in doc:
        raise PatternError("set-system document needs keys 'universe' and 'sets'")
    universe = doc["universe"]
    if isinstance(universe, bool) or not isinstance(universe, int) or universe < 0:
        raise PatternError(f"universe must be a non-negative integer, got {universe!r}")
    if not isinstance(doc["sets"], list):
        raise PatternError("'sets' must be a list of lists")
    sets = []
    for k, raw in enumerate(doc["sets"], start=1):
        if not isinstance(raw, list) or not all(isinstance(e, int) and not isinstance(e, bool) for e in raw):
            raise PatternError(f"set {k}: expected a list of integers, got {raw!r}")
        if len(set(raw)) != len(raw):
            raise PatternError(f"set {k}: duplicate element")
        sets.append(frozenset(raw))
    return SetSystem(universe, tuple(sets))


def _clamp(budget, m):
    if budget < 0:
        raise ValueError("budget must be non-negative")
    if budget > m:
        log.warning("budget %d exceeds %d available columns; clamped", budget, m)
        return m, True
    return budget, False


def _subsets_upto(m, k):
    """All subsets of 1..m with at most k elements, in sorted-tuple order."""
    subs = [c for r in range(k + 1) for c in itertools.combinations(range(1, m + 1), r)]
    subs.sort()
    return subs


def attack_exact(pattern: SystemPattern, budget: int, estimator: str = "lower",
                 limit: int | None = None, on_limit: str = "heuristic",
                 max_enumeration: int = MAX_ENUMERATION) -> AttackResult:
    """Globally optimal removal set by enumeration over all |J| <= budget.

    Ties go to the lexicographically smallest J.  ``estimator`` picks which end
    of each m-dim interval is minimised; the result is ``approximate`` whenever
    some evaluated interval was not tight.
    """
    if estimator not in ESTIMATORS:
        raise ValueError(f"unknown estimator {estimator!r}")
    k, clamped = _clamp(budget, pattern.m)
    count = sum(comb(pattern.m, r) for r in range(k + 1))
    if count > max_enumeration:
        raise SearchLimitError(f"{count} removal sets exceed the enumeration limit {max_enumeration}")
    omega = range(1, pattern.m + 1)
    best = None
    approx = False
    for removed in _subsets_upto(pattern.m, k):
        kept = [j for j in omega if j not in removed]
        est = mdim_bounds(select_columns(pattern, kept), limit, on_limit)
        approx |= not est.exact or not est.search_exact
        val = est.value(estimator)
        if best is None or val < best[0]:
            best = (val, removed)
    return AttackResult(frozenset(best[1]), best[0], estimator, "exact", budget, approx, clamped)


def check_assumption(pattern: SystemPattern) -> None:
    """Raise :class:`AssumptionError` unless |N(S)| >= |S| for every state set S in D(A)."""
    view = bipartite_view(pattern, include_inputs=False)
    if hall_deficiency(view):
        witness = hall_witness(view)
        raise AssumptionError(
            f"Hall condition fails on the state graph: S={sorted(witness)} "
            f"has |N(S)|={len(view.neighborhood(witness))} < |S|={len(witness)}", witness)


def build_min_k_union_instance(pattern: SystemPattern, estimator: str = "lower",
                               limit: int | None = None, on_limit: str = "heuristic") -> SetSystem:
    """Min-k-Union sets with m-dim(A, B(J)) = base_value + |union of S_j, j in J|.

    Each strongly connected component D_i of D(A), in canonical order, owns
    a block R_i of |D_i| - m-dim(A_Di, 0) consecutive universe elements; S_j
    collects the blocks of components that input j drives.
    """
    if estimator not in ESTIMATORS:
        raise ValueError(f"unknown estimator {estimator!r}")
    check_assumption(pattern)
    graph = build_graph(pattern)
    comps = scc_decompose(graph)
    comp_of = {v: idx for idx, c in enumerate(comps) for v in c}
    blocks = []
    base = 0
    offset = 0
    approx = False
    for c in comps:
        bound = autonomous_bound(pattern, c, limit, on_limit)
        approx |= not bound.tight or not bound.exact_search
        auto = bound.upper if estimator == "upper" else bound.lower
        base += auto
        size = len(c) - auto
        blocks.append(frozenset(range(offset + 1, offset + size + 1)))
        offset += size
    sets = []
    for j in range(1, pattern.m + 1):
        touched = {comp_of[i] for i in pattern.input_targets[j]}
        sets.append(frozenset().union(*(blocks[t] for t in touched)))
    return SetSystem(offset, tuple(sets), base, approx)


def solve_min_k_union(system: SetSystem, keep: int, mode: str = "exact") -> tuple:
    """Choose ``keep`` sets with the smallest union (1-based indices, sorted).

    ``exact`` enumerates every selection (ties: lexicographically smallest);
    ``heuristic`` repeatedly adds the set of least union growth and carries
    no quality guarantee.
    """
    p = len(system.sets)
    if not 0 <= keep <= p:
        raise ValueError(f"keep must be in 0..{p}, got {keep}")
    if mode == "exact":
        best = None
        for chosen in itertools.combinations(range(1, p + 1), keep):
            size = system.union_size(chosen)
            if best is None or size < best[0]:
                best = (size, chosen)
        return best[1]
    if mode == "heuristic":
        chosen = []
        union = set()
        left = list(range(1, p + 1))
        for _ in range(keep):
            j = min(left, key=lambda t: (len(system.sets[t - 1] - union), t))
            chosen.append(j)
            union |= system.sets[j - 1]
            left.remove(j)
        return tuple(sorted(chosen))
    raise ValueError(f"unknown mode {mode!r}")


def attack_via_reduction(pattern: SystemPattern, budget: int, estimator: str = "lower",
                         mode: str = "exact", limit: int | None = None,
                         on_limit: str = "heuristic") -> AttackResult:
    """Attack by keeping the m - budget inputs whose sets have the smallest union."""
    k, clamped = _clamp(budget, pattern.m)
    system = build_min_k_union_instance(pattern, estimator, limit, on_limit)
    kept = solve_min_k_union(system, pattern.m - k, mode)
    removed = frozenset(range(1, pattern.m + 1)) - set(kept)
    objective = system.base_value + system.union_size(kept)
    return AttackResult(removed, objective, estimator, "reduction", budget,
                        system.approximate or mode != "exact", clamped)


def reduce_min_k_union_to_attack(system: SetSystem, keep: int):
    """Attack instance whose optimal removal set complements an optimal k-selection.

    The universe {1..N} becomes N disjoint 2-cycles x_e -- x_{e+N}; input j
    drives x_e for each e in S_j.  Returns ``(pattern, budget)`` with
    budget = p - keep.
    """
    p = len(system.sets)
    if not 0 <= keep <= p:
        raise ValueError(f"keep must be in 0..{p}, got {keep}")
    n = system.universe_size
    a_edges = [(e, e + n) for e in range(1, n + 1)]
    b_edges = [(e, j) for j, s in enumerate(system.sets, start=1) for e in sorted(s)]
    if n == 0:
        # a pattern needs at least one state; a lone state with no edges adds nothing
        pattern = SystemPattern.from_edges(1, [], [], m=p)
    else:
        pattern = SystemPattern.from_edges(2 * n, a_edges, b_edges, m=p)
    return pattern, p - keep


def min_k_union_via_attack(system: SetSystem, keep: int, estimator: str = "lower") -> tuple:
    """Solve Min-k-Union through the gadget: exact attack, then complement.

    The attack may remove fewer inputs than allowed when extra removals do
    not help; the complement is then trimmed from the top, which cannot grow
    the union.
    """
    pattern, budget = reduce_min_k_union_to_attack(system, keep)
    result = attack_exact(pattern, budget, estimator)
    kept = [j for j in range(1, len(system.sets) + 1) if j not in result.removed]
    return tuple(kept[:keep])
