"""Actuator recovery: add at most k candidate inputs to maximise m-dim.

The objective is evaluated through its decomposition

    f(J) = m-dim(A, B) + |union of S_j, j in J| + q(J)

where S_j gathers, for every input-unreachable component D_i that candidate
j drives, a private block of t-rank(A_Di) - m-dim(A_Di, 0) elements, and
q(J) is the number of extra rows matched in the system bipartite graph once
the candidate columns J are appended.  Coverage and matching rank are both
monotone submodular, hence so is f and the greedy loop keeps its (1 - 1/e)
guarantee whenever the component intervals are tight.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from math import comb

from .analyze import ESTIMATORS, mdim_bounds
from .errors import SearchLimitError
from .graphcore import bipartite_view, matching_size
from .pattern import CandidatePattern, SystemPattern, append_candidates, check_candidates

log = logging.getLogger(__name__)

MAX_ENUMERATION = 2_000_000


@dataclass(frozen=True)
class RecoveryObjective:
    pattern: SystemPattern
    cand: CandidatePattern
    estimator: str
    base: int
    base_matching: int
    scc_sets: tuple
    components: tuple
    approximate: bool

    def coverage(self, chosen) -> int:
        out = set()
        for j in chosen:
            out |= self.scc_sets[j - 1]
        return len(out)

    def matching_gain(self, chosen) -> int:
        """q(J): rows newly matched after appending the candidate columns J."""
        augmented = append_candidates(self.pattern, self.cand, chosen)
        return matching_size(bipartite_view(augmented)) - self.base_matching

    def __call__(self, chosen) -> int:
        chosen = sorted(set(chosen))
        for j in chosen:
            if not 1 <= j <= self.cand.m_can:
                raise IndexError(f"candidate index {j} out of range 1..{self.cand.m_can}")
        return self.base + self.coverage(chosen) + self.matching_gain(chosen)


@dataclass(frozen=True)
class RecoveryResult:
    chosen: frozenset
    picks: tuple
    trace: tuple
    final: int
    base: int
    method: str
    budget: int
    approximate: bool = False
    clamped: bool = False


def recovery_objective(pattern: SystemPattern, cand: CandidatePattern, estimator: str = "lower",
                       limit: int | None = None, on_limit: str = "heuristic") -> RecoveryObjective:
    if estimator not in ESTIMATORS:
        raise ValueError(f"unknown estimator {estimator!r}")
    check_candidates(pattern, cand)
    est = mdim_bounds(pattern, limit, on_limit)
    blocks = []
    offset = 0
    for comp in est.components:
        auto = comp.upper if estimator == "upper" else comp.lower
        size = comp.trank - auto
        blocks.append(frozenset(range(offset + 1, offset + size + 1)))
        offset += size
    targets = [set() for _ in range(cand.m_can + 1)]
    for i, j in cand.entries:
        targets[j].add(i)
    sets = []
    for j in range(1, cand.m_can + 1):
        touched = [b for comp, b in zip(est.components, blocks) if comp.vertices & targets[j]]
        sets.append(frozenset().union(*touched))
    return RecoveryObjective(pattern, cand, estimator, est.value(estimator),
                             matching_size(bipartite_view(pattern)), tuple(sets), est.components,
                             not est.exact or not est.search_exact)


def recovery_value(pattern: SystemPattern, cand: CandidatePattern, chosen, estimator: str = "lower") -> int:
    return recovery_objective(pattern, cand, estimator)(chosen)


def _clamp(budget, m_can):
    if budget < 0:
        raise ValueError("budget must be non-negative")
    if budget > m_can:
        log.warning("budget %d exceeds %d candidates; clamped", budget, m_can)
        return m_can, True
    return budget, False


def greedy_recover(pattern: SystemPattern, cand: CandidatePattern, budget: int,
                   estimator: str = "lower", objective: RecoveryObjective | None = None) -> RecoveryResult:
    """Greedy selection: each round adds the candidate with the largest f(J + j).

    Ties go to the smallest candidate index.
    """
    f = objective or recovery_objective(pattern, cand, estimator)
    k, clamped = _clamp(budget, cand.m_can)
    if f.approximate:
        log.warning("some component intervals are not tight; the (1 - 1/e) guarantee does not apply")
    chosen = []
    left = list(range(1, cand.m_can + 1))
    trace = []
    for _ in range(k):
        values = {j: f(chosen + [j]) for j in left}
        top = max(values.values())
        pick = min(j for j in left if values[j] == top)
        chosen.append(pick)
        left.remove(pick)
        trace.append(top)
    final = trace[-1] if trace else f.base
    return RecoveryResult(frozenset(chosen), tuple(chosen), tuple(trace), final, f.base, "greedy",
                          budget, f.approximate, clamped)


def recover_exact(pattern: SystemPattern, cand: CandidatePattern, budget: int,
                  estimator: str = "lower", objective: RecoveryObjective | None = None,
                  max_enumeration: int = MAX_ENUMERATION) -> RecoveryResult:
    """Global maximiser of f over |J| <= budget; ties to the smallest sorted J."""
    f = objective or recovery_objective(pattern, cand, estimator)
    k, clamped = _clamp(budget, cand.m_can)
    count = sum(comb(cand.m_can, r) for r in range(k + 1))
    if count > max_enumeration:
        raise SearchLimitError(f"{count} candidate sets exceed the enumeration limit {max_enumeration}")
    subsets = sorted(c for r in range(k + 1) for c in itertools.combinations(range(1, cand.m_can + 1), r))
    best = None
    for chosen in subsets:
        val = f(chosen)
        if best is None or val > best[0]:
            best = (val, chosen)
    return RecoveryResult(frozenset(best[1]), best[1], (best[0],), best[0], f.base, "exact",
                          budget, f.approximate, clamped)
