"""Structured system pairs: zero/star patterns for a symmetric state matrix and
an input matrix, their JSON files, and random numerical realizations.

All indices in this module's public API are 1-based: states ``1..n``, inputs
``1..m``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import PatternError

# Star parameters are drawn from [-1, -BAND] U [BAND, 1].
SAMPLING_BAND = 1e-3


@dataclass(frozen=True)
class SystemPattern:
    """A pair (A, B) of structured matrices with A symmetrically structured.

    ``a_entries`` holds (row, col) star positions of A and is closed under
    transposition; ``b_entries`` holds (state, input) star positions of B.
    Use :meth:`from_edges` to build one from an undirected edge list.
    """

    n: int
    m: int
    a_entries: frozenset
    b_entries: frozenset

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n <= 0:
            raise PatternError(f"n must be a positive integer, got {self.n!r}")
        if not isinstance(self.m, int) or self.m < 0:
            raise PatternError(f"m must be a non-negative integer, got {self.m!r}")
        for i, j in self.a_entries:
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise PatternError(f"a entry {[i, j]}: index out of range 1..{self.n}")
            if (j, i) not in self.a_entries:
                raise PatternError(f"a entry {[i, j]} has no transposed partner")
        for i, j in self.b_entries:
            if not 1 <= i <= self.n:
                raise PatternError(f"b entry {[i, j]}: state index {i} out of range 1..{self.n}")
            if not 1 <= j <= self.m:
                raise PatternError(f"b entry {[i, j]}: input index {j} out of range 1..{self.m}")

    @classmethod
    def from_edges(cls, n: int, a_edges: Iterable[Sequence[int]] = (),
                   b_edges: Iterable[Sequence[int]] = (), m: int | None = None) -> "SystemPattern":
        """Build a pattern, adding the transpose of every state edge."""
        a = set()
        for i, j in a_edges:
            a.add((int(i), int(j)))
            a.add((int(j), int(i)))
        b = {(int(i), int(j)) for i, j in b_edges}
        if m is None:
            m = max((j for _, j in b), default=0)
        return cls(n, m, frozenset(a), frozenset(b))

    @cached_property
    def self_loops(self) -> frozenset:
        return frozenset(i for i, j in self.a_entries if i == j)

    @cached_property
    def state_neighbors(self) -> tuple:
        """``state_neighbors[i]`` is the set of j != i with a star at (i, j); index 0 unused."""
        nbrs = [set() for _ in range(self.n + 1)]
        for i, j in self.a_entries:
            if i != j:
                nbrs[i].add(j)
        return tuple(frozenset(s) for s in nbrs)

    @cached_property
    def input_targets(self) -> tuple:
        """``input_targets[j]`` is the set of states driven by input j; index 0 unused."""
        targets = [set() for _ in range(self.m + 1)]
        for i, j in self.b_entries:
            targets[j].add(i)
        return tuple(frozenset(s) for s in targets)

    def undirected_edges(self) -> list:
        """Star positions of A with i <= j, sorted."""
        return sorted((i, j) for i, j in self.a_entries if i <= j)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "a_edges": [list(e) for e in self.undirected_edges()],
            "b_edges": [list(e) for e in sorted(self.b_entries)],
        }


@dataclass(frozen=True)
class CandidatePattern:
    """Input columns that may be added to a system (``m_can`` of them).

    ``labels`` optionally names the candidates for reports, e.g. ``u2..u7``.
    """

    m_can: int
    entries: frozenset
    labels: tuple | None = None

    def __post_init__(self):
        if not isinstance(self.m_can, int) or self.m_can < 0:
            raise PatternError(f"m_can must be a non-negative integer, got {self.m_can!r}")
        for i, j in self.entries:
            if i < 1 or not 1 <= j <= self.m_can:
                raise PatternError(f"candidate entry {[i, j]}: index out of range")
        if self.labels is not None and len(self.labels) != self.m_can:
            raise PatternError(f"expected {self.m_can} candidate labels, got {len(self.labels)}")

    def label(self, j: int) -> str:
        return self.labels[j - 1] if self.labels else f"c{j}"

    def to_dict(self) -> dict:
        doc = {"m_can": self.m_can, "edges": [list(e) for e in sorted(self.entries)]}
        if self.labels:
            doc["labels"] = list(self.labels)
        return doc


@dataclass(frozen=True, eq=False)
class NumericRealization:
    """Concrete matrices (A, B) with the sparsity of a pattern."""

    a_values: np.ndarray
    b_values: np.ndarray
    seed: object = None

    @property
    def n(self) -> int:
        return self.a_values.shape[0]


# ---------------------------------------------------------------------------
# JSON ingest

def _load_json(text):
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise PatternError(f"malformed JSON: {exc}") from None


def _int(value, what):
    if isinstance(value, bool) or not isinstance(value, int):
        raise PatternError(f"{what} must be an integer, got {value!r}")
    return value


def _pairs(raw, key):
    if not isinstance(raw, list):
        raise PatternError(f"'{key}' must be a list of [i, j] pairs")
    out = []
    for entry in raw:
        if not isinstance(entry, list) or len(entry) != 2:
            raise PatternError(f"{key} entry {entry!r}: expected a pair [i, j]")
        out.append((_int(entry[0], f"{key} entry {entry!r}"), _int(entry[1], f"{key} entry {entry!r}")))
    return out


def parse_system(text) -> SystemPattern:
    """Parse a system document ``{"n", "a_edges", "b_edges"[, "m"]}``.

    Each undirected state edge may be listed as [i, j], [j, i] or both; listing
    the same ordered pair twice is an error.  ``m`` defaults to the largest
    input index used in ``b_edges``.
    """
    doc = _load_json(text)
    if not isinstance(doc, dict):
        raise PatternError("system document must be a JSON object")
    for key in ("n", "a_edges", "b_edges"):
        if key not in doc:
            raise PatternError(f"missing key '{key}'")
    n = _int(doc["n"], "n")
    if n <= 0:
        raise PatternError(f"n must be positive, got {n}")
    a_edges = _pairs(doc["a_edges"], "a_edges")
    b_edges = _pairs(doc["b_edges"], "b_edges")

    seen = set()
    for i, j in a_edges:
        for idx in (i, j):
            if not 1 <= idx <= n:
                raise PatternError(f"a_edges entry {[i, j]}: index {idx} out of range 1..{n}")
        if (i, j) in seen:
            raise PatternError(f"a_edges entry {[i, j]}: duplicate pair")
        seen.add((i, j))

    m = doc.get("m")
    if m is None:
        m = max((j for _, j in b_edges), default=0)
    m = _int(m, "m")
    if m < 0:
        raise PatternError(f"m must be non-negative, got {m}")
    seen = set()
    for i, j in b_edges:
        if not 1 <= i <= n:
            raise PatternError(f"b_edges entry {[i, j]}: state index {i} out of range 1..{n}")
        if not 1 <= j <= m:
            raise PatternError(f"b_edges entry {[i, j]}: input index {j} out of range 1..{m}")
        if (i, j) in seen:
            raise PatternError(f"b_edges entry {[i, j]}: duplicate pair")
        seen.add((i, j))
    return SystemPattern.from_edges(n, a_edges, b_edges, m=m)


def dump_system(pattern: SystemPattern) -> str:
    return json.dumps(pattern.to_dict(), sort_keys=True)


def parse_candidates(text) -> CandidatePattern:
    """Parse ``{"m_can", "edges": [[state, cand], ...][, "labels"]}``."""
    doc = _load_json(text)
    if not isinstance(doc, dict):
        raise PatternError("candidate document must be a JSON object")
    for key in ("m_can", "edges"):
        if key not in doc:
            raise PatternError(f"missing key '{key}'")
    m_can = _int(doc["m_can"], "m_can")
    if m_can < 0:
        raise PatternError(f"m_can must be non-negative, got {m_can}")
    edges = _pairs(doc["edges"], "edges")
    seen = set()
    for i, j in edges:
        if i < 1:
            raise PatternError(f"edges entry {[i, j]}: state index {i} out of range")
        if not 1 <= j <= m_can:
            raise PatternError(f"edges entry {[i, j]}: candidate index {j} out of range 1..{m_can}")
        if (i, j) in seen:
            raise PatternError(f"edges entry {[i, j]}: duplicate pair")
        seen.add((i, j))
    labels = doc.get("labels")
    if labels is not None:
        if not isinstance(labels, list) or not all(isinstance(x, str) for x in labels):
            raise PatternError("'labels' must be a list of strings")
        labels = tuple(labels)
    return CandidatePattern(m_can, frozenset(seen), labels)


def check_candidates(pattern: SystemPattern, cand: CandidatePattern) -> None:
    for i, j in cand.entries:
        if i > pattern.n:
            raise PatternError(f"candidate entry {[i, j]}: state index {i} out of range 1..{pattern.n}")


# ---------------------------------------------------------------------------
# Column operations

def _check_subset(indices, upper, what):
    keep = sorted(set(int(k) for k in indices))
    for k in keep:
        if not 1 <= k <= upper:
            raise PatternError(f"{what} index {k} out of range 1..{upper}")
    return keep


def select_columns(pattern: SystemPattern, keep: Iterable[int]) -> SystemPattern:
    """Restrict B to the columns in ``keep``, renumbered 1.. in ascending order."""
    keep = _check_subset(keep, pattern.m, "input")
    new_index = {old: new for new, old in enumerate(keep, start=1)}
    b = frozenset((i, new_index[j]) for i, j in pattern.b_entries if j in new_index)
    return SystemPattern(pattern.n, len(keep), pattern.a_entries, b)


def append_candidates(pattern: SystemPattern, cand: CandidatePattern,
                      chosen: Iterable[int]) -> SystemPattern:
    """Concatenate [B, B_can(chosen)], candidates in ascending index order."""
    chosen = _check_subset(chosen, cand.m_can, "candidate")
    check_candidates(pattern, cand)
    new_index = {c: pattern.m + t for t, c in enumerate(chosen, start=1)}
    extra = {(i, new_index[j]) for i, j in cand.entries if j in new_index}
    return SystemPattern(pattern.n, pattern.m + len(chosen), pattern.a_entries,
                         pattern.b_entries | frozenset(extra))


# ---------------------------------------------------------------------------
# Realizations

def _draw(rng, size):
    mags = rng.uniform(SAMPLING_BAND, 1.0, size)
    signs = np.where(rng.random(size) < 0.5, -1.0, 1.0)
    return signs * mags


def sample_realization(pattern: SystemPattern, seed) -> NumericRealization:
    """Draw every independent star parameter from +-[1e-3, 1].

    ``seed`` is anything :func:`numpy.random.default_rng` accepts; symmetric
    entries of A share one draw.
    """
    rng = np.random.default_rng(seed)
    n, m = pattern.n, pattern.m
    upper = pattern.undirected_edges()
    b_sorted = sorted(pattern.b_entries)
    vals = _draw(rng, len(upper) + len(b_sorted))
    a = np.zeros((n, n))
    for (i, j), x in zip(upper, vals[: len(upper)]):
        a[i - 1, j - 1] = x
        a[j - 1, i - 1] = x
    b = np.zeros((n, m))
    for (i, j), x in zip(b_sorted, vals[len(upper):]):
        b[i - 1, j - 1] = x
    return NumericRealization(a, b, seed)
