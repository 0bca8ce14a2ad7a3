"""Numeric ground truth on concrete realizations.

The combinatorial results in :mod:`netstab.analyze` are checked here against
linear algebra: rank of the controllability matrix, and the dimension of the
stabilizable subspace, i.e. dim(controllable subspace) plus the number of
strictly negative eigenvalues of A on its orthogonal complement (for symmetric
A the complement is invariant, so this is the uncontrollable block).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .analyze import generic_controllable_dim, mdim_bounds
from .graphcore import build_graph
from .pattern import NumericRealization, SystemPattern, sample_realization

RANK_TOL = 1e-8
STAB_TOL = 1e-9
EIG_ATOL = 1e-12
MAX_SWEEPS = 100


@dataclass(frozen=True)
class NumericReport:
    samples: int
    rank_histogram: dict
    stabdim_histogram: dict
    best_stabdim: int
    tolerance: float
    stab_tolerance: float
    seed: int
    ranks: tuple = field(default=(), repr=False)
    stabdims: tuple = field(default=(), repr=False)

    @property
    def modal_rank(self) -> int:
        # most frequent rank; ties go to the smaller rank
        return min(self.rank_histogram, key=lambda r: (-self.rank_histogram[r], r))


def _as_arrays(real: NumericRealization):
    a = np.asarray(real.a_values, dtype=float)
    b = np.asarray(real.b_values, dtype=float).reshape(a.shape[0], -1)
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise ValueError("realization has non-finite entries")
    return a, b


def symmetric_eigh(a: np.ndarray, atol: float = EIG_ATOL):
    """Eigenvalues (ascending) and eigenvectors of a symmetric matrix via Jacobi rotations."""
    a = np.ascontiguousarray(a, dtype=float)
    if a.shape[0] == 0:
        return np.empty(0), np.empty((0, 0))
    w, v, _ = kernels.jacobi_eigh(a, atol, MAX_SWEEPS)
    return w, v


def controllability_matrix(real: NumericRealization) -> np.ndarray:
    """[B, AB, ..., A^{n-1}B] with every column rescaled to unit norm at each step."""
    a, b = _as_arrays(real)
    n, m = b.shape
    blocks = []
    cur = b.copy()
    for _ in range(n):
        norms = np.linalg.norm(cur, axis=0)
        cur = np.divide(cur, norms, out=np.zeros_like(cur), where=norms > 0)
        blocks.append(cur)
        cur = a @ cur
    return np.hstack(blocks) if blocks else np.zeros((n, 0))


def controllability_rank(real: NumericRealization, tol: float = RANK_TOL) -> int:
    """Numeric rank of the controllability matrix: singular values above tol * sigma_max."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    q = controllability_matrix(real)
    if q.size == 0:
        return 0
    s = np.linalg.svd(q, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol * s[0]))


def controllable_basis(a: np.ndarray, b: np.ndarray, tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis of the Krylov space of (a, b), grown one block at a time.

    Each new block A V is orthogonalised against the current basis (twice)
    and only directions with singular value above ``tol * ||A||`` are kept.
    """
    n = a.shape[0]
    if b.size == 0:
        return np.zeros((n, 0))
    u, s, _ = np.linalg.svd(b, full_matrices=False)
    if s[0] == 0.0:
        return np.zeros((n, 0))
    basis = u[:, s > tol * s[0]]
    new = basis
    scale = max(np.linalg.norm(a, 2), np.finfo(float).tiny)
    while new.shape[1] and basis.shape[1] < n:
        w = a @ new
        for _ in range(2):
            w -= basis @ (basis.T @ w)
        u, s, _ = np.linalg.svd(w, full_matrices=False)
        new = u[:, s > tol * scale]
        new = new[:, : n - basis.shape[1]]
        basis = np.hstack([basis, new])
    return basis


def stabilizable_dim(real: NumericRealization, tol: float = STAB_TOL,
                     rank_tol: float = RANK_TOL) -> int:
    """Dimension of the stabilizable subspace of a symmetric realization."""
    a, b = _as_arrays(real)
    if np.max(np.abs(a - a.T), initial=0.0) > tol:
        raise ValueError("state matrix is not symmetric within tolerance")
    n = a.shape[0]
    basis = controllable_basis(a, b, rank_tol)
    r = basis.shape[1]
    if r == n:
        return n
    if r == 0:
        comp = np.eye(n)
    else:
        comp = np.linalg.svd(basis, full_matrices=True)[0][:, r:]
    block = comp.T @ a @ comp
    block = 0.5 * (block + block.T)
    w, _ = symmetric_eigh(block)
    return r + int(kernels.count_below(w, -tol))


def monte_carlo_mdim(pattern: SystemPattern, samples: int, seed: int = 0,
                     tol: float = RANK_TOL, stab_tol: float = STAB_TOL) -> NumericReport:
    """Rank and stabilizable-dimension histograms over i.i.d. realizations.

    Sample ``i`` is drawn from the generator seeded with ``(seed, i)``, so the
    report does not depend on how samples are partitioned or ordered.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    ranks = []
    dims = []
    for i in range(samples):
        real = sample_realization(pattern, (seed, i))
        ranks.append(controllability_rank(real, tol))
        dims.append(stabilizable_dim(real, stab_tol, tol))
    rank_hist = dict(sorted(Counter(ranks).items()))
    dim_hist = dict(sorted(Counter(dims).items()))
    return NumericReport(samples, rank_hist, dim_hist, max(dim_hist), tol, stab_tol, seed,
                         tuple(ranks), tuple(dims))


def verify_generic_dim(pattern: SystemPattern, samples: int = 100, seed: int = 0,
                       tol: float = RANK_TOL, min_fraction: float = 0.95):
    """Check that the modal numeric rank equals the structural controllable dimension.

    Returns ``(ok, report)``; ``ok`` also requires the mode to cover at least
    ``min_fraction`` of the samples.
    """
    report = monte_carlo_mdim(pattern, samples, seed, tol)
    expected = generic_controllable_dim(pattern)
    mode = report.modal_rank
    ok = mode == expected and report.rank_histogram[mode] >= min_fraction * samples
    return ok, report


def _cycle_block_weights(length: int) -> list:
    if length % 2 == 0:
        return [1.0 if k % 2 == 0 else 2.0 for k in range(length)]
    # all-equal weights w on an odd cycle give eigenvalues 2w cos(2 pi k / L);
    # the sign choice leaves (L + 1) / 2 of them negative
    w = 1.0 if length % 4 == 3 else -1.0
    return [w] * length


def cycle_realization(pattern: SystemPattern, seed=0, estimate=None) -> NumericRealization:
    """Realization attaining the cycle-packing lower bound on m-dim.

    The reachable block and B keep a random draw (generic, so the reachable
    t-rank is attained); inside the unreachable block every star is zeroed
    except those on the packed cycles, and each cycle is given weights with
    ceil(|C| / 2) negative eigenvalues.
    """
    est = estimate if estimate is not None else mdim_bounds(pattern)
    real = sample_realization(pattern, seed)
    a = real.a_values.copy()
    un = sorted(build_graph(pattern).unreachable)
    if un:
        idx = np.array(un) - 1
        a[np.ix_(idx, idx)] = 0.0
    for cyc in est.cycle_packing:
        if len(cyc) == 1:
            v = cyc[0] - 1
            a[v, v] = -1.0
            continue
        for k, w in enumerate(_cycle_block_weights(len(cyc))):
            if len(cyc) == 2 and k == 1:
                break
            i, j = cyc[k] - 1, cyc[(k + 1) % len(cyc)] - 1
            a[i, j] = a[j, i] = w
    return NumericRealization(a, real.b_values.copy(), seed)
