"""Ground-truth solvers: exhaustive search and the count-matrix baseline.

`brute_force` is the reference oracle every other solver is measured
against.  `mm_baseline` reduces the problem to one integer matrix product
over subset-indexed count matrices and must agree with `brute_force`
exactly wherever it runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Sequence

import numpy as np

from .errors import InputError, ResourceLimitError
from .instances import CoverInstance, SolveResult, better_result
from .stats import OpStats

DEFAULT_BUDGET_ENTRIES = 64_000_000


def _colex_subsets(ids: Sequence[int], size: int) -> list[tuple[int, ...]]:
    return sorted(combinations(ids, size), key=lambda t: tuple(reversed(t)))


def brute_force(inst: CoverInstance, k: int) -> SolveResult:
    """Exact optimum over all subsets of size min(k, n).

    The witness is the lexicographically smallest optimal subset.
    """
    if k < 0:
        raise InputError("k must be >= 0")
    stats = OpStats(regime="oracle")
    kk = min(k, inst.n)
    if kk == 0:
        return SolveResult(0, (), stats)
    best = (-1, ())
    masks = inst.set_masks
    for subset in combinations(range(inst.n), kk):
        mask = 0
        for i in subset:
            mask |= masks[i]
        stats.bump("unions")
        cand = (mask.bit_count(), subset)
        if cand[0] > best[0]:
            best = cand
    return SolveResult(best[0], best[1], stats)


def brute_force_over(inst: CoverInstance, k: int, candidates: Sequence[int]) -> SolveResult:
    """Exhaustive optimum restricted to subsets of the given candidate ids."""
    kk = min(k, len(candidates))
    if kk <= 0:
        return SolveResult(0, (), OpStats(regime="oracle"))
    masks = inst.set_masks
    best = (-1, ())
    for subset in combinations(sorted(candidates), kk):
        mask = 0
        for i in subset:
            mask |= masks[i]
        cand = (mask.bit_count(), subset)
        if cand[0] > best[0]:
            best = cand
    return SolveResult(best[0], best[1], OpStats(regime="oracle"))


@dataclass(frozen=True)
class CountMatrix:
    """Uncovered-element counts indexed by subset pairs.

    Entry [S, T] is the number of universe elements covered by neither S nor
    T, i.e. u - |N(S union T)|.  Rows and columns are enumerated in
    colexicographic subset order.
    """

    row_subsets: tuple[tuple[int, ...], ...]
    col_subsets: tuple[tuple[int, ...], ...]
    entries: np.ndarray

    def check_entry(self, inst: CoverInstance, ri: int, ci: int) -> bool:
        union = set(self.row_subsets[ri]) | set(self.col_subsets[ci])
        mask = 0
        for i in union:
            mask |= inst.set_masks[i]
        return int(self.entries[ri, ci]) == inst.u - mask.bit_count()


def count_matrix(inst: CoverInstance, k: int, *, budget_entries: int = DEFAULT_BUDGET_ENTRIES) -> CountMatrix:
    if k < 2:
        raise InputError("count matrix needs k >= 2")
    kk = min(k, inst.n)
    r = (kk + 1) // 2
    c = kk // 2
    rows = comb(inst.n, r)
    cols = comb(inst.n, c)
    if rows * max(inst.u, 1) > budget_entries or rows * cols > budget_entries:
        raise ResourceLimitError(
            f"count matrix of {rows}x{cols} (universe {inst.u}) exceeds budget; fall back to brute_force"
        )
    row_subsets = tuple(_colex_subsets(range(inst.n), r))
    col_subsets = tuple(_colex_subsets(range(inst.n), c))
    # A[S, y] = 1 iff no set in S contains y; B[y, T] symmetric.
    covered = np.zeros((inst.n, inst.u), dtype=bool)
    for i, s in enumerate(inst.sets):
        covered[i, list(s)] = True
    a = np.ones((rows, inst.u), dtype=np.int32)
    for ri, subset in enumerate(row_subsets):
        for i in subset:
            a[ri, covered[i]] = 0
    b = np.ones((inst.u, cols), dtype=np.int32)
    for ci, subset in enumerate(col_subsets):
        for i in subset:
            b[covered[i], ci] = 0
    return CountMatrix(row_subsets, col_subsets, a @ b)


def mm_baseline(inst: CoverInstance, k: int, *, budget_entries: int = DEFAULT_BUDGET_ENTRIES) -> SolveResult:
    """Optimum u - min C[S, T] over the count matrix C; equals brute_force."""
    if k < 2:
        raise InputError("mm_baseline needs k >= 2")
    stats = OpStats(regime="mm-baseline")
    cm = count_matrix(inst, k, budget_entries=budget_entries)
    stats.bump("matrix_entries", int(cm.entries.size))
    target = int(cm.entries.min())
    best: tuple[int, tuple[int, ...]] = (-1, ())
    for ri, ci in zip(*np.nonzero(cm.entries == target)):
        witness = tuple(sorted(set(cm.row_subsets[ri]) | set(cm.col_subsets[ci])))
        cand = (inst.u - target, witness)
        if better_result(cand, best):
            best = cand
    return SolveResult(best[0], best[1], stats)


def matrix_multiply(a, b) -> np.ndarray:
    """Exact integer product of two matrices (naive semantics, numpy backend)."""
    am = np.asarray(a, dtype=np.int64)
    bm = np.asarray(b, dtype=np.int64)
    if am.ndim != 2 or bm.ndim != 2:
        raise InputError("matrix_multiply expects 2-dimensional arrays")
    if am.shape[1] != bm.shape[0]:
        raise InputError(f"inner dimensions disagree: {am.shape} x {bm.shape}")
    return am @ bm
