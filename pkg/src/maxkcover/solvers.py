"""Exact maximum-coverage and partial-domination solvers.

The core routine guesses up to two disjoint bundles and closes the rest of
the solution with a maximum-weight triangle over balanced super-node parts;
the bundle guesses absorb every obstruction to an arity-reducing hypercut,
which is what makes the triangle value exact rather than a lower bound.
Around it sit a degree-regularization recursion, a small-universe hyperedge
recursion, and a dispatcher that routes by how the universe size compares
with powers of the maximum set size.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb, log, sqrt
from typing import Sequence

import numpy as np

from .config import DEFAULT_OMEGA
from .errors import InputError, InternalInvariantError
from .hypercut import bundles_up_to, list_hyperedges
from .instances import (
    CoverInstance,
    PdsGraph,
    SolveResult,
    better_result,
    coverage_value,
    ids_from_mask,
    pds_to_cover,
    prune_candidates_with_map,
)
from .oracles import brute_force, mm_baseline
from .stats import OpStats
from .triangle import (
    DEFAULT_PART_BUDGET,
    SuperNodeGraph,
    build_tripartite,
    max_weight_triangle,
    part_sizes,
)

REGIMES = ("large-universe", "intermediate", "small-universe")


class _TripartiteCache:
    """Reusable super-node machinery for one candidate pool.

    Part member lists depend only on (pool, sizes); per restricted universe we
    slice the cached boolean cover rows and assemble a SuperNodeGraph, so the
    bundle-pair loop pays for combinatorics once.
    """

    def __init__(self, inst: CoverInstance, candidates: Sequence[int], budget: int):
        self.inst = inst
        self.cand = tuple(candidates)
        self.budget = budget
        rows = np.zeros((len(self.cand), inst.u), dtype=bool)
        for r, cid in enumerate(self.cand):
            rows[r, list(inst.sets[cid])] = True
        self.rows = rows
        self._members: dict[int, tuple[tuple[tuple[int, ...], ...], np.ndarray]] = {}

    def _part(self, size: int) -> tuple[tuple[tuple[int, ...], ...], np.ndarray]:
        if size not in self._members:
            if size == 0:
                members: tuple[tuple[int, ...], ...] = ((),)
                idx = np.zeros((1, 0), dtype=np.int64)
            else:
                if comb(len(self.cand), size) > self.budget:
                    from .errors import ResourceLimitError

                    raise ResourceLimitError(
                        f"tripartite part of {comb(len(self.cand), size)} super nodes exceeds budget"
                    )
                row_of = {cid: r for r, cid in enumerate(self.cand)}
                members = tuple(combinations(self.cand, size))
                idx = np.array([[row_of[c] for c in node] for node in members], dtype=np.int64)
            self._members[size] = (members, idx)
        return self._members[size]

    def graph(self, k_prime: int, universe: tuple[int, ...]) -> SuperNodeGraph:
        cols = np.array(universe, dtype=np.int64)
        sliced = self.rows[:, cols] if len(cols) else np.zeros((len(self.cand), 0), dtype=bool)
        sizes = part_sizes(k_prime)
        parts = []
        covers = []
        for size in sizes:
            members, idx = self._part(size)
            if size == 0:
                cover = np.zeros((1, sliced.shape[1]), dtype=bool)
            else:
                cover = sliced[idx].any(axis=1)
            parts.append(members)
            covers.append(cover)
        node_weights = tuple(c.sum(axis=1).astype(np.int64) for c in covers)
        edge_weights = {}
        for a, b in ((0, 1), (0, 2), (1, 2)):
            edge_weights[(a, b)] = -(covers[a].astype(np.int64) @ covers[b].astype(np.int64).T)
        return SuperNodeGraph(tuple(parts), universe, node_weights, edge_weights, max(1, k_prime) * self.inst.max_set_size)


def _bundle_guesses(inst: CoverInstance, k: int, stats: OpStats) -> list[tuple[tuple[int, ...], int, int]]:
    """Empty guess plus every bundle of at most k vertices, as
    (vertices, vertex_mask, covered_mask) triples."""
    guesses: list[tuple[tuple[int, ...], int, int]] = [((), 0, 0)]
    for b in bundles_up_to(inst, k, stats=stats):
        vmask = 0
        for v in b.vertices:
            vmask |= 1 << v
        guesses.append((b.vertices, vmask, inst.neighborhood_mask(b.vertices)))
    return guesses


def partial_ds_core(
    inst: CoverInstance,
    k: int,
    *,
    budget: int = DEFAULT_PART_BUDGET,
    stats: OpStats | None = None,
) -> SolveResult:
    """Bundle-pair guessing closed by a maximum-weight triangle; exact.

    Expects the caller to have applied degree pruning already.  Super-node
    parts draw from the full candidate pool; the restricted universe excludes
    everything the guessed bundles cover.
    """
    stats = stats if stats is not None else OpStats()
    if k < 0:
        raise InputError("k must be >= 0")
    k = min(k, inst.n)
    if k == 0 or inst.n == 0:
        return SolveResult(0, (), stats)
    full = inst.universe_mask
    guesses = _bundle_guesses(inst, k, stats)
    cache = _TripartiteCache(inst, range(inst.n), budget)
    tri_memo: dict[tuple[int, int], object] = {}
    best: tuple[int, tuple[int, ...]] = (-1, ())
    cap = inst.u
    for i, (v1, vm1, nm1) in enumerate(guesses):
        if len(v1) > k:
            continue
        for j in range(i, len(guesses)):
            v2, vm2, nm2 = guesses[j]
            if len(v1) + len(v2) > k or (vm1 & vm2):
                continue
            if i == j and v1:
                continue
            base_mask = nm1 | nm2
            base = base_mask.bit_count()
            stats.bump("unions")
            k2 = k - len(v1) - len(v2)
            if base + min(k2 * inst.max_set_size, cap - base) < best[0]:
                continue
            if k2 == 0:
                cand = (base, tuple(sorted(v1 + v2)))
            else:
                y_mask = full & ~base_mask
                key = (k2, y_mask)
                tri = tri_memo.get(key)
                if tri is None:
                    tri = max_weight_triangle(cache.graph(k2, ids_from_mask(y_mask)), stats=stats)
                    tri_memo[key] = tri
                cand = (base + tri.weight, tuple(sorted(set(v1) | set(v2) | set(tri.chosen))))
            if better_result(cand, best):
                best = cand
    if coverage_value(inst, best[1]) != best[0]:
        raise InternalInvariantError("optimal witness does not reproduce the optimal value")
    return SolveResult(best[0], best[1], stats)


def solve_large_universe(
    inst: CoverInstance,
    k: int,
    *,
    budget: int = DEFAULT_PART_BUDGET,
    stats: OpStats | None = None,
) -> SolveResult:
    """Degree pruning followed by the bundle-pair core solver; exact."""
    stats = stats if stats is not None else OpStats()
    stats.regime = stats.regime or "large-universe"
    if k <= 0 or inst.n == 0:
        return SolveResult(0, (), stats)
    sub, kept = prune_candidates_with_map(inst, min(k, inst.n) or 1)
    res = partial_ds_core(sub, min(k, inst.n), budget=budget, stats=stats)
    witness = tuple(sorted(kept[i] for i in res.witness))
    return SolveResult(res.value, witness, stats)


@dataclass(frozen=True)
class RegularitySplit:
    """Degree split of the candidates: `heavy` holds degrees >= max/k,
    `moderately_heavy` degrees >= max/(2k); `guess_branch` is the
    few-heavy-vertices test |heavy| < 2 k^2 max_frequency."""

    heavy: tuple[int, ...]
    moderately_heavy: tuple[int, ...]
    guess_branch: bool


def regularity_split(
    inst: CoverInstance,
    k: int,
    *,
    candidates: Sequence[int] | None = None,
    universe_mask: int | None = None,
) -> RegularitySplit:
    if k < 1:
        raise InputError("k must be >= 1")
    cands = tuple(candidates) if candidates is not None else tuple(range(inst.n))
    y_mask = universe_mask if universe_mask is not None else inst.universe_mask
    degs = {x: (inst.set_masks[x] & y_mask).bit_count() for x in cands}
    ds = max(degs.values(), default=0)
    freq: dict[int, int] = {}
    for x in cands:
        for e in inst.sets[x]:
            if (y_mask >> e) & 1:
                freq[e] = freq.get(e, 0) + 1
    df = max(freq.values(), default=0)
    h1 = tuple(x for x in cands if degs[x] * k >= ds)
    h2 = tuple(x for x in cands if degs[x] * 2 * k >= ds)
    return RegularitySplit(h1, h2, len(h1) < 2 * k * k * df)


class _RasEngine:
    """Memoized regularize-and-solve recursion over (candidates, universe, k).

    Returns a value never exceeding the true optimum, and exactly the optimum
    whenever, after the internal pruning, some optimal solution admits a
    balanced arity-reducing hypercut.
    """

    def __init__(self, inst: CoverInstance, budget: int, stats: OpStats):
        self.inst = inst
        self.budget = budget
        self.stats = stats
        self.memo: dict[tuple[int, int, int], tuple[int, tuple[int, ...]]] = {}

    def solve(self, cand_mask: int, y_mask: int, k: int, depth: int = 0) -> tuple[int, tuple[int, ...]]:
        self.stats.note_depth(depth)
        if k <= 0 or cand_mask == 0:
            return 0, ()
        key = (cand_mask, y_mask, k)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        inst = self.inst
        cands = ids_from_mask(cand_mask)
        degs = {x: (inst.set_masks[x] & y_mask).bit_count() for x in cands}
        ds = max(degs.values())
        if ds == 0:
            self.memo[key] = (0, ())
            return 0, ()
        freq: dict[int, int] = {}
        for x in cands:
            for e in inst.sets[x]:
                if (y_mask >> e) & 1:
                    freq[e] = freq.get(e, 0) + 1
        df = max(freq.values())
        h1 = [x for x in cands if degs[x] * k >= ds]
        if len(h1) < 2 * k * k * df:
            best: tuple[int, tuple[int, ...]] = (0, ())
            for x in h1:
                sub_val, sub_wit = self.solve(cand_mask & ~(1 << x), y_mask & ~inst.set_masks[x], k - 1, depth + 1)
                cand = (degs[x] + sub_val, tuple(sorted((x,) + sub_wit)))
                if better_result(cand, best):
                    best = cand
            self.memo[key] = best
            return best
        h2 = [x for x in cands if degs[x] * 2 * k >= ds]
        h2.sort(key=lambda x: (-degs[x], x))
        kept = sorted(h2[: min(k * ds * df, len(h2))])
        kp = min(k, len(kept))
        graph = build_tripartite(inst, kept, ids_from_mask(y_mask), kp, budget=self.budget, stats=self.stats)
        tri = max_weight_triangle(graph, stats=self.stats)
        result = (tri.weight, tri.chosen)
        self.memo[key] = result
        return result


def regularize_and_solve(
    inst: CoverInstance,
    k: int,
    *,
    budget: int = DEFAULT_PART_BUDGET,
    stats: OpStats | None = None,
) -> SolveResult:
    """Value-safe lower bound that is exact under the hypercut promise."""
    stats = stats if stats is not None else OpStats()
    stats.regime = stats.regime or "regularize"
    if k < 0:
        raise InputError("k must be >= 0")
    engine = _RasEngine(inst, budget, stats)
    value, witness = engine.solve((1 << inst.n) - 1, inst.universe_mask, min(k, inst.n))
    return SolveResult(value, witness, stats)


def solve_intermediate(
    inst: CoverInstance,
    k: int,
    *,
    budget: int = DEFAULT_PART_BUDGET,
    stats: OpStats | None = None,
) -> SolveResult:
    """Bundle-pair guessing wrapped around the regularization recursion; exact."""
    stats = stats if stats is not None else OpStats()
    stats.regime = stats.regime or "intermediate"
    k = min(k, inst.n)
    if k <= 0 or inst.n == 0:
        return SolveResult(0, (), stats)
    full = inst.universe_mask
    all_cands = (1 << inst.n) - 1
    guesses = _bundle_guesses(inst, k, stats)
    engine = _RasEngine(inst, budget, stats)
    best: tuple[int, tuple[int, ...]] = (-1, ())
    for i, (v1, vm1, nm1) in enumerate(guesses):
        if len(v1) > k:
            continue
        for j in range(i, len(guesses)):
            v2, vm2, nm2 = guesses[j]
            if len(v1) + len(v2) > k or (vm1 & vm2):
                continue
            if i == j and v1:
                continue
            base_mask = nm1 | nm2
            base = base_mask.bit_count()
            stats.bump("unions")
            k2 = k - len(v1) - len(v2)
            if base + min(k2 * inst.max_set_size, inst.u - base) < best[0]:
                continue
            val, wit = engine.solve(all_cands & ~(vm1 | vm2), full & ~base_mask, k2)
            cand = (base + val, tuple(sorted(set(v1) | set(v2) | set(wit))))
            if better_result(cand, best):
                best = cand
    if coverage_value(inst, best[1]) != best[0]:
        raise InternalInvariantError("optimal witness does not reproduce the optimal value")
    return SolveResult(best[0], best[1], stats)


def solve_small_universe(
    inst: CoverInstance,
    k: int,
    *,
    budget: int = DEFAULT_PART_BUDGET,
    stats: OpStats | None = None,
) -> SolveResult:
    """Hyperedge-guessing recursion over the regularization solver; exact.

    Every hyperedge inside an optimal solution is guessed and removed three
    vertices at a time; once none remain the regularization solver's promise
    holds vacuously.
    """
    stats = stats if stats is not None else OpStats()
    stats.regime = stats.regime or "small-universe"
    k = min(k, inst.n)
    if k <= 0 or inst.n == 0:
        return SolveResult(0, (), stats)
    engine = _RasEngine(inst, budget, stats)
    memo: dict[tuple[int, int, int], tuple[int, tuple[int, ...]]] = {}

    def rec(cand_mask: int, y_mask: int, kk: int, depth: int) -> tuple[int, tuple[int, ...]]:
        stats.note_depth(depth)
        key = (cand_mask, y_mask, kk)
        hit = memo.get(key)
        if hit is not None:
            return hit
        best = engine.solve(cand_mask, y_mask, kk)
        if kk >= 3:
            allowed = ids_from_mask(cand_mask)
            for he in list_hyperedges(inst, universe_mask=y_mask, allowed=allowed):
                members = he.members
                tri_mask = 0
                for x in members:
                    tri_mask |= inst.set_masks[x]
                tri_mask &= y_mask
                gain = tri_mask.bit_count()
                sub_mask = cand_mask
                for x in members:
                    sub_mask &= ~(1 << x)
                sub_val, sub_wit = rec(sub_mask, y_mask & ~tri_mask, kk - 3, depth + 1)
                cand = (gain + sub_val, tuple(sorted(set(members) | set(sub_wit))))
                if better_result(cand, best):
                    best = cand
        memo[key] = best
        return best

    value, witness = rec((1 << inst.n) - 1, inst.universe_mask, k, 0)
    if coverage_value(inst, witness) != value:
        raise InternalInvariantError("optimal witness does not reproduce the optimal value")
    return SolveResult(value, witness, stats)


def pick_regime(inst: CoverInstance) -> str:
    """Route by exact integer comparisons of u against powers of the max set
    size; the u == max_set_size^2 boundary goes to the large-universe case."""
    ds = inst.max_set_size
    if inst.u >= ds * ds:
        return "large-universe"
    if inst.u * inst.u >= ds * ds * ds:
        return "intermediate"
    return "small-universe"


def _structured_work_log(inst: CoverInstance, k: int, regime: str, omega: float) -> float:
    """Log of the structured solver's predicted work in the given regime."""
    n = max(inst.n, 1)
    ds = max(inst.max_set_size, 1)
    df = max(inst.max_frequency, 1)
    u = max(inst.u, 1)
    if regime == "large-universe":
        t1 = k * log(df * sqrt(ds))
        t2 = (k * omega / 3.0) * log(min(n, df * ds))
    elif regime == "intermediate":
        t1 = k * log(df * sqrt(ds))
        t2 = (k * omega / 3.0) * log(min(n, df * sqrt(u)))
    else:
        t1 = k * log(df * u ** (1.0 / 3.0))
        t2 = (k * omega / 3.0) * log(min(n, df * sqrt(u)))
    return max(t1, t2)


def max_k_cover(
    inst: CoverInstance,
    k: int,
    *,
    omega: float = DEFAULT_OMEGA,
    budget: int = DEFAULT_PART_BUDGET,
    force_regime: str | None = None,
    stats: OpStats | None = None,
) -> SolveResult:
    """Dispatcher over the three universe regimes with a baseline fallback.

    The structured route is skipped in favor of the exhaustive baseline when
    its predicted work (loop-bound product, tunable matrix exponent `omega`)
    exceeds n^k; the chosen route lands in the result's stats.
    """
    stats = stats if stats is not None else OpStats()
    if k < 0:
        raise InputError("k must be >= 0")
    k = min(k, inst.n)
    if k == 0 or inst.n == 0:
        stats.regime = "trivial"
        return SolveResult(0, (), stats)
    regime = force_regime or pick_regime(inst)
    if force_regime is None and _structured_work_log(inst, k, regime, omega) > k * log(max(inst.n, 2)):
        try:
            if k >= 2:
                res = mm_baseline(inst, k, budget_entries=budget)
                stats.merge(res.stats)
                stats.regime = "baseline-mm"
                return SolveResult(res.value, res.witness, stats)
        except Exception:
            pass
        res = brute_force(inst, k)
        stats.merge(res.stats)
        stats.regime = "baseline-oracle"
        return SolveResult(res.value, res.witness, stats)
    stats.regime = regime
    if regime == "large-universe":
        return solve_large_universe(inst, k, budget=budget, stats=stats)
    if regime == "intermediate":
        return solve_intermediate(inst, k, budget=budget, stats=stats)
    if regime == "small-universe":
        return solve_small_universe(inst, k, budget=budget, stats=stats)
    if regime == "oracle":
        res = brute_force(inst, k)
        return SolveResult(res.value, res.witness, stats)
    if regime == "mm":
        res = mm_baseline(inst, k, budget_entries=budget)
        return SolveResult(res.value, res.witness, stats)
    raise InputError(f"unknown regime {regime!r}")


def partial_k_dominating_set(
    g: PdsGraph,
    k: int,
    *,
    omega: float = DEFAULT_OMEGA,
    budget: int = DEFAULT_PART_BUDGET,
    stats: OpStats | None = None,
) -> SolveResult:
    """Exact maximum of |N[v1] u ... u N[vk]| via the closed-neighborhood lift.

    Lifts to a coverage instance, prunes by the degree exchange argument,
    and runs the bundle-pair core; falls back to the exhaustive baseline when
    the degree is too close to n for the structured bound to pay off.
    """
    if k < 1:
        raise InputError("k must be >= 1")
    stats = stats if stats is not None else OpStats()
    if g.n == 0:
        stats.regime = "trivial"
        return SolveResult(0, (), stats)
    k = min(k, g.n)
    lift = pds_to_cover(g)
    delta = max(g.max_degree, 1)
    structured = max(k * 1.5 * log(delta + 1), (k * omega / 3.0) * log(min(g.n, (delta + 1) ** 2)))
    if structured > k * log(max(g.n, 2)):
        if k >= 2:
            try:
                res = mm_baseline(lift, k, budget_entries=budget)
                stats.merge(res.stats)
                stats.regime = "baseline-mm"
                return SolveResult(res.value, res.witness, stats)
            except Exception:
                pass
        res = brute_force(lift, k)
        stats.merge(res.stats)
        stats.regime = "baseline-oracle"
        return SolveResult(res.value, res.witness, stats)
    stats.regime = "pds-core"
    sub, kept = prune_candidates_with_map(lift, k)
    res = partial_ds_core(sub, k, budget=budget, stats=stats)
    witness = tuple(sorted(kept[i] for i in res.witness))
    return SolveResult(res.value, witness, stats)
