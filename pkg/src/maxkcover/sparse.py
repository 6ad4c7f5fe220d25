"""Sparse-graph partial-domination specializations.

For k=2: a degree-pruned pair table, a heavy-pair product with a
heavy/light column split, and a per-degree-layer scan with sound early
exits; composed into an edge-count-sensitive solver.  For k>=3: a scan over
edge-containing solutions by one matrix product, combined with a recursion
that is exact whenever some optimal solution is an independent set beating
every edge-containing one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Sequence

import numpy as np

from .config import DEFAULT_OMEGA
from .errors import InputError, ResourceLimitError
from .instances import (
    CoverInstance,
    PdsGraph,
    SolveResult,
    better_result,
    ids_from_mask,
)
from .oracles import brute_force, mm_baseline
from .solvers import partial_ds_core
from .stats import OpStats

SCAN_BUDGET_ENTRIES = 30_000_000


def _pair_value_matrix(g: PdsGraph, rows: Sequence[int], common: np.ndarray) -> np.ndarray:
    """Closed-union values |N[x] u N[y]| for row pairs given open common counts."""
    degs = np.array([g.degree(v) for v in rows], dtype=np.int64)
    val = degs[:, None] + degs[None, :] + 2 - common
    idx = {v: i for i, v in enumerate(rows)}
    for i, x in enumerate(rows):
        cols = [idx[w] for w in g.adjacency[x] if w in idx]
        if cols:
            val[i, cols] -= 2
    np.fill_diagonal(val, -1)
    return val


def _best_pair(rows: Sequence[int], val: np.ndarray) -> tuple[int, tuple[int, ...]]:
    flat = int(np.argmax(val))
    i, j = divmod(flat, val.shape[1])
    return int(val[i, j]), tuple(sorted((rows[i], rows[j])))


def pds2_table(g: PdsGraph, *, stats: OpStats | None = None) -> SolveResult:
    """Exact k=2 optimum by a pair table over the highest-degree vertices.

    Keeps min(2 (max_degree+1)^2, n) candidates, initializes pair entries from
    degrees, and walks length-2 paths to subtract the double-counted common
    neighborhood.
    """
    stats = stats if stats is not None else OpStats(regime="pds2-table")
    n = g.n
    if n == 0:
        return SolveResult(0, (), stats)
    if n == 1:
        return SolveResult(1, (0,), stats)
    stats.bump("read_steps", n + 2 * g.m)
    hsize = min(2 * (g.max_degree + 1) ** 2, n)
    order = sorted(range(n), key=lambda v: (-g.degree(v), v))
    rows = sorted(order[:hsize])
    idx = {v: i for i, v in enumerate(rows)}
    common = np.zeros((len(rows), len(rows)), dtype=np.int64)
    stats.bump("table_cells", len(rows) ** 2)
    walk = 0
    for i, x in enumerate(rows):
        for y in g.adjacency[x]:
            cols = [idx[w] for w in g.adjacency[y] if w in idx]
            walk += len(g.adjacency[y])
            if cols:
                common[i, cols] += 1
    stats.bump("walk_steps", walk)
    value, witness = _best_pair(rows, _pair_value_matrix(g, rows, common))
    return SolveResult(value, witness, stats)


def pds2_heavy(g: PdsGraph, d: int, *, stats: OpStats | None = None) -> SolveResult:
    """Exact best pair among pairs whose vertices both have degree >= d.

    Common-neighbor counts come from one product over the columns of degree
    >= d plus a two-path walk over the light columns.
    """
    if d < 1:
        raise InputError("degree threshold must be >= 1")
    stats = stats if stats is not None else OpStats(regime="pds2-heavy")
    rows = [v for v in range(g.n) if g.degree(v) >= d]
    if len(rows) < 2:
        return SolveResult(0, (), stats)
    idx = {v: i for i, v in enumerate(rows)}
    heavy_cols = [v for v in range(g.n) if g.degree(v) >= d]
    adj = np.zeros((len(rows), g.n), dtype=bool)
    for i, v in enumerate(rows):
        adj[i, list(g.adjacency[v])] = True
    hc = adj[:, heavy_cols].astype(np.int64)
    common = hc @ hc.T
    stats.bump("dense_product_entries", int(common.size))
    walk = 0
    for y in range(g.n):
        if g.degree(y) >= d or g.degree(y) == 0:
            continue
        members = [idx[w] for w in g.adjacency[y] if w in idx]
        walk += len(g.adjacency[y]) ** 2
        if members:
            sel = np.array(members, dtype=np.int64)
            common[np.ix_(sel, sel)] += 1
    stats.bump("walk_steps", walk)
    value, witness = _best_pair(rows, _pair_value_matrix(g, rows, common))
    return SolveResult(value, witness, stats)


@dataclass(frozen=True)
class LayerContext:
    """Per-layer machinery: layer vertices, apex neighborhood split, the
    high-degree candidate partners, and the two-path pair tables."""

    d: int
    layer: tuple[int, ...]
    apex: int
    dominated: tuple[int, ...]
    rest: tuple[int, ...]
    heavy: tuple[int, ...]
    c_s: dict[tuple[int, int], int] = field(default_factory=dict)
    c_r: dict[tuple[int, int], int] = field(default_factory=dict)
    scan_constant: int = 0


@dataclass(frozen=True)
class LayerOutcome:
    kind: str  # "pair" | "certified-skip" | "empty-layer"
    result: SolveResult | None
    context: LayerContext | None
    reason: str = ""


def pds2_light_layer(g: PdsGraph, d: int, *, stats: OpStats | None = None) -> LayerOutcome:
    """Best pair meeting the degree layer [d, 2d), or a sound certificate that
    no globally optimal pair touches the layer.

    Requires 4d <= max degree.  Early exits: any vertex with >= 2d+1
    neighbors outside the apex's closed neighborhood beats every
    layer-touching pair; a high-degree vertex missing >= 4d+2 vertices of
    that closed neighborhood implies the first exit.
    """
    if d < 1 or 4 * d > g.max_degree:
        raise InputError("layer parameter must satisfy 1 <= d and 4d <= max degree")
    stats = stats if stats is not None else OpStats(regime="pds2-layer")
    layer = tuple(v for v in range(g.n) if d <= g.degree(v) < 2 * d)
    if not layer:
        return LayerOutcome("empty-layer", None, None)
    delta = g.max_degree
    apex = min(v for v in range(g.n) if g.degree(v) == delta)
    dominated = tuple(sorted(set(g.adjacency[apex]) | {apex}))
    dom_set = set(dominated)
    rest = tuple(v for v in range(g.n) if v not in dom_set)
    rest_set = set(rest)
    heavy = tuple(v for v in range(g.n) if g.degree(v) >= delta - 2 * d)

    rest_degree = [0] * g.n
    for v in range(g.n):
        rest_degree[v] = sum(1 for w in g.adjacency[v] if w in rest_set)
    base_ctx = LayerContext(d, layer, apex, dominated, rest, heavy)
    if any(rd >= 2 * d + 1 for rd in rest_degree):
        return LayerOutcome("certified-skip", None, base_ctx, "vertex with 2d+1 neighbors outside N[apex]")
    for v in heavy:
        missing = len(dom_set - set(g.adjacency[v]))
        if missing >= 4 * d + 2:
            return LayerOutcome("certified-skip", None, base_ctx, "heavy vertex missing 4d+2 of N[apex]")

    layer_set = set(layer)
    adj_sets = [set(g.adjacency[v]) for v in range(g.n)]
    c_s: dict[tuple[int, int], int] = {}
    c_r: dict[tuple[int, int], int] = {}
    triple_steps = 0
    for x in heavy:
        for s in dom_set - adj_sets[x]:
            for y in g.adjacency[s]:
                triple_steps += 1
                if y in layer_set:
                    c_s[(x, y)] = c_s.get((x, y), 0) + 1
        for r in adj_sets[x] & rest_set:
            for y in g.adjacency[r]:
                triple_steps += 1
                if y in layer_set:
                    c_r[(x, y)] = c_r.get((x, y), 0) + 1
    stats.bump("layer_triple_steps", triple_steps)

    best: tuple[int, tuple[int, ...]] = (-1, ())

    def closed_value(x: int, y: int) -> int:
        in_s = (g.degree(x) - rest_degree[x]) + c_s.get((x, y), 0)
        in_r = rest_degree[x] + rest_degree[y] - c_r.get((x, y), 0)
        return in_s + in_r + (0 if y in adj_sets[x] else 2)

    for (x, y) in sorted(c_s):
        cand = (closed_value(x, y), tuple(sorted((x, y))))
        if better_result(cand, best):
            best = cand

    # Uninitialized c_s pairs satisfy |N(x) u N(y)| = deg(x) + |N(y) cap R| -
    # c_r, so a scan in decreasing deg(x) + |N(y) cap R| order can stop once
    # the best value dominates the remaining score plus the closed-shift of 2.
    md = max(1, g.m * d)
    floor_count = ((len(c_s) + len(c_r)) // md + 1) * md
    by_rny: dict[int, list[int]] = {}
    for y in layer:
        by_rny.setdefault(rest_degree[y], []).append(y)
    by_deg: dict[int, list[int]] = {}
    for x in heavy:
        by_deg.setdefault(g.degree(x), []).append(x)
    scanned = 0
    for score in range(delta + 2 * d, -1, -1):
        if best[0] >= score + 2 and scanned >= floor_count:
            break
        for q in sorted(by_rny):
            for y in by_rny[q]:
                for x in by_deg.get(score - q, ()):
                    scanned += 1
                    if (x, y) in c_s:
                        continue
                    cand = (closed_value(x, y), tuple(sorted((x, y))))
                    if better_result(cand, best):
                        best = cand
    stats.bump("layer_pairs_scanned", scanned)
    ctx = LayerContext(d, layer, apex, dominated, rest, heavy, c_s, c_r, floor_count // md)
    if best[0] < 0:
        return LayerOutcome("empty-layer", None, ctx)
    return LayerOutcome("pair", SolveResult(best[0], best[1], stats), ctx)


def pds2_sparse(g: PdsGraph, *, omega: float = DEFAULT_OMEGA, stats: OpStats | None = None) -> SolveResult:
    """Exact k=2 optimum: heavy pairs once at the edge-count threshold, then
    doubling degree layers, plus the isolated-partner case."""
    stats = stats if stats is not None else OpStats(regime="pds2-sparse")
    n = g.n
    if n == 0:
        return SolveResult(0, (), stats)
    if n == 1:
        return SolveResult(1, (0,), stats)
    if g.m == 0:
        return SolveResult(2, (0, 1), stats)
    gamma = max(1, round(g.m ** ((omega - 1.0) / (omega + 1.0))))
    dstar = max(1, min(gamma, g.max_degree // 4 + 1))
    res = pds2_heavy(g, dstar, stats=stats)
    best = (res.value, res.witness) if res.witness else (-1, ())
    d = 1
    while d < dstar:
        out = pds2_light_layer(g, d, stats=stats)
        if out.kind == "pair" and out.result is not None:
            cand = (out.result.value, out.result.witness)
            if better_result(cand, best):
                best = cand
        d *= 2
    isolated = [v for v in range(n) if g.degree(v) == 0]
    if isolated:
        star = max(range(n), key=lambda v: (g.degree(v), -v))
        partner = next(v for v in isolated if v != star)
        cand = (g.degree(star) + 2, tuple(sorted((star, partner))))
        if better_result(cand, best):
            best = cand
    return SolveResult(best[0], best[1], stats)


def edge_solution_scan(
    g: PdsGraph,
    k: int,
    *,
    budget_entries: int = SCAN_BUDGET_ENTRIES,
    stats: OpStats | None = None,
) -> SolveResult | None:
    """Exact best k-set whose induced subgraph contains an edge, or None if no
    such set exists.

    Rows range over edge-containing (floor((k-2)/2) + 2)-subsets, columns over
    ceil((k-2)/2)-subsets; one integer product counts undominated vertices.
    """
    if k < 3:
        raise InputError("edge scan needs k >= 3")
    stats = stats if stats is not None else OpStats(regime="edge-scan")
    n = g.n
    if n < k or g.m == 0:
        return None
    r1 = (k - 2) // 2 + 2
    r2 = (k - 1) // 2
    adj_sets = [set(a) for a in g.adjacency]
    row_subsets = [
        p for p in combinations(range(n), r1) if any(b in adj_sets[a] for a, b in combinations(p, 2))
    ]
    if not row_subsets:
        return None
    cols = list(combinations(range(n), r2)) if r2 > 0 else [()]
    if len(row_subsets) * n + len(row_subsets) * len(cols) > budget_entries:
        raise ResourceLimitError("edge-containing scan exceeds entry budget")
    closed = np.zeros((n, n), dtype=bool)
    for v in range(n):
        closed[v, list(g.adjacency[v])] = True
        closed[v, v] = True
    a = np.ones((len(row_subsets), n), dtype=np.int64)
    for ri, p in enumerate(row_subsets):
        a[ri, closed[list(p)].any(axis=0)] = 0
    b = np.ones((n, len(cols)), dtype=np.int64)
    for ci, q in enumerate(cols):
        if q:
            b[closed[list(q)].any(axis=0), ci] = 0
    counts = a @ b
    stats.bump("scan_entries", int(counts.size))
    best: tuple[int, tuple[int, ...]] = (-1, ())
    for ri, p in enumerate(row_subsets):
        pset = set(p)
        for ci, q in enumerate(cols):
            if pset & set(q):
                continue
            cand = (n - int(counts[ri, ci]), tuple(sorted(pset | set(q))))
            if better_result(cand, best):
                best = cand
    if best[0] < 0:
        return None
    return SolveResult(best[0], best[1], stats)


def independent_partial_ds(
    g: PdsGraph,
    k: int,
    *,
    budget_entries: int = SCAN_BUDGET_ENTRIES,
    stats: OpStats | None = None,
) -> SolveResult:
    """Never exceeds the optimum; exact whenever some optimal solution is an
    independent set strictly beating every edge-containing k-set.

    Guesses a high-degree vertex and deletes its closed neighborhood while
    the instance is dense in high-degree vertices; otherwise restricts to
    moderately-high-degree vertices and runs the bundle-pair core.
    """
    if k < 2:
        raise InputError("independent route needs k >= 2")
    stats = stats if stats is not None else OpStats(regime="independent")
    n = g.n
    if n == 0:
        return SolveResult(0, (), stats)
    closed = g.closed_masks
    opened = g.open_masks
    memo: dict[tuple[int, int], tuple[int, tuple[int, ...]]] = {}

    def base_two(alive: int) -> tuple[int, tuple[int, ...]]:
        verts = ids_from_mask(alive)
        if not verts:
            return 0, ()
        sets = [tuple(ids_from_mask(closed[v] & alive)) for v in verts]
        cover = CoverInstance.from_sets(sets, n, validate=False)
        try:
            res = mm_baseline(cover, 2, budget_entries=budget_entries)
        except ResourceLimitError:
            res = brute_force(cover, 2)
        return res.value, tuple(sorted(verts[i] for i in res.witness))

    def rec(alive: int, kk: int, depth: int) -> tuple[int, tuple[int, ...]]:
        stats.note_depth(depth)
        if alive == 0 or kk == 0:
            return 0, ()
        key = (alive, kk)
        hit = memo.get(key)
        if hit is not None:
            return hit
        verts = ids_from_mask(alive)
        cdeg = {v: (closed[v] & alive).bit_count() for v in verts}
        if kk == 1:
            top = max(cdeg.values())
            v = next(x for x in verts if cdeg[x] == top)
            best = (top, (v,))
        elif kk == 2:
            best = base_two(alive)
        else:
            m_res = sum((opened[v] & alive).bit_count() for v in verts) // 2
            delta_res = max(((opened[v] & alive).bit_count() for v in verts), default=0)
            cmax = max(cdeg.values())
            h1 = [v for v in verts if cdeg[v] * kk >= cmax]
            if delta_res ** 5 >= m_res ** 2 or len(h1) <= 2 * kk * kk * (delta_res + 1):
                best = (0, ())
                for x in h1:
                    sub_val, sub_wit = rec(alive & ~closed[x], kk - 1, depth + 1)
                    cand = (cdeg[x] + sub_val, tuple(sorted((x,) + sub_wit)))
                    if better_result(cand, best):
                        best = cand
            else:
                h2 = [v for v in verts if cdeg[v] * 2 * kk >= cmax]
                h2.sort(key=lambda v: (-cdeg[v], v))
                kept = sorted(h2[: min(kk * (delta_res + 1) ** 2, len(h2))])
                sets = [tuple(ids_from_mask(closed[v] & alive)) for v in kept]
                cover = CoverInstance.from_sets(sets, n, validate=False)
                res = partial_ds_core(cover, kk, stats=stats)
                best = (res.value, tuple(sorted(kept[i] for i in res.witness)))
        memo[key] = best
        return best

    value, witness = rec((1 << n) - 1, min(k, n), 0)
    return SolveResult(value, witness, stats)


def pds_sparse(
    g: PdsGraph,
    k: int,
    *,
    omega: float = DEFAULT_OMEGA,
    budget_entries: int = SCAN_BUDGET_ENTRIES,
    stats: OpStats | None = None,
) -> SolveResult:
    """Exact sparse partial domination: k=2 routes to the layered solver;
    k>=3 combines the edge-containing scan with the independent-set route."""
    if k < 2:
        raise InputError("sparse solver needs k >= 2")
    stats = stats if stats is not None else OpStats(regime="pds-sparse")
    if k == 2:
        res = pds2_sparse(g, omega=omega, stats=stats)
        return res
    if g.n <= k:
        return SolveResult(g.n, tuple(range(g.n)), stats)
    best: tuple[int, tuple[int, ...]] = (-1, ())
    scan = edge_solution_scan(g, k, budget_entries=budget_entries, stats=stats)
    if scan is not None:
        best = (scan.value, scan.witness)
    ind = independent_partial_ds(g, k, budget_entries=budget_entries, stats=stats)
    if better_result((ind.value, ind.witness), best):
        best = (ind.value, ind.witness)
    return SolveResult(best[0], best[1], stats)
