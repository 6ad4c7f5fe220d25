"""Canonical problem representations and basic operations.

A coverage instance is a bipartite set system: candidate sets over a fixed
universe, stored together with its transpose (element -> owning sets).  A
domination instance is a plain undirected graph.  Both are immutable after
construction and safe to share across threads; coverage evaluation works on
cached bitmasks, so concurrent evaluations need no shared scratch.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError
from .stats import OpStats

_PACK_THRESHOLD = 2048


def mask_from_ids(ids: Sequence[int], size: int) -> int:
    """Bitmask with bit i set for every i in `ids` (ids assumed in range)."""
    if len(ids) > _PACK_THRESHOLD:
        buf = np.zeros(size, dtype=np.uint8)
        buf[np.asarray(ids, dtype=np.int64)] = 1
        return int.from_bytes(np.packbits(buf, bitorder="little").tobytes(), "little")
    m = 0
    for e in ids:
        m |= 1 << e
    return m


def ids_from_mask(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def _check_sorted_unique(ids: Sequence[int], upper: int, what: str) -> None:
    prev = -1
    for e in ids:
        if not 0 <= e < upper:
            raise InputError(f"{what} id {e} out of range [0, {upper})")
        if e <= prev:
            raise InputError(f"{what} list not strictly sorted: {list(ids)}")
        prev = e


@dataclass(frozen=True)
class CoverInstance:
    """Candidate sets X over universe Y with bidirectional adjacency.

    `sets[i]` is the strictly sorted tuple of universe elements in set i;
    `element_owners[y]` is the strictly sorted tuple of sets containing y.
    Derived statistics are stored and re-checkable via `degree_profile`.
    """

    sets: tuple[tuple[int, ...], ...]
    element_owners: tuple[tuple[int, ...], ...]
    n: int
    u: int
    max_set_size: int
    max_frequency: int
    edge_count: int

    @classmethod
    def from_sets(cls, sets: Iterable[Sequence[int]], u: int, *, validate: bool = True) -> "CoverInstance":
        tsets = tuple(tuple(s) for s in sets)
        n = len(tsets)
        if u < 0:
            raise InputError("universe size must be nonnegative")
        if validate:
            for s in tsets:
                _check_sorted_unique(s, u, "element")
        owners: list[list[int]] = [[] for _ in range(u)]
        for i, s in enumerate(tsets):
            for e in s:
                owners[e].append(i)
        towners = tuple(tuple(o) for o in owners)
        m = sum(len(s) for s in tsets)
        ds = max((len(s) for s in tsets), default=0)
        df = max((len(o) for o in towners), default=0)
        return cls(tsets, towners, n, u, ds, df, m)

    def validate(self) -> None:
        """Re-derive all invariants; raises InputError on any violation."""
        if len(self.sets) != self.n or len(self.element_owners) != self.u:
            raise InputError("stored n/u inconsistent with adjacency")
        rebuilt = CoverInstance.from_sets(self.sets, self.u)
        if rebuilt.element_owners != self.element_owners:
            raise InputError("element_owners is not the transpose of sets")
        if (rebuilt.max_set_size, rebuilt.max_frequency, rebuilt.edge_count) != (
            self.max_set_size,
            self.max_frequency,
            self.edge_count,
        ):
            raise InputError("stored degree statistics do not match adjacency")
        for o in self.element_owners:
            _check_sorted_unique(o, self.n, "set")

    @cached_property
    def set_masks(self) -> tuple[int, ...]:
        return tuple(mask_from_ids(s, self.u) for s in self.sets)

    @cached_property
    def universe_mask(self) -> int:
        return (1 << self.u) - 1

    def neighborhood_mask(self, ids: Iterable[int]) -> int:
        m = 0
        masks = self.set_masks
        for i in ids:
            m |= masks[i]
        return m


def degree_profile(inst: CoverInstance) -> tuple[int, int, int]:
    """Recompute (max set size, max frequency, edge count) from adjacency."""
    ds = max((len(s) for s in inst.sets), default=0)
    df = max((len(o) for o in inst.element_owners), default=0)
    m = sum(len(s) for s in inst.sets)
    return ds, df, m


def coverage_value(inst: CoverInstance, chosen: Iterable[int], *, stats: OpStats | None = None) -> int:
    """Size of the union of the chosen sets; duplicate ids contribute once."""
    mask = 0
    masks = inst.set_masks
    for i in chosen:
        if not 0 <= i < inst.n:
            raise InputError(f"set id {i} out of range [0, {inst.n})")
        mask |= masks[i]
    if stats is not None:
        stats.bump("unions")
    return mask.bit_count()


def prune_candidates_with_map(inst: CoverInstance, k: int) -> tuple[CoverInstance, tuple[int, ...]]:
    """Keep only the min(k * max_frequency * max_set_size, n) highest-degree sets.

    Ties in the degree sort break by ascending set id.  The universe is left
    untouched: dropped candidates still count toward coverage of whatever the
    kept candidates reach.  Returns the shrunk instance plus the original ids
    of the kept sets, in ascending id order.
    """
    if k < 1:
        raise InputError("k must be >= 1")
    limit = min(k * inst.max_frequency * inst.max_set_size, inst.n)
    if limit >= inst.n:
        return inst, tuple(range(inst.n))
    order = sorted(range(inst.n), key=lambda i: (-len(inst.sets[i]), i))
    kept = tuple(sorted(order[:limit]))
    sub = CoverInstance.from_sets([inst.sets[i] for i in kept], inst.u, validate=False)
    return sub, kept


def prune_candidates(inst: CoverInstance, k: int) -> CoverInstance:
    return prune_candidates_with_map(inst, k)[0]


@dataclass(frozen=True)
class PdsGraph:
    """Simple undirected graph with per-vertex sorted neighbor lists."""

    adjacency: tuple[tuple[int, ...], ...]
    n: int
    m: int
    max_degree: int

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], *, validate: bool = True) -> "PdsGraph":
        if n < 0:
            raise InputError("vertex count must be nonnegative")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for a, b in edges:
            if not (0 <= a < n and 0 <= b < n):
                raise InputError(f"edge ({a}, {b}) out of range [0, {n})")
            if a == b:
                raise InputError(f"self-loop at vertex {a}")
            nbrs[a].add(b)
            nbrs[b].add(a)
        adjacency = tuple(tuple(sorted(s)) for s in nbrs)
        m = sum(len(a) for a in adjacency) // 2
        delta = max((len(a) for a in adjacency), default=0)
        g = cls(adjacency, n, m, delta)
        if validate:
            g.validate()
        return g

    @classmethod
    def from_adjacency(cls, adjacency: Sequence[Sequence[int]], *, validate: bool = True) -> "PdsGraph":
        adj = tuple(tuple(a) for a in adjacency)
        n = len(adj)
        m = sum(len(a) for a in adj) // 2
        delta = max((len(a) for a in adj), default=0)
        g = cls(adj, n, m, delta)
        if validate:
            g.validate()
        return g

    def validate(self) -> None:
        for v, nbrs in enumerate(self.adjacency):
            _check_sorted_unique(nbrs, self.n, "vertex")
            for w in nbrs:
                if w == v:
                    raise InputError(f"self-loop at vertex {v}")
                if v not in self.adjacency[w]:
                    raise InputError(f"asymmetric adjacency between {v} and {w}")
        if self.max_degree != max((len(a) for a in self.adjacency), default=0):
            raise InputError("stored max degree does not match adjacency")
        if self.m != sum(len(a) for a in self.adjacency) // 2:
            raise InputError("stored edge count does not match adjacency")

    @cached_property
    def closed_masks(self) -> tuple[int, ...]:
        return tuple(mask_from_ids(nbrs, self.n) | (1 << v) for v, nbrs in enumerate(self.adjacency))

    @cached_property
    def open_masks(self) -> tuple[int, ...]:
        return tuple(mask_from_ids(nbrs, self.n) for nbrs in self.adjacency)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])


def pds_to_cover(g: PdsGraph) -> CoverInstance:
    """Closed-neighborhood bipartite lift: set for vertex v is N[v].

    Maximum coverage on the result coincides with partial domination on g;
    both sides of the bipartition are copies of V(g), so set ids and element
    ids are vertex ids.
    """
    sets = [tuple(sorted(set(g.adjacency[v]) | {v})) for v in range(g.n)]
    return CoverInstance.from_sets(sets, g.n, validate=False)


@dataclass(frozen=True)
class SolveResult:
    """Optimum value with a witness of at most k chosen set/vertex ids."""

    value: int
    witness: tuple[int, ...]
    stats: OpStats = field(default_factory=OpStats, compare=False)

    def report_lines(self) -> list[str]:
        lines = [f"value={self.value}", "witness=" + " ".join(str(w) for w in self.witness)]
        lines.extend(self.stats.as_lines())
        return lines


def better_result(a: tuple[int, tuple[int, ...]], b: tuple[int, tuple[int, ...]]) -> bool:
    """True if candidate (value, witness) `a` beats `b`; ties break toward the
    lexicographically smaller witness."""
    if a[0] != b[0]:
        return a[0] > b[0]
    return a[1] < b[1]
