"""Weighted complete tripartite super-node graph and its maximum triangle.

Super nodes are candidate subsets of fixed sizes per part.  Node weights are
covered-element counts against a restricted universe; edge weights are the
negated pairwise double-count, so a triangle's six-term weight is the
inclusion-exclusion value truncated at arity three.  It therefore never
exceeds the true union size, with equality whenever the three parts form an
arity-reducing hypercut.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Sequence

import numpy as np

from .errors import InputError, ResourceLimitError
from .instances import CoverInstance
from .stats import OpStats

DEFAULT_PART_BUDGET = 2_000_000


def part_sizes(k_prime: int) -> tuple[int, int, int]:
    """Balanced part sizes: ceil(k/3), ceil((k-1)/3), floor(k/3)."""
    return (k_prime + 2) // 3, (k_prime + 1) // 3, k_prime // 3


@dataclass(frozen=True)
class SuperNodeGraph:
    """Complete tripartite graph over candidate subsets with integer weights.

    A part of size zero holds the single empty super node of weight zero, so
    the six-term triangle weight degenerates correctly for small k.
    """

    parts: tuple[tuple[tuple[int, ...], ...], ...]
    universe: tuple[int, ...]
    node_weights: tuple[np.ndarray, np.ndarray, np.ndarray]
    edge_weights: dict[tuple[int, int], np.ndarray]
    weight_bound: int

    def node_weight(self, part: int, idx: int) -> int:
        return int(self.node_weights[part][idx])

    def edge_weight(self, part_a: int, idx_a: int, part_b: int, idx_b: int) -> int:
        if part_a > part_b:
            part_a, part_b, idx_a, idx_b = part_b, part_a, idx_b, idx_a
        return int(self.edge_weights[(part_a, part_b)][idx_a, idx_b])

    def triangle_weight(self, i: int, j: int, l: int) -> int:
        return (
            self.node_weight(0, i)
            + self.node_weight(1, j)
            + self.node_weight(2, l)
            + self.edge_weight(0, i, 1, j)
            + self.edge_weight(0, i, 2, l)
            + self.edge_weight(1, j, 2, l)
        )


def build_tripartite(
    inst: CoverInstance,
    candidates: Sequence[int],
    universe: Sequence[int],
    k_prime: int,
    *,
    budget: int = DEFAULT_PART_BUDGET,
    stats: OpStats | None = None,
) -> SuperNodeGraph:
    """Materialize all super nodes of the three balanced sizes over `candidates`
    with weights computed against `universe` only."""
    if k_prime < 1:
        raise InputError("k_prime must be >= 1")
    cand = tuple(candidates)
    uni = tuple(universe)
    sizes = part_sizes(k_prime)
    if any(s > len(cand) for s in sizes):
        raise InputError(f"part sizes {sizes} exceed candidate pool of {len(cand)}")
    if comb(len(cand), sizes[0]) > budget:
        raise ResourceLimitError(
            f"tripartite part of {comb(len(cand), sizes[0])} super nodes exceeds budget {budget}"
        )

    pos = {e: i for i, e in enumerate(uni)}
    cand_rows = np.zeros((len(cand), len(uni)), dtype=bool)
    for row, cid in enumerate(cand):
        hits = [pos[e] for e in inst.sets[cid] if e in pos]
        cand_rows[row, hits] = True
    row_of = {cid: i for i, cid in enumerate(cand)}

    parts: list[tuple[tuple[int, ...], ...]] = []
    covers: list[np.ndarray] = []
    for size in sizes:
        members = tuple(combinations(cand, size)) if size > 0 else ((),)
        cover = np.zeros((len(members), len(uni)), dtype=bool)
        for idx, node in enumerate(members):
            for cid in node:
                cover[idx] |= cand_rows[row_of[cid]]
        parts.append(members)
        covers.append(cover)

    node_weights = tuple(c.sum(axis=1).astype(np.int64) for c in covers)
    edge_weights: dict[tuple[int, int], np.ndarray] = {}
    for a, b in ((0, 1), (0, 2), (1, 2)):
        edge_weights[(a, b)] = -(covers[a].astype(np.int64) @ covers[b].astype(np.int64).T)
    if stats is not None:
        stats.bump("supernodes_built", sum(len(p) for p in parts))
    bound = max(1, k_prime) * inst.max_set_size
    return SuperNodeGraph(tuple(parts), uni, node_weights, edge_weights, bound)


@dataclass(frozen=True)
class TriangleResult:
    weight: int
    members: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]

    @property
    def chosen(self) -> tuple[int, ...]:
        out: set[int] = set()
        for part in self.members:
            out.update(part)
        return tuple(sorted(out))


def _select_best(weights: np.ndarray) -> int:
    """Flat index of the maximum entry; ties break to the first (row-major)
    occurrence, i.e. the lexicographically smallest (i, j, l)."""
    return int(np.argmax(weights))


def max_weight_triangle(swg: SuperNodeGraph, *, stats: OpStats | None = None) -> TriangleResult:
    """Exact maximum of the six-term triangle weight, deterministic witness."""
    w1, w2, w3 = swg.node_weights
    e12 = swg.edge_weights[(0, 1)]
    e13 = swg.edge_weights[(0, 2)]
    e23 = swg.edge_weights[(1, 2)]
    total = w1[:, None, None] + w2[None, :, None] + w3[None, None, :]
    total = total + e12[:, :, None]
    total = total + e13[:, None, :]
    total = total + e23[None, :, :]
    if stats is not None:
        stats.bump("triangles_scanned", int(total.size))
    flat = _select_best(total)
    i, j, l = np.unravel_index(flat, total.shape)
    members = (swg.parts[0][i], swg.parts[1][j], swg.parts[2][l])
    return TriangleResult(int(total[i, j, l]), members)
