"""Seeded random instance generators for tests, verification, and the CLI.

All randomness flows from one `random.Random` per call; identical seeds give
identical instances.
"""

from __future__ import annotations

import random

from .hardness import KhOvInstance, PartiteHypergraph
from .instances import CoverInstance, PdsGraph


def rng_for(seed: int) -> random.Random:
    return random.Random(seed)


def random_cover_instance(
    seed: int,
    *,
    n_max: int = 12,
    u_max: int = 12,
    style: str | None = None,
) -> CoverInstance:
    """Mixed-shape random set systems: membership coins, sized samples, and
    disjoint partition families (the latter keep element frequency at 1)."""
    rng = rng_for(seed)
    n = rng.randint(1, n_max)
    u = rng.randint(1, u_max)
    style = style or rng.choice(["bernoulli", "sized", "sparse", "partition"])
    sets: list[tuple[int, ...]] = []
    if style == "partition":
        labels = [rng.randrange(n) for _ in range(u)]
        sets = [tuple(y for y in range(u) if labels[y] == i) for i in range(n)]
    else:
        p = {"bernoulli": 0.35, "sized": 0.0, "sparse": 0.12}[style]
        for _ in range(n):
            if style == "sized":
                size = rng.randint(0, u)
                sets.append(tuple(sorted(rng.sample(range(u), size))))
            else:
                sets.append(tuple(y for y in range(u) if rng.random() < p))
    return CoverInstance.from_sets(sets, u, validate=False)


def random_pds_graph(seed: int, *, n_max: int = 12, dense: bool = False) -> PdsGraph:
    rng = rng_for(seed)
    n = rng.randint(1, n_max)
    p = rng.choice([0.08, 0.15, 0.3, 0.5] if not dense else [0.3, 0.5, 0.7])
    edges = [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < p]
    return PdsGraph.from_edges(n, edges, validate=False)


def random_graph_with_max_degree(seed: int, n: int, delta: int, *, fill: float = 0.35) -> PdsGraph:
    """Random graph capped at degree `delta`, with the cap attained."""
    rng = rng_for(seed)
    degs = [0] * n
    edges: set[tuple[int, int]] = set()
    target = int(fill * n * delta / 2)
    attempts = 0
    while len(edges) < target and attempts < 20 * target + 100:
        attempts += 1
        a = rng.randrange(n)
        b = rng.randrange(n)
        if a == b:
            continue
        key = (min(a, b), max(a, b))
        if key in edges or degs[a] >= delta or degs[b] >= delta:
            continue
        edges.add(key)
        degs[a] += 1
        degs[b] += 1
    # top up one vertex to the exact cap so the cap is the max degree
    v = max(range(n), key=lambda x: degs[x])
    for w in range(n):
        if degs[v] >= delta:
            break
        key = (min(v, w), max(v, w))
        if w != v and key not in edges and degs[w] < delta:
            edges.add(key)
            degs[v] += 1
            degs[w] += 1
    return PdsGraph.from_edges(n, sorted(edges), validate=False)


def random_khov(seed: int, k: int, h: int, n: int, d: int) -> KhOvInstance:
    rng = rng_for(seed)
    active = []
    for _ in range(d):
        active.append(tuple(sorted(rng.sample(range(k), h))))
    families = []
    for _ in range(k):
        fam = [tuple(rng.randint(0, 1) for _ in range(d)) for _ in range(n)]
        families.append(tuple(fam))
    return KhOvInstance.build(tuple(families), tuple(active), h)


def random_partite_hypergraph(
    seed: int, *, parts: int, per_part: int, h: int, edge_probability: float = 0.7
) -> PartiteHypergraph:
    from itertools import combinations, product

    rng = rng_for(seed)
    part_tuple = tuple(tuple(range(i * per_part, (i + 1) * per_part)) for i in range(parts))
    edges = set()
    for pidx in combinations(range(parts), h):
        for verts in product(*(part_tuple[pi] for pi in pidx)):
            if rng.random() < edge_probability:
                edges.add(frozenset(verts))
    return PartiteHypergraph(part_tuple, frozenset(edges), h)
