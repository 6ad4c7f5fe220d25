"""Independent reference oracles for the tests.

Everything here works on plain Python sets and exhaustive enumeration, on
purpose: these are the yardsticks the library's bitmask/matrix paths are
measured against, so they must not share code with them.
"""

from itertools import combinations, product


def union_size(sets, chosen):
    out = set()
    for i in chosen:
        out |= set(sets[i])
    return len(out)


def cover_oracle(sets, k):
    """(value, lexicographically smallest witness) by exhaustive search."""
    n = len(sets)
    kk = min(k, n)
    if kk == 0:
        return 0, ()
    best = (-1, ())
    for subset in combinations(range(n), kk):
        v = union_size(sets, subset)
        if v > best[0]:
            best = (v, subset)
    return best


def closed_neighborhoods(adjacency):
    return [set(nbrs) | {v} for v, nbrs in enumerate(adjacency)]


def pds_oracle(adjacency, k):
    closed = closed_neighborhoods(adjacency)
    n = len(adjacency)
    kk = min(k, n)
    if kk == 0:
        return 0, ()
    best = (-1, ())
    for subset in combinations(range(n), kk):
        out = set()
        for v in subset:
            out |= closed[v]
        if len(out) > best[0]:
            best = (len(out), subset)
    return best


def pds_oracle_restricted(adjacency, pairs):
    closed = closed_neighborhoods(adjacency)
    best = -1
    for a, b in pairs:
        best = max(best, len(closed[a] | closed[b]))
    return best


def all_hyperedges(sets):
    """Cubic scan: all candidate triples sharing an element."""
    n = len(sets)
    out = set()
    for triple in combinations(range(n), 3):
        if set(sets[triple[0]]) & set(sets[triple[1]]) & set(sets[triple[2]]):
            out.add(triple)
    return out


def all_bundle_vertex_sets(sets, c):
    """Vertex sets of all c-bundles straight from the recursive definition."""
    n = len(sets)
    edges = all_hyperedges(sets)
    level = {frozenset((v,)) for v in range(n)}
    for _ in range(c):
        nxt = set()
        for bundle in level:
            for x, y in combinations(set(range(n)) - bundle, 2):
                if any(tuple(sorted((b, x, y))) in edges for b in bundle):
                    nxt.add(bundle | {x, y})
        level = nxt
    return {tuple(sorted(b)) for b in level}


def khov_product_reference(families, active, choice):
    """Generalized inner product straight from the definition: sum over
    active-index tuples of the coordinate counts where all are 1."""
    h = len(active[0]) if active else 0
    k = len(families)
    total = 0
    for tup in combinations(range(k), h):
        for y, act in enumerate(active):
            if tuple(sorted(act)) != tup:
                continue
            if all(families[i][choice[i]][y] == 1 for i in tup):
                total += 1
    return total


def khov_opt_reference(families, active, mode):
    n = len(families[0])
    k = len(families)
    vals = [khov_product_reference(families, active, c) for c in product(range(n), repeat=k)]
    return max(vals) if mode == "max" else min(vals)
