"""Constructive hardness reductions as adversarial instance generators.

Vector families with per-coordinate active index sets reduce to coverage and
domination instances through grouping and penalty gadgets; regularization
gadgets equalize all lower-arity inner products first so the coverage value
becomes an affine function of the top-arity product.  Each generator emits a
certificate (thresholds plus the vector-to-vertex mapping) that small-scale
verification can check by brute force on both sides.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from math import ceil, comb

from .errors import InputError
from .instances import CoverInstance, PdsGraph, mask_from_ids
from .oracles import brute_force

GADGET_BASE = 100  # literal gadget constant; multiplier may only increase it


@dataclass(frozen=True)
class KhOvInstance:
    """k vector families over {0,1}^d where each coordinate has exactly h
    active families (0-based indices); inactive bits are canonicalized to 0
    since no product ever reads them."""

    families: tuple[tuple[tuple[int, ...], ...], ...]
    active: tuple[tuple[int, ...], ...]
    h: int

    @property
    def k(self) -> int:
        return len(self.families)

    @property
    def d(self) -> int:
        return len(self.active)

    @property
    def n_vectors(self) -> int:
        return len(self.families[0]) if self.families else 0

    @classmethod
    def build(cls, families, active, h: int) -> "KhOvInstance":
        fams = tuple(tuple(tuple(int(b) for b in vec) for vec in fam) for fam in families)
        act = tuple(tuple(sorted(a)) for a in active)
        k = len(fams)
        if k == 0 or h < 1 or h > k:
            raise InputError("need k >= h >= 1 families")
        sizes = {len(f) for f in fams}
        if len(sizes) != 1:
            raise InputError("families must have equal cardinality")
        d = len(act)
        for a in act:
            if len(a) != h or len(set(a)) != h or any(not 0 <= i < k for i in a):
                raise InputError(f"coordinate needs exactly {h} distinct active indices in [0, {k})")
        canon = []
        for i, fam in enumerate(fams):
            vecs = []
            for vec in fam:
                if len(vec) != d:
                    raise InputError("vector dimension disagrees with active-index table")
                vecs.append(tuple(vec[y] if i in act[y] else 0 for y in range(d)))
            canon.append(tuple(vecs))
        return cls(tuple(canon), act, h)

    def block_of(self) -> dict[tuple[int, ...], list[int]]:
        """Coordinates grouped by their exact active index tuple."""
        out: dict[tuple[int, ...], list[int]] = {}
        for y, a in enumerate(self.active):
            out.setdefault(a, []).append(y)
        return out


def tuple_product(inst: KhOvInstance, indices: tuple[int, ...], vectors: tuple[int, ...]) -> int:
    """Number of coordinates whose active set contains `indices` where the
    chosen vectors are all 1 (the r-ary product for r <= h)."""
    if len(set(indices)) != len(indices) or len(indices) > inst.h:
        raise InputError("indices must be distinct and at most h of them")
    iset = set(indices)
    count = 0
    for y in range(inst.d):
        if not iset <= set(inst.active[y]):
            continue
        if all(inst.families[i][vectors[pos]][y] == 1 for pos, i in enumerate(indices)):
            count += 1
    return count


def khov_product(inst: KhOvInstance, choice: tuple[int, ...]) -> int:
    """Generalized inner product of one vector per family: the number of
    coordinates whose h active vectors are all 1."""
    if len(choice) != inst.k:
        raise InputError("one vector index per family required")
    total = 0
    for y, act in enumerate(inst.active):
        if all(inst.families[i][choice[i]][y] == 1 for i in act):
            total += 1
    return total


def khov_opt(inst: KhOvInstance, mode: str) -> tuple[int, tuple[int, ...]]:
    """Brute-force extreme of the generalized product over all choices."""
    if mode not in ("max", "min"):
        raise InputError("mode must be 'max' or 'min'")
    best_val = None
    best_choice: tuple[int, ...] = ()
    for choice in product(range(inst.n_vectors), repeat=inst.k):
        val = khov_product(inst, choice)
        if best_val is None or (val > best_val if mode == "max" else val < best_val):
            best_val, best_choice = val, choice
    return (best_val or 0), best_choice


def is_r_regular(inst: KhOvInstance, r: int) -> bool:
    """Exhaustive check that all r-ary products across distinct families agree."""
    seen: set[int] = set()
    for indices in combinations(range(inst.k), r):
        for vectors in product(range(inst.n_vectors), repeat=r):
            seen.add(tuple_product(inst, indices, vectors))
            if len(seen) > 1:
                return False
    return True


def _append_complement_blocks(inst: KhOvInstance, r: int) -> KhOvInstance:
    """Append, per r-subset S of families, one block per nonzero r-bit pattern
    holding the pattern-complemented copies of the S-vectors (zeros
    elsewhere), so every r-ary product becomes the input dimension."""
    k, h, d = inst.k, inst.h, inst.d
    new_active: list[tuple[int, ...]] = list(inst.active)
    new_cols: list[tuple[tuple[int, ...], int]] = []  # (subset, pattern) per appended block
    for subset in combinations(range(k), r):
        extras = [i for i in range(k) if i not in subset][: h - r]
        act = tuple(sorted(subset + tuple(extras)))
        for pattern in range(1, 1 << r):
            new_cols.append((subset, pattern))
            new_active.extend([act] * d)
    fams = []
    for i, fam in enumerate(inst.families):
        vecs = []
        for vec in fam:
            bits = list(vec)
            for subset, pattern in new_cols:
                if i not in subset:
                    bits.extend([0] * d)
                else:
                    pos = subset.index(i)
                    flip = (pattern >> pos) & 1
                    bits.extend([1 - b if flip else b for b in vec])
            vecs.append(tuple(bits))
        fams.append(tuple(vecs))
    return KhOvInstance.build(fams, tuple(new_active), h)


def regularize_r(inst: KhOvInstance, r: int) -> KhOvInstance:
    """Make all r-ary products equal (to the input dimension) while leaving
    every higher-arity product unchanged.  Requires r < h."""
    if not 1 <= r < inst.h:
        raise InputError("regularization level must satisfy 1 <= r < h")
    return _append_complement_blocks(inst, r)


def regularize_full(inst: KhOvInstance) -> KhOvInstance:
    """Apply level regularization for r = h-1 down to 1; h-ary products are
    preserved throughout."""
    out = inst
    for r in range(inst.h - 1, 0, -1):
        out = regularize_r(out, r)
    return out


def ov_to_maxip(inst: KhOvInstance) -> tuple[KhOvInstance, int]:
    """Lift orthogonality to a maximization threshold: after top-level
    complement blocks, zeroing the original coordinates flips each h-ary
    product p into d - p, so an orthogonal tuple exists iff the maximum
    generalized product reaches t = C(k, h) * d."""
    d = inst.d
    lifted = _append_complement_blocks(inst, inst.h)
    fams = tuple(
        tuple(tuple(0 if y < d else b for y, b in enumerate(vec)) for vec in fam) for fam in lifted.families
    )
    out = KhOvInstance.build(fams, lifted.active, inst.h)
    return out, comb(inst.k, inst.h) * d


@dataclass(frozen=True)
class ReductionOutput:
    """A generated instance plus the certificate needed to verify it."""

    kind: str  # "cover" or "pds"
    k: int
    h: int
    direction: str  # "min" (h even) or "max" (h odd)
    t: int
    alpha: int
    predicted: int
    cover: CoverInstance | None
    graph: PdsGraph | None
    mapping: dict[tuple[int, int], int]
    x_ids: tuple[int, ...]
    inventory: dict[str, int] = field(default_factory=dict)


def _padded_blocks(inst: KhOvInstance) -> tuple[dict[tuple[int, ...], list[int]], int]:
    """Blocks by active tuple, padded with -1 (all-zero coordinates) to a
    common per-block size."""
    blocks = inst.block_of()
    d_prime = max((len(c) for c in blocks.values()), default=0)
    padded = {t: c + [-1] * (d_prime - len(c)) for t, c in blocks.items()}
    return padded, d_prime


def _build_bipartite(
    inst: KhOvInstance,
    group_capacity: int,
    p_size: int,
    s: int,
) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]], int, dict[str, int]]:
    """Shared builder: adjacency in both directions over the gadget universe.

    X vertex for (family i, vector j) has id i * N + j.  Universe layout is
    all coordinate-copy blocks first, then the same-family penalty blocks.
    Penalty elements of one block share a single owner tuple, which keeps
    memory linear in the number of elements rather than edges.
    """
    k, n_vec = inst.k, inst.n_vectors
    padded, d_prime = _padded_blocks(inst)
    group_of = [j // group_capacity for j in range(n_vec)]

    sets: list[list[int]] = [[] for _ in range(k * n_vec)]
    owners: list[tuple[int, ...]] = []
    next_id = 0
    for t in sorted(padded):
        coords = padded[t]
        for gs in product(range(s), repeat=inst.h):
            base = next_id
            next_id += d_prime
            block_owners: list[list[int]] = [[] for _ in range(d_prime)]
            for pos, fam in enumerate(t):
                g = gs[pos]
                for j in range(n_vec):
                    if group_of[j] != g:
                        continue
                    vec = inst.families[fam][j]
                    owner = fam * n_vec + j
                    for off, y in enumerate(coords):
                        if y >= 0 and vec[y] == 1:
                            sets[owner].append(base + off)
                            block_owners[off].append(owner)
            owners.extend(tuple(sorted(o)) for o in block_owners)
    d_universe = next_id
    for i in range(k):
        for gj, gl in combinations(range(s), 2):
            base = next_id
            next_id += p_size
            members = tuple(
                i * n_vec + j for j in range(n_vec) if group_of[j] in (gj, gl)
            )
            owners.extend([members] * p_size)
            block = range(base, base + p_size)
            for owner in members:
                sets[owner].extend(block)
    inventory = {
        "d_prime": d_prime,
        "s": s,
        "p_size": p_size,
        "d_universe": d_universe,
        "universe": next_id,
        "group_capacity": group_capacity,
    }
    # Each owner visits coordinate blocks in ascending base order and penalty
    # ranges afterwards, so the lists arrive sorted.
    return [tuple(adj) for adj in sets], owners, next_id, inventory


def _require_regular(inst: KhOvInstance) -> None:
    for r in range(1, inst.h):
        if not is_r_regular(inst, r):
            raise InputError(f"instance is not {r}-regular; apply regularize_full first")


def _inclusion_exclusion_threshold(masks: list[int], k: int, n_vec: int, h: int) -> int:
    """Sum over arities 1..h-1 of signed intersection sizes for the canonical
    one-per-family choice (constant over choices by regularity)."""
    chosen = [masks[i * n_vec] for i in range(k)]
    total = 0
    for r in range(1, h):
        sign = 1 if r % 2 == 1 else -1
        for subset in combinations(range(k), r):
            inter = chosen[subset[0]]
            for i in subset[1:]:
                inter &= chosen[i]
            total += sign * inter.bit_count()
    return total


def reduce_to_cover(
    inst: KhOvInstance,
    *,
    max_frequency: int | None = None,
    multiplier: int = 1,
) -> ReductionOutput:
    """Coverage instance whose optimum is t + product (h odd) or t - product
    (h even) for the extreme generalized product of the input.

    Requires the input to be r-regular for every r < h.  Group capacity caps
    element frequency; the penalty blocks make any optimal solution take one
    vector per family.
    """
    if multiplier < 1:
        raise InputError("gadget multiplier has a floor of 1")
    _require_regular(inst)
    if inst.n_vectors < 1:
        raise InputError("need at least one vector per family")
    k, h, n_vec = inst.k, inst.h, inst.n_vectors
    cap = max_frequency if max_frequency is not None else n_vec
    if cap < 1 or cap > n_vec:
        raise InputError("max_frequency must lie in [1, vectors per family]")
    s = max(2, ceil(n_vec / cap))
    _, d_prime = _padded_blocks(inst)
    p_size = multiplier * GADGET_BASE * k**k * max(1, d_prime) * s ** (h - 2)
    sets, owners, universe, inventory = _build_bipartite(inst, cap, p_size, s)
    ds = max((len(x) for x in sets), default=0)
    df = max((len(o) for o in owners), default=0)
    cover = CoverInstance(tuple(sets), tuple(owners), len(sets), universe, ds, df, sum(len(x) for x in sets))
    masks = [mask_from_ids(adj, universe) for adj in sets]
    t = _inclusion_exclusion_threshold(masks, k, n_vec, h)
    direction = "max" if h % 2 == 1 else "min"
    alpha, _ = khov_opt(inst, direction)
    predicted = t + alpha if h % 2 == 1 else t - alpha
    mapping = {(i, j): i * n_vec + j for i in range(k) for j in range(n_vec)}
    return ReductionOutput(
        "cover", k, h, direction, t, alpha, predicted, cover, None, mapping, tuple(range(k * n_vec)), inventory
    )


def reduce_to_pds(
    inst: KhOvInstance,
    *,
    degree: int | None = None,
    pad_to: int | None = None,
    multiplier: int = 1,
) -> ReductionOutput:
    """Monochromatic variant: the bipartite gadget graph read as a plain
    graph, with the penalty blocks sized to also dominate stray universe
    picks; optionally padded with isolated vertices.

    Gadget elements take ids 0..universe-1 and vector vertices follow, so the
    vector side can reuse the element-id adjacency unchanged.
    """
    if multiplier < 1:
        raise InputError("gadget multiplier has a floor of 1")
    _require_regular(inst)
    if inst.n_vectors < 1:
        raise InputError("need at least one vector per family")
    k, h, n_vec = inst.k, inst.h, inst.n_vectors
    delta = degree if degree is not None else n_vec
    if delta < 1:
        raise InputError("degree parameter must be >= 1")
    cap = min(n_vec, delta)
    s = max(2, ceil(n_vec / cap))
    _, d_prime = _padded_blocks(inst)
    p_size = multiplier * GADGET_BASE * k**k * max(1, d_prime) * max(s ** (h - 2), ceil(delta / s))
    sets, owners, universe, inventory = _build_bipartite(inst, cap, p_size, s)
    n_x = k * n_vec
    total = n_x + universe
    if pad_to is not None and pad_to > total:
        total = pad_to
    shift_cache: dict[int, tuple[int, ...]] = {}

    def shifted(owner_tuple: tuple[int, ...]) -> tuple[int, ...]:
        key = id(owner_tuple)
        got = shift_cache.get(key)
        if got is None:
            got = tuple(universe + x for x in owner_tuple)
            shift_cache[key] = got
        return got

    adjacency = [shifted(o) for o in owners]
    adjacency.extend(sets)
    adjacency.extend([()] * (total - n_x - universe))
    m = sum(len(x) for x in sets)
    delta_graph = max(
        max((len(x) for x in sets), default=0), max((len(o) for o in owners), default=0)
    )
    graph = PdsGraph(tuple(adjacency), total, m, delta_graph)
    x_ids = tuple(range(universe, universe + n_x))
    masks = [mask_from_ids(list(adj) + [universe + x], total) for x, adj in enumerate(sets)]
    t = _inclusion_exclusion_threshold(masks, k, n_vec, h)
    direction = "max" if h % 2 == 1 else "min"
    alpha, _ = khov_opt(inst, direction)
    predicted = t + alpha if h % 2 == 1 else t - alpha
    mapping = {(i, j): universe + i * n_vec + j for i in range(k) for j in range(n_vec)}
    inventory = dict(inventory)
    inventory["n_x"] = n_x
    inventory["padded_isolated"] = total - n_x - universe
    return ReductionOutput(
        "pds", k, h, direction, t, alpha, predicted, None, graph, mapping, x_ids, inventory
    )


def sparse_pds_reduction(inst: KhOvInstance, m: int, *, multiplier: int = 1) -> ReductionOutput:
    """Edge-budgeted variant: the degree parameter follows the sparse tradeoff
    m^((h-1)/(2h-1))."""
    if m < 1:
        raise InputError("edge budget must be >= 1")
    h = inst.h
    delta = max(1, round(m ** ((h - 1) / (2 * h - 1))))
    return reduce_to_pds(inst, degree=delta, multiplier=multiplier)


def verify_cover_reduction(out: ReductionOutput) -> bool:
    """Double brute force: coverage optimum must equal the certified value."""
    if out.kind != "cover" or out.cover is None:
        raise InputError("not a coverage reduction output")
    return brute_force(out.cover, out.k).value == out.predicted


def _x_only_optima(masks: list[int], ids: tuple[int, ...], k: int) -> list[int]:
    best = [0] * (k + 1)
    for j in range(1, k + 1):
        top = 0
        for subset in combinations(range(len(ids)), j):
            mask = 0
            for i in subset:
                mask |= masks[i]
            top = max(top, mask.bit_count())
        best[j] = top
    return best


def verify_pds_reduction(out: ReductionOutput) -> bool:
    """Check the certified optimum: exhaustive over vector-side k-subsets plus
    a sound bound confining optima away from gadget-side vertices.

    Any solution using j vector-side vertices covers at most the j-subset
    optimum plus (k - j) times the largest gadget-side closed neighborhood;
    when that is strictly below the vector-side optimum for every j < k, the
    vector-side exhaustive value is the global optimum.
    """
    if out.kind != "pds" or out.graph is None:
        raise InputError("not a domination reduction output")
    g = out.graph
    x_masks = [mask_from_ids(list(g.adjacency[x]) + [x], g.n) for x in out.x_ids]
    best = _x_only_optima(x_masks, out.x_ids, out.k)
    if best[out.k] != out.predicted:
        return False
    x_set = set(out.x_ids)
    max_other = max((len(g.adjacency[v]) + 1 for v in range(g.n) if v not in x_set), default=0)
    for j in range(out.k):
        if best[j] + (out.k - j) * max_other >= best[out.k]:
            # Bound inconclusive; only feasible to settle exhaustively when tiny.
            if g.n <= 60:
                return brute_force_pds_value(g, out.k) == out.predicted
            return False
    return True


def brute_force_pds_value(g: PdsGraph, k: int) -> int:
    closed = g.closed_masks
    kk = min(k, g.n)
    best = 0
    for subset in combinations(range(g.n), kk):
        mask = 0
        for v in subset:
            mask |= closed[v]
        best = max(best, mask.bit_count())
    return best


@dataclass(frozen=True)
class PartiteHypergraph:
    """h-uniform hypergraph whose vertex set is partitioned into parts; edges
    take at most one vertex per part."""

    parts: tuple[tuple[int, ...], ...]
    edges: frozenset[frozenset[int]]
    h: int

    def __post_init__(self):
        owner: dict[int, int] = {}
        for pi, part in enumerate(self.parts):
            for v in part:
                if v in owner:
                    raise InputError(f"vertex {v} appears in two parts")
                owner[v] = pi
        for e in self.edges:
            if len(e) != self.h:
                raise InputError("edges must have exactly h vertices")
            touched = [owner.get(v) for v in e]
            if None in touched:
                raise InputError("edge uses a vertex outside all parts")
            if len(set(touched)) != self.h:
                raise InputError("edges must touch h distinct parts")

    def part_of(self) -> dict[int, int]:
        return {v: pi for pi, part in enumerate(self.parts) for v in part}


def hyperclique_to_khov(
    hg: PartiteHypergraph, q: int
) -> tuple[KhOvInstance, dict[int, tuple[tuple[int, ...], ...]]]:
    """Vectors are q-tuples of vertices (one per consecutive part block);
    coordinates are non-edges, with a bit set when the tuple picks every
    non-edge vertex lying in its blocks.  A hyperclique exists iff some
    choice has generalized product zero."""
    if q < 1:
        raise InputError("block width q must be >= 1")
    if len(hg.parts) % q != 0:
        raise InputError("part count must be divisible by q")
    k = len(hg.parts) // q
    h = hg.h
    if k < h:
        raise InputError("need at least h vector families")
    part_of = hg.part_of()
    non_edges = []
    for part_idx in combinations(range(len(hg.parts)), h):
        for verts in product(*(hg.parts[pi] for pi in part_idx)):
            e = frozenset(verts)
            if e not in hg.edges:
                non_edges.append(tuple(sorted(verts)))
    non_edges.sort()
    active = []
    for e in non_edges:
        blocks = sorted({part_of[v] // q for v in e})
        filler = [i for i in range(k) if i not in blocks]
        active.append(tuple(sorted(blocks + filler[: h - len(blocks)])))
    families = []
    tuple_maps: dict[int, tuple[tuple[int, ...], ...]] = {}
    for i in range(k):
        combos = tuple(product(*(hg.parts[q * i + dj] for dj in range(q))))
        tuple_maps[i] = combos
        vecs = []
        for combo in combos:
            chosen = set(combo)
            bits = []
            for e in non_edges:
                mine = [v for v in e if part_of[v] // q == i]
                bits.append(1 if all(v in chosen for v in mine) else 0)
            vecs.append(tuple(bits))
        families.append(tuple(vecs))
    inst = KhOvInstance.build(families, tuple(active), h)
    mapping = {i: tuple_maps[i] for i in range(k)}
    return inst, mapping
