"""Three-uniform hypergraph structure over candidate sets.

Three candidates form a hyperedge when their sets share a universe element.
Bundles are the obstruction structure: a 0-bundle is a single candidate, and
a (c+1)-bundle extends a c-bundle by the two new endpoints of a hyperedge
rooted inside it.  A tripartition of a candidate set is an arity-reducing
hypercut when no hyperedge takes one vertex from each part.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, NamedTuple, Sequence

from .errors import InputError, InternalInvariantError
from .instances import CoverInstance, ids_from_mask
from .stats import OpStats


class Hyperedge(NamedTuple):
    members: tuple[int, int, int]
    witness_element: int


@dataclass(frozen=True)
class Bundle:
    """Candidate set of size 1+2c grown from `root` by c hyperedge extensions.

    `witness[i] = (b, x, y)` records the i-th extension: {b, x, y} is a
    hyperedge whose base b was already in the bundle and whose endpoints x, y
    were new.
    """

    vertices: tuple[int, ...]
    order: int
    root: int
    witness: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        if len(self.vertices) != 1 + 2 * self.order or len(self.witness) != self.order:
            raise InputError("bundle size must be 1 + 2 * order with one witness per extension")

    def replay(self, inst: CoverInstance, universe_mask: int | None = None) -> bool:
        """Re-run the extension chain; True iff it reproduces `vertices`."""
        grown = {self.root}
        for b, x, y in self.witness:
            if b not in grown or x in grown or y in grown or x == y:
                return False
            if is_hyperedge(inst, b, x, y, universe_mask=universe_mask) is None:
                return False
            grown.update((x, y))
        return grown == set(self.vertices)


def is_hyperedge(
    inst: CoverInstance, x1: int, x2: int, x3: int, *, universe_mask: int | None = None
) -> int | None:
    """Smallest element common to all three sets, or None."""
    if len({x1, x2, x3}) != 3:
        raise InputError("hyperedge test requires three distinct candidate ids")
    for x in (x1, x2, x3):
        if not 0 <= x < inst.n:
            raise InputError(f"candidate id {x} out of range [0, {inst.n})")
    masks = inst.set_masks
    common = masks[x1] & masks[x2] & masks[x3]
    if universe_mask is not None:
        common &= universe_mask
    if common == 0:
        return None
    return (common & -common).bit_length() - 1


def list_hyperedges(
    inst: CoverInstance,
    *,
    universe_mask: int | None = None,
    allowed: Sequence[int] | None = None,
) -> list[Hyperedge]:
    """All distinct hyperedges, witnessed by their smallest common element.

    Enumerates per universe element, then per owner triple, deduplicating by
    the sorted candidate triple.
    """
    allowed_set = None if allowed is None else set(allowed)
    seen: set[tuple[int, int, int]] = set()
    out: list[Hyperedge] = []
    for y in range(inst.u):
        if universe_mask is not None and not (universe_mask >> y) & 1:
            continue
        owners = inst.element_owners[y]
        if allowed_set is not None:
            owners = tuple(o for o in owners if o in allowed_set)
        if len(owners) < 3:
            continue
        for triple in combinations(owners, 3):
            if triple not in seen:
                seen.add(triple)
                out.append(Hyperedge(triple, y))
    return out


def _extensions(
    inst: CoverInstance,
    bundle: Bundle,
    member_set: set[int],
    universe_mask: int | None,
    allowed_set: set[int] | None,
    stats: OpStats | None,
) -> Iterator[tuple[int, int, int]]:
    """Yield (base, x, y) extension triples of `bundle`, deduplicated by {x, y}."""
    incident = 0
    for v in bundle.vertices:
        incident |= inst.set_masks[v]
    if universe_mask is not None:
        incident &= universe_mask
    seen_pairs: set[tuple[int, int]] = set()
    for y in ids_from_mask(incident):
        owners = inst.element_owners[y]
        bases = [o for o in owners if o in member_set]
        if not bases:
            continue
        base = bases[0]
        fresh = [o for o in owners if o not in member_set and (allowed_set is None or o in allowed_set)]
        for pair in combinations(fresh, 2):
            if stats is not None:
                stats.bump("bundle_extension_probes")
            if pair not in seen_pairs:
                seen_pairs.add(pair)
                yield base, pair[0], pair[1]


def enumerate_bundles(
    inst: CoverInstance,
    c: int,
    *,
    universe_mask: int | None = None,
    allowed: Sequence[int] | None = None,
    stats: OpStats | None = None,
) -> Iterator[Bundle]:
    """Yield every distinct c-bundle once, deduplicated by sorted vertex set."""
    if c < 0:
        raise InputError("bundle order must be >= 0")
    roots = sorted(allowed) if allowed is not None else range(inst.n)
    allowed_set = set(allowed) if allowed is not None else None
    level = [Bundle((v,), 0, v, ()) for v in roots]
    for _ in range(c):
        nxt: dict[tuple[int, ...], Bundle] = {}
        for b in level:
            member_set = set(b.vertices)
            if stats is not None:
                stats.bump("bundles_extended")
            for base, x, y in _extensions(inst, b, member_set, universe_mask, allowed_set, stats):
                verts = tuple(sorted(member_set | {x, y}))
                if verts not in nxt:
                    nxt[verts] = Bundle(verts, b.order + 1, b.root, b.witness + ((base, x, y),))
        level = [nxt[k] for k in sorted(nxt)]
    for b in level:
        if stats is not None:
            stats.bump("bundles_enumerated")
        yield b


def bundles_up_to(
    inst: CoverInstance,
    max_size: int,
    *,
    universe_mask: int | None = None,
    stats: OpStats | None = None,
) -> list[Bundle]:
    """All distinct bundles with at most `max_size` vertices, smallest first."""
    out: list[Bundle] = []
    c = 0
    while 1 + 2 * c <= max_size:
        level = list(enumerate_bundles(inst, c, universe_mask=universe_mask, stats=stats))
        if not level:
            break
        out.extend(level)
        c += 1
    return out


def is_arity_reducing_hypercut(
    inst: CoverInstance,
    s1: Sequence[int],
    s2: Sequence[int],
    s3: Sequence[int],
    *,
    universe_mask: int | None = None,
) -> bool:
    """True iff no hyperedge takes one candidate from each of the three parts."""
    parts = [tuple(s1), tuple(s2), tuple(s3)]
    as_sets = [set(p) for p in parts]
    for p, s in zip(parts, as_sets):
        if len(p) != len(s):
            raise InputError("hypercut parts must not contain duplicates")
    if (as_sets[0] & as_sets[1]) or (as_sets[0] & as_sets[2]) or (as_sets[1] & as_sets[2]):
        raise InputError("hypercut parts must be pairwise disjoint")
    if any(not p for p in parts):
        return True
    order = sorted(range(3), key=lambda i: len(parts[i]))
    small, other_a, other_b = parts[order[0]], as_sets[order[1]], as_sets[order[2]]
    for v in small:
        incident = inst.set_masks[v]
        if universe_mask is not None:
            incident &= universe_mask
        for y in ids_from_mask(incident):
            owners = inst.element_owners[y]
            if any(o in other_a for o in owners) and any(o in other_b for o in owners):
                return False
    return True


def maximal_bundle_partition(
    inst: CoverInstance,
    allowed: Sequence[int],
    *,
    universe_mask: int | None = None,
) -> list[Bundle]:
    """Greedily peel maximal bundles off `allowed` until it is exhausted.

    Each returned bundle is maximal within the vertices remaining at its peel
    time; the peel order is the list order.  The bundles partition `allowed`.
    (Maximal bundles of the full hypergraph may overlap; peeling is what
    guarantees a partition.)
    """
    remaining = sorted(set(allowed))
    out: list[Bundle] = []
    while remaining:
        root = remaining[0]
        bundle = Bundle((root,), 0, root, ())
        member_set = {root}
        allowed_now = set(remaining)
        while True:
            ext = next(
                _extensions(inst, bundle, member_set, universe_mask, allowed_now - member_set, None),
                None,
            )
            if ext is None:
                break
            base, x, y = ext
            member_set.update((x, y))
            bundle = Bundle(tuple(sorted(member_set)), bundle.order + 1, root, bundle.witness + ((base, x, y),))
        out.append(bundle)
        remaining = [v for v in remaining if v not in member_set]
    return out


def _keep_options(bundle: Bundle) -> list[tuple[int, Bundle | None, tuple[int, ...]]]:
    """(kept_size, removed_bundle_or_None, kept_vertices) choices for a split.

    Removing nothing keeps the whole bundle; otherwise the removed part is the
    root plus a prefix of the extension chain (itself a bundle), and the kept
    fragment is the suffix pairs.
    """
    options: list[tuple[int, Bundle | None, tuple[int, ...]]] = [(len(bundle.vertices), None, bundle.vertices)]
    removed = {bundle.root}
    for j in range(bundle.order + 1):
        kept = tuple(sorted(set(bundle.vertices) - removed))
        sub = Bundle(tuple(sorted(removed)), j, bundle.root, bundle.witness[:j])
        options.append((len(kept), sub, kept))
        if j < bundle.order:
            removed.update(bundle.witness[j][1:])
    return options


@dataclass(frozen=True)
class BundleDecomposition:
    removed_first: Bundle | None
    removed_second: Bundle | None
    parts: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]


def check_two_bundle_decomposition(
    inst: CoverInstance,
    candidates: Sequence[int],
    *,
    universe_mask: int | None = None,
) -> BundleDecomposition:
    """Remove at most two bundles from `candidates` so the rest admits a
    balanced arity-reducing hypercut, and return that cut.

    Realizes the constructive existence proof: peel a maximal-bundle
    partition, place all but the two largest bundles greedily, then peel
    root-prefixes off the two largest until the three parts are balanced.
    Raises InternalInvariantError if the verified cut cannot be produced,
    which would indicate an implementation bug.
    """
    cand = sorted(set(candidates))
    bundles = maximal_bundle_partition(inst, cand, universe_mask=universe_mask)
    bundles_by_size = sorted(bundles, key=lambda b: (len(b.vertices), b.vertices))
    to_place, to_split = bundles_by_size[:-2], bundles_by_size[-2:]

    parts: list[list[int]] = [[], [], []]
    for b in to_place:
        target = min(range(3), key=lambda i: (len(parts[i]), i))
        parts[target].extend(b.vertices)
    parts.sort(key=lambda p: (-len(p), sorted(p)))

    best: tuple[int, tuple, tuple] | None = None
    first_opts = _keep_options(to_split[0]) if len(to_split) >= 1 else [(0, None, ())]
    second_opts = _keep_options(to_split[1]) if len(to_split) >= 2 else [(0, None, ())]
    for ka, ra, frag_a in first_opts:
        for kb, rb, frag_b in second_opts:
            sizes = (len(parts[0]), len(parts[1]) + ka, len(parts[2]) + kb)
            if max(sizes) - min(sizes) <= 1:
                cand_opt = (ka + kb, (ka, ra, frag_a), (kb, rb, frag_b))
                if best is None or cand_opt[0] > best[0] or (cand_opt[0] == best[0] and ka > best[1][0]):
                    best = cand_opt
    if best is None:
        raise InternalInvariantError("no balanced split of the two largest bundles exists")

    _, (_, removed_a, frag_a), (_, removed_b, frag_b) = best
    final = [tuple(sorted(parts[0])), tuple(sorted(parts[1] + list(frag_a))), tuple(sorted(parts[2] + list(frag_b)))]
    # Two largest bundles were peeled last, so both removed pieces came from
    # the end of the peel order; swap the pair into peel order for reporting.
    if len(to_split) == 2:
        removed_first, removed_second = removed_a, removed_b
        if bundles.index(to_split[0]) > bundles.index(to_split[1]):
            removed_first, removed_second = removed_b, removed_a
    else:
        removed_first, removed_second = removed_a, removed_b

    final.sort(key=lambda p: (-len(p), p))
    k_prime = sum(len(p) for p in final)
    expected = ((k_prime + 2) // 3, (k_prime + 1) // 3, k_prime // 3)
    if tuple(len(p) for p in final) != expected:
        raise InternalInvariantError(f"split sizes {[len(p) for p in final]} are not balanced for {k_prime}")
    if not is_arity_reducing_hypercut(inst, *final, universe_mask=universe_mask):
        raise InternalInvariantError("constructed partition is not an arity-reducing hypercut")
    return BundleDecomposition(removed_first, removed_second, (final[0], final[1], final[2]))
