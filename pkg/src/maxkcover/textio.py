"""Text formats: set families, edge lists, and reduction certificates.

Both instance formats are line oriented with `#` comments.  Emission is
canonical, so emit(parse(text)) normalizes and parse(emit(x)) == x.
"""

from __future__ import annotations

from .errors import ParseError
from .hardness import KhOvInstance, ReductionOutput
from .instances import CoverInstance, PdsGraph


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_set_family(text: str) -> CoverInstance:
    """Parse `cover <n> <u>` followed by n lines `S<i>: e1 e2 ...`."""
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty input; expected 'cover <n> <u>' header")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 3 or parts[0] != "cover":
        raise ParseError("expected header 'cover <n> <u>'", lineno)
    try:
        n, u = int(parts[1]), int(parts[2])
    except ValueError:
        raise ParseError("header counts must be integers", lineno) from None
    if n < 0 or u < 0:
        raise ParseError("header counts must be nonnegative", lineno)
    if len(lines) - 1 != n:
        raise ParseError(f"expected {n} set lines, found {len(lines) - 1}", lineno)
    sets: list[tuple[int, ...]] = []
    for idx, (lno, line) in enumerate(lines[1:]):
        label, sep, rest = line.partition(":")
        if not sep or label.strip() != f"S{idx}":
            raise ParseError(f"expected label 'S{idx}:'", lno)
        try:
            elems = [int(tok) for tok in rest.split()]
        except ValueError:
            raise ParseError("set elements must be integers", lno) from None
        seen = set()
        for e in elems:
            if not 0 <= e < u:
                raise ParseError(f"element {e} out of range [0, {u})", lno)
            if e in seen:
                raise ParseError(f"duplicate element {e} in set S{idx}", lno)
            seen.add(e)
        sets.append(tuple(sorted(elems)))
    return CoverInstance.from_sets(sets, u)


def emit_set_family(inst: CoverInstance) -> str:
    out = [f"cover {inst.n} {inst.u}"]
    for i, s in enumerate(inst.sets):
        out.append(f"S{i}: " + " ".join(str(e) for e in s))
    return "\n".join(out) + "\n"


def parse_edge_list(text: str) -> PdsGraph:
    """Parse `graph <n>` followed by `u v` edge lines; duplicates collapse."""
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty input; expected 'graph <n>' header")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 2 or parts[0] != "graph":
        raise ParseError("expected header 'graph <n>'", lineno)
    try:
        n = int(parts[1])
    except ValueError:
        raise ParseError("vertex count must be an integer", lineno) from None
    if n < 0:
        raise ParseError("vertex count must be nonnegative", lineno)
    edges = []
    for lno, line in lines[1:]:
        toks = line.split()
        if len(toks) != 2:
            raise ParseError("expected edge line '<u> <v>'", lno)
        try:
            a, b = int(toks[0]), int(toks[1])
        except ValueError:
            raise ParseError("edge endpoints must be integers", lno) from None
        if a == b:
            raise ParseError(f"self-loop at vertex {a}", lno)
        if not (0 <= a < n and 0 <= b < n):
            raise ParseError(f"edge ({a}, {b}) out of range [0, {n})", lno)
        edges.append((a, b))
    return PdsGraph.from_edges(n, edges, validate=False)


def emit_edge_list(g: PdsGraph) -> str:
    out = [f"graph {g.n}"]
    for v in range(g.n):
        for w in g.adjacency[v]:
            if v < w:
                out.append(f"{v} {w}")
    return "\n".join(out) + "\n"


def emit_khov(inst: KhOvInstance) -> list[str]:
    lines = [f"khov k={inst.k} h={inst.h} n={inst.n_vectors} d={inst.d}"]
    for y, act in enumerate(inst.active):
        lines.append(f"active {y}: " + " ".join(str(i) for i in act))
    for i, fam in enumerate(inst.families):
        for j, vec in enumerate(fam):
            lines.append(f"vector {i} {j}: " + "".join(str(b) for b in vec))
    return lines


def parse_khov(lines: list[tuple[int, str]]) -> KhOvInstance:
    if not lines:
        raise ParseError("missing khov block")
    lno, header = lines[0]
    toks = dict(tok.split("=", 1) for tok in header.split()[1:])
    try:
        k, h, n, d = (int(toks[key]) for key in ("k", "h", "n", "d"))
    except (KeyError, ValueError):
        raise ParseError("malformed khov header", lno) from None
    active: list[tuple[int, ...]] = [()] * d
    vectors: dict[tuple[int, int], tuple[int, ...]] = {}
    for lno, line in lines[1:]:
        label, sep, rest = line.partition(":")
        toks = label.split()
        if toks[0] == "active" and len(toks) == 2:
            active[int(toks[1])] = tuple(int(t) for t in rest.split())
        elif toks[0] == "vector" and len(toks) == 3:
            bits = rest.strip()
            if len(bits) != d or any(c not in "01" for c in bits):
                raise ParseError("vector bits must be a 0/1 string of length d", lno)
            vectors[(int(toks[1]), int(toks[2]))] = tuple(int(c) for c in bits)
        else:
            raise ParseError(f"unexpected khov line {line!r}", lno)
    families = tuple(tuple(vectors[(i, j)] for j in range(n)) for i in range(k))
    return KhOvInstance.build(families, tuple(active), h)


def emit_certificate(out: ReductionOutput, inst: KhOvInstance) -> str:
    """Certificate: thresholds, inventory, vector-to-vertex map, and the
    source vector instance, so verification never re-derives anything."""
    lines = [
        "certificate reduction",
        f"kind={out.kind} k={out.k} h={out.h} direction={out.direction}",
        f"t={out.t} alpha={out.alpha} predicted={out.predicted}",
        "x_ids=" + " ".join(str(x) for x in out.x_ids),
    ]
    for key in sorted(out.inventory):
        lines.append(f"inventory {key}={out.inventory[key]}")
    for (i, j), v in sorted(out.mapping.items()):
        lines.append(f"map {i} {j} -> {v}")
    lines.extend(emit_khov(inst))
    return "\n".join(lines) + "\n"


def parse_certificate(text: str) -> tuple[dict, KhOvInstance]:
    """Returns (certificate fields, source vector instance)."""
    lines = list(_content_lines(text))
    if not lines or lines[0][1] != "certificate reduction":
        raise ParseError("expected 'certificate reduction' header", lines[0][0] if lines else None)
    fields: dict = {"mapping": {}, "inventory": {}}
    khov_start = None
    for pos, (lno, line) in enumerate(lines[1:], start=1):
        if line.startswith("khov "):
            khov_start = pos
            break
        if line.startswith("map "):
            toks = line.split()
            if len(toks) != 5 or toks[3] != "->":
                raise ParseError("malformed map line", lno)
            fields["mapping"][(int(toks[1]), int(toks[2]))] = int(toks[4])
        elif line.startswith("inventory "):
            key, _, val = line[len("inventory "):].partition("=")
            fields["inventory"][key] = int(val)
        elif line.startswith("x_ids="):
            fields["x_ids"] = tuple(int(t) for t in line[len("x_ids="):].split())
        else:
            for tok in line.split():
                key, _, val = tok.partition("=")
                fields[key] = val
    if khov_start is None:
        raise ParseError("certificate is missing its khov block")
    for key in ("k", "h", "t", "alpha", "predicted"):
        fields[key] = int(fields[key])
    inst = parse_khov(lines[khov_start:])
    return fields, inst
