"""Bipartite graphs on bitset rows, common neighbourhoods, text I/O.

Vertices are dense 0-based integers per part; part membership is positional.
Row ``i`` of ``rows_a`` is an int whose bit ``j`` is set iff A-vertex ``i`` is
adjacent to B-vertex ``j``; ``rows_b`` is the transposed view.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import InvalidArgument, ParseError

A, B = "A", "B"


def bits(mask: int) -> Iterator[int]:
    """Yield set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def _transpose(rows, n_cols):
    cols = [0] * n_cols
    for i, row in enumerate(rows):
        bit = 1 << i
        for j in bits(row):
            cols[j] |= bit
    return tuple(cols)


@dataclass(frozen=True, eq=False)
class BipartiteGraph:
    n_a: int
    n_b: int
    rows_a: tuple
    rows_b: tuple = field(default=None, repr=False)

    def __post_init__(self):
        if self.n_a < 0 or self.n_b < 0:
            raise InvalidArgument("part sizes must be non-negative")
        rows_a = tuple(self.rows_a)
        if len(rows_a) != self.n_a:
            raise InvalidArgument("rows_a length must equal n_a")
        full = (1 << self.n_b) - 1
        if any(r < 0 or r & ~full for r in rows_a):
            raise InvalidArgument("row references a B-vertex out of range")
        object.__setattr__(self, "rows_a", rows_a)
        if self.rows_b is None:
            object.__setattr__(self, "rows_b", _transpose(rows_a, self.n_b))
        else:
            object.__setattr__(self, "rows_b", tuple(self.rows_b))

    @classmethod
    def from_edges(cls, n_a: int, n_b: int, edges: Iterable[tuple[int, int]]) -> "BipartiteGraph":
        rows = [0] * n_a
        for a, b in edges:
            if not (0 <= a < n_a and 0 <= b < n_b):
                raise InvalidArgument(f"edge ({a}, {b}) out of range for parts ({n_a}, {n_b})")
            rows[a] |= 1 << b
        return cls(n_a, n_b, tuple(rows))

    @classmethod
    def complete(cls, n_a: int, n_b: int) -> "BipartiteGraph":
        return cls(n_a, n_b, ((1 << n_b) - 1,) * n_a)

    @classmethod
    def empty(cls, n_a: int, n_b: int) -> "BipartiteGraph":
        return cls(n_a, n_b, (0,) * n_a)

    def __eq__(self, other):
        if not isinstance(other, BipartiteGraph):
            return NotImplemented
        return (self.n_a, self.n_b, self.rows_a) == (other.n_a, other.n_b, other.rows_a)

    def __hash__(self):
        return hash((self.n_a, self.n_b, self.rows_a))

    @property
    def num_vertices(self) -> int:
        return self.n_a + self.n_b

    @property
    def num_edges(self) -> int:
        return sum(popcount(r) for r in self.rows_a)

    def part_size(self, part: str) -> int:
        return self.n_a if part == A else self.n_b

    def rows(self, part: str) -> tuple:
        return self.rows_a if part == A else self.rows_b

    def has_edge(self, a: int, b: int) -> bool:
        return bool(self.rows_a[a] >> b & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(a, b) for a, row in enumerate(self.rows_a) for b in bits(row)]

    def degrees(self, part: str) -> list[int]:
        return [popcount(r) for r in self.rows(part)]

    def transpose(self) -> "BipartiteGraph":
        return BipartiteGraph(self.n_b, self.n_a, self.rows_b, self.rows_a)

    def with_edges(self, add=(), remove=()) -> "BipartiteGraph":
        rows = list(self.rows_a)
        for a, b in add:
            rows[a] |= 1 << b
        for a, b in remove:
            rows[a] &= ~(1 << b)
        return BipartiteGraph(self.n_a, self.n_b, tuple(rows))


@dataclass(frozen=True, eq=False)
class GeneralGraph:
    n: int
    rows: tuple

    def __post_init__(self):
        rows = tuple(self.rows)
        if len(rows) != self.n:
            raise InvalidArgument("rows length must equal n")
        for u, row in enumerate(rows):
            if row >> u & 1:
                raise InvalidArgument(f"self-loop at {u}")
            for v in bits(row):
                if v >= self.n or not rows[v] >> u & 1:
                    raise InvalidArgument(f"adjacency not symmetric at ({u}, {v})")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "GeneralGraph":
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise InvalidArgument(f"bad edge ({u}, {v})")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    def __eq__(self, other):
        if not isinstance(other, GeneralGraph):
            return NotImplemented
        return (self.n, self.rows) == (other.n, other.rows)

    def __hash__(self):
        return hash((self.n, self.rows))

    @property
    def num_vertices(self) -> int:
        return self.n

    @property
    def num_edges(self) -> int:
        return sum(popcount(r) for r in self.rows) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, row in enumerate(self.rows) for v in bits(row) if u < v]

    def degrees(self) -> list[int]:
        return [popcount(r) for r in self.rows]


@dataclass(frozen=True)
class MarkedGraph:
    """A bipartite graph with a designated body inside part A."""

    graph: BipartiteGraph
    body: frozenset

    def __post_init__(self):
        body = frozenset(self.body)
        if any(not 0 <= v < self.graph.n_a for v in body):
            raise InvalidArgument("body must lie inside part A")
        object.__setattr__(self, "body", body)


def common_neighborhood(g: BipartiteGraph, s: Iterable, part: str | None = None) -> set[int]:
    """Vertices of the opposite part adjacent to every vertex of ``s``.

    ``s`` is either plain indices together with ``part``, or ``(part, index)``
    pairs. The empty set has the whole opposite part as its neighbourhood.
    """
    return set(bits(common_neighborhood_mask(g, s, part)))


def common_neighborhood_mask(g: BipartiteGraph, s: Iterable, part: str | None = None) -> int:
    part, idx = _split_vertex_set(g, s, part)
    rows = g.rows(part)
    m = (1 << g.part_size(B if part == A else A)) - 1
    for v in idx:
        m &= rows[v]
    return m


def _split_vertex_set(g, s, part):
    s = list(s)
    if s and isinstance(s[0], tuple):
        parts = {p for p, _ in s}
        if len(parts) > 1:
            raise InvalidArgument("vertex set mixes both parts")
        (p,) = parts
        if part is not None and part != p:
            raise InvalidArgument("vertex set mixes both parts")
        part = p
        s = [i for _, i in s]
    if part is None:
        part = A
    if part not in (A, B):
        raise InvalidArgument(f"unknown part {part!r}")
    n = g.part_size(part)
    for v in s:
        if not 0 <= v < n:
            raise InvalidArgument(f"vertex {v} out of range for part {part}")
    return part, s


def induced_subgraph(g: BipartiteGraph, a_sub: Iterable[int], b_sub: Iterable[int]):
    """Return ``(subgraph, a_index, b_index)``; index tuples map back into ``g``."""
    a_idx = tuple(sorted(set(a_sub)))
    b_idx = tuple(sorted(set(b_sub)))
    for v in a_idx:
        if not 0 <= v < g.n_a:
            raise InvalidArgument(f"A-vertex {v} out of range")
    for v in b_idx:
        if not 0 <= v < g.n_b:
            raise InvalidArgument(f"B-vertex {v} out of range")
    rows = []
    for a in a_idx:
        row = g.rows_a[a]
        rows.append(mask_of(k for k, b in enumerate(b_idx) if row >> b & 1))
    return BipartiteGraph(len(a_idx), len(b_idx), tuple(rows)), a_idx, b_idx


def general_induced_subgraph(g: GeneralGraph, vertices: Iterable[int]):
    idx = tuple(sorted(set(vertices)))
    pos = {v: k for k, v in enumerate(idx)}
    rows = tuple(mask_of(pos[w] for w in bits(g.rows[v]) if w in pos) for v in idx)
    return GeneralGraph(len(idx), rows), idx


def are_isomorphic(g: BipartiteGraph, h: BipartiteGraph, respect_sides: bool = True, node_budget: int | None = None):
    """Embedding (bijective, induced) of ``g`` onto ``h``, ``None``, or ``Inconclusive``."""
    from .matching import DEFAULT_NODE_BUDGET, find_isomorphism

    return find_isomorphism(g, h, respect_sides, node_budget or DEFAULT_NODE_BUDGET)


def serialize_graph(g) -> str:
    lines = []
    if isinstance(g, BipartiteGraph):
        edges = g.edges()
        lines.append(f"p bip {g.n_a} {g.n_b} {len(edges)}")
    elif isinstance(g, GeneralGraph):
        edges = g.edges()
        lines.append(f"p gen {g.n} {len(edges)}")
    else:
        raise InvalidArgument(f"cannot serialize {type(g).__name__}")
    lines.extend(f"e {u} {v}" for u, v in edges)
    return "\n".join(lines) + "\n"


def serialize_marked(m: MarkedGraph) -> str:
    body = " ".join(str(v) for v in sorted(m.body))
    return f"c body {body}\n" + serialize_graph(m.graph)


def parse_graph(text: str):
    """Parse the ``p bip``/``p gen`` edge-list format.

    A ``c body i j ...`` comment, if present, makes the result a MarkedGraph.
    """
    header = None
    edges = []
    seen = set()
    body = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        tok = line.split()
        if tok[0] == "c":
            if len(tok) >= 2 and tok[1] == "body":
                try:
                    body = [int(x) for x in tok[2:]]
                except ValueError:
                    raise ParseError("malformed body comment", lineno) from None
            continue
        if tok[0] == "p":
            if header is not None:
                raise ParseError("duplicate header", lineno)
            try:
                if len(tok) == 5 and tok[1] == "bip":
                    header = ("bip", int(tok[2]), int(tok[3]), int(tok[4]))
                elif len(tok) == 4 and tok[1] == "gen":
                    header = ("gen", int(tok[2]), int(tok[2]), int(tok[3]))
                else:
                    raise ValueError
            except ValueError:
                raise ParseError(f"malformed header {line!r}", lineno) from None
            if min(header[1:]) < 0:
                raise ParseError("negative count in header", lineno)
            continue
        if tok[0] == "e":
            if header is None:
                raise ParseError("edge before header", lineno)
            if len(tok) != 3:
                raise ParseError(f"malformed edge line {line!r}", lineno)
            try:
                u, v = int(tok[1]), int(tok[2])
            except ValueError:
                raise ParseError(f"malformed edge line {line!r}", lineno) from None
            kind, n1, n2, _ = header
            if not (0 <= u < n1 and 0 <= v < n2):
                raise ParseError(f"edge endpoint out of range: {u} {v}", lineno)
            key = (u, v) if kind == "bip" else (min(u, v), max(u, v))
            if kind == "gen" and u == v:
                raise ParseError("self-loop", lineno)
            if key in seen:
                raise ParseError(f"duplicate edge {u} {v}", lineno)
            seen.add(key)
            edges.append(key)
            continue
        raise ParseError(f"unrecognised line {line!r}", lineno)
    if header is None:
        raise ParseError("missing header")
    kind, n1, n2, m = header
    if len(edges) != m:
        raise ParseError(f"header declares {m} edges, found {len(edges)}")
    if kind == "gen":
        return GeneralGraph.from_edges(n1, edges)
    g = BipartiteGraph.from_edges(n1, n2, edges)
    if body is not None:
        try:
            return MarkedGraph(g, frozenset(body))
        except InvalidArgument as exc:
            raise ParseError(str(exc)) from None
    return g


def to_dot(g, body=(), highlight=None) -> str:
    """Graphviz source; A-vertices are ``a<i>``, B-vertices ``b<j>``."""
    if isinstance(g, MarkedGraph):
        body = g.body
        g = g.graph
    highlight = highlight or {}
    out = ["graph G {", "  rankdir=LR;"]
    if isinstance(g, GeneralGraph):
        for u in range(g.n):
            out.append(f"  v{u};")
        out.extend(f"  v{u} -- v{v};" for u, v in g.edges())
    else:
        body = set(body)
        for a in range(g.n_a):
            style = ' [shape=box, style=filled, fillcolor="lightblue"]' if a in body else " [shape=box]"
            out.append(f"  a{a}{style};")
        for b in range(g.n_b):
            style = ' [style=filled, fillcolor="orange"]' if (B, b) in highlight else ""
            out.append(f"  b{b}{style};")
        out.extend(f"  a{a} -- b{b};" for a, b in g.edges())
    out.append("}")
    return "\n".join(out) + "\n"


@dataclass(frozen=True)
class Embedding:
    """Injective map of a pattern's vertices into a host.

    ``a_map[i]`` is the host image of pattern A-vertex ``i``; it lies in host
    part A unless ``swapped``, in which case pattern A lands in host B (and
    ``b_map`` in host A).
    """

    a_map: tuple
    b_map: tuple
    swapped: bool = False
    induced: bool = False
    body_target: tuple | None = None  # (host part, frozenset of allowed vertices or None)

    @property
    def respects_sides(self) -> bool:
        return not self.swapped

    def host_part(self, pattern_part: str) -> str:
        if not self.swapped:
            return pattern_part
        return B if pattern_part == A else A

    def pattern_to_host(self) -> dict:
        out = {}
        for i, v in enumerate(self.a_map):
            out[(A, i)] = (self.host_part(A), v)
        for j, v in enumerate(self.b_map):
            out[(B, j)] = (self.host_part(B), v)
        return out

    def host_sets(self) -> tuple[frozenset, frozenset]:
        """Image vertex sets as (host A-side, host B-side)."""
        if self.swapped:
            return frozenset(self.b_map), frozenset(self.a_map)
        return frozenset(self.a_map), frozenset(self.b_map)

    def to_json(self) -> dict:
        out = {
            "a_map": list(self.a_map),
            "b_map": list(self.b_map),
            "swapped": self.swapped,
            "induced": self.induced,
        }
        if self.body_target is not None:
            part, subset = self.body_target
            out["body_target"] = {"part": part, "subset": sorted(subset) if subset is not None else None}
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Embedding":
        target = data.get("body_target")
        if target is not None:
            subset = target.get("subset")
            target = (target["part"], frozenset(subset) if subset is not None else None)
        return cls(
            tuple(data["a_map"]),
            tuple(data["b_map"]),
            bool(data.get("swapped", False)),
            bool(data.get("induced", False)),
            target,
        )
