"""Simple undirected graphs on vertices ``0..n-1`` with bitset adjacency.

Each row of ``Graph.adj`` is a Python ``int`` whose bit ``j`` is set iff
``j`` is a neighbour.  Python ints are arbitrary precision, so the vertex
limit is memory, not word size.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Sequence


def bits(x: int) -> Iterator[int]:
    """Yield the set bit positions of ``x`` in increasing order."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def popcount(x: int) -> int:
    return x.bit_count()


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple[int, ...]
    labels: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.adj) != self.n:
            raise ValueError(f"expected {self.n} adjacency rows, got {len(self.adj)}")
        if self.labels is not None and len(self.labels) != self.n:
            raise ValueError("labels must have one entry per vertex")

    # -- construction -------------------------------------------------

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, (0,) * n)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], labels=None) -> "Graph":
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj), None if labels is None else tuple(labels))

    def with_labels(self, labels) -> "Graph":
        return Graph(self.n, self.adj, None if labels is None else tuple(labels))

    # -- queries ------------------------------------------------------

    @property
    def vertex_mask(self) -> int:
        return (1 << self.n) - 1

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> list[int]:
        return [row.bit_count() for row in self.adj]

    def num_edges(self) -> int:
        return sum(self.degrees()) // 2

    def neighbours(self, v: int) -> list[int]:
        return list(bits(self.adj[v]))

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for u, row in enumerate(self.adj):
            for v in bits(row >> (u + 1)):
                out.append((u, u + 1 + v))
        return out

    def edges_within(self, s: int) -> int:
        """Number of edges inside the vertex set given as bitmask ``s``."""
        return sum((self.adj[v] & s).bit_count() for v in bits(s)) // 2

    def edges_between(self, s: int, t: int) -> int:
        """e(S, T) for disjoint masks; pairs counted once."""
        return sum((self.adj[v] & t).bit_count() for v in bits(s))

    def degree_into(self, v: int, s: int) -> int:
        return (self.adj[v] & s).bit_count()

    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def min_degree(self) -> int:
        return min(self.degrees(), default=0)

    def check(self) -> None:
        """Raise if adjacency is not symmetric and loop-free."""
        for u, row in enumerate(self.adj):
            if row >> u & 1:
                raise ValueError(f"loop at {u}")
            if row >> self.n:
                raise ValueError(f"row {u} has bits beyond n")
            for v in bits(row):
                if not self.adj[v] >> u & 1:
                    raise ValueError(f"asymmetric pair ({u}, {v})")

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, e={self.num_edges()})"


# -- standard families ----------------------------------------------------


def complete(n: int) -> Graph:
    return Graph.from_edges(n, combinations(range(n), 2))


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def turan_graph(n: int, parts: int) -> Graph:
    sizes = [n // parts + (1 if i < n % parts else 0) for i in range(parts)]
    return join_complete([Graph.empty(s) for s in sizes if s > 0] or [Graph.empty(0)])


def random_graph(n: int, p: float, seed=None) -> Graph:
    rng = random.Random(seed)
    return Graph.from_edges(n, [(u, v) for u, v in combinations(range(n), 2) if rng.random() < p])


# -- operations -----------------------------------------------------------


def blow_up(g: Graph, t: int) -> Graph:
    """Replace every vertex by ``t`` pairwise non-adjacent twins.

    Copies of vertex ``v`` occupy indices ``v*t .. v*t+t-1``.
    """
    if t < 1:
        raise ValueError("blow-up factor must be >= 1")
    block = (1 << t) - 1
    adj = []
    for v in range(g.n):
        row = 0
        for u in bits(g.adj[v]):
            row |= block << (u * t)
        adj.extend([row] * t)
    labels = None if g.labels is None else tuple(lab for lab in g.labels for _ in range(t))
    return Graph(g.n * t, tuple(adj), labels)


def join_complete(parts: Sequence[Graph]) -> Graph:
    """Disjoint union of ``parts`` with every cross pair joined.

    Labels record the part of origin as ``"<i>"`` or ``"<i>.<label>"``.
    """
    if not parts:
        raise ValueError("join_complete needs at least one part")
    total = sum(p.n for p in parts)
    full = (1 << total) - 1
    adj: list[int] = []
    labels: list = []
    offset = 0
    for i, p in enumerate(parts):
        own = ((1 << p.n) - 1) << offset
        others = full & ~own
        for v in range(p.n):
            adj.append((p.adj[v] << offset) | others)
            if p.labels is None or p.labels[v] is None:
                labels.append(str(i))
            else:
                labels.append(f"{i}.{p.labels[v]}")
        offset += p.n
    return Graph(total, tuple(adj), tuple(labels))


def disjoint_union(parts: Sequence[Graph]) -> Graph:
    adj: list[int] = []
    offset = 0
    for p in parts:
        adj.extend(row << offset for row in p.adj)
        offset += p.n
    return Graph(offset, tuple(adj))


def complement(g: Graph) -> Graph:
    full = g.vertex_mask
    return Graph(g.n, tuple(full & ~row & ~(1 << v) for v, row in enumerate(g.adj)), g.labels)


def induced(g: Graph, s: Iterable[int]) -> tuple[Graph, list[int]]:
    """Subgraph induced by ``s``; returns it with ``mapping[new] = old``."""
    mapping = sorted(set(s))
    for v in mapping:
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} out of range for n={g.n}")
    index = {old: new for new, old in enumerate(mapping)}
    smask = mask_of(mapping)
    adj = []
    for old in mapping:
        row = 0
        for u in bits(g.adj[old] & smask):
            row |= 1 << index[u]
        adj.append(row)
    labels = None if g.labels is None else tuple(g.labels[v] for v in mapping)
    return Graph(len(mapping), tuple(adj), labels), mapping


def relabel(g: Graph, order: Sequence[int]) -> Graph:
    """Graph whose vertex ``i`` is ``order[i]`` of ``g``."""
    pos = [0] * g.n
    for i, v in enumerate(order):
        pos[v] = i
    adj = [0] * g.n
    for i, v in enumerate(order):
        row = 0
        for u in bits(g.adj[v]):
            row |= 1 << pos[u]
        adj[i] = row
    labels = None if g.labels is None else tuple(g.labels[v] for v in order)
    return Graph(g.n, tuple(adj), labels)


def add_edge(g: Graph, u: int, v: int) -> Graph:
    adj = list(g.adj)
    adj[u] |= 1 << v
    adj[v] |= 1 << u
    return Graph(g.n, tuple(adj), g.labels)


# -- partitions -----------------------------------------------------------


@dataclass(frozen=True)
class VertexPartition:
    """Ordered blocks covering ``0..n-1``.

    Block order matters: blocks 0 and 1 play the roles of the half-density
    pair wherever a partition of an even-clique candidate is analysed.
    """

    blocks: tuple[tuple[int, ...], ...]

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], n: int | None = None) -> "VertexPartition":
        p = cls(tuple(tuple(sorted(b)) for b in blocks))
        if n is not None:
            p.validate(n)
        return p

    @classmethod
    def from_labels(cls, labels: Sequence, order: Sequence) -> "VertexPartition":
        return cls(tuple(tuple(v for v, lab in enumerate(labels) if lab == key) for key in order))

    @property
    def r(self) -> int:
        return len(self.blocks)

    def masks(self) -> list[int]:
        return [mask_of(b) for b in self.blocks]

    def sizes(self) -> list[int]:
        return [len(b) for b in self.blocks]

    def block_of(self) -> dict[int, int]:
        return {v: i for i, b in enumerate(self.blocks) for v in b}

    def validate(self, n: int) -> None:
        seen: set[int] = set()
        for b in self.blocks:
            for v in b:
                if not 0 <= v < n:
                    raise ValueError(f"vertex {v} out of range for n={n}")
                if v in seen:
                    raise ValueError(f"vertex {v} appears in two blocks")
                seen.add(v)
        if len(seen) != n:
            missing = sorted(set(range(n)) - seen)
            raise ValueError(f"partition misses vertices {missing[:10]}")

    def move(self, v: int, target: int) -> "VertexPartition":
        blocks = [tuple(u for u in b if u != v) for b in self.blocks]
        blocks[target] = tuple(sorted(blocks[target] + (v,)))
        return VertexPartition(tuple(blocks))

    def to_json(self) -> list[list[int]]:
        return [list(b) for b in self.blocks]
