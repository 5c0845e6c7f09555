"""Isomorph-free generation of hereditary graph classes by vertex extension.

A class is hereditary when deleting a vertex never leaves it.  Every member
on ``k+1`` vertices then arises from a member on ``k`` vertices by adding one
vertex with some neighbourhood ``S``, so extending one representative per
isomorphism class and de-duplicating by a canonical certificate enumerates
each class exactly once.  Canonical certificates come from nauty.
"""

from __future__ import annotations

from typing import Callable, Iterator

import pynauty

from .certify import current_budget, SearchBudgetExceeded, find_clique, find_short_odd_cycle, has_independent_set
from .graph import Graph, bits

# admit(g, s) decides whether adding a vertex adjacent to mask ``s`` of ``g``
# keeps the class; ``g`` itself is already a member.
Admit = Callable[[Graph, int], bool]


def canonical_key(g: Graph) -> bytes:
    if g.n == 0:
        return b""
    nbrs = {v: list(bits(row)) for v, row in enumerate(g.adj)}
    return bytes([g.n % 256]) + pynauty.certificate(pynauty.Graph(g.n, adjacency_dict=nbrs))


def extend(g: Graph, s: int) -> Graph:
    """Add vertex ``g.n`` adjacent exactly to the vertices of mask ``s``."""
    v = g.n
    adj = [row | ((s >> u & 1) << v) for u, row in enumerate(g.adj)]
    adj.append(s)
    return Graph(v + 1, tuple(adj))


class GenerationStats:
    def __init__(self):
        self.nodes = 0
        self.level_counts: list[int] = []


def generate_levels(n: int, admit: Admit | None = None, budget: int | None = None,
                    stats: GenerationStats | None = None) -> list[list[Graph]]:
    """One representative per isomorphism class of members on 0..n vertices.

    ``budget`` bounds the number of attempted extensions; exceeding it raises
    :class:`SearchBudgetExceeded`.
    """
    budget = current_budget() if budget is None else budget
    stats = stats if stats is not None else GenerationStats()
    levels = [[Graph.empty(0)]]
    stats.level_counts = [1]
    for k in range(n):
        seen: dict[bytes, Graph] = {}
        for g in levels[-1]:
            for s in range(1 << k):
                stats.nodes += 1
                if stats.nodes > budget:
                    raise SearchBudgetExceeded(stats.nodes)
                if admit is not None and not admit(g, s):
                    continue
                h = extend(g, s)
                seen.setdefault(canonical_key(h), h)
        levels.append(list(seen.values()))
        stats.level_counts.append(len(seen))
    return levels


def generate(n: int, admit: Admit | None = None, budget: int | None = None) -> list[Graph]:
    return generate_levels(n, admit, budget)[n]


def all_graphs_upto(n: int, admit: Admit | None = None) -> Iterator[Graph]:
    for level in generate_levels(n, admit):
        yield from level


# -- class predicates ---------------------------------------------------------


def rt_admit(t: int, amax: int) -> Admit:
    """K_t-free graphs with independence number at most ``amax``.

    A new vertex with neighbourhood ``S`` creates a K_t iff ``S`` holds a
    K_{t-1}, and raises alpha above ``amax`` iff its non-neighbours hold an
    independent ``amax``-set.
    """

    def admit(g: Graph, s: int) -> bool:
        if amax < 1:
            return False
        if find_clique(g.adj, s, t - 1) is not None:
            return False
        rest = g.vertex_mask & ~s
        return has_independent_set(g.adj, rest, amax) is None

    return admit


def no_short_odd_cycle_admit(max_length: int = 7) -> Admit:
    def admit(g: Graph, s: int) -> bool:
        return not find_short_odd_cycle(extend(g, s), max_length).found

    return admit
