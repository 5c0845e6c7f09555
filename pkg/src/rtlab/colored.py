"""Complete graphs with edge weights 0 (green), 1 (blue) and 2 (red).

Degrees and edge counts sum weights.  A pattern ``G_{a+b,b}`` is an
``a``-vertex coloured graph without green edges whose red edges form a
``K_b``; containment means some ``a`` vertices have all pairwise weights at
least 1 and some ``b`` of them are pairwise red.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterator, Sequence

from .certify import SearchBudgetExceeded, current_budget, find_clique
from .checks import NOT_APPLICABLE, OBSERVATION, Check, Report, exact, verdict
from .graph import bits

GREEN, BLUE, RED = 0, 1, 2


@dataclass(frozen=True)
class ColoredGraph:
    n: int
    w: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.w) != self.n or any(len(row) != self.n for row in self.w):
            raise ValueError("weight matrix must be n x n")
        for x in range(self.n):
            if self.w[x][x] != 0:
                raise ValueError(f"diagonal weight at {x} must be 0")
            for y in range(x + 1, self.n):
                if self.w[x][y] != self.w[y][x]:
                    raise ValueError(f"asymmetric weight at ({x}, {y})")
                if self.w[x][y] not in (0, 1, 2):
                    raise ValueError(f"weight {self.w[x][y]} at ({x}, {y}) not in 0..2")

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence[int]]) -> "ColoredGraph":
        return cls(len(rows), tuple(tuple(int(v) for v in row) for row in rows))

    @classmethod
    def from_upper(cls, n: int, weights: Sequence[int]) -> "ColoredGraph":
        """Weights of pairs ``(0,1), (0,2), ..., (n-2,n-1)`` in row-major order."""
        if len(weights) != n * (n - 1) // 2:
            raise ValueError(f"expected {n * (n - 1) // 2} weights, got {len(weights)}")
        m = [[0] * n for _ in range(n)]
        it = iter(weights)
        for x, y in combinations(range(n), 2):
            m[x][y] = m[y][x] = int(next(it))
        return cls.from_matrix(m)

    @classmethod
    def constant(cls, n: int, weight: int) -> "ColoredGraph":
        return cls.from_matrix([[0 if x == y else weight for y in range(n)] for x in range(n)])

    def upper(self) -> list[int]:
        return [self.w[x][y] for x, y in combinations(range(self.n), 2)]

    def degree(self, x: int) -> int:
        return sum(self.w[x])

    def degrees(self) -> list[int]:
        return [sum(row) for row in self.w]

    def edge_weight(self) -> int:
        """``e(G)``: half the degree sum, i.e. the total pair weight."""
        return sum(self.degrees()) // 2

    def min_degree(self) -> int:
        return min(self.degrees(), default=0)

    def rows_at_least(self, k: int) -> list[int]:
        """Bitset rows of the graph formed by pairs of weight ``>= k``."""
        return [sum(1 << y for y in range(self.n) if self.w[x][y] >= k) for x in range(self.n)]

    def to_json(self) -> dict:
        return {"n": self.n, "weights": self.upper()}

    @classmethod
    def from_json(cls, obj: dict) -> "ColoredGraph":
        return cls.from_upper(int(obj["n"]), obj["weights"])


@dataclass(frozen=True)
class ForbiddenPattern:
    a: int
    b: int

    def __post_init__(self):
        if not self.a >= self.b >= 1:
            raise ValueError("pattern needs a >= b >= 1")

    @property
    def name(self) -> str:
        return f"G_{{{self.a + self.b},{self.b}}}"


def family(r: int, plus: bool = False) -> list[tuple[str, ForbiddenPattern]]:
    """Members ``G_{2r,b}`` for ``b = 1..r``; with ``plus`` also ``RK_{r-1}``."""
    if r < 2:
        raise ValueError("r must be >= 2")
    out = [(f"G_{{{2 * r},{b}}}", ForbiddenPattern(2 * r - b, b)) for b in range(1, r + 1)]
    if plus:
        out.append((f"RK_{r - 1}", ForbiddenPattern(r - 1, r - 1)))
    return out


# -- pattern search -------------------------------------------------------------------


def _cliques(adj: list[int], cand: int, k: int, counter: list[int], budget: int) -> Iterator[list[int]]:
    """All ``k``-cliques inside ``cand`` in lexicographic order."""
    if k == 0:
        yield []
        return
    for v in bits(cand):
        counter[0] += 1
        if counter[0] > budget:
            raise SearchBudgetExceeded(counter[0])
        rest = cand & adj[v] & ~((1 << (v + 1)) - 1)
        if rest.bit_count() < k - 1:
            continue
        for tail in _cliques(adj, rest, k - 1, counter, budget):
            yield [v] + tail


def contains_pattern(c: ColoredGraph, p: ForbiddenPattern, budget: int | None = None) -> list[int] | None:
    """Vertices realising ``p`` (red clique first, then the rest), or ``None``.

    Red ``b``-cliques are tried in lexicographic order; each is extended by an
    ``(a-b)``-clique of the non-green graph inside the common non-green
    neighbourhood.
    """
    budget = current_budget() if budget is None else budget
    if c.n < p.a:
        return None
    red, nongreen = c.rows_at_least(RED), c.rows_at_least(BLUE)
    full = (1 << c.n) - 1
    counter = [0]
    for k in _cliques(red, full, p.b, counter, budget):
        common = full
        for v in k:
            common &= nongreen[v]
        rest = find_clique(nongreen, common, p.a - p.b, budget)
        if rest is not None:
            return k + sorted(rest)
    return None


def contains_pattern_naive(c: ColoredGraph, p: ForbiddenPattern) -> list[int] | None:
    for s in combinations(range(c.n), p.a):
        if any(c.w[x][y] == GREEN for x, y in combinations(s, 2)):
            continue
        for k in combinations(s, p.b):
            if all(c.w[x][y] == RED for x, y in combinations(k, 2)):
                return list(s)
    return None


def is_family_free(c: ColoredGraph, r: int, plus: bool = False) -> Report:
    rep = Report(f"family-free r={r}{' plus' if plus else ''}")
    for name, p in family(r, plus):
        wit = contains_pattern(c, p)
        rep.add(verdict(f"no {name}", wit is None, witness=wit))
    return rep


# -- symmetrisation --------------------------------------------------------------------


def twin(c: ColoredGraph, v: int, u: int) -> ColoredGraph:
    """Replace ``v`` by a green twin of ``u``."""
    m = [list(row) for row in c.w]
    for x in range(c.n):
        if x in (u, v):
            continue
        m[v][x] = m[x][v] = c.w[u][x]
    m[u][v] = m[v][u] = 0
    return ColoredGraph.from_matrix(m)


def zykov_step(c: ColoredGraph) -> ColoredGraph:
    """First green pair (lexicographic) with unequal degrees: the lower-degree
    vertex becomes a twin of the other.  Fixed points are returned unchanged.
    """
    d = c.degrees()
    for u, v in combinations(range(c.n), 2):
        if c.w[u][v] != GREEN or d[u] == d[v]:
            continue
        return twin(c, v, u) if d[u] > d[v] else twin(c, u, v)
    return c


def symmetrize(c: ColoredGraph, cap: int | None = None) -> tuple[ColoredGraph, int]:
    """Iterate :func:`zykov_step` to a fixed point, at most ``n^2`` steps."""
    cap = c.n * c.n if cap is None else cap
    for step in range(cap):
        nxt = zykov_step(c)
        if nxt is c:
            return c, step
        c = nxt
    return c, cap


# -- weight bound for F^+-free graphs -----------------------------------------------------


def check_lemma46(c: ColoredGraph, r: int) -> Report:
    """``e(G) <= (r-2)/(r-1) n^2`` for graphs free of the extended family."""
    rep = Report(f"weight-bound r={r}")
    pre = is_family_free(c, r, plus=True)
    rep.values["precondition"] = pre.to_json()
    bound = Fraction(r - 2, r - 1) * c.n * c.n
    e = c.edge_weight()
    rep.values.update(e=e, bound=bound)
    if not pre.ok:
        rep.add(Check("e <= (r-2)/(r-1) n^2", NOT_APPLICABLE, note="graph is not free of the extended family"))
        return rep
    rep.add(verdict("e <= (r-2)/(r-1) n^2", e <= bound, margin=bound - e))
    return rep


def layered_instance(r: int, rng: random.Random, max_block: int = 3, thin: float = 0.0) -> ColoredGraph:
    """Random member of the layered class: groups ``A_1..A_m`` (``m <= r-2``)
    split into blocks with ``sum k_i <= 2r-1-m``; green inside blocks, blue
    between blocks of one group, red between groups.  With ``thin > 0`` each
    pair's weight is independently lowered by one with that probability,
    which keeps the graph free.  For ``r = 2`` the only free graph is empty.
    """
    if r < 3:
        return ColoredGraph(0, ())
    m = rng.randint(1, r - 2)
    budget = 2 * r - 1 - m
    ks = [1] * m
    for _ in range(rng.randint(0, budget - m)):
        ks[rng.randrange(m)] += 1
    group, block = [], []
    for i, k in enumerate(ks):
        for j in range(k):
            size = rng.randint(1, max_block)
            group += [i] * size
            block += [(i, j)] * size
    n = len(group)
    mat = [[0] * n for _ in range(n)]
    for x, y in combinations(range(n), 2):
        if group[x] != group[y]:
            wt = RED
        elif block[x] != block[y]:
            wt = BLUE
        else:
            wt = GREEN
        if wt and thin and rng.random() < thin:
            wt -= 1
        mat[x][y] = mat[y][x] = wt
    return ColoredGraph.from_matrix(mat)


def random_colored(n: int, rng: random.Random, probs: Sequence[float] = (1 / 3, 1 / 3, 1 / 3)) -> ColoredGraph:
    mat = [[0] * n for _ in range(n)]
    for x, y in combinations(range(n), 2):
        mat[x][y] = mat[y][x] = rng.choices((0, 1, 2), probs)[0]
    return ColoredGraph.from_matrix(mat)


def all_colored(n: int) -> Iterator[ColoredGraph]:
    """Every labelled coloured graph on ``n`` vertices (``3^(n choose 2)``)."""
    pairs = n * (n - 1) // 2
    for code in range(3 ** pairs):
        ws = []
        for _ in range(pairs):
            code, d = divmod(code, 3)
            ws.append(d)
        yield ColoredGraph.from_upper(n, ws)


# -- structured partition from a red clique ------------------------------------------------


@dataclass
class SillyPartition:
    blocks: list[list[int]]
    anchors: list[int]
    q: list[int]
    report: Report
    diagnostic: bool = False
    warnings: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"W": self.blocks, "anchors": self.anchors, "q": self.q, "diagnostic": self.diagnostic,
                "warnings": self.warnings, "report": self.report.to_json()}


class PartitionExtractionError(RuntimeError):
    def __init__(self, message: str, report: Report):
        super().__init__(message)
        self.report = report


def planted_instance(r: int, unit: int) -> tuple[ColoredGraph, list[list[int]]]:
    """Blocks of sizes ``2u, 2u, 3u, ..., 3u``: green inside, blue between the
    first two, red elsewhere."""
    sizes = [2 * unit, 2 * unit] + [3 * unit] * (r - 2)
    blocks, start = [], 0
    for s in sizes:
        blocks.append(list(range(start, start + s)))
        start += s
    where = [i for i, b in enumerate(blocks) for _ in b]
    n = start
    mat = [[0] * n for _ in range(n)]
    for x, y in combinations(range(n), 2):
        i, j = where[x], where[y]
        wt = GREEN if i == j else BLUE if {i, j} == {0, 1} else RED
        mat[x][y] = mat[y][x] = wt
    return ColoredGraph.from_matrix(mat), blocks


def extract_silly_partition(c: ColoredGraph, r: int, alpha) -> SillyPartition:
    """Partition ``W_0, W_1, ..., W_r`` anchored at a red ``K_{r-1}`` plus one
    vertex with a single blue slot towards it.

    ``W_i`` holds the vertices whose weights to the anchors equal those of
    anchor ``i``; ``W_0`` is the rest.  The score
    ``q(x) = 2(3r-2) - 2(w(v1,x)+w(v2,x)) - 3 sum_{i>=3} w(vi,x)`` is at least
    6 everywhere, with equality exactly on ``W_1..W_r``, when the hypotheses
    hold.  A failed minimum-degree hypothesis switches to diagnostic mode.
    """
    alpha = exact(alpha)
    n = c.n
    rep = Report(f"anchored-partition r={r} alpha={alpha}")
    warnings = []
    free = is_family_free(c, r)
    rep.add(verdict("hyp: family-free", free.ok, witness=[x.witness for x in free.checks if not x.ok] or None))
    need = (2 * (3 * r - 5) - alpha) / (3 * r - 2) * n
    dmin = c.min_degree()
    deg_ok = dmin >= need
    rep.add(verdict("hyp: min-degree", deg_ok, margin=dmin - need))
    if not deg_ok:
        warnings.append("minimum-degree hypothesis fails; output is best effort")
    k = contains_pattern(c, ForbiddenPattern(r - 1, r - 1))
    if k is None:
        bound = Fraction(r - 2, r - 1) * n * n
        rep.add(verdict("e > (r-2)/(r-1) n^2", c.edge_weight() > bound, margin=c.edge_weight() - bound,
                        note="no red K_{r-1}; the weight bound forbids this when e exceeds it"))
        raise PartitionExtractionError("no red clique of order r-1", rep)
    k = sorted(k)
    v2 = None
    for x in range(n):
        if x in k:
            continue
        if 2 * (r - 1) - sum(c.w[x][y] for y in k) <= 1:
            v2 = x
            break
    if v2 is None:
        raise PartitionExtractionError("no vertex with at most one non-red slot towards the red clique", rep)
    blue = [y for y in k if c.w[v2][y] == BLUE]
    if len(blue) != 1:
        rep.add(verdict("single blue anchor", False, witness=[v2] + k, note="found a red K_r"))
        raise PartitionExtractionError("anchor vertex closes a red K_r", rep)
    v1 = blue[0]
    anchors = [v1, v2] + [y for y in k if y != v1]
    blocks = [[x for x in range(n) if all(c.w[x][vj] == c.w[vi][vj] for vj in anchors)] for vi in anchors]
    covered = {x for b in blocks for x in b}
    w0 = [x for x in range(n) if x not in covered]
    q = [2 * (3 * r - 2) - 2 * (c.w[v1][x] + c.w[v2][x]) - 3 * sum(c.w[v][x] for v in anchors[2:])
         for x in range(n)]
    mode = "exact" if free.ok and deg_ok else OBSERVATION
    rep.add(verdict("blocks disjoint", sum(len(b) for b in blocks) == len(covered)))
    rep.add(verdict("green inside blocks",
                    all(c.w[x][y] == GREEN for b in blocks for x, y in combinations(b, 2)), mode=mode))
    rep.add(verdict("no red between W1 and W2",
                    all(c.w[x][y] != RED for x in blocks[0] for y in blocks[1]), mode=mode))
    rep.add(verdict("q >= 6", min(q, default=6) >= 6, margin=min(q, default=6) - 6, mode=mode))
    rep.add(verdict("q = 6 exactly on W1..Wr", all((q[x] == 6) == (x in covered) for x in range(n)), mode=mode))
    rep.add(verdict("|W0| <= alpha n", len(w0) <= alpha * n, margin=alpha * n - len(w0), mode=mode))
    return SillyPartition([w0] + blocks, anchors, q, rep, not deg_ok, warnings)
