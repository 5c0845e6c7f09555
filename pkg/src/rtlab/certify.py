"""Exact certification kernels: cliques, independent sets, short odd cycles,
K_t-saturation and the structural checks for saturated odd-clique-free graphs.

Every search is exhaustive.  When a node budget runs out the kernels raise
:class:`SearchBudgetExceeded`; they never fall back to a heuristic answer.
"""

from __future__ import annotations

import contextlib
import contextvars
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .checks import Check, Report, VACUOUS, verdict
from .graph import Graph, add_edge, bits, mask_of

DEFAULT_BUDGET = 10**8
_budget: contextvars.ContextVar[int] = contextvars.ContextVar("rtlab_budget", default=DEFAULT_BUDGET)

CLIQUE = "clique"
INDEPENDENT_SET = "independent-set"
ODD_CYCLE = "odd-cycle"
ABSENCE = "absence"


class SearchBudgetExceeded(RuntimeError):
    """Exhaustive search stopped before finishing; the answer is unknown."""

    def __init__(self, nodes: int, best: list[int] | None = None):
        super().__init__(f"search budget exhausted after {nodes} nodes")
        self.nodes = nodes
        self.best = best or []


@contextlib.contextmanager
def search_budget(nodes: int):
    """Temporarily change the default node budget of every search."""
    token = _budget.set(nodes)
    try:
        yield
    finally:
        _budget.reset(token)


def current_budget() -> int:
    return _budget.get()


@dataclass(frozen=True)
class Certificate:
    kind: str
    vertices: tuple[int, ...]
    statistic: int
    target: str

    @property
    def found(self) -> bool:
        return self.kind != ABSENCE

    def to_json(self) -> dict:
        return {"kind": self.kind, "vertices": list(self.vertices), "statistic": self.statistic, "target": self.target}

    @classmethod
    def from_json(cls, obj: dict) -> "Certificate":
        return cls(obj["kind"], tuple(obj["vertices"]), int(obj["statistic"]), obj["target"])


# -- clique search ----------------------------------------------------------


def degeneracy_order(adj: list[int] | tuple[int, ...], cand: int) -> list[int]:
    """Vertices of ``cand`` with the densest core first (reverse smallest-last)."""
    deg = {v: (adj[v] & cand).bit_count() for v in bits(cand)}
    removed: list[int] = []
    left = cand
    while left:
        v = min(bits(left), key=lambda u: (deg[u], u))
        removed.append(v)
        left &= ~(1 << v)
        for u in bits(adj[v] & left):
            deg[u] -= 1
    removed.reverse()
    return removed


class _CliqueSearch:
    """Branch and bound over bitsets with greedy colouring bounds."""

    def __init__(self, adj, cand: int, target: int | None, budget: int):
        order = degeneracy_order(adj, cand)
        self.order = order
        pos = {v: i for i, v in enumerate(order)}
        local = []
        for v in order:
            row = 0
            for u in bits(adj[v] & cand):
                row |= 1 << pos[u]
            local.append(row)
        self.adj = local
        self.budget = budget
        self.nodes = 0
        self.target = target
        self.best: list[int] = []
        self.best_size = 0 if target is None else target - 1
        self.done = False

    def _colour(self, p: int) -> tuple[list[int], list[int]]:
        adj = self.adj
        verts: list[int] = []
        cols: list[int] = []
        col = 0
        left = p
        while left:
            col += 1
            q = left
            while q:
                low = q & -q
                v = low.bit_length() - 1
                q &= ~(adj[v] | low)
                left ^= low
                verts.append(v)
                cols.append(col)
        return verts, cols

    def _expand(self, r: list[int], p: int) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise SearchBudgetExceeded(self.nodes, [self.order[v] for v in self.best])
        verts, cols = self._colour(p)
        for i in range(len(verts) - 1, -1, -1):
            if len(r) + cols[i] <= self.best_size:
                return
            v = verts[i]
            r.append(v)
            np_ = p & self.adj[v]
            if np_:
                self._expand(r, np_)
            elif len(r) > self.best_size:
                self.best = list(r)
                self.best_size = len(r)
                if self.target is not None and self.best_size >= self.target:
                    self.done = True
            if self.done:
                return
            r.pop()
            p &= ~(1 << v)

    def run(self) -> list[int]:
        if self.target is not None and self.target <= 0:
            return []
        if self.adj:
            self._expand([], (1 << len(self.adj)) - 1)
        return sorted(self.order[v] for v in self.best)


def find_clique(adj, cand: int, k: int, budget: int | None = None) -> list[int] | None:
    """A clique of order ``k`` inside the mask ``cand``, or ``None``."""
    if k <= 0:
        return []
    if cand.bit_count() < k:
        return None
    s = _CliqueSearch(adj, cand, k, current_budget() if budget is None else budget)
    found = s.run()
    return found if len(found) >= k else None


def clique_number_in(adj, cand: int, budget: int | None = None) -> tuple[list[int], int]:
    s = _CliqueSearch(adj, cand, None, current_budget() if budget is None else budget)
    found = s.run()
    return found, s.nodes


def complement_rows(adj, cand: int) -> list[int]:
    return [(cand & ~row & ~(1 << v)) if cand >> v & 1 else 0 for v, row in enumerate(adj)]


def has_independent_set(adj, cand: int, k: int, budget: int | None = None) -> list[int] | None:
    return find_clique(complement_rows(adj, cand), cand, k, budget)


def max_clique(g: Graph, budget: int | None = None) -> tuple[int, Certificate]:
    found, nodes = clique_number_in(g.adj, g.vertex_mask, budget)
    return len(found), Certificate(CLIQUE, tuple(found), nodes, "omega")


def has_clique(g: Graph, t: int, budget: int | None = None) -> Certificate:
    if t < 1:
        raise ValueError("clique order must be >= 1")
    s = _CliqueSearch(g.adj, g.vertex_mask, t, current_budget() if budget is None else budget)
    found = s.run() if g.n >= t else []
    if len(found) >= t:
        return Certificate(CLIQUE, tuple(found), s.nodes, f"K{t}")
    return Certificate(ABSENCE, (), s.nodes, f"K{t}")


def independence_number(g: Graph, budget: int | None = None) -> tuple[int, Certificate]:
    found, nodes = clique_number_in(complement_rows(g.adj, g.vertex_mask), g.vertex_mask, budget)
    return len(found), Certificate(INDEPENDENT_SET, tuple(found), nodes, "alpha")


def alpha_of_mask(g: Graph, s: int, budget: int | None = None) -> int:
    found, _ = clique_number_in(complement_rows(g.adj, s), s, budget)
    return len(found)


# -- odd cycles -------------------------------------------------------------


def find_short_odd_cycle(g: Graph, max_length: int = 7) -> Certificate:
    """Shortest odd cycle of length at most ``max_length``, or absence.

    BFS from every root; an edge inside distance layer ``d`` closes an odd
    walk of length ``2d+1``.  The globally shortest such walk is a simple
    cycle, which is re-checked before it is returned.
    """
    depth = (max_length - 1) // 2
    best = None
    explored = 0
    for s in range(g.n):
        layers = [1 << s]
        seen = 1 << s
        for d in range(depth + 1):
            cur = layers[d]
            explored += 1
            hit = None
            for u in bits(cur):
                inner = g.adj[u] & cur
                if inner:
                    hit = (u, (inner & -inner).bit_length() - 1)
                    break
            if hit is not None:
                if best is None or 2 * d + 1 < best[0]:
                    best = (2 * d + 1, s, hit, layers)
                break
            if best is not None and 2 * (d + 1) + 1 >= best[0]:
                break
            nxt = 0
            for u in bits(cur):
                nxt |= g.adj[u]
            nxt &= ~seen
            if not nxt:
                break
            seen |= nxt
            layers.append(nxt)
        if best is not None and best[0] == 3:
            break
    if best is None:
        return Certificate(ABSENCE, (), explored, f"odd-cycle<={max_length}")
    length, s, (u, w), layers = best
    d = (length - 1) // 2

    def trace(v: int) -> list[int]:
        out = [v]
        for k in range(d, 0, -1):
            par = g.adj[out[-1]] & layers[k - 1]
            out.append((par & -par).bit_length() - 1)
        return out

    pu, pw = trace(u), trace(w)
    cyc = pu[::-1] + pw[:-1]
    if len(set(cyc)) != length:
        raise AssertionError("odd-cycle reconstruction produced a non-simple walk")
    return Certificate(ODD_CYCLE, tuple(cyc), explored, f"odd-cycle<={max_length}")


def odd_girth_at_most(g: Graph, length: int) -> bool:
    return find_short_odd_cycle(g, length).found


# -- validation -------------------------------------------------------------


def validate_certificate(g: Graph, cert: Certificate) -> bool:
    """Independent re-check of a witness against the adjacency structure."""
    vs = list(cert.vertices)
    if any(not 0 <= v < g.n for v in vs) or len(set(vs)) != len(vs):
        return False
    if cert.kind == CLIQUE:
        ok = all(g.has_edge(u, v) for u, v in combinations(vs, 2))
        if cert.target.startswith("K") and cert.target[1:].isdigit():
            ok = ok and len(vs) >= int(cert.target[1:])
        return ok
    if cert.kind == INDEPENDENT_SET:
        return not any(g.has_edge(u, v) for u, v in combinations(vs, 2))
    if cert.kind == ODD_CYCLE:
        k = len(vs)
        if k % 2 == 0 or k < 3 or k > 7:
            return False
        return all(g.has_edge(vs[i], vs[(i + 1) % k]) for i in range(k))
    if cert.kind == ABSENCE:
        return not vs
    return False


# -- saturation -------------------------------------------------------------


def creates_clique(g: Graph, u: int, v: int, t: int) -> bool:
    """Would adding the edge ``uv`` create a ``K_t``?"""
    return find_clique(g.adj, g.adj[u] & g.adj[v], t - 2) is not None


def saturate(g: Graph, t: int, order: list[tuple[int, int]] | None = None, seed=None) -> Graph:
    """Add non-edges greedily (lexicographic unless ``order``/``seed``) while
    keeping the graph ``K_t``-free.  One pass suffices: a rejected pair only
    becomes more clearly rejected as edges are added.
    """
    if has_clique(g, t).found:
        raise ValueError(f"input graph already contains K{t}")
    if order is None:
        order = [(u, v) for u, v in combinations(range(g.n), 2)]
        if seed is not None:
            random.Random(seed).shuffle(order)
    for u, v in order:
        if u == v or g.has_edge(u, v):
            continue
        if not creates_clique(g, u, v, t):
            g = add_edge(g, u, v)
    return g


def is_saturated(g: Graph, t: int) -> bool:
    return all(creates_clique(g, u, v, t) for u, v in combinations(range(g.n), 2) if not g.has_edge(u, v))


def check_lemma34_properties(g: Graph, r: int, delta, subset_cap: int = 20000, samples: int = 2000, seed: int = 0) -> Report:
    """Check the three structural properties of saturated ``K_{2r+1}``-free
    graphs with large minimum degree and small independence number.

    Hypotheses are re-verified and reported, never enforced: a clause that
    fails on an input that violates the hypotheses is still reported.
    """
    delta = Fraction(delta)
    n = g.n
    rep = Report(f"saturation-properties r={r} delta={delta}")
    deg = g.degrees()
    alpha, acert = independence_number(g)
    rep.values.update(n=n, alpha=alpha, min_degree=min(deg, default=0), max_degree=max(deg, default=0))

    rep.add(verdict("hyp:K_{2r+1}-free", not has_clique(g, 2 * r + 1).found))
    rep.add(verdict("hyp:saturated", is_saturated(g, 2 * r + 1)))
    rep.add(verdict("hyp:min-degree", min(deg, default=0) * r >= (r - 1) * n, margin=Fraction(min(deg, default=0)) - Fraction(r - 1, r) * n))
    rep.add(verdict("hyp:alpha<delta*n", alpha < delta * n, margin=delta * n - alpha, witness=list(acert.vertices)))

    # (i) maximum degree
    bound_i = (Fraction(r - 1, r) + 2 * r * delta) * n
    worst = max(range(n), key=lambda v: deg[v], default=None)
    rep.add(verdict("(i) max-degree", n == 0 or deg[worst] < bound_i,
                    margin=None if n == 0 else bound_i - deg[worst],
                    witness=None if n == 0 or deg[worst] < bound_i else worst))

    # (ii) large sets contain K_{2r-2}; monotone in Q, so size exactly q suffices
    q = math.ceil((Fraction(2 * r - 3, 2 * r) + r * delta) * n)
    q = max(q, 0)
    if q > n:
        rep.add(Check("(ii) large-sets-contain-K_{2r-2}", VACUOUS, note=f"no set of size {q} in {n} vertices"))
    else:
        total = math.comb(n, q)
        if total <= subset_cap:
            subsets = (mask_of(c) for c in combinations(range(n), q))
            mode = "exact"
        else:
            rng = random.Random(seed)
            subsets = (mask_of(rng.sample(range(n), q)) for _ in range(samples))
            mode = "sampled"
        bad = None
        for s in subsets:
            if find_clique(g.adj, s, 2 * r - 2) is None:
                bad = sorted(bits(s))
                break
        rep.add(verdict("(ii) large-sets-contain-K_{2r-2}", bad is None, witness=bad, mode=mode,
                        note=f"|Q|={q}, {'all' if mode == 'exact' else samples} subsets"))

    # (iii) codegree of edges whose neighbourhoods do not cover V
    full = g.vertex_mask
    c3 = (Fraction(r - 1, r) + 8 * r * delta) * n
    bad = None
    slack = None
    for u, v in g.edges():
        if (g.adj[u] | g.adj[v]) == full:
            continue
        codeg = (g.adj[u] & g.adj[v]).bit_count()
        m = codeg - (deg[u] + deg[v] - c3)
        slack = m if slack is None else min(slack, m)
        if m < 0 and bad is None:
            bad = (u, v)
    if slack is None:
        rep.add(Check("(iii) codegree", VACUOUS, note="every edge dominates V"))
    else:
        rep.add(verdict("(iii) codegree", bad is None, margin=slack, witness=bad))
    return rep
