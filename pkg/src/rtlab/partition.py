"""Vertex-partition machinery for even-clique extremal graphs.

Everything here works in exact rational arithmetic with ``n`` an integer:
block-size inequalities, the balanced-partition checker, the potential
``Omega = 6 e(A1) + 6 e(A2) + sum_{i>=3} e(A_i)`` and its single-vertex
descent, codegree colourings, threshold classifiers and the layering bound
for graphs without short odd cycles.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from .certify import find_short_odd_cycle, has_clique, independence_number
from .checks import FAIL, OBSERVATION, PASS, Check, Report, exact, verdict
from .graph import Graph, VertexPartition, bits, induced, mask_of

# -- block-size inequality ----------------------------------------------------------


def _targets(r: int) -> list[Fraction]:
    return [Fraction(2, 3 * r - 2)] * 2 + [Fraction(3, 3 * r - 2)] * (r - 2)


@dataclass
class SizeInequality:
    value: Fraction
    bound: Fraction
    rho: Fraction
    deviations: list[Fraction]
    holds: bool
    deviations_hold: bool | None

    @property
    def gap(self) -> Fraction:
        return self.bound - self.value


def lemma51(a: Sequence, rho=None) -> SizeInequality:
    """Evaluate ``sum_{i<j} a_i a_j - a_1 a_2 / 2`` against ``(3r-5)/(2(3r-2))``.

    When ``value >= bound - rho`` every deviation ``a_i - target_i`` must
    satisfy ``|dev| <= 2 sqrt(rho)``, compared exactly as ``dev^2 <= 4 rho``.
    ``rho`` defaults to the gap ``bound - value``, the smallest admissible.
    """
    a = [exact(x) for x in a]
    r = len(a)
    if r < 2:
        raise ValueError("need at least two coordinates")
    if sum(a) != 1:
        raise ValueError(f"coordinates sum to {sum(a)}, not 1")
    s = sum(a)
    value = (s * s - sum(x * x for x in a)) / 2 - a[0] * a[1] / 2
    bound = Fraction(3 * r - 5, 2 * (3 * r - 2))
    devs = [x - c for x, c in zip(a, _targets(r))]
    rho = bound - value if rho is None else exact(rho)
    dev_ok = None
    if rho >= 0 and value >= bound - rho:
        dev_ok = all(d * d <= 4 * rho for d in devs)
    return SizeInequality(value, bound, rho, devs, value <= bound, dev_ok)


def check_fact52(g: Graph, partition: VertexPartition, eta) -> Report:
    """Size and density consequences of a near-extremal partition."""
    eta = exact(eta)
    n, r = g.n, partition.r
    rep = Report(f"block-consequences eta={eta}")
    masks = partition.masks()
    sizes = partition.sizes()
    lim2 = 4 * (r + 1) * eta * n * n  # (2 sqrt((r+1) eta) n)^2
    for i, (s, c) in enumerate(zip(sizes, _targets(r))):
        dev = s - c * n
        rep.add(verdict(f"size B{i + 1}", dev * dev <= lim2, margin=lim2 - dev * dev,
                        note="margin compares squared deviation"))
    if r >= 2:
        e12 = g.edges_between(masks[0], masks[1])
        lb = Fraction(sizes[0] * sizes[1], 2) - r * eta * n * n
        rep.add(verdict("half-density B1-B2", e12 >= lb, margin=e12 - lb))
    for i, j in combinations(range(r), 2):
        if (i, j) == (0, 1):
            continue
        e = g.edges_between(masks[i], masks[j])
        lb = sizes[i] * sizes[j] - (r + 1) * eta * n * n
        rep.add(verdict(f"dense B{i + 1}-B{j + 1}", e >= lb, margin=e - lb))
    return rep


# -- balanced partition checker -----------------------------------------------------


@dataclass(frozen=True)
class ExactnessParams:
    r: int
    eps: Fraction

    def __init__(self, r: int, eps):
        object.__setattr__(self, "r", int(r))
        object.__setattr__(self, "eps", exact(eps))
        if self.r < 2:
            raise ValueError("r must be >= 2")
        if self.eps <= 0:
            raise ValueError("eps must be positive")

    def degree_thresholds(self, n: int) -> dict[str, Fraction]:
        u = Fraction(n, 3 * self.r - 2)
        return {"B1B2": u / 3, "B12->Bj": 5 * u / 3, "Bi->B12": u / 5, "Bi->Bj": u}


def half_density_deviation(g: Graph, b1: Sequence[int], b2: Sequence[int], *, exact_limit: int = 20,
                           restarts: int = 50, seed: int = 0) -> tuple[Fraction, str, tuple]:
    """``max |e(X1, X2) - |X1||X2|/2|`` over ``X1 <= B1``, ``X2 <= B2``.

    For a fixed ``X1`` the best ``X2`` takes every vertex whose degree into
    ``X1`` is above (or, for the other sign, below) ``|X1|/2``, so only the
    smaller side is enumerated.  Beyond ``exact_limit`` a seeded alternating
    local search gives a lower bound.  Returns (deviation, mode, witness).
    """
    small, large = (list(b1), list(b2)) if len(b1) <= len(b2) else (list(b2), list(b1))
    if len(small) <= exact_limit:
        dev, x1, x2 = _half_density_exact(g, small, large)
        mode = "exact"
    else:
        dev, x1, x2 = _half_density_local(g, small, large, restarts, seed)
        mode = "local-search"
    if len(b1) > len(b2):
        x1, x2 = x2, x1
    return dev, mode, (x1, x2)


def _half_density_exact(g: Graph, small: list[int], large: list[int]):
    k = len(small)
    masks = np.arange(1 << k, dtype=np.uint32)
    sizes = np.bitwise_count(masks).astype(np.int64)
    pos = np.zeros(1 << k, dtype=np.int64)
    neg = np.zeros(1 << k, dtype=np.int64)
    rows = []
    for v in large:
        row = 0
        for i, u in enumerate(small):
            if g.adj[v] >> u & 1:
                row |= 1 << i
        rows.append(row)
        # twice the contribution of v: 2 d_X1(v) - |X1|
        c = 2 * np.bitwise_count(masks & np.uint32(row)).astype(np.int64) - sizes
        pos += np.maximum(c, 0)
        neg += np.minimum(c, 0)
    ip, ineg = int(pos.argmax()), int(neg.argmin())
    if pos[ip] >= -neg[ineg]:
        best, sign, m = int(pos[ip]), 1, ip
    else:
        best, sign, m = int(-neg[ineg]), -1, ineg
    x1 = [small[i] for i in range(k) if m >> i & 1]
    size = len(x1)
    x2 = [v for v, row in zip(large, rows) if sign * (2 * (row & m).bit_count() - size) > 0]
    return Fraction(best, 2), x1, x2


def _best_response(g: Graph, x: list[int], other: list[int], sign: int) -> list[int]:
    xm = mask_of(x)
    return [v for v in other if sign * (2 * (g.adj[v] & xm).bit_count() - len(x)) > 0]


def _signed_gap(g: Graph, x1: list[int], x2: list[int]) -> Fraction:
    return g.edges_between(mask_of(x1), mask_of(x2)) - Fraction(len(x1) * len(x2), 2)


def _half_density_local(g: Graph, small: list[int], large: list[int], restarts: int, seed: int):
    rng = random.Random(seed)
    best = (Fraction(-1), [], [])
    for attempt in range(restarts):
        sign = 1 if attempt % 2 == 0 else -1
        x1 = [v for v in small if rng.random() < 0.5]
        last = None
        for _ in range(100):
            x2 = _best_response(g, x1, large, sign)
            x1 = _best_response(g, x2, small, sign)
            val = sign * _signed_gap(g, x1, x2)
            if last is not None and val <= last:
                break
            last = val
        x2 = _best_response(g, x1, large, sign)
        val = sign * _signed_gap(g, x1, x2)
        if val > best[0]:
            best = (val, list(x1), list(x2))
    return best


def check_exact_partition(g: Graph, partition: VertexPartition, params: ExactnessParams, *,
                          exact_limit: int = 20, restarts: int = 50, seed: int = 0) -> Report:
    """Check all nine size, sparsity, density and local-degree clauses of an
    ``(r, eps)``-balanced partition.  The half-density subset clause is exact
    when the smaller of ``B1``, ``B2`` has at most ``exact_limit`` vertices and
    a mode-tagged local-search lower bound otherwise."""
    r, eps, n = params.r, params.eps, g.n
    if partition.r != r:
        raise ValueError(f"partition has {partition.r} blocks, expected {r}")
    partition.validate(n)
    rep = Report(f"balanced-partition r={r} eps={eps}")
    blocks, masks, sizes = partition.blocks, partition.masks(), partition.sizes()
    tol = eps * n
    en2 = eps * n * n
    for i in range(r):
        dev = abs(sizes[i] - _targets(r)[i] * n)
        name = "size B1/B2" if i < 2 else "size Bi"
        rep.add(verdict(f"{name} [B{i + 1}]", dev <= tol, margin=tol - dev))
    for i in range(r):
        e = g.edges_within(masks[i])
        rep.add(verdict(f"sparse [B{i + 1}]", e <= en2, margin=en2 - e))
    dev, mode, wit = half_density_deviation(g, blocks[0], blocks[1], exact_limit=exact_limit,
                                            restarts=restarts, seed=seed)
    holds = dev <= en2
    rep.add(Check("half-density subsets [B1,B2]", PASS if holds else FAIL, en2 - dev,
                  None if holds else {"X1": wit[0], "X2": wit[1]}, mode=mode,
                  note="" if mode == "exact" else "lower bound on the deviation; pass means no violation found"))
    rep.values["half_density_deviation"] = dev
    for i, j in combinations(range(r), 2):
        if (i, j) == (0, 1):
            continue
        e = g.edges_between(masks[i], masks[j])
        lb = sizes[i] * sizes[j] - en2
        rep.add(verdict(f"dense [B{i + 1},B{j + 1}]", e >= lb, margin=e - lb))
    th = params.degree_thresholds(n)
    for i in range(r):
        for j in range(r):
            if i == j:
                continue
            if i < 2 and j < 2:
                key = "B1B2"
            elif i < 2:
                key = "B12->Bj"
            elif j < 2:
                key = "Bi->B12"
            else:
                key = "Bi->Bj"
            t = th[key]
            worst = min(blocks[i], key=lambda v: ((g.adj[v] & masks[j]).bit_count(), v), default=None)
            if worst is None:
                rep.add(Check(f"min-degree {key} [B{i + 1}->B{j + 1}]", PASS, note="empty block"))
                continue
            d = (g.adj[worst] & masks[j]).bit_count()
            rep.add(verdict(f"min-degree {key} [B{i + 1}->B{j + 1}]", d >= t, margin=d - t,
                            witness=None if d >= t else worst))
    return rep


# -- potential descent ------------------------------------------------------------------


def _weights(r: int) -> list[int]:
    return [6, 6] + [1] * (r - 2)


def omega_value(g: Graph, partition: VertexPartition) -> int:
    return sum(c * g.edges_within(m) for c, m in zip(_weights(partition.r), partition.masks()))


@dataclass
class RefinementState:
    partition: VertexPartition
    omega: int
    omega0: int
    step_log: list[tuple[int, int, int, int]] = field(default_factory=list)
    threshold: Fraction = Fraction(0)

    @property
    def steps(self) -> int:
        return len(self.step_log)

    def step_bound(self) -> Fraction:
        """Telescoping bound ``Omega_0 / threshold`` on the number of moves."""
        return self.omega0 / self.threshold if self.threshold else Fraction(0)

    def to_json(self) -> dict:
        return {"partition": self.partition.to_json(), "omega": self.omega, "omega0": self.omega0,
                "threshold": self.threshold,
                "steps": [{"vertex": v, "from": i + 1, "to": j + 1, "drop": d} for v, i, j, d in self.step_log]}


def refine_partition(g: Graph, initial: VertexPartition, r: int | None = None,
                     check_every_step: bool = True) -> RefinementState:
    """Move single vertices while some move lowers ``Omega`` by at least
    ``(1/4) n / (3r-2)``; always apply the largest drop, ties broken by the
    smallest (vertex, target block).  Block indices in the log are 0-based.
    """
    r = initial.r if r is None else r
    if initial.r != r:
        raise ValueError(f"partition has {initial.r} blocks, expected {r}")
    initial.validate(g.n)
    n = g.n
    c = _weights(r)
    threshold = Fraction(n, 4 * (3 * r - 2))
    blocks = [set(b) for b in initial.blocks]
    where = initial.block_of()
    masks = initial.masks()
    omega = omega_value(g, initial)
    state = RefinementState(initial, omega, omega, [], threshold)
    cap = math.floor(state.step_bound()) + 1
    while True:
        best = None
        for v in range(n):
            i = where[v]
            di = [(g.adj[v] & m).bit_count() for m in masks]
            for j in range(r):
                if j == i:
                    continue
                drop = c[i] * di[i] - c[j] * di[j]
                if drop >= threshold and (best is None or drop > best[0]):
                    best = (drop, v, j)
        if best is None:
            break
        if len(state.step_log) >= cap:
            raise AssertionError("refinement exceeded its telescoping step bound")
        drop, v, j = best
        i = where[v]
        blocks[i].discard(v)
        blocks[j].add(v)
        masks[i] &= ~(1 << v)
        masks[j] |= 1 << v
        where[v] = j
        omega -= drop
        state.step_log.append((v, i, j, drop))
        if check_every_step:
            part = VertexPartition(tuple(tuple(sorted(b)) for b in blocks))
            if omega_value(g, part) != omega:
                raise AssertionError("incremental Omega diverged from recomputation")
    state.partition = VertexPartition(tuple(tuple(sorted(b)) for b in blocks))
    state.omega = omega
    return state


# -- codegree machinery -------------------------------------------------------------------


def codegree_bound(g: Graph, x: int, y: int, r: int) -> Fraction:
    return Fraction(r - 1, r) * (g.degree(x) + g.degree(y)) - Fraction((r - 1) * g.n, r + 1)


def codegree_pair(g: Graph, q: Sequence[int]) -> tuple[int, int, Fraction]:
    """Pair of ``Q`` (``|Q| = r + 1``) maximising codegree minus the bound
    ``(r-1)/r (d(x)+d(y)) - (r-1)/(r+1) n``; ties go to the smallest pair."""
    q = sorted(set(q))
    if len(q) < 2:
        raise ValueError("Q needs at least two vertices")
    r = len(q) - 1
    best = None
    for x, y in combinations(q, 2):
        m = (g.adj[x] & g.adj[y]).bit_count() - codegree_bound(g, x, y, r)
        if best is None or m > best[2]:
            best = (x, y, m)
    return best


@dataclass
class EdgeColouring:
    red: list[tuple[int, int]]
    green: list[tuple[int, int]]
    bound: Fraction
    check: Check


def color_edges_by_codegree(g: Graph, r: int) -> EdgeColouring:
    """Red edges have codegree below the bound; at most ``(r-1)/(2r) n^2`` of them."""
    if r < 1:
        raise ValueError("r must be positive")
    red, green = [], []
    for x, y in g.edges():
        if (g.adj[x] & g.adj[y]).bit_count() < codegree_bound(g, x, y, r):
            red.append((x, y))
        else:
            green.append((x, y))
    bound = Fraction((r - 1) * g.n * g.n, 2 * r)
    return EdgeColouring(red, green, bound, verdict("red-edge bound", len(red) <= bound, margin=bound - len(red)))


# -- threshold classification inside the blocks -------------------------------------------


@dataclass
class Section6Classes:
    plus: dict[int, list[int]]
    minus: dict[int, list[int]]
    P: dict[int, list[int]]
    Q: dict[int, list[int]]
    R: dict[int, list[int]]
    S: dict[int, list[int]]
    report: Report

    def to_json(self) -> dict:
        key = lambda d: {f"B{i + 1}": v for i, v in d.items()}  # noqa: E731
        return {"B+": key(self.plus), "B-": key(self.minus), "P": key(self.P), "Q": key(self.Q),
                "R": key(self.R), "S": key(self.S), "report": self.report.to_json()}


def classify_section6(g: Graph, partition: VertexPartition, r: int, delta, *,
                      verify_hypotheses: bool = True) -> Section6Classes:
    """Threshold classes: ``B_i^+ / B_i^-`` for ``i >= 3`` and ``P, Q, R, S``
    inside each of ``B1`` and ``B2`` (roles of the two swapped for ``B2``).

    Structural facts are reported as checks.  Unless the graph is verified
    to be ``K_{2r}``-free with ``alpha < delta n`` they are tagged as
    observations, since they are only guaranteed under those hypotheses.
    """
    delta = exact(delta)
    n = g.n
    if partition.r != r:
        raise ValueError(f"partition has {partition.r} blocks, expected {r}")
    partition.validate(n)
    u = Fraction(n, 3 * r - 2)
    blocks, masks, sizes = partition.blocks, partition.masks(), partition.sizes()
    rep = Report(f"block-classification r={r} delta={delta}")
    mode = OBSERVATION
    if verify_hypotheses:
        kfree = not has_clique(g, 2 * r).found
        alpha = independence_number(g)[0]
        rep.values.update(K2r_free=kfree, alpha=alpha)
        if kfree and alpha < delta * n:
            mode = "exact"
    rep.values["fact_mode"] = mode
    plus, minus = {}, {}
    for i in range(2, r):
        t = n - sizes[i] - u / 15
        plus[i] = [x for x in blocks[i] if (g.adj[x] & ~masks[i]).bit_count() >= t]
        minus[i] = [x for x in blocks[i] if (g.adj[x] & ~masks[i]).bit_count() < t]
        e_bv = sum(g.degree(x) for x in blocks[i])
        bound = (n - sizes[i]) * sizes[i] + delta * n * sizes[i]
        rep.add(verdict(f"edge bound B{i + 1}", e_bv <= bound, margin=bound - e_bv, mode=mode))
    P, Q, R, S = {}, {}, {}, {}
    for i, j in ((0, 1), (1, 0)):
        out_t = n - sizes[i] - Fraction(sizes[j], 2) - u / 15
        P[i] = [x for x in blocks[i] if (g.adj[x] & ~masks[i]).bit_count() <= out_t]
        pm = mask_of(P[i])
        rest = [x for x in blocks[i] if not pm >> x & 1]
        lo, hi = (sizes[j] + delta * n) / 2, 7 * u / 4
        dj = {x: (g.adj[x] & masks[j]).bit_count() for x in rest}
        Q[i] = [x for x in rest if dj[x] <= lo]
        R[i] = [x for x in rest if lo < dj[x] <= hi]
        S[i] = [x for x in rest if dj[x] > hi]
        rest_m = mask_of(rest)
        tri = _triangle_with_two_in(g, masks[i], rest_m)
        rep.add(verdict(f"no triangle with two vertices outside P [B{i + 1}]", tri is None, witness=tri, mode=mode))
        sub, mapping = induced(g, rest)
        cyc = find_short_odd_cycle(sub)
        rep.add(verdict(f"no C3/C5/C7 outside P [B{i + 1}]", not cyc.found,
                        witness=[mapping[v] for v in cyc.vertices] or None, mode=mode))
        s_edge = next(((x, y) for x in S[i] for y in bits(g.adj[x] & masks[i])), None)
        rep.add(verdict(f"S sends no edge into B{i + 1}", s_edge is None, witness=s_edge, mode=mode))
        rs = mask_of(R[i] + S[i])
        rs_edge = next(((x, y) for x in bits(rs) for y in bits(g.adj[x] & rs) if x < y), None)
        rep.add(verdict(f"R and S independent [B{i + 1}]", rs_edge is None, witness=rs_edge, mode=mode))
        e_bv = sum(g.degree(x) for x in blocks[i])
        bound = (sizes[i] * (n - sizes[0] - sizes[1]) + Fraction(sizes[0] * sizes[1], 2)
                 + delta * n * (sizes[0] + sizes[1]) / 2 - delta * delta * n * n / 2)
        rep.add(verdict(f"edge bound B{i + 1}", e_bv <= bound, margin=bound - e_bv, mode=mode))
    return Section6Classes(plus, minus, P, Q, R, S, rep)


def _triangle_with_two_in(g: Graph, block: int, rest: int):
    """Triangle inside ``block`` with at least two vertices in ``rest``."""
    for x in bits(rest):
        for y in bits(g.adj[x] & rest):
            if y <= x:
                continue
            common = g.adj[x] & g.adj[y] & block
            if common:
                return [x, y, (common & -common).bit_length() - 1]
    return None


# -- layering bound ----------------------------------------------------------------------


@dataclass
class LayeredBound:
    edges: int
    alpha: int
    z: list[int]
    layers: list[list[int]]
    report: Report

    @property
    def alpha_squared(self) -> int:
        return self.alpha * self.alpha

    def to_json(self) -> dict:
        return {"edges": self.edges, "alpha": self.alpha, "alpha_squared": self.alpha_squared,
                "z": self.z, "layers": self.layers, "report": self.report.to_json()}


def _ball(g: Graph, v: int, radius: int) -> list[int]:
    """Distance layers ``0..radius`` around ``v`` as masks."""
    layers = [1 << v]
    seen = 1 << v
    for _ in range(radius):
        nxt = 0
        for u in bits(layers[-1]):
            nxt |= g.adj[u]
        nxt &= ~seen
        seen |= nxt
        layers.append(nxt)
    return layers


def layered_bound(g: Graph) -> LayeredBound:
    """Greedy far-apart centres ``z_i`` (maximum degree among vertices at
    distance at least four from earlier centres, ties to the smallest id)
    and the induced layers ``W_i``; each intermediate step is checked."""
    cyc = find_short_odd_cycle(g)
    if cyc.found:
        raise ValueError(f"graph contains a short odd cycle {list(cyc.vertices)}")
    alpha, _ = independence_number(g)
    deg = g.degrees()
    rep = Report("layering bound")
    left = g.vertex_mask
    z: list[int] = []
    layers: list[list[int]] = []
    parity_ok = True
    while left:
        v = max(bits(left), key=lambda x: (deg[x], -x))
        ball = _ball(g, v, 3)
        w = (ball[0] | ball[1] | ball[2] | ball[3]) & left
        even, odd = (ball[0] | ball[2]) & w, (ball[1] | ball[3]) & w
        if g.edges_within(even) or g.edges_within(odd):
            parity_ok = False
        z.append(v)
        layers.append(sorted(bits(w)))
        left &= ~w
    rep.add(verdict("parity classes independent", parity_ok))
    nb = [g.adj[v] for v in z]
    disjoint = all(not (nb[i] & nb[j]) for i, j in combinations(range(len(z)), 2))
    rep.add(verdict("centre neighbourhoods disjoint", disjoint))
    union = 0
    for m in nb:
        union |= m
    rep.add(verdict("union of centre neighbourhoods independent", g.edges_within(union) == 0))
    e = g.num_edges()
    weighted = sum(len(w) * deg[v] for w, v in zip(layers, z))
    rep.add(verdict("degree sum dominated by centres", 2 * e <= weighted, margin=weighted - 2 * e))
    rep.add(verdict("layer sizes at most 2 alpha", all(len(w) <= 2 * alpha for w in layers)))
    rep.add(verdict("e <= alpha * sum d(z)", e <= alpha * sum(deg[v] for v in z)))
    rep.add(verdict("e <= alpha^2", e <= alpha * alpha, margin=alpha * alpha - e))
    return LayeredBound(e, alpha, z, layers, rep)

