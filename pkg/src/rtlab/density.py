"""Dense and quasirandom vertex pairs, clique embedding in dense multipartite
graphs, and colouring of a partition's reduced graph.

A pair ``(A, B)`` is ``(delta, d)``-dense when every ``X <= A``, ``Y <= B``
has ``e(X, Y) >= d|X||Y| - delta|A||B|``, and ``(delta, d)``-quasirandom when
``|e(X, Y) - d|X||Y|| <= delta|A||B|``.  For a fixed ``X`` the extreme ``Y``
is a degree threshold set, so exhaustive checks only enumerate the smaller
side.  Sampled checks can certify violations but never density.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .certify import CLIQUE, Certificate, validate_certificate
from .checks import FAIL, PASS, Check, Report, exact, verdict
from .colored import BLUE, GREEN, RED, ColoredGraph
from .graph import Graph, VertexPartition, bits, mask_of

DENSE = "dense"
QUASIRANDOM = "quasirandom"
EXHAUSTIVE_CAP = 1 << 20


@dataclass
class PairDensityReport:
    kind: str
    d: Fraction
    target: Fraction
    delta: Fraction
    worst_deviation: Fraction
    mode: str
    samples: int
    holds: bool
    witness: tuple[list[int], list[int]] | None = None

    @property
    def lower_bound_only(self) -> bool:
        return self.mode == "sampled"

    def to_check(self, name: str) -> Check:
        return Check(name, PASS if self.holds else FAIL, self.delta - self.worst_deviation,
                     None if self.holds else {"X": self.witness[0], "Y": self.witness[1]}, mode=self.mode,
                     note="sampled: pass means no violation found" if self.mode == "sampled" else "")

    def to_json(self) -> dict:
        from .checks import jsonable

        return jsonable({"kind": self.kind, "d": self.d, "target": self.target, "delta": self.delta,
                         "worst_deviation": self.worst_deviation, "mode": self.mode, "samples": self.samples,
                         "holds": self.holds, "witness": self.witness})


def _scaled_rows(g: Graph, small: list[int], large: list[int]) -> list[int]:
    rows = []
    for v in large:
        row = 0
        for i, u in enumerate(small):
            if g.adj[v] >> u & 1:
                row |= 1 << i
        rows.append(row)
    return rows


def _exhaustive(g: Graph, small: list[int], large: list[int], d: Fraction, two_sided: bool):
    """Largest ``d|X||Y| - e(X,Y)`` (and, two-sided, ``e - d|X||Y|``) in units of ``1/den``."""
    num, den = d.numerator, d.denominator
    k = len(small)
    masks = np.arange(1 << k, dtype=np.uint32)
    sizes = np.bitwise_count(masks).astype(np.int64)
    low = np.zeros(1 << k, dtype=np.int64)
    high = np.zeros(1 << k, dtype=np.int64)
    rows = _scaled_rows(g, small, large)
    for row in rows:
        c = num * sizes - den * np.bitwise_count(masks & np.uint32(row)).astype(np.int64)
        low += np.maximum(c, 0)
        if two_sided:
            high += np.maximum(-c, 0)
    i_low = int(low.argmax())
    best, sign, m = int(low[i_low]), 1, i_low
    if two_sided:
        i_high = int(high.argmax())
        if int(high[i_high]) > best:
            best, sign, m = int(high[i_high]), -1, i_high
    x = [small[i] for i in range(k) if m >> i & 1]
    size = len(x)
    y = [v for v, row in zip(large, rows) if sign * (num * size - den * (row & m).bit_count()) > 0]
    return Fraction(best, den), x, y


def _response(g: Graph, x: list[int], other: list[int], d: Fraction, sign: int) -> list[int]:
    xm = mask_of(x)
    return [v for v in other if sign * (d * len(x) - (g.adj[v] & xm).bit_count()) > 0]


def _gap(g: Graph, x: list[int], y: list[int], d: Fraction) -> Fraction:
    return d * len(x) * len(y) - g.edges_between(mask_of(x), mask_of(y))


def _sampled(g: Graph, a: list[int], b: list[int], d: Fraction, two_sided: bool, samples: int, seed: int):
    """Worst deviation over singletons, degree slices and seeded random sets,
    each completed by the optimal response on the other side."""
    rng = random.Random(seed)
    signs = (1, -1) if two_sided else (1,)
    best = (Fraction(0), [], [])
    count = 0

    def consider(x: list[int], side_a: bool, sign: int):
        nonlocal best, count
        count += 1
        if side_a:
            y = _response(g, x, b, d, sign)
            val = sign * _gap(g, x, y, d)
            cand = (val, x, y)
        else:
            y = _response(g, x, a, d, sign)
            val = sign * _gap(g, y, x, d)
            cand = (val, y, x)
        if val > best[0]:
            best = cand

    for side_a, own, other in ((True, a, b), (False, b, a)):
        om = mask_of(other)
        by_deg = sorted(own, key=lambda v: ((g.adj[v] & om).bit_count(), v))
        for sign in signs:
            for v in own:
                consider([v], side_a, sign)
            for k in range(1, len(by_deg) + 1):
                consider(by_deg[:k], side_a, sign)
                consider(by_deg[-k:], side_a, sign)
    for i in range(samples):
        sign = signs[i % len(signs)]
        x = [v for v in a if rng.random() < 0.5]
        consider(x, True, sign)
    return best[0], best[1], best[2], count


def check_pair_dense(g: Graph, a: Sequence[int], b: Sequence[int], delta, d, *, kind: str = DENSE,
                     mode: str = "auto", cap: int = EXHAUSTIVE_CAP, samples: int = 1000,
                     seed: int = 0) -> PairDensityReport:
    """Verdict on ``(delta, d)``-density (``kind='dense'``) or quasirandomness.

    ``mode='exhaustive'`` enumerates every subset of the smaller side and is
    refused when that exceeds ``cap``; ``'auto'`` picks exhaustive when
    allowed and sampled otherwise.  For ``d = 1`` one-sided density is exact
    at any size: the worst pair is ``(A, B)`` itself.
    """
    a, b = sorted(set(a)), sorted(set(b))
    if not a or not b:
        raise ValueError("both sides must be non-empty")
    if set(a) & set(b):
        raise ValueError("sides must be disjoint")
    delta, d = exact(delta), exact(d)
    if kind not in (DENSE, QUASIRANDOM):
        raise ValueError(f"unknown kind {kind!r}")
    two_sided = kind == QUASIRANDOM
    ab = len(a) * len(b)
    observed = Fraction(g.edges_between(mask_of(a), mask_of(b)), ab)
    small, large = (a, b) if len(a) <= len(b) else (b, a)
    if mode == "auto":
        if d == 1 and not two_sided:
            mode = "exact"
        else:
            mode = "exhaustive" if (1 << len(small)) <= cap else "sampled"
    if mode == "exhaustive" and (1 << len(small)) > cap:
        raise ValueError(f"exhaustive check needs 2^{len(small)} subsets, above the cap {cap}")
    if mode == "exact":
        if d != 1 or two_sided:
            raise ValueError("the closed-form mode only covers one-sided density with d = 1")
        worst = (ab - observed * ab, a, b)
        count = 1
    elif mode == "exhaustive":
        dev, x, y = _exhaustive(g, small, large, d, two_sided)
        if small is not a:
            x, y = y, x
        worst, count = (dev, x, y), 1 << len(small)
    elif mode == "sampled":
        dev, x, y, count = _sampled(g, a, b, d, two_sided, samples, seed)
        worst = (dev, x, y)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    dev = worst[0] / ab
    return PairDensityReport(kind, observed, d, delta, dev, mode, count, dev <= delta, (worst[1], worst[2]))


def naive_pair_deviation(g: Graph, a: Sequence[int], b: Sequence[int], d, two_sided: bool) -> Fraction:
    """Double enumeration over all subset pairs; for cross-checks on tiny pairs."""
    d = exact(d)
    a, b = list(a), list(b)
    worst = Fraction(0)
    for xm in range(1 << len(a)):
        x = [a[i] for i in range(len(a)) if xm >> i & 1]
        for ym in range(1 << len(b)):
            y = [b[i] for i in range(len(b)) if ym >> i & 1]
            gap = _gap(g, x, y, d)
            worst = max(worst, gap, -gap if two_sided else worst)
    return worst / (len(a) * len(b))


# -- clique embedding ----------------------------------------------------------------------


@dataclass(frozen=True)
class EmbeddingSpec:
    a: int
    b: int
    theta: Fraction
    parts: tuple[tuple[int, ...], ...]
    densities: dict = field(default_factory=dict, compare=False)

    def __init__(self, a: int, b: int, theta, parts, densities=None):
        object.__setattr__(self, "a", int(a))
        object.__setattr__(self, "b", int(b))
        object.__setattr__(self, "theta", exact(theta))
        object.__setattr__(self, "parts", tuple(tuple(sorted(p)) for p in parts))
        object.__setattr__(self, "densities", dict(densities or {}))
        if not self.a >= self.b >= 1:
            raise ValueError("need a >= b >= 1")
        if not 0 < self.theta <= 1:
            raise ValueError("theta must lie in (0, 1]")
        if len(self.parts) != self.a:
            raise ValueError(f"need {self.a} parts, got {len(self.parts)}")
        if any(not p for p in self.parts):
            raise ValueError("parts must be non-empty")

    @staticmethod
    def constants(a: int, theta: Fraction) -> tuple[Fraction, Fraction]:
        """``(xi, delta) = ((theta^2/4)^(a-1), (theta/2)^(a-1))``."""
        return (theta * theta / 4) ** (a - 1), (theta / 2) ** (a - 1)

    @property
    def xi(self) -> Fraction:
        return self.constants(self.a, self.theta)[0]

    @property
    def delta(self) -> Fraction:
        return self.constants(self.a, self.theta)[1]

    def density(self, i: int, j: int) -> Fraction:
        """Declared ``d_ij`` (0-based), defaulting to the smallest admissible."""
        key = (min(i, j), max(i, j))
        if key in self.densities:
            return exact(self.densities[key])
        return Fraction(1, 2) + self.theta if key[1] < self.b else self.theta


class EmbeddingFailure(RuntimeError):
    """A hypothesis failed where the recursion relies on it."""

    def __init__(self, clause: str, level: int, detail: str):
        super().__init__(f"level {level}: {clause}: {detail}")
        self.clause = clause
        self.level = level
        self.detail = detail

    def to_json(self) -> dict:
        return {"clause": self.clause, "level": self.level, "detail": self.detail}


# alpha_oracle(g, mask) returns an edge inside ``mask`` or None
AlphaOracle = Callable[[Graph, int], "tuple[int, int] | None"]


def first_edge(g: Graph, mask: int) -> tuple[int, int] | None:
    """Lexicographically least edge inside ``mask``."""
    for u in bits(mask):
        later = g.adj[u] & mask & ~((1 << (u + 1)) - 1)
        if later:
            return u, (later & -later).bit_length() - 1
    return None


def embed_clique(spec: EmbeddingSpec, g: Graph, alpha_oracle: AlphaOracle | None = None) -> Certificate:
    """Clique of order ``a + b`` built by the two-case recursion.

    ``a > b``: a vertex of the last part with more than ``theta/2`` of every
    other part in its neighbourhood; ``a = b``: an edge among vertices with
    more than ``(1/2 + theta/2)`` of every other part.  Both recurse into the
    neighbourhood slices with ``(a-1, b)`` or ``(a-1, b-1)``.
    """
    oracle = alpha_oracle or first_edge
    theta = spec.theta
    parts = [mask_of(p) for p in spec.parts]
    clique: list[int] = []
    a, b, level, nodes = spec.a, spec.b, 1, 0
    while True:
        nodes += 1
        last = parts[a - 1]
        size_last = last.bit_count()
        if a == 1:
            e = oracle(g, last)
            if e is None:
                raise EmbeddingFailure("independence", level, "no edge inside the remaining part")
            clique.extend(e)
            break
        frac = theta / 2 if a > b else Fraction(1, 2) + theta / 2
        bad = 0
        for i in range(a - 1):
            pi = parts[i].bit_count()
            xs = mask_of(v for v in bits(last) if (g.adj[v] & parts[i]).bit_count() <= frac * pi)
            if a * xs.bit_count() > size_last:
                raise EmbeddingFailure("dense-pair", level,
                                       f"{xs.bit_count()} low-degree vertices towards part {i + 1} exceed |V_a|/a")
            bad |= xs
        good = last & ~bad
        if a > b:
            if not good:
                raise EmbeddingFailure("dense-pair", level, "no admissible vertex")
            v = (good & -good).bit_length() - 1
            clique.append(v)
            parts = [p & g.adj[v] for p in parts[: a - 1]]
            a -= 1
        else:
            e = oracle(g, good)
            if e is None:
                raise EmbeddingFailure("independence", level, f"no edge among {good.bit_count()} admissible vertices")
            u, v = e
            clique.extend((u, v))
            parts = [p & g.adj[u] & g.adj[v] for p in parts[: a - 1]]
            a, b = a - 1, b - 1
        level += 1
    cert = Certificate(CLIQUE, tuple(sorted(clique)), nodes, f"K{spec.a + spec.b}")
    if not validate_certificate(g, cert):
        raise AssertionError("embedding produced a non-clique")
    return cert


def verify_embedding_hypotheses(spec: EmbeddingSpec, g: Graph, *, mode: str = "auto", seed: int = 0) -> Report:
    """Density clauses via :func:`check_pair_dense`; the independence clause
    via exact independence numbers of the parts."""
    from .certify import alpha_of_mask

    rep = Report(f"embedding hypotheses a={spec.a} b={spec.b} theta={spec.theta}")
    for i in range(spec.a):
        for j in range(i + 1, spec.a):
            d = spec.density(i, j)
            lo = Fraction(1, 2) + spec.theta if j < spec.b else spec.theta
            rep.add(verdict(f"d_{i + 1}{j + 1} >= {lo}", lo <= d <= 1, margin=d - lo))
            pr = check_pair_dense(g, spec.parts[i], spec.parts[j], spec.xi, d, mode=mode, seed=seed)
            rep.add(pr.to_check(f"dense V{i + 1}-V{j + 1}"))
    for i, p in enumerate(spec.parts):
        alpha = alpha_of_mask(g, mask_of(p))
        lim = spec.delta * len(p)
        rep.add(verdict(f"alpha(V{i + 1}) < delta |V{i + 1}|", alpha < lim, margin=lim - alpha))
    return rep


# -- reduced graph colouring ---------------------------------------------------------------


def classify_reduced_edges(g: Graph, partition: VertexPartition, theta, xi, *, blue_upper: str = "xi",
                           mode: str = "auto", samples: int = 1000, seed: int = 0) -> tuple[ColoredGraph, Report]:
    """Colour pairs of blocks ``1..t`` (block 0 is the exceptional set).

    Green: not ``xi``-quasirandom at its own density, or density below
    ``theta``.  Blue: quasirandom with density in ``[theta, 1/2 + u)``.
    Red: otherwise.  ``u`` is ``xi`` by default or ``theta`` with
    ``blue_upper='theta'``; the two readings disagree and the report says
    which one was used.
    """
    theta, xi = exact(theta), exact(xi)
    if blue_upper not in ("xi", "theta"):
        raise ValueError("blue_upper must be 'xi' or 'theta'")
    upper = Fraction(1, 2) + (xi if blue_upper == "xi" else theta)
    blocks = partition.blocks[1:]
    sizes = {len(bl) for bl in blocks}
    if len(sizes) > 1:
        raise ValueError(f"blocks 1..t must have equal sizes, got {sorted(sizes)}")
    t = len(blocks)
    rep = Report(f"reduced colouring theta={theta} xi={xi}")
    rep.values.update(blue_interval=[theta, upper], blue_upper=blue_upper,
                      note="the blue interval's upper end is read as 1/2 + xi or 1/2 + theta; both are supported")
    mat = [[0] * t for _ in range(t)]
    for i in range(t):
        for j in range(i + 1, t):
            dens = Fraction(g.edges_between(mask_of(blocks[i]), mask_of(blocks[j])), len(blocks[i]) * len(blocks[j]))
            pr = check_pair_dense(g, blocks[i], blocks[j], xi, dens, kind=QUASIRANDOM, mode=mode,
                                  samples=samples, seed=seed)
            if not pr.holds or dens < theta:
                col = GREEN
            elif dens < upper:
                col = BLUE
            else:
                col = RED
            mat[i][j] = mat[j][i] = col
            rep.values[f"pair {i + 1}-{j + 1}"] = {"density": dens, "quasirandom": pr.holds, "mode": pr.mode,
                                                   "deviation": pr.worst_deviation, "colour": col}
    return ColoredGraph.from_matrix(mat), rep


def planted_embedding_instance(a: int, b: int, seed: int = 0, theta=Fraction(1, 2),
                               max_tries: int = 50) -> tuple[Graph, EmbeddingSpec]:
    """Seeded graph meeting the embedding hypotheses with ``theta = 1/2``.

    Every part is two disjoint cliques, so its independence number is 2.
    Pairs declared at density 1 miss at most ``xi |V_i||V_j|`` random edges.
    For ``a <= 2`` the pairs beyond ``b`` are random bipartite graphs at
    declared density ``theta``, resampled until the exhaustive check passes.
    """
    theta = exact(theta)
    if theta != Fraction(1, 2):
        raise ValueError("the planted family is calibrated for theta = 1/2")
    if not 1 <= b <= a <= 3:
        raise ValueError("planted instances cover 1 <= b <= a <= 3")
    rng = random.Random(seed)
    m = 34 if a == 3 else 12
    xi, _ = EmbeddingSpec.constants(a, theta)
    for _ in range(max_tries):
        order = list(range(a * m))
        rng.shuffle(order)
        parts = [sorted(order[i * m:(i + 1) * m]) for i in range(a)]
        edges = []
        for p in parts:
            cut = rng.randint(3, m - 3)
            for half in (p[:cut], p[cut:]):
                for x in range(len(half)):
                    for y in range(x + 1, len(half)):
                        edges.append((half[x], half[y]))
        dens = {}
        for i in range(a):
            for j in range(i + 1, a):
                full = j < b or a == 3
                if full:
                    pairs = [(u, v) for u in parts[i] for v in parts[j]]
                    missing = set(rng.sample(range(len(pairs)), rng.randint(0, int(xi * m * m))))
                    for k, (u, v) in enumerate(pairs):
                        if k not in missing:
                            edges.append((u, v))
                    dens[(i, j)] = Fraction(1)
                else:
                    p_edge = rng.uniform(0.8, 0.95)
                    for u in parts[i]:
                        for v in parts[j]:
                            if rng.random() < p_edge:
                                edges.append((u, v))
                    dens[(i, j)] = theta
        g = Graph.from_edges(a * m, edges)
        spec = EmbeddingSpec(a, b, theta, parts, dens)
        if verify_embedding_hypotheses(spec, g).ok:
            return g, spec
    raise RuntimeError(f"no valid instance after {max_tries} tries")
