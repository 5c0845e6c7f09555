"""Ramsey-Turan numbers RT(n, m, K_t) for small n, the limit-density
formulas, and a JSON-lines catalog of solved instances.

``m`` may be an integer or a rational; the constraint is always the strict
``alpha(G) < m``, i.e. ``alpha(G) <= ceil(m) - 1``.
"""

from __future__ import annotations

import json
import math
import os
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from pathlib import Path

import numpy as np

from .certify import (SearchBudgetExceeded, creates_clique, find_clique, has_clique,
                      independence_number)
from .checks import jsonable, rational_json
from .generate import GenerationStats, generate_levels, rt_admit
from .graph import Graph, add_edge, complete
from .io import from_graph6, to_graph6

OK = "ok"
EMPTY = "empty"
INCONCLUSIVE = "inconclusive"

EXACT_LIMIT = 10
ORACLE_LIMIT = 8
CATALOG_ENV = "RTLAB_CATALOG"


@dataclass(frozen=True)
class RTQuery:
    n: int
    m: Fraction
    t: int

    def __init__(self, n: int, m, t: int):
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "m", Fraction(m))
        object.__setattr__(self, "t", int(t))
        if self.n < 0:
            raise ValueError("n must be non-negative")
        if self.t < 2:
            raise ValueError("t must be at least 2")
        if self.m <= 0:
            raise ValueError("m must be positive")

    @property
    def amax(self) -> int:
        """Largest independence number allowed by ``alpha < m``."""
        return math.ceil(self.m) - 1

    def key(self) -> str:
        return f"{self.n}|{self.m}|{self.t}"

    def to_json(self) -> dict:
        return {"n": self.n, "m": rational_json(self.m), "t": self.t}

    @classmethod
    def from_json(cls, obj: dict) -> "RTQuery":
        m = obj["m"]
        if isinstance(m, dict):
            m = Fraction(int(m["num"]), int(m["den"]))
        return cls(obj["n"], m, obj["t"])


@dataclass
class RTRecord:
    query: RTQuery
    status: str
    value: int | None
    witnesses: list[str] = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"query": self.query.to_json(), "status": self.status, "value": self.value,
                "witnesses": list(self.witnesses), "stats": jsonable(self.stats)}

    @classmethod
    def from_json(cls, obj: dict) -> "RTRecord":
        return cls(RTQuery.from_json(obj["query"]), obj["status"], obj["value"], list(obj["witnesses"]),
                   dict(obj.get("stats", {})))


def satisfies(g: Graph, q: RTQuery) -> bool:
    if has_clique(g, q.t).found:
        return False
    return independence_number(g)[0] < q.m


def certify_record(rec: RTRecord) -> list[str]:
    """Problems with a record's witnesses; empty when everything re-certifies."""
    q = rec.query
    problems = []
    if rec.status == EMPTY and (rec.value is not None or rec.witnesses):
        problems.append("empty record must carry no value and no witnesses")
    for w in rec.witnesses:
        g = from_graph6(w)
        if g.n != q.n:
            problems.append(f"witness {w} has {g.n} vertices, expected {q.n}")
        elif has_clique(g, q.t).found:
            problems.append(f"witness {w} contains K{q.t}")
        elif independence_number(g)[0] >= q.m:
            problems.append(f"witness {w} has alpha >= {q.m}")
        elif g.num_edges() != rec.value and rec.status == OK:
            problems.append(f"witness {w} has {g.num_edges()} edges, record says {rec.value}")
    return problems


# -- exact solver -------------------------------------------------------------


def rt_exact(q: RTQuery, *, limit: int = EXACT_LIMIT, budget: int | None = None, witnesses: int = 3,
             fallback_restarts: int = 20, seed: int = 0) -> RTRecord:
    """Exact RT(n, m, K_t) by isomorph-free generation of the admissible class.

    Admissible graphs form a hereditary class, so the generator prunes every
    vertex extension that would create a K_t or an independent ``ceil(m)``-set.
    On budget exhaustion the record is ``inconclusive`` and carries a lower
    bound from :func:`local_search_lower_bound`.
    """
    if q.n > limit:
        raise ValueError(f"n={q.n} exceeds the exact limit {limit}")
    start = time.perf_counter()
    stats = GenerationStats()
    if q.n > 0 and q.amax < 1:
        return RTRecord(q, EMPTY, None, [], {"nodes": 0, "wall_time": time.perf_counter() - start})
    try:
        levels = generate_levels(q.n, rt_admit(q.t, q.amax), budget, stats)
    except SearchBudgetExceeded:
        try:
            best = local_search_lower_bound(q, restarts=fallback_restarts, seed=seed)
        except SearchBudgetExceeded:
            best = None
        st = {"nodes": stats.nodes, "exhausted": True, "lower_bound": best is not None,
              "wall_time": time.perf_counter() - start}
        if best is None:
            return RTRecord(q, INCONCLUSIVE, None, [], st)
        return RTRecord(q, INCONCLUSIVE, best.num_edges(), [to_graph6(best)], st)
    top = levels[q.n]
    st = {"nodes": stats.nodes, "classes": stats.level_counts, "wall_time": time.perf_counter() - start}
    if not top:
        return RTRecord(q, EMPTY, None, [], st)
    value = max(g.num_edges() for g in top)
    best = sorted(to_graph6(g) for g in top if g.num_edges() == value)
    return RTRecord(q, OK, value, best[:witnesses], st)


def local_search_lower_bound(q: RTQuery, restarts: int = 20, seed: int = 0) -> Graph | None:
    """Feasible graph from seeded edge deletion followed by saturation.

    Starting at K_n, repeatedly pick a K_t and delete one of its edges whose
    removal keeps ``alpha < m``; once K_t-free, add back every edge that
    creates no K_t.  Adding edges never raises alpha, so the result stays
    feasible.  Returns the best graph found, or ``None``.
    """
    rng = random.Random(seed)
    best = None
    for _ in range(restarts):
        g = complete(q.n)
        while True:
            k = find_clique(g.adj, g.vertex_mask, q.t)
            if k is None:
                break
            pairs = list(combinations(k, 2))
            rng.shuffle(pairs)
            for u, v in pairs:
                h = _remove_edge(g, u, v)
                if independence_number(h)[0] < q.m:
                    g = h
                    break
            else:
                g = None
                break
        if g is None:
            continue
        order = [p for p in combinations(range(q.n), 2) if not g.has_edge(*p)]
        rng.shuffle(order)
        for u, v in order:
            if not g.has_edge(u, v) and not creates_clique(g, u, v, q.t):
                g = add_edge(g, u, v)
        if best is None or g.num_edges() > best.num_edges():
            best = g
    return best


def _remove_edge(g: Graph, u: int, v: int) -> Graph:
    adj = list(g.adj)
    adj[u] &= ~(1 << v)
    adj[v] &= ~(1 << u)
    return Graph(g.n, tuple(adj))


# -- brute-force oracle -------------------------------------------------------


def rt_oracle(q: RTQuery, *, chunk: int = 1 << 20, witnesses: int = 3) -> RTRecord:
    """RT(n, m, K_t) by scanning every labelled graph on ``n`` vertices.

    Graphs are edge masks over the ``n(n-1)/2`` pairs; clique and
    independent-set tests are subset-mask comparisons vectorised with numpy.
    """
    n = q.n
    if n > ORACLE_LIMIT:
        raise ValueError(f"oracle limited to n <= {ORACLE_LIMIT}")
    start = time.perf_counter()
    pairs = list(combinations(range(n), 2))
    index = {p: i for i, p in enumerate(pairs)}

    def subset_masks(k: int) -> list[int]:
        out = []
        for c in combinations(range(n), k):
            m = 0
            for p in combinations(c, 2):
                m |= 1 << index[p]
            out.append(m)
        return out

    kt = subset_masks(q.t) if q.t <= n else []
    ind_size = q.amax + 1
    # An independent ceil(m)-set of size 1 is any vertex; size 0 never occurs
    # since m > 0 forces ceil(m) >= 1.
    ind = subset_masks(ind_size) if ind_size <= n else []
    total = 1 << len(pairs)
    best_val = -1
    best: list[int] = []
    dtype = np.uint64
    for lo in range(0, total, chunk):
        masks = np.arange(lo, min(total, lo + chunk), dtype=dtype)
        ok = np.ones(masks.shape, dtype=bool)
        for s in kt:
            ok &= (masks & dtype(s)) != dtype(s)
        for s in ind:
            ok &= (masks & dtype(s)) != 0
        if not ok.any():
            continue
        good = masks[ok]
        counts = np.bitwise_count(good)
        top = int(counts.max())
        if top > best_val:
            best_val, best = top, []
        if top == best_val and len(best) < 64:
            best.extend(int(x) for x in good[counts == top][:64])
    st = {"nodes": total, "wall_time": time.perf_counter() - start}
    if best_val < 0:
        return RTRecord(q, EMPTY, None, [], st)
    graphs = sorted({to_graph6(Graph.from_edges(n, [pairs[i] for i in range(len(pairs)) if m >> i & 1]))
                     for m in best})
    return RTRecord(q, OK, best_val, graphs[:witnesses], st)


# -- limit densities ------------------------------------------------------------


def _check_delta(delta) -> Fraction:
    d = Fraction(delta)
    if not 0 <= d < 1:
        raise ValueError(f"delta must lie in [0, 1), got {d}")
    return d


def f_even(r: int, delta) -> Fraction:
    """Limit density for K_{2r}: (3r-5)/(3r-2) + delta - delta^2."""
    if r < 2:
        raise ValueError("f_even needs r >= 2")
    d = _check_delta(delta)
    return Fraction(3 * r - 5, 3 * r - 2) + d - d * d


def f_odd(r: int, delta) -> Fraction:
    """Limit density for K_{2r+1}: (r-1)/r + delta."""
    if r < 1:
        raise ValueError("f_odd needs r >= 1")
    d = _check_delta(delta)
    return Fraction(r - 1, r) + d


# -- catalog --------------------------------------------------------------------


class CatalogError(RuntimeError):
    pass


def default_catalog_path() -> Path:
    return Path(os.environ.get(CATALOG_ENV, "rt_catalog.jsonl"))


class Catalog:
    """Append-only JSON-lines store of :class:`RTRecord` keyed by (n, m, t).

    Corrupt lines are skipped and listed in :attr:`errors` with their line
    numbers; the remaining records stay readable.
    """

    def __init__(self, path: str | Path | None = None):
        self.path = Path(path) if path is not None else default_catalog_path()
        self.records: dict[str, RTRecord] = {}
        self.errors: list[tuple[int, str]] = []
        self._load()

    def _load(self) -> None:
        if not self.path.exists():
            return
        for lineno, line in enumerate(self.path.read_text().splitlines(), start=1):
            if not line.strip():
                continue
            try:
                rec = RTRecord.from_json(json.loads(line))
            except (ValueError, KeyError, TypeError) as exc:
                self.errors.append((lineno, f"{type(exc).__name__}: {exc}"))
                continue
            self.records.setdefault(rec.query.key(), rec)

    def get(self, q: RTQuery) -> RTRecord | None:
        return self.records.get(q.key())

    def put(self, rec: RTRecord) -> bool:
        """Store ``rec``; returns False when an identical value is already present."""
        if rec.status not in (OK, EMPTY):
            raise CatalogError(f"only exact records are catalogued, got status {rec.status!r}")
        problems = certify_record(rec)
        if problems:
            raise CatalogError("witness re-certification failed: " + "; ".join(problems))
        old = self.get(rec.query)
        if old is not None:
            if (old.status, old.value) != (rec.status, rec.value):
                raise CatalogError(f"conflicting value for {rec.query.key()}: stored {old.value}, new {rec.value}")
            return False
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with self.path.open("a") as fh:
            fh.write(json.dumps(_catalog_row(rec), sort_keys=True) + "\n")
        self.records[rec.query.key()] = rec
        return True

    def __iter__(self):
        return iter(self.records.values())

    def __len__(self) -> int:
        return len(self.records)

    def verify(self) -> list[str]:
        out = []
        for rec in self:
            out.extend(f"{rec.query.key()}: {p}" for p in certify_record(rec))
        return out


def _catalog_row(rec: RTRecord) -> dict:
    row = rec.to_json()
    row["stats"] = {k: v for k, v in row["stats"].items() if k != "wall_time"}
    return row


def monotonicity_violations(records) -> list[str]:
    """Pairs of exact records breaking monotonicity in ``m`` or in ``t``.

    An empty record counts as minus infinity.
    """
    exact = [r for r in records if r.status in (OK, EMPTY)]
    val = {(r.query.n, r.query.m, r.query.t): (-1 if r.status == EMPTY else r.value) for r in exact}
    out = []
    for (n, m, t), v in val.items():
        for (n2, m2, t2), v2 in val.items():
            if n2 != n:
                continue
            if t2 == t and m2 > m and v2 < v:
                out.append(f"RT({n},{m},{t})={v} > RT({n},{m2},{t})={v2}")
            if m2 == m and t2 > t and v2 < v:
                out.append(f"RT({n},{m},{t})={v} > RT({n},{m},{t2})={v2}")
    return out


def solve_into_catalog(cat: Catalog, q: RTQuery, **kw) -> RTRecord:
    rec = cat.get(q)
    if rec is None:
        rec = rt_exact(q, **kw)
        if rec.status in (OK, EMPTY):
            cat.put(rec)
    return rec
