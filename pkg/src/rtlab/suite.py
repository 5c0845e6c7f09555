"""The acceptance battery: eleven finite checks, each returning a verdict.

Every criterion runs under the ambient search budget.  A search that runs
out of budget turns the criterion ``inconclusive``; it never fails it.
"""

from __future__ import annotations

import random
from itertools import combinations
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable

from .certify import SearchBudgetExceeded, has_clique, find_short_odd_cycle, independence_number
from .checks import FAIL, INCONCLUSIVE, PASS, jsonable
from .colored import (ForbiddenPattern, all_colored, check_lemma46, contains_pattern, contains_pattern_naive,
                      extract_silly_partition, is_family_free, layered_instance, planted_instance, random_colored,
                      zykov_step)
from .constructions import (C5_PAIR, SphereGraphParams, even_construction, flz_modify, natural_partition,
                            odd_construction, odd_construction_edges, sides, sphere_graph, sphere_sidecar)
from .density import embed_clique, planted_embedding_instance
from .generate import generate_levels, no_short_odd_cycle_admit
from .graph import induced
from .partition import (ExactnessParams, check_exact_partition, codegree_pair, color_edges_by_codegree,
                        layered_bound, lemma51, omega_value, refine_partition)
from .rt import EMPTY, OK, Catalog, RTQuery, f_even, f_odd, monotonicity_violations, rt_exact, rt_oracle


@dataclass
class CriterionResult:
    number: int
    name: str
    status: str
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"criterion": self.number, "name": self.name, "status": self.status,
                "details": jsonable(self.details)}

    def line(self) -> str:
        return f"criterion {self.number:2d} [{self.status.upper()}] {self.name}"


def _status(ok: bool, inconclusive: bool = False) -> str:
    if not ok:
        return FAIL
    return INCONCLUSIVE if inconclusive else PASS


# -- criteria ---------------------------------------------------------------------------


def criterion_1(ctx: dict) -> tuple[bool, bool, dict]:
    mismatches, inconclusive, records = [], 0, []
    for n in range(7):
        for m in range(1, n + 2):
            for t in (3, 4, 5):
                q = RTQuery(n, m, t)
                ex = rt_exact(q)
                if ex.status not in (OK, EMPTY):
                    inconclusive += 1
                    continue
                records.append(ex)
                orc = rt_oracle(q)
                if (ex.status, ex.value) != (orc.status, orc.value):
                    mismatches.append([n, m, t, ex.value, orc.value])
    turan = {}
    for n in range(1, 9):
        ex = rt_exact(RTQuery(n, n + 1, 3))
        if ex.status not in (OK, EMPTY):
            inconclusive += 1
            continue
        records.append(ex)
        turan[n] = [ex.value, n * n // 4]
    bad_turan = [n for n, (v, f) in turan.items() if v != f]
    if not inconclusive:
        ctx["records"] = records
    return not mismatches and not bad_turan, inconclusive > 0, {
        "oracle_mismatches": mismatches, "turan": turan, "turan_mismatches": bad_turan,
        "inconclusive_queries": inconclusive}


def criterion_2(ctx: dict) -> tuple[bool, bool, dict]:
    rows, ok = [], True
    for r in (2, 3):
        for a in (1, 2):
            g = odd_construction(r, C5_PAIR, a)
            formula = odd_construction_edges(r, C5_PAIR, a)
            clique = has_clique(g, 2 * r + 1)
            alpha, _ = independence_number(g)
            good = (g.num_edges() == formula and clique.kind == "absence" and alpha == a * C5_PAIR.d)
            ok &= good
            rows.append({"r": r, "a": a, "edges": g.num_edges(), "formula": formula, "alpha": alpha,
                         "clique_free": clique.kind == "absence"})
    return ok, False, {"cases": rows}


def criterion_3(ctx: dict) -> tuple[bool, bool, dict]:
    rng = random.Random(3)
    failures, moreover_checked = [], 0
    rho = Fraction(1, 100)
    for i in range(10_000):
        r = rng.randint(2, 6)
        if i % 2:
            raw = [rng.randint(1, 1000) for _ in range(r)]
        else:
            base = [2] * 2 + [3] * (r - 2)
            raw = [1000 * b + rng.randint(-40, 40) for b in base]
        s = sum(raw)
        a = [Fraction(x, s) for x in raw]
        res = lemma51(a, rho)
        if not res.holds or res.deviations_hold is False:
            failures.append([str(x) for x in a])
        if res.deviations_hold is not None:
            moreover_checked += 1
    equality = []
    for r in range(2, 7):
        opt = [Fraction(2, 3 * r - 2)] * 2 + [Fraction(3, 3 * r - 2)] * (r - 2)
        res = lemma51(opt)
        equality.append(res.value == res.bound)
    return not failures and all(equality), False, {
        "samples": 10_000, "failures": failures[:5], "moreover_checked": moreover_checked,
        "equality_r2_to_r6": equality}


def criterion_4(ctx: dict) -> tuple[bool, bool, dict]:
    levels = generate_levels(8, no_short_odd_cycle_admit())
    count, bad = 0, []
    for graphs in levels:
        for g in graphs:
            count += 1
            lb = layered_bound(g)
            if not (lb.edges <= lb.alpha ** 2 and lb.report.ok):
                bad.append(g.edges())
    return not bad, False, {"graphs": count, "per_order": [len(x) for x in levels], "failures": bad[:3]}


def criterion_5(ctx: dict) -> tuple[bool, bool, dict]:
    levels = generate_levels(7)
    pairs_bad, checked_q = [], 0
    for n in range(3, 7):
        for g in levels[n]:
            for q in combinations(range(n), 3):
                checked_q += 1
                x, y, margin = codegree_pair(g, q)
                if margin < 0:
                    pairs_bad.append([g.edges(), list(q)])
    red_bad = []
    for n in range(8):
        for g in levels[n]:
            for r in (2, 3):
                if not color_edges_by_codegree(g, r).check.ok:
                    red_bad.append([r, g.edges()])
    return not pairs_bad and not red_bad, False, {
        "triples_checked": checked_q, "pair_failures": pairs_bad[:3], "red_failures": red_bad[:3],
        "classes_per_order": [len(x) for x in levels]}


def _sphere(ctx: dict):
    if "sphere" not in ctx:
        p = SphereGraphParams()
        ctx["sphere"] = (p, sphere_graph(p))
    return ctx["sphere"]


def criterion_6(ctx: dict) -> tuple[bool, bool, dict]:
    p, g = _sphere(ctx)
    side = sphere_sidecar(g, p)
    clique = has_clique(g, 4)
    a, b = sides(g)
    odd = []
    for part in (a, b):
        h, _ = induced(g, part)
        odd.append(find_short_odd_cycle(h, 7).kind == "absence")
    measured = side["cross_density"]
    target = side["cross_density_target"]
    ok = clique.kind == "absence" and all(odd) and abs(measured - target) <= 0.05
    return ok, False, {"n": g.n, "k4_free": clique.kind == "absence", "sides_odd_girth_ok": odd,
                       "cross_density": measured, "target": target}


def criterion_7(ctx: dict) -> tuple[bool, bool, dict]:
    _, g = _sphere(ctx)
    delta, xi = Fraction(1, 10), Fraction(1, 50)
    h, info = flz_modify(g, delta, xi)
    clique = has_clique(h, 4)
    dens = Fraction(h.num_edges() * 2, h.n * h.n)
    need = Fraction(1, 4) + delta - delta * delta - Fraction(8, 100)
    ok = clique.kind == "absence" and dens >= need
    return ok, False, {"k4_free": clique.kind == "absence", "density": dens, "required": need,
                       "set_size": info["set_size"]}


def criterion_8(ctx: dict) -> tuple[bool, bool, dict]:
    delta = Fraction(1, 10)
    g, info = even_construction(2, delta, 40)
    part = natural_partition(g)
    params = ExactnessParams(2, delta)
    rep = check_exact_partition(g, part, params)
    st0 = refine_partition(g, part, 2)
    victim = part.blocks[1][0]
    moved = part.move(victim, 0)
    st = refine_partition(g, moved, 2)
    steps_clear = all(drop > st.threshold for _, _, _, drop in st.step_log)
    omega_nat = omega_value(g, part)
    ok = rep.ok and not st0.step_log and st.omega <= omega_value(g, moved) and st.omega <= omega_nat and steps_clear
    return ok, rep.status == INCONCLUSIVE, {
        "exact_partition": rep.status, "moves_on_natural": len(st0.step_log), "misfiled_vertex": victim,
        "omega_natural": omega_nat, "omega_misfiled": omega_value(g, moved), "omega_final": st.omega,
        "steps": st.step_log, "threshold": st.threshold, "restored": st.partition.blocks == part.blocks}


def criterion_9(ctx: dict) -> tuple[bool, bool, dict]:
    rng = random.Random(9)
    mismatch = 0
    for _ in range(500):
        n = rng.randint(0, 6)
        c = random_colored(n, rng)
        for a in range(1, 5):
            for b in range(1, a + 1):
                p = ForbiddenPattern(a, b)
                if (contains_pattern(c, p) is None) != (contains_pattern_naive(c, p) is None):
                    mismatch += 1
    zykov_bad, zykov_total, zykov_free = 0, 0, 0

    def zcheck(c, r):
        nonlocal zykov_bad, zykov_total, zykov_free
        zykov_total += 1
        nxt = zykov_step(c)
        free_before = is_family_free(c, r, plus=True).ok
        zykov_free += free_before
        if nxt.edge_weight() < c.edge_weight() or (free_before and not is_family_free(nxt, r, plus=True).ok):
            zykov_bad += 1

    for c in all_colored(4):
        for r in (2, 3):
            zcheck(c, r)
    for _ in range(1000):
        zcheck(random_colored(8, rng, (0.7, 0.25, 0.05)), rng.choice((3, 4)))
    l46_bad = 0
    for r in (2, 3, 4):
        for _ in range(1000):
            if not check_lemma46(layered_instance(r, rng), r).ok:
                l46_bad += 1
    planted = {}
    for r in (2, 3, 4):
        c, blocks = planted_instance(r, 2)
        sp = extract_silly_partition(c, r, 0)
        planted[r] = not sp.blocks[0] and sorted(map(sorted, sp.blocks[1:])) == sorted(map(sorted, blocks))
    ok = mismatch == 0 and zykov_bad == 0 and l46_bad == 0 and all(planted.values())
    return ok, False, {"pattern_mismatches": mismatch, "zykov_checked": zykov_total, "zykov_free_inputs": zykov_free, "zykov_violations": zykov_bad,
                       "lemma46_failures": l46_bad, "planted_recovered": planted}


def criterion_10(ctx: dict) -> tuple[bool, bool, dict]:
    found = {}
    for a, b in ((1, 1), (2, 1), (2, 2), (3, 2)):
        good = 0
        for seed in range(100):
            g, spec = planted_embedding_instance(a, b, seed)
            cert = embed_clique(spec, g)
            good += len(cert.vertices) == a + b
        found[f"{a},{b}"] = good
    return all(v == 100 for v in found.values()), False, {"verified_cliques": found}


def criterion_11(ctx: dict) -> tuple[bool, bool, dict]:
    grid = [Fraction(k, 100) for k in range(100)]
    even_bad = [d for d in grid if f_even(2, d) - Fraction(1, 4) != d - d * d]
    odd_bad = [d for d in grid if f_odd(1, d) != d]
    records = list(ctx.get("records") or [])
    inconclusive = False
    if not records:
        for n in range(6):
            for m in range(1, n + 2):
                for t in (3, 4, 5):
                    rec = rt_exact(RTQuery(n, m, t))
                    if rec.status in (OK, EMPTY):
                        records.append(rec)
                    else:
                        inconclusive = True
    with tempfile.TemporaryDirectory() as tmp:
        cat = Catalog(Path(tmp) / "catalog.jsonl")
        for rec in records:
            cat.put(rec)
        catalogs = [cat]
        if ctx.get("catalog"):
            catalogs.append(Catalog(ctx["catalog"]))
        problems = []
        size = 0
        for c in catalogs:
            problems += c.verify() + monotonicity_violations(list(c))
            size += len(c)
    ok = not even_bad and not odd_bad and not problems
    return ok, inconclusive, {"grid": len(grid), "f_even_failures": even_bad, "f_odd_failures": odd_bad,
                              "catalogued": size, "catalog_problems": problems[:5]}


CRITERIA: list[tuple[int, str, Callable]] = [
    (1, "oracle equivalence and Turan baseline", criterion_1),
    (2, "odd construction exactness", criterion_2),
    (3, "size inequality on random vectors", criterion_3),
    (4, "edge bound for graphs without short odd cycles", criterion_4),
    (5, "codegree pairs and red-edge bound", criterion_5),
    (6, "sphere graph at desk scale", criterion_6),
    (7, "modified sphere graph density", criterion_7),
    (8, "exact partition and refinement", criterion_8),
    (9, "coloured-graph suite", criterion_9),
    (10, "clique embedder on planted instances", criterion_10),
    (11, "formula identities and catalog monotonicity", criterion_11),
]


def run_criterion(number: int, ctx: dict | None = None) -> CriterionResult:
    ctx = {} if ctx is None else ctx
    _, name, fn = CRITERIA[number - 1]
    try:
        ok, inconclusive, details = fn(ctx)
        status = _status(ok, inconclusive)
    except SearchBudgetExceeded as exc:
        status, details = INCONCLUSIVE, {"budget_exhausted": str(exc)}
    return CriterionResult(number, name, status, details)


def run_suite(numbers=None, catalog: str | None = None) -> list[CriterionResult]:
    ctx: dict = {"catalog": catalog}
    return [run_criterion(k, ctx) for k in (numbers or range(1, 12))]
