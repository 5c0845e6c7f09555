"""Run reports, JSON pipelines and the acceptance-suite summary.

Reports are deterministic: identical inputs and seeds give byte-identical
JSON.  Wall time is only recorded when asked for.
"""

from __future__ import annotations

import hashlib
import json
import platform
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__
from .certify import SearchBudgetExceeded, current_budget, find_short_odd_cycle, has_clique, independence_number, \
    max_clique, search_budget
from .checks import FAIL, INCONCLUSIVE, PASS, Check, Report, jsonable, verdict
from .constructions import (C5_PAIR, EvenParams, SphereGraphParams, even_construction, flz_modify, natural_partition,
                            odd_construction, sphere_graph, sphere_sidecar)
from .graph import Graph, VertexPartition, petersen, turan_graph
from .io import dumps_graph, read_graph, read_partition, to_json_obj
from .partition import ExactnessParams, check_exact_partition, color_edges_by_codegree, layered_bound, \
    refine_partition

SCHEMA_NAME = "run_report.schema.json"


def graph_hash(g: Graph) -> str:
    """``sha256:`` of the canonical JSON form, labels included."""
    blob = json.dumps(to_json_obj(g), sort_keys=True).encode()
    return "sha256:" + hashlib.sha256(blob).hexdigest()


def provenance(seed: int | None, **extra) -> dict:
    out = {"seed": seed, "budget": current_budget(),
           "versions": {"rtlab": __version__, "numpy": np.__version__,
                        "python": ".".join(platform.python_version_tuple()[:2])}}
    out.update(extra)
    return out


@dataclass
class RunReport:
    command: dict
    inputs: dict = field(default_factory=dict)
    results: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)
    verdicts: list[Check] = field(default_factory=list)

    @property
    def status(self) -> str:
        deciding = [c for c in self.verdicts if c.mode != "observation"]
        if any(c.status == FAIL for c in deciding):
            return FAIL
        if any(c.status == INCONCLUSIVE for c in deciding):
            return INCONCLUSIVE
        return PASS

    def absorb(self, rep: Report, prefix: str = "") -> None:
        for c in rep.checks:
            self.verdicts.append(Check(prefix + c.name, c.status, c.margin, c.witness, c.note, c.mode))

    def to_json(self) -> dict:
        return {"command": jsonable(self.command), "inputs": jsonable(self.inputs),
                "results": jsonable(self.results), "provenance": jsonable(self.provenance),
                "verdicts": [c.to_json() for c in self.verdicts], "status": self.status}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2) + "\n"


def exit_code(reports: list[RunReport]) -> int:
    statuses = {r.status for r in reports}
    if FAIL in statuses:
        return 1
    if INCONCLUSIVE in statuses:
        return 2
    return 0


def load_schema() -> dict:
    return json.loads(resources.files("rtlab").joinpath("schema", SCHEMA_NAME).read_text())


# -- pipelines -----------------------------------------------------------------------------


class PipelineError(ValueError):
    """Bad pipeline file or stage; carries the position or the stage name."""

    def __init__(self, message: str, *, stage: str | None = None, line: int | None = None,
                 column: int | None = None):
        where = f"stage {stage!r}: " if stage else (f"line {line} column {column}: " if line else "")
        super().__init__(where + message)
        self.stage, self.line, self.column = stage, line, column

    def to_json(self) -> dict:
        return {"error": str(self), "stage": self.stage, "line": self.line, "column": self.column}


def parse_pipeline(text: str) -> dict:
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PipelineError(exc.msg, line=exc.lineno, column=exc.colno) from None
    if isinstance(cfg, list):
        cfg = {"stages": cfg}
    if not isinstance(cfg, dict) or not isinstance(cfg.get("stages", []), list):
        raise PipelineError("expected an object with a 'stages' list", line=1, column=1)
    for i, st in enumerate(cfg.get("stages", [])):
        if not isinstance(st, dict) or "op" not in st:
            raise PipelineError(f"stage {i} needs an 'op'", stage=str(i))
        st.setdefault("name", f"stage{i}")
    return cfg


def construct_graph(op: str, args: dict, seed: int) -> tuple[Graph, dict]:
    if op == "odd_construction":
        return odd_construction(int(args.get("r", 2)), C5_PAIR, int(args.get("a", 1))), {}
    if op == "even_construction":
        sp = SphereGraphParams(**args.get("sphere", {})) if "sphere" in args else SphereGraphParams(seed=seed)
        g, info = even_construction(int(args.get("r", 2)), args.get("delta", "1/10"), int(args.get("n", 40)),
                                    EvenParams(sphere=sp, seed=seed))
        return g, info
    if op == "sphere_graph":
        p = SphereGraphParams(**{"seed": seed, **args})
        g = sphere_graph(p)
        return g, sphere_sidecar(g, p)
    if op == "turan":
        return turan_graph(int(args["n"]), int(args["r"])), {}
    if op == "petersen":
        return petersen(), {}
    raise KeyError(op)


CONSTRUCT_OPS = ("odd_construction", "even_construction", "sphere_graph", "turan", "petersen")
GRAPH_OPS = ("load", "flz_modify", "certify", "check_exact_partition", "refine_partition", "edges",
             "layered_bound")


def certify_graph(g: Graph, args: dict) -> Report:
    rep = Report("certify")
    if "kfree" in args:
        t = int(args["kfree"])
        cert = has_clique(g, t)
        rep.add(verdict(f"K{t}-free", cert.kind == "absence", witness=None if cert.kind == "absence"
                        else list(cert.vertices)))
    if "alpha_below" in args:
        m = int(args["alpha_below"])
        alpha, cert = independence_number(g)
        rep.add(verdict(f"alpha < {m}", alpha < m, margin=m - 1 - alpha,
                        witness=list(cert.vertices) if alpha >= m else None))
    if "no_odd_cycle" in args:
        length = int(args["no_odd_cycle"])
        cert = find_short_odd_cycle(g, length)
        rep.add(verdict(f"no odd cycle of length <= {length}", cert.kind == "absence",
                        witness=None if cert.kind == "absence" else list(cert.vertices)))
    if args.get("values", True):
        omega, _ = max_clique(g)
        alpha, _ = independence_number(g)
        rep.values.update(n=g.n, edges=g.num_edges(), clique_number=omega, independence_number=alpha)
    return rep


def _partition_for(g: Graph, spec, stage: str, base: Path) -> VertexPartition:
    if spec in (None, "natural"):
        return natural_partition(g)
    if isinstance(spec, list):
        return VertexPartition.from_blocks(spec, g.n)
    path = base / (spec["file"] if isinstance(spec, dict) else spec)
    if not path.exists():
        raise PipelineError(f"partition file {str(path)!r} not found", stage=stage)
    return read_partition(path, g.n)


def _analyze(op: str, g: Graph, args: dict, stage: str, seed: int, base: Path) -> tuple[Report, dict]:
    if op == "certify":
        rep = certify_graph(g, args)
        return rep, rep.values
    if op == "check_exact_partition":
        part = _partition_for(g, args.get("partition"), stage, base)
        rep = check_exact_partition(g, part, ExactnessParams(int(args["r"]), args.get("eps", "1/10")), seed=seed)
        return rep, {"partition": part.blocks}
    if op == "refine_partition":
        part = _partition_for(g, args.get("partition"), stage, base)
        st = refine_partition(g, part, args.get("r"))
        rep = Report("refine")
        rep.add(verdict("omega non-increasing", st.omega <= st.omega0, margin=st.omega0 - st.omega))
        rep.add(verdict("steps within bound", len(st.step_log) <= st.step_bound(),
                        margin=st.step_bound() - len(st.step_log)))
        return rep, st.to_json()
    if op == "edges":
        col = color_edges_by_codegree(g, int(args["r"]))
        rep = Report("codegree colouring")
        rep.add(col.check)
        return rep, {"red": col.red, "green_count": len(col.green), "bound": col.bound}
    if op == "layered_bound":
        cyc = find_short_odd_cycle(g, 7)
        if cyc.found:
            rep = Report("layered bound")
            rep.add(verdict("no C3/C5/C7", False, witness=list(cyc.vertices)))
            return rep, {}
        lb = layered_bound(g)
        return lb.report, {"edges": lb.edges, "alpha": lb.alpha, "z": lb.z}
    raise KeyError(op)


def run_pipeline(config, *, base_dir: str | Path | None = None, fail_fast: bool | None = None,
                 timing: bool = False) -> list[RunReport]:
    """Run the stages of a pipeline file, text or parsed dict, in order.

    Stages name their input graph with ``"graph"``: a prior stage name, a
    ``sha256:`` hash from a prior stage, or ``{"file": path}``.
    """
    if isinstance(config, (str, Path)) and Path(str(config)).suffix == ".json" and Path(str(config)).exists():
        base_dir = base_dir or Path(config).parent
        config = Path(config).read_text()
    cfg = parse_pipeline(config) if isinstance(config, str) else config
    base = Path(base_dir or ".")
    seed = int(cfg.get("seed", 0))
    stop_early = cfg.get("fail_fast", False) if fail_fast is None else fail_fast
    by_name: dict[str, Graph] = {}
    by_hash: dict[str, Graph] = {}
    reports: list[RunReport] = []
    for st in cfg.get("stages", []):
        name, op, args = st["name"], st["op"], dict(st.get("args", {}))
        start = time.perf_counter()
        rr = RunReport(command={"stage": name, "op": op, "args": args})
        try:
            with search_budget(int(cfg.get("budget", current_budget()))):
                if op in CONSTRUCT_OPS:
                    g, info = construct_graph(op, args, seed)
                    rr.results = {"graph": graph_hash(g), "n": g.n, "edges": g.num_edges(), "info": info,
                                  "graph6": dumps_graph(g, "g6").strip()}
                else:
                    if op not in GRAPH_OPS:
                        raise PipelineError(f"unknown op {op!r}", stage=name)
                    g = _resolve(st.get("graph"), name, by_name, by_hash, base)
                    rr.inputs = {"graph": graph_hash(g)}
                    if op == "load":
                        rr.results = {"graph": graph_hash(g), "n": g.n, "edges": g.num_edges()}
                    elif op == "flz_modify":
                        g, info = flz_modify(g, args.get("delta", "1/10"), args.get("xi", "1/50"), seed=seed)
                        rr.results = {"graph": graph_hash(g), "n": g.n, "edges": g.num_edges(), "info": info}
                    else:
                        rep, res = _analyze(op, g, args, name, seed, base)
                        rr.absorb(rep)
                        rr.results = res
        except SearchBudgetExceeded as exc:
            rr.verdicts.append(Check("search budget", INCONCLUSIVE, note=str(exc)))
            g = None
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, PipelineError):
                raise
            raise PipelineError(f"bad arguments: {exc}", stage=name) from None
        rr.provenance = provenance(seed, stage=name)
        if timing:
            rr.provenance["wall_time"] = round(time.perf_counter() - start, 6)
        if g is not None:
            by_name[name] = g
            by_hash[graph_hash(g)] = g
        reports.append(rr)
        if stop_early and rr.status == FAIL:
            break
    return reports


def _resolve(ref: Any, stage: str, by_name: dict, by_hash: dict, base: Path) -> Graph:
    if ref is None:
        raise PipelineError("no input graph given", stage=stage)
    if isinstance(ref, dict) and "file" in ref:
        path = base / ref["file"]
        if not path.exists():
            raise PipelineError(f"graph file {ref['file']!r} not found", stage=stage)
        return read_graph(path)
    if isinstance(ref, str) and ref in by_name:
        return by_name[ref]
    if isinstance(ref, str) and ref in by_hash:
        return by_hash[ref]
    raise PipelineError(f"unknown graph reference {ref!r}", stage=stage)


# -- the acceptance battery ----------------------------------------------------------------


def verify_paper_suite(*, budget: int | None = None, catalog: str | None = None, criteria=None,
                       timing: bool = False) -> RunReport:
    """Run the acceptance battery and summarise one verdict per criterion."""
    from .suite import run_criterion

    rr = RunReport(command={"name": "verify-paper", "args": {"budget": budget, "criteria": criteria}})
    ctx: dict = {"catalog": catalog}
    results = []
    with search_budget(budget if budget is not None else current_budget()):
        for k in criteria or range(1, 12):
            start = time.perf_counter()
            res = run_criterion(k, ctx)
            entry = res.to_json()
            if timing:
                entry["wall_time"] = round(time.perf_counter() - start, 6)
            results.append(entry)
            rr.verdicts.append(Check(f"criterion {k}: {res.name}", res.status))
        rr.provenance = provenance(None)
    rr.results = {"criteria": results}
    return rr
