"""``rtlab`` command line.

Exit codes: 0 all checks pass, 1 a check fails, 2 something is
inconclusive, 3 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from .certify import search_budget, DEFAULT_BUDGET
from .checks import INCONCLUSIVE, Check, Report, exact, verdict
from .colored import ColoredGraph, PartitionExtractionError, check_lemma46, extract_silly_partition, is_family_free
from .density import check_pair_dense
from .io import dumps_graph, read_graph, read_partition, write_graph
from .reports import (PipelineError, RunReport, construct_graph, certify_graph, exit_code, graph_hash, provenance,
                      run_pipeline, verify_paper_suite)
from .rt import CATALOG_ENV, EMPTY, OK, Catalog, RTQuery, rt_exact, rt_oracle, solve_into_catalog
from .partition import ExactnessParams, check_exact_partition, color_edges_by_codegree, refine_partition
from .constructions import flz_modify, natural_partition

USAGE_ERROR = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    def global_flags(parser, defaults: bool):
        d = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
        parser.add_argument("--seed", type=int, default=d(0))
        parser.add_argument("--budget", type=int, default=d(None),
                            help=f"search node budget (default {DEFAULT_BUDGET})")
        parser.add_argument("--format", choices=["json", "g6", "edgelist"], default=d("g6"),
                            help="graph output format")
        parser.add_argument("--catalog", default=d(None), help=f"RT catalog path (default ${CATALOG_ENV})")
        parser.add_argument("--timing", action="store_true", default=d(False), help="record wall time in reports")

    p = _Parser(prog="rtlab", description="Exact finite tools for Ramsey-Turan problems.")
    global_flags(p, True)
    common = argparse.ArgumentParser(add_help=False)
    global_flags(common, False)
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    sub_add = sub.add_parser
    sub.add_parser = lambda name, **kw: sub_add(name, parents=[common], **kw)

    c = sub.add_parser("construct", help="build a graph")
    c.add_argument("kind", choices=["odd", "even", "sphere", "flz", "turan", "petersen"])
    c.add_argument("--r", type=int, default=2)
    c.add_argument("--a", type=int, default=1)
    c.add_argument("--n", type=int, default=40)
    c.add_argument("--delta", default="1/10")
    c.add_argument("--xi", default="1/50")
    c.add_argument("--points", type=int, default=100, help="sphere points per side")
    c.add_argument("-o", "--output", help="graph file (stdout if omitted)")
    c.add_argument("--report", help="also write a RunReport here")

    c = sub.add_parser("certify", help="clique, independence and odd-cycle certificates")
    c.add_argument("graph")
    c.add_argument("--kfree", type=int, help="pass iff there is no K_t")
    c.add_argument("--alpha-below", type=int, help="pass iff alpha < m")
    c.add_argument("--no-odd-cycle", type=int, help="pass iff no odd cycle of length <= L")

    c = sub.add_parser("rt", help="exact RT(n, m, K_t)")
    c.add_argument("n", type=int)
    c.add_argument("m")
    c.add_argument("t", type=int)
    c.add_argument("--oracle", action="store_true", help="use the brute-force oracle")
    c.add_argument("--store", action="store_true", help="record the result in the catalog")

    c = sub.add_parser("colored", help="checks on a weighted (coloured) graph in JSON")
    c.add_argument("graph")
    c.add_argument("--r", type=int, required=True)
    c.add_argument("--plus", action="store_true", help="use the extended family")
    c.add_argument("--weight-bound", action="store_true")
    c.add_argument("--extract", metavar="ALPHA", help="extract the anchored partition")

    c = sub.add_parser("density", help="dense or quasirandom pair check")
    c.add_argument("graph")
    c.add_argument("--A", type=_ints, required=True)
    c.add_argument("--B", type=_ints, required=True)
    c.add_argument("--delta", required=True)
    c.add_argument("--d", required=True)
    c.add_argument("--kind", choices=["dense", "quasirandom"], default="dense")
    c.add_argument("--mode", choices=["auto", "exhaustive", "sampled", "exact"], default="auto")
    c.add_argument("--samples", type=int, default=1000)

    c = sub.add_parser("partition", help="exact-partition check and refinement")
    c.add_argument("graph")
    c.add_argument("--partition", help="JSON list of blocks (default: from vertex labels)")
    c.add_argument("--r", type=int, required=True)
    c.add_argument("--eps", default="1/10")
    c.add_argument("--refine", action="store_true")

    c = sub.add_parser("edges", help="codegree red/green colouring")
    c.add_argument("graph")
    c.add_argument("--r", type=int, required=True)

    c = sub.add_parser("pipeline", help="run a JSON pipeline")
    c.add_argument("config")
    c.add_argument("--fail-fast", action="store_true")

    c = sub.add_parser("verify-paper", help="run the acceptance battery")
    c.add_argument("--criteria", type=_ints, default=None)
    return p


def _report(args, name: str, params: dict, rep: Report | None = None, **inputs) -> RunReport:
    rr = RunReport(command={"name": name, "args": params}, inputs=inputs, provenance=provenance(args.seed))
    if rep is not None:
        rr.absorb(rep)
        rr.results = dict(rep.values)
    return rr


def _cmd_construct(args) -> list[RunReport]:
    if args.kind == "flz":
        base, _ = construct_graph("sphere_graph", {"points_per_side": args.points}, args.seed)
        g, info = flz_modify(base, args.delta, args.xi, seed=args.seed)
    else:
        op, params = {
            "odd": ("odd_construction", {"r": args.r, "a": args.a}),
            "even": ("even_construction", {"r": args.r, "delta": args.delta, "n": args.n}),
            "sphere": ("sphere_graph", {"points_per_side": args.points}),
            "turan": ("turan", {"n": args.n, "r": args.r}),
            "petersen": ("petersen", {}),
        }[args.kind]
        g, info = construct_graph(op, params, args.seed)
    if args.output:
        write_graph(g, args.output, args.format)
    else:
        sys.stdout.write(dumps_graph(g, args.format))
    rr = _report(args, "construct", {"kind": args.kind})
    rr.results = {"graph": graph_hash(g), "n": g.n, "edges": g.num_edges(), "info": info}
    if args.report:
        Path(args.report).write_text(rr.dumps())
    return [rr]


def _cmd_certify(args) -> list[RunReport]:
    g = read_graph(args.graph)
    params = {k: v for k, v in (("kfree", args.kfree), ("alpha_below", args.alpha_below),
                                ("no_odd_cycle", args.no_odd_cycle)) if v is not None}
    return [_report(args, "certify", params, certify_graph(g, params), graph=graph_hash(g))]


def _cmd_rt(args) -> list[RunReport]:
    q = RTQuery(args.n, exact(args.m), args.t)
    if args.oracle:
        rec = rt_oracle(q)
    elif args.store or args.catalog:
        rec = solve_into_catalog(Catalog(args.catalog), q, seed=args.seed) if args.store \
            else (Catalog(args.catalog).get(q) or rt_exact(q, seed=args.seed))
    else:
        rec = rt_exact(q, seed=args.seed)
    rr = _report(args, "rt", q.to_json())
    rr.results = rec.to_json()
    if not args.timing:
        rr.results.get("stats", {}).pop("wall_time", None)
    if rec.status == INCONCLUSIVE:
        note = "budget exhausted" + ("; value is a lower bound" if rec.value is not None else "")
        rr.verdicts.append(Check("exact value", INCONCLUSIVE, note=note))
    else:
        rr.verdicts.append(verdict("exact value", rec.status in (OK, EMPTY)))
    return [rr]


def _cmd_colored(args) -> list[RunReport]:
    c = ColoredGraph.from_json(json.loads(Path(args.graph).read_text()))
    rep = check_lemma46(c, args.r) if args.weight_bound else is_family_free(c, args.r, plus=args.plus)
    rr = _report(args, "colored", {"r": args.r, "plus": args.plus}, rep)
    if args.extract is not None:
        try:
            sp = extract_silly_partition(c, args.r, args.extract)
            rr.absorb(sp.report)
            rr.results["partition"] = {"blocks": sp.blocks, "anchors": sp.anchors, "warnings": sp.warnings}
        except PartitionExtractionError as exc:
            rr.absorb(exc.report)
            rr.verdicts.append(verdict("partition extracted", False, note=str(exc)))
    return [rr]


def _cmd_density(args) -> list[RunReport]:
    g = read_graph(args.graph)
    pr = check_pair_dense(g, args.A, args.B, args.delta, args.d, kind=args.kind, mode=args.mode,
                          samples=args.samples, seed=args.seed)
    rr = _report(args, "density", {"kind": args.kind, "delta": exact(args.delta), "d": exact(args.d),
                                   "mode": args.mode}, graph=graph_hash(g))
    rr.verdicts.append(pr.to_check(args.kind))
    rr.results = pr.to_json()
    return [rr]


def _cmd_partition(args) -> list[RunReport]:
    g = read_graph(args.graph)
    part = read_partition(args.partition, g.n) if args.partition else natural_partition(g)
    rep = check_exact_partition(g, part, ExactnessParams(args.r, args.eps), seed=args.seed)
    rr = _report(args, "partition", {"r": args.r, "eps": exact(args.eps)}, rep, graph=graph_hash(g))
    if args.refine:
        st = refine_partition(g, part, args.r)
        rr.results["refinement"] = st.to_json()
        rr.verdicts.append(verdict("omega non-increasing", st.omega <= st.omega0, margin=st.omega0 - st.omega))
    return [rr]


def _cmd_edges(args) -> list[RunReport]:
    g = read_graph(args.graph)
    col = color_edges_by_codegree(g, args.r)
    rr = _report(args, "edges", {"r": args.r}, graph=graph_hash(g))
    rr.verdicts.append(col.check)
    rr.results = {"red": col.red, "green_count": len(col.green), "bound": col.bound}
    return [rr]


def _cmd_pipeline(args) -> list[RunReport]:
    path = Path(args.config)
    return run_pipeline(path.read_text(), base_dir=path.parent, fail_fast=args.fail_fast, timing=args.timing)


def _cmd_verify(args) -> list[RunReport]:
    return [verify_paper_suite(budget=args.budget, catalog=args.catalog, criteria=args.criteria,
                               timing=args.timing)]


COMMANDS = {"construct": _cmd_construct, "certify": _cmd_certify, "rt": _cmd_rt, "colored": _cmd_colored,
            "density": _cmd_density, "partition": _cmd_partition, "edges": _cmd_edges,
            "pipeline": _cmd_pipeline, "verify-paper": _cmd_verify}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    random.seed(args.seed)
    try:
        with search_budget(args.budget if args.budget is not None else DEFAULT_BUDGET):
            reports = COMMANDS[args.cmd](args)
    except PipelineError as exc:
        print(json.dumps(exc.to_json(), sort_keys=True), file=sys.stderr)
        return USAGE_ERROR
    except (OSError, ValueError, KeyError) as exc:
        print(f"rtlab: error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    if args.cmd != "construct":
        out = [r.to_json() for r in reports]
        payload = out[0] if len(out) == 1 and args.cmd != "pipeline" else out
        sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    return exit_code(reports)


if __name__ == "__main__":
    sys.exit(main())
