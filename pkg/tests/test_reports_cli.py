import json

import jsonschema
import pytest

from rtlab.cli import main
from rtlab.colored import planted_instance
from rtlab.graph import cycle, petersen
from rtlab.io import write_graph
from rtlab.reports import PipelineError, graph_hash, load_schema, run_pipeline, verify_paper_suite

PIPE = {"stages": [
    {"name": "build", "op": "even_construction", "args": {"r": 2, "delta": "1/10", "n": 40}},
    {"name": "k4", "op": "certify", "graph": "build", "args": {"kfree": 4}},
    {"name": "exact", "op": "check_exact_partition", "graph": "build", "args": {"r": 2, "eps": "1/10"}},
]}


def test_pipeline_links_three_reports():
    reports = run_pipeline(json.dumps(PIPE))
    assert [r.command["stage"] for r in reports] == ["build", "k4", "exact"]
    h = reports[0].results["graph"]
    assert reports[1].inputs["graph"] == h == reports[2].inputs["graph"]
    assert all(r.status == "pass" for r in reports)
    schema = load_schema()
    for r in reports:
        jsonschema.validate(r.to_json(), schema)


def test_pipeline_hash_reference_and_determinism():
    first = run_pipeline(json.dumps(PIPE))
    h = first[0].results["graph"]
    cfg = {"stages": PIPE["stages"][:1] + [{"name": "by-hash", "op": "certify", "graph": h,
                                           "args": {"kfree": 4}}]}
    again = run_pipeline(json.dumps(cfg))
    assert again[1].status == "pass"
    assert [r.dumps() for r in run_pipeline(json.dumps(PIPE))] == [r.dumps() for r in first]
    assert "wall_time" not in first[0].provenance
    assert "wall_time" in run_pipeline(json.dumps(PIPE), timing=True)[0].provenance


def test_pipeline_empty_and_errors(tmp_path):
    assert run_pipeline('{"stages": []}') == []
    assert run_pipeline("[]") == []
    with pytest.raises(PipelineError) as err:
        run_pipeline(json.dumps({"stages": [{"name": "load-it", "op": "load", "graph": {"file": "nope.g6"}}]}),
                     base_dir=tmp_path)
    assert err.value.stage == "load-it"
    with pytest.raises(PipelineError) as err:
        run_pipeline('{"stages": [\n  {"op": }\n]}')
    assert (err.value.line, err.value.column) == (2, 10)
    with pytest.raises(PipelineError):
        run_pipeline(json.dumps({"stages": [{"name": "x", "op": "frobnicate"}]}))


def test_pipeline_loads_files_and_fails_on_bad_property(tmp_path):
    write_graph(petersen(), tmp_path / "p.g6")
    cfg = {"stages": [{"name": "p", "op": "load", "graph": {"file": "p.g6"}},
                      {"name": "tri", "op": "certify", "graph": "p", "args": {"kfree": 3, "alpha_below": 4}},
                      {"name": "after", "op": "layered_bound", "graph": "p"}]}
    (tmp_path / "pipe.json").write_text(json.dumps(cfg))
    reports = run_pipeline(tmp_path / "pipe.json")
    assert reports[0].inputs["graph"] == graph_hash(petersen())
    assert reports[1].status == "fail"
    assert reports[2].status == "fail" and reports[2].verdicts[0].name == "no C3/C5/C7"
    assert len(run_pipeline(tmp_path / "pipe.json", fail_fast=True)) == 2


def test_suite_summary_validates_and_budget_gives_inconclusive():
    rr = verify_paper_suite(criteria=[2, 11])
    assert rr.status == "pass"
    jsonschema.validate(rr.to_json(), load_schema())
    starved = verify_paper_suite(budget=10, criteria=[1, 2, 6])
    statuses = {v.status for v in starved.verdicts}
    assert "fail" not in statuses and "inconclusive" in statuses
    jsonschema.validate(starved.to_json(), load_schema())


# -- command line ------------------------------------------------------------------------

def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_cli_construct_and_certify(tmp_path, capsys):
    out = tmp_path / "even.json"
    code, _ = run(capsys, "construct", "even", "--n", "40", "-o", str(out), "--format", "json")
    assert code == 0 and out.exists()
    code, text = run(capsys, "certify", str(out), "--kfree", "4")
    assert code == 0 and json.loads(text)["status"] == "pass"
    code, text = run(capsys, "certify", str(out), "--kfree", "3")
    assert code == 1
    code, text = run(capsys, "construct", "odd", "--r", "2", "--format", "g6")
    assert code == 0 and text.strip()


def test_cli_rt_and_catalog(tmp_path, capsys):
    code, text = run(capsys, "rt", "5", "3", "3")
    assert code == 0 and json.loads(text)["results"]["value"] == 5
    cat = tmp_path / "cat.jsonl"
    code, _ = run(capsys, "--catalog", str(cat), "rt", "5", "3", "3", "--store")
    assert code == 0 and cat.read_text().count("\n") == 1
    code, _ = run(capsys, "rt", "8", "3", "4", "--budget", "20")
    assert code == 2
    code, text = run(capsys, "rt", "4", "2", "3", "--oracle")
    assert code == 0 and json.loads(text)["results"]["status"] == "empty"


def test_cli_analysis_commands(tmp_path, capsys):
    g = tmp_path / "c.g6"
    write_graph(cycle(9), g)
    code, text = run(capsys, "edges", str(g), "--r", "2")
    assert code == 0
    code, text = run(capsys, "density", str(g), "--A", "0,2,4", "--B", "1,3,5", "--delta", "1/10", "--d", "1/3")
    assert code in (0, 1) and json.loads(text)["results"]["mode"] == "exhaustive"
    even = tmp_path / "e.json"
    run(capsys, "construct", "even", "--n", "40", "-o", str(even), "--format", "json")
    code, text = run(capsys, "partition", str(even), "--r", "2", "--refine")
    assert code == 0 and json.loads(text)["results"]["refinement"]["steps"] == []
    c, _ = planted_instance(3, 1)
    cg = tmp_path / "c.json"
    cg.write_text(json.dumps(c.to_json()))
    code, text = run(capsys, "colored", str(cg), "--r", "3", "--extract", "0")
    assert code == 0 and json.loads(text)["results"]["partition"]["blocks"][0] == []


def test_cli_pipeline_and_verify(tmp_path, capsys):
    p = tmp_path / "pipe.json"
    p.write_text(json.dumps(PIPE))
    code, text = run(capsys, "pipeline", str(p))
    assert code == 0 and len(json.loads(text)) == 3
    code, text = run(capsys, "verify-paper", "--criteria", "2,3")
    assert code == 0 and json.loads(text)["status"] == "pass"


def test_cli_usage_errors(tmp_path, capsys):
    with pytest.raises(SystemExit) as err:
        main(["bogus"])
    assert err.value.code == 3
    with pytest.raises(SystemExit) as err:
        main(["rt", "5"])
    assert err.value.code == 3
    assert main(["certify", str(tmp_path / "missing.g6"), "--kfree", "3"]) == 3
    bad = tmp_path / "bad.json"
    bad.write_text("{\n oops")
    assert main(["pipeline", str(bad)]) == 3
