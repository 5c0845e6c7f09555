import json

import networkx as nx
import pytest
from hypothesis import given, settings

from conftest import graphs
from rtlab.graph import Graph, cycle, petersen, random_graph
from rtlab.io import (dumps_graph, from_edgelist, from_graph6, from_json_obj, read_graph, read_partition,
                      to_edgelist, to_graph6, to_json_obj, write_graph)


def test_known_graph6_strings():
    assert to_graph6(petersen()) == "IheA@GUAo"
    assert to_graph6(Graph.empty(0)) == "?"
    assert to_graph6(cycle(5)) == "Dhc"


@pytest.mark.parametrize("n", [0, 1, 2, 5, 12, 62, 63, 64, 70])
def test_graph6_matches_networkx(n):
    g = random_graph(n, 0.5, seed=n)
    h = nx.Graph()
    h.add_nodes_from(range(n))
    h.add_edges_from(g.edges())
    ours = to_graph6(g)
    assert ours == nx.to_graph6_bytes(h, header=False).decode().strip()
    back = nx.from_graph6_bytes(ours.encode())
    assert sorted(map(tuple, map(sorted, back.edges()))) == g.edges()


@given(graphs(max_n=64))
@settings(max_examples=60, deadline=None)
def test_round_trips(g):
    assert from_graph6(to_graph6(g)) == g
    assert from_edgelist(to_edgelist(g)) == g
    assert from_json_obj(json.loads(json.dumps(to_json_obj(g)))) == g


def test_labels_survive_json_and_files(tmp_path):
    g = cycle(4).with_labels(["A", "A", "B", "B"])
    assert from_json_obj(to_json_obj(g)).labels == ("A", "A", "B", "B")
    for suffix in (".g6", ".json", ".txt"):
        write_graph(g, tmp_path / f"g{suffix}")
        assert read_graph(tmp_path / f"g{suffix}").adj == g.adj
    (tmp_path / "p.json").write_text("[[0, 1], [2, 3]]")
    assert read_partition(tmp_path / "p.json", 4).sizes() == [2, 2]
    with pytest.raises(ValueError):
        dumps_graph(g, "dot")


def test_malformed_graph6_rejected():
    with pytest.raises(ValueError):
        from_graph6("D~")
