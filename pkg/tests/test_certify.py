from fractions import Fraction
from itertools import combinations

import networkx as nx
import pytest
from hypothesis import given, settings

from conftest import brute_alpha, brute_omega, graphs
from rtlab.certify import (SearchBudgetExceeded, Certificate, check_lemma34_properties, find_short_odd_cycle,
                           has_clique, independence_number, is_saturated, max_clique, saturate, search_budget,
                           validate_certificate)
from rtlab.checks import VACUOUS
from rtlab.graph import (Graph, blow_up, complete, complete_bipartite, cycle, join_complete, petersen,
                         random_graph)


def test_clique_examples():
    assert max_clique(complete(5))[0] == 5
    assert max_clique(cycle(5))[0] == 2
    assert max_clique(petersen())[0] == 2
    assert has_clique(cycle(5), 3).kind == "absence"
    j = join_complete([cycle(5), cycle(5)])
    assert has_clique(j, 5).kind == "absence"
    found = has_clique(j, 4)
    assert found.kind == "clique" and validate_certificate(j, found)
    assert has_clique(blow_up(complete(3), 2), 4).kind == "absence"


def test_independence_examples():
    assert independence_number(cycle(5))[0] == 2
    assert independence_number(petersen())[0] == 4
    for a in (1, 2, 3):
        assert independence_number(blow_up(cycle(5), a))[0] == 2 * a


def test_odd_cycle_examples():
    c7 = find_short_odd_cycle(cycle(7))
    assert c7.kind == "odd-cycle" and len(c7.vertices) == 7 and validate_certificate(cycle(7), c7)
    assert find_short_odd_cycle(complete_bipartite(3, 3)).kind == "absence"
    assert find_short_odd_cycle(cycle(9)).kind == "absence"


@given(graphs(max_n=9))
@settings(max_examples=150, deadline=None)
def test_searches_match_brute_force(g):
    w, wc = max_clique(g)
    a, ac = independence_number(g)
    assert w == brute_omega(g) and a == brute_alpha(g)
    assert validate_certificate(g, wc) and validate_certificate(g, ac)


@given(graphs(max_n=10))
@settings(max_examples=150, deadline=None)
def test_odd_cycle_matches_networkx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    short = any(len(c) % 2 == 1 and len(c) <= 7 for c in nx.simple_cycles(h, length_bound=7))
    cert = find_short_odd_cycle(g)
    assert (cert.kind == "odd-cycle") == short
    if short:
        assert validate_certificate(g, cert) and len(cert.vertices) in (3, 5, 7)


def test_forged_certificates_rejected():
    g = cycle(5)
    assert not validate_certificate(g, Certificate("clique", (0, 2), 0, "K2"))
    assert not validate_certificate(g, Certificate("independent-set", (0, 1), 0, "alpha"))
    assert not validate_certificate(g, Certificate("odd-cycle", (0, 1, 3), 0, "C3"))


def test_budget_exhaustion_raises():
    g = random_graph(60, 0.5, seed=0)
    with search_budget(10):
        with pytest.raises(SearchBudgetExceeded):
            max_clique(g)
    assert max_clique(g)[0] >= 1


def test_saturation_examples():
    s = saturate(Graph.empty(4), 3)
    assert has_clique(s, 3).kind == "absence" and is_saturated(s, 3)
    assert saturate(complete(4), 5) == complete(4)
    assert saturate(cycle(5), 3) == cycle(5)
    for seed in range(5):
        h = saturate(random_graph(9, 0.2, seed=seed), 4, seed=seed)
        assert is_saturated(h, 4) and has_clique(h, 4).kind == "absence"
        for u, v in combinations(range(9), 2):
            if not h.has_edge(u, v):
                assert has_clique(Graph.from_edges(9, h.edges() + [(u, v)]), 4).found


def test_saturation_properties_join_of_c5():
    g = join_complete([cycle(5), cycle(5)])
    rep = check_lemma34_properties(g, 2, Fraction(3, 10))
    assert rep["(i) max-degree"].ok
    assert rep["(i) max-degree"].margin == Fraction(17) - 7
    # (1/4 + 2 delta) n > n once delta = 1/2: no set of the required size
    tiny = check_lemma34_properties(complete(2), 2, Fraction(1, 2))
    assert tiny["(ii) large-sets-contain-K_{2r-2}"].status == VACUOUS
