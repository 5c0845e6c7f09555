import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from rtlab.colored import BLUE, GREEN, RED
from rtlab.density import (EmbeddingFailure, EmbeddingSpec, check_pair_dense, classify_reduced_edges,
                           embed_clique, first_edge, naive_pair_deviation, planted_embedding_instance,
                           verify_embedding_hypotheses)
from rtlab.graph import Graph, VertexPartition, complete, complete_bipartite, join_complete, random_graph

F = Fraction
A, B = list(range(4)), list(range(4, 8))


def test_trivial_pairs():
    kb = complete_bipartite(4, 4)
    for delta in (0, F(1, 10), 1):
        rep = check_pair_dense(kb, A, B, delta, 1)
        assert rep.holds and rep.worst_deviation == 0
    empty = Graph.empty(8)
    assert check_pair_dense(empty, A, B, 0, 0, kind="quasirandom").holds


def test_missing_edges_give_exact_dense_deviation():
    g = Graph.from_edges(8, [(a, b) for a in A for b in B if (a, b) != (0, 4)])
    rep = check_pair_dense(g, A, B, F(1, 100), 1)
    assert rep.mode == "exact" and rep.worst_deviation == F(1, 16) and not rep.holds


@given(st.integers(0, 2 ** 16 - 1), st.integers(0, 4), st.sampled_from(["dense", "quasirandom"]))
@settings(max_examples=200, deadline=None)
def test_exhaustive_matches_naive(edges, k, kind):
    g = Graph.from_edges(8, [(a, b) for i, (a, b) in enumerate((a, b) for a in A for b in B) if edges >> i & 1])
    d = F(k, 4)
    rep = check_pair_dense(g, A, B, F(1, 10), d, kind=kind, mode="exhaustive")
    assert rep.worst_deviation == naive_pair_deviation(g, A, B, d, kind == "quasirandom")
    sampled = check_pair_dense(g, A, B, F(1, 10), d, kind=kind, mode="sampled", samples=20)
    assert sampled.worst_deviation <= rep.worst_deviation


def test_exhaustive_cap_and_input_errors():
    g = random_graph(30, 0.5, seed=1)
    with pytest.raises(ValueError):
        check_pair_dense(g, range(15), range(15, 30), F(1, 10), F(1, 2), mode="exhaustive", cap=2 ** 10)
    assert check_pair_dense(g, range(15), range(15, 30), F(1, 10), F(1, 2), cap=2 ** 10).mode == "sampled"
    with pytest.raises(ValueError):
        check_pair_dense(g, [0, 1], [1, 2], 0, 0)
    with pytest.raises(ValueError):
        check_pair_dense(g, [], [1], 0, 0)


def test_sampled_verdict_is_labelled():
    g = random_graph(40, 0.5, seed=2)
    rep = check_pair_dense(g, range(20), range(20, 40), F(1, 4), F(1, 2), kind="quasirandom", mode="sampled")
    assert rep.lower_bound_only and rep.to_check("q").note


# -- embedding ----------------------------------------------------------------------------

def test_constants_self_similar():
    theta = F(1, 3)
    for a in range(2, 6):
        xi, delta = EmbeddingSpec.constants(a, theta)
        xi1, delta1 = EmbeddingSpec.constants(a - 1, theta)
        assert xi == xi1 * theta * theta / 4 and delta == delta1 * theta / 2
    assert EmbeddingSpec.constants(1, theta) == (1, 1)


def test_embed_single_part_edge():
    g = Graph.from_edges(4, [(2, 3)])
    cert = embed_clique(EmbeddingSpec(1, 1, F(1, 2), [range(4)]), g)
    assert cert.vertices == (2, 3)


def test_embed_triangle_in_two_joined_parts():
    part = Graph.from_edges(4, [(0, 1), (2, 3)])
    g = join_complete([part, part])
    spec = EmbeddingSpec(2, 1, F(1, 2), [range(4), range(4, 8)])
    # the independence clause fails globally; the recursion only needs an edge in V1
    cert = embed_clique(spec, g)
    assert len(cert.vertices) == 3
    assert all(g.has_edge(u, v) for i, u in enumerate(cert.vertices) for v in cert.vertices[i + 1:])


def test_embed_reports_independence_failure():
    g, spec = planted_embedding_instance(2, 2, seed=0)
    second = set(spec.parts[1])
    broken = Graph.from_edges(g.n, [(u, v) for u, v in g.edges() if not (u in second and v in second)])
    assert not verify_embedding_hypotheses(spec, broken).ok
    with pytest.raises(EmbeddingFailure) as err:
        embed_clique(spec, broken)
    assert err.value.level == 1 and err.value.clause == "independence"


def test_embed_reports_density_failure():
    part = complete(6)
    g = Graph.from_edges(12, [(u, v) for u, v in part.edges()] + [(u + 6, v + 6) for u, v in part.edges()])
    spec = EmbeddingSpec(2, 1, F(1, 2), [range(6), range(6, 12)])
    with pytest.raises(EmbeddingFailure) as err:
        embed_clique(spec, g)
    assert err.value.clause == "dense-pair" and err.value.to_json()["level"] == 1


def test_custom_alpha_oracle_is_used():
    calls = []

    def oracle(g, mask):
        calls.append(mask)
        return first_edge(g, mask)

    g, spec = planted_embedding_instance(2, 2, seed=3)
    embed_clique(spec, g, oracle)
    assert len(calls) == 2


@pytest.mark.parametrize("a,b", [(1, 1), (2, 1), (2, 2), (3, 2)])
def test_planted_instances_embed(a, b):
    for seed in range(10):
        g, spec = planted_embedding_instance(a, b, seed)
        assert len(embed_clique(spec, g).vertices) == a + b


def test_spec_validation():
    with pytest.raises(ValueError):
        EmbeddingSpec(1, 2, F(1, 2), [[0]])
    with pytest.raises(ValueError):
        EmbeddingSpec(2, 1, F(1, 2), [[0]])
    with pytest.raises(ValueError):
        EmbeddingSpec(1, 1, 0, [[0]])


# -- reduced colouring --------------------------------------------------------------------

def _blocks(k, m):
    return VertexPartition.from_blocks([[]] + [list(range(i * m, (i + 1) * m)) for i in range(k)])


def test_reduced_colours():
    m = 30
    rng = random.Random(1)
    edges = [(u, v) for u in range(m) for v in range(m, 2 * m) if rng.random() < 0.45]
    edges += [(u, v) for u in range(m) for v in range(2 * m, 3 * m)]
    g = Graph.from_edges(3 * m, edges)
    col, rep = classify_reduced_edges(g, _blocks(3, m), F(1, 5), F(1, 10))
    assert col.w[0][1] == BLUE and col.w[0][2] == RED and col.w[1][2] == GREEN
    assert rep.values["pair 1-2"]["mode"] == "sampled"
    col2, rep2 = classify_reduced_edges(g, _blocks(3, m), F(1, 5), F(1, 10), blue_upper="theta")
    assert rep2.values["blue_upper"] == "theta" and col2.w[0][1] == BLUE


def test_reduced_requires_equal_blocks():
    g = Graph.empty(5)
    with pytest.raises(ValueError):
        classify_reduced_edges(g, VertexPartition.from_blocks([[], [0, 1], [2, 3, 4]]), F(1, 5), F(1, 10))
