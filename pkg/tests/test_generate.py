from itertools import combinations

import networkx as nx

from rtlab.certify import find_short_odd_cycle, has_clique, independence_number
from rtlab.generate import (GenerationStats, canonical_key, generate, generate_levels, no_short_odd_cycle_admit,
                            rt_admit)
from rtlab.graph import cycle, random_graph, relabel

# graphs up to isomorphism on n vertices
UNLABELLED = [1, 1, 2, 4, 11, 34, 156, 1044]


def test_class_counts_match_known_sequence():
    stats = GenerationStats()
    levels = generate_levels(7, stats=stats)
    assert [len(x) for x in levels] == UNLABELLED
    assert stats.level_counts == UNLABELLED


def test_canonical_key_is_isomorphism_invariant():
    g = random_graph(8, 0.5, seed=2)
    assert canonical_key(g) == canonical_key(relabel(g, [7, 3, 1, 0, 6, 2, 4, 5]))
    assert canonical_key(cycle(6)) != canonical_key(random_graph(6, 0.5, seed=1))


def test_generated_classes_are_pairwise_non_isomorphic():
    six = generate(6)
    nxs = [nx.Graph(g.edges()) for g in six]
    for h in nxs:
        h.add_nodes_from(range(6))
    atlas = [h for h in nx.graph_atlas_g() if h.number_of_nodes() == 6]
    assert len(six) == len(atlas)
    for a, b in combinations(range(len(nxs)), 2):
        if nxs[a].number_of_edges() == nxs[b].number_of_edges():
            assert not nx.is_isomorphic(nxs[a], nxs[b])


def test_rt_admit_keeps_exactly_the_admissible_graphs():
    all6 = generate(6)
    admissible = [g for g in all6 if has_clique(g, 4).kind == "absence" and independence_number(g)[0] <= 2]
    produced = generate(6, rt_admit(4, 2))
    assert sorted(canonical_key(g) for g in produced) == sorted(canonical_key(g) for g in admissible)


def test_odd_cycle_admit_matches_filter():
    all7 = generate(7)
    want = {canonical_key(g) for g in all7 if find_short_odd_cycle(g).kind == "absence"}
    got = {canonical_key(g) for g in generate(7, no_short_odd_cycle_admit())}
    assert got == want
