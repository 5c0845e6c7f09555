import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from rtlab.checks import NOT_APPLICABLE
from rtlab.colored import (BLUE, GREEN, RED, ColoredGraph, ForbiddenPattern, PartitionExtractionError,
                           all_colored, check_lemma46, contains_pattern, contains_pattern_naive,
                           extract_silly_partition, family, is_family_free, layered_instance, planted_instance,
                           random_colored, symmetrize, twin, zykov_step)


@st.composite
def colored(draw, max_n=6):
    n = draw(st.integers(0, max_n))
    ws = draw(st.lists(st.sampled_from([GREEN, BLUE, RED]), min_size=n * (n - 1) // 2,
                       max_size=n * (n - 1) // 2))
    return ColoredGraph.from_upper(n, ws)


def test_matrix_validation():
    with pytest.raises(ValueError):
        ColoredGraph.from_matrix([[0, 1], [2, 0]])
    with pytest.raises(ValueError):
        ColoredGraph.from_matrix([[1]])
    c = ColoredGraph.from_upper(3, [2, 1, 0])
    assert c.degrees() == [3, 2, 1] and c.edge_weight() == 3
    assert ColoredGraph.from_json(json.loads(json.dumps(c.to_json()))) == c


def test_pattern_examples():
    for r in (2, 3, 4):
        assert contains_pattern(ColoredGraph.constant(r, RED), ForbiddenPattern(r - 1, r - 1)) is not None
    assert contains_pattern(ColoredGraph.constant(5, BLUE), ForbiddenPattern(5, 1)) is not None
    assert is_family_free(ColoredGraph.constant(4, BLUE), 3, plus=True).ok
    for r in (2, 3, 4):
        assert is_family_free(ColoredGraph.constant(7, GREEN), r).ok
    assert is_family_free(ColoredGraph(0, ()), 3, plus=True).ok


def test_engineered_pattern_reported():
    # r = 3: four non-green vertices with a red edge realise G_{6,2}
    c = ColoredGraph.from_upper(4, [RED, BLUE, BLUE, BLUE, BLUE, BLUE])
    rep = is_family_free(c, 3)
    assert not rep["no G_{6,2}"].ok
    assert sorted(rep["no G_{6,2}"].witness) == [0, 1, 2, 3]


def test_family_members():
    assert [p for _, p in family(3, plus=True)] == [ForbiddenPattern(5, 1), ForbiddenPattern(4, 2),
                                                   ForbiddenPattern(3, 3), ForbiddenPattern(2, 2)]


@given(colored(), st.integers(1, 5), st.data())
@settings(max_examples=300, deadline=None)
def test_contains_pattern_matches_naive(c, a, data):
    b = data.draw(st.integers(1, a))
    p = ForbiddenPattern(a, b)
    fast, slow = contains_pattern(c, p), contains_pattern_naive(c, p)
    assert (fast is None) == (slow is None)
    if fast is not None:
        assert all(c.w[x][y] != GREEN for i, x in enumerate(fast) for y in fast[i + 1:])
        assert all(c.w[x][y] == RED for i, x in enumerate(fast[:b]) for y in fast[i + 1:b])


def test_zykov_fixed_point_and_twin():
    c, _ = planted_instance(3, 1)
    assert zykov_step(c) is c
    # vertices 0, 1 green to each other, degrees 2 and 1
    c = ColoredGraph.from_upper(3, [GREEN, RED, BLUE])
    nxt = zykov_step(c)
    assert nxt == twin(c, 1, 0) and nxt.edge_weight() >= c.edge_weight()


@pytest.mark.parametrize("r", [2, 3])
def test_zykov_exhaustive_n4(r):
    for c in all_colored(4):
        nxt = zykov_step(c)
        assert nxt.edge_weight() >= c.edge_weight()
        if is_family_free(c, r, plus=True).ok:
            assert is_family_free(nxt, r, plus=True).ok


def test_symmetrize_terminates_with_nondecreasing_weight():
    rng = random.Random(0)
    for _ in range(30):
        c = random_colored(7, rng)
        s, steps = symmetrize(c)
        assert s.edge_weight() >= c.edge_weight() and steps <= 49


def test_lemma46_examples():
    c = ColoredGraph.constant(4, BLUE)
    rep = check_lemma46(c, 3)
    assert rep.ok and rep.values["e"] == 6 and rep.values["bound"] == 8
    assert check_lemma46(ColoredGraph(0, ()), 2).ok
    assert check_lemma46(ColoredGraph.constant(1, GREEN), 2)["e <= (r-2)/(r-1) n^2"].status == NOT_APPLICABLE


@pytest.mark.parametrize("r", [3, 4, 5])
def test_lemma46_on_layered_instances(r):
    rng = random.Random(r)
    for _ in range(200):
        c = layered_instance(r, rng, thin=rng.choice([0.0, 0.3]))
        assert is_family_free(c, r, plus=True).ok
        assert check_lemma46(c, r).ok


@pytest.mark.parametrize("r", [2, 3, 4])
def test_extract_planted_partition(r):
    c, blocks = planted_instance(r, 2)
    sp = extract_silly_partition(c, r, 0)
    assert sp.blocks[0] == [] and sp.blocks[1:] == blocks
    assert not sp.diagnostic and sp.report.ok


def test_extract_diagnostic_on_low_degree():
    c, blocks = planted_instance(3, 2)
    m = [list(row) for row in c.w]
    for y in range(c.n):
        if y != 0:
            m[0][y] = m[y][0] = GREEN
    low = ColoredGraph.from_matrix(m)
    try:
        sp = extract_silly_partition(low, 3, 0)
    except PartitionExtractionError as exc:
        assert not exc.report["hyp: min-degree"].ok
    else:
        assert sp.diagnostic and sp.warnings


def test_extract_leftover_bounded_by_alpha():
    c, blocks = planted_instance(3, 3)
    m = [list(row) for row in c.w]
    # lowering a red cross pair keeps the graph family-free
    m[0][20] = m[20][0] = BLUE
    sp = extract_silly_partition(ColoredGraph.from_matrix(m), 3, Fraction(2, 5))
    assert sp.report.ok and not sp.diagnostic
    assert 0 < len(sp.blocks[0]) <= Fraction(2, 5) * c.n
