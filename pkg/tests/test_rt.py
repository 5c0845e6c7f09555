import json
from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from rtlab.certify import search_budget
from rtlab.generate import canonical_key
from rtlab.io import from_graph6, to_graph6
from rtlab.rt import (EMPTY, INCONCLUSIVE, OK, Catalog, CatalogError, RTQuery, RTRecord, f_even, f_odd,
                      monotonicity_violations, rt_exact, rt_oracle, satisfies, solve_into_catalog)
from rtlab.graph import complete, cycle


def test_solver_examples():
    rec = rt_exact(RTQuery(5, 3, 3))
    assert (rec.status, rec.value) == (OK, 5)
    assert all(satisfies(from_graph6(w), rec.query) for w in rec.witnesses)
    assert [canonical_key(from_graph6(w)) for w in rec.witnesses] == [canonical_key(cycle(5))]
    assert rt_exact(RTQuery(6, 7, 3)).value == 9
    assert rt_exact(RTQuery(3, 1, 3)).status == EMPTY
    assert rt_oracle(RTQuery(4, 2, 3)).status == EMPTY
    assert rt_exact(RTQuery(4, 2, 3)).status == EMPTY
    zero = rt_oracle(RTQuery(0, 2, 3))
    assert (zero.status, zero.value) == (OK, 0)


def test_rational_m_rounds_up():
    # alpha < 5/2 means alpha <= 2, the same as alpha < 3
    assert rt_exact(RTQuery(5, Fraction(5, 2), 3)).value == rt_exact(RTQuery(5, 3, 3)).value
    assert RTQuery(5, Fraction(5, 2), 3).amax == 2


@pytest.mark.parametrize("n", range(6))
def test_exact_matches_oracle(n):
    for m in range(1, n + 2):
        for t in (3, 4, 5):
            q = RTQuery(n, m, t)
            a, b = rt_exact(q), rt_oracle(q)
            assert (a.status, a.value) == (b.status, b.value), q


@pytest.mark.parametrize("n", range(1, 8))
def test_turan_baseline(n):
    assert rt_exact(RTQuery(n, n + 1, 3)).value == n * n // 4


def test_budget_exhaustion_is_inconclusive_with_certified_bound():
    with search_budget(50):
        rec = rt_exact(RTQuery(8, 3, 4))
    assert rec.status == INCONCLUSIVE
    if rec.value is not None:
        assert all(satisfies(from_graph6(w), rec.query) for w in rec.witnesses)
        assert rec.value <= rt_exact(RTQuery(8, 3, 4)).value


def test_limit_formulas():
    assert f_even(2, 0) == Fraction(1, 4)
    assert f_even(3, Fraction(1, 10)) == Fraction(463, 700)
    assert f_odd(1, Fraction(1, 4)) == Fraction(1, 4)
    assert f_odd(2, Fraction(1, 20)) == Fraction(11, 20)
    with pytest.raises(ValueError):
        f_even(1, 0)
    with pytest.raises(ValueError):
        f_odd(2, 1)


@given(st.fractions(min_value=0, max_value=Fraction(99, 100)), st.integers(2, 8))
def test_formula_identities(d, r):
    assert f_even(r, d) - f_even(r, 0) == d - d * d
    assert f_odd(r, d) - d == Fraction(r - 1, r)


def test_catalog_round_trip_and_conflicts(tmp_path):
    path = tmp_path / "cat.jsonl"
    cat = Catalog(path)
    rec = rt_exact(RTQuery(5, 3, 3))
    assert cat.put(rec) is True
    assert cat.put(rec) is False
    again = Catalog(path)
    got = again.get(rec.query)
    assert (got.status, got.value, got.witnesses) == (rec.status, rec.value, rec.witnesses)
    assert "wall_time" not in json.loads(path.read_text().splitlines()[0])["stats"]
    with pytest.raises(CatalogError):
        again.put(replace(rec, value=6, witnesses=[]))
    with pytest.raises(CatalogError):
        Catalog(tmp_path / "x.jsonl").put(replace(rec, witnesses=[to_graph6(complete(5))]))
    with pytest.raises(CatalogError):
        cat.put(RTRecord(RTQuery(9, 3, 4), INCONCLUSIVE, 20))


def test_catalog_reports_corrupt_lines(tmp_path):
    path = tmp_path / "cat.jsonl"
    Catalog(path).put(rt_exact(RTQuery(4, 3, 3)))
    with path.open("a") as fh:
        fh.write("{not json\n")
    cat = Catalog(path)
    assert len(cat) == 1 and cat.errors[0][0] == 2


def test_solve_into_catalog_and_monotonicity(tmp_path):
    cat = Catalog(tmp_path / "c.jsonl")
    for n in range(6):
        for m in range(1, n + 2):
            for t in (3, 4):
                solve_into_catalog(cat, RTQuery(n, m, t))
    assert cat.verify() == []
    assert monotonicity_violations(list(cat)) == []
    fake = [RTRecord(RTQuery(5, 2, 3), OK, 7), RTRecord(RTQuery(5, 3, 3), OK, 5)]
    assert monotonicity_violations(fake)


def test_query_json_is_exact():
    q = RTQuery(7, Fraction(7, 3), 4)
    assert RTQuery.from_json(json.loads(json.dumps(q.to_json()))) == q
