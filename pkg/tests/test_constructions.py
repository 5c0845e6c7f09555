from fractions import Fraction

import pytest

from rtlab.certify import find_short_odd_cycle, has_clique, independence_number
from rtlab.constructions import (C5_PAIR, OmegaPair, SphereGraphParams, closure_note,
                                 cross_density_target, even_construction, even_target_density, find_omega_pairs,
                                 flz_modify, natural_partition, odd_construction, odd_construction_edges,
                                 round_half_up, sides, sphere_graph, sphere_points, sphere_sidecar)
from rtlab.graph import complete, cycle, induced
from rtlab.rt import f_even


def test_omega_pairs_small():
    pairs = {(p.d, p.n) for p in find_omega_pairs(6)}
    assert {(1, 2), (2, 5)} <= pairs
    assert pairs == {(1, 2), (2, 4), (2, 5), (3, 6)}
    assert OmegaPair(1, 2, complete(2)).certify().ok
    assert C5_PAIR.certify().ok
    scaled = C5_PAIR.scaled(2)
    assert (scaled.d, scaled.n) == (4, 10) and scaled.certify().ok
    assert (4, 10) in closure_note([C5_PAIR])


def test_bad_pair_fails_certification():
    assert not OmegaPair(2, 4, cycle(5)).certify().ok
    assert not OmegaPair(2, 5, complete(5)).certify().ok


@pytest.mark.parametrize("r,a", [(2, 1), (2, 2), (3, 1), (3, 2)])
def test_odd_construction_exact(r, a):
    g = odd_construction(r, C5_PAIR, a)
    n = a * r * 5
    formula = (Fraction(r - 1, r) + Fraction(2, r * 5)) * n * n / 2
    assert odd_construction_edges(r, C5_PAIR, a) == formula == g.num_edges()
    assert has_clique(g, 2 * r + 1).kind == "absence"
    assert independence_number(g)[0] == 2 * a


def test_odd_construction_r1_is_witness():
    assert odd_construction(1, C5_PAIR, 1).adj == cycle(5).adj


def test_sphere_params_validated():
    for bad in ({"dim": 1}, {"points_per_side": 0}, {"cross_angle_slack": 1.0}, {"inner_angle_slack": 0}):
        with pytest.raises(ValueError):
            SphereGraphParams(**bad)


def test_sphere_points_are_unit_vectors():
    pts = sphere_points(SphereGraphParams(dim=3, points_per_side=10))
    assert pts.shape == (10, 3)  # dim is the ambient dimension
    assert abs((pts ** 2).sum(axis=1) - 1).max() < 1e-12


def test_sphere_graph_default_instance():
    p = SphereGraphParams()
    g = sphere_graph(p)
    assert g.n == 200
    assert has_clique(g, 4).kind == "absence"
    for side in sides(g):
        h, _ = induced(g, side)
        assert find_short_odd_cycle(h, 7).kind == "absence"
    sc = sphere_sidecar(g, p)
    assert abs(sc["cross_density"] - sc["cross_density_target"]) <= 0.05
    assert sc["cross_density_target"] == pytest.approx(cross_density_target(p))


def test_tiny_inner_angle_gives_empty_sides():
    g = sphere_graph(SphereGraphParams(inner_angle_slack=1e-9))
    assert all(induced(g, s)[0].num_edges() == 0 for s in sides(g))


def test_round_half_up():
    assert [round_half_up(Fraction(k, 2)) for k in (1, 3, 5)] == [1, 2, 3]


def test_flz_examples():
    g = sphere_graph(SphereGraphParams())
    same, info = flz_modify(g, Fraction(1, 50), Fraction(1, 50))
    assert same.adj == g.adj and info["set_size"] == 0
    h, info = flz_modify(g, Fraction(1, 10), Fraction(1, 50))
    assert has_clique(h, 4).kind == "absence"
    assert info["set_size"] == round_half_up(Fraction(8, 100) * 200) == 16
    a, b = sides(g)
    for x in info["X"]:
        assert all(h.has_edge(x, y) for y in b)
    assert Fraction(2 * h.num_edges(), 200 ** 2) >= Fraction(1, 4) + Fraction(1, 10) - Fraction(1, 100) - Fraction(8, 100)


def test_even_construction_r2_is_flz_of_sphere():
    g, info = even_construction(2, Fraction(1, 10), 40)
    base = sphere_graph(SphereGraphParams(points_per_side=20))
    h, _ = flz_modify(base, Fraction(1, 10), Fraction(1, 50), n_ref=40)
    assert g.adj == h.adj
    assert natural_partition(g).sizes() == [20, 20]
    with pytest.raises(ValueError):
        even_construction(2, Fraction(1, 10), 41)


def test_even_construction_r3():
    g, info = even_construction(3, Fraction(1, 10), 70)
    assert has_clique(g, 6).kind == "absence"
    dens = Fraction(2 * g.num_edges(), 70 * 70)
    assert abs(dens - even_target_density(3, Fraction(1, 10))) <= Fraction(1, 10)
    assert even_target_density(3, Fraction(1, 10)) == f_even(3, Fraction(1, 10))
    assert natural_partition(g).sizes() == [20, 20, 30]
    with pytest.raises(ValueError):
        even_construction(3, Fraction(1, 10), 56)  # class size 24 is not a multiple of 5
