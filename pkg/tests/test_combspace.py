"""Combinatorial spaces and continuous maps."""
import pytest

from orbigroupoid.combspace import (
    CombSpace,
    ContinuousMap,
    check_continuous,
    compose_maps,
    cycle_space,
    fiber_product,
    identity_map,
    path_space,
    tagged_union,
)
from orbigroupoid.errors import CodomainMismatch, UndefinedVertex
from orbigroupoid._order import sort_key


def test_sort_key_orders_mixed_ids():
    ids = [("b", 1), 3, "a", 1, ("a", 2), "b"]
    assert sorted(ids, key=sort_key) == [1, 3, "a", "b", ("a", 2), ("b", 1)]


def test_sort_key_rejects_bool_and_junk():
    with pytest.raises(TypeError):
        sort_key(True)
    with pytest.raises(TypeError):
        sort_key(3.5)


def test_build_canonicalizes():
    s = CombSpace.build([2, 0, 1], [(1, 0), (0, 1), (2, 1)])
    assert s.vertices == (0, 1, 2)
    assert s.edges == ((0, 1), (1, 2))
    assert s.n_vertices == 3 and s.n_edges == 2


def test_build_rejects_self_loop_and_dangling_edge():
    with pytest.raises(UndefinedVertex):
        CombSpace.build([0, 1], [(0, 0)])
    with pytest.raises(UndefinedVertex):
        CombSpace.build([0, 1], [(0, 2)])


def test_adjacency_is_reflexive_in_eq_or_adj():
    s = path_space(3)
    assert s.eq_or_adj(1, 1)
    assert s.eq_or_adj(0, 1)
    assert not s.eq_or_adj(0, 2)
    assert not s.has_edge(1, 1)


def test_neighbors_and_closed_nbhd():
    s = cycle_space(5)
    assert s.neighbors(0) == (1, 4)
    assert s.closed_nbhd(0) == (0, 1, 4)
    assert s.degree(0) == 2


def test_components_and_induced():
    s = CombSpace.build(range(5), [(0, 1), (3, 4)])
    comps = s.components()
    assert list(comps) == [(0, 1), (2,), (3, 4)]
    sub = s.induced([0, 1, 3])
    assert sub.vertices == (0, 1, 3) and sub.edges == ((0, 1),)


def test_tagged_union_disjointness():
    u = tagged_union([("a", path_space(2)), ("b", path_space(2))])
    assert u.vertices == (("a", 0), ("a", 1), ("b", 0), ("b", 1))
    assert u.n_edges == 2
    assert not u.eq_or_adj(("a", 0), ("b", 0))


def test_continuous_map_requires_total_defined_mapping():
    s, t = path_space(2), path_space(2)
    with pytest.raises(UndefinedVertex):
        ContinuousMap.build(s, t, {0: 0})
    with pytest.raises(UndefinedVertex):
        ContinuousMap.build(s, t, {0: 0, 1: 5})


def test_edge_collapse_is_continuous_but_tear_is_not():
    s = path_space(3)
    collapse = ContinuousMap.build(s, path_space(2), {0: 0, 1: 0, 2: 1})
    assert check_continuous(collapse).ok
    two_pts = CombSpace.build([0, 1], [])
    tear = ContinuousMap.build(s, two_pts, {0: 0, 1: 0, 2: 1})
    rep = check_continuous(tear)
    assert not rep.ok
    assert rep.edge == (1, 2)


def test_compose_maps_checks_codomain():
    f = identity_map(path_space(3))
    g = ContinuousMap.build(path_space(2), path_space(2), {0: 0, 1: 1})
    with pytest.raises(CodomainMismatch):
        compose_maps(f, g)
    h = ContinuousMap.build(path_space(3), path_space(2), {0: 0, 1: 1, 2: 1})
    k = ContinuousMap.build(path_space(2), path_space(3), {0: 2, 1: 1})
    fk = compose_maps(h, k)
    assert fk(0) == 2 and fk(2) == 1


def test_fiber_product_vertices_and_edges():
    # Oracle by direct definition: pairs agreeing under the two legs; an
    # edge needs both coordinates eq-or-adj and the pairs distinct.
    x, y, b = path_space(3), path_space(3), path_space(2)
    f = ContinuousMap.build(x, b, {0: 0, 1: 0, 2: 1})
    g = ContinuousMap.build(y, b, {0: 1, 1: 0, 2: 0})
    fp = fiber_product(f, g)
    expect_pairs = tuple(
        (a, c) for a in x.vertices for c in y.vertices if f(a) == g(c)
    )
    assert fp.space.vertices == expect_pairs
    for (a, c), (a2, c2) in fp.space.edges:
        assert (a, c) != (a2, c2)
        assert x.eq_or_adj(a, a2) and y.eq_or_adj(c, c2)
    assert fp.space.has_edge((0, 1), (1, 2))
    assert not fp.space.has_edge((0, 1), (2, 0))
    assert fp.to_left((0, 1)) == 0 and fp.to_right((0, 1)) == 1


def test_map_equality_and_hash_by_graph():
    s = path_space(2)
    f = ContinuousMap.build(s, s, {0: 0, 1: 1})
    g = ContinuousMap.build(s, s, dict(reversed(list({0: 0, 1: 1}.items()))))
    assert f == g and hash(f) == hash(g)
    assert identity_map(s) == f


def test_ball_radius():
    s = path_space(5)
    assert s.ball(2, 0) == (2,)
    assert s.ball(2, 1) == (1, 2, 3)
    assert s.ball(2, 10) == s.vertices
