"""Inertia groupoid: construction, conjugation oracle, comparison functor."""
import pytest

from orbigroupoid.fixtures import fixture
from orbigroupoid.groupoid import (FiniteGroup, disjoint_union_groupoids,
                                   quotient, validate_groupoid)
from orbigroupoid.inertia import (build_inertia, minimal_exponent,
                                  phi_functor, verify_inertia_iso,
                                  verify_phi_properties)
from orbigroupoid.morphism import check_isomorphism, validate_homomorphism


def conjugation_orbits(G):
    """Brute orbits of loops under conjugation along every arrow, paired
    with the centralizer order at a representative.  Works straight off
    the composition table, independently of build_inertia."""
    src, tgt = G.src.mapping, G.tgt.mapping
    inv, comp = G.inv.mapping, G.comp
    loops = [g for g in G.arrows.vertices if src[g] == tgt[g]]
    seen = set()
    out = []
    for g in loops:
        if g in seen:
            continue
        orbit = {g}
        frontier = [g]
        while frontier:
            cur = frontier.pop()
            for h in G.arrows_from(src[cur]):
                conj = comp[(comp[(inv[h], cur)], h)]
                if conj not in orbit:
                    orbit.add(conj)
                    frontier.append(conj)
        seen |= orbit
        cent = sum(1 for h in G.loops(src[g])
                   if comp[(comp[(inv[h], g)], h)] == g)
        out.append((len(orbit), cent))
    return sorted(out)


FROZEN_SIZES = {
    "si": (10, 20),
    "c3": (12, 36),
    "tb": (72, 648),
}


@pytest.mark.parametrize("name", sorted(FROZEN_SIZES))
def test_inertia_sizes_frozen(name):
    L = build_inertia(fixture(name))
    assert (L.n_objects, L.n_arrows) == FROZEN_SIZES[name]


@pytest.mark.parametrize("name", ["pt_d3", "si", "c3", "teardrop", "i2", "tb"])
def test_inertia_is_a_groupoid(name):
    G = fixture(name)
    L = build_inertia(G)
    assert validate_groupoid(L, limit=1) == ()
    loops = {g for g in G.arrows.vertices
             if G.src.mapping[g] == G.tgt.mapping[g]}
    assert set(L.objects.vertices) == loops


def test_point_inertia_is_conjugation_action():
    G = fixture("pt_d3")
    q = quotient(build_inertia(G))
    rows = sorted((size, label[0]) for _, size, label in q.summary())
    assert rows == [(1, 6), (2, 3), (3, 2)]
    class_sizes = sorted(len(c) for c in FiniteGroup.dihedral(3).conjugacy_classes())
    assert class_sizes == [s for s, _ in rows]


@pytest.mark.parametrize(
    "name", ["pt_z4", "pt_z2xz2", "pt_d3", "si", "teardrop", "si2"])
def test_quotient_matches_conjugation_oracle(name):
    G = fixture(name)
    q = quotient(build_inertia(G))
    rows = sorted((size, label[0]) for _, size, label in q.summary())
    assert rows == conjugation_orbits(G)


def test_loop_transport_endpoints():
    si = fixture("si")
    L = build_inertia(si)
    # the rotation 1 -> 7 carries the unit loop at 1 to the unit loop at 7
    assert L.tgt(((1, 1), (0, 1))) == (0, 7)
    # reflection loops ride along glue arrows between mirror corners
    tb = fixture("tb")
    Ltb = build_inertia(tb)
    s0_a = ("t", "s0", ("A", 0))
    for h in tb.hom(("A", 0), ("B", 6)):
        assert Ltb.tgt((h, s0_a)) == ("t", "s0", ("B", 6))


EXPONENTS = {
    "pt_triv": 1, "pt_z2": 2, "pt_z3": 3, "pt_z4": 4, "pt_z6": 6,
    "pt_z2xz2": 2, "pt_d3": 6,
    "si": 2, "si2": 2, "c3": 3, "teardrop": 3, "tb": 6,
    "i1": 1, "i2": 1, "i3": 1,
}


@pytest.mark.parametrize("name", sorted(EXPONENTS))
def test_minimal_exponent(name):
    assert minimal_exponent(fixture(name)) == EXPONENTS[name]


def test_unit_groupoid_inertia_mirrors_base():
    G = fixture("i2")
    assert check_isomorphism(build_inertia(G), G) is not None


def test_inertia_commutes_with_disjoint_union():
    A, B = fixture("si"), fixture("c3")
    union = disjoint_union_groupoids([("a", A), ("b", B)])
    want = disjoint_union_groupoids([("a", build_inertia(A)),
                                     ("b", build_inertia(B))])
    assert check_isomorphism(build_inertia(union), want) is not None


def test_phi_functor_shape():
    phi = phi_functor(fixture("si"), 2)
    assert validate_homomorphism(phi) == ()
    for fid in phi.source.objects.vertices:
        assert phi.f0(fid) == fid[1]
    # at order 1 the comparison lands on the unit loops
    phi1 = phi_functor(fixture("si"), 1)
    si = fixture("si")
    units = set(si.unit.mapping.values())
    assert {phi1.f0(fid) for fid in phi1.source.objects.vertices} <= units


@pytest.mark.parametrize("name", ["pt_z4", "si", "c3", "teardrop"])
@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_phi_embedding_at_every_order(name, n):
    G = fixture(name)
    report = verify_phi_properties(G, n)
    assert report.embedding
    assert report.gmap_arrows <= report.inertia_arrows
    dividing = sum(1 for g in G.arrows.vertices
                   if G.src.mapping[g] == G.tgt.mapping[g]
                   and n % G.loop_order(g) == 0)
    assert report.gmap_objects == dividing
    assert report.surjective_on_objects == (dividing == report.inertia_objects)


ISO_ORDERS = {"si": 2, "c3": 3, "si2": 2, "teardrop": 3, "pt_d3": 6, "tb": 6}


@pytest.mark.parametrize("name", sorted(ISO_ORDERS))
def test_phi_iso_at_minimal_exponent(name):
    report = verify_inertia_iso(fixture(name))
    assert report.n == ISO_ORDERS[name]
    assert report.isomorphism
    assert (report.gmap_objects, report.gmap_arrows) == \
        (report.inertia_objects, report.inertia_arrows)
