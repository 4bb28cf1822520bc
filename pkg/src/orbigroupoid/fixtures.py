"""The model zoo used by tests, the CLI corpus, and the documentation.

Every builder is cached, so fixtures can be requested freely and compared by
identity.  Running ``python -m orbigroupoid.fixtures OUTDIR`` serializes the
corpus to ``.grpd`` files.

The models:

* ``pt_*``           one-point groupoids for a family of small groups;
* ``si``             silvered interval: Z/2 folding an 8-cycle, mirror
                     points 0 and 4;
* ``si2``            the same orbit space broken over two mirror charts
                     glued along their free ends;
* ``c3``             Z/3 rotating a 9-cycle around a fixed hub;
* ``teardrop``       the c3 chart glued 3:1 onto a trivial cap, one cone
                     point of order 3;
* ``tb``             triangular billiard: three dihedral corner charts
                     joined corner-to-corner along their mirror lines;
* ``i1, i2, i3``     an interval covered by 1, 2 and 3 trivial charts.
"""
from __future__ import annotations

from functools import lru_cache

from .combspace import CombSpace, cycle_space
from .atlas import Gluing, build_atlas_groupoid, interval_cover
from .groupoid import (
    FiniteGroup,
    GroupAction,
    Groupoid,
    build_point_groupoid,
    build_translation_groupoid,
)

__all__ = [
    "FIXTURES",
    "POINT_GROUPS",
    "fixture",
    "fixture_names",
    "si_action",
    "c3_action",
    "tb_chart_action",
]


@lru_cache(maxsize=None)
def _point_group(name: str) -> FiniteGroup:
    if name == "triv":
        return FiniteGroup.trivial()
    if name == "z2xz2":
        return FiniteGroup.direct_product(FiniteGroup.cyclic(2), FiniteGroup.cyclic(2))
    if name == "d3":
        return FiniteGroup.dihedral(3)
    if name.startswith("z"):
        return FiniteGroup.cyclic(int(name[1:]))
    raise KeyError(name)


POINT_GROUPS = ("triv", "z2", "z3", "z4", "z6", "z2xz2", "d3")


@lru_cache(maxsize=None)
def point_groupoid(group_name: str) -> Groupoid:
    return build_point_groupoid(_point_group(group_name))


@lru_cache(maxsize=None)
def si_action() -> GroupAction:
    """Z/2 on an 8-cycle by v -> -v; the mirror fixes 0 and 4."""
    return GroupAction.build(
        FiniteGroup.cyclic(2),
        cycle_space(8),
        lambda g, v: (-v) % 8 if g else v,
    )


@lru_cache(maxsize=None)
def si() -> Groupoid:
    return build_translation_groupoid(si_action())


def _hub_space(n: int) -> CombSpace:
    """An n-cycle plus a hub vertex ``"c"`` adjacent to every rim vertex."""
    rim = list(range(n))
    edges = [(v, (v + 1) % n) for v in rim] + [(v, "c") for v in rim]
    return CombSpace.build(rim + ["c"], edges)


@lru_cache(maxsize=None)
def c3_action() -> GroupAction:
    """Z/3 rotating a 9-cycle one third of a turn around the hub."""
    return GroupAction.build(
        FiniteGroup.cyclic(3),
        _hub_space(9),
        lambda g, v: v if v == "c" else (v + 3 * g) % 9,
    )


@lru_cache(maxsize=None)
def c3() -> Groupoid:
    return build_translation_groupoid(c3_action())


@lru_cache(maxsize=None)
def si2() -> Groupoid:
    """Silvered interval over two charts, each a mirrored 7-path.

    Chart ``L`` folds at vertex 3 and supplies the left silvered end; chart
    ``R`` supplies the right one.  The free ends overlap on two orbit points
    and the mirror pair ``(1, 1)`` is declared as a twist so that each pair
    of compatible preimages carries exactly one gluing arrow.
    """
    path7 = CombSpace.build(range(7), [(v, v + 1) for v in range(6)])
    mirror = GroupAction.build(FiniteGroup.cyclic(2), path7, lambda g, v: 6 - v if g else v)
    glue = Gluing(0, 1, {0: 1, 1: 0, 5: 6, 6: 5}, twist=((1, 1),))
    return build_atlas_groupoid([mirror, mirror], [glue], chart_names=("L", "R"))


@lru_cache(maxsize=None)
def teardrop() -> Groupoid:
    """One cone point of order 3: the c3 chart glued onto a trivial cap.

    The 9-cycle rim winds three times around the cap's 3-cycle rim; the
    rotation generator is declared as a twist against the trivial side, so
    the winding becomes a single overlap component and the deck rotations
    are the only arrows between preimages.
    """
    cap = GroupAction.build(FiniteGroup.trivial(), _hub_space(3), lambda g, v: v)
    glue = Gluing(0, 1, {v: v % 3 for v in range(9)}, twist=((1, 0),))
    return build_atlas_groupoid([c3_action(), cap], [glue], chart_names=("U", "L"))


@lru_cache(maxsize=None)
def tb_chart_action() -> GroupAction:
    """D3 on a 12-gon around a hub: rotations step by 4, ``s0`` mirrors
    through the 0-6 axis.  Even rim vertices sit on mirror lines."""

    def act(g, v):
        if v == "c":
            return v
        k, flip = int(g[1:]), g[0] == "s"
        return ((-v if flip else v) + 4 * k) % 12

    return GroupAction.build(FiniteGroup.dihedral(3), _hub_space(12), act)


@lru_cache(maxsize=None)
def tb() -> Groupoid:
    """Triangular billiard from three corner charts.

    Each gluing joins one mirror-line end of a chart to the opposite end of
    the next chart's mirror line; identifying ``(s0, s0)`` cuts the 36 raw
    overlap copies per ordered pair down to 18.
    """
    chart = tb_chart_action()
    tw = (("s0", "s0"),)
    gluings = [
        Gluing(0, 1, {0: 6}, twist=tw),
        Gluing(1, 2, {0: 6}, twist=tw),
        Gluing(2, 0, {0: 6}, twist=tw),
    ]
    return build_atlas_groupoid([chart, chart, chart], gluings, chart_names=("A", "B", "C"))


@lru_cache(maxsize=None)
def i1() -> Groupoid:
    return interval_cover([6])


@lru_cache(maxsize=None)
def i2() -> Groupoid:
    return interval_cover([4, 4], overlap=2)


@lru_cache(maxsize=None)
def i3() -> Groupoid:
    return interval_cover([4, 4, 4], overlap=1)


FIXTURES = {
    **{f"pt_{name}": (lambda name=name: point_groupoid(name)) for name in POINT_GROUPS},
    "si": si,
    "si2": si2,
    "c3": c3,
    "teardrop": teardrop,
    "tb": tb,
    "i1": i1,
    "i2": i2,
    "i3": i3,
}


def fixture_names() -> tuple:
    return tuple(FIXTURES)


def fixture(name: str) -> Groupoid:
    try:
        return FIXTURES[name]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(FIXTURES)}") from None


def demo_bundle_entries() -> list:
    """A small worked bundle: the two-chart cover of the interval collapsing
    onto the one-chart cover, the span of covers, a reflexivity cell on it,
    and the tautological witness.  Drives the span-compose and
    two-cell-verify commands out of the box."""
    from .atlas import chart_collapse
    from .bicat import Span, TwoCellDiagram
    from .morphism import NatTrans, compose_homomorphisms, identity_homomorphism
    from .textfmt import WitnessData

    fine, coarse = fixture("i2"), fixture("i1")
    collapse = chart_collapse(fine, coarse)
    idm = identity_homomorphism(fine)
    span = Span(collapse, collapse)
    composite = compose_homomorphisms(idm, collapse)
    alpha = NatTrans.build(composite, composite,
                           {x: coarse.unit.mapping[collapse.f0(x)]
                            for x in fine.objects.vertices})
    cell = TwoCellDiagram(span, span, fine, idm, idm, alpha, alpha)
    units = {x: fine.unit.mapping[x] for x in fine.objects.vertices}
    return [
        ("groupoid", "fine", fine),
        ("groupoid", "coarse", coarse),
        ("hom", "collapse", collapse),
        ("hom", "idm", idm),
        ("span", "S", span),
        ("cell", "C", cell),
        ("witness", "W", WitnessData(idm, idm, units, dict(units))),
    ]


def _main(argv) -> int:
    import pathlib
    import sys

    from .textfmt import serialize_bundle, serialize_groupoid

    if len(argv) != 1:
        print("usage: python -m orbigroupoid.fixtures OUTDIR", file=sys.stderr)
        return 2
    outdir = pathlib.Path(argv[0])
    outdir.mkdir(parents=True, exist_ok=True)
    for name in fixture_names():
        path = outdir / f"{name}.grpd"
        path.write_text(serialize_groupoid(fixture(name)))
        print(f"wrote {path}")
    bundle_path = outdir / "intervals.orbi"
    bundle_path.write_text(serialize_bundle(demo_bundle_entries()))
    print(f"wrote {bundle_path}")
    return 0


if __name__ == "__main__":  # pragma: no cover
    import sys

    raise SystemExit(_main(sys.argv[1:]))
