"""Orbigroupoids presented by atlases of group charts.

An atlas is a list of charts (finite group actions on spaces) plus gluing
data.  A gluing from chart ``i`` to chart ``j`` is an etale partial map
``phi`` defined on an overlap region of chart ``i``, together with a twist
subgroup ``T <= G_i x G_j`` of symmetry pairs compatible with ``phi``:
each ``(ti, tj)`` in ``T`` must keep the overlap invariant and satisfy
``phi . ti = tj . phi``.

The resulting groupoid has three kinds of arrows:

* ``("t", g, x)`` translation arrows inside a chart,
* ``("g", e, "f", a, b, x)`` one forward copy of the overlap per right coset
  ``(a, b) T``, carrying ``x`` to ``b . phi(a^-1 . x)``,
* ``("g", e, "r", a, b, x)`` the formal inverses of the forward arrows.

Composition is resolved symbolically: translation arrows act on the coset
labels, and a forward arrow against a reverse arrow of the same gluing
contracts to a translation through a twist pair.  A composable pair that no
arrow of the atlas can express raises :class:`CompositionNotClosed`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from ._order import sort_key, sorted_ids
from .combspace import CombSpace, tagged_union
from .errors import BadOverlap, CompositionNotClosed, GlueNotIso, OrbiError
from .groupoid import FiniteGroup, GroupAction, Groupoid

__all__ = [
    "Gluing",
    "build_atlas_groupoid",
    "build_interval_chain",
    "chart_collapse",
    "interval_cover",
]


@dataclass(frozen=True, eq=False)
class Gluing:
    """Partial etale map from chart ``i`` into chart ``j`` with twist data.

    ``twist`` lists generator pairs ``(gi, gj)``; the generated subgroup is
    closed automatically and the identity pair is always included.
    """

    i: int
    j: int
    mapping: Mapping
    twist: tuple = ()


def _generate_twist(gi: FiniteGroup, gj: FiniteGroup, gens) -> tuple:
    group_elems = set()
    for a, b in gens:
        if a not in set(gi.elements) or b not in set(gj.elements):
            raise GlueNotIso(f"twist generator ({a!r}, {b!r}) is not a group pair", witness=(a, b))
        group_elems.add((a, b))
    group_elems.add((gi.unit, gj.unit))
    changed = True
    while changed:
        changed = False
        for (a1, b1) in list(group_elems):
            for (a2, b2) in list(group_elems):
                p = (gi.mul(a1, a2), gj.mul(b1, b2))
                if p not in group_elems:
                    group_elems.add(p)
                    changed = True
    return tuple(sorted(group_elems, key=lambda p: (sort_key(p[0]), sort_key(p[1]))))


def _check_gluing(glue: Gluing, chart_i: GroupAction, chart_j: GroupAction, twist) -> tuple:
    """Validate one gluing; returns the sorted overlap."""
    sp_i, sp_j = chart_i.space, chart_j.space
    overlap = sorted_ids(glue.mapping.keys())
    if not overlap:
        raise GlueNotIso("gluing has an empty overlap", witness=(glue.i, glue.j))
    oset = set(overlap)
    for o in overlap:
        if not sp_i.has_vertex(o):
            raise GlueNotIso(f"overlap vertex {o!r} is not in chart {glue.i}", witness=o)
        img = glue.mapping[o]
        if not sp_j.has_vertex(img):
            raise GlueNotIso(f"gluing image {img!r} is not in chart {glue.j}", witness=(o, img))
    # edges inside the overlap must map to edges (no collapsing)
    for u in overlap:
        for v in sp_i.neighbors(u):
            if v in oset and sort_key(u) < sort_key(v):
                if not sp_j.has_edge(glue.mapping[u], glue.mapping[v]):
                    raise GlueNotIso(
                        f"gluing tears or collapses the edge ({u!r}, {v!r})",
                        witness=(u, v),
                    )
    # local injectivity on closed neighborhoods within the overlap
    for o in overlap:
        local = [w for w in sp_i.closed_nbhd(o) if w in oset]
        imgs = [glue.mapping[w] for w in local]
        if len(set(imgs)) != len(imgs):
            raise GlueNotIso(f"gluing is not injective near {o!r}", witness=o)
    # twist pairs must preserve the overlap and commute with the gluing
    for (ti, tj) in twist:
        moved = {chart_i.apply(ti, o) for o in oset}
        if moved != oset:
            raise GlueNotIso(
                f"twist element {ti!r} does not preserve the overlap", witness=(ti, tj)
            )
        for o in overlap:
            if glue.mapping[chart_i.apply(ti, o)] != chart_j.apply(tj, glue.mapping[o]):
                raise GlueNotIso(
                    f"twist pair ({ti!r}, {tj!r}) is not compatible with the gluing",
                    witness=(ti, tj, o),
                )
    return overlap


def build_atlas_groupoid(
    charts: Sequence[GroupAction],
    gluings: Sequence[Gluing] = (),
    chart_names: Optional[Sequence] = None,
) -> Groupoid:
    """Assemble the groupoid of an atlas of group charts.

    Objects are the disjoint union of the chart spaces with vertices
    ``(name, v)``.  See the module docstring for the arrow and composition
    conventions.  Raises :class:`GlueNotIso` on bad gluing data and
    :class:`CompositionNotClosed` when the atlas is not closed under
    composition."""
    if chart_names is None:
        chart_names = tuple(range(len(charts)))
    chart_names = tuple(chart_names)
    if len(chart_names) != len(charts) or len(set(chart_names)) != len(charts):
        raise OrbiError("chart names must be distinct and match the chart count")
    name_of = dict(enumerate(chart_names))
    idx_of = {n: i for i, n in name_of.items()}

    objects = tagged_union([(name_of[i], c.space) for i, c in enumerate(charts)])

    glue_data = []
    for e, glue in enumerate(gluings):
        if glue.i == glue.j:
            raise GlueNotIso("a gluing must join two distinct charts", witness=e)
        if not (0 <= glue.i < len(charts) and 0 <= glue.j < len(charts)):
            raise GlueNotIso(f"gluing {e} refers to a missing chart", witness=e)
        ci, cj = charts[glue.i], charts[glue.j]
        twist = _generate_twist(ci.group, cj.group, glue.twist)
        overlap = _check_gluing(glue, ci, cj, twist)
        # canonical representative of each right coset (a, b) T
        rep = {}
        for a in ci.group.elements:
            for b in cj.group.elements:
                orbit = [
                    (ci.group.mul(a, ti), cj.group.mul(b, tj)) for (ti, tj) in twist
                ]
                rep[(a, b)] = min(orbit, key=lambda p: (sort_key(p[0]), sort_key(p[1])))
        cosets = sorted(set(rep.values()), key=lambda p: (sort_key(p[0]), sort_key(p[1])))
        glue_data.append(
            {
                "i": glue.i,
                "j": glue.j,
                "phi": dict(glue.mapping),
                "twist": twist,
                "overlap": overlap,
                "rep": rep,
                "cosets": cosets,
            }
        )

    arrow_verts = []
    arrow_edges = []
    src = {}
    tgt = {}
    inv = {}

    for i, chart in enumerate(charts):
        cn = name_of[i]
        for g in chart.group.elements:
            for v in chart.space.vertices:
                aid = ("t", g, (cn, v))
                arrow_verts.append(aid)
                src[aid] = (cn, v)
                tgt[aid] = (cn, chart.apply(g, v))
                inv[aid] = ("t", chart.group.inverse(g), (cn, chart.apply(g, v)))
            for u, v in chart.space.edges:
                arrow_edges.append((("t", g, (cn, u)), ("t", g, (cn, v))))

    def fwd_image(gd, a, b, x):
        ci, cj = charts[gd["i"]], charts[gd["j"]]
        o = ci.apply(ci.group.inverse(a), x)
        return cj.apply(b, gd["phi"][o])

    for e, gd in enumerate(glue_data):
        ci, cj = charts[gd["i"]], charts[gd["j"]]
        ni, nj = name_of[gd["i"]], name_of[gd["j"]]
        for (a, b) in gd["cosets"]:
            base = sorted_ids({ci.apply(a, o) for o in gd["overlap"]})
            for x in base:
                y = fwd_image(gd, a, b, x)
                f_id = ("g", e, "f", a, b, (ni, x))
                r_id = ("g", e, "r", a, b, (ni, x))
                arrow_verts.extend([f_id, r_id])
                src[f_id] = (ni, x)
                tgt[f_id] = (nj, y)
                src[r_id] = (nj, y)
                tgt[r_id] = (ni, x)
                inv[f_id] = r_id
                inv[r_id] = f_id
            bset = set(base)
            for u in base:
                for v in ci.space.neighbors(u):
                    if v in bset and sort_key(u) < sort_key(v):
                        for d in ("f", "r"):
                            arrow_edges.append(
                                (("g", e, d, a, b, (ni, u)), ("g", e, d, a, b, (ni, v)))
                            )

    arrows = CombSpace.build(arrow_verts, arrow_edges)
    unit = {}
    for i, chart in enumerate(charts):
        cn = name_of[i]
        for v in chart.space.vertices:
            unit[(cn, v)] = ("t", chart.group.unit, (cn, v))

    by_src = {}
    for aid in arrows.vertices:
        by_src.setdefault(src[aid], []).append(aid)

    def group_at(chart_idx) -> FiniteGroup:
        return charts[chart_idx].group

    def compose_pair(a1, a2):
        k1, k2 = a1[0], a2[0]
        if k1 == "t" and k2 == "t":
            _, g, xo = a1
            _, h, _ = a2
            ci = idx_of[xo[0]]
            return ("t", group_at(ci).mul(h, g), xo)
        if k1 == "t" and k2 == "g":
            _, h, xo = a1
            _, e, d, a, b, base = a2
            gd = glue_data[e]
            gi, gj = group_at(gd["i"]), group_at(gd["j"])
            if d == "f":
                # the translation lands on the overlap copy; absorb it
                new = gd["rep"][(gi.mul(gi.inverse(h), a), b)]
                return ("g", e, "f", new[0], new[1], xo)
            new = gd["rep"][(a, gj.mul(gj.inverse(h), b))]
            return ("g", e, "r", new[0], new[1], base)
        if k1 == "g" and k2 == "t":
            _, e, d, a, b, base = a1
            _, h, _ = a2
            gd = glue_data[e]
            gi, gj = group_at(gd["i"]), group_at(gd["j"])
            if d == "f":
                new = gd["rep"][(a, gj.mul(h, b))]
                return ("g", e, "f", new[0], new[1], base)
            new = gd["rep"][(gi.mul(h, a), b)]
            cn, x = base
            return ("g", e, "r", new[0], new[1], (cn, charts[idx_of[cn]].apply(h, x)))
        # glue against glue
        _, e1, d1, a1g, b1g, base1 = a1
        _, e2, d2, a2g, b2g, base2 = a2
        if e1 == e2 and d1 == "f" and d2 == "r":
            gd = glue_data[e1]
            gi, gj = group_at(gd["i"]), group_at(gd["j"])
            want_tj = gj.mul(gj.inverse(b2g), b1g)
            x1, x2 = base1[1], base2[1]
            chart_i = charts[gd["i"]]
            cands = set()
            for (ti, tj) in gd["twist"]:
                if tj != want_tj:
                    continue
                g = gi.mul(a2g, gi.mul(ti, gi.inverse(a1g)))
                if chart_i.apply(g, x1) == x2:
                    cands.add(g)
            if len(cands) == 1:
                return ("t", cands.pop(), base1)
            if len(cands) > 1:
                raise CompositionNotClosed(
                    "ambiguous contraction of a forward and a reverse arrow",
                    witness=(a1, a2),
                )
            return None
        if e1 == e2 and d1 == "r" and d2 == "f":
            gd = glue_data[e1]
            gi, gj = group_at(gd["i"]), group_at(gd["j"])
            want_ti = gi.mul(gi.inverse(a2g), a1g)
            chart_j = charts[gd["j"]]
            y1 = src[a1]
            y2 = tgt[a2]
            cands = set()
            for (ti, tj) in gd["twist"]:
                if ti != want_ti:
                    continue
                g = gj.mul(b2g, gj.mul(tj, gj.inverse(b1g)))
                if chart_j.apply(g, y1[1]) == y2[1]:
                    cands.add(g)
            if len(cands) == 1:
                return ("t", cands.pop(), y1)
            if len(cands) > 1:
                raise CompositionNotClosed(
                    "ambiguous contraction of a reverse and a forward arrow",
                    witness=(a1, a2),
                )
            return None
        return None

    def germ_pairs(aid):
        return {(src[b], tgt[b]) for b in arrows.closed_nbhd(aid)}

    def germ_resolve(a1, a2):
        chains = set()
        n2 = arrows.closed_nbhd(a2)
        for b1 in arrows.closed_nbhd(a1):
            for b2 in n2:
                if tgt[b1] == src[b2]:
                    chains.add((src[b1], tgt[b2]))
        cands = []
        for c in by_src.get(src[a1], ()):
            if tgt[c] != tgt[a2]:
                continue
            if chains <= germ_pairs(c):
                cands.append(c)
        if len(cands) == 1:
            return cands[0]
        raise CompositionNotClosed(
            "no unique arrow expresses this composite", witness=(a1, a2)
        )

    comp = {}
    arrow_set = set(arrows.vertices)
    for a1 in arrows.vertices:
        for a2 in by_src.get(tgt[a1], ()):
            c = compose_pair(a1, a2)
            if c is None:
                c = germ_resolve(a1, a2)
            if c not in arrow_set:
                raise CompositionNotClosed(
                    "composite falls outside the atlas arrows", witness=(a1, a2, c)
                )
            comp[(a1, a2)] = c

    return Groupoid.build(objects, arrows, src, tgt, unit, inv, comp)


def interval_cover(lengths: Sequence[int], overlap: int = 1) -> Groupoid:
    """Chain of trivial charts covering an interval, consecutive charts glued
    along ``overlap`` shared endpoints.

    Chart ``m`` covers global positions ``start_m .. start_m + lengths[m] - 1``
    where each chart starts ``length - overlap`` after the previous one.
    """
    n = len(lengths)
    if n < 1:
        raise BadOverlap("need at least one chart")
    if any(l < 2 for l in lengths):
        raise BadOverlap("charts need at least two vertices")
    if n >= 2 and overlap < 1:
        raise BadOverlap("consecutive charts must share at least one vertex")
    if n >= 2 and overlap >= min(lengths):
        raise BadOverlap("overlap must be smaller than every chart")
    starts = [0]
    for m in range(1, n):
        starts.append(starts[m - 1] + lengths[m - 1] - overlap)
    for m in range(n - 2):
        if starts[m + 2] < starts[m] + lengths[m]:
            raise BadOverlap(
                "non-consecutive charts overlap; shorten the overlap or lengthen the charts"
            )
    trivial = FiniteGroup.trivial()
    charts = []
    for m in range(n):
        span = range(starts[m], starts[m] + lengths[m])
        space = CombSpace.build(span, [(p, p + 1) for p in span if p + 1 in span])
        charts.append(GroupAction.build(trivial, space, lambda g, v: v))
    gluings = []
    for m in range(n - 1):
        shared = range(starts[m + 1], starts[m] + lengths[m])
        gluings.append(Gluing(m, m + 1, {p: p for p in shared}))
    names = tuple(f"c{m}" for m in range(n))
    return build_atlas_groupoid(charts, gluings, names)


def build_interval_chain(n_charts: int, overlap: int = 1, chart_len: int = 4) -> Groupoid:
    """Interval covered by ``n_charts`` equal charts; see
    :func:`interval_cover`."""
    return interval_cover([chart_len] * n_charts, overlap)


def chart_collapse(cover: Groupoid, base: Groupoid):
    """The refinement map from a multi-chart interval onto a one-chart model.

    Chart tags drop, global positions survive; every gluing arrow lands on
    the translation unit at its anchor point.  Returns a
    :class:`~orbigroupoid.morphism.Homomorphism`.
    """
    from .morphism import Homomorphism

    base_chart = base.objects.vertices[0][0]
    f0 = {(cn, p): (base_chart, p) for cn, p in cover.objects.vertices}
    f1 = {}
    for a in cover.arrows.vertices:
        anchor = a[2] if a[0] == "t" else a[5]
        f1[a] = ("t", 0, f0[anchor])
    return Homomorphism.build(cover, base, f0, f1)
