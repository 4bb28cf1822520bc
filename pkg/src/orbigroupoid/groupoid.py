"""Finite groupoids internal to combinatorial spaces.

A groupoid here is a pair of spaces (objects, arrows) with continuous source,
target, unit and inverse maps and a composition table.  Composition is written
in diagram order: ``comp[(g1, g2)]`` is "first ``g1``, then ``g2``", i.e. the
arrow usually written ``g2 . g1``.

The module also provides finite groups acting on spaces, the point and
translation groupoid builders, orbit quotients with isotropy labels, the
etale check, and the local chart structure of an orbit groupoid around an
object.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple, Optional

from ._order import sort_key, sorted_ids
from .combspace import CombSpace, ContinuousMap, check_continuous, tagged_union
from .errors import CodomainMismatch, InvalidAction, NotEtale, OrbiError, UndefinedVertex

__all__ = [
    "Groupoid",
    "Violation",
    "validate_groupoid",
    "FiniteGroup",
    "GroupAction",
    "build_point_groupoid",
    "build_translation_groupoid",
    "unit_groupoid",
    "disjoint_union_groupoids",
    "full_subgroupoid",
    "IsotropyGroup",
    "isotropy_group",
    "group_isomorphic",
    "QuotientSpace",
    "quotient",
    "EtaleReport",
    "check_etale",
    "LocalStructure",
    "orbit_local_structure",
]


class Violation(NamedTuple):
    """A failed axiom instance: which law broke, and on what data."""

    axiom: str
    witness: tuple
    message: str


@dataclass(frozen=True, eq=False)
class Groupoid:
    objects: CombSpace
    arrows: CombSpace
    src: ContinuousMap
    tgt: ContinuousMap
    unit: ContinuousMap
    inv: ContinuousMap
    comp: Mapping

    @staticmethod
    def build(objects, arrows, src, tgt, unit, inv, comp) -> "Groupoid":
        """Assemble a groupoid from raw dict data, checking totality and
        membership (the axioms themselves are the business of
        :func:`validate_groupoid`)."""
        src_m = ContinuousMap.build(arrows, objects, src)
        tgt_m = ContinuousMap.build(arrows, objects, tgt)
        unit_m = ContinuousMap.build(objects, arrows, unit)
        inv_m = ContinuousMap.build(arrows, arrows, inv)
        comp_t = dict(comp)
        for (g1, g2), g3 in comp_t.items():
            for g in (g1, g2, g3):
                if not arrows.has_vertex(g):
                    raise UndefinedVertex(
                        f"composition entry refers to unknown arrow {g!r}",
                        witness=(g1, g2, g3),
                    )
        return Groupoid(objects, arrows, src_m, tgt_m, unit_m, inv_m, comp_t)

    # -- cached indexes ---------------------------------------------------

    @property
    def _out(self) -> Mapping:
        cached = self.__dict__.get("_out_cache")
        if cached is None:
            d = {x: [] for x in self.objects.vertices}
            for g in self.arrows.vertices:
                d[self.src.mapping[g]].append(g)
            cached = {x: tuple(gs) for x, gs in d.items()}
            object.__setattr__(self, "_out_cache", cached)
        return cached

    @property
    def _into(self) -> Mapping:
        cached = self.__dict__.get("_into_cache")
        if cached is None:
            d = {x: [] for x in self.objects.vertices}
            for g in self.arrows.vertices:
                d[self.tgt.mapping[g]].append(g)
            cached = {x: tuple(gs) for x, gs in d.items()}
            object.__setattr__(self, "_into_cache", cached)
        return cached

    @property
    def _hom(self) -> Mapping:
        cached = self.__dict__.get("_hom_cache")
        if cached is None:
            d = {}
            for g in self.arrows.vertices:
                d.setdefault((self.src.mapping[g], self.tgt.mapping[g]), []).append(g)
            cached = {k: tuple(v) for k, v in d.items()}
            object.__setattr__(self, "_hom_cache", cached)
        return cached

    @property
    def _unit_arrows(self) -> frozenset:
        cached = self.__dict__.get("_unit_arrows_cache")
        if cached is None:
            cached = frozenset(self.unit.mapping.values())
            object.__setattr__(self, "_unit_arrows_cache", cached)
        return cached

    # -- basic queries ----------------------------------------------------

    @property
    def n_objects(self) -> int:
        return self.objects.n_vertices

    @property
    def n_arrows(self) -> int:
        return self.arrows.n_vertices

    def src_of(self, g):
        return self.src(g)

    def tgt_of(self, g):
        return self.tgt(g)

    def unit_of(self, x):
        return self.unit(x)

    def inv_of(self, g):
        return self.inv(g)

    def is_unit_arrow(self, g) -> bool:
        return g in self._unit_arrows

    def compose(self, g1, g2):
        """First ``g1``, then ``g2``."""
        try:
            return self.comp[(g1, g2)]
        except KeyError:
            raise CodomainMismatch(
                f"arrows {g1!r} and {g2!r} do not compose", witness=(g1, g2)
            ) from None

    def hom(self, x, y) -> tuple:
        return self._hom.get((x, y), ())

    def loops(self, x) -> tuple:
        return self.hom(x, x)

    def arrows_from(self, x) -> tuple:
        return self._out[x]

    def arrows_into(self, y) -> tuple:
        return self._into[y]

    def power(self, g, n: int):
        """n-fold composite of a loop with itself; ``n = 0`` gives the unit."""
        x = self.src(g)
        if self.tgt(g) != x:
            raise CodomainMismatch(f"{g!r} is not a loop", witness=g)
        acc = self.unit(x)
        for _ in range(n):
            acc = self.compose(acc, g)
        return acc

    def loop_order(self, g) -> int:
        x = self.src(g)
        u = self.unit(x)
        acc = g
        n = 1
        while acc != u:
            acc = self.compose(acc, g)
            n += 1
            if n > self.n_arrows + 1:
                raise OrbiError(f"loop {g!r} has no finite order; groupoid invalid")
        return n


def validate_groupoid(G: Groupoid, limit: int = 20) -> tuple:
    """Check every groupoid axiom exhaustively.

    Returns a tuple of :class:`Violation`; empty means valid.  At most
    ``limit`` violations are reported per axiom so that a badly corrupted
    table does not flood the caller.
    """
    out = []

    def add(axiom, witness, message, counter={}):
        n = counter.get(axiom, 0)
        if n < limit:
            out.append(Violation(axiom, witness, message))
        counter[axiom] = n + 1

    if (
        G.src.domain != G.arrows
        or G.tgt.domain != G.arrows
        or G.src.codomain != G.objects
        or G.tgt.codomain != G.objects
        or G.unit.domain != G.objects
        or G.unit.codomain != G.arrows
        or G.inv.domain != G.arrows
        or G.inv.codomain != G.arrows
    ):
        add("structure", (), "structure maps do not have the expected spaces")
        return tuple(out)

    for name, m in (("src", G.src), ("tgt", G.tgt), ("unit", G.unit), ("inv", G.inv)):
        rep = check_continuous(m)
        if not rep.ok:
            add("continuity", (name, rep.edge), f"{name} tears the edge {rep.edge}")

    for x in G.objects.vertices:
        u = G.unit.mapping[x]
        if G.src.mapping[u] != x or G.tgt.mapping[u] != x:
            add("unit-endpoints", (x,), f"unit arrow of {x!r} is not a loop at it")

    for g in G.arrows.vertices:
        gi = G.inv.mapping[g]
        if G.src.mapping[gi] != G.tgt.mapping[g] or G.tgt.mapping[gi] != G.src.mapping[g]:
            add("inverse-endpoints", (g,), f"inverse of {g!r} has wrong endpoints")

    comp = G.comp
    arrows = set(G.arrows.vertices)
    for (g1, g2), g3 in comp.items():
        if g1 not in arrows or g2 not in arrows or g3 not in arrows:
            add("composition-domain", (g1, g2), "composition entry uses unknown arrows")
            continue
        if G.tgt.mapping[g1] != G.src.mapping[g2]:
            add(
                "composition-domain",
                (g1, g2),
                "composition defined on a non-composable pair",
            )
    for g1 in G.arrows.vertices:
        for g2 in G.arrows_from(G.tgt.mapping[g1]):
            if (g1, g2) not in comp:
                add("composition-domain", (g1, g2), "composable pair missing from table")

    def defined(g1, g2):
        c = comp.get((g1, g2))
        return c if c in arrows else None

    for (g1, g2), g3 in comp.items():
        if g3 not in arrows or g1 not in arrows or g2 not in arrows:
            continue
        if G.tgt.mapping[g1] != G.src.mapping[g2]:
            continue
        if G.src.mapping[g3] != G.src.mapping[g1] or G.tgt.mapping[g3] != G.tgt.mapping[g2]:
            add("composition-endpoints", (g1, g2), f"composite of {g1!r}, {g2!r} has wrong endpoints")

    for g in G.arrows.vertices:
        ut = G.unit.mapping[G.tgt.mapping[g]]
        us = G.unit.mapping[G.src.mapping[g]]
        if defined(g, ut) != g:
            add("identity-law", (g,), f"composing {g!r} with the target unit does not return it")
        if defined(us, g) != g:
            add("identity-law", (g,), f"composing the source unit with {g!r} does not return it")

    for g in G.arrows.vertices:
        gi = G.inv.mapping[g]
        if defined(g, gi) != G.unit.mapping[G.src.mapping[g]]:
            add("inverse-law", (g,), f"{g!r} composed with its inverse is not the unit")
        if defined(gi, g) != G.unit.mapping[G.tgt.mapping[g]]:
            add("inverse-law", (g,), f"inverse of {g!r} composed with it is not the unit")

    for g1 in G.arrows.vertices:
        for g2 in G.arrows_from(G.tgt.mapping[g1]):
            g12 = defined(g1, g2)
            if g12 is None:
                continue
            for g3 in G.arrows_from(G.tgt.mapping[g2]):
                g23 = defined(g2, g3)
                if g23 is None:
                    continue
                left = defined(g12, g3)
                right = defined(g1, g23)
                if left != right or left is None:
                    add("associativity", (g1, g2, g3), "associativity fails on this triple")

    return tuple(out)


# ---------------------------------------------------------------------------
# finite groups and actions


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group by multiplication table.

    ``mul(a, b)`` is ``a * b`` in the convention where the group acts on the
    left: ``(a * b) . x = a . (b . x)``.
    """

    name: str
    elements: tuple
    unit: object
    table: Mapping

    @staticmethod
    def build(name: str, elements: Iterable, unit, table: Mapping) -> "FiniteGroup":
        elems = sorted_ids(elements)
        elem_set = set(elems)
        if unit not in elem_set:
            raise OrbiError(f"group unit {unit!r} is not an element")
        t = dict(table)
        for a in elems:
            for b in elems:
                if (a, b) not in t:
                    raise OrbiError(f"multiplication table missing ({a!r}, {b!r})")
                if t[(a, b)] not in elem_set:
                    raise OrbiError(f"table entry ({a!r}, {b!r}) leaves the group")
        g = FiniteGroup(name, elems, unit, t)
        for a in elems:
            if g.mul(a, unit) != a or g.mul(unit, a) != a:
                raise OrbiError(f"unit law fails at {a!r}")
        for a in elems:
            if not any(g.mul(a, b) == unit for b in elems):
                raise OrbiError(f"element {a!r} has no inverse")
        for a in elems:
            for b in elems:
                for c in elems:
                    if g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c)):
                        raise OrbiError(f"associativity fails at ({a!r}, {b!r}, {c!r})")
        return g

    @property
    def order(self) -> int:
        return len(self.elements)

    def mul(self, a, b):
        return self.table[(a, b)]

    @property
    def _inverses(self) -> Mapping:
        cached = self.__dict__.get("_inv_cache")
        if cached is None:
            cached = {}
            for a in self.elements:
                for b in self.elements:
                    if self.table[(a, b)] == self.unit:
                        cached[a] = b
                        break
            object.__setattr__(self, "_inv_cache", cached)
        return cached

    def inverse(self, a):
        return self._inverses[a]

    def element_order(self, a) -> int:
        acc = a
        n = 1
        while acc != self.unit:
            acc = self.mul(acc, a)
            n += 1
        return n

    def element_orders(self) -> tuple:
        return tuple(sorted(self.element_order(a) for a in self.elements))

    def label(self) -> tuple:
        """Isomorphism-invariant fingerprint: (order, sorted element orders)."""
        return (self.order, self.element_orders())

    def conjugacy_classes(self) -> tuple:
        """Conjugacy classes as sorted tuples, ordered by least element."""
        seen = set()
        classes = []
        for a in self.elements:
            if a in seen:
                continue
            cls = {self.mul(self.mul(h, a), self.inverse(h)) for h in self.elements}
            seen |= cls
            classes.append(sorted_ids(cls))
        return tuple(classes)

    # -- standard groups --------------------------------------------------

    @staticmethod
    def trivial() -> "FiniteGroup":
        return FiniteGroup.cyclic(1)

    @staticmethod
    def cyclic(n: int) -> "FiniteGroup":
        if n < 1:
            raise OrbiError("cyclic group needs n >= 1")
        table = {(a, b): (a + b) % n for a in range(n) for b in range(n)}
        return FiniteGroup.build(f"z{n}", range(n), 0, table)

    @staticmethod
    def dihedral(n: int) -> "FiniteGroup":
        """Symmetries of a regular n-gon: rotations ``r0..r{n-1}`` and
        reflections ``s0..s{n-1}`` with ``sk = rk * s0``."""
        if n < 1:
            raise OrbiError("dihedral group needs n >= 1")
        elems = [f"r{k}" for k in range(n)] + [f"s{k}" for k in range(n)]

        def decode(e):
            return int(e[1:]), (0 if e[0] == "r" else 1)

        def encode(k, f):
            return f"{'s' if f else 'r'}{k % n}"

        table = {}
        for a in elems:
            ka, fa = decode(a)
            for b in elems:
                kb, fb = decode(b)
                k = (ka + (kb if fa == 0 else -kb)) % n
                table[(a, b)] = encode(k, (fa + fb) % 2)
        return FiniteGroup.build(f"d{n}", elems, "r0", table)

    @staticmethod
    def direct_product(g: "FiniteGroup", h: "FiniteGroup") -> "FiniteGroup":
        elems = [(a, b) for a in g.elements for b in h.elements]
        table = {
            ((a1, b1), (a2, b2)): (g.mul(a1, a2), h.mul(b1, b2))
            for (a1, b1) in elems
            for (a2, b2) in elems
        }
        return FiniteGroup.build(f"{g.name}x{h.name}", elems, (g.unit, h.unit), table)


@dataclass(frozen=True, eq=False)
class GroupAction:
    """A left action of a finite group by automorphisms of a space."""

    group: FiniteGroup
    space: CombSpace
    table: Mapping

    @staticmethod
    def build(group: FiniteGroup, space: CombSpace, table) -> "GroupAction":
        if callable(table):
            t = {(g, v): table(g, v) for g in group.elements for v in space.vertices}
        else:
            t = dict(table)
        for g in group.elements:
            for v in space.vertices:
                if (g, v) not in t:
                    raise InvalidAction(f"action undefined on ({g!r}, {v!r})", witness=(g, v))
                if not space.has_vertex(t[(g, v)]):
                    raise InvalidAction(
                        f"action image of ({g!r}, {v!r}) leaves the space", witness=(g, v)
                    )
        act = GroupAction(group, space, t)
        for v in space.vertices:
            if act.apply(group.unit, v) != v:
                raise InvalidAction(f"unit moves vertex {v!r}", witness=v)
        for a in group.elements:
            for b in group.elements:
                ab = group.mul(a, b)
                for v in space.vertices:
                    if act.apply(ab, v) != act.apply(a, act.apply(b, v)):
                        raise InvalidAction(
                            f"action not compatible with multiplication at ({a!r}, {b!r}, {v!r})",
                            witness=(a, b, v),
                        )
        for g in group.elements:
            imgs = [act.apply(g, v) for v in space.vertices]
            if len(set(imgs)) != len(imgs):
                raise InvalidAction(f"element {g!r} does not act injectively", witness=g)
            for u, v in space.edges:
                if not space.has_edge(act.apply(g, u), act.apply(g, v)):
                    raise InvalidAction(
                        f"element {g!r} does not preserve the edge ({u!r}, {v!r})",
                        witness=(g, u, v),
                    )
        return act

    def apply(self, g, v):
        return self.table[(g, v)]

    def orbit(self, v) -> tuple:
        return sorted_ids({self.apply(g, v) for g in self.group.elements})

    def stabilizer(self, v) -> tuple:
        return tuple(g for g in self.group.elements if self.apply(g, v) == v)


def build_point_groupoid(group: FiniteGroup) -> Groupoid:
    """One object, one loop per group element."""
    objects = CombSpace.build(["pt"])
    arrows = CombSpace.build(group.elements)
    src = {g: "pt" for g in group.elements}
    unit = {"pt": group.unit}
    inv = {g: group.inverse(g) for g in group.elements}
    # first act by a, then by b: the composite acts by b * a
    comp = {(a, b): group.mul(b, a) for a in group.elements for b in group.elements}
    return Groupoid.build(objects, arrows, src, dict(src), unit, inv, comp)


def build_translation_groupoid(action: GroupAction) -> Groupoid:
    """Arrows ``(g, x): x -> g.x``, one copy of the space per group element;
    arrow edges stay within a copy."""
    group, space = action.group, action.space
    arrow_verts = [(g, v) for g in group.elements for v in space.vertices]
    arrow_edges = [((g, u), (g, v)) for g in group.elements for u, v in space.edges]
    arrows = CombSpace.build(arrow_verts, arrow_edges)
    src = {(g, v): v for (g, v) in arrow_verts}
    tgt = {(g, v): action.apply(g, v) for (g, v) in arrow_verts}
    unit = {v: (group.unit, v) for v in space.vertices}
    inv = {
        (g, v): (group.inverse(g), action.apply(g, v)) for (g, v) in arrow_verts
    }
    comp = {}
    for (g, x) in arrow_verts:
        gx = action.apply(g, x)
        for h in group.elements:
            comp[((g, x), (h, gx))] = (group.mul(h, g), x)
    return Groupoid.build(space, arrows, src, tgt, unit, inv, comp)


def unit_groupoid(space: CombSpace) -> Groupoid:
    """The space itself, seen as a groupoid with only identity arrows."""
    trivial = GroupAction.build(FiniteGroup.trivial(), space, lambda g, v: v)
    return build_translation_groupoid(trivial)


def disjoint_union_groupoids(parts) -> Groupoid:
    """Disjoint union of ``(tag, groupoid)`` pairs; every vertex becomes
    ``(tag, v)`` and the structure maps act within each part."""
    parts = list(parts)
    objects = tagged_union([(tag, G.objects) for tag, G in parts])
    arrows = tagged_union([(tag, G.arrows) for tag, G in parts])
    src, tgt, unit, inv, comp = {}, {}, {}, {}, {}
    for tag, G in parts:
        for g in G.arrows.vertices:
            src[(tag, g)] = (tag, G.src.mapping[g])
            tgt[(tag, g)] = (tag, G.tgt.mapping[g])
            inv[(tag, g)] = (tag, G.inv.mapping[g])
        for x in G.objects.vertices:
            unit[(tag, x)] = (tag, G.unit.mapping[x])
        for (g1, g2), g3 in G.comp.items():
            comp[((tag, g1), (tag, g2))] = (tag, g3)
    return Groupoid.build(objects, arrows, src, tgt, unit, inv, comp)


def full_subgroupoid(G: Groupoid, objs) -> Groupoid:
    """Restriction to ``objs`` with every arrow between them."""
    keep = set(objs)
    for x in keep:
        if not G.objects.has_vertex(x):
            raise UndefinedVertex(f"unknown object {x!r}", witness=x)
    arr = [a for a in G.arrows.vertices
           if G.src.mapping[a] in keep and G.tgt.mapping[a] in keep]
    arr_set = set(arr)
    objects = CombSpace.build(
        keep, (e for e in G.objects.edges if e[0] in keep and e[1] in keep))
    arrows = CombSpace.build(
        arr, (e for e in G.arrows.edges if e[0] in arr_set and e[1] in arr_set))
    return Groupoid.build(
        objects,
        arrows,
        {a: G.src.mapping[a] for a in arr},
        {a: G.tgt.mapping[a] for a in arr},
        {x: G.unit.mapping[x] for x in keep},
        {a: G.inv.mapping[a] for a in arr},
        {pair: c for pair, c in G.comp.items() if pair[0] in arr_set and pair[1] in arr_set},
    )


# ---------------------------------------------------------------------------
# isotropy and quotients


@dataclass(frozen=True, eq=False)
class IsotropyGroup:
    """The loops of a groupoid at one object, as an abstract group.

    ``mul(a, b)`` composes loops as functions, ``a`` after ``b``; this matches
    the :class:`FiniteGroup` convention, so the two classes can be compared by
    :func:`group_isomorphic`.
    """

    base_point: object
    elements: tuple
    unit: object
    table: Mapping  # (a, b) -> a after b

    @property
    def order(self) -> int:
        return len(self.elements)

    def mul(self, a, b):
        return self.table[(a, b)]

    def inverse(self, a):
        for b in self.elements:
            if self.table[(a, b)] == self.unit:
                return b
        raise OrbiError(f"loop {a!r} has no inverse")

    def element_order(self, a) -> int:
        acc = a
        n = 1
        while acc != self.unit:
            acc = self.mul(acc, a)
            n += 1
            if n > len(self.elements) + 1:
                raise OrbiError(f"loop {a!r} has no finite order")
        return n

    def element_orders(self) -> tuple:
        return tuple(sorted(self.element_order(a) for a in self.elements))

    def label(self) -> tuple:
        return (self.order, self.element_orders())


def isotropy_group(G: Groupoid, x) -> IsotropyGroup:
    """Loops at ``x`` under composition; raises if they fail the group laws
    (which only happens when ``G`` itself is invalid)."""
    if not G.objects.has_vertex(x):
        raise UndefinedVertex(f"unknown object {x!r}", witness=x)
    loops = G.loops(x)
    loop_set = set(loops)
    u = G.unit(x)
    if u not in loop_set:
        raise OrbiError(f"unit of {x!r} is not among its loops")
    table = {}
    for a in loops:
        for b in loops:
            # a after b = comp(first b, then a)
            c = G.comp.get((b, a))
            if c is None or c not in loop_set:
                raise OrbiError(f"loops at {x!r} are not closed under composition")
            table[(a, b)] = c
    iso = IsotropyGroup(x, loops, u, table)
    for a in loops:
        iso.inverse(a)
    return iso


def group_isomorphic(a, b) -> bool:
    """Abstract isomorphism test for anything with ``elements``, ``unit`` and
    ``mul``; backtracking over order-respecting bijections."""
    ea = sorted(a.elements, key=sort_key)
    eb = sorted(b.elements, key=sort_key)
    if len(ea) != len(eb):
        return False
    orda = {e: _elt_order(a, e) for e in ea}
    ordb = {e: _elt_order(b, e) for e in eb}
    if sorted(orda.values()) != sorted(ordb.values()):
        return False
    # high-order elements first: they constrain the most
    queue = [e for e in sorted(ea, key=lambda e: (-orda[e], sort_key(e))) if e != a.unit]
    assign = {a.unit: b.unit}
    used = {b.unit}

    def compatible(x, y):
        pairs = [(a.mul(x, x), b.mul(y, y))]
        for x2, y2 in assign.items():
            pairs.append((a.mul(x, x2), b.mul(y, y2)))
            pairs.append((a.mul(x2, x), b.mul(y2, y)))
        for p, q in pairs:
            if p in assign:
                if assign[p] != q:
                    return False
            elif p != x:
                if q in used or orda[p] != ordb[q]:
                    return False
        return True

    def verify():
        for x1 in ea:
            for x2 in ea:
                if assign[a.mul(x1, x2)] != b.mul(assign[x1], assign[x2]):
                    return False
        return True

    def extend(i):
        while i < len(queue) and queue[i] in assign:
            i += 1
        if i == len(queue):
            return verify()
        x = queue[i]
        for y in eb:
            if y in used or ordb[y] != orda[x]:
                continue
            if not compatible(x, y):
                continue
            assign[x] = y
            used.add(y)
            if extend(i + 1):
                return True
            del assign[x]
            used.discard(y)
        return False

    return extend(0)


def _elt_order(g, e) -> int:
    acc, n = e, 1
    while acc != g.unit:
        acc = g.mul(acc, e)
        n += 1
    return n


@dataclass(frozen=True, eq=False)
class QuotientSpace:
    """Orbit space of a groupoid: one vertex per orbit, tagged with the
    isotropy of its points."""

    space: CombSpace
    projection: Mapping  # object -> orbit representative
    members: Mapping  # representative -> sorted orbit tuple
    isotropy: Mapping  # representative -> IsotropyGroup at the representative

    def label(self, rep) -> tuple:
        return self.isotropy[rep].label()

    def labels(self) -> Mapping:
        return {rep: self.isotropy[rep].label() for rep in self.space.vertices}

    def summary(self) -> tuple:
        """Deterministic per-orbit rows: (representative, size, label)."""
        return tuple(
            (rep, len(self.members[rep]), self.label(rep)) for rep in self.space.vertices
        )


def quotient(G: Groupoid) -> QuotientSpace:
    """Orbit space with isotropy labels.

    Two objects are identified when an arrow joins them; the orbit graph has
    an edge where any pair of member vertices has one.  Isotropy labels are
    computed at every member and must agree across the orbit."""
    parent = {x: x for x in G.objects.vertices}

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            if sort_key(ry) < sort_key(rx):
                rx, ry = ry, rx
            parent[ry] = rx

    for g in G.arrows.vertices:
        union(G.src.mapping[g], G.tgt.mapping[g])

    members = {}
    for x in G.objects.vertices:
        members.setdefault(find(x), []).append(x)
    reps = {}
    members_sorted = {}
    for root, mem in members.items():
        mem_t = sorted_ids(mem)
        rep = mem_t[0]
        members_sorted[rep] = mem_t
        for x in mem_t:
            reps[x] = rep

    edges = set()
    for u, v in G.objects.edges:
        ru, rv = reps[u], reps[v]
        if ru != rv:
            edges.add((ru, rv))
    space = CombSpace.build(members_sorted.keys(), edges)

    isotropy = {}
    for rep, mem in members_sorted.items():
        base = isotropy_group(G, rep)
        for x in mem[1:]:
            other = isotropy_group(G, x)
            if other.label() != base.label():
                raise OrbiError(
                    f"isotropy labels differ within the orbit of {rep!r}",
                    witness=(rep, x),
                )
        isotropy[rep] = base
    return QuotientSpace(space, reps, members_sorted, isotropy)


# ---------------------------------------------------------------------------
# etale structure


class EtaleReport(NamedTuple):
    ok: bool
    witness: Optional[tuple]  # (arrow, which map, colliding pair)


def check_etale(G: Groupoid) -> EtaleReport:
    """Source and target must be injective on every closed arrow
    neighborhood; the first collision is reported."""
    for a in G.arrows.vertices:
        nbhd = G.arrows.closed_nbhd(a)
        for name, m in (("src", G.src.mapping), ("tgt", G.tgt.mapping)):
            seen = {}
            for b in nbhd:
                img = m[b]
                if img in seen:
                    return EtaleReport(False, (a, name, (seen[img], b)))
                seen[img] = b
    return EtaleReport(True, None)


class LocalStructure(NamedTuple):
    base_point: object
    neighborhood: tuple  # vertices of the qualifying ball
    charts: Mapping  # loop arrow -> sorted arrow tuple covering the ball
    radius: int
    complete: bool  # False only if not even the trivial ball qualifies


def orbit_local_structure(G: Groupoid, x) -> LocalStructure:
    """Largest ball around ``x`` over which the arrows into/out of the ball
    split into one copy of the ball per isotropy loop.

    Each chart component must map isomorphically onto the ball under both the
    source and the target map.  Returns the trivial ball when nothing larger
    qualifies."""
    if not G.objects.has_vertex(x):
        raise UndefinedVertex(f"unknown object {x!r}", witness=x)
    etale = check_etale(G)
    if not etale.ok:
        raise NotEtale("local structure needs an etale groupoid", witness=etale.witness)
    loops = G.loops(x)

    balls = []
    seen_sizes = set()
    comp_size = len(G.objects.component_of(x))
    r = 0
    while True:
        b = G.objects.ball(x, r)
        if len(b) not in seen_sizes:
            balls.append((r, b))
            seen_sizes.add(len(b))
        if len(b) == comp_size:
            break
        r += 1

    for r, ball in reversed(balls):
        result = _try_local_charts(G, x, loops, ball)
        if result is not None:
            return LocalStructure(x, ball, result, r, True)
    return LocalStructure(x, (x,), {g: (g,) for g in loops}, 0, False)


def _try_local_charts(G: Groupoid, x, loops, ball):
    vset = set(ball)
    arrow_ids = [
        a
        for a in G.arrows.vertices
        if G.src.mapping[a] in vset and G.tgt.mapping[a] in vset
    ]
    if len(arrow_ids) != len(loops) * len(ball):
        return None
    sub = G.arrows.induced(arrow_ids)
    comps = {c[0]: c for c in sub.components()}
    owner = {}
    for least, comp in comps.items():
        for a in comp:
            owner[a] = least
    charts = {}
    used = set()
    for g in loops:
        comp = comps[owner[g]]
        if owner[g] in used:
            return None
        used.add(owner[g])
        charts[g] = comp
    if sum(len(c) for c in charts.values()) != len(arrow_ids):
        return None
    obj_sub = G.objects.induced(ball)
    for g, comp in charts.items():
        if len(comp) != len(ball):
            return None
        for m in (G.src.mapping, G.tgt.mapping):
            imgs = [m[a] for a in comp]
            if len(set(imgs)) != len(imgs) or set(imgs) != vset:
                return None
            for a, b in itertools.combinations(comp, 2):
                if sub.has_edge(a, b) != obj_sub.has_edge(m[a], m[b]):
                    return None
    return charts
