"""Homomorphisms of groupoids, natural transformations, and the two
equivalence notions: essential equivalence and strict isomorphism.

A homomorphism is a pair of continuous maps (objects and arrows) commuting
with all five structure maps.  Natural transformations are continuous maps
from objects to target arrows satisfying the usual square, read in diagram
order: ``comp(f1(g), alpha(y)) == comp(alpha(x), f1'(g))`` for ``g: x -> y``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from .combspace import CombSpace, ContinuousMap, check_continuous, compose_maps, identity_map
from .errors import CodomainMismatch, OrbiError
from .groupoid import Groupoid, Violation
from ._order import sorted_ids

__all__ = [
    "Homomorphism",
    "NatTrans",
    "EssEquivReport",
    "IsoPair",
    "validate_homomorphism",
    "identity_homomorphism",
    "compose_homomorphisms",
    "validate_nat_trans",
    "identity_nat_trans",
    "vertical_compose",
    "whisker_map_nat",
    "whisker_nat_map",
    "check_essential_equivalence",
    "check_isomorphism",
]


@dataclass(frozen=True)
class Homomorphism:
    """A map of groupoids; use :func:`validate_homomorphism` to certify it."""

    source: Groupoid
    target: Groupoid
    f0: ContinuousMap
    f1: ContinuousMap

    @staticmethod
    def build(source: Groupoid, target: Groupoid,
              f0: Mapping, f1: Mapping) -> "Homomorphism":
        return Homomorphism(
            source,
            target,
            ContinuousMap.build(source.objects, target.objects, f0),
            ContinuousMap.build(source.arrows, target.arrows, f1),
        )

    def on_object(self, x):
        return self.f0(x)

    def on_arrow(self, g):
        return self.f1(g)


def validate_homomorphism(f: Homomorphism, limit: int = 20) -> tuple:
    """All violations of the functor laws and continuity, up to ``limit``."""
    out = []

    def add(axiom, witness, message):
        if len(out) < limit:
            out.append(Violation(axiom, witness, message))
        return len(out) < limit

    G, H = f.source, f.target
    if f.f0.domain is not G.objects or f.f0.codomain is not H.objects \
            or f.f1.domain is not G.arrows or f.f1.codomain is not H.arrows:
        add("structure", None, "component maps do not join source to target")
        return tuple(out)
    for name, m in (("f0", f.f0), ("f1", f.f1)):
        rep = check_continuous(m)
        if not rep.ok:
            if not add("continuity", (name, rep.edge), f"{name} tears the edge {rep.edge!r}"):
                return tuple(out)
    for x in G.objects.vertices:
        if f.f1(G.unit_of(x)) != H.unit_of(f.f0(x)):
            if not add("unit", x, f"unit of {x!r} is not sent to a unit"):
                return tuple(out)
    for g in G.arrows.vertices:
        if H.src_of(f.f1(g)) != f.f0(G.src_of(g)):
            if not add("src", g, f"source of {g!r} is not preserved"):
                return tuple(out)
        if H.tgt_of(f.f1(g)) != f.f0(G.tgt_of(g)):
            if not add("tgt", g, f"target of {g!r} is not preserved"):
                return tuple(out)
    for (g1, g2), g3 in G.comp.items():
        h1, h2 = f.f1(g1), f.f1(g2)
        if H.comp.get((h1, h2)) != f.f1(g3):
            if not add("composition", (g1, g2),
                       f"composite of {g1!r} and {g2!r} is not preserved"):
                return tuple(out)
    return tuple(out)


def identity_homomorphism(G: Groupoid) -> Homomorphism:
    return Homomorphism(G, G, identity_map(G.objects), identity_map(G.arrows))


def compose_homomorphisms(first: Homomorphism, then: Homomorphism) -> Homomorphism:
    if first.target is not then.source:
        raise CodomainMismatch("homomorphisms do not chain: target differs from source")
    return Homomorphism(
        first.source,
        then.target,
        compose_maps(first.f0, then.f0),
        compose_maps(first.f1, then.f1),
    )


@dataclass(frozen=True)
class NatTrans:
    """A transformation between parallel homomorphisms.

    ``alpha`` assigns to each source object an arrow of the target groupoid
    from ``source.f0(x)`` to ``target.f0(x)``.
    """

    source: Homomorphism
    target: Homomorphism
    alpha: ContinuousMap

    @staticmethod
    def build(source: Homomorphism, target: Homomorphism, alpha: Mapping) -> "NatTrans":
        return NatTrans(
            source,
            target,
            ContinuousMap.build(source.source.objects, source.target.arrows, alpha),
        )

    def at(self, x):
        return self.alpha(x)


def validate_nat_trans(t: NatTrans, limit: int = 20) -> tuple:
    out = []

    def add(axiom, witness, message):
        if len(out) < limit:
            out.append(Violation(axiom, witness, message))
        return len(out) < limit

    f, g = t.source, t.target
    if f.source is not g.source or f.target is not g.target:
        add("structure", None, "transformation endpoints are not parallel")
        return tuple(out)
    G, H = f.source, f.target
    if t.alpha.domain is not G.objects or t.alpha.codomain is not H.arrows:
        add("structure", None, "alpha must map source objects to target arrows")
        return tuple(out)
    rep = check_continuous(t.alpha)
    if not rep.ok:
        if not add("continuity", rep.edge, f"alpha tears the edge {rep.edge!r}"):
            return tuple(out)
    for x in G.objects.vertices:
        a = t.alpha(x)
        if H.src_of(a) != f.f0(x) or H.tgt_of(a) != g.f0(x):
            if not add("endpoints", x, f"alpha at {x!r} has wrong endpoints"):
                return tuple(out)
    for arr in G.arrows.vertices:
        x, y = G.src_of(arr), G.tgt_of(arr)
        left = H.comp.get((f.f1(arr), t.alpha(y)))
        right = H.comp.get((t.alpha(x), g.f1(arr)))
        if left is None or left != right:
            if not add("naturality", arr, f"naturality fails at arrow {arr!r}"):
                return tuple(out)
    return tuple(out)


def identity_nat_trans(f: Homomorphism) -> NatTrans:
    alpha = {x: f.target.unit_of(f.f0(x)) for x in f.source.objects.vertices}
    return NatTrans.build(f, f, alpha)


def vertical_compose(first: NatTrans, then: NatTrans) -> NatTrans:
    """``first: f => g`` followed by ``then: g => h`` gives ``f => h``."""
    if first.target != then.source:
        raise CodomainMismatch("transformations do not chain")
    H = first.source.target
    alpha = {
        x: H.compose(first.alpha(x), then.alpha(x))
        for x in first.source.source.objects.vertices
    }
    return NatTrans.build(first.source, then.target, alpha)


def whisker_map_nat(h: Homomorphism, t: NatTrans) -> NatTrans:
    """Precompose ``t: f => g`` with ``h: M -> source``, giving ``fh => gh``."""
    if h.target is not t.source.source:
        raise CodomainMismatch("whiskering map does not land in the source")
    alpha = {m: t.alpha(h.f0(m)) for m in h.source.objects.vertices}
    return NatTrans.build(
        compose_homomorphisms(h, t.source),
        compose_homomorphisms(h, t.target),
        alpha,
    )


def whisker_nat_map(t: NatTrans, k: Homomorphism) -> NatTrans:
    """Postcompose ``t: f => g`` with ``k: target -> L``, giving ``kf => kg``."""
    if k.source is not t.source.target:
        raise CodomainMismatch("whiskering map does not start at the target")
    alpha = {x: k.f1(t.alpha(x)) for x in t.source.source.objects.vertices}
    return NatTrans.build(
        compose_homomorphisms(t.source, k),
        compose_homomorphisms(t.target, k),
        alpha,
    )


@dataclass(frozen=True)
class EssEquivReport:
    e1: bool
    e2: bool
    e1_witness: object = None
    e2_witness: object = None

    @property
    def ok(self) -> bool:
        return self.e1 and self.e2


def check_essential_equivalence(f: Homomorphism) -> EssEquivReport:
    """E1: every target object receives an arrow from the image.
    E2: f1 restricts to a bijection on every hom set."""
    G, H = f.source, f.target
    image = {f.f0(x) for x in G.objects.vertices}
    covered = set()
    for h in H.arrows.vertices:
        if H.src_of(h) in image:
            covered.add(H.tgt_of(h))
    e1_witness = None
    for y in H.objects.vertices:
        if y not in covered:
            e1_witness = y
            break
    e2_witness = None
    objs = G.objects.vertices
    for x in objs:
        if e2_witness is not None:
            break
        for x2 in objs:
            dom = G.hom(x, x2)
            cod = H.hom(f.f0(x), f.f0(x2))
            img = {f.f1(g) for g in dom}
            if len(img) != len(dom) or img != set(cod):
                e2_witness = (x, x2)
                break
    return EssEquivReport(e1_witness is None, e2_witness is None, e1_witness, e2_witness)


@dataclass(frozen=True)
class IsoPair:
    forward: Homomorphism
    backward: Homomorphism


# --------------------------------------------------------------------------
# strict isomorphism search


def _hom_size(G: Groupoid, x, y) -> int:
    return len(G.hom(x, y))


def _object_signatures(G: Groupoid) -> dict:
    """Initial invariant per object: degree, loop profile, hom-size profile."""
    sig = {}
    for x in G.objects.vertices:
        loops = sorted(G.loop_order(g) for g in G.hom(x, x))
        profile = sorted(
            (_hom_size(G, x, y), _hom_size(G, y, x), G.objects.eq_or_adj(x, y))
            for y in G.objects.vertices
            if y != x and (G.objects.eq_or_adj(x, y) or _hom_size(G, x, y) or _hom_size(G, y, x))
        )
        sig[x] = (G.objects.degree(x), tuple(loops), tuple(profile))
    return sig


def _refine_colors(G: Groupoid, H: Groupoid) -> Optional[tuple]:
    """Shared Weisfeiler-style refinement; None when the partitions differ."""
    sigG, sigH = _object_signatures(G), _object_signatures(H)
    table = {}

    def code(value):
        return table.setdefault(value, len(table))

    colG = {x: None for x in sigG}
    colH = {y: None for y in sigH}
    for x in sorted_ids(sigG):
        colG[x] = code(("init", sigG[x]))
    for y in sorted_ids(sigH):
        colH[y] = code(("init", sigH[y]))
    for _ in range(max(2, G.n_objects)):
        if sorted(colG.values()) != sorted(colH.values()):
            return None
        nextG, nextH = {}, {}
        changed = False
        for col, src in ((nextG, (G, colG)), (nextH, (H, colH))):
            K, old = src
            for x in K.objects.vertices:
                around = sorted(
                    (old[y], _hom_size(K, x, y), _hom_size(K, y, x), K.objects.eq_or_adj(x, y))
                    for y in K.objects.vertices
                    if y != x
                    and (K.objects.eq_or_adj(x, y) or _hom_size(K, x, y) or _hom_size(K, y, x))
                )
                col[x] = ("step", old[x], tuple(around))
        remapG = {x: code(v) for x, v in sorted(nextG.items(), key=lambda kv: repr(kv[0]))}
        remapH = {y: code(v) for y, v in sorted(nextH.items(), key=lambda kv: repr(kv[0]))}
        changed = len(set(remapG.values())) != len(set(colG.values()))
        colG, colH = remapG, remapH
        if not changed:
            break
    if sorted(colG.values()) != sorted(colH.values()):
        return None
    return colG, colH


def _match_arrows(G: Groupoid, H: Groupoid, obj_map: dict) -> Optional[dict]:
    """Extend an object bijection to arrows, hom set by hom set."""
    pairs = []
    for x in G.objects.vertices:
        for y in G.objects.vertices:
            dom = G.hom(x, y)
            if not dom:
                continue
            cod = H.hom(obj_map[x], obj_map[y])
            if len(dom) != len(cod):
                return None
            pairs.append((dom, cod))
    f1 = {}
    used = set()

    def consistent(g, h):
        if G.is_unit_arrow(g) != H.is_unit_arrow(h):
            return False
        partner = f1.get(G.inv_of(g))
        if partner is not None and partner != H.inv_of(h):
            return False
        for g2, h2 in list(f1.items()):
            c = G.comp.get((g, g2))
            if c is not None:
                hc = H.comp.get((h, h2))
                if hc is None:
                    return False
                known = f1.get(c)
                if known is not None and known != hc:
                    return False
            c = G.comp.get((g2, g))
            if c is not None:
                hc = H.comp.get((h2, h))
                if hc is None:
                    return False
                known = f1.get(c)
                if known is not None and known != hc:
                    return False
        for g2 in G.arrows.neighbors(g):
            h2 = f1.get(g2)
            if h2 is not None and not H.arrows.eq_or_adj(h, h2):
                return False
        return True

    def forced_images(g, h):
        # closing assignments implied by composition with known arrows
        forced = []
        for g2, h2 in list(f1.items()):
            for key, hkey in (((g, g2), (h, h2)), ((g2, g), (h2, h))):
                c = G.comp.get(key)
                if c is not None and c not in f1 and c != g:
                    forced.append((c, H.comp[hkey]))
        return forced

    def assign(g, h, trail):
        stack = [(g, h)]
        while stack:
            a, b = stack.pop()
            cur = f1.get(a)
            if cur is not None:
                if cur != b:
                    return False
                continue
            if b in used or not consistent(a, b):
                return False
            f1[a] = b
            used.add(b)
            trail.append(a)
            stack.extend(forced_images(a, b))
            stack.append((G.inv_of(a), H.inv_of(b)))
        return True

    def undo(trail, mark):
        while len(trail) > mark:
            a = trail.pop()
            used.discard(f1.pop(a))

    order = [g for dom, _ in pairs for g in dom]
    cods = {}
    for dom, cod in pairs:
        for g in dom:
            cods[g] = cod

    def solve(i, trail):
        while i < len(order) and order[i] in f1:
            i += 1
        if i == len(order):
            return True
        g = order[i]
        for h in cods[g]:
            if h in used:
                continue
            mark = len(trail)
            if assign(g, h, trail) and solve(i + 1, trail):
                return True
            undo(trail, mark)
        return False

    if not solve(0, []):
        return None
    return f1


def check_isomorphism(G: Groupoid, H: Groupoid) -> Optional[IsoPair]:
    """Search for a strict isomorphism; None is an exhaustive negative."""
    if G.n_objects != H.n_objects or G.n_arrows != H.n_arrows:
        return None
    if G.objects.n_edges != H.objects.n_edges or G.arrows.n_edges != H.arrows.n_edges:
        return None
    colors = _refine_colors(G, H)
    if colors is None:
        return None
    colG, colH = colors
    by_colH = {}
    for y in H.objects.vertices:
        by_colH.setdefault(colH[y], []).append(y)
    # most constrained color first, canonical inside a color
    class_size = {c: len(v) for c, v in by_colH.items()}
    order = sorted(G.objects.vertices, key=lambda x: (class_size[colG[x]], repr(colG[x]), repr(x)))
    obj_map = {}
    used = set()

    def obj_consistent(x, y):
        for x2, y2 in obj_map.items():
            if G.objects.eq_or_adj(x, x2) != H.objects.eq_or_adj(y, y2):
                return False
            if _hom_size(G, x, x2) != _hom_size(H, y, y2):
                return False
            if _hom_size(G, x2, x) != _hom_size(H, y2, y):
                return False
        return True

    result = {}

    def place(i):
        if i == len(order):
            f1 = _match_arrows(G, H, obj_map)
            if f1 is not None:
                result["f1"] = dict(f1)
                result["f0"] = dict(obj_map)
                return True
            return False
        x = order[i]
        for y in by_colH[colG[x]]:
            if y in used or not obj_consistent(x, y):
                continue
            obj_map[x] = y
            used.add(y)
            if place(i + 1):
                return True
            del obj_map[x]
            used.discard(y)
        return False

    if not place(0):
        return None
    f0, f1 = result["f0"], result["f1"]
    forward = Homomorphism.build(G, H, f0, f1)
    backward = Homomorphism.build(H, G,
                                  {v: k for k, v in f0.items()},
                                  {v: k for k, v in f1.items()})
    bad = validate_homomorphism(forward) or validate_homomorphism(backward)
    if bad:
        raise OrbiError("isomorphism search produced an invalid map", witness=bad[0])
    return IsoPair(forward, backward)
