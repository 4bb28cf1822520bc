"""Inertia groupoid: loops as objects, conjugation as arrows.

``verify_phi_properties`` compares it with the groupoid of order-n
symmetries: the comparison functor sends a map to its generator image and
a transformation to its single component.  At the least common multiple
of the loop orders the comparison is an isomorphism.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from ._tables import tables_for
from .combspace import CombSpace
from .gmap import build_gmap
from .groupoid import FiniteGroup, Groupoid, build_point_groupoid
from .morphism import Homomorphism, validate_homomorphism

__all__ = [
    "PhiReport",
    "build_inertia",
    "minimal_exponent",
    "phi_functor",
    "verify_inertia_iso",
    "verify_phi_properties",
]


def build_inertia(G: Groupoid) -> Groupoid:
    """The groupoid whose objects are the loops of ``G``.

    An arrow ``(h, g)`` conjugates the loop ``g`` at the source of ``h``
    to a loop at its target; nearness is read off pairwise.
    """
    Gt = tables_for(G)
    src_m, tgt_m = G.src.mapping, G.tgt.mapping
    inv_m, comp_m = G.inv.mapping, G.comp

    loops = [g for g in G.arrows.vertices if src_m[g] == tgt_m[g]]
    loop_set = set(loops)
    obj_edges = [e for e in G.arrows.edges
                 if e[0] in loop_set and e[1] in loop_set]

    loops_at = {}
    for g in loops:
        loops_at.setdefault(src_m[g], []).append(g)

    arr_ids, src, tgt = [], {}, {}
    for h in G.arrows.vertices:
        for g in loops_at.get(src_m[h], ()):
            aid = (h, g)
            arr_ids.append(aid)
            src[aid] = g
            tgt[aid] = comp_m[(comp_m[(inv_m[h], g)], h)]

    ai = Gt.arr_index
    vec = np.array([[ai[h], ai[g]] for h, g in arr_ids],
                   dtype=np.int32).reshape((len(arr_ids), 2))
    adj = kernels.pointwise_eqadj(vec, Gt.arr_eqadj)
    arr_edges = [(arr_ids[i], arr_ids[j])
                 for i, j in zip(*np.nonzero(np.triu(adj, 1)))]

    unit = {g: (G.unit.mapping[src_m[g]], g) for g in loops}
    inv, comp = {}, {}
    by_src_loop = {}
    for aid in arr_ids:
        by_src_loop.setdefault(src[aid], []).append(aid)
    for aid in arr_ids:
        h, g = aid
        inv[aid] = (inv_m[h], tgt[aid])
        for bid in by_src_loop.get(tgt[aid], ()):
            comp[(aid, bid)] = (comp_m[(h, bid[0])], g)

    return Groupoid.build(
        CombSpace.build(loops, obj_edges),
        CombSpace.build(arr_ids, arr_edges),
        src, tgt, unit, inv, comp,
    )


def minimal_exponent(G: Groupoid) -> int:
    """Least n with every loop to the n-th power a unit."""
    n = 1
    src_m, tgt_m = G.src.mapping, G.tgt.mapping
    for g in G.arrows.vertices:
        if src_m[g] == tgt_m[g]:
            n = math.lcm(n, G.loop_order(g))
    return n


def _phi_parts(G: Groupoid, n: Optional[int]):
    if n is None:
        n = minimal_exponent(G)
    P = build_point_groupoid(FiniteGroup.cyclic(n))
    M = build_gmap(P, G)
    L = build_inertia(G)
    sigma = 1 if n >= 2 else 0
    f0 = {fid: fid[sigma] for fid in M.base.objects.vertices}
    f1 = {aid: (aid[1][0], aid[0][sigma]) for aid in M.base.arrows.vertices}
    phi = Homomorphism.build(M.base, L, f0, f1)
    return n, M, L, phi


def phi_functor(G: Groupoid, n: Optional[int] = None) -> Homomorphism:
    """Comparison map from order-n symmetries into the inertia groupoid."""
    return _phi_parts(G, n)[3]


@dataclass(frozen=True)
class PhiReport:
    """What the comparison functor does at a given order."""

    n: int
    valid: bool
    injective_on_objects: bool
    surjective_on_objects: bool
    full: bool
    faithful: bool
    gmap_objects: int
    gmap_arrows: int
    inertia_objects: int
    inertia_arrows: int

    @property
    def embedding(self) -> bool:
        return (self.valid and self.injective_on_objects
                and self.full and self.faithful)

    @property
    def isomorphism(self) -> bool:
        # full + faithful + a bijection on objects pins every hom set
        return self.embedding and self.surjective_on_objects


def verify_phi_properties(G: Groupoid, n: Optional[int] = None) -> PhiReport:
    n, M, L, phi = _phi_parts(G, n)
    valid = not validate_homomorphism(phi)
    f0m, f1m = phi.f0.mapping, phi.f1.mapping

    objs = M.base.objects.vertices
    images = [f0m[v] for v in objs]
    injective = len(set(images)) == len(images)
    surjective = set(images) == set(L.objects.vertices)

    full = True
    faithful = True
    for f in objs:
        for fp in objs:
            hom = M.base.hom(f, fp)
            sent = {f1m[a] for a in hom}
            if len(sent) != len(hom):
                faithful = False
            if sent != set(L.hom(f0m[f], f0m[fp])):
                full = False

    return PhiReport(
        n, valid, injective, surjective, full, faithful,
        len(objs), len(M.base.arrows.vertices),
        len(L.objects.vertices), len(L.arrows.vertices),
    )


def verify_inertia_iso(G: Groupoid, n: Optional[int] = None) -> PhiReport:
    """Run the comparison at the minimal exponent (or a given order)."""
    return verify_phi_properties(G, n)
