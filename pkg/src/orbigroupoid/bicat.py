"""Spans with an invertible leg, their composites, and two-cell calculus.

A span ``G <- K -> H`` whose left leg is an essential equivalence is a
generalized map from ``G`` to ``H``.  Composition bridges two spans over
their shared middle groupoid; two-cell diagrams between parallel spans
are compared with an explicit witness, or a witness is searched for over
the double comma construction.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional

import numpy as np

from ._tables import tables_for
from .combspace import CombSpace
from .errors import BadWitness, CodomainMismatch
from .gmap import enumerate_homomorphisms
from .groupoid import Groupoid, Violation, full_subgroupoid, quotient
from .morphism import (Homomorphism, NatTrans, check_essential_equivalence,
                       check_isomorphism, compose_homomorphisms,
                       identity_homomorphism, validate_homomorphism,
                       validate_nat_trans)

__all__ = [
    "ComposedSpan",
    "MoritaReport",
    "Span",
    "TwoCellDiagram",
    "TwoCellWitness",
    "compose_spans",
    "find_two_cell_witness",
    "identity_span",
    "morita_equivalent",
    "two_cells_equal",
    "validate_span",
    "validate_two_cell",
]


# --------------------------------------------------------------------------
# spans


@dataclass(frozen=True, eq=False)
class Span:
    """``source <- apex -> target``; the left leg should be invertible up
    to essential equivalence (validate_span checks E1 and E2)."""

    left: Homomorphism
    right: Homomorphism

    @property
    def apex(self) -> Groupoid:
        return self.left.source

    @property
    def source(self) -> Groupoid:
        return self.left.target

    @property
    def target(self) -> Groupoid:
        return self.right.target


def identity_span(G: Groupoid) -> Span:
    i = identity_homomorphism(G)
    return Span(i, i)


def validate_span(s: Span, limit: int = 20) -> tuple:
    """Structure, both legs, then the E1/E2 conditions on the left leg."""
    if s.left.source is not s.right.source:
        return (Violation("structure", None, "span legs start at different apexes"),)
    out = []
    out.extend(validate_homomorphism(s.left, limit=limit))
    out.extend(validate_homomorphism(s.right, limit=limit))
    if not out:
        rep = check_essential_equivalence(s.left)
        if not rep.e1:
            out.append(Violation("e1", rep.e1_witness,
                                 "left leg misses an object up to arrows"))
        if not rep.e2:
            out.append(Violation("e2", rep.e2_witness,
                                 "left leg is not bijective on a hom set"))
    return tuple(out[:limit])


def _pointwise_edges(ids, columns):
    """Edges of a product-style space: ids are tuples, ``columns`` pairs an
    index array with the eq-or-adjacent matrix of the factor it lives in."""
    m = len(ids)
    if m == 0:
        return []
    keep = np.ones((m, m), dtype=bool)
    for col, eqadj in columns:
        keep &= eqadj[np.ix_(col, col)]
    np.fill_diagonal(keep, False)
    return [(ids[i], ids[j]) for i, j in zip(*np.nonzero(np.triu(keep)))]


@dataclass(frozen=True, eq=False)
class ComposedSpan:
    """A composite span plus its projections onto the two factors."""

    span: Span
    to_first: Homomorphism
    to_second: Homomorphism


def compose_spans(s1: Span, s2: Span) -> ComposedSpan:
    """Composite over the middle groupoid.

    Apex objects are bridges ``(k1, h, k2)`` with ``h`` an arrow from
    ``s1.right(k1)`` to ``s2.left(k2)``; an arrow ``(a1, h, a2)`` records
    the bridge at its source, the bridge at the target being conjugate.
    """
    if s1.target is not s2.source:
        raise CodomainMismatch("spans do not chain: middle groupoids differ")
    K1, K2, H = s1.apex, s2.apex, s1.target
    phi0, phi1 = s1.right.f0.mapping, s1.right.f1.mapping
    ups0, ups1 = s2.left.f0.mapping, s2.left.f1.mapping
    h_inv, h_comp = H.inv.mapping, H.comp

    objs = [(k1, h, k2)
            for k1 in K1.objects.vertices
            for k2 in K2.objects.vertices
            for h in H.hom(phi0[k1], ups0[k2])]

    src, tgt = {}, {}
    arr_ids = []
    for (k1, h, k2) in objs:
        for a1 in K1.arrows_from(k1):
            g1 = h_comp[(h_inv[phi1[a1]], h)]
            for a2 in K2.arrows_from(k2):
                aid = (a1, h, a2)
                arr_ids.append(aid)
                src[aid] = (k1, h, k2)
                tgt[aid] = (K1.tgt.mapping[a1], h_comp[(g1, ups1[a2])],
                            K2.tgt.mapping[a2])

    K1t, K2t, Ht = tables_for(K1), tables_for(K2), tables_for(H)
    oc1 = np.array([K1t.obj_index[o[0]] for o in objs], dtype=np.intp)
    och = np.array([Ht.arr_index[o[1]] for o in objs], dtype=np.intp)
    oc2 = np.array([K2t.obj_index[o[2]] for o in objs], dtype=np.intp)
    obj_edges = _pointwise_edges(objs, [(oc1, K1t.obj_eqadj),
                                        (och, Ht.arr_eqadj),
                                        (oc2, K2t.obj_eqadj)])
    ac1 = np.array([K1t.arr_index[a[0]] for a in arr_ids], dtype=np.intp)
    ach = np.array([Ht.arr_index[a[1]] for a in arr_ids], dtype=np.intp)
    ac2 = np.array([K2t.arr_index[a[2]] for a in arr_ids], dtype=np.intp)
    arr_edges = _pointwise_edges(arr_ids, [(ac1, K1t.arr_eqadj),
                                           (ach, Ht.arr_eqadj),
                                           (ac2, K2t.arr_eqadj)])

    unit = {(k1, h, k2): (K1.unit.mapping[k1], h, K2.unit.mapping[k2])
            for (k1, h, k2) in objs}
    inv = {aid: (K1.inv.mapping[aid[0]], tgt[aid][1], K2.inv.mapping[aid[2]])
           for aid in arr_ids}
    by_src = {}
    for aid in arr_ids:
        by_src.setdefault(src[aid], []).append(aid)
    comp = {}
    for aid in arr_ids:
        for bid in by_src.get(tgt[aid], ()):
            comp[(aid, bid)] = (K1.comp[(aid[0], bid[0])], aid[1],
                                K2.comp[(aid[2], bid[2])])

    apex = Groupoid.build(CombSpace.build(objs, obj_edges),
                          CombSpace.build(arr_ids, arr_edges),
                          src, tgt, unit, inv, comp)
    to_first = Homomorphism.build(apex, K1,
                                  {o: o[0] for o in objs},
                                  {a: a[0] for a in arr_ids})
    to_second = Homomorphism.build(apex, K2,
                                   {o: o[2] for o in objs},
                                   {a: a[2] for a in arr_ids})
    return ComposedSpan(Span(compose_homomorphisms(to_first, s1.left),
                             compose_homomorphisms(to_second, s2.right)),
                        to_first, to_second)


# --------------------------------------------------------------------------
# two-cell diagrams


@dataclass(frozen=True, eq=False)
class TwoCellDiagram:
    """A diagram presenting a two-cell between the parallel spans ``top``
    and ``bottom``: maps ``nu`` / ``nu_prime`` out of a common apex and
    transformations ``alpha`` (source side) and ``beta`` (target side)."""

    top: Span
    bottom: Span
    apex: Groupoid
    nu: Homomorphism
    nu_prime: Homomorphism
    alpha: NatTrans
    beta: NatTrans


@dataclass(frozen=True, eq=False)
class TwoCellWitness:
    """Shared refinement exhibiting two diagrams as the same two-cell."""

    apex: Groupoid
    lambda1: Homomorphism
    lambda2: Homomorphism
    gamma: NatTrans
    gamma_prime: NatTrans


def _same_hom(f: Homomorphism, g: Homomorphism) -> bool:
    return (f.source is g.source and f.target is g.target
            and f.f0.mapping == g.f0.mapping and f.f1.mapping == g.f1.mapping)


def validate_two_cell(d: TwoCellDiagram, limit: int = 20) -> tuple:
    out = []
    if d.nu.source is not d.apex or d.nu.target is not d.top.apex:
        out.append(Violation("structure", None, "nu must map the apex into the top span"))
    if d.nu_prime.source is not d.apex or d.nu_prime.target is not d.bottom.apex:
        out.append(Violation("structure", None, "nu_prime must map the apex into the bottom span"))
    if out:
        return tuple(out)
    out.extend(validate_homomorphism(d.nu, limit=limit))
    out.extend(validate_homomorphism(d.nu_prime, limit=limit))
    if out:
        return tuple(out[:limit])
    if not _same_hom(d.alpha.source, compose_homomorphisms(d.nu, d.top.left)) or \
       not _same_hom(d.alpha.target, compose_homomorphisms(d.nu_prime, d.bottom.left)):
        out.append(Violation("structure", None, "alpha does not compare the left composites"))
    if not _same_hom(d.beta.source, compose_homomorphisms(d.nu, d.top.right)) or \
       not _same_hom(d.beta.target, compose_homomorphisms(d.nu_prime, d.bottom.right)):
        out.append(Violation("structure", None, "beta does not compare the right composites"))
    out.extend(validate_nat_trans(d.alpha, limit=limit))
    out.extend(validate_nat_trans(d.beta, limit=limit))
    return tuple(out[:limit])


def _require_same_boundary(d1: TwoCellDiagram, d2: TwoCellDiagram):
    if not (_same_hom(d1.top.left, d2.top.left)
            and _same_hom(d1.top.right, d2.top.right)
            and _same_hom(d1.bottom.left, d2.bottom.left)
            and _same_hom(d1.bottom.right, d2.bottom.right)):
        raise BadWitness("diagrams do not share their boundary spans")


def two_cells_equal(d1: TwoCellDiagram, d2: TwoCellDiagram,
                    witness: TwoCellWitness) -> tuple:
    """Check the four pasting conditions under an explicit witness.

    Returns ``(True, None)`` or ``(False, i)`` with ``i`` the first failing
    condition: 1 source-side composability, 2 source-side equality,
    3 target-side composability, 4 target-side equality.  Structurally
    unusable witnesses raise :class:`BadWitness`.
    """
    _require_same_boundary(d1, d2)
    lam1, lam2 = witness.lambda1, witness.lambda2
    if lam1.source is not witness.apex or lam1.target is not d1.apex:
        raise BadWitness("lambda1 must map the witness apex into the first diagram")
    if lam2.source is not witness.apex or lam2.target is not d2.apex:
        raise BadWitness("lambda2 must map the witness apex into the second diagram")
    if validate_homomorphism(lam1, limit=1) or validate_homomorphism(lam2, limit=1):
        raise BadWitness("witness legs are not homomorphisms")
    if not (check_essential_equivalence(lam1).ok
            and check_essential_equivalence(lam2).ok):
        raise BadWitness("witness legs must be essential equivalences")
    gam, gamp = witness.gamma, witness.gamma_prime
    if not (_same_hom(gam.source, compose_homomorphisms(lam1, d1.nu))
            and _same_hom(gam.target, compose_homomorphisms(lam2, d2.nu))):
        raise BadWitness("gamma does not compare nu composites")
    if not (_same_hom(gamp.source, compose_homomorphisms(lam1, d1.nu_prime))
            and _same_hom(gamp.target, compose_homomorphisms(lam2, d2.nu_prime))):
        raise BadWitness("gamma_prime does not compare nu_prime composites")
    if validate_nat_trans(gam, limit=1) or validate_nat_trans(gamp, limit=1):
        raise BadWitness("witness transformations are not natural")

    G, H = d1.top.source, d1.top.target
    ups1, ups2 = d1.top.left.f1, d1.bottom.left.f1
    phi1, phi2 = d1.top.right.f1, d1.bottom.right.f1
    ms = witness.apex.objects.vertices
    sides = (
        (1, 2, G, ups1, ups2, d1.alpha, d2.alpha),
        (3, 4, H, phi1, phi2, d1.beta, d2.beta),
    )
    for comp_cond, eq_cond, T, top_f1, bot_f1, t1, t2 in sides:
        pairs = []
        for m in ms:
            lhs = T.comp.get((top_f1(gam.at(m)), t2.at(lam2.f0(m))))
            rhs = T.comp.get((t1.at(lam1.f0(m)), bot_f1(gamp.at(m))))
            if lhs is None or rhs is None:
                return (False, comp_cond)
            pairs.append((lhs, rhs))
        if any(lhs != rhs for lhs, rhs in pairs):
            return (False, eq_cond)
    return (True, None)


def find_two_cell_witness(d1: TwoCellDiagram, d2: TwoCellDiagram,
                          bound: int = 12) -> Optional[TwoCellWitness]:
    """Search the double comma construction for a witness of size <= bound.

    Objects pair an object of each apex with bridges in both span apexes;
    the tautological transformations read the bridges off.  Components on
    which the pasting conditions hold are combined, smallest unions first,
    until the projections pass E1 and E2.
    """
    _require_same_boundary(d1, d2)
    L1, L2 = d1.apex, d2.apex
    K, Kp = d1.top.apex, d1.bottom.apex
    n1_0, n1_1 = d1.nu.f0.mapping, d1.nu.f1.mapping
    n2_0, n2_1 = d2.nu.f0.mapping, d2.nu.f1.mapping
    p1_0, p1_1 = d1.nu_prime.f0.mapping, d1.nu_prime.f1.mapping
    p2_0, p2_1 = d2.nu_prime.f0.mapping, d2.nu_prime.f1.mapping

    objs = []
    for l1 in L1.objects.vertices:
        for l2 in L2.objects.vertices:
            ks = K.hom(n1_0[l1], n2_0[l2])
            if not ks:
                continue
            for kp in Kp.hom(p1_0[l1], p2_0[l2]):
                for k in ks:
                    objs.append((l1, k, l2, kp))
    if not objs:
        return None

    k_inv, k_comp = K.inv.mapping, K.comp
    kp_inv, kp_comp = Kp.inv.mapping, Kp.comp
    src, tgt = {}, {}
    arr_ids = []
    for (l1, k, l2, kp) in objs:
        for a1 in L1.arrows_from(l1):
            kt1 = k_comp[(k_inv[n1_1[a1]], k)]
            kpt1 = kp_comp[(kp_inv[p1_1[a1]], kp)]
            for a2 in L2.arrows_from(l2):
                aid = (a1, k, kp, a2)
                arr_ids.append(aid)
                src[aid] = (l1, k, l2, kp)
                tgt[aid] = (L1.tgt.mapping[a1], k_comp[(kt1, n2_1[a2])],
                            L2.tgt.mapping[a2], kp_comp[(kpt1, p2_1[a2])])

    L1t, L2t = tables_for(L1), tables_for(L2)
    Kt, Kpt = tables_for(K), tables_for(Kp)
    obj_edges = _pointwise_edges(objs, [
        (np.array([L1t.obj_index[o[0]] for o in objs], dtype=np.intp), L1t.obj_eqadj),
        (np.array([Kt.arr_index[o[1]] for o in objs], dtype=np.intp), Kt.arr_eqadj),
        (np.array([L2t.obj_index[o[2]] for o in objs], dtype=np.intp), L2t.obj_eqadj),
        (np.array([Kpt.arr_index[o[3]] for o in objs], dtype=np.intp), Kpt.arr_eqadj),
    ])
    arr_edges = _pointwise_edges(arr_ids, [
        (np.array([L1t.arr_index[a[0]] for a in arr_ids], dtype=np.intp), L1t.arr_eqadj),
        (np.array([Kt.arr_index[a[1]] for a in arr_ids], dtype=np.intp), Kt.arr_eqadj),
        (np.array([Kpt.arr_index[a[2]] for a in arr_ids], dtype=np.intp), Kpt.arr_eqadj),
        (np.array([L2t.arr_index[a[3]] for a in arr_ids], dtype=np.intp), L2t.arr_eqadj),
    ])

    unit = {o: (L1.unit.mapping[o[0]], o[1], o[3], L2.unit.mapping[o[2]])
            for o in objs}
    inv = {}
    by_src = {}
    for aid in arr_ids:
        by_src.setdefault(src[aid], []).append(aid)
        t = tgt[aid]
        inv[aid] = (L1.inv.mapping[aid[0]], t[1], t[3], L2.inv.mapping[aid[3]])
    comp = {}
    for aid in arr_ids:
        for bid in by_src.get(tgt[aid], ()):
            comp[(aid, bid)] = (L1.comp[(aid[0], bid[0])], aid[1], aid[2],
                                L2.comp[(aid[3], bid[3])])
    D = Groupoid.build(CombSpace.build(objs, obj_edges),
                       CombSpace.build(arr_ids, arr_edges),
                       src, tgt, unit, inv, comp)

    G, H = d1.top.source, d1.top.target
    ups1, ups2 = d1.top.left.f1, d1.bottom.left.f1
    phi1, phi2 = d1.top.right.f1, d1.bottom.right.f1

    def pastes(o):
        l1, k, l2, kp = o
        lhs = G.comp.get((ups1(k), d2.alpha.at(l2)))
        rhs = G.comp.get((d1.alpha.at(l1), ups2(kp)))
        if lhs is None or lhs != rhs:
            return False
        lhs = H.comp.get((phi1(k), d2.beta.at(l2)))
        rhs = H.comp.get((d1.beta.at(l1), phi2(kp)))
        return lhs is not None and lhs == rhs

    comps = [c for c in D.objects.components() if all(pastes(o) for o in c)]
    options = []
    for r in range(1, len(comps) + 1):
        for idx in combinations(range(len(comps)), r):
            size = sum(len(comps[i]) for i in idx)
            if size <= bound:
                options.append((size, idx))
    options.sort()

    for _, idx in options:
        chosen = [o for i in idx for o in comps[i]]
        M = full_subgroupoid(D, chosen)
        lam1 = Homomorphism.build(M, L1,
                                  {o: o[0] for o in M.objects.vertices},
                                  {a: a[0] for a in M.arrows.vertices})
        lam2 = Homomorphism.build(M, L2,
                                  {o: o[2] for o in M.objects.vertices},
                                  {a: a[3] for a in M.arrows.vertices})
        if not (check_essential_equivalence(lam1).ok
                and check_essential_equivalence(lam2).ok):
            continue
        gamma = NatTrans.build(compose_homomorphisms(lam1, d1.nu),
                               compose_homomorphisms(lam2, d2.nu),
                               {o: o[1] for o in M.objects.vertices})
        gamma_prime = NatTrans.build(compose_homomorphisms(lam1, d1.nu_prime),
                                     compose_homomorphisms(lam2, d2.nu_prime),
                                     {o: o[3] for o in M.objects.vertices})
        return TwoCellWitness(M, lam1, lam2, gamma, gamma_prime)
    return None


# --------------------------------------------------------------------------
# equivalence search


@dataclass(frozen=True, eq=False)
class MoritaReport:
    verdict: str  # EQUIVALENT / FAST_REJECT / NOT_FOUND
    span: Optional[Span] = None
    detail: str = ""


def _quotient_signature(G: Groupoid):
    q = quotient(G)
    labels = q.labels()
    verts = sorted(labels.values())
    edges = sorted(tuple(sorted((labels[u], labels[v])))
                   for u, v in q.space.edges)
    return (verts, edges)


def morita_equivalent(G: Groupoid, H: Groupoid,
                      bound: Optional[int] = None) -> MoritaReport:
    """Decide equivalence-up-to-essential-equivalence at desk scale.

    A strict isomorphism settles it; otherwise the labeled orbit graphs
    act as a cheap obstruction, and finally essential equivalences are
    searched in both directions (``bound`` caps each enumeration).
    NOT_FOUND is a bounded verdict, not a proof of inequivalence.
    """
    if (G.n_objects, G.n_arrows) == (H.n_objects, H.n_arrows):
        iso = check_isomorphism(G, H)
        if iso is not None:
            return MoritaReport("EQUIVALENT",
                                Span(identity_homomorphism(G), iso.forward),
                                "strict isomorphism")
    if _quotient_signature(G) != _quotient_signature(H):
        return MoritaReport("FAST_REJECT", None,
                            "labeled orbit graphs are not isomorphic")
    for f in enumerate_homomorphisms(G, H, limit=bound):
        if check_essential_equivalence(f).ok:
            return MoritaReport("EQUIVALENT",
                                Span(identity_homomorphism(G), f),
                                "essential equivalence onto the target")
    for f in enumerate_homomorphisms(H, G, limit=bound):
        if check_essential_equivalence(f).ok:
            return MoritaReport("EQUIVALENT",
                                Span(f, identity_homomorphism(H)),
                                "essential equivalence onto the source")
    return MoritaReport("NOT_FOUND", None,
                        "no essential equivalence within the bound")
