"""Mapping groupoids: spaces of homomorphisms with transformation arrows.

``enumerate_homomorphisms`` is a pruning backtracker over arrow images; it
returns exactly the functors that the brute-force kernel scan accepts, in
the same canonical order, and the test suite holds it to that.  On top of
it ``build_gmap`` assembles the mapping groupoid: one object per functor,
one arrow per transformation, with nearness read off pointwise from the
target.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

import numpy as np

from . import kernels
from ._tables import GroupoidTables, tables_for
from .combspace import CombSpace
from .errors import CodomainMismatch, OrbiError, UndefinedVertex
from .groupoid import Groupoid, full_subgroupoid, quotient
from .morphism import (
    Homomorphism,
    NatTrans,
    validate_homomorphism,
    validate_nat_trans,
)

__all__ = [
    "MappingGroupoid",
    "GmapComponent",
    "build_gmap",
    "component_report",
    "enumerate_homomorphisms",
    "enumerate_nat_trans",
    "functor_rows",
    "nat_rows",
]


# ------------------------------------------------------------- functor search

class _FunctorSearch:
    """Backtracker over arrow assignments.

    Constraint propagation: assigning an image fixes endpoint objects, the
    unit arrows there, the inverse, and every composite with an already
    assigned factor; products force missing factors.  Nearness to assigned
    neighbours is checked on the spot.
    """

    def __init__(self, Gt: GroupoidTables, Ht: GroupoidTables):
        self.n_g = Gt.n_arr
        self.n_obj = Gt.n_obj
        self.g_src = Gt.src.tolist()
        self.g_tgt = Gt.tgt.tolist()
        self.g_inv = Gt.inv.tolist()
        self.g_unit = Gt.unit.tolist()
        self.g_unit_flag = Gt.unit_flag.tolist()
        self.h_src = Ht.src.tolist()
        self.h_tgt = Ht.tgt.tolist()
        self.h_inv = Ht.inv.tolist()
        self.h_unit = Ht.unit.tolist()
        self.h_unit_flag = Ht.unit_flag.tolist()
        self.h_comp = Ht.comp
        self.h_eqadj = Ht.arr_eqadj

        adj = [[] for _ in range(self.n_g)]
        for u, v in Gt.arr_edge_pairs:
            adj[int(u)].append(int(v))
            adj[int(v)].append(int(u))
        self.adj = [tuple(s) for s in adj]

        right = [[] for _ in range(self.n_g)]  # g first factor: (j, k)
        left = [[] for _ in range(self.n_g)]   # g second factor: (i, k)
        prod = [[] for _ in range(self.n_g)]   # g composite: (i, j)
        for i, j, k in Gt.comp_triples:
            right[int(i)].append((int(j), int(k)))
            left[int(j)].append((int(i), int(k)))
            prod[int(k)].append((int(i), int(j)))
        self.right = [tuple(s) for s in right]
        self.left = [tuple(s) for s in left]
        self.prod = [tuple(s) for s in prod]

        by_st, by_s, by_t = {}, {}, {}
        units = []
        for h in range(Ht.n_arr):
            s, t = self.h_src[h], self.h_tgt[h]
            by_st.setdefault((s, t), []).append(h)
            by_s.setdefault(s, []).append(h)
            by_t.setdefault(t, []).append(h)
            if self.h_unit_flag[h]:
                units.append(h)
        self.by_st = {k: tuple(v) for k, v in by_st.items()}
        self.by_s = {k: tuple(v) for k, v in by_s.items()}
        self.by_t = {k: tuple(v) for k, v in by_t.items()}
        self.h_units = tuple(units)
        self.h_all = tuple(range(Ht.n_arr))

    def _assign(self, g, h, f1, f0, trail) -> bool:
        queue = [(g, h)]
        qi = 0
        h_comp = self.h_comp
        h_inv = self.h_inv
        while qi < len(queue):
            g, h = queue[qi]
            qi += 1
            cur = f1[g]
            if cur != -1:
                if cur != h:
                    return False
                continue
            if h < 0:
                # a forced composite fell outside the target's table
                return False
            if self.g_unit_flag[g] and not self.h_unit_flag[h]:
                return False
            for gx, hx in ((self.g_src[g], self.h_src[h]),
                           (self.g_tgt[g], self.h_tgt[h])):
                cur0 = f0[gx]
                if cur0 == -1:
                    f0[gx] = hx
                    trail.append(-gx - 1)
                    queue.append((self.g_unit[gx], self.h_unit[hx]))
                elif cur0 != hx:
                    return False
            f1[g] = h
            trail.append(g)
            for nb in self.adj[g]:
                hn = f1[nb]
                if hn != -1 and not self.h_eqadj[h, hn]:
                    return False
            queue.append((self.g_inv[g], h_inv[h]))
            for j, k in self.right[g]:
                fj = f1[j]
                if fj != -1:
                    queue.append((k, int(h_comp[h, fj])))
                else:
                    fk = f1[k]
                    if fk != -1:
                        queue.append((j, int(h_comp[h_inv[h], fk])))
            for i, k in self.left[g]:
                fi = f1[i]
                if fi != -1:
                    queue.append((k, int(h_comp[fi, h])))
                else:
                    fk = f1[k]
                    if fk != -1:
                        queue.append((i, int(h_comp[fk, h_inv[h]])))
            for i, j in self.prod[g]:
                fi, fj = f1[i], f1[j]
                if fi != -1 and fj != -1:
                    if int(h_comp[fi, fj]) != h:
                        return False
                elif fi != -1:
                    queue.append((j, int(h_comp[h_inv[fi], h])))
                elif fj != -1:
                    queue.append((i, int(h_comp[h, h_inv[fj]])))
        return True

    @staticmethod
    def _undo(f1, f0, trail, mark):
        while len(trail) > mark:
            t = trail.pop()
            if t >= 0:
                f1[t] = -1
            else:
                f0[-t - 1] = -1

    def _candidates(self, g, f1, f0):
        x, y = f0[self.g_src[g]], f0[self.g_tgt[g]]
        if x != -1 and y != -1:
            base = self.by_st.get((x, y), ())
        elif x != -1:
            base = self.by_s.get(x, ())
        elif y != -1:
            base = self.by_t.get(y, ())
        elif self.g_unit_flag[g]:
            base = self.h_units
        else:
            base = self.h_all
        if self.g_unit_flag[g] and base is not self.h_units:
            base = tuple(h for h in base if self.h_unit_flag[h])
        return base

    def _pick(self, f1, f0):
        best, best_n = -1, None
        for g in range(self.n_g):
            if f1[g] != -1:
                continue
            n = len(self._candidates(g, f1, f0))
            if n == 0:
                return g
            if best_n is None or n < best_n:
                best, best_n = g, n
                if n == 1:
                    break
        return best

    def run(self, pin_obj=None, pin_arr=None, limit=None):
        f1 = [-1] * self.n_g
        f0 = [-1] * self.n_obj
        trail = []
        for x, hx in (pin_obj or {}).items():
            if not self._assign(self.g_unit[x], self.h_unit[hx], f1, f0, trail):
                return []
        for g, h in (pin_arr or {}).items():
            if not self._assign(g, h, f1, f0, trail):
                return []
        results = []

        def solve():
            if limit is not None and len(results) >= limit:
                return
            g = self._pick(f1, f0)
            if g == -1:
                results.append(tuple(f1))
                return
            for h in self._candidates(g, f1, f0):
                mark = len(trail)
                if self._assign(g, h, f1, f0, trail):
                    solve()
                self._undo(f1, f0, trail, mark)
                if limit is not None and len(results) >= limit:
                    return

        solve()
        results.sort()
        return results


# ----------------------------------------------------------------- nat search

class _NatSearch:
    """Transformations for a fixed functor pair.

    Within each arrow-connected component of the source, the value at the
    root determines the rest by naturality; remaining arrows and the
    nearness edges are verified afterwards.
    """

    def __init__(self, Gt: GroupoidTables, Ht: GroupoidTables):
        self.Gt, self.Ht = Gt, Ht
        self.n_obj = Gt.n_obj
        self.g_src = Gt.src.tolist()
        self.g_tgt = Gt.tgt.tolist()
        self.h_comp = Ht.comp
        self.h_inv = Ht.inv.tolist()
        self.h_eqadj = Ht.arr_eqadj
        self.obj_edges = [(int(u), int(v)) for u, v in Gt.obj_edge_pairs]

        by_st = {}
        for h in range(Ht.n_arr):
            by_st.setdefault((int(Ht.src[h]), int(Ht.tgt[h])), []).append(h)
        self.by_st = {k: tuple(v) for k, v in by_st.items()}

        out = [[] for _ in range(self.n_obj)]
        for g in range(Gt.n_arr):
            out[self.g_src[g]].append(g)
        roots, tree = [], []
        seen = [False] * self.n_obj
        for r in range(self.n_obj):
            if seen[r]:
                continue
            roots.append(r)
            seen[r] = True
            frontier = [r]
            while frontier:
                x = frontier.pop()
                for g in out[x]:
                    y = self.g_tgt[g]
                    if not seen[y]:
                        seen[y] = True
                        tree.append(g)
                        frontier.append(y)
        self.roots = roots
        self.tree = tree
        tree_set = set(tree)
        self.check_arrows = [g for g in range(Gt.n_arr) if g not in tree_set]

    def run(self, f0, f1, f0p, f1p):
        cands = []
        for r in self.roots:
            opts = self.by_st.get((f0[r], f0p[r]), ())
            if not opts:
                return []
            cands.append(opts)
        h_comp = self.h_comp
        h_inv = self.h_inv
        alpha = [-1] * self.n_obj
        results = []

        def fill(level):
            if level == len(self.roots):
                for g in self.check_arrows:
                    lft = h_comp[f1[g], alpha[self.g_tgt[g]]]
                    if lft < 0 or lft != h_comp[alpha[self.g_src[g]], f1p[g]]:
                        return
                for u, v in self.obj_edges:
                    if not self.h_eqadj[alpha[u], alpha[v]]:
                        return
                results.append(tuple(alpha))
                return
            for c in cands[level]:
                alpha[self.roots[level]] = c
                ok = True
                for g in self.tree:
                    # only tree arrows inside this component matter; the rest
                    # still have alpha unset and get overwritten later
                    x, y = self.g_src[g], self.g_tgt[g]
                    if alpha[x] == -1:
                        continue
                    inner = h_comp[alpha[x], f1p[g]]
                    if inner < 0:
                        ok = False
                        break
                    val = h_comp[h_inv[f1[g]], inner]
                    if val < 0:
                        ok = False
                        break
                    alpha[y] = val
                if ok:
                    fill(level + 1)
            return

        fill(0)
        results.sort()
        return results


# ------------------------------------------------------------------ frontends

def _coerce_pins(Gt, Ht, pin_objects, pin_arrows):
    po, pa = {}, {}
    for x, hx in (pin_objects or {}).items():
        if x not in Gt.obj_index:
            raise UndefinedVertex(f"unknown source object {x!r}", witness=x)
        if hx not in Ht.obj_index:
            raise UndefinedVertex(f"unknown target object {hx!r}", witness=hx)
        po[Gt.obj_index[x]] = Ht.obj_index[hx]
    for g, h in (pin_arrows or {}).items():
        if g not in Gt.arr_index:
            raise UndefinedVertex(f"unknown source arrow {g!r}", witness=g)
        if h not in Ht.arr_index:
            raise UndefinedVertex(f"unknown target arrow {h!r}", witness=h)
        pa[Gt.arr_index[g]] = Ht.arr_index[h]
    return po, pa


def functor_rows(G: Groupoid, H: Groupoid,
                 pin_objects=None, pin_arrows=None, limit=None) -> np.ndarray:
    """Coded image rows of every functor, sorted; same layout as the kernel
    scan so the two can be compared verbatim."""
    Gt, Ht = tables_for(G), tables_for(H)
    po, pa = _coerce_pins(Gt, Ht, pin_objects, pin_arrows)
    rows = _FunctorSearch(Gt, Ht).run(po, pa, limit)
    out = np.array(rows, dtype=np.int32)
    return out.reshape((len(rows), Gt.n_arr))


def _decode_hom(G, H, Gt, Ht, row) -> Homomorphism:
    f1 = {Gt.arr_ids[i]: Ht.arr_ids[int(c)] for i, c in enumerate(row)}
    f0 = {x: H.src.mapping[f1[G.unit.mapping[x]]] for x in G.objects.vertices}
    return Homomorphism.build(G, H, f0, f1)


def enumerate_homomorphisms(G: Groupoid, H: Groupoid, pin_objects=None,
                            pin_arrows=None, limit=None) -> tuple:
    """All homomorphisms G -> H in canonical order.

    ``pin_objects`` / ``pin_arrows`` prescribe images; ``limit`` stops the
    search early (the truncated result is still sorted but not canonical).
    Every returned map is re-certified against the axioms.
    """
    Gt, Ht = tables_for(G), tables_for(H)
    rows = functor_rows(G, H, pin_objects, pin_arrows, limit)
    homs = tuple(_decode_hom(G, H, Gt, Ht, row) for row in rows)
    for f in homs:
        bad = validate_homomorphism(f, limit=1)
        if bad:
            raise OrbiError("functor search produced an invalid map",
                            witness=bad[0])
    return homs


def _coded_functor(f: Homomorphism, Gt, Ht):
    f0 = [Ht.obj_index[f.f0.mapping[x]] for x in Gt.obj_ids]
    f1 = [Ht.arr_index[f.f1.mapping[g]] for g in Gt.arr_ids]
    return f0, f1


def nat_rows(f: Homomorphism, g: Homomorphism) -> np.ndarray:
    """Coded alpha rows of every transformation f => g, sorted."""
    if f.source is not g.source or f.target is not g.target:
        raise CodomainMismatch("transformations need a parallel pair of maps")
    Gt, Ht = tables_for(f.source), tables_for(f.target)
    f0, f1 = _coded_functor(f, Gt, Ht)
    f0p, f1p = _coded_functor(g, Gt, Ht)
    rows = _NatSearch(Gt, Ht).run(f0, f1, f0p, f1p)
    out = np.array(rows, dtype=np.int32)
    return out.reshape((len(rows), Gt.n_obj))


def enumerate_nat_trans(f: Homomorphism, g: Homomorphism) -> tuple:
    """All transformations f => g in canonical order, re-certified."""
    Gt, Ht = tables_for(f.source), tables_for(f.target)
    rows = nat_rows(f, g)
    nats = []
    for row in rows:
        alpha = {Gt.obj_ids[i]: Ht.arr_ids[int(c)] for i, c in enumerate(row)}
        t = NatTrans.build(f, g, alpha)
        bad = validate_nat_trans(t, limit=1)
        if bad:
            raise OrbiError("transformation search produced an invalid one",
                            witness=bad[0])
        nats.append(t)
    return tuple(nats)


# -------------------------------------------------------------- the groupoid

@dataclass(frozen=True, eq=False)
class MappingGroupoid:
    """The groupoid of maps G -> H.

    Objects of ``base`` are functors named by their arrow-image tuple (in
    source arrow order); arrows are ``(f, alpha, g)`` with ``alpha`` the
    value tuple in source object order.
    """

    source: Groupoid
    target: Groupoid
    base: Groupoid
    functors: tuple  # Homomorphism per object of base, aligned

    def functor_at(self, object_id) -> Homomorphism:
        idx = self.__dict__.get("_index")
        if idx is None:
            idx = {v: i for i, v in enumerate(self.base.objects.vertices)}
            object.__setattr__(self, "_index", idx)
        return self.functors[idx[object_id]]

    def nat_at(self, arrow_id) -> NatTrans:
        fid, alpha, gid = arrow_id
        f, g = self.functor_at(fid), self.functor_at(gid)
        mapping = dict(zip(self.source.objects.vertices, alpha))
        return NatTrans.build(f, g, mapping)


def build_gmap(G: Groupoid, H: Groupoid, validate: bool = False) -> MappingGroupoid:
    """Assemble the mapping groupoid of ``G`` into ``H``."""
    Gt, Ht = tables_for(G), tables_for(H)
    rows = _FunctorSearch(Gt, Ht).run()
    m = len(rows)
    if m == 0:
        raise OrbiError("no maps at all; the mapping groupoid would be empty")
    rows_np = np.array(rows, dtype=np.int32)
    obj_ids = [tuple(Ht.arr_ids[c] for c in row) for row in rows]

    obj_adj = kernels.pointwise_eqadj(rows_np, Ht.arr_eqadj)
    obj_edges = [(obj_ids[i], obj_ids[j])
                 for i, j in zip(*np.nonzero(np.triu(obj_adj, 1)))]

    h_src = Ht.src.tolist()
    f0_rows = [[h_src[row[int(Gt.unit[x])]] for x in range(Gt.n_obj)]
               for row in rows]

    nat = _NatSearch(Gt, Ht)
    arr_ids = []
    arr_vecs = []
    src, tgt = {}, {}
    by_src_functor = {}
    for i in range(m):
        for j in range(m):
            for alpha in nat.run(f0_rows[i], rows[i], f0_rows[j], rows[j]):
                aid = (obj_ids[i],
                       tuple(Ht.arr_ids[c] for c in alpha),
                       obj_ids[j])
                arr_ids.append(aid)
                arr_vecs.append(rows[i] + alpha + rows[j])
                src[aid] = obj_ids[i]
                tgt[aid] = obj_ids[j]
                by_src_functor.setdefault(i, []).append((aid, alpha, j))

    vec_np = np.array(arr_vecs, dtype=np.int32).reshape(
        (len(arr_ids), 2 * Gt.n_arr + Gt.n_obj))
    arr_adj = kernels.pointwise_eqadj(vec_np, Ht.arr_eqadj)
    arr_edges = [(arr_ids[i], arr_ids[j])
                 for i, j in zip(*np.nonzero(np.triu(arr_adj, 1)))]

    h_unit = Ht.unit.tolist()
    h_inv = Ht.inv.tolist()
    h_comp = Ht.comp
    unit, inv, comp = {}, {}, {}
    for i in range(m):
        unit[obj_ids[i]] = (
            obj_ids[i],
            tuple(Ht.arr_ids[h_unit[x]] for x in f0_rows[i]),
            obj_ids[i],
        )
    index_of = {v: k for k, v in enumerate(obj_ids)}
    for aid in arr_ids:
        fid, alpha, gid = aid
        Gi, Gj = index_of[fid], index_of[gid]
        ai = [Ht.arr_index[a] for a in alpha]
        inv[aid] = (gid, tuple(Ht.arr_ids[h_inv[c]] for c in ai), fid)
        for bid, beta, k in by_src_functor.get(Gj, ()):
            comp[(aid, bid)] = (
                fid,
                tuple(Ht.arr_ids[int(h_comp[ai[x], beta[x]])]
                      for x in range(Gt.n_obj)),
                obj_ids[k],
            )

    base = Groupoid.build(
        CombSpace.build(obj_ids, obj_edges),
        CombSpace.build(arr_ids, arr_edges),
        src, tgt, unit, inv, comp,
    )
    homs = {obj_ids[i]: _decode_hom(G, H, Gt, Ht, rows[i]) for i in range(m)}
    functors = tuple(homs[v] for v in base.objects.vertices)
    M = MappingGroupoid(G, H, base, functors)
    if validate:
        from .groupoid import validate_groupoid
        bad = validate_groupoid(base, limit=1)
        if bad:
            raise OrbiError("assembled mapping groupoid is invalid",
                            witness=bad[0])
    return M


# ----------------------------------------------------------------- reporting

@dataclass(frozen=True)
class GmapComponent:
    """One connected family of maps, summarised invariantly."""

    objects: tuple
    identity_like: bool
    isotropy_labels: tuple
    target_hits: tuple  # indices into target.arrows.components()

    @property
    def size(self) -> int:
        return len(self.objects)

    @property
    def fingerprint(self) -> tuple:
        return (self.size, self.isotropy_labels, self.target_hits)


def component_report(M: MappingGroupoid) -> tuple:
    """Per-component invariants of the mapping groupoid."""
    H = M.target
    unit_arrows = set(H.unit.mapping.values())
    comp_index = {}
    for idx, comp in enumerate(H.arrows.components()):
        for a in comp:
            comp_index[a] = idx
    out = []
    for comp in M.base.objects.components():
        sub = full_subgroupoid(M.base, comp)
        q = quotient(sub)
        labels = tuple(sorted(q.label(rep) for rep in q.space.vertices))
        hits = set()
        identity_like = True
        for fid in comp:
            for h in fid:
                hits.add(comp_index[h])
                if h not in unit_arrows:
                    identity_like = False
        out.append(GmapComponent(comp, identity_like, labels,
                                 tuple(sorted(hits))))
    return tuple(out)
