"""Integer-coded views of a groupoid for the array kernels.

Vertices are replaced by their canonical indices; composition becomes a
dense matrix with -1 marking non-composable pairs.  Everything downstream
(functor scans, transformation scans, adjacency kernels) works on these
arrays only.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .groupoid import Groupoid

__all__ = ["GroupoidTables", "tables_for"]


@dataclass(frozen=True)
class GroupoidTables:
    obj_ids: tuple
    arr_ids: tuple
    src: np.ndarray        # arrow -> object
    tgt: np.ndarray
    inv: np.ndarray        # arrow -> arrow
    unit: np.ndarray       # object -> arrow
    unit_flag: np.ndarray  # arrow -> bool
    comp: np.ndarray       # arrow x arrow -> arrow or -1
    obj_eqadj: np.ndarray  # reflexive object nearness
    arr_eqadj: np.ndarray  # reflexive arrow nearness
    obj_edge_pairs: np.ndarray  # (e, 2) index pairs
    arr_edge_pairs: np.ndarray
    comp_triples: np.ndarray    # (t, 3) rows (i, j, comp[i, j])

    @property
    def n_obj(self) -> int:
        return len(self.obj_ids)

    @property
    def n_arr(self) -> int:
        return len(self.arr_ids)

    @property
    def obj_index(self) -> dict:
        cached = self.__dict__.get("_obj_index")
        if cached is None:
            cached = {v: i for i, v in enumerate(self.obj_ids)}
            object.__setattr__(self, "_obj_index", cached)
        return cached

    @property
    def arr_index(self) -> dict:
        cached = self.__dict__.get("_arr_index")
        if cached is None:
            cached = {v: i for i, v in enumerate(self.arr_ids)}
            object.__setattr__(self, "_arr_index", cached)
        return cached


def tables_for(G: Groupoid) -> GroupoidTables:
    cached = G.__dict__.get("_tables_cache")
    if cached is not None:
        return cached
    obj_ids = G.objects.vertices
    arr_ids = G.arrows.vertices
    oi = {v: i for i, v in enumerate(obj_ids)}
    ai = {v: i for i, v in enumerate(arr_ids)}
    n_obj, n_arr = len(obj_ids), len(arr_ids)

    src = np.fromiter((oi[G.src_of(a)] for a in arr_ids), dtype=np.int32, count=n_arr)
    tgt = np.fromiter((oi[G.tgt_of(a)] for a in arr_ids), dtype=np.int32, count=n_arr)
    inv = np.fromiter((ai[G.inv_of(a)] for a in arr_ids), dtype=np.int32, count=n_arr)
    unit = np.fromiter((ai[G.unit_of(x)] for x in obj_ids), dtype=np.int32, count=n_obj)
    unit_flag = np.zeros(n_arr, dtype=np.bool_)
    unit_flag[unit] = True

    comp = np.full((n_arr, n_arr), -1, dtype=np.int32)
    triples = np.empty((len(G.comp), 3), dtype=np.int32)
    for row, ((g1, g2), g3) in enumerate(sorted(
            G.comp.items(), key=lambda kv: (ai[kv[0][0]], ai[kv[0][1]]))):
        i, j, k = ai[g1], ai[g2], ai[g3]
        comp[i, j] = k
        triples[row] = (i, j, k)

    obj_eqadj = np.eye(n_obj, dtype=np.bool_)
    obj_edges = np.empty((G.objects.n_edges, 2), dtype=np.int32)
    for row, (u, v) in enumerate(G.objects.edges):
        obj_eqadj[oi[u], oi[v]] = obj_eqadj[oi[v], oi[u]] = True
        obj_edges[row] = (oi[u], oi[v])
    arr_eqadj = np.eye(n_arr, dtype=np.bool_)
    arr_edges = np.empty((G.arrows.n_edges, 2), dtype=np.int32)
    for row, (u, v) in enumerate(G.arrows.edges):
        arr_eqadj[ai[u], ai[v]] = arr_eqadj[ai[v], ai[u]] = True
        arr_edges[row] = (ai[u], ai[v])

    out = GroupoidTables(obj_ids, arr_ids, src, tgt, inv, unit, unit_flag,
                         comp, obj_eqadj, arr_eqadj, obj_edges, arr_edges, triples)
    object.__setattr__(G, "_tables_cache", out)
    return out
