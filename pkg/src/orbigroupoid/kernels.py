"""Array kernels with two interchangeable backends.

The environment flag ``ORBIGROUPOID_KERNELS`` picks the implementation:
``numba`` (jit-compiled loops), ``numpy`` (chunked vectorized scans) or
``auto`` (numba when importable, else numpy).  All three kernels are exact
scans, so both backends return identical arrays in identical order; the
test suite and ``benchmarks/bench_kernels.py`` rely on that.

Kernels:

* ``scan_functor_rows``   brute-force filter of every arrow map G1 -> H1
                          against the functor laws (the enumeration oracle);
* ``scan_nat_rows``       brute-force filter of every map G0 -> H1 against
                          the transformation laws for a fixed functor pair;
* ``pointwise_eqadj``     all-pairs "componentwise equal-or-adjacent" matrix
                          used for mapping-groupoid adjacency.
"""
from __future__ import annotations

import os

import numpy as np

from ._tables import GroupoidTables

__all__ = [
    "active_backend",
    "set_backend",
    "scan_functor_rows",
    "scan_nat_rows",
    "pointwise_eqadj",
]

_CHUNK = 1 << 18
_BACKEND = None


def _numba_available() -> bool:
    try:
        import numba  # noqa: F401
        return True
    except Exception:
        return False


def active_backend() -> str:
    global _BACKEND
    if _BACKEND is None:
        choice = os.environ.get("ORBIGROUPOID_KERNELS", "auto").strip().lower()
        if choice not in ("auto", "numba", "numpy"):
            raise ValueError(
                f"ORBIGROUPOID_KERNELS must be auto, numba or numpy, not {choice!r}")
        if choice == "numba" and not _numba_available():
            raise RuntimeError("ORBIGROUPOID_KERNELS=numba but numba is not importable")
        if choice == "auto":
            choice = "numba" if _numba_available() else "numpy"
        _BACKEND = choice
    return _BACKEND


def set_backend(name) -> None:
    """Override the backend (``None`` re-reads the environment)."""
    global _BACKEND
    if name is not None:
        if name not in ("numba", "numpy"):
            raise ValueError(f"backend must be numba or numpy, not {name!r}")
        if name == "numba" and not _numba_available():
            raise RuntimeError("numba backend requested but numba is not importable")
    _BACKEND = name


# ------------------------------------------------------------------ loops
# Plain-python sources for the jitted backend; never called directly.

def _scan_functors_loop(n_h, unit_pos, unit_flag_h, comp_h, triples, edges,
                        eqadj_h, n_g, out):
    count = 0
    c = np.zeros(n_g, dtype=np.int32)
    while True:
        ok = True
        for t in range(unit_pos.shape[0]):
            if not unit_flag_h[c[unit_pos[t]]]:
                ok = False
                break
        if ok:
            for t in range(triples.shape[0]):
                if comp_h[c[triples[t, 0]], c[triples[t, 1]]] != c[triples[t, 2]]:
                    ok = False
                    break
        if ok:
            for t in range(edges.shape[0]):
                if not eqadj_h[c[edges[t, 0]], c[edges[t, 1]]]:
                    ok = False
                    break
        if ok:
            if out.shape[0] > count:
                for p in range(n_g):
                    out[count, p] = c[p]
            count += 1
        p = n_g - 1
        while p >= 0:
            c[p] += 1
            if c[p] == n_h:
                c[p] = 0
                p -= 1
            else:
                break
        if p < 0:
            break
    return count


def _scan_nats_loop(n_h, src_h, tgt_h, comp_h, eqadj_h,
                    f0, f0p, f1, f1p, g_src, g_tgt, obj_edges, n_obj, out):
    count = 0
    a = np.zeros(n_obj, dtype=np.int32)
    while True:
        ok = True
        for x in range(n_obj):
            if src_h[a[x]] != f0[x] or tgt_h[a[x]] != f0p[x]:
                ok = False
                break
        if ok:
            for g in range(g_src.shape[0]):
                left = comp_h[f1[g], a[g_tgt[g]]]
                if left < 0 or left != comp_h[a[g_src[g]], f1p[g]]:
                    ok = False
                    break
        if ok:
            for t in range(obj_edges.shape[0]):
                if not eqadj_h[a[obj_edges[t, 0]], a[obj_edges[t, 1]]]:
                    ok = False
                    break
        if ok:
            if out.shape[0] > count:
                for p in range(n_obj):
                    out[count, p] = a[p]
            count += 1
        p = n_obj - 1
        while p >= 0:
            a[p] += 1
            if a[p] == n_h:
                a[p] = 0
                p -= 1
            else:
                break
        if p < 0:
            break
    return count


def _pairwise_loop(vectors, eqadj, out):
    m, k = vectors.shape
    for i in range(m):
        out[i, i] = True
        for j in range(i + 1, m):
            good = True
            for p in range(k):
                if not eqadj[vectors[i, p], vectors[j, p]]:
                    good = False
                    break
            out[i, j] = good
            out[j, i] = good


_NUMBA = None


def _numba_fns():
    global _NUMBA
    if _NUMBA is None:
        from numba import njit
        _NUMBA = (
            njit(cache=True)(_scan_functors_loop),
            njit(cache=True)(_scan_nats_loop),
            njit(cache=True)(_pairwise_loop),
        )
    return _NUMBA


# ------------------------------------------------------------------ numpy

def _digit_block(lo: int, hi: int, base: int, width: int) -> np.ndarray:
    codes = np.arange(lo, hi, dtype=np.int64)
    digits = np.empty((hi - lo, width), dtype=np.int32)
    for p in range(width - 1, -1, -1):
        digits[:, p] = codes % base
        codes = codes // base
    return digits


def _scan_functors_np(Ht: GroupoidTables, unit_pos, triples, edges, n_g):
    base = Ht.n_arr
    total = base ** n_g
    found = []
    for lo in range(0, total, _CHUNK):
        hi = min(total, lo + _CHUNK)
        d = _digit_block(lo, hi, base, n_g)
        mask = np.ones(hi - lo, dtype=np.bool_)
        if unit_pos.size:
            mask &= Ht.unit_flag[d[:, unit_pos]].all(axis=1)
        for i, j, k in triples:
            mask &= Ht.comp[d[:, i], d[:, j]] == d[:, k]
        for u, v in edges:
            mask &= Ht.arr_eqadj[d[:, u], d[:, v]]
        if mask.any():
            found.append(d[mask])
    if not found:
        return np.empty((0, n_g), dtype=np.int32)
    return np.concatenate(found)


def _scan_nats_np(Ht: GroupoidTables, f0, f0p, f1, f1p, g_src, g_tgt, obj_edges, n_obj):
    base = Ht.n_arr
    total = base ** n_obj
    found = []
    for lo in range(0, total, _CHUNK):
        hi = min(total, lo + _CHUNK)
        a = _digit_block(lo, hi, base, n_obj)
        mask = np.ones(hi - lo, dtype=np.bool_)
        for x in range(n_obj):
            mask &= (Ht.src[a[:, x]] == f0[x]) & (Ht.tgt[a[:, x]] == f0p[x])
        for g in range(g_src.shape[0]):
            left = Ht.comp[f1[g], a[:, g_tgt[g]]]
            mask &= (left >= 0) & (left == Ht.comp[a[:, g_src[g]], f1p[g]])
        for u, v in obj_edges:
            mask &= Ht.arr_eqadj[a[:, u], a[:, v]]
        if mask.any():
            found.append(a[mask])
    if not found:
        return np.empty((0, n_obj), dtype=np.int32)
    return np.concatenate(found)


def _pairwise_np(vectors: np.ndarray, eqadj: np.ndarray) -> np.ndarray:
    m, k = vectors.shape
    out = np.empty((m, m), dtype=np.bool_)
    step = max(1, _CHUNK // max(1, m))
    for lo in range(0, m, step):
        hi = min(m, lo + step)
        block = eqadj[vectors[lo:hi, None, :], vectors[None, :, :]]
        out[lo:hi] = block.all(axis=2)
    np.fill_diagonal(out, True)
    return out


# --------------------------------------------------------------- frontend

def scan_functor_rows(Gt: GroupoidTables, Ht: GroupoidTables) -> np.ndarray:
    """Every arrow assignment satisfying the functor laws, in code order."""
    unit_pos = np.flatnonzero(Gt.unit_flag).astype(np.int32)
    if active_backend() == "numpy":
        return _scan_functors_np(Ht, unit_pos, Gt.comp_triples, Gt.arr_edge_pairs, Gt.n_arr)
    scan, _, _ = _numba_fns()
    empty = np.empty((0, Gt.n_arr), dtype=np.int32)
    count = scan(Ht.n_arr, unit_pos, Ht.unit_flag, Ht.comp, Gt.comp_triples,
                 Gt.arr_edge_pairs, Ht.arr_eqadj, Gt.n_arr, empty)
    out = np.empty((count, Gt.n_arr), dtype=np.int32)
    scan(Ht.n_arr, unit_pos, Ht.unit_flag, Ht.comp, Gt.comp_triples,
         Gt.arr_edge_pairs, Ht.arr_eqadj, Gt.n_arr, out)
    return out


def scan_nat_rows(Gt: GroupoidTables, Ht: GroupoidTables,
                  f0, f1, f0p, f1p) -> np.ndarray:
    """Every object-to-arrow assignment that is natural from f to f'."""
    f0 = np.asarray(f0, dtype=np.int32)
    f1 = np.asarray(f1, dtype=np.int32)
    f0p = np.asarray(f0p, dtype=np.int32)
    f1p = np.asarray(f1p, dtype=np.int32)
    if active_backend() == "numpy":
        return _scan_nats_np(Ht, f0, f0p, f1, f1p, Gt.src, Gt.tgt,
                             Gt.obj_edge_pairs, Gt.n_obj)
    _, scan, _ = _numba_fns()
    empty = np.empty((0, Gt.n_obj), dtype=np.int32)
    count = scan(Ht.n_arr, Ht.src, Ht.tgt, Ht.comp, Ht.arr_eqadj,
                 f0, f0p, f1, f1p, Gt.src, Gt.tgt, Gt.obj_edge_pairs, Gt.n_obj, empty)
    out = np.empty((count, Gt.n_obj), dtype=np.int32)
    scan(Ht.n_arr, Ht.src, Ht.tgt, Ht.comp, Ht.arr_eqadj,
         f0, f0p, f1, f1p, Gt.src, Gt.tgt, Gt.obj_edge_pairs, Gt.n_obj, out)
    return out


def pointwise_eqadj(vectors: np.ndarray, eqadj: np.ndarray) -> np.ndarray:
    """Boolean matrix: rows i, j componentwise equal-or-adjacent."""
    vectors = np.ascontiguousarray(vectors, dtype=np.int32)
    if vectors.ndim != 2:
        raise ValueError("vectors must be a 2d array")
    if vectors.shape[1] == 0:
        return np.ones((vectors.shape[0], vectors.shape[0]), dtype=np.bool_)
    if active_backend() == "numpy":
        return _pairwise_np(vectors, eqadj)
    _, _, pairwise = _numba_fns()
    out = np.empty((vectors.shape[0], vectors.shape[0]), dtype=np.bool_)
    pairwise(vectors, eqadj, out)
    return out
