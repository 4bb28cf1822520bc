"""Compare the two kernel backends on the hot scan paths.

Runs every kernel on both backends, checks the outputs agree entry for
entry, and prints best-of-N wall times.  Usage:

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import time

import numpy as np

from orbigroupoid import kernels
from orbigroupoid._tables import tables_for
from orbigroupoid.fixtures import fixture
from orbigroupoid.gmap import enumerate_homomorphisms


def functor_case(gname, hname):
    Gt, Ht = tables_for(fixture(gname)), tables_for(fixture(hname))
    label = f"functor scan {gname} -> {hname} ({Ht.n_arr}^{Gt.n_arr} candidates)"
    return label, lambda: kernels.scan_functor_rows(Gt, Ht)


def nat_case(gname, hname):
    G, H = fixture(gname), fixture(hname)
    f = enumerate_homomorphisms(G, H)[0]
    Gt, Ht = tables_for(G), tables_for(H)
    f0 = np.array([Ht.obj_index[f.f0(x)] for x in G.objects.vertices], np.int32)
    f1 = np.array([Ht.arr_index[f.f1(a)] for a in G.arrows.vertices], np.int32)
    label = f"nat scan {gname} -> {hname} ({Ht.n_arr}^{Gt.n_obj} candidates)"
    return label, lambda: kernels.scan_nat_rows(Gt, Ht, f0, f1, f0, f1)


def pairwise_case(m, k, base, seed=7):
    rng = np.random.default_rng(seed)
    vectors = rng.integers(0, base, size=(m, k)).astype(np.int32)
    eqadj = rng.random((base, base)) < 0.05
    eqadj |= eqadj.T
    np.fill_diagonal(eqadj, True)
    label = f"pairwise eq-or-adj ({m} vectors x {k} columns)"
    return label, lambda: kernels.pointwise_eqadj(vectors, eqadj)


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3, help="timings per case")
    args = ap.parse_args()

    cases = [
        functor_case("pt_z6", "si"),
        functor_case("i1", "i2"),
        functor_case("pt_d3", "pt_d3"),
        nat_case("i1", "si"),
        nat_case("i1", "i2"),
        pairwise_case(1500, 12, 300),
    ]

    print(f"default backend: {kernels.active_backend()}")
    width = max(len(label) for label, _ in cases)
    print(f"{'case':<{width}}  {'numba':>9}  {'numpy':>9}  speedup")
    for label, fn in cases:
        times = {}
        outs = {}
        for backend in ("numba", "numpy"):
            kernels.set_backend(backend)
            fn()  # warm the jit cache / allocator before timing
            times[backend], outs[backend] = best_of(fn, args.repeat)
        if not np.array_equal(outs["numba"], outs["numpy"]):
            raise SystemExit(f"backend outputs disagree on: {label}")
        ratio = times["numpy"] / times["numba"]
        print(f"{label:<{width}}  {times['numba']:8.4f}s  {times['numpy']:8.4f}s"
              f"  {ratio:6.1f}x")
    kernels.set_backend(None)


if __name__ == "__main__":
    main()
