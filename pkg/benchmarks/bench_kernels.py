#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Times the two hot loops (Tarjan SCC on pair-graph-sized inputs, exact
counting-matrix powering) and one end-to-end verification.  Run:

    python benchmarks/bench_kernels.py
"""

import random
import time

from sftconj import BlockMap, DirectedGraph, kernels, split, verify
from sftconj.graphs import is_irreducible


def random_index_graph(rng, n, avg_deg):
    p = avg_deg / n
    return [[j for j in range(n) if rng.random() < p] for _ in range(n)]


def bench_scc(impl, runs=3):
    rng = random.Random(1)
    graphs = [random_index_graph(rng, 4000, 3.0) for _ in range(4)]
    best = float("inf")
    for _ in range(runs):
        t0 = time.perf_counter()
        for succ in graphs:
            impl.tarjan_scc(succ)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_powering(impl, runs=3):
    rng = random.Random(2)
    n = 120
    preds = [[j for j in range(n) if rng.random() < 0.04] for _ in range(n)]
    prepared = impl.prepare_preds(preds)
    best = float("inf")
    for _ in range(runs):
        rows = [[1 if j in preds[i] else 0 for j in range(n)] for i in range(n)]
        t0 = time.perf_counter()
        for _ in range(n):
            impl.matrix_trace(rows)
            rows = impl.count_matmul_step(rows, prepared)
        best = min(best, time.perf_counter() - t0)
    return best


def split_conjugacy_instance(seed, base_n=90, target_n=100):
    rng = random.Random(seed)
    names = [f"v{i}" for i in range(base_n)]
    edges = {(names[i], names[(i + 1) % base_n]) for i in range(base_n)}
    while len(edges) < base_n + 200:
        edges.add((rng.choice(names), rng.choice(names)))
    h = DirectedGraph(names, edges)
    assert is_irreducible(h)
    g = h
    vmap = {v: v for v in g.vertices}
    i = 0
    while len(g) < target_n:
        v = rng.choice([u for u in g.vertices if g.out_degree(u) >= 2])
        outs = list(g.successors(v))
        rng.shuffle(outs)
        cut = rng.randint(1, len(outs) - 1)
        n1, n2 = f"s{i}a", f"s{i}b"
        i += 1
        g = split(g, v, (set(outs[:cut]), set(outs[cut:])), (n1, n2), kind="out")
        image = vmap.pop(v)
        vmap[n1] = image
        vmap[n2] = image
    return g, h, BlockMap.one_block(vmap)


def bench_verify(backend, runs=2):
    # the verifier picks up the backend through the selection module, so
    # re-point it for the duration of the measurement
    impl = kernels.load_backend(backend)
    saved = (kernels.tarjan_scc, kernels.prepare_preds, kernels.count_matmul_step, kernels.matrix_trace)
    kernels.tarjan_scc = impl.tarjan_scc
    kernels.prepare_preds = impl.prepare_preds
    kernels.count_matmul_step = impl.count_matmul_step
    kernels.matrix_trace = impl.matrix_trace
    try:
        g, h, phi = split_conjugacy_instance(3)
        best = float("inf")
        for _ in range(runs):
            t0 = time.perf_counter()
            verdict = verify(g, h, phi)
            best = min(best, time.perf_counter() - t0)
            assert verdict.is_conjugacy
        return best
    finally:
        (kernels.tarjan_scc, kernels.prepare_preds, kernels.count_matmul_step, kernels.matrix_trace) = saved


def main():
    names = kernels.available_backends()
    print(f"available backends: {', '.join(names)}")
    results = {}
    for name in names:
        impl = kernels.load_backend(name)
        scc = bench_scc(impl)
        pw = bench_powering(impl)
        vf = bench_verify(name)
        results[name] = (scc, pw, vf)
        print(
            f"{name:>8}: scc(4x4000v) {scc * 1e3:8.1f} ms | "
            f"power(120^120) {pw * 1e3:8.1f} ms | verify(100v) {vf * 1e3:8.1f} ms"
        )
    if len(results) == 2:
        py = results["python"]
        cy = results["cython"]
        print(
            "speedup cython/python: "
            f"scc {py[0] / cy[0]:.1f}x, powering {py[1] / cy[1]:.1f}x, "
            f"verify {py[2] / cy[2]:.1f}x"
        )


if __name__ == "__main__":
    main()
