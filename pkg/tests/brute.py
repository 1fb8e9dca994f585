"""Independent brute-force oracles for cross-checking the library.

Everything here is deliberately naive: plain enumeration over walks,
words, permutations, and edge masks.  None of it shares algorithms with
the code under test.
"""

import itertools
import random

from sftconj import BlockMap, DirectedGraph
from sftconj.gadgets import UndirectedGraph


def closed_walk_count(g: DirectedGraph, n: int) -> int:
    """Number of closed walks of length n, by explicit extension."""
    count = 0
    for start in g.vertices:
        stack = [(start,)]
        while stack:
            walk = stack.pop()
            if len(walk) == n:
                if g.has_edge(walk[-1], start):
                    count += 1
                continue
            for w in g.successors(walk[-1]):
                stack.append(walk + (w,))
    return count


def word_scan_diamond(g: DirectedGraph, vmap: dict, max_middle: int) -> bool:
    """Diamond existence by scanning words: two distinct paths with the
    same single-vertex endpoints and the same image word."""
    for middle_len in range(1, max_middle + 1):
        seen = {}
        for word in _paths(g, middle_len + 2):
            key = (word[0], word[-1], tuple(vmap[v] for v in word))
            if key in seen and seen[key] != word:
                return True
            seen.setdefault(key, word)
    return False


def _paths(g: DirectedGraph, length: int):
    paths = [(v,) for v in g.vertices]
    for _ in range(length - 1):
        paths = [p + (w,) for p in paths for w in g.successors(p[-1])]
    return paths


def digraphs_isomorphic(g: DirectedGraph, h: DirectedGraph) -> bool:
    if len(g) != len(h) or len(g.edges) != len(h.edges):
        return False
    hv = h.vertices
    for perm in itertools.permutations(range(len(hv))):
        ren = {v: hv[perm[i]] for i, v in enumerate(g.vertices)}
        if all((ren[s], ren[d]) in h.edges for (s, d) in g.edges):
            return True
    return False


def undirected_isomorphic(g: UndirectedGraph, h: UndirectedGraph) -> bool:
    if len(g.vertices) != len(h.vertices) or len(g.edges) != len(h.edges):
        return False
    hv = h.vertices
    h_edges = {frozenset(e) for e in h.edges}
    for perm in itertools.permutations(range(len(hv))):
        ren = {v: hv[perm[i]] for i, v in enumerate(g.vertices)}
        if all(frozenset((ren[a], ren[b])) in h_edges for (a, b) in g.edges):
            return True
    return False


def same_graph(g: DirectedGraph, h: DirectedGraph) -> bool:
    """Equality up to vertex order."""
    return set(g.vertices) == set(h.vertices) and g.edges == h.edges


# -- enumeration of small essential digraphs ---------------------------------


def _essential_mask(n: int, mask: int) -> bool:
    out = [0] * n
    inc = [0] * n
    alive = [True] * n
    edges = [(i, j) for i in range(n) for j in range(n) if mask >> (i * n + j) & 1]
    changed = True
    while changed:
        changed = False
        out = [0] * n
        inc = [0] * n
        for (i, j) in edges:
            if alive[i] and alive[j]:
                out[i] += 1
                inc[j] += 1
        for v in range(n):
            if alive[v] and (out[v] == 0 or inc[v] == 0):
                alive[v] = False
                changed = True
    return all(alive)


def _canon(n: int, mask: int) -> int:
    best = None
    for perm in itertools.permutations(range(n)):
        m = 0
        for i in range(n):
            for j in range(n):
                if mask >> (i * n + j) & 1:
                    m |= 1 << (perm[i] * n + perm[j])
        if best is None or m < best:
            best = m
    return best


def essential_digraph_classes(n: int):
    """Essential digraphs on n vertices, one representative per iso class.

    Vertices are named v0..v(n-1); representatives are the masks that are
    minimal within their class, listed in increasing mask order.
    """
    names = [f"v{i}" for i in range(n)]
    reps = []
    seen = set()
    for mask in range(1 << (n * n)):
        if not _essential_mask(n, mask):
            continue
        c = _canon(n, mask)
        if c in seen:
            continue
        seen.add(c)
        edges = [(names[i], names[j]) for i in range(n) for j in range(n) if c >> (i * n + j) & 1]
        reps.append(DirectedGraph(names, edges))
    return reps


def all_vertex_maps(g: DirectedGraph, h: DirectedGraph):
    """Every function from g's vertices to h's vertices, as 1-block maps."""
    gv, hv = g.vertices, h.vertices
    for values in itertools.product(hv, repeat=len(gv)):
        yield BlockMap.one_block(dict(zip(gv, values)))


# -- random instances ---------------------------------------------------------


def random_essential_graph(rng: random.Random, n: int, p: float) -> DirectedGraph:
    """Random essential digraph: edge sampling, then a patched-in cycle
    so that trimming rarely empties it."""
    names = [f"v{i}" for i in range(n)]
    edges = {(a, b) for a in names for b in names if rng.random() < p}
    order = names[:]
    rng.shuffle(order)
    cycle_len = rng.randint(1, n)
    for i in range(cycle_len):
        edges.add((order[i], order[(i + 1) % cycle_len]))
    from sftconj import trim_to_essential

    return trim_to_essential(DirectedGraph(names, edges))


def random_quotient_instance(rng: random.Random, n: int, p: float, merges: int):
    """A valid 1-block instance: random graph, random vertex-class merge,
    minimal image graph as the target."""
    from sftconj.oracles import minimal_image_graph

    g = random_essential_graph(rng, n, p)
    if g.is_empty:
        return None
    classes = {v: v for v in g.vertices}
    vs = list(g.vertices)
    for _ in range(merges):
        a, b = rng.choice(vs), rng.choice(vs)
        ra = classes[a]
        rb = classes[b]
        for v in vs:
            if classes[v] == rb:
                classes[v] = ra
    names = {}
    for v in vs:
        names.setdefault(classes[v], f"c{len(names)}")
    vmap = {v: names[classes[v]] for v in vs}
    h = minimal_image_graph(g, vmap)
    return g, h, BlockMap.one_block(vmap)
