"""Directed graphs and multigraphs presenting vertex and edge shifts.

Vertex order is insertion order and is part of the structure: wherever an
algorithm needs an "arbitrary" choice (a start vertex, a BFS tie-break),
it takes the earliest vertex in this order, so every run is reproducible.
Graphs are immutable after construction and safe to share between threads.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Optional, Sequence

from . import kernels
from .errors import ContractViolationError

Vertex = Hashable


class DirectedGraph:
    """A finite directed graph with simple edges (no parallels)."""

    __slots__ = ("_vertices", "_index", "_edges", "_succ", "_pred")

    def __init__(self, vertices: Iterable[Vertex], edges: Iterable[tuple] = ()):
        vs = []
        index: dict = {}
        for v in vertices:
            if v in index:
                raise ValueError(f"duplicate vertex {v!r}")
            index[v] = len(vs)
            vs.append(v)
        edge_set = set()
        for e in edges:
            src, dst = e
            if src not in index or dst not in index:
                raise ValueError(f"edge {(src, dst)!r} has an undeclared endpoint")
            edge_set.add((src, dst))
        self._vertices = tuple(vs)
        self._index = index
        self._edges = frozenset(edge_set)
        succ = {v: [] for v in vs}
        pred = {v: [] for v in vs}
        for src, dst in sorted(edge_set, key=lambda e: (index[e[0]], index[e[1]])):
            succ[src].append(dst)
            pred[dst].append(src)
        self._succ = {v: tuple(ws) for v, ws in succ.items()}
        self._pred = {v: tuple(ws) for v, ws in pred.items()}

    # -- basic accessors -------------------------------------------------

    @property
    def vertices(self) -> tuple:
        return self._vertices

    @property
    def edges(self) -> frozenset:
        return self._edges

    def successors(self, v) -> tuple:
        return self._succ[v]

    def predecessors(self, v) -> tuple:
        return self._pred[v]

    def out_degree(self, v) -> int:
        return len(self._succ[v])

    def in_degree(self, v) -> int:
        return len(self._pred[v])

    def has_edge(self, src, dst) -> bool:
        return (src, dst) in self._edges

    def vertex_index(self, v) -> int:
        return self._index[v]

    def __contains__(self, v) -> bool:
        return v in self._index

    def __len__(self) -> int:
        return len(self._vertices)

    @property
    def is_empty(self) -> bool:
        return not self._vertices

    def __eq__(self, other) -> bool:
        if not isinstance(other, DirectedGraph):
            return NotImplemented
        return self._vertices == other._vertices and self._edges == other._edges

    def __hash__(self):
        return hash((self._vertices, self._edges))

    def __repr__(self) -> str:
        return f"DirectedGraph({len(self._vertices)} vertices, {len(self._edges)} edges)"

    # -- derived views ----------------------------------------------------

    def subgraph(self, keep) -> "DirectedGraph":
        """Induced subgraph on ``keep``, preserving vertex order."""
        keep = set(keep)
        vs = [v for v in self._vertices if v in keep]
        es = [(s, d) for (s, d) in self._edges if s in keep and d in keep]
        return DirectedGraph(vs, es)

    def extended(self, new_vertices=(), new_edges=()) -> "DirectedGraph":
        """New graph with extra vertices appended and extra edges added."""
        vs = list(self._vertices) + [v for v in new_vertices if v not in self._index]
        es = list(self._edges) + list(new_edges)
        return DirectedGraph(vs, es)

    def successor_index_lists(self):
        """Successor lists over vertex indices (kernel input form)."""
        idx = self._index
        return [[idx[w] for w in self._succ[v]] for v in self._vertices]

    def predecessor_index_lists(self):
        idx = self._index
        return [[idx[w] for w in self._pred[v]] for v in self._vertices]

    def adjacency_matrix(self):
        """0/1 adjacency counts as a list of row lists of ints."""
        n = len(self._vertices)
        idx = self._index
        rows = [[0] * n for _ in range(n)]
        for s, d in self._edges:
            rows[idx[s]][idx[d]] = 1
        return rows

    def renamed(self, mapping: Mapping) -> "DirectedGraph":
        """Apply a vertex renaming (must be injective on the vertex set)."""
        vs = [mapping.get(v, v) for v in self._vertices]
        es = [(mapping.get(s, s), mapping.get(d, d)) for (s, d) in self._edges]
        return DirectedGraph(vs, es)

    def to_json_dict(self) -> dict:
        return {
            "vertices": list(self._vertices),
            "edges": sorted(
                ([s, d] for (s, d) in self._edges),
                key=lambda e: (self._index[e[0]], self._index[e[1]]),
            ),
        }


class MultiGraph:
    """A directed multigraph with uniquely labeled parallel edges."""

    __slots__ = ("_vertices", "_index", "_edges", "_by_label")

    def __init__(self, vertices: Iterable[Vertex], edges: Iterable[tuple] = ()):
        vs = []
        index: dict = {}
        for v in vertices:
            if v in index:
                raise ValueError(f"duplicate vertex {v!r}")
            index[v] = len(vs)
            vs.append(v)
        labeled = []
        by_label: dict = {}
        for e in edges:
            label, src, dst = e
            if label in by_label:
                raise ValueError(f"duplicate edge label {label!r}")
            if src not in index or dst not in index:
                raise ValueError(f"edge {label!r} has an undeclared endpoint")
            by_label[label] = (src, dst)
            labeled.append((label, src, dst))
        self._vertices = tuple(vs)
        self._index = index
        self._edges = tuple(labeled)
        self._by_label = by_label

    @property
    def vertices(self) -> tuple:
        return self._vertices

    @property
    def edges(self) -> tuple:
        """Edges as (label, src, dst) in insertion order."""
        return self._edges

    @property
    def labels(self) -> tuple:
        return tuple(label for label, _, _ in self._edges)

    def endpoints(self, label) -> tuple:
        return self._by_label[label]

    def __len__(self) -> int:
        return len(self._vertices)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiGraph):
            return NotImplemented
        return self._vertices == other._vertices and set(self._edges) == set(other._edges)

    def __repr__(self) -> str:
        return f"MultiGraph({len(self._vertices)} vertices, {len(self._edges)} edges)"

    def adjacency_matrix(self):
        """Entry [i][j] counts parallel edges from vertex i to vertex j."""
        n = len(self._vertices)
        idx = self._index
        rows = [[0] * n for _ in range(n)]
        for _, s, d in self._edges:
            rows[idx[s]][idx[d]] += 1
        return rows

    def to_json_dict(self) -> dict:
        return {
            "vertices": list(self._vertices),
            "multi_edges": [[label, s, d] for (label, s, d) in self._edges],
        }


@dataclass(frozen=True)
class TraceSequence:
    """Exact traces of adjacency-matrix powers A^1 .. A^n."""

    values: tuple

    @property
    def n(self) -> int:
        return len(self.values)

    def power(self, i: int) -> int:
        """Trace of A^i (1-based, matching the power)."""
        if not 1 <= i <= len(self.values):
            raise IndexError(f"power {i} outside computed range 1..{len(self.values)}")
        return self.values[i - 1]

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)


# -- structural operations ------------------------------------------------


def trim_to_essential(g: DirectedGraph) -> DirectedGraph:
    """Maximal essential subgraph: repeatedly drop stranded vertices.

    A vertex is stranded when its in- or out-neighborhood is empty.  The
    result presents the same shift space; it may be empty.  Idempotent.
    """
    out_deg = {v: g.out_degree(v) for v in g.vertices}
    in_deg = {v: g.in_degree(v) for v in g.vertices}
    dead = deque(v for v in g.vertices if out_deg[v] == 0 or in_deg[v] == 0)
    alive = set(g.vertices)
    while dead:
        v = dead.popleft()
        if v not in alive:
            continue
        alive.remove(v)
        for w in g.successors(v):
            if w in alive:
                in_deg[w] -= 1
                if in_deg[w] == 0:
                    dead.append(w)
        for w in g.predecessors(v):
            if w in alive:
                out_deg[w] -= 1
                if out_deg[w] == 0:
                    dead.append(w)
    if len(alive) == len(g.vertices):
        return g
    return g.subgraph(alive)


def reverse_edges(g: DirectedGraph) -> DirectedGraph:
    """All edges reversed; an involution."""
    return DirectedGraph(g.vertices, [(d, s) for (s, d) in g.edges])


def strongly_connected_components(g: DirectedGraph):
    """SCC partition as a list of frozensets, reverse topological order."""
    comps = kernels.tarjan_scc(g.successor_index_lists())
    vs = g.vertices
    return [frozenset(vs[i] for i in comp) for comp in comps]


def is_irreducible(g: DirectedGraph) -> bool:
    """Essential and strongly connected; empty graphs are not irreducible.

    A single vertex without a self-loop presents the empty shift and is
    reported not irreducible.
    """
    if g.is_empty:
        return False
    if len(trim_to_essential(g)) != len(g):
        return False
    return len(strongly_connected_components(g)) == 1


def shortest_cycle_through(g: DirectedGraph, v) -> Optional[tuple]:
    """Shortest cycle starting at ``v`` (closing edge back to ``v`` implied).

    BFS from ``v``; neighbor scans follow vertex order, so ties resolve
    to the earliest-vertex path layer by layer.  None if no cycle.
    """
    if v not in g:
        raise ContractViolationError(f"vertex {v!r} not in graph")
    if g.has_edge(v, v):
        return (v,)
    parent = {}
    frontier = deque([v])
    seen = {v}
    while frontier:
        u = frontier.popleft()
        for w in g.successors(u):
            if w == v:
                path = [u]
                while path[-1] != v:
                    path.append(parent[path[-1]])
                path.reverse()
                return tuple(path)
            if w not in seen:
                seen.add(w)
                parent[w] = u
                frontier.append(w)
    return None


def trace_powers(g, n: int) -> TraceSequence:
    """Exact traces of A^1..A^n by repeated integer matrix multiplication."""
    if n < 1:
        raise ContractViolationError("n must be >= 1")
    rows = g.adjacency_matrix()
    if not rows:
        return TraceSequence(values=(0,) * n)
    preds = _pred_count_lists(g)
    prepared = kernels.prepare_preds(preds)
    traces = []
    for i in range(n):
        traces.append(kernels.matrix_trace(rows))
        if i + 1 < n:
            rows = kernels.count_matmul_step(rows, prepared)
    return TraceSequence(values=tuple(traces))


def _pred_count_lists(g):
    """Predecessor index lists, one entry per parallel edge."""
    if isinstance(g, MultiGraph):
        idx = {v: i for i, v in enumerate(g.vertices)}
        preds = [[] for _ in g.vertices]
        for _, s, d in g.edges:
            preds[idx[d]].append(idx[s])
        for ps in preds:
            ps.sort()
        return preds
    return g.predecessor_index_lists()


# -- JSON interchange ------------------------------------------------------

_DIGRAPH_KEYS = {"vertices", "edges"}
_MULTIGRAPH_KEYS = {"vertices", "multi_edges"}


def graph_from_json_dict(data):
    """Parse the strict graph JSON object form.

    ``{"vertices": [...], "edges": [[src, dst], ...]}`` gives a
    DirectedGraph; ``{"vertices": [...], "multi_edges": [[label, src,
    dst], ...]}`` a MultiGraph.  Unknown keys are rejected.
    """
    if not isinstance(data, dict):
        raise ValueError("graph JSON must be an object")
    keys = set(data)
    if keys == _DIGRAPH_KEYS:
        edges = [tuple(e) for e in data["edges"]]
        if any(len(e) != 2 for e in edges):
            raise ValueError("edges must be [src, dst] pairs")
        return DirectedGraph(data["vertices"], edges)
    if keys == _MULTIGRAPH_KEYS:
        edges = [tuple(e) for e in data["multi_edges"]]
        if any(len(e) != 3 for e in edges):
            raise ValueError("multi_edges must be [label, src, dst] triples")
        return MultiGraph(data["vertices"], edges)
    raise ValueError(
        "graph JSON must have exactly the keys {vertices, edges} or "
        f"{{vertices, multi_edges}}; got {sorted(map(str, keys))}"
    )
