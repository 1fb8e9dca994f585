"""Generators for the hardness-reduction constructions, with validity checks.

Everything here is a *constructive* artifact: graph families whose
conjugacy structure encodes another problem (graph isomorphism via
doubling and path/diamond vertex gadgets, hitting set via weight
widgets on structure-property graphs).  The asymptotic hardness claims
themselves are not something a test can reproduce; the constructions
and their mechanical properties are.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence
import warnings

from .errors import ContractViolationError
from .graphs import DirectedGraph, MultiGraph
from .oracles import AmalgamationStep, HittingSetInstance, amalgamate, can_amalgamate
from .shifts import BlockMap

__all__ = [
    "UndirectedGraph",
    "StructurePartition",
    "WeightWidget",
    "HittingSetReduction",
    "gi_to_digraphs",
    "vertex_gadget_pair",
    "edge_gadget_pair",
    "has_structure_property",
    "attach_weight_widget",
    "hitting_set_reduction",
    "activation_schedule",
    "apply_schedule",
]


# -- graph isomorphism source instances ---------------------------------------


class UndirectedGraph:
    """Minimal undirected graph, input side of the isomorphism reduction."""

    __slots__ = ("_vertices", "_index", "_edges")

    def __init__(self, vertices: Iterable, edges: Iterable[tuple] = ()):
        vs = []
        index: dict = {}
        for v in vertices:
            if v in index:
                raise ValueError(f"duplicate vertex {v!r}")
            index[v] = len(vs)
            vs.append(v)
        norm = set()
        for (u, v) in edges:
            if u not in index or v not in index:
                raise ValueError(f"edge {(u, v)!r} has an undeclared endpoint")
            a, b = sorted((u, v), key=index.__getitem__)
            norm.add((a, b))
        self._vertices = tuple(vs)
        self._index = index
        self._edges = frozenset(norm)

    @property
    def vertices(self):
        return self._vertices

    @property
    def edges(self):
        return self._edges

    def neighbors(self, v):
        out = set()
        for (a, b) in self._edges:
            if a == v:
                out.add(b)
            if b == v:
                out.add(a)
        return out

    def is_connected(self) -> bool:
        if not self._vertices:
            return False
        seen = {self._vertices[0]}
        queue = deque(seen)
        while queue:
            u = queue.popleft()
            for w in self.neighbors(u):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == len(self._vertices)

    def to_json_dict(self) -> dict:
        return {
            "vertices": list(self._vertices),
            "undirected_edges": sorted(
                ([a, b] for (a, b) in self._edges),
                key=lambda e: (self._index[e[0]], self._index[e[1]]),
            ),
        }

    @classmethod
    def from_json_dict(cls, data) -> "UndirectedGraph":
        if set(data) != {"vertices", "undirected_edges"}:
            raise ValueError(
                "undirected graph JSON must have exactly keys {vertices, undirected_edges}"
            )
        return cls(data["vertices"], [tuple(e) for e in data["undirected_edges"]])


def _double(g: UndirectedGraph) -> DirectedGraph:
    edges = set()
    for (u, v) in g.edges:
        edges.add((u, v))
        edges.add((v, u))
    return DirectedGraph(g.vertices, edges)


def gi_to_digraphs(g1: UndirectedGraph, g2: UndirectedGraph):
    """Replace each undirected edge with two opposite directed edges.

    Connected inputs give strongly connected digraphs, for which a
    1-block conjugacy between the vertex shifts exists exactly when the
    equal-sized originals are isomorphic.
    """
    for g in (g1, g2):
        if not g.is_connected():
            raise ValueError("gi_to_digraphs requires connected graphs")
    return _double(g1), _double(g2)


# -- vertex and edge gadgets ----------------------------------------------------


def _check_gadget_names(names):
    if len(set(names)) != len(names):
        raise ValueError("gadget vertex names collide; rename input vertices")


def vertex_gadget_pair(g: DirectedGraph, h: DirectedGraph, k: int):
    """Blow each vertex up into a decorated path, lifting 1-block to k-block.

    Source side: a path of k-1 inner vertices ending in a two-way
    diamond (k+3 vertices per original).  Target side: two parallel
    length-k paths (2k+2 vertices per original).  A 1-block conjugacy
    between the originals exists iff a k-block conjugacy exists between
    the gadget graphs.  k=1 is rejected: the gadget degenerates and the
    1-block problem needs no reduction.
    """
    if k < 2:
        raise ContractViolationError("vertex gadgets require k >= 2")

    def source_gadget(v):
        inner = [f"{v}__{i}" for i in range(1, k)]
        names = [f"{v}__in", *inner, f"{v}__{k}t", f"{v}__{k}b", f"{v}__out"]
        chain = [f"{v}__in", *inner]
        edges = list(zip(chain, chain[1:]))
        edges += [
            (chain[-1], f"{v}__{k}t"),
            (chain[-1], f"{v}__{k}b"),
            (f"{v}__{k}t", f"{v}__out"),
            (f"{v}__{k}b", f"{v}__out"),
        ]
        return names, edges

    def target_gadget(u):
        top = [f"{u}__{i}t" for i in range(1, k + 1)]
        bot = [f"{u}__{i}b" for i in range(1, k + 1)]
        names = [f"{u}__in", *top, *bot, f"{u}__out"]
        edges = []
        for branch in (top, bot):
            chain = [f"{u}__in", *branch, f"{u}__out"]
            edges += list(zip(chain, chain[1:]))
        return names, edges

    g_names, g_edges = [], []
    for v in g.vertices:
        names, edges = source_gadget(v)
        g_names += names
        g_edges += edges
    g_edges += [(f"{x}__out", f"{y}__in") for (x, y) in g.edges]
    _check_gadget_names(g_names)

    h_names, h_edges = [], []
    for u in h.vertices:
        names, edges = target_gadget(u)
        h_names += names
        h_edges += edges
    h_edges += [(f"{x}__out", f"{y}__in") for (x, y) in h.edges]
    _check_gadget_names(h_names)

    return DirectedGraph(g_names, g_edges), DirectedGraph(h_names, h_edges)


def edge_gadget_pair(g: MultiGraph, h: MultiGraph, k: int):
    """Edge-shift version of the vertex gadgets.

    Source side: each edge becomes a k-edge path, a parallel pair, and a
    closing edge (k+1 new vertices, k+3 labeled edges).  Target side: one
    edge, two parallel k-edge paths, one edge (2k new vertices, 2k+2
    edges).  Converting to vertex-shift presentations commutes with the
    vertex gadget construction under the shared naming scheme.
    """
    if k < 2:
        raise ContractViolationError("edge gadgets require k >= 2")

    def source_side(m: MultiGraph) -> MultiGraph:
        vs = list(m.vertices)
        es = []
        for (e, src, dst) in m.edges:
            mids = [f"{e}__n{i}" for i in range(1, k + 2)]
            vs += mids
            es.append((f"{e}__in", src, mids[0]))
            for i in range(1, k):
                es.append((f"{e}__{i}", mids[i - 1], mids[i]))
            es.append((f"{e}__{k}t", mids[k - 1], mids[k]))
            es.append((f"{e}__{k}b", mids[k - 1], mids[k]))
            es.append((f"{e}__out", mids[k], dst))
        return MultiGraph(vs, es)

    def target_side(m: MultiGraph) -> MultiGraph:
        vs = list(m.vertices)
        es = []
        for (f, src, dst) in m.edges:
            first = f"{f}__nin"
            last = f"{f}__nout"
            top = [f"{f}__t{i}" for i in range(1, k)]
            bot = [f"{f}__b{i}" for i in range(1, k)]
            vs += [first, *top, *bot, last]
            es.append((f"{f}__in", src, first))
            for tag, branch in (("t", top), ("b", bot)):
                chain = [first, *branch, last]
                for i in range(k):
                    es.append((f"{f}__{i + 1}{tag}", chain[i], chain[i + 1]))
            es.append((f"{f}__out", last, dst))
        return MultiGraph(vs, es)

    return source_side(g), target_side(h)


# -- structure property and weight widgets ---------------------------------------


@dataclass(frozen=True)
class StructurePartition:
    """The four-part vertex split {alpha} | A | B | C of the hardness host."""

    alpha: object
    A: frozenset
    B: frozenset
    C: frozenset


def has_structure_property(g: DirectedGraph, p: StructurePartition) -> bool:
    """Check the four neighborhood conditions plus essentiality.

    alpha carries a self-loop and is doubly adjacent to exactly A and C;
    A-vertices loop and feed B; C-vertices loop and are fed by B; B sits
    strictly between A and C.
    """
    parts = [frozenset({p.alpha}), p.A, p.B, p.C]
    union = frozenset().union(*parts)
    if union != frozenset(g.vertices):
        return False
    if sum(len(x) for x in parts) != len(g.vertices):
        return False
    star = {p.alpha} | p.A | p.C
    for v in g.vertices:
        if not g.out_degree(v) or not g.in_degree(v):
            return False
    if set(g.successors(p.alpha)) != star or set(g.predecessors(p.alpha)) != star:
        return False
    for a in p.A:
        if set(g.predecessors(a)) != {a, p.alpha}:
            return False
        succ = set(g.successors(a))
        if not {a, p.alpha} <= succ or not succ <= {a, p.alpha} | p.B:
            return False
    for c in p.C:
        if set(g.successors(c)) != {c, p.alpha}:
            return False
        pred = set(g.predecessors(c))
        if not {c, p.alpha} <= pred or not pred <= {c, p.alpha} | p.B:
            return False
    for b in p.B:
        if not set(g.predecessors(b)) <= p.A or not set(g.successors(b)) <= p.C:
            return False
    return True


@dataclass(frozen=True)
class WeightWidget:
    """A 2K-vertex switch: K extra amalgamations exactly when activated.

    The widget's B-chain interleaves with fresh A and C vertices so that
    a host vertex with in-neighborhood A* and out-neighborhood C* can be
    merged through the whole chain, one amalgamation per chain vertex.
    """

    widget_id: str
    K: int
    a_nodes: tuple
    b_nodes: tuple
    c_nodes: tuple
    a_star: frozenset
    c_star: frozenset


def attach_weight_widget(
    g: DirectedGraph,
    p: StructurePartition,
    a_star,
    c_star,
    K: int,
    widget_id: str,
    existing: Sequence[WeightWidget] = (),
):
    """Attach one weight widget to a structure-property host.

    A* and C* must be nonempty subsets of the host's A and C parts, and
    (so that each widget's chain stays private) must not touch the A/C
    vertices of previously attached widgets.  Returns the extended
    graph, the extended partition, and the widget record.
    """
    a_star = frozenset(a_star)
    c_star = frozenset(c_star)
    if K < 2 or K % 2:
        raise ValueError("K must be an even integer >= 2")
    if not a_star or not a_star <= p.A:
        raise ValueError("A* must be a nonempty subset of the A part")
    if not c_star or not c_star <= p.C:
        raise ValueError("C* must be a nonempty subset of the C part")
    for w in existing:
        if a_star & set(w.a_nodes) or c_star & set(w.c_nodes):
            raise ValueError(
                f"attachment sets touch widget {w.widget_id!r}; widget chains must stay private"
            )
    half = K // 2
    a_nodes = tuple(f"w{widget_id}__a{i}" for i in range(1, half + 1))
    b_nodes = tuple(f"w{widget_id}__b{i}" for i in range(1, K + 1))
    c_nodes = tuple(f"w{widget_id}__c{i}" for i in range(1, half + 1))
    for name in a_nodes + b_nodes + c_nodes:
        if name in g:
            raise ValueError(f"widget vertex name {name!r} already taken")
    edges = []
    for i in range(1, half + 1):
        odd = b_nodes[2 * i - 2]
        even = b_nodes[2 * i - 1]
        for src in sorted(a_star, key=g.vertex_index):
            edges.append((src, odd))
        for j in range(i - 1):
            edges.append((a_nodes[j], odd))
        edges.append((odd, c_nodes[i - 1]))
        edges.append((a_nodes[i - 1], even))
        for dst in sorted(c_star, key=g.vertex_index):
            edges.append((even, dst))
        for j in range(i):
            edges.append((even, c_nodes[j]))
    for x in a_nodes + c_nodes:
        edges += [(x, x), (x, p.alpha), (p.alpha, x)]
    new_g = g.extended(a_nodes + b_nodes + c_nodes, edges)
    new_p = StructurePartition(
        alpha=p.alpha,
        A=p.A | frozenset(a_nodes),
        B=p.B | frozenset(b_nodes),
        C=p.C | frozenset(c_nodes),
    )
    widget = WeightWidget(
        widget_id=widget_id,
        K=K,
        a_nodes=a_nodes,
        b_nodes=b_nodes,
        c_nodes=c_nodes,
        a_star=a_star,
        c_star=c_star,
    )
    return new_g, new_p, widget


# -- the hitting-set reduction ------------------------------------------------------


@dataclass(frozen=True)
class HittingSetReduction:
    """Output of the reduction: host graph plus everything tests need.

    ``connectors``: (set_name, element-or-beta) -> B-vertex name.
    ``incidence_widgets``: (set_name, element) -> WeightWidget.
    ``element_widgets``: element -> WeightWidget.
    """

    instance: HittingSetInstance
    graph: DirectedGraph
    partition: StructurePartition
    set_names: tuple
    beta: str
    K: int
    test_scale: bool
    connectors: Mapping
    incidence_widgets: Mapping
    element_widgets: Mapping

    @property
    def widgets(self) -> tuple:
        return tuple(self.incidence_widgets.values()) + tuple(self.element_widgets.values())

    def metadata_json_dict(self) -> dict:
        return {
            "m": len(self.instance.sets),
            "n": len(self.instance.universe),
            "K": self.K,
            "test_scale": self.test_scale,
            "set_names": list(self.set_names),
            "beta": self.beta,
            "alpha": self.partition.alpha,
            "connectors": {f"{s}|{e}": b for (s, e), b in self.connectors.items()},
            "widgets": [
                {
                    "id": w.widget_id,
                    "K": w.K,
                    "a_star": sorted(map(str, w.a_star)),
                    "c_star": sorted(map(str, w.c_star)),
                }
                for w in self.widgets
            ],
        }


def hitting_set_reduction(
    instance: HittingSetInstance,
    K: Optional[int] = None,
    include_widgets: bool = True,
) -> HittingSetReduction:
    """Build the structure-property graph encoding a hitting-set instance.

    Sets become A-vertices, universe elements plus a fresh beta become
    C-vertices, one B-connector per set/element incidence and per set's
    beta link, then (optionally) one weight widget per incidence and one
    per element, and finally the alpha wiring.  K defaults to 5*m*n
    rounded up to even; smaller K builds are flagged test-scale since
    the hardness argument's counting needs the full value.
    """
    sets = instance.sets
    universe = instance.universe
    if not sets or not universe:
        raise ValueError("instance must have at least one set and one element")
    for s in universe:
        if not instance.hit(s):
            raise ValueError(f"element {s!r} is in no set; the construction assumes U = union(S)")
    m, n = len(sets), len(universe)
    full_K = 5 * m * n + (5 * m * n) % 2
    if K is None:
        K = full_K
    test_scale = K < full_K
    if include_widgets and test_scale:
        warnings.warn(
            f"K={K} below the sound value {full_K}; construction flagged test-scale",
            stacklevel=2,
        )

    set_names = tuple(f"S{i + 1}" for i in range(m))
    for name in universe:
        if not isinstance(name, str):
            raise ValueError("universe elements must be strings for vertex naming")
    beta = "beta"
    alpha = "alpha"
    reserved = set(set_names) | {beta, alpha}
    if reserved & set(universe):
        raise ValueError("universe elements collide with reserved names S*/alpha/beta")

    a_part = list(set_names)
    c_part = list(universe) + [beta]
    connectors: dict = {}
    b_part = []
    edges = []
    for i, s_i in enumerate(sets):
        for s in (x for x in universe if x in s_i):
            b = f"b__{set_names[i]}__{s}"
            connectors[(set_names[i], s)] = b
            b_part.append(b)
            edges += [(set_names[i], b), (b, s)]
        b = f"b__{set_names[i]}__{beta}"
        connectors[(set_names[i], beta)] = b
        b_part.append(b)
        edges += [(set_names[i], b), (b, beta)]
    for x in a_part + c_part:
        edges += [(x, alpha), (alpha, x), (x, x)]
    edges.append((alpha, alpha))

    graph = DirectedGraph(a_part + c_part + b_part + [alpha], edges)
    partition = StructurePartition(
        alpha=alpha, A=frozenset(a_part), B=frozenset(b_part), C=frozenset(c_part)
    )
    if not has_structure_property(graph, partition):
        raise AssertionError("base reduction graph lost the structure property")

    incidence_widgets: dict = {}
    element_widgets: dict = {}
    if include_widgets:
        attached: list = []
        for i, s_i in enumerate(sets):
            for s in (x for x in universe if x in s_i):
                graph, partition, w = attach_weight_widget(
                    graph,
                    partition,
                    {set_names[i]},
                    {s, beta},
                    K,
                    widget_id=f"{set_names[i]}_{s}",
                    existing=attached,
                )
                incidence_widgets[(set_names[i], s)] = w
                attached.append(w)
        for s in universe:
            hit_names = {set_names[i] for i in instance.hit(s)}
            graph, partition, w = attach_weight_widget(
                graph,
                partition,
                hit_names,
                {s},
                K,
                widget_id=f"{s}",
                existing=attached,
            )
            element_widgets[s] = w
            attached.append(w)

    return HittingSetReduction(
        instance=instance,
        graph=graph,
        partition=partition,
        set_names=set_names,
        beta=beta,
        K=K,
        test_scale=test_scale,
        connectors=connectors,
        incidence_widgets=incidence_widgets,
        element_widgets=element_widgets,
    )


# -- the constructive amalgamation schedule -------------------------------------------


def _widget_chain_steps(start_name: str, widget: WeightWidget):
    """Merging a v:[A*, C*] vertex through a widget's B-chain, in order.

    Odd chain vertices share in-neighborhoods with the running merge
    ("in" amalgamations), even ones share out-neighborhoods ("out").
    """
    steps = []
    cur = start_name
    for j, b in enumerate(widget.b_nodes):
        kind = "in" if j % 2 == 0 else "out"
        new = f"{cur}+{b}"
        steps.append(AmalgamationStep(kind=kind, merged=(cur, b), new_name=new))
        cur = new
    return steps, cur


def activation_schedule(reduction: HittingSetReduction, hitting_set) -> list:
    """Amalgamation sequence realized by a hitting set.

    For each set, the connector to its chosen hit element merges with
    the beta connector and activates that incidence widget; every
    unchosen element merges all its connectors and activates its element
    widget.  Every step satisfies the amalgamation condition at the
    moment it is applied, giving at least (m + n - t)K steps in total.
    """
    chosen = set(hitting_set)
    instance = reduction.instance
    missed = [i for i, s in enumerate(instance.sets) if not (chosen & set(s))]
    if missed:
        raise ValueError(f"not a hitting set: set index {missed[0]} is not hit")
    steps: list = []
    for i, s_i in enumerate(instance.sets):
        name = reduction.set_names[i]
        s = next(x for x in instance.universe if x in s_i and x in chosen)
        b_elem = reduction.connectors[(name, s)]
        b_beta = reduction.connectors[(name, reduction.beta)]
        cur = f"{b_elem}+{b_beta}"
        steps.append(AmalgamationStep(kind="in", merged=(b_elem, b_beta), new_name=cur))
        widget = reduction.incidence_widgets.get((name, s))
        if widget is not None:
            chain, _ = _widget_chain_steps(cur, widget)
            steps += chain
    for s in instance.universe:
        if s in chosen:
            continue
        names = [reduction.set_names[i] for i in instance.hit(s)]
        connectors = [reduction.connectors[(nm, s)] for nm in names]
        cur = connectors[0]
        for b in connectors[1:]:
            new = f"{cur}+{b}"
            steps.append(AmalgamationStep(kind="out", merged=(cur, b), new_name=new))
            cur = new
        widget = reduction.element_widgets.get(s)
        if widget is not None:
            chain, _ = _widget_chain_steps(cur, widget)
            steps += chain
    return steps


def apply_schedule(graph: DirectedGraph, steps: Sequence[AmalgamationStep]):
    """Run a schedule, checking each merge, and build the composite code.

    Returns the final graph and the 1-block map from the original
    vertices onto it; the map verifies as a conjugacy whenever every
    step is a legal amalgamation.
    """
    cur = graph
    where = {v: v for v in graph.vertices}
    for step in steps:
        u, v = step.merged
        if can_amalgamate(cur, u, v) is None:
            raise ContractViolationError(f"schedule step {step} is not applicable")
        cur = amalgamate(cur, u, v, step.new_name)
        for orig, now in where.items():
            if now == u or now == v:
                where[orig] = step.new_name
    return cur, BlockMap.one_block(where)
