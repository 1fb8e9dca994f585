"""Independent decision oracles and desk-scale searches.

``oracle_is_conjugacy`` decides conjugacy by entirely different means
than the verifier: injectivity via survival of off-diagonal pairs in the
trimmed pair graph, surjectivity via subset-construction containment of
the target language in the image language.  It exists to cross-check the
verifier and is exponential-ish by design.

The searches (k-block conjugacy existence, 1-block size reduction) are
exhaustive with deterministic enumeration order; the underlying
problems are hard, so budgets make giving up explicit.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Mapping, Optional

from .errors import BudgetExceededError, ContractViolationError
from .graphs import (
    DirectedGraph,
    strongly_connected_components,
    trim_to_essential,
)
from .shifts import (
    CONJUGATE,
    FAILURE_NOT_INJECTIVE,
    FAILURE_NOT_SURJECTIVE,
    BlockMap,
    CyclePairWitness,
    DiamondWitness,
    UnreachedWordWitness,
    Verdict,
    higher_block_graph,
    pair_graph_index,
    _find_diamond_path,
    _flatten_lifted_word,
)
from .verifier import _prepare, verify

__all__ = [
    "AmalgamationStep",
    "HittingSetInstance",
    "can_amalgamate",
    "amalgamate",
    "split",
    "oracle_is_conjugacy",
    "decide_k_block_conjugacy",
    "search_one_block_reduction",
    "hitting_set_brute",
]


# -- amalgamation and splitting ----------------------------------------------


@dataclass(frozen=True)
class AmalgamationStep:
    """One state merge: which pair, which condition it met, the new name."""

    kind: str  # "out": equal out-neighborhoods; "in": equal in-neighborhoods
    merged: tuple
    new_name: object


def can_amalgamate(g: DirectedGraph, u, v) -> Optional[str]:
    """Which amalgamation condition the pair meets, if any.

    "out" means N+(u) = N+(v) with disjoint in-neighborhoods, "in" the
    mirror.  Self-loops take part through the plain neighborhood sets.
    """
    if u == v:
        raise ContractViolationError("cannot amalgamate a vertex with itself")
    if u not in g or v not in g:
        raise ContractViolationError("both vertices must be in the graph")
    su, sv = set(g.successors(u)), set(g.successors(v))
    pu, pv = set(g.predecessors(u)), set(g.predecessors(v))
    if su == sv and not (pu & pv):
        return "out"
    if pu == pv and not (su & sv):
        return "in"
    return None


def amalgamate(g: DirectedGraph, u, v, new_name) -> DirectedGraph:
    """Merge an amalgamatable pair into one vertex named ``new_name``.

    The merged vertex takes the union of the two neighborhoods; edges
    between u and v become a self-loop.  The induced 1-block map (u, v
    to new_name, identity elsewhere) is a conjugacy.
    """
    if can_amalgamate(g, u, v) is None:
        raise ContractViolationError(f"{u!r} and {v!r} cannot be amalgamated")
    if new_name in g and new_name not in (u, v):
        raise ValueError(f"new name {new_name!r} already taken")
    ren = {u: new_name, v: new_name}
    first = min(g.vertex_index(u), g.vertex_index(v))
    vs = []
    for i, w in enumerate(g.vertices):
        if w in (u, v):
            if i == first:
                vs.append(new_name)
            continue
        vs.append(w)
    es = {(ren.get(s, s), ren.get(d, d)) for (s, d) in g.edges}
    return DirectedGraph(vs, es)


def split(g: DirectedGraph, v, partition, names, kind: str = "out") -> DirectedGraph:
    """State splitting, the inverse of amalgamation.

    For an out-split, ``partition`` is a pair of disjoint nonempty sets
    covering N+(v); both copies keep all in-edges of ``v``.  A self-loop
    follows the same rules with v a member of its own neighborhoods: the
    copy owning the loop sends an edge to both copies.  Amalgamating the
    two new vertices returns the original graph.
    """
    if kind not in ("out", "in"):
        raise ValueError("kind must be 'out' or 'in'")
    if v not in g:
        raise ContractViolationError(f"vertex {v!r} not in graph")
    p1, p2 = set(partition[0]), set(partition[1])
    base = set(g.successors(v)) if kind == "out" else set(g.predecessors(v))
    if not p1 or not p2 or (p1 & p2) or (p1 | p2) != base:
        raise ValueError("partition must be two disjoint nonempty sets covering the neighborhood")
    n1, n2 = names
    if n1 == n2 or (n1 in g and n1 != v) or (n2 in g and n2 != v):
        raise ValueError("split names must be fresh and distinct")
    vs = []
    for w in g.vertices:
        if w == v:
            vs.extend([n1, n2])
        else:
            vs.append(w)
    copy_of = {True: n1, False: n2}
    es = []
    for (s, d) in g.edges:
        if s == v and d == v:
            owner = copy_of[v in p1]
            es += [(owner, n1), (owner, n2)] if kind == "out" else [(n1, owner), (n2, owner)]
        elif s == v:
            if kind == "out":
                es.append((copy_of[d in p1], d))
            else:
                es += [(n1, d), (n2, d)]
        elif d == v:
            if kind == "out":
                es += [(s, n1), (s, n2)]
            else:
                es.append((s, copy_of[s in p1]))
        else:
            es.append((s, d))
    return DirectedGraph(vs, es)


# -- the independent conjugacy oracle -----------------------------------------


def _pair_graph_directed(g: DirectedGraph, vmap: Mapping) -> DirectedGraph:
    pairs, succ, _pred, _ = pair_graph_index(g, vmap)
    edges = [(pairs[i], pairs[j]) for i in range(len(pairs)) for j in succ[i]]
    return DirectedGraph(pairs, edges)


def _injectivity_witness(trimmed_pairs: DirectedGraph, k: int):
    """Explain a surviving off-diagonal pair as cycles or a diamond."""
    # A cycle through an off-diagonal pair gives two equal-image cycles.
    for comp in strongly_connected_components(trimmed_pairs):
        has_cycle = len(comp) > 1 or trimmed_pairs.has_edge(next(iter(comp)), next(iter(comp)))
        off = sorted(
            (p for p in comp if p[0] != p[1]),
            key=trimmed_pairs.vertex_index,
        )
        if not has_cycle or not off:
            continue
        start = off[0]
        parent = {start: None}
        queue = deque([start])
        while queue:
            p = queue.popleft()
            for q in trimmed_pairs.successors(p):
                if q == start:
                    path = [p]
                    while parent[path[-1]] is not None:
                        path.append(parent[path[-1]])
                    path.reverse()
                    first = _flatten_cycle([x for x, _ in path], k)
                    second = _flatten_cycle([y for _, y in path], k)
                    return CyclePairWitness(first=first, second=second)
                if q in comp and q not in parent:
                    parent[q] = p
                    queue.append(q)
    # Otherwise every cycle is diagonal and the survivor sits on a
    # diagonal-to-diagonal path: a diamond.
    pairs = list(trimmed_pairs.vertices)
    succ = trimmed_pairs.successor_index_lists()
    pred = trimmed_pairs.predecessor_index_lists()
    path = _find_diamond_path(pairs, succ, pred)
    if path is None:
        return None
    word_a = _flatten_lifted_word([pairs[i][0] for i in path], k)
    word_b = _flatten_lifted_word([pairs[i][1] for i in path], k)
    m = len(path) - 1
    return DiamondWitness(word_a[:k], word_a[k:m], word_b[k:m], word_a[m:])


def _flatten_cycle(cycle, k):
    if k == 1:
        return tuple(cycle)
    return tuple(t[0] for t in cycle)


def oracle_is_conjugacy(
    g: DirectedGraph, h: DirectedGraph, phi: BlockMap, budget: int = 200_000
) -> Verdict:
    """Brute-force conjugacy decision, independent of the verifier.

    Injectivity: two distinct points with equal image exist exactly when
    an off-diagonal equal-image pair survives trimming of the pair graph
    to its essential part.  Surjectivity: the target language embeds in
    the image language, tested by running the subset construction over
    the image-labeled source graph along every target walk and watching
    for a dead (empty) subset.  Desk scale only; ``budget`` caps the
    number of determinized states.
    """
    prepared = _prepare(g, h, phi)
    if isinstance(prepared, Verdict):
        return prepared
    g1, ht, vmap, _unlift = prepared
    k = phi.block_size

    pair_graph = _pair_graph_directed(g1, vmap)
    survivors = trim_to_essential(pair_graph)
    if any(x != y for (x, y) in survivors.vertices):
        witness = _injectivity_witness(survivors, k)
        return Verdict(False, FAILURE_NOT_INJECTIVE, witness)

    preimages: dict = {u: [] for u in ht.vertices}
    for v in g1.vertices:
        preimages[vmap[v]].append(v)
    start_states = [(u, frozenset(preimages[u])) for u in ht.vertices]
    parent: dict = {}
    queue = deque()
    for state in start_states:
        if state not in parent:
            if len(parent) >= budget:
                raise BudgetExceededError(f"subset construction exceeded {budget} states")
            parent[state] = None
            queue.append(state)
    while queue:
        state = queue.popleft()
        u, subset = state
        if not subset:
            word = []
            s = state
            while s is not None:
                word.append(s[0])
                s = parent[s]
            word.reverse()
            return Verdict(
                False, FAILURE_NOT_SURJECTIVE, UnreachedWordWitness(tuple(word))
            )
        for u2 in ht.successors(u):
            subset2 = frozenset(
                w for x in subset for w in g1.successors(x) if vmap[w] == u2
            )
            nxt = (u2, subset2)
            if nxt not in parent:
                if len(parent) >= budget:
                    raise BudgetExceededError(
                        f"subset construction exceeded {budget} states"
                    )
                parent[nxt] = state
                queue.append(nxt)
    return CONJUGATE


# -- k-block conjugacy search ---------------------------------------------------


def decide_k_block_conjugacy(
    g: DirectedGraph, h: DirectedGraph, k: int, budget: int = 1_000_000
) -> Optional[BlockMap]:
    """Search for a k-block conjugacy from X_g to X_h.

    Enumerates total maps from the length-k paths of the trimmed source
    graph to target vertices in lexicographic table order, pruning
    assignments that already fail the edge-image condition, and returns
    the first map the verifier accepts.  Exponential by design; raises
    BudgetExceededError past ``budget`` search nodes, which keeps "no
    conjugacy" distinct from "gave up".
    """
    if k < 1:
        raise ContractViolationError("k must be >= 1")
    gt = trim_to_essential(g)
    ht = trim_to_essential(h)
    if gt.is_empty and ht.is_empty:
        return BlockMap(block_size=k, memory=0, table={})
    if gt.is_empty or ht.is_empty:
        return None

    hb = higher_block_graph(gt, k)
    keys = list(hb.vertices)  # lexicographic in vertex order by construction
    key_pos = {p: i for i, p in enumerate(keys)}
    # adjacency between window keys = edges of the higher block graph
    succ_keys = [[key_pos[q] for q in hb.successors(p)] for p in keys]
    pred_keys = [[key_pos[q] for q in hb.predecessors(p)] for p in keys]
    targets = ht.vertices
    assigned: list = [None] * len(keys)
    nodes = 0

    def candidates(i):
        for t in targets:
            ok = True
            for j in pred_keys[i]:
                if j < i and not ht.has_edge(assigned[j], t):
                    ok = False
                    break
            if ok:
                for j in succ_keys[i]:
                    if j < i and not ht.has_edge(t, assigned[j]):
                        ok = False
                        break
            if ok:
                yield t

    def table_of():
        if k == 1:
            return {(p,): assigned[i] for i, p in enumerate(keys)}
        return {p: assigned[i] for i, p in enumerate(keys)}

    if not keys:
        cand = BlockMap(block_size=k, memory=0, table={})
        return cand if verify(g, h, cand).is_conjugacy else None

    # explicit-stack DFS: one candidate iterator per assigned prefix
    stack = [candidates(0)]
    while stack:
        i = len(stack) - 1
        descended = False
        for t in stack[-1]:
            nodes += 1
            if nodes > budget:
                raise BudgetExceededError(
                    f"k-block conjugacy search exceeded {budget} nodes"
                )
            assigned[i] = t
            if i + 1 == len(keys):
                cand = BlockMap(block_size=k, memory=0, table=table_of())
                if verify(g, h, cand).is_conjugacy:
                    return cand
                continue
            stack.append(candidates(i + 1))
            descended = True
            break
        if not descended:
            assigned[i] = None
            stack.pop()
    return None


# -- 1-block size reduction -------------------------------------------------------


def _partitions_with_blocks(n: int, blocks: int):
    """Restricted growth strings with exactly ``blocks`` distinct values."""
    a = [0] * n

    def rec(i, mx):
        if i == n:
            if mx + 1 == blocks:
                yield tuple(a)
            return
        remaining = n - i
        for val in range(0, min(mx + 1, blocks - 1) + 1):
            new_mx = max(mx, val)
            if blocks - (new_mx + 1) > remaining - 1:
                continue
            a[i] = val
            yield from rec(i + 1, new_mx)

    if n == 0:
        if blocks == 0:
            yield ()
        return
    yield from rec(0, -1)


def minimal_image_graph(g: DirectedGraph, vmap: Mapping) -> DirectedGraph:
    """Smallest graph making a vertex map a valid 1-block code."""
    seen = {}
    for v in g.vertices:
        seen.setdefault(vmap[v], None)
    edges = {(vmap[s], vmap[d]) for (s, d) in g.edges}
    return DirectedGraph(seen.keys(), edges)


def search_one_block_reduction(
    g: DirectedGraph, ell: int, budget: int = 1_000_000
) -> Optional[tuple]:
    """Find a 1-block conjugacy shrinking ``g`` by ``ell`` vertices.

    Enumerates set partitions of the vertices into exactly |V|-ell
    blocks (restricted growth strings, lexicographic), builds the
    minimal image graph of each, and verifies.  Partition blocks become
    tuple-named vertices of the image.  Returns (block map, image graph)
    for the first success, None if the space is exhausted.
    """
    if ell < 0:
        raise ContractViolationError("ell must be >= 0")
    n = len(g)
    blocks = n - ell
    if blocks < 1 or blocks > n:
        return None
    examined = 0
    vs = g.vertices
    for rgs in _partitions_with_blocks(n, blocks):
        examined += 1
        if examined > budget:
            raise BudgetExceededError(f"reduction search exceeded {budget} partitions")
        members: dict = {}
        for i, b in enumerate(rgs):
            members.setdefault(b, []).append(vs[i])
        block_name = {b: tuple(ms) for b, ms in members.items()}
        vmap = {vs[i]: block_name[rgs[i]] for i in range(n)}
        image = minimal_image_graph(g, vmap)
        cand = BlockMap.one_block(vmap)
        if verify(g, image, cand).is_conjugacy:
            return cand, image
    return None


# -- hitting set ---------------------------------------------------------------


@dataclass(frozen=True)
class HittingSetInstance:
    """A collection of sets over a universe plus a target size t."""

    sets: tuple
    universe: tuple
    t: int

    def __post_init__(self):
        seen = set()
        for u in self.universe:
            if u in seen:
                raise ValueError(f"duplicate universe element {u!r}")
            seen.add(u)
        for s in self.sets:
            for x in s:
                if x not in seen:
                    raise ValueError(f"set element {x!r} not in universe")

    @classmethod
    def from_json_dict(cls, data) -> "HittingSetInstance":
        if set(data) != {"sets", "universe", "t"}:
            raise ValueError("hitting-set JSON must have exactly keys {sets, universe, t}")
        return cls(
            sets=tuple(tuple(s) for s in data["sets"]),
            universe=tuple(data["universe"]),
            t=int(data["t"]),
        )

    def to_json_dict(self) -> dict:
        return {
            "sets": [list(s) for s in self.sets],
            "universe": list(self.universe),
            "t": self.t,
        }

    def hit(self, element) -> tuple:
        """Indices of the sets containing ``element``."""
        return tuple(i for i, s in enumerate(self.sets) if element in s)


def hitting_set_brute(instance: HittingSetInstance) -> Optional[tuple]:
    """Smallest hitting set of size at most t, by exhaustive search."""
    sets = [set(s) for s in instance.sets]
    for size in range(0, instance.t + 1):
        for combo in itertools.combinations(instance.universe, size):
            chosen = set(combo)
            if all(chosen & s for s in sets):
                return combo
    return None
