"""Polynomial-time verification of proposed block-code conjugacies.

The pipeline: trim both graphs, recode the k-block map to a 1-block map
on the higher block graph, then decide cycle-map bijectivity.  For
irreducible inputs that is a pair-graph (meta-graph) injectivity test
plus exact trace comparison.  Reducible inputs are first embedded into
irreducible ones by adding fresh sink/source vertices and a hub vertex,
a transformation that preserves conjugacy in both directions; a diamond
search guards the embedding against degenerate non-conjugacies whose
augmented source graph fails to become irreducible.
"""

from __future__ import annotations

from collections import deque
from typing import Mapping

from . import kernels
from .errors import ContractViolationError, InvalidBlockMapError
from .graphs import (
    DirectedGraph,
    MultiGraph,
    is_irreducible,
    reverse_edges,
    shortest_cycle_through,
    strongly_connected_components,
    trim_to_essential,
)
from .shifts import (
    CONJUGATE,
    FAILURE_INVALID_CODE,
    FAILURE_NOT_INJECTIVE,
    FAILURE_NOT_SURJECTIVE,
    BlockMap,
    CyclePairWitness,
    DiamondWitness,
    TraceMismatchWitness,
    UnreachedWordWitness,
    Verdict,
    edge_to_vertex,
    iter_paths,
    lift_block_map,
    pair_graph_index,
    _find_diamond_path,
    _flatten_lifted_word,
)

__all__ = [
    "is_valid_block_map",
    "is_injective_cycle_map",
    "is_conjugacy_irreducible",
    "add_sink_components",
    "add_source_components",
    "augment_to_irreducible",
    "verify",
    "verify_edge_shift",
]


# -- validity ---------------------------------------------------------------


def is_valid_block_map(g: DirectedGraph, h: DirectedGraph, phi: BlockMap) -> bool:
    """True iff ``phi`` induces a sliding block code from X_g into X_h.

    Checks totality on the length-k paths of ``g``, that images are
    vertices of ``h``, and that every length-(k+1) path maps to an edge
    of ``h``.
    """
    k = phi.block_size
    table = phi.table
    for p in iter_paths(g, k):
        if p not in table or table[p] not in h:
            return False
    for p in iter_paths(g, k + 1):
        if not h.has_edge(table[p[:k]], table[p[1:]]):
            return False
    return True


def _valid_one_block(g: DirectedGraph, h: DirectedGraph, vmap: Mapping) -> bool:
    for v in g.vertices:
        if vmap.get(v) not in h:
            return False
    for (x, y) in g.edges:
        if not h.has_edge(vmap[x], vmap[y]):
            return False
    return True


# -- cycle-map injectivity (meta-graph) --------------------------------------


def _offending_meta_cycle(g: DirectedGraph, vmap: Mapping):
    """Cycle of vertex pairs witnessing two distinct equal-image cycles.

    Builds the meta-graph on equal-image pairs and looks for a strongly
    connected component that contains an edge and an off-diagonal pair.
    Returns the pair-index cycle or None.
    """
    pairs, succ, _pred, _ = pair_graph_index(g, vmap)
    comps = kernels.tarjan_scc(succ)
    for comp in comps:
        if len(comp) == 1:
            i = comp[0]
            if i not in succ[i]:
                continue
        members = set(comp)
        off = [i for i in comp if pairs[i][0] != pairs[i][1]]
        if not off:
            continue
        start = min(off)
        # BFS back to start inside the component; exists because the
        # component is strongly connected and contains an edge.
        parent = {start: None}
        queue = deque([start])
        while queue:
            i = queue.popleft()
            for j in succ[i]:
                if j == start:
                    path = [i]
                    while parent[path[-1]] is not None:
                        path.append(parent[path[-1]])
                    path.reverse()
                    return [pairs[x] for x in path]
                if j in members and j not in parent:
                    parent[j] = i
                    queue.append(j)
    return None


def is_injective_cycle_map(g: DirectedGraph, h: DirectedGraph, phi: BlockMap):
    """Decide injectivity of the map induced on cycles by a 1-block code.

    Returns ``(True, None)`` or ``(False, witness)`` where the witness is
    a pair of distinct cycles of ``g`` with the same image word.
    """
    if phi.block_size != 1:
        raise ContractViolationError("is_injective_cycle_map requires a 1-block map")
    cycle = _offending_meta_cycle(g, phi.as_vertex_map())
    if cycle is None:
        return True, None
    return False, CyclePairWitness(
        first=tuple(x for x, _ in cycle), second=tuple(y for _, y in cycle)
    )


# -- trace comparison ---------------------------------------------------------


def _first_trace_mismatch(g: DirectedGraph, h: DirectedGraph):
    """First power i <= max(|V_g|, |V_h|) where tr(A_g^i) != tr(A_h^i)."""
    horizon = max(len(g), len(h))
    rows_g = g.adjacency_matrix()
    rows_h = h.adjacency_matrix()
    prep_g = kernels.prepare_preds(g.predecessor_index_lists())
    prep_h = kernels.prepare_preds(h.predecessor_index_lists())
    for i in range(1, horizon + 1):
        tg = kernels.matrix_trace(rows_g)
        th = kernels.matrix_trace(rows_h)
        if tg != th:
            return i, tg, th
        if i < horizon:
            rows_g = kernels.count_matmul_step(rows_g, prep_g)
            rows_h = kernels.count_matmul_step(rows_h, prep_h)
    return None


# -- irreducible decision ------------------------------------------------------


def _unlift_cycle(cycle, unlift):
    if unlift is None:
        return tuple(cycle)
    return tuple(unlift.get(v, v) for v in cycle)


def _bijection_verdict(g, h, vmap, unlift=None) -> Verdict:
    """Cycle-map injectivity plus full trace agreement."""
    cycle = _offending_meta_cycle(g, vmap)
    if cycle is not None:
        witness = CyclePairWitness(
            first=_unlift_cycle((x for x, _ in cycle), unlift),
            second=_unlift_cycle((y for _, y in cycle), unlift),
        )
        return Verdict(False, FAILURE_NOT_INJECTIVE, witness)
    mismatch = _first_trace_mismatch(g, h)
    if mismatch is not None:
        i, tg, th = mismatch
        return Verdict(
            False,
            FAILURE_NOT_SURJECTIVE,
            TraceMismatchWitness(power=i, source_trace=tg, target_trace=th),
        )
    return CONJUGATE


def is_conjugacy_irreducible(g: DirectedGraph, h: DirectedGraph, phi: BlockMap) -> Verdict:
    """Decide conjugacy of a 1-block code between irreducible vertex shifts.

    Conjugacy holds iff the induced cycle map is injective and the trace
    sequences agree up to max(|V_g|, |V_h|); injectivity plus equal
    counts per length makes the cycle map a bijection, and surjectivity
    on a dense set of points gives surjectivity everywhere.
    """
    if phi.block_size != 1:
        raise ContractViolationError("is_conjugacy_irreducible requires a 1-block map")
    if not is_irreducible(g) or not is_irreducible(h):
        raise ContractViolationError("is_conjugacy_irreducible requires irreducible inputs")
    vmap = phi.as_vertex_map()
    if not _valid_one_block(g, h, vmap):
        return Verdict(False, FAILURE_INVALID_CODE)
    return _bijection_verdict(g, h, vmap)


# -- reducible-case augmentation ----------------------------------------------


def _fresh_name(taken, base):
    name = base
    while name in taken:
        name = name + "_"
    return name


def _component_kinds(h: DirectedGraph):
    """(components, is_sink flags, is_source flags), components in SCC order."""
    comps = strongly_connected_components(h)
    comp_of = {}
    for ci, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = ci
    is_sink = [True] * len(comps)
    is_source = [True] * len(comps)
    for (s, d) in h.edges:
        cs, cd = comp_of[s], comp_of[d]
        if cs != cd:
            is_sink[cs] = False
            is_source[cd] = False
    return comps, is_sink, is_source


def _cyclic_vertices(g: DirectedGraph):
    """Vertices lying on some cycle of ``g``."""
    out = set()
    for comp in strongly_connected_components(g):
        if len(comp) > 1:
            out |= comp
        else:
            (v,) = comp
            if g.has_edge(v, v):
                out.add(v)
    return out


def _add_sinks(g: DirectedGraph, h: DirectedGraph, vmap: dict, prefix: str):
    """One pass of the sink-vertex augmentation over every sink component.

    For each sink component T of ``h`` whose preimage is not already a
    matched singleton, a fresh terminal vertex t (self-loop plus an edge
    from a cycle vertex v of T) is added to ``h``, and a fresh terminal
    t' is added to ``g`` fed by exactly those preimages of v that can
    follow the chosen cycle forever.  Conjugacy is preserved in both
    directions.
    """
    comps, is_sink, _ = _component_kinds(h)
    taken = set(h.vertices) | set(g.vertices)
    counter = 0
    new_g, new_h, new_map = g, h, dict(vmap)
    for ci, comp in enumerate(comps):
        if not is_sink[ci]:
            continue
        preimage = [u for u in g.vertices if vmap[u] in comp]
        if len(comp) == 1 and len(preimage) == 1:
            continue
        v = min(comp, key=h.vertex_index)
        cycle = shortest_cycle_through(h.subgraph(comp), v)
        if cycle is None:  # impossible for a sink component of an essential graph
            raise ContractViolationError("sink component without a cycle; graph not essential")
        cycle_vertices = set(cycle)
        cycle_edges = {(cycle[i], cycle[(i + 1) % len(cycle)]) for i in range(len(cycle))}
        # pullback of the cycle: preimage vertices and edges mapping onto it
        pullback_vs = [u for u in preimage if vmap[u] in cycle_vertices]
        pullback_set = set(pullback_vs)
        pullback_edges = [
            (u, w)
            for u in pullback_vs
            for w in g.successors(u)
            if w in pullback_set and (vmap[u], vmap[w]) in cycle_edges
        ]
        pullback = DirectedGraph(pullback_vs, pullback_edges)
        cyclic = _cyclic_vertices(pullback)
        reach = set(cyclic)
        queue = deque(cyclic)
        while queue:
            u = queue.popleft()
            for w in pullback.predecessors(u):
                if w not in reach:
                    reach.add(w)
                    queue.append(w)
        chosen = [u for u in pullback_vs if vmap[u] == v and u in reach]
        t_name = _fresh_name(taken, f"__{prefix}{counter}")
        taken.add(t_name)
        tp_name = _fresh_name(taken, f"__{prefix}{counter}p")
        taken.add(tp_name)
        counter += 1
        new_h = new_h.extended([t_name], [(t_name, t_name), (v, t_name)])
        new_g = new_g.extended(
            [tp_name], [(tp_name, tp_name)] + [(u, tp_name) for u in chosen]
        )
        new_map[tp_name] = t_name
    return new_g, new_h, new_map


def _check_augmentation_pre(g, h, phi):
    if phi.block_size != 1:
        raise ContractViolationError("augmentation requires a 1-block map")
    if len(trim_to_essential(g)) != len(g) or len(trim_to_essential(h)) != len(h):
        raise ContractViolationError("augmentation requires essential graphs")


def add_sink_components(g: DirectedGraph, h: DirectedGraph, phi: BlockMap):
    """Collapse every sink component of ``h`` onto a fresh terminal vertex."""
    _check_augmentation_pre(g, h, phi)
    new_g, new_h, new_map = _add_sinks(g, h, phi.as_vertex_map(), "t")
    return new_g, new_h, BlockMap.one_block(new_map)


def add_source_components(g: DirectedGraph, h: DirectedGraph, phi: BlockMap):
    """Mirror of :func:`add_sink_components` on reversed edges."""
    _check_augmentation_pre(g, h, phi)
    rg, rh = reverse_edges(g), reverse_edges(h)
    new_g, new_h, new_map = _add_sinks(rg, rh, phi.as_vertex_map(), "s")
    return reverse_edges(new_g), reverse_edges(new_h), BlockMap.one_block(new_map)


def augment_to_irreducible(g: DirectedGraph, h: DirectedGraph, phi: BlockMap):
    """Join single-vertex sinks and sources through a fresh hub vertex.

    Requires every sink/source component of ``h`` to be a singleton with
    a singleton preimage (the state after both augmentation passes); the
    hub makes ``h`` irreducible while preserving conjugacy either way.
    """
    _check_augmentation_pre(g, h, phi)
    vmap = phi.as_vertex_map()
    comps, is_sink, is_source = _component_kinds(h)
    preimages: dict = {}
    for u in g.vertices:
        preimages.setdefault(vmap[u], []).append(u)
    sink_states, source_states = [], []
    sink_pre, source_pre = [], []
    for ci, comp in enumerate(comps):
        if not (is_sink[ci] or is_source[ci]):
            continue
        if len(comp) != 1:
            raise ContractViolationError(
                "augment_to_irreducible requires single-vertex sink/source components"
            )
        (state,) = comp
        pre = preimages.get(state, [])
        if len(pre) != 1:
            raise ContractViolationError(
                f"sink/source state {state!r} must have a singleton preimage"
            )
        if is_sink[ci]:
            sink_states.append(state)
            sink_pre.append(pre[0])
        if is_source[ci]:
            source_states.append(state)
            source_pre.append(pre[0])
    taken = set(h.vertices) | set(g.vertices)
    star_h = _fresh_name(taken, "__star")
    taken.add(star_h)
    star_g = _fresh_name(taken, "__starp")
    new_h = h.extended(
        [star_h],
        [(t, star_h) for t in sink_states] + [(star_h, s) for s in source_states],
    )
    new_g = g.extended(
        [star_g],
        [(t, star_g) for t in sink_pre] + [(star_g, s) for s in source_pre],
    )
    new_map = dict(vmap)
    new_map[star_g] = star_h
    return new_g, new_h, BlockMap.one_block(new_map)


# -- diamonds on prepared graphs ----------------------------------------------


def _diamond_witness(g: DirectedGraph, vmap: Mapping, k: int, exact_words: bool):
    """Diamond search on an already-lifted graph.

    ``exact_words=True`` flattens tuple-vertex paths to original-symbol
    words (valid when every vertex is a length-k window); otherwise the
    witness lists one symbol per vertex, which is the faithful form once
    augmented vertices are present.
    """
    pairs, succ, pred, _ = pair_graph_index(g, vmap)
    path = _find_diamond_path(pairs, succ, pred)
    if path is None:
        return None
    firsts = [pairs[i][0] for i in path]
    seconds = [pairs[i][1] for i in path]
    if exact_words and k > 1:
        word_a = _flatten_lifted_word(firsts, k)
        word_b = _flatten_lifted_word(seconds, k)
        m = len(path) - 1
        return DiamondWitness(word_a[:k], word_a[k:m], word_b[k:m], word_a[m:])
    if k > 1:
        unlift = {v: v[0] for v in firsts + seconds if isinstance(v, tuple)}
        firsts = [unlift.get(v, v) for v in firsts]
        seconds = [unlift.get(v, v) for v in seconds]
    m = len(path) - 1
    return DiamondWitness(
        prefix=tuple(firsts[:1]),
        middle_a=tuple(firsts[1:m]),
        middle_b=tuple(seconds[1:m]),
        suffix=tuple(firsts[m:]),
    )


# -- the full pipeline ---------------------------------------------------------


def _prepare(g: DirectedGraph, h: DirectedGraph, phi: BlockMap):
    """Shared front end: trim, degenerate empties, lift, validity.

    Returns either a final Verdict or a tuple (g1, ht, vmap1, unlift).
    """
    gt = trim_to_essential(g)
    ht = trim_to_essential(h)
    if gt.is_empty and ht.is_empty:
        return CONJUGATE
    if gt.is_empty:
        return Verdict(
            False, FAILURE_NOT_SURJECTIVE, UnreachedWordWitness((ht.vertices[0],))
        )
    try:
        g1, phi1 = lift_block_map(gt, phi)
    except InvalidBlockMapError:
        return Verdict(False, FAILURE_INVALID_CODE)
    vmap = phi1.as_vertex_map()
    if not _valid_one_block(g1, ht, vmap):
        return Verdict(False, FAILURE_INVALID_CODE)
    unlift = {v: v[0] for v in g1.vertices} if phi.block_size > 1 else None
    return g1, ht, vmap, unlift


def verify(g: DirectedGraph, h: DirectedGraph, phi: BlockMap) -> Verdict:
    """Decide whether ``phi`` induces a conjugacy from X_g onto X_h.

    Handles every input: graphs are trimmed to their essential parts
    (two empty shifts count as conjugate via the empty map), the k-block
    map is recoded to a 1-block one, and the irreducible decision runs
    either directly or after the sink/source/hub augmentation.  Witness
    symbols refer to the original graphs where possible; augmented
    vertices (double-underscore names) can appear for reducible inputs.
    """
    prepared = _prepare(g, h, phi)
    if isinstance(prepared, Verdict):
        return prepared
    g1, ht, vmap, unlift = prepared
    k = phi.block_size
    if is_irreducible(g1) and is_irreducible(ht):
        return _bijection_verdict(g1, ht, vmap, unlift)
    dia = _diamond_witness(g1, vmap, k, exact_words=True)
    if dia is not None:
        return Verdict(False, FAILURE_NOT_INJECTIVE, dia)
    phi1 = BlockMap.one_block(vmap)
    g2, h2, p2 = add_sink_components(g1, ht, phi1)
    g3, h3, p3 = add_source_components(g2, h2, p2)
    g4, h4, p4 = augment_to_irreducible(g3, h3, p3)
    vmap4 = p4.as_vertex_map()
    dia4 = _diamond_witness(g4, vmap4, k, exact_words=False)
    if dia4 is not None:
        return Verdict(False, FAILURE_NOT_INJECTIVE, dia4)
    return _bijection_verdict(g4, h4, vmap4, unlift)


def verify_edge_shift(g: MultiGraph, h: MultiGraph, phi: BlockMap) -> Verdict:
    """Conjugacy check between edge shifts, via vertex-shift presentations.

    ``phi`` maps length-k words of edge labels of ``g`` to edge labels
    of ``h``; the check converts both multigraphs so that labels become
    vertices and delegates to :func:`verify`.
    """
    return verify(edge_to_vertex(g), edge_to_vertex(h), phi)
