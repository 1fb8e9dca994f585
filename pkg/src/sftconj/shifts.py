"""Shift-space constructions layered on graph presentations.

Words and cycles are plain tuples of vertex symbols.  A cycle
``(v1, ..., vn)`` follows the convention that the closing edge
``(vn, v1)`` is implied and rotations are distinct cycles.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Mapping, Optional

from .errors import (
    BudgetExceededError,
    ContractViolationError,
    InvalidBlockMapError,
    UndefinedEntropyError,
)
from .graphs import DirectedGraph, MultiGraph, trim_to_essential

# -- block maps -------------------------------------------------------------


@dataclass(frozen=True)
class BlockMap:
    """A k-block sliding code given by its finite window table.

    ``table`` maps length-k source words (tuples) to target symbols.
    ``memory`` only shifts indexing (the induced map composes with a
    power of the shift map), so everything downstream canonicalizes to
    memory 0; the declared value is kept for file round-trips.
    """

    block_size: int
    memory: int = 0
    table: Mapping[tuple, Hashable] = field(default_factory=dict)

    def __post_init__(self):
        if self.block_size < 1:
            raise ValueError("block size must be >= 1")
        if not 0 <= self.memory <= self.block_size - 1:
            raise ValueError("memory must satisfy 0 <= m <= k-1")
        for key in self.table:
            if not isinstance(key, tuple) or len(key) != self.block_size:
                raise ValueError(f"table key {key!r} is not a length-{self.block_size} tuple")

    @property
    def anticipation(self) -> int:
        return self.block_size - 1 - self.memory

    @classmethod
    def one_block(cls, mapping: Mapping) -> "BlockMap":
        return cls(block_size=1, memory=0, table={(v,): u for v, u in mapping.items()})

    def symbol(self, v):
        """Image of a single symbol (1-block maps only)."""
        if self.block_size != 1:
            raise ContractViolationError("symbol() requires a 1-block map")
        return self.table[(v,)]

    def as_vertex_map(self) -> dict:
        if self.block_size != 1:
            raise ContractViolationError("as_vertex_map() requires a 1-block map")
        return {v: u for (v,), u in self.table.items()}

    def apply_word(self, word) -> tuple:
        """Slide the window over a word of length >= k."""
        k = self.block_size
        if len(word) < k:
            raise ValueError(f"word shorter than block size {k}")
        return tuple(self.table[tuple(word[i : i + k])] for i in range(len(word) - k + 1))

    def __eq__(self, other):
        if not isinstance(other, BlockMap):
            return NotImplemented
        return (
            self.block_size == other.block_size
            and self.memory == other.memory
            and dict(self.table) == dict(other.table)
        )


def block_map_to_text(phi: BlockMap) -> str:
    """Serialize to the line format ``k=<int> m=<int>`` + one entry per line."""
    lines = [f"k={phi.block_size} m={phi.memory}"]
    for key in sorted(phi.table, key=lambda w: tuple(map(str, w))):
        lines.append(" ".join(str(s) for s in key) + " -> " + str(phi.table[key]))
    return "\n".join(lines) + "\n"


def block_map_from_text(text: str) -> BlockMap:
    """Parse the block-map text format; ``#`` starts a comment."""
    entries = {}
    header = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if header is None:
            parts = dict(p.split("=", 1) for p in line.split())
            if set(parts) != {"k", "m"}:
                raise ValueError(f"bad header line {raw!r}; expected 'k=<int> m=<int>'")
            header = (int(parts["k"]), int(parts["m"]))
            continue
        if "->" not in line:
            raise ValueError(f"bad mapping line {raw!r}")
        lhs, rhs = line.split("->", 1)
        key = tuple(lhs.split())
        value = rhs.split()
        if len(key) != header[0] or len(value) != 1:
            raise ValueError(f"bad mapping line {raw!r}")
        if key in entries:
            raise ValueError(f"duplicate key {key!r}")
        entries[key] = value[0]
    if header is None:
        raise ValueError("missing header line 'k=<int> m=<int>'")
    return BlockMap(block_size=header[0], memory=header[1], table=entries)


# -- words and paths --------------------------------------------------------


def is_path(g: DirectedGraph, word) -> bool:
    return all(v in g for v in word) and all(
        g.has_edge(word[i], word[i + 1]) for i in range(len(word) - 1)
    )


def is_cycle(g: DirectedGraph, word) -> bool:
    return len(word) > 0 and is_path(g, word) and g.has_edge(word[-1], word[0])


def iter_paths(g: DirectedGraph, length: int):
    """All paths on ``length`` vertices, in vertex-order lexicographic order."""
    if length < 1:
        raise ValueError("length must be >= 1")
    paths = [(v,) for v in g.vertices]
    for _ in range(length - 1):
        paths = [p + (w,) for p in paths for w in g.successors(p[-1])]
    yield from paths


# -- higher block recoding --------------------------------------------------


def higher_block_graph(g: DirectedGraph, k: int) -> DirectedGraph:
    """Graph whose vertices are the length-k paths of ``g``.

    Tuples serve as the new vertex names; for k=1 the input graph is
    returned unchanged.
    """
    if k < 1:
        raise ContractViolationError("k must be >= 1")
    if k == 1:
        return g
    paths = list(iter_paths(g, k))
    path_set = set(paths)
    edges = []
    for p in paths:
        for w in g.successors(p[-1]):
            q = p[1:] + (w,)
            if q in path_set:
                edges.append((p, q))
    return DirectedGraph(paths, edges)


def lift_block_map(g: DirectedGraph, phi: BlockMap):
    """Recode a k-block map to a 1-block map on the higher block graph.

    Returns ``(g_k, phi1)`` where ``phi1`` is 1-block on the length-k
    path vertices.  Table keys that are not paths of ``g`` are ignored;
    a missing key for some actual path raises InvalidBlockMapError.
    The lifted code is a conjugacy exactly when the original is.
    """
    k = phi.block_size
    gk = higher_block_graph(g, k)
    table = {}
    for p in gk.vertices:
        key = p if k > 1 else (p,)
        if key not in phi.table:
            raise InvalidBlockMapError(f"block map not total: no entry for path {key!r}")
        table[(p,)] = phi.table[key]
    return gk, BlockMap(block_size=1, memory=0, table=table)


def edge_to_vertex(g: MultiGraph) -> DirectedGraph:
    """Vertex-shift presentation of an edge shift.

    Edge labels become vertices; (e, f) is an edge when e terminates at
    the initial vertex of f.
    """
    labels = g.labels
    edges = []
    for e in labels:
        _, e_dst = g.endpoints(e)
        for f in labels:
            f_src, _ = g.endpoints(f)
            if e_dst == f_src:
                edges.append((e, f))
    return DirectedGraph(labels, edges)


# -- cycles -----------------------------------------------------------------


def enumerate_cycles(g: DirectedGraph, n: int, budget: int = 10**6):
    """All cycles of length exactly ``n``, rotations listed separately.

    Cycles here are closed walks read off vertex by vertex, so the count
    equals the trace of the n-th adjacency power.  Intended for desk
    scale; raises BudgetExceededError when the walk enumeration exceeds
    ``budget`` extension steps.
    """
    if n < 1:
        raise ContractViolationError("n must be >= 1")
    out = []
    steps = 0
    for start in g.vertices:
        stack = [(start,)]
        while stack:
            path = stack.pop()
            if len(path) == n:
                if g.has_edge(path[-1], start):
                    out.append(path)
                continue
            for w in reversed(g.successors(path[-1])):
                steps += 1
                if steps > budget:
                    raise BudgetExceededError(
                        f"cycle enumeration exceeded budget of {budget} steps"
                    )
                stack.append(path + (w,))
    return out


def cycle_image(phi: BlockMap, cycle) -> tuple:
    """Image of a cycle under a 1-block map, symbol by symbol."""
    if phi.block_size != 1:
        raise ContractViolationError("cycle_image requires a 1-block map")
    return tuple(phi.symbol(v) for v in cycle)


# -- pair graph and diamonds -------------------------------------------------


def pair_graph_index(g: DirectedGraph, vmap: Mapping):
    """Pair graph on equal-image vertex pairs, in index form.

    Vertices are all ordered pairs (x, y) with vmap[x] == vmap[y]
    (diagonal included); edges move both coordinates along edges of
    ``g``.  Image-consistency of the moved pair is automatic because
    the endpoint must itself be an equal-image pair.

    Returns (pairs, succ, pred, index_of) with succ/pred as index lists.
    """
    groups: dict = {}
    for v in g.vertices:
        groups.setdefault(vmap[v], []).append(v)
    pairs = []
    index_of = {}
    for image in sorted(groups, key=str):
        members = groups[image]
        for x in members:
            for y in members:
                index_of[(x, y)] = len(pairs)
                pairs.append((x, y))
    image_of = dict(vmap)
    succ = [[] for _ in pairs]
    pred = [[] for _ in pairs]
    for i, (x, y) in enumerate(pairs):
        # successors of x grouped by image, matched with successors of y
        by_image: dict = {}
        for xs in g.successors(x):
            by_image.setdefault(image_of[xs], []).append(xs)
        for ys in g.successors(y):
            img = image_of[ys]
            if img not in by_image:
                continue
            for xs in by_image[img]:
                j = index_of[(xs, ys)]
                succ[i].append(j)
                pred[j].append(i)
    return pairs, succ, pred, index_of


def _find_diamond_path(pairs, succ, pred):
    """Path diagonal -> off-diagonal -> diagonal in a pair graph.

    Returns the pair-index path or None.  BFS keeps parent pointers so
    the witness can be reconstructed.
    """
    diag = [i for i, (x, y) in enumerate(pairs) if x == y]
    fwd_parent = {i: None for i in diag}
    queue = deque(diag)
    while queue:
        i = queue.popleft()
        for j in succ[i]:
            if j not in fwd_parent:
                fwd_parent[j] = i
                queue.append(j)
    bwd_parent = {i: None for i in diag}
    queue = deque(diag)
    while queue:
        i = queue.popleft()
        for j in pred[i]:
            if j not in bwd_parent:
                bwd_parent[j] = i
                queue.append(j)
    hit = None
    for i, (x, y) in enumerate(pairs):
        if x != y and i in fwd_parent and i in bwd_parent:
            hit = i
            break
    if hit is None:
        return None
    back = []
    i = hit
    while i is not None:
        back.append(i)
        i = fwd_parent[i]
    back.reverse()
    fwd = []
    i = bwd_parent[hit]
    while i is not None:
        fwd.append(i)
        i = bwd_parent[i]
    return back + fwd


def _flatten_lifted_word(word, k):
    """Original-symbol word for a path of length-k tuple vertices."""
    if k == 1:
        return tuple(word)
    return tuple(word[0]) + tuple(t[-1] for t in word[1:])


@dataclass(frozen=True)
class DiamondWitness:
    """Two words with common length-k prefix and suffix and equal image."""

    prefix: tuple
    middle_a: tuple
    middle_b: tuple
    suffix: tuple

    @property
    def word_a(self) -> tuple:
        return self.prefix + self.middle_a + self.suffix

    @property
    def word_b(self) -> tuple:
        return self.prefix + self.middle_b + self.suffix


def collapses_diamond(g: DirectedGraph, phi: BlockMap) -> Optional[DiamondWitness]:
    """Search for a diamond collapsed by ``phi``.

    A diamond is a pair of distinct words w1 w2 w3 and w1 w2' w3 with
    |w1| = |w3| = k and equal images; collapsing one certifies that the
    induced sliding block code is not injective.  The search walks the
    pair graph of the lifted 1-block code from the diagonal through an
    off-diagonal pair back to the diagonal, which is polynomial, unlike
    scanning word triples.
    """
    gk, phi1 = lift_block_map(g, phi)
    k = phi.block_size
    pairs, succ, pred, _ = pair_graph_index(gk, phi1.as_vertex_map())
    path = _find_diamond_path(pairs, succ, pred)
    if path is None:
        return None
    word_a = _flatten_lifted_word([pairs[i][0] for i in path], k)
    word_b = _flatten_lifted_word([pairs[i][1] for i in path], k)
    m = len(path) - 1  # number of pair-graph steps
    return DiamondWitness(
        prefix=word_a[:k],
        middle_a=word_a[k:m],
        middle_b=word_b[k:m],
        suffix=word_a[m:],
    )


# -- entropy ----------------------------------------------------------------


def entropy_estimate(g: DirectedGraph, tol: float, max_iter: int = 200_000) -> float:
    """log2 of the spectral radius of the essential part, by power iteration.

    Iterates with A+I (which kills periodicity) from the all-ones
    vector.  The per-coordinate growth ratios give the Collatz-Wielandt
    upper estimate max_i (x'_i / x_i) >= rho(A+I), which converges to it;
    iteration stops when a conservative geometric extrapolation of the
    recent estimate movement puts the entropy error below tol.  This is
    a diagnostic quantity: it plays no role in any conjugacy decision.
    """
    gt = trim_to_essential(g)
    if gt.is_empty:
        raise UndefinedEntropyError("entropy undefined: essential part is empty")
    succ = gt.successor_index_lists()
    n = len(succ)
    x = [1.0] * n
    est = float(n + 1)
    diffs = deque(maxlen=6)
    stable = 0
    for _ in range(max_iter):
        y = [x[i] + sum(x[j] for j in succ[i]) for i in range(n)]
        new_est = max(y[i] / x[i] for i in range(n))
        norm = max(y)
        x = [v / norm for v in y]
        diffs.append(abs(new_est - est))
        est = new_est
        if len(diffs) == diffs.maxlen:
            latest = diffs[-1]
            if latest == 0.0:
                stable += 1
            else:
                # conservative rate: worst consecutive shrink factor seen lately
                ratios = [
                    diffs[i + 1] / diffs[i] if diffs[i] > 0 else 1.0
                    for i in range(len(diffs) - 1)
                ]
                rate = min(max(ratios), 0.9999)
                err = latest * rate / (1.0 - rate)
                entropy_err = err / (max(est - 1.0, 1.0) * math.log(2))
                stable = stable + 1 if entropy_err < tol / 2 else 0
            if stable >= 3:
                break
    radius = max(est - 1.0, 1.0)
    return math.log2(radius)


# -- verdicts ----------------------------------------------------------------

FAILURE_NONE = "none"
FAILURE_INVALID_CODE = "invalid_code"
FAILURE_NOT_INJECTIVE = "not_injective"
FAILURE_NOT_SURJECTIVE = "not_surjective"


@dataclass(frozen=True)
class CyclePairWitness:
    """Two distinct cycles with the same image word."""

    first: tuple
    second: tuple


@dataclass(frozen=True)
class TraceMismatchWitness:
    """First power at which the cycle counts of source and target differ."""

    power: int
    source_trace: int
    target_trace: int


@dataclass(frozen=True)
class UnreachedWordWitness:
    """A target word with no source word mapping onto it."""

    word: tuple


def _symbols_json(seq):
    return [s if isinstance(s, (str, int)) else str(s) for s in seq]


def witness_to_json_dict(witness):
    if witness is None:
        return None
    if isinstance(witness, CyclePairWitness):
        return {
            "kind": "cycle_pair",
            "cycles": [_symbols_json(witness.first), _symbols_json(witness.second)],
        }
    if isinstance(witness, DiamondWitness):
        return {
            "kind": "diamond",
            "prefix": _symbols_json(witness.prefix),
            "middle_a": _symbols_json(witness.middle_a),
            "middle_b": _symbols_json(witness.middle_b),
            "suffix": _symbols_json(witness.suffix),
        }
    if isinstance(witness, TraceMismatchWitness):
        return {
            "kind": "trace_mismatch",
            "power": witness.power,
            "source_trace": witness.source_trace,
            "target_trace": witness.target_trace,
        }
    if isinstance(witness, UnreachedWordWitness):
        return {"kind": "unreached_word", "word": _symbols_json(witness.word)}
    raise TypeError(f"unknown witness type {type(witness)!r}")


@dataclass(frozen=True)
class Verdict:
    """Outcome of a conjugacy check, with failure reason and witness."""

    is_conjugacy: bool
    failure: str = FAILURE_NONE
    witness: object = None

    def __post_init__(self):
        if self.is_conjugacy != (self.failure == FAILURE_NONE):
            raise ValueError("failure must be 'none' exactly when is_conjugacy")

    def to_json_dict(self) -> dict:
        return {
            "is_conjugacy": self.is_conjugacy,
            "failure": self.failure,
            "witness": witness_to_json_dict(self.witness),
        }


CONJUGATE = Verdict(is_conjugacy=True)
