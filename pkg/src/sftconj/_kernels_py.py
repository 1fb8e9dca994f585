"""Pure-Python implementations of the hot kernels.

Two inner loops dominate the verifier's runtime: strongly connected
components of the (possibly quartic-size) pair graph, and exact powering
of counting adjacency matrices for the trace check.  Both are written
here against plain index lists so the compiled extension in
``_kernels.pyx`` can provide drop-in replacements.
"""

from operator import itemgetter

BACKEND = "python"


def tarjan_scc(succ):
    """Strongly connected components of an index graph, iteratively.

    ``succ[i]`` is the list of successor indices of vertex ``i``.
    Components are emitted in Tarjan completion order, which is the
    reverse of a topological order of the condensation.
    """
    n = len(succ)
    index = [-1] * n
    lowlink = [0] * n
    on_stack = bytearray(n)
    stack = []
    comps = []
    counter = 0

    for root in range(n):
        if index[root] != -1:
            continue
        # Explicit DFS frames: (vertex, position in its successor list).
        frames = [(root, 0)]
        while frames:
            v, pos = frames[-1]
            if pos == 0:
                index[v] = lowlink[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = 1
            advanced = False
            succs = succ[v]
            while pos < len(succs):
                w = succs[pos]
                pos += 1
                if index[w] == -1:
                    frames[-1] = (v, pos)
                    frames.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    if index[w] < lowlink[v]:
                        lowlink[v] = index[w]
            if advanced:
                continue
            frames.pop()
            if lowlink[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = 0
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
            if frames:
                parent = frames[-1][0]
                if lowlink[v] < lowlink[parent]:
                    lowlink[parent] = lowlink[v]
    return comps


def prepare_preds(preds):
    """Precompute per-column accessors for :func:`count_matmul_step`.

    ``preds[w]`` lists the sources of edges into ``w``, repeated per
    parallel edge.  Returns an opaque object for the step function.
    """
    getters = []
    for ps in preds:
        if not ps:
            getters.append(None)
        elif len(ps) == 1:
            getters.append(ps[0])
        else:
            getters.append(itemgetter(*ps))
    return getters


def count_matmul_step(rows, prepared):
    """One step of ``P <- P @ A`` over exact integers.

    ``A`` is implicitly given by ``prepared`` (from :func:`prepare_preds`):
    column ``w`` of the product sums the row entries at the predecessor
    indices of ``w``.  Entries are Python ints, so no overflow.
    """
    n = len(prepared)
    out = []
    for row in rows:
        new = [0] * n
        for w, getter in enumerate(prepared):
            if getter is None:
                continue
            if isinstance(getter, int):
                new[w] = row[getter]
            else:
                new[w] = sum(getter(row))
        out.append(new)
    return out


def matrix_trace(rows):
    return sum(rows[i][i] for i in range(len(rows)))
