# cython: language_level=3
"""Compiled versions of the hot kernels (see _kernels_py for contracts).

Matrix entries are arbitrary-precision Python ints, so the win here is
loop and indexing overhead, not arithmetic; SCC gets the larger speedup.
"""

BACKEND = "cython"


def tarjan_scc(succ):
    cdef Py_ssize_t n = len(succ)
    cdef list index = [-1] * n
    cdef list lowlink = [0] * n
    on_stack = bytearray(n)
    cdef list stack = []
    cdef list comps = []
    cdef Py_ssize_t counter = 0
    cdef Py_ssize_t root, v, w, pos
    cdef list frames, succs, comp
    cdef bint advanced

    for root in range(n):
        if <object>index[root] != -1:
            continue
        frames = [[root, 0]]
        while frames:
            frame = frames[-1]
            v = frame[0]
            pos = frame[1]
            if pos == 0:
                index[v] = counter
                lowlink[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = 1
            advanced = False
            succs = succ[v]
            while pos < len(succs):
                w = succs[pos]
                pos += 1
                if <object>index[w] == -1:
                    frame[1] = pos
                    frames.append([w, 0])
                    advanced = True
                    break
                if on_stack[w]:
                    if <object>index[w] < <object>lowlink[v]:
                        lowlink[v] = index[w]
            if advanced:
                continue
            frames.pop()
            if <object>lowlink[v] == <object>index[v]:
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
                if <object>lowlink[v] < <object>lowlink[parent]:
                    lowlink[parent] = lowlink[v]
    return comps


def prepare_preds(preds):
    # The compiled step indexes the raw lists directly.
    return [list(ps) for ps in preds]


def count_matmul_step(rows, prepared):
    cdef Py_ssize_t n = len(prepared)
    cdef Py_ssize_t w, t, m
    cdef list out = []
    cdef list row, new, ps
    for row in rows:
        new = [0] * n
        for w in range(n):
            ps = prepared[w]
            m = len(ps)
            if m == 0:
                continue
            acc = row[<Py_ssize_t>ps[0]]
            for t in range(1, m):
                acc = acc + row[<Py_ssize_t>ps[t]]
            new[w] = acc
        out.append(new)
    return out


def matrix_trace(rows):
    cdef Py_ssize_t i, n = len(rows)
    acc = 0
    for i in range(n):
        acc = acc + rows[i][i]
    return acc
