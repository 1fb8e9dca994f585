"""Command-line interface.

Subcommands mirror the library's problem areas one-to-one:

  verify   check a proposed block code between two shifts
  decide   search for a k-block conjugacy between two shifts
  reduce   search for a 1-block conjugacy shrinking a shift's graph
  gadget   emit reduction constructions (gi-double, vertex-pair,
           edge-pair, hitting-set, widget)
  tools    graph utilities (higher-block, edge-to-vertex, trim,
           entropy, traces)

Exit codes: verify 0=conjugacy 1=not 2=bad input; decide/reduce 0=found
1=not found 2=bad input 3=budget exceeded.  All outputs are UTF-8 JSON,
one document per line.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import gadgets, oracles, shifts, verifier
from .errors import BudgetExceededError, SftConjError
from .graphs import (
    DirectedGraph,
    MultiGraph,
    graph_from_json_dict,
    trace_powers,
    trim_to_essential,
)
from .oracles import HittingSetInstance
from .shifts import (
    BlockMap,
    block_map_from_text,
    block_map_to_text,
    edge_to_vertex,
    entropy_estimate,
    higher_block_graph,
)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_BAD_INPUT = 2
EXIT_BUDGET = 3


class _InputError(Exception):
    pass


def _load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise _InputError(f"{path}: {exc}") from exc


def _load_graph(path, multigraph=False):
    data = _load_json(path)
    try:
        g = graph_from_json_dict(data)
    except ValueError as exc:
        raise _InputError(f"{path}: {exc}") from exc
    if multigraph and not isinstance(g, MultiGraph):
        raise _InputError(f"{path}: expected a multigraph (multi_edges)")
    if not multigraph and not isinstance(g, DirectedGraph):
        raise _InputError(f"{path}: expected a directed graph (edges)")
    return g


def _load_undirected(path):
    data = _load_json(path)
    try:
        return gadgets.UndirectedGraph.from_json_dict(data)
    except ValueError as exc:
        raise _InputError(f"{path}: {exc}") from exc


def _load_block_map(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise _InputError(f"{path}: {exc}") from exc
    try:
        return block_map_from_text(text)
    except ValueError as exc:
        raise _InputError(f"{path}: {exc}") from exc


def _emit(doc):
    sys.stdout.write(json.dumps(doc, separators=(", ", ": ")) + "\n")


def _write_json(path, doc):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def _block_map_json(phi: BlockMap) -> dict:
    entries = sorted(
        ([list(map(str, key)), str(val)] for key, val in phi.table.items()),
        key=lambda kv: kv[0],
    )
    return {"k": phi.block_size, "m": phi.memory, "entries": entries}


# -- subcommands ------------------------------------------------------------


def _cmd_verify(args) -> int:
    phi = _load_block_map(args.map)
    if args.edge_shift:
        g = _load_graph(args.source, multigraph=True)
        h = _load_graph(args.target, multigraph=True)
        verdict = verifier.verify_edge_shift(g, h, phi)
    else:
        g = _load_graph(args.source)
        h = _load_graph(args.target)
        verdict = verifier.verify(g, h, phi)
    _emit(verdict.to_json_dict())
    return EXIT_OK if verdict.is_conjugacy else EXIT_NEGATIVE


def _cmd_decide(args) -> int:
    g = _load_graph(args.source)
    h = _load_graph(args.target)
    try:
        found = oracles.decide_k_block_conjugacy(g, h, args.k, budget=args.budget)
    except BudgetExceededError as exc:
        _emit({"found": None, "reason": str(exc)})
        return EXIT_BUDGET
    if found is None:
        _emit({"found": False})
        return EXIT_NEGATIVE
    doc = {"found": True, "map": _block_map_json(found)}
    _emit(doc)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(block_map_to_text(found))
    return EXIT_OK


def _cmd_reduce(args) -> int:
    g = _load_graph(args.source)
    try:
        found = oracles.search_one_block_reduction(g, args.ell, budget=args.budget)
    except BudgetExceededError as exc:
        _emit({"found": None, "reason": str(exc)})
        return EXIT_BUDGET
    if found is None:
        _emit({"found": False})
        return EXIT_NEGATIVE
    phi, image = found
    partition: dict = {}
    for v, block in phi.as_vertex_map().items():
        partition.setdefault(block, []).append(v)
    doc = {
        "found": True,
        "partition": [list(map(str, block)) for block in partition],
        "image": {
            "vertices": [str(v) for v in image.vertices],
            "edges": sorted([str(s), str(d)] for (s, d) in image.edges),
        },
    }
    _emit(doc)
    return EXIT_OK


def _cmd_gadget(args) -> int:
    if args.gadget == "gi-double":
        g1 = _load_undirected(args.left)
        g2 = _load_undirected(args.right)
        d1, d2 = gadgets.gi_to_digraphs(g1, g2)
        _write_json(args.out_left, d1.to_json_dict())
        _write_json(args.out_right, d2.to_json_dict())
        _emit({"written": [args.out_left, args.out_right]})
        return EXIT_OK
    if args.gadget == "vertex-pair":
        g = _load_graph(args.source)
        h = _load_graph(args.target)
        gp, hp = gadgets.vertex_gadget_pair(g, h, args.k)
        _write_json(args.out_left, gp.to_json_dict())
        _write_json(args.out_right, hp.to_json_dict())
        _emit({"written": [args.out_left, args.out_right]})
        return EXIT_OK
    if args.gadget == "edge-pair":
        g = _load_graph(args.source, multigraph=True)
        h = _load_graph(args.target, multigraph=True)
        gp, hp = gadgets.edge_gadget_pair(g, h, args.k)
        _write_json(args.out_left, gp.to_json_dict())
        _write_json(args.out_right, hp.to_json_dict())
        _emit({"written": [args.out_left, args.out_right]})
        return EXIT_OK
    if args.gadget == "hitting-set":
        data = _load_json(args.instance)
        try:
            instance = HittingSetInstance.from_json_dict(data)
        except ValueError as exc:
            raise _InputError(f"{args.instance}: {exc}") from exc
        reduction = gadgets.hitting_set_reduction(
            instance, K=args.K, include_widgets=not args.no_widgets
        )
        _write_json(args.out, reduction.graph.to_json_dict())
        if args.metadata:
            _write_json(args.metadata, reduction.metadata_json_dict())
        _emit({"written": [args.out], "vertices": len(reduction.graph)})
        return EXIT_OK
    if args.gadget == "widget":
        host, partition = _widget_demo_host(args.num_a, args.num_c)
        host, partition, widget = gadgets.attach_weight_widget(
            host, partition, set(partition.A), set(partition.C), args.K, widget_id="0"
        )
        _write_json(args.out, host.to_json_dict())
        if args.metadata:
            _write_json(
                args.metadata,
                {
                    "K": widget.K,
                    "a_nodes": list(widget.a_nodes),
                    "b_nodes": list(widget.b_nodes),
                    "c_nodes": list(widget.c_nodes),
                },
            )
        _emit({"written": [args.out], "vertices": len(host)})
        return EXIT_OK
    raise _InputError(f"unknown gadget {args.gadget!r}")


def _widget_demo_host(num_a: int, num_c: int):
    """Minimal structure-property host to hang a demo widget on."""
    a_part = [f"a{i + 1}" for i in range(num_a)]
    c_part = [f"c{i + 1}" for i in range(num_c)]
    edges = [("alpha", "alpha")]
    for x in a_part + c_part:
        edges += [(x, x), (x, "alpha"), ("alpha", x)]
    g = DirectedGraph(a_part + c_part + ["alpha"], edges)
    p = gadgets.StructurePartition(
        alpha="alpha", A=frozenset(a_part), B=frozenset(), C=frozenset(c_part)
    )
    return g, p


def _cmd_tools(args) -> int:
    if args.tool == "higher-block":
        g = _load_graph(args.graph)
        gk = higher_block_graph(g, args.k)
        if args.k == 1:
            _emit(gk.to_json_dict())
            return EXIT_OK
        sep = args.separator
        names = {p: sep.join(str(s) for s in p) for p in gk.vertices}
        if len(set(names.values())) != len(names):
            raise _InputError("joined path names collide; pick another --separator")
        _emit(gk.renamed(names).to_json_dict())
        return EXIT_OK
    if args.tool == "edge-to-vertex":
        g = _load_graph(args.graph, multigraph=True)
        _emit(edge_to_vertex(g).to_json_dict())
        return EXIT_OK
    if args.tool == "trim":
        g = _load_graph(args.graph)
        _emit(trim_to_essential(g).to_json_dict())
        return EXIT_OK
    if args.tool == "entropy":
        data = _load_json(args.graph)
        g = graph_from_json_dict(data)
        if isinstance(g, MultiGraph):
            g = edge_to_vertex(g)
        try:
            value = entropy_estimate(g, tol=args.tol)
        except SftConjError as exc:
            raise _InputError(str(exc)) from exc
        _emit({"entropy": value})
        return EXIT_OK
    if args.tool == "traces":
        data = _load_json(args.graph)
        g = graph_from_json_dict(data)
        seq = trace_powers(g, args.n)
        _emit({"traces": list(seq.values)})
        return EXIT_OK
    raise _InputError(f"unknown tool {args.tool!r}")


# -- parser -------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sftconj",
        description="Verify, decide, and reduce block-code conjugacies between "
        "subshifts of finite type.",
    )
    parser.add_argument(
        "--threads",
        type=int,
        default=1,
        help="worker threads (results are schedule-independent; current "
        "implementation runs single-threaded)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check a proposed block code")
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--map", required=True)
    p.add_argument("--edge-shift", action="store_true")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("decide", help="search for a k-block conjugacy")
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--budget", type=int, default=1_000_000)
    p.add_argument("--output", help="write the found map in block-map text format")
    p.set_defaults(func=_cmd_decide)

    p = sub.add_parser("reduce", help="search for a vertex-count reduction")
    p.add_argument("--source", required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--budget", type=int, default=1_000_000)
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("gadget", help="emit reduction constructions")
    gsub = p.add_subparsers(dest="gadget", required=True)
    q = gsub.add_parser("gi-double")
    q.add_argument("--left", required=True)
    q.add_argument("--right", required=True)
    q.add_argument("--out-left", required=True)
    q.add_argument("--out-right", required=True)
    q.set_defaults(func=_cmd_gadget)
    for name in ("vertex-pair", "edge-pair"):
        q = gsub.add_parser(name)
        q.add_argument("--source", required=True)
        q.add_argument("--target", required=True)
        q.add_argument("--k", type=int, required=True)
        q.add_argument("--out-left", required=True)
        q.add_argument("--out-right", required=True)
        q.set_defaults(func=_cmd_gadget)
    q = gsub.add_parser("hitting-set")
    q.add_argument("--instance", required=True)
    q.add_argument("--K", type=int, default=None)
    q.add_argument("--no-widgets", action="store_true")
    q.add_argument("--out", required=True)
    q.add_argument("--metadata")
    q.set_defaults(func=_cmd_gadget)
    q = gsub.add_parser("widget")
    q.add_argument("--K", type=int, required=True)
    q.add_argument("--num-a", type=int, default=1)
    q.add_argument("--num-c", type=int, default=1)
    q.add_argument("--out", required=True)
    q.add_argument("--metadata")
    q.set_defaults(func=_cmd_gadget)

    p = sub.add_parser("tools", help="graph utilities")
    tsub = p.add_subparsers(dest="tool", required=True)
    q = tsub.add_parser("higher-block")
    q.add_argument("--graph", required=True)
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--separator", default=",")
    q.set_defaults(func=_cmd_tools)
    q = tsub.add_parser("edge-to-vertex")
    q.add_argument("--graph", required=True)
    q.set_defaults(func=_cmd_tools)
    q = tsub.add_parser("trim")
    q.add_argument("--graph", required=True)
    q.set_defaults(func=_cmd_tools)
    q = tsub.add_parser("entropy")
    q.add_argument("--graph", required=True)
    q.add_argument("--tol", type=float, default=1e-9)
    q.set_defaults(func=_cmd_tools)
    q = tsub.add_parser("traces")
    q.add_argument("--graph", required=True)
    q.add_argument("--n", type=int, required=True)
    q.set_defaults(func=_cmd_tools)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be >= 1")
    try:
        return args.func(args)
    except _InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except (SftConjError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
