"""Conjugacy of subshifts of finite type: verification, search, gadgets.

The library works with vertex shifts (bi-infinite walks on a directed
graph read vertex by vertex) and edge shifts (walks on a multigraph read
by edge label).  The centerpiece is :func:`verify`, a polynomial-time
check of whether a proposed k-block sliding code is a conjugacy, for
irreducible and reducible presentations alike; around it sit an
independent brute-force oracle, desk-scale decision searches for the
hard problems, and generators for the hardness-reduction gadgets.
"""

from .errors import (
    BudgetExceededError,
    ContractViolationError,
    InvalidBlockMapError,
    SftConjError,
    UndefinedEntropyError,
)
from .graphs import (
    DirectedGraph,
    MultiGraph,
    TraceSequence,
    graph_from_json_dict,
    is_irreducible,
    reverse_edges,
    shortest_cycle_through,
    strongly_connected_components,
    trace_powers,
    trim_to_essential,
)
from .shifts import (
    BlockMap,
    CyclePairWitness,
    DiamondWitness,
    TraceMismatchWitness,
    UnreachedWordWitness,
    Verdict,
    block_map_from_text,
    block_map_to_text,
    collapses_diamond,
    cycle_image,
    edge_to_vertex,
    entropy_estimate,
    enumerate_cycles,
    higher_block_graph,
    lift_block_map,
)
from .verifier import (
    add_sink_components,
    add_source_components,
    augment_to_irreducible,
    is_conjugacy_irreducible,
    is_injective_cycle_map,
    is_valid_block_map,
    verify,
    verify_edge_shift,
)
from .oracles import (
    AmalgamationStep,
    HittingSetInstance,
    amalgamate,
    can_amalgamate,
    decide_k_block_conjugacy,
    hitting_set_brute,
    minimal_image_graph,
    oracle_is_conjugacy,
    search_one_block_reduction,
    split,
)
from .gadgets import (
    HittingSetReduction,
    StructurePartition,
    UndirectedGraph,
    WeightWidget,
    activation_schedule,
    apply_schedule,
    attach_weight_widget,
    edge_gadget_pair,
    gi_to_digraphs,
    has_structure_property,
    hitting_set_reduction,
    vertex_gadget_pair,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceededError",
    "ContractViolationError",
    "InvalidBlockMapError",
    "SftConjError",
    "UndefinedEntropyError",
    "DirectedGraph",
    "MultiGraph",
    "TraceSequence",
    "graph_from_json_dict",
    "is_irreducible",
    "reverse_edges",
    "shortest_cycle_through",
    "strongly_connected_components",
    "trace_powers",
    "trim_to_essential",
    "BlockMap",
    "CyclePairWitness",
    "DiamondWitness",
    "TraceMismatchWitness",
    "UnreachedWordWitness",
    "Verdict",
    "block_map_from_text",
    "block_map_to_text",
    "collapses_diamond",
    "cycle_image",
    "edge_to_vertex",
    "entropy_estimate",
    "enumerate_cycles",
    "higher_block_graph",
    "lift_block_map",
    "add_sink_components",
    "add_source_components",
    "augment_to_irreducible",
    "is_conjugacy_irreducible",
    "is_injective_cycle_map",
    "is_valid_block_map",
    "verify",
    "verify_edge_shift",
    "AmalgamationStep",
    "HittingSetInstance",
    "amalgamate",
    "can_amalgamate",
    "decide_k_block_conjugacy",
    "hitting_set_brute",
    "minimal_image_graph",
    "oracle_is_conjugacy",
    "search_one_block_reduction",
    "split",
    "HittingSetReduction",
    "StructurePartition",
    "UndirectedGraph",
    "WeightWidget",
    "activation_schedule",
    "apply_schedule",
    "attach_weight_widget",
    "edge_gadget_pair",
    "gi_to_digraphs",
    "has_structure_property",
    "hitting_set_reduction",
    "vertex_gadget_pair",
]
