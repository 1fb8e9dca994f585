import warnings

import pytest

from sftconj import (
    BlockMap,
    DirectedGraph,
    MultiGraph,
    activation_schedule,
    apply_schedule,
    attach_weight_widget,
    can_amalgamate,
    decide_k_block_conjugacy,
    edge_gadget_pair,
    edge_to_vertex,
    gi_to_digraphs,
    has_structure_property,
    hitting_set_reduction,
    is_irreducible,
    search_one_block_reduction,
    trim_to_essential,
    vertex_gadget_pair,
    verify,
)
from sftconj.errors import ContractViolationError
from sftconj.gadgets import StructurePartition, UndirectedGraph

from tests import instances
from tests.brute import same_graph


class TestGiDoubling:
    def test_triangle(self):
        tri = UndirectedGraph("abc", [("a", "b"), ("b", "c"), ("a", "c")])
        d1, d2 = gi_to_digraphs(tri, tri)
        assert len(d1.edges) == 6
        assert all((y, x) in d1.edges for (x, y) in d1.edges)

    def test_disconnected_rejected(self):
        g = UndirectedGraph("abcd", [("a", "b"), ("c", "d")])
        with pytest.raises(ValueError):
            gi_to_digraphs(g, g)

    def test_isomorphic_squares_admit_one_block_code(self):
        sq1 = UndirectedGraph("abcd", [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])
        sq2 = UndirectedGraph("pqrs", [("p", "r"), ("r", "q"), ("q", "s"), ("s", "p")])
        d1, d2 = gi_to_digraphs(sq1, sq2)
        assert decide_k_block_conjugacy(d1, d2, 1) is not None

    def test_nonisomorphic_pair_admits_none(self):
        square = UndirectedGraph("abcd", [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])
        chorded_path = UndirectedGraph(
            "abcd", [("a", "b"), ("b", "c"), ("c", "d"), ("a", "c")]
        )
        d1, d2 = gi_to_digraphs(square, chorded_path)
        assert decide_k_block_conjugacy(d1, d2, 1) is None


class TestVertexGadgets:
    def test_counts(self):
        for k in (2, 3, 4):
            g = instances.pentagon_left()
            h = instances.pentagon_right()
            gp, hp = vertex_gadget_pair(g, h, k)
            assert len(gp) == (k + 3) * len(g)
            assert len(gp.edges) == (k + 3) * len(g) + len(g.edges)
            assert len(hp) == (2 * k + 2) * len(h)
            assert len(hp.edges) == (2 * k + 2) * len(h) + len(h.edges)

    def test_self_loop_k2_shapes(self):
        g = instances.self_loop()
        gp, hp = vertex_gadget_pair(g, g, 2)
        assert len(gp) == 5 and len(hp) == 6
        assert trim_to_essential(gp) == gp and trim_to_essential(hp) == hp

    def test_k1_rejected(self):
        g = instances.self_loop()
        with pytest.raises(ContractViolationError):
            vertex_gadget_pair(g, g, 1)

    def test_essential_inputs_give_essential_gadgets(self):
        g = instances.pentagon_left()
        gp, hp = vertex_gadget_pair(g, g, 3)
        assert trim_to_essential(gp) == gp and trim_to_essential(hp) == hp

    def test_cycles_stretch_by_k_plus_2(self):
        # cycles of the source gadget visit one __in vertex per original
        # step, so their lengths are (k+2) times original cycle lengths
        from sftconj import enumerate_cycles, trace_powers

        g = instances.two_cycle()
        k = 2
        gp, _ = vertex_gadget_pair(g, g, k)
        seq = trace_powers(gp, 2 * (k + 2))
        for n in range(1, 2 * (k + 2) + 1):
            count = seq.power(n)
            if n % (k + 2) != 0:
                assert count == 0
            if count:
                for cyc in enumerate_cycles(gp, n):
                    ins = [v for v in cyc if v.endswith("__in")]
                    assert len(ins) == n // (k + 2)


class TestEdgeGadgets:
    def test_self_loop_edge_counts(self):
        m = MultiGraph(["a"], [("e", "a", "a")])
        src, tgt = edge_gadget_pair(m, m, 2)
        # source side: k+1 new vertices and k+3 labeled edges per edge
        assert len(src) == 1 + 3
        assert len(src.edges) == 5
        assert len(tgt) == 1 + 4
        assert len(tgt.edges) == 6

    def test_single_edge_no_cycles(self):
        m = MultiGraph(["a", "b"], [("e", "a", "b")])
        src, _ = edge_gadget_pair(m, m, 2)
        assert trim_to_essential(edge_to_vertex(src)).is_empty

    def test_commutes_with_vertex_representation(self):
        g = MultiGraph(["a", "b"], [("e", "a", "b"), ("f", "b", "a"), ("s", "a", "a")])
        h = MultiGraph(["p"], [("x", "p", "p"), ("y", "p", "p")])
        for k in (2, 3):
            src, tgt = edge_gadget_pair(g, h, k)
            want_src, want_tgt = vertex_gadget_pair(
                edge_to_vertex(g), edge_to_vertex(h), k
            )
            assert same_graph(edge_to_vertex(src), want_src)
            assert same_graph(edge_to_vertex(tgt), want_tgt)


def tiny_structure_host():
    """alpha | A={a} | B={b1,b2} | C={c1,c2}, b's mergeable (disjoint outs)."""
    edges = [
        ("a", "b1"),
        ("a", "b2"),
        ("b1", "c1"),
        ("b2", "c2"),
        ("alpha", "alpha"),
        ("a", "a"),
        ("a", "alpha"),
        ("alpha", "a"),
    ]
    for c in ("c1", "c2"):
        edges += [(c, c), (c, "alpha"), ("alpha", c)]
    g = DirectedGraph(["a", "b1", "b2", "c1", "c2", "alpha"], edges)
    p = StructurePartition(
        alpha="alpha",
        A=frozenset("a"),
        B=frozenset({"b1", "b2"}),
        C=frozenset({"c1", "c2"}),
    )
    return g, p


class TestStructureProperty:
    def test_tiny_host(self):
        g, p = tiny_structure_host()
        assert has_structure_property(g, p)

    def test_missing_alpha_loop(self):
        g, p = tiny_structure_host()
        g2 = DirectedGraph(g.vertices, [e for e in g.edges if e != ("alpha", "alpha")])
        assert not has_structure_property(g2, p)

    def test_wrong_partition(self):
        g, p = tiny_structure_host()
        bad = StructurePartition(
            alpha="alpha",
            A=frozenset({"a", "b1"}),
            B=frozenset({"b2"}),
            C=frozenset("c"),
        )
        assert not has_structure_property(g, bad)

    def test_one_block_conjugacies_merge_only_b(self):
        # on a structure-property graph, any vertex identification made
        # by a 1-block conjugacy stays inside B
        g, p = tiny_structure_host()
        found = search_one_block_reduction(g, 1)
        assert found is not None
        phi, _ = found
        for block in set(phi.as_vertex_map().values()):
            if len(block) > 1:
                assert set(block) <= p.B
        import itertools

        for pair in itertools.combinations(g.vertices, 2):
            name = ("m",)
            vmap = {v: (name if v in pair else (v,)) for v in g.vertices}
            from sftconj.oracles import minimal_image_graph

            image = minimal_image_graph(g, vmap)
            verdict = verify(g, image, BlockMap.one_block(vmap))
            if verdict.is_conjugacy:
                assert set(pair) <= p.B


class TestWeightWidget:
    def test_k4_wiring_matches_reference_pattern(self):
        g, p = tiny_structure_host()
        g2, p2, w = attach_weight_widget(g, p, {"a"}, {"c1"}, 4, widget_id="0")
        a1, a2 = w.a_nodes
        b1, b2, b3, b4 = w.b_nodes
        c1, c2 = w.c_nodes
        assert set(g2.predecessors(b1)) == {"a"}
        assert set(g2.successors(b1)) == {c1}
        assert set(g2.predecessors(b2)) == {a1}
        assert set(g2.successors(b2)) == {"c1", c1}
        assert set(g2.predecessors(b3)) == {"a", a1}
        assert set(g2.successors(b3)) == {c2}
        assert set(g2.predecessors(b4)) == {a2}
        assert set(g2.successors(b4)) == {"c1", c1, c2}
        for x in (a1, a2, c1, c2):
            assert g2.has_edge(x, x)
            assert g2.has_edge(x, "alpha") and g2.has_edge("alpha", x)
        assert has_structure_property(g2, p2)

    def test_k2_wiring(self):
        g, p = tiny_structure_host()
        g2, _, w = attach_weight_widget(g, p, {"a"}, {"c1"}, 2, widget_id="0")
        (a1,) = w.a_nodes
        b1, b2 = w.b_nodes
        (c1,) = w.c_nodes
        assert set(g2.predecessors(b1)) == {"a"} and set(g2.successors(b1)) == {c1}
        assert set(g2.predecessors(b2)) == {a1}
        assert set(g2.successors(b2)) == {"c1", c1}

    def test_widget_size(self):
        g, p = tiny_structure_host()
        for K in (2, 4, 6):
            g2, _, w = attach_weight_widget(g, p, {"a"}, {"c1"}, K, widget_id=f"{K}")
            assert len(w.a_nodes) + len(w.b_nodes) + len(w.c_nodes) == 2 * K
            assert len(g2) == len(g) + 2 * K

    def test_odd_k_rejected(self):
        g, p = tiny_structure_host()
        with pytest.raises(ValueError):
            attach_weight_widget(g, p, {"a"}, {"c1"}, 3, widget_id="0")

    def test_empty_attachment_rejected(self):
        g, p = tiny_structure_host()
        with pytest.raises(ValueError):
            attach_weight_widget(g, p, set(), {"c1"}, 2, widget_id="0")

    def test_private_chain_enforced(self):
        g, p = tiny_structure_host()
        g2, p2, w = attach_weight_widget(g, p, {"a"}, {"c1"}, 2, widget_id="0")
        with pytest.raises(ValueError):
            attach_weight_widget(
                g2, p2, {w.a_nodes[0]}, {"c1"}, 2, widget_id="1", existing=[w]
            )


BASE_REDUCTION_EDGES = {
    ("S1", "b__S1__u1"),
    ("b__S1__u1", "u1"),
    ("S1", "b__S1__u2"),
    ("b__S1__u2", "u2"),
    ("S1", "b__S1__beta"),
    ("b__S1__beta", "beta"),
    ("S2", "b__S2__u2"),
    ("b__S2__u2", "u2"),
    ("S2", "b__S2__u3"),
    ("b__S2__u3", "u3"),
    ("S2", "b__S2__beta"),
    ("b__S2__beta", "beta"),
}


def _star_edges(part):
    out = set()
    for x in part:
        out |= {(x, "alpha"), ("alpha", x), (x, x)}
    out.add(("alpha", "alpha"))
    return out


class TestHittingSetReduction:
    def test_base_graph_is_the_thirteen_vertex_reference(self):
        red = hitting_set_reduction(instances.two_sets_instance(), include_widgets=False)
        assert len(red.graph) == 13
        want = BASE_REDUCTION_EDGES | _star_edges(["S1", "S2", "u1", "u2", "u3", "beta"])
        assert red.graph.edges == frozenset(want)
        assert has_structure_property(red.graph, red.partition)

    def test_full_construction_counts(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            red = hitting_set_reduction(instances.two_sets_instance(), K=4)
        # 7 widgets (4 incidences + 3 elements) of 2K vertices each
        assert len(red.widgets) == 7
        assert len(red.graph) == 13 + 7 * 2 * 4
        assert has_structure_property(red.graph, red.partition)
        assert red.test_scale

    def test_paper_scale_K(self):
        red = hitting_set_reduction(instances.two_sets_instance())
        assert red.K == 30 and not red.test_scale
        assert len(red.graph) == 13 + 7 * 60

    def test_output_irreducible(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            red = hitting_set_reduction(instances.two_sets_instance(), K=2)
        assert is_irreducible(red.graph)

    def test_element_in_no_set_rejected(self):
        from sftconj.oracles import HittingSetInstance

        inst = HittingSetInstance(sets=(("u1",),), universe=("u1", "u2"), t=1)
        with pytest.raises(ValueError):
            hitting_set_reduction(inst, include_widgets=False)


class TestActivationSchedule:
    def test_base_schedule_is_one_merge_per_set(self):
        red = hitting_set_reduction(instances.two_sets_instance(), include_widgets=False)
        steps = activation_schedule(red, {"u2"})
        assert len(steps) == 2
        final, comp = apply_schedule(red.graph, steps)
        assert len(final) == len(red.graph) - 2
        assert verify(red.graph, final, comp).is_conjugacy

    def test_k4_schedule_runs_and_verifies(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            red = hitting_set_reduction(instances.two_sets_instance(), K=4)
        steps = activation_schedule(red, {"u2"})
        m, n, t = 2, 3, 1
        assert len(steps) >= (m + n - t) * 4
        final, comp = apply_schedule(red.graph, steps)
        assert len(final) == len(red.graph) - len(steps)
        assert verify(red.graph, final, comp).is_conjugacy

    def test_non_hitting_set_rejected(self):
        red = hitting_set_reduction(instances.two_sets_instance(), include_widgets=False)
        with pytest.raises(ValueError):
            activation_schedule(red, {"u1"})

    def test_every_step_checked_at_application(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            red = hitting_set_reduction(instances.two_sets_instance(), K=2)
        steps = activation_schedule(red, {"u2"})
        g = red.graph
        from sftconj import amalgamate

        for step in steps:
            assert can_amalgamate(g, *step.merged) is not None
            g = amalgamate(g, *step.merged, step.new_name)


class TestGadgetDecide:
    def test_conjugate_pair_gadgets_admit_two_block_code(self):
        gp, hp = vertex_gadget_pair(
            instances.pentagon_left(), instances.pentagon_right(), 2
        )
        found = decide_k_block_conjugacy(gp, hp, 2, budget=30_000_000)
        assert found is not None
        assert verify(gp, hp, found).is_conjugacy

    def test_nonconjugate_pair_gadgets_admit_none(self):
        gp, hp = vertex_gadget_pair(instances.two_cycle(), instances.self_loop(), 2)
        assert decide_k_block_conjugacy(gp, hp, 2, budget=10_000_000) is None
