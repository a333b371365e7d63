import json

import pytest
from oracles import brute_hs_closure, brute_hs_sets, small_graph_family

from gradedlpa.graph import (
    CoverWindow,
    Graph,
    GraphError,
    cycle_exits,
    enumerate_hereditary_saturated,
    has_condition_l,
    hereditary_saturated_closure,
    hs_join,
    hs_meet,
    no_cycle_has_exit,
    simple_cycles,
)


def test_json_round_trip(E):
    assert Graph.from_json(json.dumps(E.to_dict())) == E


def test_missing_weight_defaults_to_one():
    g = Graph.from_dict({"vertices": ["u"], "edges": [{"id": "e", "src": "u", "tgt": "u"}]})
    assert g.weight("e") == 1


@pytest.mark.parametrize(
    "data",
    [
        {"vertices": ["u"], "edges": [], "extra": 1},
        {"vertices": ["u"], "edges": [{"id": "e", "src": "u", "tgt": "u", "colour": 1}]},
        {"vertices": ["u"], "edges": [{"id": "e", "src": "u", "tgt": "w"}]},
        {"vertices": ["u", "u"], "edges": []},
        {"vertices": ["u"], "edges": [{"id": "u", "src": "u", "tgt": "u"}]},
        {"vertices": ["u.v"], "edges": []},
        {"vertices": ["u"], "edges": [{"id": "e", "src": "u", "tgt": "u", "w": 1.5}]},
        {"edges": []},
    ],
)
def test_invalid_graphs_rejected(data):
    with pytest.raises(GraphError):
        Graph.from_dict(data)


def test_sinks_and_regular(E, A2):
    assert not E.sinks()
    assert sorted(A2.sinks()) == ["v2"]
    assert A2.regular_vertices() == frozenset({"v1"})


def test_special_edge_is_largest_id(E):
    assert E.special_edge("u") == "f"


def test_cycles_and_exits(E, F, loop, A2):
    assert simple_cycles(E) == [("e",), ("f", "g")]
    assert {c for c in simple_cycles(F)} == {("e",), ("f",)}
    assert cycle_exits(loop, ("e",)) == []
    assert no_cycle_has_exit(loop) and not has_condition_l(loop)
    assert has_condition_l(F) and not no_cycle_has_exit(F)
    assert no_cycle_has_exit(A2) and has_condition_l(A2)


def test_cycle_enumeration_counts_on_complete_graph():
    g = Graph(["a", "b", "c"], [(f"e{x}{y}", x, y) for x in "abc" for y in "abc" if x != y])
    # 3 two-cycles and 2 three-cycles
    assert len(simple_cycles(g)) == 5


def test_hereditary_saturated_against_brute_force():
    for g in small_graph_family(3, 1):
        assert [set(h) for h in enumerate_hereditary_saturated(g)] == sorted(
            (set(h) for h in brute_hs_sets(g)), key=lambda h: (len(h), sorted(h))
        )
        for v in g.vertices:
            assert hereditary_saturated_closure(g, {v}) == brute_hs_closure(g, {v})


def test_join_and_meet(edgeless2):
    a, b = frozenset({"v0"}), frozenset({"v1"})
    assert hs_join(edgeless2, a, b) == frozenset({"v0", "v1"})
    assert hs_meet(a, b) == frozenset()


def test_closure_rejects_unknown_vertex(E):
    with pytest.raises(GraphError):
        hereditary_saturated_closure(E, {"zz"})


def test_enumeration_bound(E):
    with pytest.raises(GraphError):
        enumerate_hereditary_saturated(E, bound=1)


class TestCoverWindow:
    def test_edges_drop_one_level(self, E):
        w = CoverWindow(E, -1, 1)
        assert w.graph.src("f@1") == "u@1" and w.graph.tgt("f@1") == "v@0"
        assert "e@-1" not in w.edge_of

    def test_unit_weight_window_is_acyclic(self, E, F):
        for g in (E, F):
            assert simple_cycles(CoverWindow(g, -3, 3).graph) == []

    def test_complete_vertices(self, F):
        w = CoverWindow(F, 0, 2)
        assert w.complete_vertices() == frozenset({"u@1", "u@2"})

    def test_weighted_levels(self):
        g = Graph(["u"], [("e", "u", "u", 2), ("f", "u", "u", -1)])
        w = CoverWindow(g, 0, 2)
        assert w.graph.tgt("e@2") == "u@0"
        assert w.graph.tgt("f@0") == "u@1"

    def test_restrict_and_bad_window(self, F):
        w = CoverWindow(F, -2, 2)
        assert w.restrict(-1, 1) == CoverWindow(F, -1, 1)
        with pytest.raises(GraphError):
            w.restrict(-3, 1)
        with pytest.raises(GraphError):
            CoverWindow(F, 1, 0)
