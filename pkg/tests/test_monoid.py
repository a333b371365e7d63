import random

import pytest
from oracles import brute_hs_closure, line_graph, random_rewrite_chain, small_graph_family

from gradedlpa.graph import Graph, GraphError
from gradedlpa.monoid import (
    MonoidElement,
    MonoidError,
    Verdict,
    cancellation_counterexample,
    cancellation_sweep,
    is_cancellative,
    monoid_equal,
    order_ideals,
    step,
)

M = MonoidElement


class TestElements:
    def test_zero_coefficients_dropped(self):
        assert M({"u": 0, "v": 2}).coeffs == {"v": 2}
        assert not M()

    @pytest.mark.parametrize("bad", [{"u": -1}, {"u": 1.0}, {"u": True}])
    def test_rejects(self, bad):
        with pytest.raises(MonoidError):
            M(bad)

    def test_addition(self):
        assert M.of("u") + M.of("u", "v") == M({"u": 2, "v": 1})


class TestStep:
    def test_examples(self, E, F, A2):
        assert step(F, M.of("u"), "u") == M({"u": 2})
        assert step(E, M.of("u"), "u") == M.of("u", "v")
        assert step(A2, M.of("v1", "v2"), "v1") == M({"v2": 2})

    def test_errors(self, A2):
        with pytest.raises(MonoidError):
            step(A2, M.of("v2"), "v2")
        with pytest.raises(MonoidError):
            step(A2, M.of("v2"), "v1")
        with pytest.raises(GraphError):
            step(A2, M.of("zz"), "v1")


class TestEquality:
    def test_examples(self, E, F):
        assert monoid_equal(F, M.of("u"), M({"u": 2})).verdict is Verdict.YES
        assert monoid_equal(E, M.of("u"), M.of("u", "v")).verdict is Verdict.YES
        assert monoid_equal(E, M.of("u"), M()).verdict is Verdict.NO
        assert monoid_equal(F, M(), M()).verdict is Verdict.YES

    def test_step_is_equality(self):
        rng = random.Random(0)
        for g in small_graph_family(2, 2):
            for v in g.vertices:
                if g.is_sink(v):
                    continue
                x = M({w: rng.randint(0, 2) for w in g.vertices}) + M.of(v)
                assert monoid_equal(g, x, step(g, x, v), 1).verdict is Verdict.YES

    def test_symmetric(self):
        rng = random.Random(1)
        for g in small_graph_family(2, 2):
            for _ in range(5):
                x = M({w: rng.randint(0, 2) for w in g.vertices})
                y = M({w: rng.randint(0, 2) for w in g.vertices})
                assert monoid_equal(g, x, y).verdict == monoid_equal(g, y, x).verdict

    def test_group_invariant_separates(self, F):
        # 2u ~ u but F's group completion is trivial; the loop graph has Z
        loop = Graph(["u"], [("e", "u", "u")])
        r = monoid_equal(loop, M.of("u"), M({"u": 2}))
        assert r.verdict is Verdict.NO and r.reason == "group"

    def test_support_invariant_uses_saturation(self):
        g = line_graph(2)
        # v1 ~ v2 although the plain hereditary closures differ
        assert monoid_equal(g, M.of("v1"), M.of("v2")).verdict is Verdict.YES
        g = Graph(["a", "b"], [("x", "a", "a"), ("y", "b", "b")])
        r = monoid_equal(g, M.of("a"), M.of("b"))
        assert r.verdict is Verdict.NO and r.reason == "support"

    def test_cancellative_group_path(self, loop):
        two = Graph(["a", "b"], [("x", "a", "b"), ("y", "b", "a")])
        r = monoid_equal(two, M({"a": 5}), M({"b": 5}), depth=1)
        assert r.verdict is Verdict.YES

    def test_unknown_when_budget_exhausted(self):
        g = Graph(["u", "v"], [("e", "u", "u"), ("f", "u", "v"), ("g", "v", "v"), ("h", "v", "u")])
        x, y = M({"u": 1}), M({"u": 3, "v": 2})
        r = monoid_equal(g, x, y, depth=0)
        assert r.verdict is Verdict.UNKNOWN

    def test_rewrite_chains_agree(self):
        rng = random.Random(5)
        for g in small_graph_family(2, 2):
            for _ in range(4):
                x = {v: rng.randint(0, 2) for v in g.vertices}
                x = {k: c for k, c in x.items() if c} or {g.vertices[0]: 1}
                y = random_rewrite_chain(g, x, 4, rng)
                assert monoid_equal(g, M(x), M(y)).verdict is Verdict.YES

    def test_no_answers_respect_closure_oracle(self):
        for g in small_graph_family(2, 2):
            for a in g.vertices:
                for b in g.vertices:
                    separated = brute_hs_closure(g, {a}) != brute_hs_closure(g, {b})
                    if separated:
                        assert monoid_equal(g, M.of(a), M.of(b)).verdict is Verdict.NO


class TestCancellation:
    def test_is_cancellative(self, F, loop, A2):
        assert not is_cancellative(F)
        assert is_cancellative(loop)
        assert is_cancellative(A2)

    def test_counterexamples(self, E, F):
        cx = cancellation_counterexample(F)
        assert cx.certify(F, 2)
        assert cx.x == M() and cx.y == M.of("u") and cx.z == M.of("u")
        cx = cancellation_counterexample(E)
        assert cx.cycle == ("e",) and cx.exit == "f"
        assert cx.certify(E)
        d = cx.to_dict()
        assert d["chain"][0] == {"u": 1}

    def test_none_when_cancellative(self, loop, A2):
        assert cancellation_counterexample(loop) is None
        assert cancellation_counterexample(A2) is None

    def test_sweep_finds_failures_only_without_cancellation(self, F, loop):
        assert cancellation_sweep(loop, 100)["failures"] == []
        assert cancellation_sweep(F, 100)["failures"]


class TestOrderIdeals:
    def test_counts(self, E, edgeless2):
        assert len(order_ideals(E)) == 2
        assert len(order_ideals(edgeless2)) == 4
        assert len(order_ideals(line_graph(3))) == 2

    def test_downward_closed(self, edgeless2):
        rng = random.Random(0)
        for g in (edgeless2, line_graph(3), Graph(["a", "b"], [("x", "a", "a")])):
            for ideal in order_ideals(g):
                for _ in range(30):
                    x = M({v: rng.randint(0, 2) for v in g.vertices})
                    z = M({v: rng.randint(0, 2) for v in g.vertices})
                    if x + z in ideal:
                        assert x in ideal and z in ideal
