"""Regenerate tests/data/frozen.json from the brute-force oracles.

Run from the repository root:  python tests/freeze_oracles.py
The tests only read the JSON; they never rerun this script.
"""

import itertools
import json
import os
import random
import sys

sys.path.insert(0, os.path.dirname(__file__))

from oracles import (  # noqa: E402
    brute_hs_sets,
    edgeless,
    graded_floor_by_steps,
    graph_E,
    graph_F,
    line_graph,
    matvec_T,
    single_loop,
)

from gradedlpa.graph import Graph  # noqa: E402

OUT = os.path.join(os.path.dirname(__file__), "data", "frozen.json")


def named_graphs():
    return {
        "E": graph_E(),
        "F": graph_F(),
        "A2": line_graph(2),
        "A3": line_graph(3),
        "A4": line_graph(4),
        "A5": line_graph(5),
        "loop": single_loop(),
        "edgeless2": edgeless(2),
        "loop_with_exit": Graph(["u", "v"], [("e", "u", "u"), ("f", "u", "v")]),
        "two_sinks": Graph(["a", "b", "c"], [("x", "a", "b"), ("y", "a", "c")]),
    }


def paths_into_count(g, v, max_len):
    """Number of paths (any length <= max_len, including the vertex) ending at v."""
    layer = {v: 1}
    total = 1
    for _ in range(max_len):
        nxt = {}
        for t, c in layer.items():
            for e in g.edges:
                if g.tgt(e) == t:
                    nxt[g.src(e)] = nxt.get(g.src(e), 0) + c
        layer = nxt
        total += sum(nxt.values())
    return total


def graded_table(g, seed, count=60):
    rng = random.Random(seed)
    gens = [(v, n) for v in g.vertices for n in range(-2, 3)]
    low = -2 - len(g.vertices) - 2
    rows = []
    for i in range(count):
        x = {}
        for _ in range(rng.randint(1, 3)):
            k = rng.choice(gens)
            x[k] = x.get(k, 0) + 1
        if i % 2:
            # a partial rewrite of x, so about half the pairs are equal
            y = dict(x)
            movable = [k for k in y if k[1] > -2 and not g.is_sink(k[0])]
            if movable:
                v, n = rng.choice(movable)
                y[(v, n)] -= 1
                for e in g.out_edges(v):
                    key = (g.tgt(e), n - 1)
                    y[key] = y.get(key, 0) + 1
                y = {k: c for k, c in y.items() if c}
        else:
            y = {}
            for _ in range(rng.randint(1, 3)):
                k = rng.choice(gens)
                y[k] = y.get(k, 0) + 1
        fx = graded_floor_by_steps(g, x, low, random.Random(i))
        fy = graded_floor_by_steps(g, y, low, random.Random(i + 1))
        rows.append(
            {
                "x": {f"{v}@{n}": c for (v, n), c in x.items()},
                "y": {f"{v}@{n}": c for (v, n), c in y.items()},
                "equal": fx == fy,
            }
        )
    return rows


def kgraph_table(mats, levels, entries, max_t=6):
    k, n = len(mats), len(mats[0])

    def push(level, vec, target):
        vec = tuple(vec)
        for i in range(k):
            for _ in range(target[i] - level[i]):
                vec = matvec_T(mats[i], vec)
        return vec

    elems = [(lv, vec) for lv in levels for vec in itertools.product(entries, repeat=n)]
    rows = []
    for (la, a), (lb, b) in itertools.combinations(elems, 2):
        N = tuple(max(p, q) for p, q in zip(la, lb))
        eq = any(
            push(la, a, tuple(c + s for c, s in zip(N, t))) == push(lb, b, tuple(c + s for c, s in zip(N, t)))
            for t in itertools.product(range(max_t + 1), repeat=k)
        )
        rows.append([list(la), list(a), list(lb), list(b), eq])
    return rows


def main():
    graphs = named_graphs()
    data = {"graphs": {name: g.to_dict() for name, g in graphs.items()}}
    data["hereditary_saturated"] = {
        name: sorted(sorted(H) for H in brute_hs_sets(g)) for name, g in graphs.items()
    }
    data["acyclic_dimension"] = {
        name: sum(paths_into_count(g, v, len(g.vertices)) ** 2 for v in g.sinks())
        for name, g in graphs.items()
        if name.startswith("A") or name == "two_sinks"
    }
    data["graded_pairs"] = {name: graded_table(graphs[name], seed=i) for i, name in enumerate(["E", "F", "A3", "two_sinks"])}
    data["kgraph"] = {
        "single_vertex_2_3": {
            "mats": [[[2]], [[3]]],
            "rows": kgraph_table([[[2]], [[3]]], [(0, 0), (1, 0), (0, 1), (1, 1)], range(0, 5)),
        },
        "two_vertex_swap_full": {
            "mats": [[[0, 1], [1, 0]], [[1, 1], [1, 1]]],
            "rows": kgraph_table([[[0, 1], [1, 0]], [[1, 1], [1, 1]]], [(0, 0), (1, 0), (0, 1)], range(0, 3)),
        },
    }
    with open(OUT, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=1, sort_keys=True)
        fh.write("\n")


if __name__ == "__main__":
    main()
