"""
Finite weighted directed multigraphs and the structural analysis used by
every other module: regular vertices, simple cycles and exits, hereditary
saturated subsets, and finite windows of the covering graph.

Edges point from ``src`` to ``tgt``.  A path ``e1 e2 ... en`` is composable
when ``tgt(ei) == src(ei+1)``.  Vertex and edge ids are opaque strings, and
everything downstream orders them lexicographically.
"""

from __future__ import annotations

import json
import re
from itertools import combinations

__all__ = [
    "Graph",
    "GraphError",
    "CoverWindow",
    "regular_vertices",
    "simple_cycles",
    "no_cycle_has_exit",
    "covering_window",
    "hereditary_saturated_closure",
    "enumerate_hereditary_saturated",
    "HS_ENUMERATION_BOUND",
]

# Characters reserved by the element syntax ("." "^" "*" "+" "-" "/"),
# the graded-generator syntax ("@") and the rational-path syntax (";" "=").
_ID_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")

HS_ENUMERATION_BOUND = 16


class GraphError(ValueError):
    pass


class Graph:
    """An immutable finite directed multigraph with integer edge weights.

    >>> g = Graph(["u", "v"], [("e", "u", "u"), ("f", "u", "v"), ("g", "v", "u")])
    >>> g.out_edges("u")
    ('e', 'f')
    >>> sorted(g.regular_vertices())
    ['u', 'v']
    """

    __slots__ = ("_vertices", "_src", "_tgt", "_weight", "_out", "_in", "_key")

    def __init__(self, vertices, edges, weights=None, check_ids=True):
        vertices = list(vertices)
        for v in vertices:
            if check_ids:
                _check_id(v, "vertex")
        if len(set(vertices)) != len(vertices):
            raise GraphError("duplicate vertex id")
        vset = set(vertices)
        weights = dict(weights or {})

        src, tgt, weight = {}, {}, {}
        for item in edges:
            if len(item) == 4:
                eid, s, t, w = item
            else:
                eid, s, t = item
                w = weights.get(eid, 1)
            if check_ids:
                _check_id(eid, "edge")
            if eid in src:
                raise GraphError(f"duplicate edge id {eid!r}")
            if eid in vset:
                raise GraphError(f"id {eid!r} used for both a vertex and an edge")
            if s not in vset or t not in vset:
                raise GraphError(f"edge {eid!r} has an undeclared endpoint")
            if isinstance(w, bool) or not isinstance(w, int):
                raise GraphError(f"weight of {eid!r} must be an integer")
            src[eid], tgt[eid], weight[eid] = s, t, w
        unknown = set(weights) - set(src)
        if unknown:
            raise GraphError(f"weights given for unknown edges {sorted(unknown)}")

        self._vertices = tuple(sorted(vertices))
        self._src = src
        self._tgt = tgt
        self._weight = weight
        out = {v: [] for v in self._vertices}
        inc = {v: [] for v in self._vertices}
        for eid in sorted(src):
            out[src[eid]].append(eid)
            inc[tgt[eid]].append(eid)
        self._out = {v: tuple(es) for v, es in out.items()}
        self._in = {v: tuple(es) for v, es in inc.items()}
        self._key = (
            self._vertices,
            tuple((e, src[e], tgt[e], weight[e]) for e in sorted(src)),
        )

    # -- construction -----------------------------------------------------

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise GraphError("graph JSON must be an object")
        extra = set(data) - {"vertices", "edges"}
        if extra:
            raise GraphError(f"unknown keys in graph JSON: {sorted(extra)}")
        if "vertices" not in data:
            raise GraphError("graph JSON needs 'vertices'")
        edges = []
        for item in data.get("edges", []):
            if not isinstance(item, dict):
                raise GraphError("each edge must be an object")
            bad = set(item) - {"id", "src", "tgt", "w"}
            if bad:
                raise GraphError(f"unknown keys in edge: {sorted(bad)}")
            try:
                edges.append((item["id"], item["src"], item["tgt"], item.get("w", 1)))
            except KeyError as exc:
                raise GraphError(f"edge missing key {exc}") from None
        return cls(data["vertices"], edges)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def to_dict(self):
        return {
            "vertices": list(self._vertices),
            "edges": [
                {"id": e, "src": self._src[e], "tgt": self._tgt[e], "w": self._weight[e]}
                for e in self.edges
            ],
        }

    # -- accessors --------------------------------------------------------

    @property
    def vertices(self):
        return self._vertices

    @property
    def edges(self):
        return tuple(sorted(self._src))

    def src(self, e):
        return self._src[e]

    def tgt(self, e):
        return self._tgt[e]

    def weight(self, e):
        return self._weight[e]

    def out_edges(self, v):
        return self._out[v]

    def in_edges(self, v):
        return self._in[v]

    def is_vertex(self, x):
        return x in self._out

    def is_edge(self, x):
        return x in self._src

    def is_sink(self, v):
        return not self._out[v]

    def sinks(self):
        return tuple(v for v in self._vertices if not self._out[v])

    def regular_vertices(self):
        return frozenset(v for v in self._vertices if self._out[v])

    def special_edge(self, v):
        """The out-edge of ``v`` with the largest id (``None`` at a sink)."""
        out = self._out[v]
        return out[-1] if out else None

    def has_unit_weights(self):
        return all(w == 1 for w in self._weight.values())

    def path_weight(self, path):
        return sum(self._weight[e] for e in path)

    def adjacency(self):
        """``A[i][j]`` = number of edges from vertex i to vertex j."""
        index = {v: i for i, v in enumerate(self._vertices)}
        n = len(self._vertices)
        A = [[0] * n for _ in range(n)]
        for e, s in self._src.items():
            A[index[s]][index[self._tgt[e]]] += 1
        return A

    def is_path(self, path, start=None):
        if not path:
            return True
        if any(e not in self._src for e in path):
            return False
        if start is not None and self._src[path[0]] != start:
            return False
        return all(self._tgt[a] == self._src[b] for a, b in zip(path, path[1:]))

    def paths_from(self, v, length):
        """All paths of exactly ``length`` edges starting at ``v``."""
        layer = [()]
        ends = [v]
        for _ in range(length):
            new_layer, new_ends = [], []
            for p, u in zip(layer, ends):
                for e in self._out[u]:
                    new_layer.append(p + (e,))
                    new_ends.append(self._tgt[e])
            layer, ends = new_layer, new_ends
        return layer

    def paths_into(self, v, length):
        """All paths of exactly ``length`` edges ending at ``v``."""
        layer = [()]
        starts = [v]
        for _ in range(length):
            new_layer, new_starts = [], []
            for p, u in zip(layer, starts):
                for e in self._in[u]:
                    new_layer.append((e,) + p)
                    new_starts.append(self._src[e])
            layer, starts = new_layer, new_starts
        return layer

    def reachable(self, seeds):
        """Vertices reachable from ``seeds`` along edges (seeds included)."""
        seen = set(seeds)
        stack = list(seen)
        while stack:
            u = stack.pop()
            for e in self._out[u]:
                t = self._tgt[e]
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        return frozenset(seen)

    # -- dunder -----------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, Graph) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"Graph({len(self._vertices)} vertices, {len(self._src)} edges)"


def _check_id(x, kind):
    if not isinstance(x, str) or not _ID_RE.match(x):
        raise GraphError(f"invalid {kind} id {x!r}")


def regular_vertices(g):
    return g.regular_vertices()


def simple_cycles(g):
    """Cycles as edge tuples, each rotated to start at its least vertex.

    A cycle is a closed path whose edges have pairwise distinct sources, so
    its length is bounded by the number of vertices.
    """
    cycles = []
    for root in g.vertices:
        # only visit vertices >= root so each cycle is found from its least vertex
        stack = [(root, (), frozenset([root]))]
        while stack:
            u, path, used = stack.pop()
            for e in g.out_edges(u):
                t = g.tgt(e)
                if t == root:
                    cycles.append(path + (e,))
                elif t > root and t not in used:
                    stack.append((t, path + (e,), used | {t}))
    cycles.sort(key=lambda c: (len(c), c))
    return cycles


def cycle_exits(g, cycle):
    """Exits of ``cycle``: edges leaving one of its vertices off the cycle."""
    exits = []
    for a in cycle:
        for e in g.out_edges(g.src(a)):
            if e != a:
                exits.append((a, e))
    return exits


def no_cycle_has_exit(g):
    return all(not cycle_exits(g, c) for c in simple_cycles(g))


def has_condition_l(g):
    """Every cycle has an exit."""
    return all(cycle_exits(g, c) for c in simple_cycles(g))


class CoverWindow:
    """Levels ``lo..hi`` of the covering graph of ``base``.

    Vertex ``v`` at level ``n`` is named ``v@n`` and edge ``e`` at level ``n``
    is named ``e@n``; ``e@n`` runs from ``s(e)@n`` to ``r(e)@(n - w(e))`` and
    is kept only when both levels lie in the window.
    """

    def __init__(self, base, lo, hi):
        if lo > hi:
            raise GraphError(f"invalid window [{lo}, {hi}]")
        self.base = base
        self.lo = lo
        self.hi = hi
        self.vertex_of = {}
        self.edge_of = {}
        vertices, edges = [], []
        for n in range(lo, hi + 1):
            for v in base.vertices:
                name = f"{v}@{n}"
                vertices.append(name)
                self.vertex_of[name] = (v, n)
        for n in range(lo, hi + 1):
            for e in base.edges:
                m = n - base.weight(e)
                if lo <= m <= hi:
                    name = f"{e}@{n}"
                    edges.append((name, f"{base.src(e)}@{n}", f"{base.tgt(e)}@{m}", base.weight(e)))
                    self.edge_of[name] = (e, n)
        self.graph = Graph(vertices, edges, check_ids=False)

    def vertex(self, v, n):
        return f"{v}@{n}"

    def edge(self, e, n):
        return f"{e}@{n}"

    def is_complete(self, name):
        """True when every base edge out of this vertex survives in the window."""
        v, _ = self.vertex_of[name]
        return len(self.graph.out_edges(name)) == len(self.base.out_edges(v))

    def complete_vertices(self):
        return frozenset(x for x in self.graph.vertices if self.is_complete(x))

    def restrict(self, lo, hi):
        if not (self.lo <= lo <= hi <= self.hi):
            raise GraphError("restriction must lie inside the window")
        return CoverWindow(self.base, lo, hi)

    def __eq__(self, other):
        return (
            isinstance(other, CoverWindow)
            and self.base == other.base
            and (self.lo, self.hi) == (other.lo, other.hi)
        )

    def __hash__(self):
        return hash((self.base, self.lo, self.hi))


def covering_window(g, lo, hi):
    return CoverWindow(g, lo, hi)


def _hereditary(g, S):
    return g.reachable(S)


def _saturate(g, S):
    H = set(S)
    changed = True
    while changed:
        changed = False
        for v in g.vertices:
            if v in H or g.is_sink(v):
                continue
            if all(g.tgt(e) in H for e in g.out_edges(v)):
                H.add(v)
                changed = True
    return H


def hereditary_saturated_closure(g, S):
    S = set(S)
    unknown = [v for v in S if not g.is_vertex(v)]
    if unknown:
        raise GraphError(f"unknown vertices {sorted(unknown)}")
    H = frozenset(S)
    while True:
        nxt = frozenset(_saturate(g, _hereditary(g, H)))
        if nxt == H:
            return H
        H = nxt


def is_hereditary(g, H):
    return all(g.tgt(e) in H for v in H for e in g.out_edges(v))


def is_saturated(g, H):
    for v in g.vertices:
        if v not in H and not g.is_sink(v) and all(g.tgt(e) in H for e in g.out_edges(v)):
            return False
    return True


def enumerate_hereditary_saturated(g, bound=HS_ENUMERATION_BOUND):
    """All hereditary saturated vertex sets, smallest first."""
    n = len(g.vertices)
    if n > bound:
        raise GraphError(f"{n} vertices exceeds enumeration bound {bound}")
    found = set()
    for k in range(n + 1):
        for S in combinations(g.vertices, k):
            H = frozenset(S)
            if is_hereditary(g, H) and is_saturated(g, H):
                found.add(H)
    return sorted(found, key=lambda H: (len(H), sorted(H)))


def hs_join(g, H1, H2):
    return hereditary_saturated_closure(g, H1 | H2)


def hs_meet(H1, H2):
    return H1 & H2
