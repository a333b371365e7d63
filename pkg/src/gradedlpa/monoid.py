"""
The graph monoid M_E: the free abelian monoid on the vertices modulo
``v = sum_{s(e)=v} r(e)`` for every regular vertex.

Equality is a three-valued semi-decision.  ``Yes`` is certified either by
a common descendant under the one-step expansion ``->_1`` (confluence) or,
for graphs where no cycle has an exit, by equality in the group completion
(the monoid is then cancellative and embeds in it).  ``No`` is certified by
an invariant that equal elements must share.  Anything else is ``Unknown``.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from functools import lru_cache

from .graph import (
    GraphError,
    cycle_exits,
    enumerate_hereditary_saturated,
    hereditary_saturated_closure,
    no_cycle_has_exit,
    simple_cycles,
)
from .linalg import IntegerLattice

__all__ = [
    "MonoidElement",
    "MonoidError",
    "Verdict",
    "EqualityResult",
    "step",
    "monoid_equal",
    "is_cancellative",
    "Counterexample",
    "cancellation_counterexample",
    "OrderIdeal",
    "order_ideals",
    "cancellation_sweep",
    "DEFAULT_DEPTH",
    "DEFAULT_COEFF_CAP",
]

DEFAULT_DEPTH = 8
DEFAULT_COEFF_CAP = 64
DEFAULT_BUDGET = 200_000


class MonoidError(ValueError):
    pass


class Verdict(enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


class MonoidElement:
    """A finitely supported map vertex -> positive integer."""

    __slots__ = ("_items",)

    def __init__(self, coeffs=None):
        items = {}
        for v, n in dict(coeffs or {}).items():
            if isinstance(n, bool) or not isinstance(n, int) or n < 0:
                raise MonoidError(f"coefficient of {v!r} must be a natural number")
            if n:
                items[v] = n
        self._items = tuple(sorted(items.items()))

    @classmethod
    def of(cls, *vertices):
        c = {}
        for v in vertices:
            c[v] = c.get(v, 0) + 1
        return cls(c)

    @property
    def coeffs(self):
        return dict(self._items)

    def support(self):
        return frozenset(v for v, _ in self._items)

    def total(self):
        return sum(n for _, n in self._items)

    def __getitem__(self, v):
        return dict(self._items).get(v, 0)

    def __add__(self, other):
        c = self.coeffs
        for v, n in other._items:
            c[v] = c.get(v, 0) + n
        return MonoidElement(c)

    def __eq__(self, other):
        return isinstance(other, MonoidElement) and self._items == other._items

    def __hash__(self):
        return hash(self._items)

    def __bool__(self):
        return bool(self._items)

    def to_dict(self):
        return dict(self._items)

    def __repr__(self):
        if not self._items:
            return "0"
        return " + ".join(v if n == 1 else f"{n}{v}" for v, n in self._items)


def _check_support(g, x):
    bad = [v for v in x.support() if not g.is_vertex(v)]
    if bad:
        raise GraphError(f"unknown vertices {sorted(bad)}")


def step(g, x, v):
    """One application of ->_1 at ``v``."""
    _check_support(g, x)
    if not g.is_vertex(v) or g.is_sink(v):
        raise MonoidError(f"{v!r} is not a regular vertex")
    if x[v] < 1:
        raise MonoidError(f"{v!r} does not occur in the element")
    c = x.coeffs
    c[v] -= 1
    for e in g.out_edges(v):
        t = g.tgt(e)
        c[t] = c.get(t, 0) + 1
    return MonoidElement(c)


# -- precomputed per-graph data --------------------------------------------


class _MonoidData:
    def __init__(self, g):
        self.g = g
        self.index = {v: i for i, v in enumerate(g.vertices)}
        n = len(g.vertices)
        # delta[i] = change of the coefficient vector when expanding vertex i once
        self.delta = []
        rels = []
        for v in g.vertices:
            d = [0] * n
            if not g.is_sink(v):
                d[self.index[v]] -= 1
                for e in g.out_edges(v):
                    d[self.index[g.tgt(e)]] += 1
                rels.append(d)
            self.delta.append(d)
        self.regular_idx = [self.index[v] for v in g.vertices if not g.is_sink(v)]
        self.relations = IntegerLattice(rels, n)
        self.cancellative = no_cycle_has_exit(g)

    def vec(self, x):
        v = [0] * len(self.index)
        for k, n in x._items:
            v[self.index[k]] = n
        return tuple(v)

    def elem(self, vec):
        return MonoidElement({v: n for v, n in zip(self.g.vertices, vec) if n})


@lru_cache(maxsize=256)
def _data(g):
    return _MonoidData(g)


@dataclass
class EqualityResult:
    verdict: Verdict
    reason: str
    witness: MonoidElement | None = None
    explored: int = 0

    def __bool__(self):
        return self.verdict is Verdict.YES


def _successors(data, state, cap):
    """One-step rewrites of ``state``; second value is False if any was capped."""
    out, kept_all = [], True
    for i in data.regular_idx:
        if state[i]:
            nxt = tuple(a + b for a, b in zip(state, data.delta[i]))
            if cap is not None and max(nxt) > cap:
                kept_all = False
            else:
                out.append(nxt)
    return out, kept_all


def reachable_meet(g, x, y, depth, coeff_cap=DEFAULT_COEFF_CAP, budget=DEFAULT_BUDGET):
    """Bidirectional BFS for a common descendant within ``depth`` steps per side.

    Returns ``(meeting_vector_or_None, exhausted, explored)``; ``exhausted``
    is false when the coefficient cap or node budget pruned the search.
    """
    data = _data(g)
    sx, sy = data.vec(x), data.vec(y)
    if sx == sy:
        return sx, True, 1
    seen = [{sx}, {sy}]
    frontier = [{sx}, {sy}]
    levels = [0, 0]
    complete = True
    while True:
        options = [i for i in (0, 1) if levels[i] < depth and frontier[i]]
        if not options:
            break
        i = min(options, key=lambda k: len(frontier[k]))
        other = seen[1 - i]
        nxt = set()
        for s in frontier[i]:
            succ, kept_all = _successors(data, s, coeff_cap)
            complete = complete and kept_all
            for t in succ:
                if t in other:
                    return t, complete, len(seen[0]) + len(seen[1])
                if t not in seen[i]:
                    nxt.add(t)
        seen[i] |= nxt
        frontier[i] = nxt
        levels[i] += 1
        if len(seen[0]) + len(seen[1]) > budget:
            complete = False
            break
    return None, complete, len(seen[0]) + len(seen[1])


def monoid_equal(g, x, y, depth=DEFAULT_DEPTH, coeff_cap=DEFAULT_COEFF_CAP, budget=DEFAULT_BUDGET):
    _check_support(g, x)
    _check_support(g, y)
    data = _data(g)
    if x == y:
        return EqualityResult(Verdict.YES, "identical", x)
    if not x or not y:
        return EqualityResult(Verdict.NO, "zero")
    # equal classes generate the same order-ideal
    if hereditary_saturated_closure(g, x.support()) != hereditary_saturated_closure(g, y.support()):
        return EqualityResult(Verdict.NO, "support")
    diff = [a - b for a, b in zip(data.vec(x), data.vec(y))]
    in_group = diff in data.relations
    if not in_group:
        return EqualityResult(Verdict.NO, "group")
    meet, _, explored = reachable_meet(g, x, y, depth, coeff_cap, budget)
    if meet is not None:
        return EqualityResult(Verdict.YES, "rewrite", data.elem(meet), explored)
    if data.cancellative:
        return EqualityResult(Verdict.YES, "cancellative-group", None, explored)
    return EqualityResult(Verdict.UNKNOWN, "exhausted", None, explored)


def is_cancellative(g):
    return no_cycle_has_exit(g)


@dataclass
class Counterexample:
    """``x + z ~ y + z`` while ``x`` and ``y`` differ."""

    x: MonoidElement
    y: MonoidElement
    z: MonoidElement
    cycle: tuple
    exit: str
    chain: list = field(default_factory=list)

    def certify(self, g, depth=DEFAULT_DEPTH):
        lhs = monoid_equal(g, self.x + self.z, self.y + self.z, depth)
        rhs = monoid_equal(g, self.x, self.y, depth)
        return lhs.verdict is Verdict.YES and rhs.verdict is Verdict.NO

    def to_dict(self):
        return {
            "x": self.x.to_dict(),
            "y": self.y.to_dict(),
            "z": self.z.to_dict(),
            "cycle": list(self.cycle),
            "exit": self.exit,
            "chain": [c.to_dict() for c in self.chain],
        }


def cancellation_counterexample(g):
    """Witness of non-cancellation from a cycle with an exit, or ``None``.

    Expanding once at each vertex along the cycle returns to its base point
    and leaves behind the ranges of every other edge leaving the cycle, so
    ``s(p) ~ s(p) + y`` with ``y`` nonzero.  Taking ``x = 0`` and ``z = s(p)``
    gives ``x + z ~ y + z`` while ``x != y`` because M_E is conical.
    """
    for cycle in simple_cycles(g):
        exits = cycle_exits(g, cycle)
        if not exits:
            continue
        base = g.src(cycle[0])
        z = MonoidElement.of(base)
        state = z
        chain = [state]
        for a in cycle:
            state = step(g, state, g.src(a))
            chain.append(state)
        left = state.coeffs
        left[base] -= 1
        y = MonoidElement(left)
        return Counterexample(MonoidElement(), y, z, cycle, exits[0][1], chain)
    return None


@dataclass(frozen=True)
class OrderIdeal:
    """The order-ideal of M_E generated by a hereditary saturated set.

    A class lies in it iff some (equivalently every) representative has
    support inside ``vertices``.
    """

    vertices: frozenset

    def __contains__(self, x):
        return x.support() <= self.vertices

    def sorted_vertices(self):
        return sorted(self.vertices)


def order_ideals(g, bound=None):
    kwargs = {} if bound is None else {"bound": bound}
    return [OrderIdeal(H) for H in enumerate_hereditary_saturated(g, **kwargs)]


def random_element(g, rng, max_coeff=3, allow_zero=True):
    while True:
        c = {v: rng.randint(0, max_coeff) for v in g.vertices}
        x = MonoidElement(c)
        if x or allow_zero:
            return x


def cancellation_sweep(g, samples=500, seed=0, max_coeff=3, depth=DEFAULT_DEPTH):
    """Count triples with ``x + z ~ y + z`` (Yes) but ``x`` vs ``y`` No.

    Every other triple is built so the hypothesis holds: ``x + z`` is
    rewritten a few steps and ``y`` is what remains after removing ``z``,
    when that is possible.
    """
    rng = random.Random(seed)
    regular = [v for v in g.vertices if not g.is_sink(v)]
    failures = []
    yes_pairs = 0
    for i in range(samples):
        x = random_element(g, rng, max_coeff)
        z = random_element(g, rng, max_coeff)
        y = None
        if i % 2 and regular:
            w = x + z
            for _ in range(rng.randint(1, 3)):
                present = [v for v in regular if w[v]]
                if not present:
                    break
                w = step(g, w, rng.choice(present))
            if all(w[v] >= n for v, n in z.coeffs.items()):
                y = MonoidElement({v: w[v] - z[v] for v in g.vertices})
        if y is None:
            y = random_element(g, rng, max_coeff)
        lhs = monoid_equal(g, x + z, y + z, depth)
        if lhs.verdict is Verdict.YES:
            yes_pairs += 1
            if monoid_equal(g, x, y, depth).verdict is Verdict.NO:
                failures.append((x, y, z))
    return {"samples": samples, "related": yes_pairs, "failures": failures}
