"""
Orbit modules over L_Q(E) for rational infinite paths.

A rational path ``beta lambda^inf`` is stored in canonical form: ``lambda``
is primitive and ``beta`` is as short as possible.  Since the infinite path
determines the edge sequence, the minimal ``beta`` pins ``lambda`` down
uniquely (it is the period read off right after ``beta``).

The module Q[x] has the tail-equivalence class of ``x`` as basis.  Vertices
act by source projection, edges by prepending, ghost edges by deleting a
matching first edge.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .graph import GraphError, has_condition_l
from .linalg import sparse_rank
from .lpa import LeavittPathAlgebra, LpaElement

__all__ = [
    "OrbitError",
    "RationalPath",
    "OrbitElement",
    "canonical",
    "parse_rational_path",
    "tail_key",
    "tail_equivalent",
    "act",
    "module_act",
    "grading_obstruction",
    "orbit_basis",
    "simple_sweep",
    "equivariant_dimension",
    "ProbeResult",
    "annihilator_probe",
    "is_effective_graph_groupoid",
    "interior_isotropy_witness",
]


class OrbitError(ValueError):
    pass


def _primitive(cycle):
    n = len(cycle)
    for p in range(1, n + 1):
        if n % p == 0 and cycle == cycle[:p] * (n // p):
            return cycle[:p]
    return cycle


@dataclass(frozen=True, order=True)
class RationalPath:
    """``prefix . cycle^inf``; construct through :func:`canonical`."""

    prefix: tuple
    cycle: tuple

    def source_in(self, g):
        return g.src(self.prefix[0] if self.prefix else self.cycle[0])

    @property
    def size(self):
        return len(self.prefix)

    def edges(self, n):
        """The first ``n`` edges of the infinite path."""
        out = list(self.prefix[:n])
        i = 0
        while len(out) < n:
            out.append(self.cycle[i % len(self.cycle)])
            i += 1
        return tuple(out)

    def __str__(self):
        return f"beta={'.'.join(self.prefix)};cycle={'.'.join(self.cycle)}"


def canonical(g, prefix, cycle):
    prefix, cycle = tuple(prefix), tuple(cycle)
    if not cycle:
        raise OrbitError("cycle must be nonempty")
    if not g.is_path(cycle) or g.tgt(cycle[-1]) != g.src(cycle[0]):
        raise OrbitError(f"{'.'.join(cycle)} is not a closed path")
    if prefix and (not g.is_path(prefix) or g.tgt(prefix[-1]) != g.src(cycle[0])):
        raise OrbitError("prefix must be a path ending where the cycle starts")
    cycle = _primitive(cycle)
    while prefix and prefix[-1] == cycle[-1]:
        prefix = prefix[:-1]
        cycle = cycle[-1:] + cycle[:-1]
    return RationalPath(prefix, cycle)


def parse_rational_path(g, text):
    """Parse ``beta=f.g;cycle=e`` (``beta=`` may be empty or omitted)."""
    fields = {}
    for part in text.replace(" ", "").split(";"):
        if not part:
            continue
        key, sep, value = part.partition("=")
        if not sep or key not in ("beta", "cycle") or key in fields:
            raise OrbitError(f"malformed rational path {text!r}")
        fields[key] = tuple(x for x in value.replace(",", ".").split(".") if x)
    if "cycle" not in fields:
        raise OrbitError(f"rational path {text!r} has no cycle")
    for e in fields.get("beta", ()) + fields["cycle"]:
        if not g.is_edge(e):
            raise OrbitError(f"unknown edge {e!r}")
    return canonical(g, fields.get("beta", ()), fields["cycle"])


def _least_rotation(cycle):
    return min(cycle[i:] + cycle[:i] for i in range(len(cycle)))


def tail_key(x):
    return _least_rotation(x.cycle)


def tail_equivalent(x, y):
    return tail_key(x) == tail_key(y)


class OrbitElement:
    """Finite Q-combination of tail-equivalent rational paths."""

    __slots__ = ("graph", "terms")

    def __init__(self, graph, terms=None):
        self.graph = graph
        clean = {}
        for q, c in dict(terms or {}).items():
            c = Fraction(c)
            if c:
                clean[q] = clean.get(q, 0) + c
        clean = {q: c for q, c in clean.items() if c}
        if len({tail_key(q) for q in clean}) > 1:
            raise OrbitError("basis paths of an orbit element must be tail-equivalent")
        self.terms = dict(sorted(clean.items()))

    @classmethod
    def basis(cls, graph, q):
        return cls(graph, {q: 1})

    def __add__(self, other):
        acc = dict(self.terms)
        for q, c in other.terms.items():
            acc[q] = acc.get(q, 0) + c
        return OrbitElement(self.graph, acc)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return OrbitElement(self.graph, {q: c * k for q, k in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, OrbitElement):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def to_dict(self):
        return {str(q): str(c) for q, c in self.terms.items()}

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*[{q}]" for q, c in self.terms.items())


# -- the action -------------------------------------------------------------


def _act_basis(g, gen, q):
    """Generator on one basis path; returns a RationalPath or None."""
    kind, x = gen
    if kind == "v":
        return q if q.source_in(g) == x else None
    if kind == "e":
        if g.tgt(x) != q.source_in(g):
            return None
        return canonical(g, (x,) + q.prefix, q.cycle)
    if q.prefix:
        return RationalPath(q.prefix[1:], q.cycle) if q.prefix[0] == x else None
    if q.cycle[0] == x:
        return RationalPath((), q.cycle[1:] + q.cycle[:1])
    return None


def _generator(g, gen):
    if isinstance(gen, tuple):
        kind, x = gen
    elif isinstance(gen, str) and gen.startswith("^"):
        kind, x = "g", gen[1:]
    else:
        x = gen
        kind = "v" if g.is_vertex(gen) else "e"
    if kind == "v" and not g.is_vertex(x) or kind in "eg" and not g.is_edge(x):
        raise GraphError(f"unknown generator {gen!r}")
    return kind, x


def act(g, gen, m):
    """Act by a vertex ``v``, an edge ``e`` or a ghost edge ``^e``."""
    gen = _generator(g, gen)
    if isinstance(m, RationalPath):
        m = OrbitElement.basis(g, m)
    acc = {}
    for q, c in m.terms.items():
        r = _act_basis(g, gen, q)
        if r is not None:
            acc[r] = acc.get(r, 0) + c
    return OrbitElement(g, acc)


def _monomial_on_basis(g, mono, q):
    mu, nu, v = mono
    for e in nu:
        q = _act_basis(g, ("g", e), q)
        if q is None:
            return None
    q = _act_basis(g, ("v", v), q)
    for e in reversed(mu):
        if q is None:
            return None
        q = _act_basis(g, ("e", e), q)
    return q


def module_act(a, m):
    g = a.algebra.graph
    if isinstance(m, RationalPath):
        m = OrbitElement.basis(g, m)
    acc = {}
    for mono, c in a.terms.items():
        for q, k in m.terms.items():
            r = _monomial_on_basis(g, mono, q)
            if r is not None:
                acc[r] = acc.get(r, 0) + c * k
    return OrbitElement(g, acc)


def grading_obstruction(g, x):
    """The primitive cycle of ``x`` and its degree.

    A rational path is fixed by the isotropy element its cycle determines;
    the degree of that element is the cycle's weight, which is nonzero for
    positive weights, so Q[x] admits no compatible grading.
    """
    return {"cycle": x.cycle, "degree": g.path_weight(x.cycle)}


# -- finite truncations ----------------------------------------------------


def orbit_basis(g, x, depth):
    """Canonical paths tail-equivalent to ``x`` with prefix length <= depth."""
    key = tail_key(x)
    rotations = sorted({key[i:] + key[:i] for i in range(len(key))})
    out = []
    for rho in rotations:
        start = g.src(rho[0])
        for k in range(depth + 1):
            for beta in g.paths_into(start, k):
                if not beta or beta[-1] != rho[-1]:
                    out.append(RationalPath(beta, rho))
    return sorted(out, key=lambda q: (q.size, q.prefix, q.cycle))


def _generators(g):
    return [("v", v) for v in g.vertices] + [("e", e) for e in g.edges] + [("g", e) for e in g.edges]


def _action_maps(g, basis):
    """Per generator, a partial map index -> index on the truncation."""
    pos = {q: i for i, q in enumerate(basis)}
    maps = []
    for gen in _generators(g):
        m = {}
        for i, q in enumerate(basis):
            r = _act_basis(g, gen, q)
            if r is not None and r in pos:
                m[i] = pos[r]
        maps.append((gen, m))
    return maps


def _commutant_dimension(maps_x, maps_y, nx, ny):
    """dim of {T : T G_x = G_y T for every generator}, T of shape ny x nx."""
    var = lambda i, j: i * nx + j  # noqa: E731
    rows = []
    for (_, gx), (_, gy) in zip(maps_x, maps_y):
        # (T G_x)[i][j] = T[i][gx(j)];  (G_y T)[i][j] = sum_{k: gy(k)=i} T[k][j]
        pre = {}
        for k, i in gy.items():
            pre.setdefault(i, []).append(k)
        for i in range(ny):
            for j in range(nx):
                row = {}
                if j in gx:
                    row[var(i, gx[j])] = row.get(var(i, gx[j]), 0) + 1
                for k in pre.get(i, ()):
                    row[var(k, j)] = row.get(var(k, j), 0) - 1
                row = {c: x for c, x in row.items() if x}
                if row:
                    rows.append(row)
    return nx * ny - sparse_rank(rows)


def simple_sweep(g, x, depth):
    """Transitivity and commutant checks on the truncation of Q[x].

    Both are finite shadows of simplicity and of ``End(Q[x]) = Q``.  The
    truncation keeps the basis paths with prefix length at most ``depth``;
    generator actions that leave it are dropped.
    """
    basis = orbit_basis(g, x, depth)
    maps = _action_maps(g, basis)
    n = len(basis)
    adj = [set() for _ in range(n)]
    for _, m in maps:
        for i, j in m.items():
            adj[i].add(j)
    transitive = True
    for s in range(n):
        seen = {s}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        if len(seen) != n:
            transitive = False
            break
    dim = _commutant_dimension(maps, maps, n, n)
    return {
        "basis_size": n,
        "transitive": transitive,
        "commutant_dimension": dim,
        "commutant_ok": dim == 1,
        "passed": transitive and dim == 1,
    }


def equivariant_dimension(g, x, y, depth):
    """Dimension of the maps truncation(x) -> truncation(y) commuting with every generator."""
    bx, by = orbit_basis(g, x, depth), orbit_basis(g, y, depth)
    return _commutant_dimension(_action_maps(g, bx), _action_maps(g, by), len(bx), len(by))


@dataclass
class ProbeResult:
    refuted: bool
    witness: RationalPath | None
    image: OrbitElement | None
    checked: int

    @property
    def status(self):
        return "refuted" if self.refuted else "consistent-up-to-depth"

    def to_dict(self):
        return {
            "status": self.status,
            "witness": None if self.witness is None else str(self.witness),
            "image": None if self.image is None else self.image.to_dict(),
            "checked": self.checked,
        }


def annihilator_probe(a, x, depth):
    """Look for a basis path of Q[x] not killed by ``a``.

    Sound for refutation only; a consistent answer says nothing beyond the
    paths inspected.
    """
    g = a.algebra.graph
    basis = orbit_basis(g, x, depth)
    for i, q in enumerate(basis):
        image = module_act(a, q)
        if image:
            return ProbeResult(True, q, image, i + 1)
    return ProbeResult(False, None, None, len(basis))


# -- effectiveness ---------------------------------------------------------


def is_effective_graph_groupoid(g):
    """Condition L: every cycle has an exit."""
    return has_condition_l(g)


def interior_isotropy_witness(g, max_len=3):
    """Search basic bisections Z(mu, nu) with |mu|, |nu| <= max_len inside the isotropy.

    Z(mu, nu) lies in the isotropy iff ``mu z == nu z`` for every boundary
    path ``z`` from the common range.  Up to swapping, that forces
    ``mu = nu alpha`` with ``alpha`` closed at ``r(nu)`` and a unique
    boundary path from there, i.e. every reachable vertex has out-degree 1.
    """
    for v in g.vertices:
        reach = g.reachable([v])
        if not all(len(g.out_edges(u)) == 1 for u in reach):
            continue
        for k in range(1, max_len + 1):
            for alpha in g.paths_from(v, k):
                if g.tgt(alpha[-1]) != v:
                    continue
                for j in range(max_len - k + 1):
                    for nu in g.paths_into(v, j):
                        return nu + alpha, nu
    return None


def random_lpa_element(algebra, rng, max_terms=3, max_len=2):
    g = algebra.graph
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        v = rng.choice(g.vertices)
        mu = rng.choice([p for k in range(max_len + 1) for p in g.paths_into(v, k)])
        nu = rng.choice([p for k in range(max_len + 1) for p in g.paths_into(v, k)])
        terms[(mu, nu, v)] = rng.randint(-2, 2) or 1
    acc = algebra.zero()
    for (mu, nu, v), c in terms.items():
        acc = acc + algebra.monomial(mu, nu, v, c)
    return acc


def module_axiom_sweep(g, x, samples=200, seed=0, depth=3):
    """Count triples (a, b, q) with ``(ab)q != a(bq)``."""
    rng = random.Random(seed)
    alg = LeavittPathAlgebra(g)
    basis = orbit_basis(g, x, depth)
    failures = 0
    for _ in range(samples):
        a = random_lpa_element(alg, rng)
        b = random_lpa_element(alg, rng)
        q = OrbitElement(g, {rng.choice(basis): 1, rng.choice(basis): rng.randint(1, 3)})
        if module_act(a * b, q) != module_act(a, module_act(b, q)):
            failures += 1
    return failures


__all__ += ["random_lpa_element", "module_axiom_sweep", "LpaElement"]
