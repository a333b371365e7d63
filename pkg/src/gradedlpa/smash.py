"""
The smash product L_Q(E) # Z, its shift automorphisms, the isomorphism
phi' from the Leavitt path algebra of the covering graph (checked on finite
windows), matricial block embeddings, and graded von Neumann regular
witnesses.

A ``SmashElement`` is a finite sum ``sum_beta r_beta p_beta`` with
``r_beta`` in L_Q(E); multiplication follows

    (r p_alpha)(s p_beta) = r s_{alpha - beta} p_beta

where ``s_gamma`` is the degree-gamma component of ``s``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .graph import CoverWindow, GraphError
from .linalg import generalized_inverse, rank
from .lpa import LeavittPathAlgebra, LpaElement, LpaError, _sort_key

__all__ = [
    "SmashElement",
    "SmashError",
    "smash_mul",
    "shift",
    "WindowIsomorphism",
    "phi_prime",
    "EmbeddedBlock",
    "block_embed",
    "graded_regular_witness",
    "random_homogeneous",
]


class SmashError(ValueError):
    pass


class SmashElement:
    __slots__ = ("algebra", "parts")

    def __init__(self, algebra, parts=None):
        self.algebra = algebra
        clean = {}
        for beta, r in (parts or {}).items():
            if r.algebra is not algebra and r.algebra != algebra:
                raise SmashError("component lives in a different algebra")
            if r:
                clean[int(beta)] = r
        self.parts = dict(sorted(clean.items()))

    @classmethod
    def single(cls, r, beta):
        return cls(r.algebra, {beta: r})

    def __add__(self, other):
        self._check(other)
        parts = dict(self.parts)
        for beta, r in other.parts.items():
            parts[beta] = parts[beta] + r if beta in parts else r
        return SmashElement(self.algebra, parts)

    def __neg__(self):
        return SmashElement(self.algebra, {b: -r for b, r in self.parts.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, SmashElement):
            return smash_mul(self, other)
        return SmashElement(self.algebra, {b: r * other for b, r in self.parts.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, SmashElement):
            return self.algebra == other.algebra and self.parts == other.parts
        if other == 0:
            return not self.parts
        return NotImplemented

    def __hash__(self):
        return hash(tuple((b, hash(r)) for b, r in self.parts.items()))

    def __bool__(self):
        return bool(self.parts)

    def _check(self, other):
        if not isinstance(other, SmashElement):
            raise TypeError("expected a SmashElement")
        if other.algebra is not self.algebra and other.algebra != self.algebra:
            raise SmashError("smash elements over different graphs")

    def degrees(self):
        return sorted({d for r in self.parts.values() for d in r.degrees()})

    def is_homogeneous(self):
        return len(self.degrees()) <= 1

    def to_dict(self):
        return {str(b): str(r) for b, r in self.parts.items()}

    def __repr__(self):
        inner = ", ".join(f"p_{b}: {r}" for b, r in self.parts.items())
        return f"SmashElement({{{inner}}})"


def smash_mul(x, y):
    x._check(y)
    acc = {}
    for alpha, r in x.parts.items():
        for beta, s in y.parts.items():
            comp = s.component(alpha - beta)
            if not comp:
                continue
            prod = r * comp
            if prod:
                acc[beta] = acc[beta] + prod if beta in acc else prod
    return SmashElement(x.algebra, acc)


def shift(alpha, x):
    """Re-index ``p_beta -> p_{beta + alpha}``."""
    return SmashElement(x.algebra, {b + alpha: r for b, r in x.parts.items()})


class WindowIsomorphism:
    """phi' restricted to a finite window of the covering graph.

    The window algebra imposes the Cuntz-Krieger relation only at vertices
    whose out-edges all survive the cut, so it maps homomorphically (and
    injectively) into L_Q(E) # Z.
    """

    def __init__(self, g, lo, hi):
        self.window = CoverWindow(g, lo, hi)
        self.base = LeavittPathAlgebra(g)
        self.cover = LeavittPathAlgebra(self.window.graph, self.window.complete_vertices())

    # generator images
    def vertex_image(self, name):
        v, beta = self._vertex(name)
        return SmashElement.single(self.base.vertex(v), beta)

    def edge_image(self, name):
        e, alpha = self._edge(name)
        return SmashElement.single(self.base.edge(e), alpha - self.base.graph.weight(e))

    def ghost_image(self, name):
        e, alpha = self._edge(name)
        return SmashElement.single(self.base.ghost(e), alpha)

    def _vertex(self, name):
        try:
            return self.window.vertex_of[name]
        except KeyError:
            raise GraphError(f"{name!r} is not a vertex of the window") from None

    def _edge(self, name):
        try:
            return self.window.edge_of[name]
        except KeyError:
            raise GraphError(f"{name!r} is not an edge of the window") from None

    def __call__(self, x):
        if not isinstance(x, LpaElement) or x.algebra != self.cover:
            raise LpaError("phi' expects an element of the window algebra")
        acc = {}
        for (mu, nu, r), c in x.terms.items():
            base_mu = tuple(self._edge(e)[0] for e in mu)
            base_nu = tuple(self._edge(e)[0] for e in nu)
            # the p-index is the level of s(nu)
            level = self._edge(nu[0])[1] if nu else self._vertex(r)[1]
            v = self._vertex(r)[0]
            term = self.base.monomial(base_mu, base_nu, v, c)
            acc[level] = acc[level] + term if level in acc else term
        return SmashElement(self.base, acc)

    def image_by_generators(self, x):
        """phi' computed as products of generator images (independent route)."""
        total = SmashElement(self.base)
        for (mu, nu, r), c in x.terms.items():
            factors = [self.edge_image(e) for e in mu]
            factors += [self.ghost_image(e) for e in reversed(nu)]
            if not factors:
                factors = [self.vertex_image(r)]
            prod = factors[0]
            for f in factors[1:]:
                prod = smash_mul(prod, f)
            total = total + prod * c
        return total

    # relation checks
    def relations(self):
        """Yield ``(name, image)`` for each defining relation instantiated in the window."""
        g = self.window.graph
        V = {v: self.vertex_image(v) for v in g.vertices}
        E = {e: self.edge_image(e) for e in g.edges}
        G = {e: self.ghost_image(e) for e in g.edges}
        for u in g.vertices:
            for v in g.vertices:
                rhs = V[v] if u == v else SmashElement(self.base)
                yield f"(0) {u}*{v}", smash_mul(V[u], V[v]) - rhs
        for e in g.edges:
            s, r = V[g.src(e)], V[g.tgt(e)]
            yield f"(1) s({e}){e}", smash_mul(s, E[e]) - E[e]
            yield f"(1) {e}r({e})", smash_mul(E[e], r) - E[e]
            yield f"(2) r({e}){e}*", smash_mul(r, G[e]) - G[e]
            yield f"(2) {e}*s({e})", smash_mul(G[e], s) - G[e]
            for f in g.edges:
                rhs = V[g.tgt(e)] if e == f else SmashElement(self.base)
                yield f"(3) {e}*{f}", smash_mul(G[e], E[f]) - rhs
        for v in sorted(self.cover.ck2_vertices):
            total = V[v]
            for e in g.out_edges(v):
                total = total - smash_mul(E[e], G[e])
            yield f"(4) {v}", total

    def check_relations(self):
        failures = [name for name, img in self.relations() if img]
        return failures

    def random_monomial(self, rng, max_len=3):
        g = self.window.graph
        v = rng.choice(g.vertices)
        into = [p for k in range(max_len + 1) for p in g.paths_into(v, k)]
        while True:
            mu, nu = rng.choice(into), rng.choice(into)
            m = (mu, nu, v)
            if self.cover.is_normal(m):
                return self.cover.element({m: 1})

    def check_products(self, samples, seed=0, max_len=3):
        rng = random.Random(seed)
        failures = 0
        for _ in range(samples):
            x = self.random_monomial(rng, max_len)
            y = self.random_monomial(rng, max_len)
            if self(x * y) != smash_mul(self(x), self(y)):
                failures += 1
        return failures

    def check_injective(self, len_bound=2):
        """Rank of the image of the window's normal-form basis equals its size."""
        from .lpa import normal_monomials

        monos = normal_monomials(self.cover, len_bound)
        images = [self(self.cover.element({m: 1})) for m in monos]
        keys = sorted({(b, m) for img in images for b, r in img.parts.items() for m in r.terms},
                      key=lambda k: (k[0], _sort_key(k[1])))
        col = {k: i for i, k in enumerate(keys)}
        rows = []
        for img in images:
            row = [Fraction(0)] * len(keys)
            for b, r in img.parts.items():
                for m, c in r.terms.items():
                    row[col[(b, m)]] = c
            rows.append(row)
        return (rank(rows) if rows else 0) == len(monos), len(monos)


def phi_prime(window_iso, x):
    return window_iso(x)


# -- matricial blocks and regularity --------------------------------------


def _require_no_sinks(algebra):
    g = algebra.graph
    if g.sinks():
        raise SmashError(f"graph has sinks {list(g.sinks())}")
    if not g.has_unit_weights():
        raise SmashError("block embeddings need the standard grading (all weights 1)")


@dataclass(frozen=True)
class EmbeddedBlock:
    """``a p_m`` written in matrix units ``mu nu*`` with ``|nu| = ghost_length``.

    ``rows`` and ``cols`` are ``(path, range_vertex)`` labels; all row paths
    have length ``ghost_length + degree``.
    """

    algebra: LeavittPathAlgebra
    level: int
    ghost_length: int
    degree: int
    rows: tuple
    cols: tuple
    matrix: tuple

    def unembed(self):
        terms = {}
        for i, (mu, rv) in enumerate(self.rows):
            for j, (nu, cv) in enumerate(self.cols):
                c = self.matrix[i][j]
                if c:
                    terms[(mu, nu, rv)] = terms.get((mu, nu, rv), 0) + c
        return self.algebra.element(terms)

    def to_smash(self):
        return SmashElement.single(self.unembed(), self.level) if self.unembed() else SmashElement(self.algebra)

    def blocks(self):
        """Split into diagonal blocks indexed by the common range vertex."""
        out = {}
        for i, (_, rv) in enumerate(self.rows):
            out.setdefault(rv, ([], []))[0].append(i)
        for j, (_, cv) in enumerate(self.cols):
            out.setdefault(cv, ([], []))[1].append(j)
        return dict(sorted(out.items()))


def _expanded_terms(a, n):
    """Rewrite ``a`` so every ghost path has length exactly ``n`` (CK2 expansion)."""
    g = a.algebra.graph
    terms = {}
    for (mu, nu, v), c in a.terms.items():
        for alpha in g.paths_from(v, n - len(nu)):
            r = g.tgt(alpha[-1]) if alpha else v
            key = (mu + alpha, nu + alpha, r)
            terms[key] = terms.get(key, 0) + c
    return {k: c for k, c in terms.items() if c}


def block_embed(a, m, N):
    alg = a.algebra
    _require_no_sinks(alg)
    if not a:
        return EmbeddedBlock(alg, m, N - m, 0, (), (), ())
    d = a.degree()
    n = N - m
    if n < a.max_ghost_length():
        raise SmashError(f"N={N} too small: need N >= m + {a.max_ghost_length()}")
    terms = _expanded_terms(a, n)
    rows = sorted({(mu, v) for mu, _, v in terms}, key=lambda t: (t[1], t[0]))
    cols = sorted({(nu, v) for _, nu, v in terms}, key=lambda t: (t[1], t[0]))
    ri = {r: i for i, r in enumerate(rows)}
    ci = {c: j for j, c in enumerate(cols)}
    M = [[Fraction(0)] * len(cols) for _ in rows]
    for (mu, nu, v), c in terms.items():
        M[ri[(mu, v)]][ci[(nu, v)]] += c
    return EmbeddedBlock(alg, m, n, d, tuple(rows), tuple(cols), tuple(tuple(r) for r in M))


def graded_regular_witness(a):
    """Homogeneous ``b`` of degree ``-deg(a)`` with ``a b a == a``.

    ``a`` is written in matrix units of one matricial block; each diagonal
    sub-block gets an exact Moore-Penrose inverse and the result is read
    back as an element of L_Q(E).
    """
    alg = a.algebra
    _require_no_sinks(alg)
    if not a:
        return alg.zero()
    if not a.is_homogeneous():
        raise SmashError("element is not homogeneous")
    block = block_embed(a, 0, a.max_ghost_length())
    terms = {}
    for v, (ri, cj) in block.blocks().items():
        if not ri or not cj:
            continue
        sub = [[block.matrix[i][j] for j in cj] for i in ri]
        G = generalized_inverse(sub)
        for jj, j in enumerate(cj):
            for ii, i in enumerate(ri):
                c = G[jj][ii]
                if c:
                    nu = block.cols[j][0]
                    mu = block.rows[i][0]
                    terms[(nu, mu, v)] = c
    b = alg.element(terms)
    if a * b * a != a:
        raise ArithmeticError("regularity witness failed verification")
    if b and b.degree() != -block.degree:
        raise ArithmeticError("regularity witness has the wrong degree")
    return b


def random_homogeneous(algebra, rng, degree, max_terms=4, max_ghost=3):
    """A random homogeneous element of the given degree (unit weights)."""
    g = algebra.graph
    k = rng.randint(1, max_terms)
    terms = {}
    attempts = 0
    while len(terms) < k and attempts < 200:
        attempts += 1
        v = rng.choice(g.vertices)
        lo = max(0, -degree)
        ln = rng.randint(lo, max(lo, max_ghost))
        nus = g.paths_into(v, ln)
        mus = g.paths_into(v, ln + degree)
        if not nus or not mus:
            continue
        mono = (rng.choice(mus), rng.choice(nus), v)
        if algebra.is_normal(mono):
            terms[mono] = Fraction(rng.randint(-3, 3) or 1, rng.randint(1, 2))
    return algebra.element(terms)
