"""
Exact arithmetic in the Leavitt path algebra L_Q(E) of a finite graph.

Elements are finite Q-combinations of monomials ``mu nu*`` where ``mu`` and
``nu`` are paths with a common range vertex.  Every element is kept in the
normal form that excludes monomials in which ``mu`` and ``nu`` both end with
the special edge ``sp(v)`` (the largest-id out-edge) of the same regular
vertex ``v``.  The only rewrite needed is the Cuntz-Krieger relation

    mu' sp(v) (nu' sp(v))*  ->  mu' nu'*  -  sum_{e != sp(v)} mu' e (nu' e)*

applied after ghost/real edge contraction ``e* f = delta_{e,f} r(e)``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .graph import Graph

__all__ = [
    "LeavittPathAlgebra",
    "LpaElement",
    "LpaError",
    "mul",
    "involution",
    "degree_decompose",
    "basis_count",
    "normal_monomials",
    "parse_element",
]


class LpaError(ValueError):
    pass


def _sort_key(mono):
    mu, nu, v = mono
    return (len(mu), len(nu), mu, nu, v)


class LeavittPathAlgebra:
    """L_Q(E) for a finite graph E.

    ``ck2_vertices`` restricts the Cuntz-Krieger relation to a subset of the
    regular vertices (a relative Cohn-Leavitt algebra).  Finite windows of a
    covering graph use it so that vertices whose out-edges were cut off by
    the window do not acquire a false relation.
    """

    def __init__(self, graph, ck2_vertices=None):
        if not isinstance(graph, Graph):
            raise TypeError("expected a Graph")
        self.graph = graph
        regular = graph.regular_vertices()
        if ck2_vertices is None:
            ck2_vertices = regular
        ck2_vertices = frozenset(ck2_vertices)
        if not ck2_vertices <= regular:
            raise LpaError("CK2 can only be imposed at regular vertices")
        self.ck2_vertices = ck2_vertices
        self._special = {v: graph.special_edge(v) for v in ck2_vertices}
        self._reduce = lru_cache(maxsize=None)(self._reduce_uncached)

    # -- monomial level ---------------------------------------------------

    def _source(self, path, v):
        return self.graph.src(path[0]) if path else v

    def check_monomial(self, mu, nu, v=None):
        g = self.graph
        mu, nu = tuple(mu), tuple(nu)
        for p in (mu, nu):
            if not g.is_path(p):
                raise LpaError(f"not a composable path: {'.'.join(p)}")
        rm = g.tgt(mu[-1]) if mu else None
        rn = g.tgt(nu[-1]) if nu else None
        ranges = {x for x in (rm, rn, v) if x is not None}
        if len(ranges) != 1:
            raise LpaError("mu and nu must share their range vertex")
        (r,) = ranges
        if not g.is_vertex(r):
            raise LpaError(f"unknown vertex {r!r}")
        return (mu, nu, r)

    def is_normal(self, mono):
        mu, nu, _ = mono
        if not mu or not nu or mu[-1] != nu[-1]:
            return True
        u = self.graph.src(mu[-1])
        return not (u in self.ck2_vertices and mu[-1] == self._special[u])

    def _reduce_uncached(self, mono):
        """Normal form of a single monomial as a tuple of (monomial, coeff)."""
        out = {}
        stack = [(mono, 1)]
        g = self.graph
        while stack:
            m, c = stack.pop()
            if self.is_normal(m):
                out[m] = out.get(m, 0) + c
                continue
            mu, nu, _ = m
            u = g.src(mu[-1])
            mu1, nu1 = mu[:-1], nu[:-1]
            stack.append(((mu1, nu1, u), c))
            sp = self._special[u]
            for e in g.out_edges(u):
                if e != sp:
                    stack.append(((mu1 + (e,), nu1 + (e,), g.tgt(e)), -c))
        return tuple((m, c) for m, c in out.items() if c)

    def mul_monomials(self, a, b):
        """Product of two monomials before normalisation (or ``None`` for zero)."""
        mu1, nu1, v1 = a
        mu2, nu2, v2 = b
        if self._source(nu1, v1) != self._source(mu2, v2):
            return None
        k1, k2 = len(nu1), len(mu2)
        if k1 <= k2:
            if mu2[:k1] != nu1:
                return None
            return (mu1 + mu2[k1:], nu2, v2)
        if nu1[:k2] != mu2:
            return None
        return (mu1, nu2 + nu1[k2:], v1)

    def degree_of(self, mono):
        mu, nu, _ = mono
        return self.graph.path_weight(mu) - self.graph.path_weight(nu)

    # -- element constructors ---------------------------------------------

    def element(self, terms=None):
        acc = {}
        for mono, c in (terms or {}).items():
            mono = self.check_monomial(*mono)
            for m, k in self._reduce(mono):
                acc[m] = acc.get(m, 0) + Fraction(c) * k
        return LpaElement(self, acc)

    def zero(self):
        return LpaElement(self, {})

    def vertex(self, v):
        if not self.graph.is_vertex(v):
            raise LpaError(f"unknown vertex {v!r}")
        return LpaElement(self, {((), (), v): Fraction(1)})

    def edge(self, e):
        return self.monomial((e,), ())

    def ghost(self, e):
        return self.monomial((), (e,))

    def monomial(self, mu, nu, v=None, coeff=1):
        return self.element({self.check_monomial(mu, nu, v): coeff})

    def unit(self):
        return LpaElement(self, {((), (), v): Fraction(1) for v in self.graph.vertices})

    def mul(self, a, b):
        a, b = self._own(a), self._own(b)
        acc = {}
        for ma, ca in a.terms.items():
            for mb, cb in b.terms.items():
                m = self.mul_monomials(ma, mb)
                if m is None:
                    continue
                c = ca * cb
                for mm, k in self._reduce(m):
                    acc[mm] = acc.get(mm, 0) + c * k
        return LpaElement(self, acc)

    def _own(self, x):
        if not isinstance(x, LpaElement):
            raise TypeError("expected an LpaElement")
        if x.algebra is not self and (x.algebra.graph != self.graph or x.algebra.ck2_vertices != self.ck2_vertices):
            raise LpaError("elements belong to different algebras")
        return x

    def __eq__(self, other):
        return (
            isinstance(other, LeavittPathAlgebra)
            and self.graph == other.graph
            and self.ck2_vertices == other.ck2_vertices
        )

    def __hash__(self):
        return hash((self.graph, self.ck2_vertices))

    def __repr__(self):
        return f"LeavittPathAlgebra({self.graph!r})"


class LpaElement:
    """An element of a Leavitt path algebra, always in normal form."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra, terms):
        self.algebra = algebra
        clean = {m: Fraction(c) for m, c in terms.items() if c}
        self.terms = dict(sorted(clean.items(), key=lambda kv: _sort_key(kv[0])))

    def __add__(self, other):
        other = self.algebra._own(other)
        acc = dict(self.terms)
        for m, c in other.terms.items():
            acc[m] = acc.get(m, 0) + c
        return LpaElement(self.algebra, acc)

    def __neg__(self):
        return LpaElement(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, LpaElement):
            return self.algebra.mul(self, other)
        c = Fraction(other)
        return LpaElement(self.algebra, {m: c * k for m, k in self.terms.items()})

    def __rmul__(self, other):
        c = Fraction(other)
        return LpaElement(self.algebra, {m: c * k for m, k in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, LpaElement):
            same = self.algebra is other.algebra or self.algebra == other.algebra
            return same and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def degrees(self):
        return sorted({self.algebra.degree_of(m) for m in self.terms})

    def is_homogeneous(self):
        return len(self.degrees()) <= 1

    def degree(self):
        """Degree of a nonzero homogeneous element."""
        ds = self.degrees()
        if len(ds) != 1:
            raise LpaError("element is zero or not homogeneous")
        return ds[0]

    def component(self, d):
        deg = self.algebra.degree_of
        return LpaElement(self.algebra, {m: c for m, c in self.terms.items() if deg(m) == d})

    def max_ghost_length(self):
        return max((len(nu) for _, nu, _ in self.terms), default=0)

    def __repr__(self):
        return f"LpaElement({format_element(self)})"

    def __str__(self):
        return format_element(self)


def mul(a, b):
    return a.algebra.mul(a, b)


def involution(a):
    """``mu nu* -> nu mu*``, extended linearly (coefficients are rational)."""
    alg = a.algebra
    acc = {}
    for (mu, nu, v), c in a.terms.items():
        for m, k in alg._reduce((nu, mu, v)):
            acc[m] = acc.get(m, 0) + c * k
    return LpaElement(alg, acc)


def degree_decompose(a):
    parts = {}
    for m, c in a.terms.items():
        parts.setdefault(a.algebra.degree_of(m), {})[m] = c
    return {d: LpaElement(a.algebra, t) for d, t in sorted(parts.items())}


def normal_monomials(algebra, len_bound):
    """Normal-form monomials with both path lengths at most ``len_bound``."""
    g = algebra.graph
    out = []
    for v in g.vertices:
        into = [p for k in range(len_bound + 1) for p in g.paths_into(v, k)]
        for mu in into:
            for nu in into:
                m = (mu, nu, v)
                if algebra.is_normal(m):
                    out.append(m)
    out.sort(key=_sort_key)
    return out


def basis_count(g, len_bound):
    return len(normal_monomials(LeavittPathAlgebra(g), len_bound))


# -- textual syntax ---------------------------------------------------------


def format_monomial(mono):
    mu, nu, v = mono
    if not mu and not nu:
        return v
    left = ".".join(mu)
    if not nu:
        return left
    return f"{left}^{'.'.join(nu)}" if mu else f"^{'.'.join(nu)}"


def format_element(a):
    if not a.terms:
        return "0"
    parts = []
    for mono, c in a.terms.items():
        body = format_monomial(mono)
        mag = abs(c)
        text = body if mag == 1 else f"{mag}*{body}"
        sign = "-" if c < 0 else "+"
        parts.append((sign, text))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, text in parts[1:]:
        out += f" {sign} {text}"
    return out


def _parse_factor(algebra, text):
    g = algebra.graph
    if "^" in text:
        left, _, right = text.partition("^")
        if "^" in right:
            raise LpaError(f"more than one '^' in {text!r}")
    else:
        left, right = text, ""
    left_ids = left.split(".") if left else []
    right_ids = right.split(".") if right else []
    if any(not x for x in left_ids + right_ids):
        raise LpaError(f"empty path component in {text!r}")
    # a lone vertex id on either side denotes the empty path at that vertex
    v = None
    if len(left_ids) == 1 and g.is_vertex(left_ids[0]):
        v = left_ids[0]
        left_ids = []
    if len(right_ids) == 1 and g.is_vertex(right_ids[0]):
        if v is not None and v != right_ids[0]:
            return algebra.zero()
        v = right_ids[0]
        right_ids = []
    for x in left_ids + right_ids:
        if not g.is_edge(x):
            raise LpaError(f"unknown edge {x!r}")
    if v is not None and not left_ids and not right_ids:
        return algebra.vertex(v)
    return algebra.monomial(tuple(left_ids), tuple(right_ids), v)


def parse_element(algebra, text):
    """Parse ``3/2*e.f*g^ + u - ^e``.

    ``.`` concatenates edges, ``mu^nu`` means ``mu nu*``, a bare vertex id is
    that vertex, and ``*`` multiplies a coefficient or further factors.  A
    bare scalar stands for that multiple of the unit, so ``0`` is zero.
    """
    s = text.replace(" ", "")
    if not s:
        raise LpaError("empty element")
    terms = []
    buf, sign = "", 1
    for i, ch in enumerate(s):
        if ch in "+-" and i > 0 and s[i - 1] not in "*/":
            terms.append((sign, buf))
            buf, sign = "", (1 if ch == "+" else -1)
        elif ch in "+-" and i == 0:
            sign = 1 if ch == "+" else -1
        else:
            buf += ch
    terms.append((sign, buf))
    total = algebra.zero()
    for sign, body in terms:
        if not body:
            raise LpaError(f"malformed element {text!r}")
        coeff = Fraction(sign)
        value = None
        for tok in body.split("*"):
            if not tok:
                raise LpaError(f"malformed term {body!r}")
            try:
                coeff *= Fraction(tok)
                continue
            except ValueError:
                pass
            f = _parse_factor(algebra, tok)
            value = f if value is None else algebra.mul(value, f)
        if value is None:
            # a bare scalar is a multiple of the unit
            value = algebra.unit()
        total = total + coeff * value
    return total
