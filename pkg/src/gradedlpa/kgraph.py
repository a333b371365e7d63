"""
Direct limits of ``N^{Lambda^0}`` for k-graphs presented by commuting
vertex matrices ``M_1, ..., M_k`` with ``M_i[v][w] = |v Lambda^{e_i} w|``.

The connecting map ``phi_{m,n}`` sends the basis vector of ``v`` to
``sum_w |v Lambda^{n-m} w| w``, i.e. it is multiplication by the transpose
of ``prod_i M_i^{n_i - m_i}``.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from functools import cached_property

from .linalg import identity, mat_mul, mat_pow, mat_vec, stable_kernel, transpose

__all__ = [
    "KGraphError",
    "KGraphSpec",
    "LimitVector",
    "phi",
    "limit_equal",
    "limit_equal_brute",
    "limit_add",
    "kgraph_cancellation_sweep",
]


class KGraphError(ValueError):
    pass


def _nat_matrix(M, n):
    if not isinstance(M, list) or len(M) != n:
        raise KGraphError(f"each matrix must be {n}x{n}")
    for row in M:
        if not isinstance(row, list) or len(row) != n:
            raise KGraphError(f"each matrix must be {n}x{n}")
        for x in row:
            if isinstance(x, bool) or not isinstance(x, int) or x < 0:
                raise KGraphError("matrix entries must be natural numbers")
    return tuple(tuple(row) for row in M)


class KGraphSpec:
    def __init__(self, mats, vertices=None):
        if not mats:
            raise KGraphError("need at least one matrix")
        n = len(mats[0]) if vertices is None else vertices
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise KGraphError("vertex count must be a positive integer")
        self.n = n
        self.mats = tuple(_nat_matrix(M, n) for M in mats)
        for i, M in enumerate(self.mats):
            for v, row in enumerate(M):
                if not any(row):
                    raise KGraphError(f"matrix {i + 1} has a zero row at vertex {v} (a source)")
        for i, j in itertools.combinations(range(self.k), 2):
            A, B = [list(r) for r in self.mats[i]], [list(r) for r in self.mats[j]]
            if mat_mul(A, B) != mat_mul(B, A):
                raise KGraphError(f"matrices {i + 1} and {j + 1} do not commute")

    @property
    def k(self):
        return len(self.mats)

    @classmethod
    def from_dict(cls, data):
        extra = set(data) - {"k", "vertices", "mats"}
        if extra:
            raise KGraphError(f"unknown keys {sorted(extra)}")
        if "mats" not in data:
            raise KGraphError("missing 'mats'")
        spec = cls(data["mats"], data.get("vertices"))
        if "k" in data and data["k"] != spec.k:
            raise KGraphError(f"'k' is {data['k']} but {spec.k} matrices were given")
        return spec

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def to_dict(self):
        return {"k": self.k, "vertices": self.n, "mats": [[list(r) for r in M] for M in self.mats]}

    def power(self, t):
        """``prod_i M_i^{t_i}`` as a list of lists."""
        P = identity(self.n)
        for M, ti in zip(self.mats, t):
            P = mat_mul(P, mat_pow([list(r) for r in M], ti))
        return P

    @cached_property
    def _diagonal_kernel(self):
        P = self.power((1,) * self.k)
        return stable_kernel(transpose(P))

    def __eq__(self, other):
        return isinstance(other, KGraphSpec) and self.mats == other.mats

    def __hash__(self):
        return hash(self.mats)


@dataclass(frozen=True)
class LimitVector:
    level: tuple
    vec: tuple

    def __post_init__(self):
        object.__setattr__(self, "level", tuple(self.level))
        object.__setattr__(self, "vec", tuple(self.vec))
        if any(isinstance(x, bool) or not isinstance(x, int) for x in self.level):
            raise KGraphError("levels must be integers")
        if any(isinstance(x, bool) or not isinstance(x, int) or x < 0 for x in self.vec):
            raise KGraphError("vector entries must be natural numbers")

    @classmethod
    def from_dict(cls, data):
        extra = set(data) - {"level", "vec"}
        if extra:
            raise KGraphError(f"unknown keys {sorted(extra)}")
        return cls(data["level"], data["vec"])

    def to_dict(self):
        return {"level": list(self.level), "vec": list(self.vec)}


def _check_vector(spec, a):
    if len(a.level) != spec.k:
        raise KGraphError(f"level must have {spec.k} components")
    if len(a.vec) != spec.n:
        raise KGraphError(f"vector must have {spec.n} entries")


def phi(spec, m, n, x):
    m, n = tuple(m), tuple(n)
    if len(m) != spec.k or len(n) != spec.k:
        raise KGraphError(f"levels must have {spec.k} components")
    if any(a > b for a, b in zip(m, n)):
        raise KGraphError(f"{m} is not <= {n}")
    t = tuple(b - a for a, b in zip(m, n))
    return tuple(mat_vec(transpose(spec.power(t)), list(x)))


def _push(spec, a, N):
    return LimitVector(N, phi(spec, a.level, N, a.vec))


def _join(*levels):
    return tuple(max(c) for c in zip(*levels))


def limit_add(spec, a, b):
    _check_vector(spec, a)
    _check_vector(spec, b)
    N = _join(a.level, b.level)
    x, y = _push(spec, a, N), _push(spec, b, N)
    return LimitVector(N, tuple(p + q for p, q in zip(x.vec, y.vec)))


def limit_equal(spec, a, b):
    """Equality of ``[a]`` and ``[b]`` in the direct limit.

    Both are pushed to the join of their levels; the difference must then
    die under some power of ``P^T`` with ``P = prod_i M_i``.  Advancing
    along the diagonal suffices since every ``M^t`` divides a power of P.
    """
    _check_vector(spec, a)
    _check_vector(spec, b)
    N = _join(a.level, b.level)
    x, y = _push(spec, a, N).vec, _push(spec, b, N).vec
    if x == y:
        return True
    _, kernel = spec._diagonal_kernel
    return [p - q for p, q in zip(x, y)] in kernel


def limit_equal_brute(spec, a, b, max_t=6):
    """Search ``t`` in ``{0..max_t}^k`` above the join for equal images."""
    N = _join(a.level, b.level)
    for t in itertools.product(range(max_t + 1), repeat=spec.k):
        L = tuple(c + s for c, s in zip(N, t))
        if phi(spec, a.level, L, a.vec) == phi(spec, b.level, L, b.vec):
            return True
    return False


def _random_vector(spec, rng, max_entry, levels):
    return LimitVector(
        tuple(rng.randint(*levels) for _ in range(spec.k)),
        tuple(rng.randint(0, max_entry) for _ in range(spec.n)),
    )


def kgraph_cancellation_sweep(spec, samples=500, seed=0, max_entry=3, levels=(0, 2)):
    """Check ``x + z ~ y + z  =>  x ~ y`` on seeded triples.

    Every other triple takes ``y`` to be a push-forward of ``x`` to a
    higher level so that the hypothesis holds non-trivially.
    """
    rng = random.Random(seed)
    related = 0
    violations = []
    for i in range(samples):
        x = _random_vector(spec, rng, max_entry, levels)
        z = _random_vector(spec, rng, max_entry, levels)
        if i % 2:
            up = tuple(c + rng.randint(0, 1) for c in x.level)
            y = _push(spec, x, up)
        else:
            y = _random_vector(spec, rng, max_entry, levels)
        if limit_equal(spec, limit_add(spec, x, z), limit_add(spec, y, z)):
            related += 1
            if not limit_equal(spec, x, y):
                violations.append((x, y, z))
    return {"samples": samples, "related": related, "violations": violations}
