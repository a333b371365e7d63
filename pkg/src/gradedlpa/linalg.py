"""
Exact linear algebra over Q and Z on lists of lists.

Rational work (rank factorisation, generalised inverses, null spaces) uses
``fractions.Fraction``; lattice work (integer kernels, Hermite normal form,
membership) uses Python ints so nothing ever overflows.
"""

from __future__ import annotations

from fractions import Fraction

__all__ = [
    "mat_mul",
    "mat_vec",
    "transpose",
    "identity",
    "mat_pow",
    "rref",
    "rank",
    "nullspace",
    "rank_factorization",
    "generalized_inverse",
    "hermite_normal_form",
    "integer_kernel",
    "IntegerLattice",
    "stable_kernel",
    "sparse_rank",
]


def identity(n, one=1):
    zero = one - one
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def transpose(A, ncols=None):
    if not A:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*A)]


def mat_mul(A, B):
    if not A:
        return []
    if not B:
        return [[] for _ in A]
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def mat_vec(A, x):
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def mat_pow(A, k):
    n = len(A)
    result = identity(n)
    base = [row[:] for row in A]
    while k:
        if k & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        k >>= 1
    return result


def rref(A):
    """Reduced row echelon form over Q; returns ``(R, pivot_columns)``."""
    R = [[Fraction(x) for x in row] for row in A]
    if not R:
        return R, []
    m, n = len(R), len(R[0])
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if R[i][c] != 0), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        inv = 1 / R[r][c]
        R[r] = [x * inv for x in R[r]]
        for i in range(m):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return R, pivots


def rank(A):
    return len(rref(A)[1])


def nullspace(A, ncols=None):
    """Basis of {x : A x = 0} over Q, as a list of vectors."""
    if not A:
        n = ncols or 0
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    R, pivots = rref(A)
    n = len(A[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for i, p in enumerate(pivots):
            x[p] = -R[i][f]
        basis.append(x)
    return basis


def rank_factorization(A):
    """Return ``(P, Q)`` with ``A == P Q``, P full column rank, Q full row rank."""
    R, pivots = rref(A)
    r = len(pivots)
    P = [[Fraction(row[c]) for c in pivots] for row in A]
    Q = [row for row in R[:r]]
    return P, Q


def _inverse(M):
    n = len(M)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in R]


def generalized_inverse(A):
    """Moore-Penrose inverse of a rational matrix via rank factorisation.

    With ``A = P Q`` the result is ``Q^T (Q Q^T)^-1 (P^T P)^-1 P^T``, so
    ``A G A == A`` holds exactly.
    """
    m = len(A)
    n = len(A[0]) if A else 0
    P, Q = rank_factorization(A)
    if not Q:
        return [[Fraction(0)] * m for _ in range(n)]
    Pt, Qt = transpose(P), transpose(Q)
    left = mat_mul(Qt, _inverse(mat_mul(Q, Qt)))
    right = mat_mul(_inverse(mat_mul(Pt, P)), Pt)
    return mat_mul(left, right)


def hermite_normal_form(rows):
    """Row-style HNF of the integer row lattice spanned by ``rows``.

    Zero rows are dropped; pivots are positive and entries above a pivot are
    reduced into ``[0, pivot)``.  Two generating sets span the same lattice
    iff their HNFs are equal.
    """
    M = [list(map(int, r)) for r in rows if any(r)]
    if not M:
        return []
    n = len(M[0])
    r = 0
    for c in range(n):
        # gcd-eliminate column c below row r
        while True:
            nz = [i for i in range(r, len(M)) if M[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(M[i][c]))
            M[r], M[p] = M[p], M[r]
            done = True
            for i in range(r + 1, len(M)):
                if M[i][c]:
                    q = M[i][c] // M[r][c]
                    M[i] = [a - q * b for a, b in zip(M[i], M[r])]
                    if M[i][c]:
                        done = False
            if done:
                break
        if r < len(M) and M[r][c] != 0:
            if M[r][c] < 0:
                M[r] = [-a for a in M[r]]
            for i in range(r):
                q = M[i][c] // M[r][c]
                if q:
                    M[i] = [a - q * b for a, b in zip(M[i], M[r])]
            r += 1
        if r == len(M):
            break
    return [row for row in M[:r] if any(row)]


def integer_kernel(A, ncols=None):
    """A Z-basis (HNF) of {x in Z^n : A x = 0} for an integer matrix A."""
    n = len(A[0]) if A else (ncols or 0)
    # Row-reduce [A^T | I] with unimodular row operations; rows whose A^T part
    # vanishes record kernel vectors.
    rows = [list(col) + [int(i == j) for j in range(n)] for i, col in enumerate(transpose(A, n))]
    if not A:
        rows = [[int(i == j) for j in range(n)] for i in range(n)]
        return hermite_normal_form(rows)
    m = len(A)
    r = 0
    for c in range(m):
        while True:
            nz = [i for i in range(r, n) if rows[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(rows[i][c]))
            rows[r], rows[p] = rows[p], rows[r]
            done = True
            for i in range(r + 1, n):
                if rows[i][c]:
                    q = rows[i][c] // rows[r][c]
                    rows[i] = [a - q * b for a, b in zip(rows[i], rows[r])]
                    if rows[i][c]:
                        done = False
            if done:
                break
        if r < n and rows[r][c] != 0:
            r += 1
    return hermite_normal_form([row[m:] for row in rows[r:]])


class IntegerLattice:
    """A sublattice of Z^n stored by its Hermite normal form."""

    __slots__ = ("dim", "basis")

    def __init__(self, generators, dim):
        self.dim = dim
        self.basis = tuple(tuple(r) for r in hermite_normal_form(generators))

    def __contains__(self, v):
        v = list(map(int, v))
        for row in self.basis:
            p = next(i for i, x in enumerate(row) if x)
            if v[p] % row[p]:
                return False
            q = v[p] // row[p]
            if q:
                v = [a - q * b for a, b in zip(v, row)]
        return not any(v)

    def __le__(self, other):
        return all(row in other for row in self.basis)

    def __eq__(self, other):
        return isinstance(other, IntegerLattice) and self.dim == other.dim and self.basis == other.basis

    def __hash__(self):
        return hash((self.dim, self.basis))

    @property
    def rank(self):
        return len(self.basis)

    def __repr__(self):
        return f"IntegerLattice(rank={self.rank}, dim={self.dim})"


def stable_kernel(B):
    """The union of the chain ker B <= ker B^2 <= ... as an integer lattice.

    Returns ``(J, lattice)`` where J is the first index with
    ``ker B^J == ker B^(J+1)``; J <= n because each strict step raises the rank.
    """
    n = len(B)
    current = IntegerLattice([], n)
    power = identity(n)
    j = 0
    while True:
        power = mat_mul(B, power)
        nxt = IntegerLattice(integer_kernel(power, n), n)
        if nxt == current:
            return j, current
        current = nxt
        j += 1


def sparse_rank(rows):
    """Rank over Q of rows given as ``{column: value}`` dicts.

    Incremental elimination keyed by pivot column; suited to the large,
    very sparse systems produced by commutant computations.
    """
    pivots = {}
    for row in rows:
        r = {c: Fraction(x) for c, x in row.items() if x}
        while r:
            c = min(r)
            if c not in pivots:
                inv = 1 / r[c]
                pivots[c] = {k: x * inv for k, x in r.items()}
                break
            p, f = pivots[c], r[c]
            for k, x in p.items():
                y = r.get(k, 0) - f * x
                if y:
                    r[k] = y
                else:
                    r.pop(k, None)
    return len(pivots)
