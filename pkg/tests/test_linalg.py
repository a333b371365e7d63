from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from gradedlpa.linalg import (
    IntegerLattice,
    generalized_inverse,
    hermite_normal_form,
    integer_kernel,
    mat_mul,
    mat_pow,
    mat_vec,
    nullspace,
    rank,
    rank_factorization,
    sparse_rank,
    stable_kernel,
    transpose,
)

small = st.integers(min_value=-3, max_value=3)


def matrices(max_side=4):
    return st.integers(1, max_side).flatmap(
        lambda m: st.integers(1, max_side).flatmap(
            lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=m, max_size=m)
        )
    )


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_moore_penrose_identities(A):
    G = generalized_inverse(A)
    AG, GA = mat_mul(A, G), mat_mul(G, A)
    assert mat_mul(AG, A) == [[Fraction(x) for x in r] for r in A]
    assert mat_mul(GA, G) == G
    assert AG == transpose(AG)
    assert GA == transpose(GA)


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_rank_factorization(A):
    P, Q = rank_factorization(A)
    if Q:
        assert mat_mul(P, Q) == [[Fraction(x) for x in r] for r in A]
    assert len(Q) == rank(A)


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_integer_kernel(A):
    K = integer_kernel(A)
    n = len(A[0])
    for k in K:
        assert not any(mat_vec(A, k))
    assert len(K) == n - rank(A)
    assert len(nullspace(A)) == n - rank(A)


@settings(max_examples=80, deadline=None)
@given(matrices(), st.integers(0, 2**16))
def test_hnf_invariant_under_row_operations(A, seed):
    import random

    rng = random.Random(seed)
    B = [r[:] for r in A]
    for _ in range(6):
        i, j = rng.randrange(len(B)), rng.randrange(len(B))
        if i != j:
            q = rng.randint(-2, 2)
            B[i] = [a + q * b for a, b in zip(B[i], B[j])]
        rng.shuffle(B)
    assert hermite_normal_form(A) == hermite_normal_form(B)


@settings(max_examples=80, deadline=None)
@given(matrices(), st.lists(small, min_size=4, max_size=4))
def test_lattice_membership(A, coeffs):
    n = len(A[0])
    L = IntegerLattice(A, n)
    v = [sum(c * row[j] for c, row in zip(coeffs, A)) for j in range(n)]
    assert v in L
    assert L <= IntegerLattice(A + [[1] * n], n)


def test_lattice_excludes_non_members():
    L = IntegerLattice([[2, 0], [0, 3]], 2)
    assert [2, 3] in L and [1, 0] not in L and [0, 4] not in L
    assert L.rank == 2


def test_stable_kernel_nilpotent_and_invertible():
    J, K = stable_kernel([[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    assert J == 3 and K.rank == 3
    J, K = stable_kernel([[2]])
    assert J == 0 and K.rank == 0
    J, K = stable_kernel([[1, 1], [1, 1]])
    assert J == 1 and [1, -1] in K


@settings(max_examples=60, deadline=None)
@given(matrices(3).filter(lambda A: len(A) == len(A[0])))
def test_stable_kernel_is_kernel_of_high_power(A):
    n = len(A)
    J, K = stable_kernel(A)
    assert J <= n
    assert K == IntegerLattice(integer_kernel(mat_pow(A, n + 1), n), n)


@settings(max_examples=80, deadline=None)
@given(matrices(5))
def test_sparse_rank_matches_dense(A):
    rows = [{j: x for j, x in enumerate(r) if x} for r in A]
    assert sparse_rank(rows) == rank(A)
