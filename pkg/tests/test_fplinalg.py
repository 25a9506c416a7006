import random

import pytest

from oracles import brute_rank, leibniz_det
from promild import fplinalg
from promild.fplinalg import AddMultiple, Scale, Swap


def random_matrix(rng, m, n, p, density=0.6):
    return [[rng.randrange(p) if rng.random() < density else 0 for _ in range(n)] for _ in range(m)]


def circuit_matrix(a, d):
    """The cyclic bidiagonal coefficient matrix of a d = m circuit, labels ``a[(j, k)]``."""
    def get(j, k):
        return a.get((j, k), 0)

    M = [[0] * d for _ in range(d)]
    M[0][0], M[0][1] = get(1, d), get(1, 2)
    for r in range(1, d - 1):
        j = r + 1
        sign = -1 if j % 2 == 0 else 1
        M[r][r], M[r][r + 1] = sign * get(j, j - 1), sign * get(j, j + 1)
    M[d - 1][0], M[d - 1][d - 1] = -get(d, 1), -get(d, d - 1)
    return M


def test_cyclic_bidiagonal_unit_cycle_has_full_rank():
    a = {(1, 2): 1, (2, 3): 1, (3, 4): 1, (4, 1): 1}
    for p in (2, 3, 5):
        M = circuit_matrix(a, 4)
        assert fplinalg.rank(M, p) == 4
        assert fplinalg.determinant(M, p) == leibniz_det(M, p) != 0


def test_cyclic_bidiagonal_determinant_detects_equal_circuits():
    rng = random.Random(0)
    for _ in range(200):
        p = rng.choice([3, 5, 7])
        d = rng.choice([4, 6])
        a = {}
        for j in range(1, d + 1):
            nxt = j % d + 1
            a[(j, nxt)] = rng.randrange(p)
            a[(nxt, j)] = rng.randrange(p)
        forward = backward = 1
        for j in range(1, d + 1):
            forward *= a[(j, j % d + 1)]
            backward *= a[(j % d + 1, j)]
        M = circuit_matrix(a, d)
        det = fplinalg.determinant(M, p)
        assert det == leibniz_det(M, p)
        assert (det == 0) == ((forward - backward) % p == 0)
        assert (fplinalg.rank(M, p) == d) == (det != 0)


def test_row_reduce_log_reproduces_echelon():
    rng = random.Random(1)
    for _ in range(200):
        p = rng.choice([2, 3, 5, 7])
        M = random_matrix(rng, rng.randint(1, 5), rng.randint(1, 6), p)
        red = fplinalg.row_reduce(M, p)
        assert fplinalg.apply_log(M, red.log, p) == red.echelon
        assert fplinalg.is_row_echelon(red.echelon)
        assert red.rank == brute_rank([[x % p for x in row] for row in M], p)
        for r, c in enumerate(red.pivots):
            assert red.echelon[r][c] == 1


def test_determinant_matches_leibniz():
    rng = random.Random(2)
    for _ in range(200):
        p = rng.choice([2, 3, 5, 7])
        n = rng.randint(1, 5)
        M = random_matrix(rng, n, n, p)
        assert fplinalg.determinant(M, p) == leibniz_det(M, p)


def test_nullspaces():
    rng = random.Random(3)
    for _ in range(100):
        p = rng.choice([2, 3, 5])
        M = random_matrix(rng, rng.randint(1, 5), rng.randint(1, 5), p)
        m, n = len(M), len(M[0])
        r = fplinalg.rank(M, p)
        left = fplinalg.left_nullspace(M, p)
        assert len(left) == m - r
        for c in left:
            assert all(sum(c[i] * M[i][j] for i in range(m)) % p == 0 for j in range(n))
        right = fplinalg.nullspace(M, p)
        assert len(right) == n - r
        for x in right:
            assert all(sum(M[i][j] * x[j] for j in range(n)) % p == 0 for i in range(m))


def test_solve():
    rng = random.Random(4)
    for _ in range(100):
        p = rng.choice([3, 5, 7])
        A = random_matrix(rng, rng.randint(1, 5), rng.randint(1, 5), p)
        x0 = [rng.randrange(p) for _ in A[0]]
        b = [sum(a * x for a, x in zip(row, x0)) % p for row in A]
        x = fplinalg.solve(A, b, p)
        assert [sum(a * y for a, y in zip(row, x)) % p for row in A] == b
    assert fplinalg.solve([[1, 1], [1, 1]], [0, 1], 3) is None


def test_rank_sparse_matches_dense():
    rng = random.Random(5)
    for _ in range(100):
        p = rng.choice([2, 3, 5])
        M = random_matrix(rng, rng.randint(1, 6), rng.randint(1, 6), p, 0.4)
        rows = [{j: v for j, v in enumerate(row) if v} for row in M]
        assert fplinalg.rank_sparse(rows, p) == fplinalg.rank(M, p)


def test_op_validation():
    with pytest.raises(ValueError):
        fplinalg.validate_op(Scale(0, 0), 2, 3)
    with pytest.raises(IndexError):
        fplinalg.validate_op(AddMultiple(0, 0, 1), 2, 3)
    with pytest.raises(IndexError):
        fplinalg.validate_op(Swap(0, 2), 2, 3)
    with pytest.raises(TypeError):
        fplinalg.validate_op("swap", 2, 3)


def test_empty_and_zero():
    assert fplinalg.rank([[0, 0], [0, 0]], 5) == 0
    assert fplinalg.determinant([], 5) == 1
    assert fplinalg.row_reduce([[0, 2], [0, 1]], 3).pivots == (1,)
