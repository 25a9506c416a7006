"""Exact linear algebra over the prime field F_p.

Matrices are lists of rows of residues.  ``row_reduce`` records every
elementary operation it performs so the same operations can be mirrored on
relators; ``rank_sparse`` is the workhorse for large, very sparse systems.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

Matrix = list[list[int]]


@dataclass(frozen=True)
class Swap:
    s: int
    t: int


@dataclass(frozen=True)
class Scale:
    s: int
    k: int


@dataclass(frozen=True)
class AddMultiple:
    """Row ``s`` += ``k`` * row ``t``."""

    s: int
    t: int
    k: int


Op = Union[Swap, Scale, AddMultiple]


def op_to_dict(op: Op) -> dict:
    if isinstance(op, Swap):
        return {"op": "swap", "s": op.s, "t": op.t}
    if isinstance(op, Scale):
        return {"op": "scale", "s": op.s, "k": op.k}
    return {"op": "add", "s": op.s, "t": op.t, "k": op.k}


@dataclass(frozen=True)
class Reduction:
    echelon: Matrix
    log: tuple[Op, ...]
    rank: int
    pivots: tuple[int, ...]


def as_matrix(rows: Iterable[Sequence[int]], p: int) -> Matrix:
    return [[int(x) % p for x in row] for row in rows]


def validate_op(op: Op, m: int, p: int) -> None:
    if isinstance(op, Swap):
        if not (0 <= op.s < m and 0 <= op.t < m):
            raise IndexError(f"{op} out of range for {m} rows")
    elif isinstance(op, Scale):
        if not 0 <= op.s < m:
            raise IndexError(f"{op} out of range for {m} rows")
        if not 1 <= op.k < p:
            raise ValueError(f"{op}: scale factor must lie in [1, {p})")
    elif isinstance(op, AddMultiple):
        if not (0 <= op.s < m and 0 <= op.t < m) or op.s == op.t:
            raise IndexError(f"{op} needs two distinct rows among {m}")
        if not 1 <= op.k < p:
            raise ValueError(f"{op}: multiplier must lie in [1, {p})")
    else:
        raise TypeError(f"not an elementary operation: {op!r}")


def apply_op(M: Matrix, op: Op, p: int) -> None:
    """Apply one elementary row operation in place."""
    if isinstance(op, Swap):
        M[op.s], M[op.t] = M[op.t], M[op.s]
    elif isinstance(op, Scale):
        M[op.s] = [(x * op.k) % p for x in M[op.s]]
    else:
        src = M[op.t]
        M[op.s] = [(x + op.k * y) % p for x, y in zip(M[op.s], src)]


def apply_log(M: Sequence[Sequence[int]], log: Iterable[Op], p: int) -> Matrix:
    out = as_matrix(M, p)
    for op in log:
        validate_op(op, len(out), p)
        apply_op(out, op, p)
    return out


def row_reduce(M: Sequence[Sequence[int]], p: int) -> Reduction:
    """Row echelon form with unit pivots, plus the operation log.

    Columns are scanned left to right; the pivot row is the first row (at or
    below the current one) with a nonzero entry in the column.
    """
    E = as_matrix(M, p)
    m = len(E)
    ncols = len(E[0]) if m else 0
    log: list[Op] = []
    pivots = []
    r = 0
    for c in range(ncols):
        if r == m:
            break
        src = next((i for i in range(r, m) if E[i][c]), None)
        if src is None:
            continue
        if src != r:
            op = Swap(r, src)
            apply_op(E, op, p)
            log.append(op)
        if E[r][c] != 1:
            op = Scale(r, pow(E[r][c], -1, p))
            apply_op(E, op, p)
            log.append(op)
        for i in range(r + 1, m):
            if E[i][c]:
                op = AddMultiple(i, r, (-E[i][c]) % p)
                apply_op(E, op, p)
                log.append(op)
        pivots.append(c)
        r += 1
    return Reduction(E, tuple(log), r, tuple(pivots))


def is_row_echelon(M: Sequence[Sequence[int]]) -> bool:
    last = -1
    seen_zero = False
    for row in M:
        lead = next((c for c, x in enumerate(row) if x), None)
        if lead is None:
            seen_zero = True
            continue
        if seen_zero or lead <= last:
            return False
        last = lead
    return True


def rank(M: Sequence[Sequence[int]], p: int) -> int:
    return row_reduce(M, p).rank


def transpose(M: Sequence[Sequence[int]]) -> Matrix:
    return [list(col) for col in zip(*M)]


def determinant(M: Sequence[Sequence[int]], p: int) -> int:
    """Determinant mod p, read off the reduction log."""
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    red = row_reduce(M, p)
    if red.rank < n:
        return 0
    # det(E) = 1 and E = ops(M): undo each operation's effect on the determinant
    det = 1
    for op in red.log:
        if isinstance(op, Swap):
            det = -det
        elif isinstance(op, Scale):
            det = det * pow(op.k, -1, p)
    return det % p


def left_nullspace(M: Sequence[Sequence[int]], p: int) -> Matrix:
    """Basis of ``{c : c M = 0}``, one vector per zero row of the echelon form."""
    m = len(M)
    red = row_reduce(M, p)
    T = apply_log([[int(i == j) for j in range(m)] for i in range(m)], red.log, p)
    return [T[i] for i in range(red.rank, m)]


def nullspace(M: Sequence[Sequence[int]], p: int) -> Matrix:
    """Basis of ``{x : M x = 0}``."""
    if not M:
        return []
    return left_nullspace(transpose(M), p)


def solve(A: Sequence[Sequence[int]], b: Sequence[int], p: int) -> list[int] | None:
    """One solution of ``A x = b`` over F_p, or ``None`` if inconsistent."""
    m = len(A)
    n = len(A[0]) if m else 0
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    red = row_reduce(aug, p)
    if n in red.pivots:
        return None
    E = red.echelon
    x = [0] * n
    for r in reversed(range(red.rank)):
        c = red.pivots[r]
        acc = E[r][n] - sum(E[r][j] * x[j] for j in range(c + 1, n))
        x[c] = acc % p
    return x


def rank_sparse(rows: Iterable[dict[int, int]], p: int) -> int:
    """Rank of a sparse row set, each row a ``{column: value}`` mapping."""
    basis: dict[int, dict[int, int]] = {}
    for row in rows:
        row = {c: v % p for c, v in row.items() if v % p}
        while row:
            lead = min(row)
            pivot_row = basis.get(lead)
            if pivot_row is None:
                inv = pow(row[lead], -1, p)
                basis[lead] = {c: (v * inv) % p for c, v in row.items()}
                break
            f = row[lead]
            for c, v in pivot_row.items():
                nv = (row.get(c, 0) - f * v) % p
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)
    return len(basis)
