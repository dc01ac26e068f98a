"""Exact linear algebra over Z and Q."""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def integer_rows(rows) -> list[list[int]]:
    """Scale each row of a rational matrix to integers."""
    out = []
    for row in rows:
        row = [Fraction(v) for v in row]
        den = reduce(_lcm, (v.denominator for v in row), 1)
        out.append([int(v * den) for v in row])
    return out


def bareiss_rank(rows) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination."""
    M = integer_rows(rows)
    if not M:
        return 0
    nrows, ncols = len(M), len(M[0])
    rank, prev = 0, 1
    for col in range(ncols):
        if rank == nrows:
            break
        pivot = next((r for r in range(rank, nrows) if M[r][col]), None)
        if pivot is None:
            continue
        M[rank], M[pivot] = M[pivot], M[rank]
        p = M[rank][col]
        for r in range(rank + 1, nrows):
            f = M[r][col]
            row_r, row_k = M[r], M[rank]
            for c in range(col, ncols):
                row_r[c] = (p * row_r[c] - f * row_k[c]) // prev
        prev = p
        rank += 1
    return rank


def solve(A, b) -> list[Fraction]:
    """Solve the square system A x = b over Q; ValueError if singular."""
    n = len(A)
    M = [[Fraction(v) for v in row] + [Fraction(bi)] for row, bi in zip(A, b)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if M[r][col]), None)
        if pivot is None:
            raise ValueError("singular system")
        M[col], M[pivot] = M[pivot], M[col]
        inv = 1 / M[col][col]
        M[col] = [v * inv for v in M[col]]
        for r in range(n):
            if r != col and M[r][col]:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [M[r][n] for r in range(n)]


def kernel(A, ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of the right kernel of A over Q."""
    rows = [[Fraction(v) for v in row] for row in A]
    n = ncols if ncols is not None else len(rows[0])
    pivots = []
    r = 0
    for col in range(n):
        pivot = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][col]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][fc]
        basis.append(v)
    return basis


def primitive_vector(v) -> tuple[int, ...]:
    """Integer multiple of a rational vector with content 1 (sign kept)."""
    (row,) = integer_rows([v])
    g = reduce(gcd, row, 0)
    if g == 0:
        raise ValueError("zero vector")
    return tuple(x // g for x in row)


def saturate(rows):
    """Basis of (row space over Q) ∩ Z^n together with an integer left inverse.

    Returns ``(basis, left)`` where ``basis`` is a k×n integer matrix whose
    rows span the saturated lattice and ``left`` is an n×k integer matrix
    with ``basis @ left == I``.  Raises ValueError on dependent rows.
    """
    M = integer_rows(rows)
    k, n = len(M), len(M[0])
    # column operations M -> M U, tracked together with U^{-1}
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    Uinv = [[int(i == j) for j in range(n)] for i in range(n)]

    def col_op(j, i, q):
        # column_j -= q * column_i ; inverse: row_i += q * row_j
        for row in M:
            row[j] -= q * row[i]
        for row in U:
            row[j] -= q * row[i]
        Uinv[i] = [a + q * b for a, b in zip(Uinv[i], Uinv[j])]

    def col_swap(i, j):
        for row in M:
            row[i], row[j] = row[j], row[i]
        for row in U:
            row[i], row[j] = row[j], row[i]
        Uinv[i], Uinv[j] = Uinv[j], Uinv[i]

    for r in range(k):
        while True:
            nz = [c for c in range(r, n) if M[r][c]]
            if not nz:
                raise ValueError("dependent rows")
            piv = min(nz, key=lambda c: abs(M[r][c]))
            if piv != r:
                col_swap(r, piv)
            done = True
            for c in range(r + 1, n):
                if M[r][c]:
                    col_op(c, r, M[r][c] // M[r][r])
                    if M[r][c]:
                        done = False
            if done:
                break
    basis = [list(Uinv[i]) for i in range(k)]
    left = [[U[i][j] for j in range(k)] for i in range(n)]
    return basis, left


def complete_basis(rows, n: int) -> list[list[int]]:
    """Unit vectors e_j that extend ``rows`` to a basis of Q^n."""
    cur = [list(r) for r in rows]
    extra = []
    for j in range(n):
        e = [int(i == j) for i in range(n)]
        if bareiss_rank(cur + [e]) > len(cur):
            cur.append(e)
            extra.append(e)
        if len(cur) == n:
            break
    return extra


def det(A) -> Fraction:
    n = len(A)
    M = [[Fraction(v) for v in row] for row in A]
    d = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if M[r][col]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            M[col], M[pivot] = M[pivot], M[col]
            d = -d
        d *= M[col][col]
        for r in range(col + 1, n):
            if M[r][col]:
                f = M[r][col] / M[col][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return d


def cross3(u, v):
    return (u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0])
