"""Exact integer linear algebra on lists of Python ints.

Matrices are plain ``list[list[int]]`` (or anything convertible), so entries
never overflow.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd


class DimensionError(ValueError):
    pass


def as_matrix(M, rows: int | None = None, cols: int | None = None) -> list[list[int]]:
    out = [[int(v) for v in row] for row in M]
    if rows is not None and cols is not None and not out:
        return [[0] * cols for _ in range(rows)]
    return out


def shape(M) -> tuple[int, int]:
    return len(M), (len(M[0]) if M else 0)


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> list[list[int]]:
    return [[0] * c for _ in range(r)]


def matmul(A, B, inner: int | None = None) -> list[list[int]]:
    """Product A·B; ``inner`` gives the shared dimension when A or B has no rows."""
    ra, ca = shape(A)
    rb, cb = shape(B)
    if A and B and ca != rb:
        raise DimensionError(f"cannot multiply {ra}x{ca} by {rb}x{cb}")
    if not B:
        cb = 0
    cols = list(zip(*B)) if B else []
    return [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in A] if cb else [[] for _ in A]


def transpose(M) -> list[list[int]]:
    return [list(c) for c in zip(*M)]


def determinant(M) -> int:
    """Bareiss fraction-free elimination."""
    A = as_matrix(M)
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k]), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[-1][-1]


def smith_normal_form(M):
    """Return (U, D, V) with U·M·V = D, D diagonal with d1 | d2 | ..., U and V unimodular."""
    D = as_matrix(M)
    m, n = shape(D)
    U, V = identity(m), identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):  # row_dst += c * row_src
        if c:
            D[dst] = [a + c * b for a, b in zip(D[dst], D[src])]
            U[dst] = [a + c * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, c):
        if c:
            for row in D:
                row[dst] += c * row[src]
            for row in V:
                row[dst] += c * row[src]

    def negate_row(i):
        D[i] = [-a for a in D[i]]
        U[i] = [-a for a in U[i]]

    t = 0
    while t < min(m, n):
        nonzero = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
        if not nonzero:
            break
        _, i, j = min(nonzero)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            p = D[t][t]
            for i in range(t + 1, m):
                if D[i][t]:
                    q = D[i][t] // p
                    add_row(i, t, -q)
                    if D[i][t]:
                        done = False
            for j in range(t + 1, n):
                if D[t][j]:
                    q = D[t][j] // p
                    add_col(j, t, -q)
                    if D[t][j]:
                        done = False
            if done:
                # the pivot must divide every remaining entry
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                            if D[i][j] % p), None)
                if bad is None:
                    break
                add_row(t, bad[0], 1)
                continue
            # move the smallest nonzero of row/column t into the pivot
            cands = [(abs(D[i][t]), i, t) for i in range(t, m) if D[i][t]]
            cands += [(abs(D[t][j]), t, j) for j in range(t, n) if D[t][j]]
            _, i, j = min(cands)
            swap_rows(t, i)
            swap_cols(t, j)
        if D[t][t] < 0:
            negate_row(t)
        t += 1
    return U, D, V


def invariant_factors(M) -> list[int]:
    """Nonzero diagonal entries of the Smith form."""
    _, D, _ = smith_normal_form(M)
    return [D[i][i] for i in range(min(shape(D))) if D[i][i]]


def rank(M) -> int:
    return len(invariant_factors(M)) if M and M[0] else 0


def rank_gaussian(M) -> int:
    """Rank by exact rational elimination; used as an independent cross-check."""
    A = [[Fraction(v) for v in row] for row in M]
    r = 0
    cols = len(A[0]) if A else 0
    for c in range(cols):
        piv = next((i for i in range(r, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c] / A[r][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        r += 1
    return r


def cokernel(M, rows: int | None = None) -> tuple[int, list[int]]:
    """Cokernel of M: Z^cols -> Z^rows as (free rank, torsion invariants > 1).

    ``rows`` must be given when M has no columns.
    """
    m = len(M) if M else (rows or 0)
    if rows is not None:
        m = rows
    if not M or not M[0]:
        return m, []
    facs = invariant_factors(M)
    return m - len(facs), [d for d in facs if d != 1]


def kernel_basis(M, cols: int | None = None) -> list[list[int]]:
    """A Z-basis of {v : M v = 0}, as a list of column vectors."""
    n = shape(M)[1] if M else (cols or 0)
    if not M:
        return identity(n)
    _, D, V = smith_normal_form(M)
    r = sum(1 for i in range(min(shape(D))) if D[i][i])
    return [[V[i][j] for i in range(n)] for j in range(r, n)]


def is_zero(M) -> bool:
    return all(v == 0 for row in M for v in row)


def exactness_check(A, B, middle: int | None = None) -> bool:
    """Exactness at the middle of Z^a --A--> Z^m --B--> Z^b.

    A is m×a and B is b×m.  Exact means B·A = 0, rank A + rank B = m, and
    the image of A is saturated, so that it equals ker B.
    """
    m = middle
    if m is None:
        m = len(A) if A else (shape(B)[1] if B else 0)
    if A and len(A) != m:
        raise DimensionError("A has the wrong number of rows")
    if B and B[0] and len(B[0]) != m:
        raise DimensionError("B has the wrong number of columns")
    if A and B and A[0] and not is_zero(matmul(B, A)):
        return False
    ra = rank(A) if A and A[0] else 0
    rb = rank(B) if B and B[0] else 0
    if ra + rb != m:
        return False
    if ra:
        return all(d == 1 for d in invariant_factors(A))
    return True


def is_unimodular(M) -> bool:
    return abs(determinant(M)) == 1


def gcd_list(values) -> int:
    g = 0
    for v in values:
        g = gcd(g, int(v))
    return g
