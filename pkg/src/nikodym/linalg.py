"""Dense exact linear algebra over a FieldCtx: RREF, rank, kernel, inverse."""

from __future__ import annotations

from .field import FieldCtx, FieldElem

Matrix = list[list[FieldElem]]


def rref(ctx: FieldCtx, rows: Matrix, ncols: int) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form (copy) and the list of pivot columns."""
    m = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(m)):
            if not m[i][c].is_zero():
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = m[r][c].inverse()
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and not m[i][c].is_zero():
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(ctx: FieldCtx, rows: Matrix, ncols: int) -> int:
    return len(rref(ctx, rows, ncols)[1])


def kernel_basis(ctx: FieldCtx, rows: Matrix, ncols: int) -> list[list[FieldElem]]:
    """Basis of {v : M v = 0}, one vector per free column."""
    m, pivots = rref(ctx, rows, ncols)
    pivot_set = set(pivots)
    basis = []
    for j in range(ncols):
        if j in pivot_set:
            continue
        v = [ctx.zero] * ncols
        v[j] = ctx.one
        for i, c in enumerate(pivots):
            v[c] = -m[i][j]
        basis.append(v)
    return basis


def is_independent(ctx: FieldCtx, vectors: list[list[FieldElem]]) -> bool:
    if not vectors:
        return True
    return rank(ctx, vectors, len(vectors[0])) == len(vectors)


def inverse(ctx: FieldCtx, rows: Matrix) -> Matrix:
    """Inverse of a square matrix; ValueError if singular."""
    n = len(rows)
    aug = [list(r) + [ctx.one if i == j else ctx.zero for j in range(n)]
           for i, r in enumerate(rows)]
    m, pivots = rref(ctx, aug, 2 * n)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in m[:n]]


def mat_vec(rows: Matrix, v: list[FieldElem]) -> list[FieldElem]:
    out = []
    for r in rows:
        acc = None
        for a, b in zip(r, v):
            t = a * b
            acc = t if acc is None else acc + t
        out.append(acc)
    return out
