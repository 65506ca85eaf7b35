"""Exact integer linear algebra.

Matrices are lists of rows of Python integers, so every computation is
arbitrary precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

Matrix = list[list[int]]
Vector = tuple[int, ...]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def shape(a: Sequence[Sequence[int]]) -> tuple[int, int]:
    rows = len(a)
    cols = len(a[0]) if rows else 0
    if any(len(row) != cols for row in a):
        raise ValueError("ragged matrix")
    return rows, cols


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    m, k = shape(a)
    k2, n = shape(b)
    if k != k2 and m and k2:
        raise ValueError(f"cannot multiply {m}x{k} by {k2}x{n}")
    return [[sum(a[i][t] * b[t][j] for t in range(k)) for j in range(n)] for i in range(m)]


def matvec(a: Sequence[Sequence[int]], v: Sequence[int]) -> Vector:
    m, n = shape(a)
    if m and n != len(v):
        raise ValueError(f"cannot multiply {m}x{n} by vector of length {len(v)}")
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def transpose(a: Sequence[Sequence[int]], rows_if_empty: int = 0) -> Matrix:
    m, n = shape(a)
    return [[a[i][j] for i in range(m)] for j in range(n)]


def det(a: Sequence[Sequence[int]]) -> int:
    """Determinant by fraction-free Bareiss elimination."""
    n, n2 = shape(a)
    if n != n2:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    m = [list(row) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


@dataclass(frozen=True)
class SnfDecomposition:
    """``U * A * V == D`` with unimodular ``U``, ``V`` and diagonal ``D``."""

    U: Matrix
    D: Matrix
    V: Matrix

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i][i] for i in range(min(len(self.D), len(self.V)))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def snf(a: Sequence[Sequence[int]], cols: int | None = None) -> SnfDecomposition:
    """Smith normal form; the pivot is always a smallest nonzero entry.

    ``cols`` gives the column count of a matrix with no rows.
    """
    m, n = shape(a)
    if m == 0 and cols is not None:
        n = cols
    A = [list(row) for row in a]
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row dst += q * row src
        A[dst] = [x + q * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col dst += q * col src
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            p = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    clean = clean and A[i][t] == 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    clean = clean and A[t][j] == 0
            if not clean:
                # A remainder smaller than the pivot is left; promote it.
                best = (t, t)
                for i in range(t + 1, m):
                    if A[i][t] and abs(A[i][t]) < abs(A[best[0]][best[1]]):
                        best = (i, t)
                for j in range(t + 1, n):
                    if A[t][j] and abs(A[t][j]) < abs(A[best[0]][best[1]]):
                        best = (t, j)
                swap_rows(t, best[0])
                swap_cols(t, best[1])
                continue
            bad = next((i for i in range(t + 1, m)
                        if any(A[i][j] % p for j in range(t + 1, n))), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    return SnfDecomposition(U, A, V)


def solve_linear_system_z(a: Sequence[Sequence[int]], b: Sequence[int],
                          cols: int | None = None) -> Vector | None:
    """An integer solution of ``a x = b``, or ``None``."""
    m, n = shape(a)
    if m == 0:
        n = cols if cols is not None else 0
    if len(b) != m:
        raise ValueError(f"right-hand side has length {len(b)}, expected {m}")
    dec = snf(a, cols=n)
    c = matvec(dec.U, b) if m else ()
    y = [0] * n
    for i in range(m):
        d = dec.D[i][i] if i < n else 0
        if d == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % d:
                return None
            y[i] = c[i] // d
    return matvec(dec.V, y) if n else ()


def lattice_member(v: Sequence[int], gens: Sequence[Sequence[int]]) -> bool:
    if not gens:
        return all(x == 0 for x in v)
    if any(len(g) != len(v) for g in gens):
        raise ValueError("generator dimension mismatch")
    return solve_linear_system_z(transpose(gens), list(v)) is not None


def _hermite_rows(gens: Sequence[Sequence[int]], dim: int) -> tuple[Vector, ...]:
    """Row-style Hermite normal form of the generator rows (a canonical basis)."""
    rows = [list(g) for g in gens if any(g)]
    basis = []
    col = 0
    while rows and col < dim:
        live = [r for r in rows if r[col]]
        if not live:
            col += 1
            continue
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            pivot = live[0]
            for r in live[1:]:
                q = r[col] // pivot[col]
                for j in range(dim):
                    r[j] -= q * pivot[j]
            live = [pivot] + [r for r in live[1:] if r[col]]
        pivot = live[0]
        if pivot[col] < 0:
            pivot[:] = [-x for x in pivot]
        rows = [r for r in rows if r is not pivot and any(r)]
        basis.append(pivot)
        col += 1
    # Reduce entries above each pivot into [0, pivot).
    for k, row in enumerate(basis):
        c = next(j for j in range(dim) if row[j])
        for above in basis[:k]:
            q = above[c] // row[c]
            if q:
                for j in range(dim):
                    above[j] -= q * row[j]
    return tuple(tuple(r) for r in basis)


class Lattice:
    """Subgroup of ``Z^dim`` spanned by finitely many generators."""

    def __init__(self, gens: Sequence[Sequence[int]], dim: int):
        for g in gens:
            if len(g) != dim:
                raise ValueError("generator dimension mismatch")
        self.dim = dim
        self.basis: tuple[Vector, ...] = _hermite_rows(gens, dim)

    def __eq__(self, other):
        return isinstance(other, Lattice) and (self.dim, self.basis) == (other.dim, other.basis)

    def __hash__(self):
        return hash((self.dim, self.basis))

    def __repr__(self):
        return f"Lattice({[list(b) for b in self.basis]}, dim={self.dim})"

    @property
    def rank(self) -> int:
        return len(self.basis)

    @cached_property
    def _snf(self) -> SnfDecomposition:
        cols = transpose(self.basis) if self.basis else [[] for _ in range(self.dim)]
        return snf(cols, cols=len(self.basis))

    def coset_key(self, v: Sequence[int]) -> Vector:
        """Equal keys exactly for vectors in the same coset of the lattice."""
        dec = self._snf
        c = matvec(dec.U, v) if self.dim else ()
        r = self.rank
        return tuple(c[i] % dec.D[i][i] for i in range(r)) + tuple(c[r:])

    def contains(self, v: Sequence[int]) -> bool:
        return not any(self.coset_key(v))

    def coefficients(self, v: Sequence[int]) -> Vector | None:
        """Coefficients over ``self.basis`` expressing ``v``, if it is a member."""
        if not self.basis:
            return () if not any(v) else None
        return solve_linear_system_z(transpose(self.basis), list(v))

    def sum(self, other: "Lattice") -> "Lattice":
        return Lattice(self.basis + other.basis, self.dim)

    def intersect(self, other: "Lattice") -> "Lattice":
        if not self.basis or not other.basis:
            return Lattice((), self.dim)
        k1 = len(self.basis)
        stacked = [list(self.basis[i][r] for i in range(k1))
                   + [-other.basis[j][r] for j in range(len(other.basis))]
                   for r in range(self.dim)]
        dec = snf(stacked)
        rank = dec.rank
        gens = []
        for col in range(rank, len(dec.V)):
            s = [dec.V[i][col] for i in range(k1)]
            gens.append(tuple(sum(s[i] * self.basis[i][r] for i in range(k1))
                              for r in range(self.dim)))
        return Lattice(gens, self.dim)
