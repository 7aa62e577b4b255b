"""Exact integer linear algebra over lattices.

Dense matrices with arbitrary-precision integer entries, Smith and Hermite
normal forms, kernels, cokernels, integer solvability and lattice
intersections.  Everything is exact and deterministic: pivots are chosen by
least absolute value with ties broken in row-major order, and no floating
point appears anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import RankMismatchError

Vector = tuple[int, ...]


def dot(u: Sequence[int], v: Sequence[int]) -> int:
    if len(u) != len(v):
        raise RankMismatchError(f"dot product of lengths {len(u)} and {len(v)}")
    return sum(a * b for a, b in zip(u, v))


def vec_add(u: Sequence[int], v: Sequence[int]) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Sequence[int], v: Sequence[int]) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c: int, u: Sequence[int]) -> Vector:
    return tuple(c * a for a in u)


def vec_is_primitive(u: Sequence[int]) -> bool:
    g = 0
    for a in u:
        g = _gcd(g, a)
    return g == 1


def vec_primitive(u: Sequence[int]) -> Vector:
    """Divide by the gcd of the entries; zero vectors are returned unchanged."""
    g = 0
    for a in u:
        g = _gcd(g, a)
    if g == 0:
        return tuple(u)
    return tuple(a // g for a in u)


def _gcd(a: int, b: int) -> int:
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


class IntMatrix:
    """Immutable dense matrix over the integers."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Iterable[Iterable[int]], cols: int | None = None):
        rows = tuple(tuple(int(x) for x in row) for row in data)
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise RankMismatchError("ragged rows in matrix")
        else:
            width = 0 if cols is None else cols
        object.__setattr__(self, "rows", len(rows))
        object.__setattr__(self, "cols", width if rows else (cols or 0))
        object.__setattr__(self, "data", rows)

    def __setattr__(self, *a):  # immutability
        raise AttributeError("IntMatrix is immutable")

    # -- constructors -------------------------------------------------
    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, rows: int, cols: int) -> "IntMatrix":
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int | None = None) -> "IntMatrix":
        columns = [tuple(c) for c in columns]
        if not columns:
            if rows is None:
                raise RankMismatchError("from_columns with no columns needs an explicit row count")
            return cls([[] for _ in range(rows)], cols=0)
        height = len(columns[0])
        if any(len(c) != height for c in columns):
            raise RankMismatchError("columns of unequal height")
        return cls([[c[i] for c in columns] for i in range(height)])

    # -- access --------------------------------------------------------
    def __getitem__(self, key: tuple[int, int]) -> int:
        i, j = key
        return self.data[i][j]

    def row(self, i: int) -> Vector:
        return self.data[i]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.data)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.cols)]

    # -- algebra --------------------------------------------------------
    def transpose(self) -> "IntMatrix":
        return IntMatrix([[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)],
                         cols=self.rows)

    def __mul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise RankMismatchError(f"cannot multiply {self.shape} by {other.shape}")
        ot = other.transpose()
        return IntMatrix([[dot(r, c) for c in ot.data] for r in self.data], cols=other.cols)

    def __neg__(self) -> "IntMatrix":
        return IntMatrix([[-x for x in r] for r in self.data], cols=self.cols)

    def apply(self, v: Sequence[int]) -> Vector:
        if len(v) != self.cols:
            raise RankMismatchError(f"vector of length {len(v)} for {self.shape} matrix")
        return tuple(dot(r, v) for r in self.data)

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise RankMismatchError("hstack with different row counts")
        return IntMatrix([self.data[i] + other.data[i] for i in range(self.rows)],
                         cols=self.cols + other.cols)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.data for x in r)

    def __eq__(self, other) -> bool:
        return isinstance(other, IntMatrix) and self.shape == other.shape and self.data == other.data

    def __hash__(self) -> int:
        return hash((self.shape, self.data))

    def __repr__(self) -> str:
        return f"IntMatrix({[list(r) for r in self.data]!r})"


@dataclass(frozen=True)
class FinAbPresentation:
    """A finitely generated abelian group in invariant-factor form."""

    free_rank: int
    torsion: tuple[int, ...]

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for d in self.torsion:
            if d < 2:
                raise ValueError(f"invariant factor {d} < 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a != 0:
                raise ValueError(f"divisibility chain broken: {a} does not divide {b}")

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def describe(self) -> str:
        parts = ["Z"] * self.free_rank + [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# normal forms
# ---------------------------------------------------------------------------

def _find_pivot(M: list[list[int]], t: int) -> tuple[int, int] | None:
    """Least |entry| over the submatrix M[t:, t:], ties in row-major order."""
    best = None
    for i in range(t, len(M)):
        for j in range(t, len(M[0])):
            x = M[i][j]
            if x != 0 and (best is None or abs(x) < abs(M[best[0]][best[1]])):
                best = (i, j)
    return best


def smith_normal_form(A: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (U, D, V) with U*A*V = D diagonal satisfying d1 | d2 | ...

    U and V are unimodular.  Deterministic: pivoting by least absolute
    value, ties broken row-major.
    """
    m, n = A.rows, A.cols
    M = [list(r) for r in A.data]
    U = [list(r) for r in IntMatrix.identity(m).data]
    V = [list(r) for r in IntMatrix.identity(n).data]

    def swap_rows(i, k):
        M[i], M[k] = M[k], M[i]
        U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        for r in M:
            r[j], r[k] = r[k], r[j]
        for r in V:
            r[j], r[k] = r[k], r[j]

    def add_row(src, dst, q):  # row_dst += q * row_src
        M[dst] = [a + q * b for a, b in zip(M[dst], M[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, q):  # col_dst += q * col_src
        for r in M:
            r[dst] += q * r[src]
        for r in V:
            r[dst] += q * r[src]

    t = 0
    while t < min(m, n):
        piv = _find_pivot(M, t)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        while True:
            # clear column t below the pivot
            for i in range(t + 1, m):
                if M[i][t]:
                    add_row(t, i, -(M[i][t] // M[t][t]))
            if any(M[i][t] for i in range(t + 1, m)):
                # a nonzero remainder is strictly smaller; promote it
                piv = _find_pivot(M, t)
                swap_rows(t, piv[0])
                swap_cols(t, piv[1])
                continue
            for j in range(t + 1, n):
                if M[t][j]:
                    add_col(t, j, -(M[t][j] // M[t][t]))
            if any(M[t][j] for j in range(t + 1, n)):
                piv = _find_pivot(M, t)
                swap_rows(t, piv[0])
                swap_cols(t, piv[1])
                continue
            # divisibility: d_t must divide the rest of the submatrix
            offender = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if M[i][j] % M[t][t] != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            add_row(offender, t, 1)
        t += 1

    # normalize signs so the diagonal is nonnegative
    for i in range(min(m, n)):
        if M[i][i] < 0:
            M[i] = [-x for x in M[i]]
            U[i] = [-x for x in U[i]]

    return IntMatrix(U), IntMatrix(M, cols=n), IntMatrix(V)


def hermite_column_form(A: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Column-style Hermite form: returns (H, V) with A*V = H, V unimodular.

    H is in column echelon form with positive pivots and entries to the left
    of each pivot reduced into [0, pivot).
    """
    m, n = A.rows, A.cols
    H = [list(r) for r in A.data]
    V = [list(r) for r in IntMatrix.identity(n).data]

    def swap_cols(j, k):
        for r in H:
            r[j], r[k] = r[k], r[j]
        for r in V:
            r[j], r[k] = r[k], r[j]

    def add_col(src, dst, q):
        for r in H:
            r[dst] += q * r[src]
        for r in V:
            r[dst] += q * r[src]

    def negate_col(j):
        for r in H:
            r[j] = -r[j]
        for r in V:
            r[j] = -r[j]

    col = 0
    for row in range(m):
        if col >= n:
            break
        # gcd-reduce the entries of this row among columns >= col
        while True:
            best = None
            for j in range(col, n):
                if H[row][j] != 0 and (best is None or abs(H[row][j]) < abs(H[row][best])):
                    best = j
            if best is None:
                break
            swap_cols(col, best)
            done = True
            for j in range(col + 1, n):
                if H[row][j]:
                    add_col(col, j, -(H[row][j] // H[row][col]))
                    if H[row][j]:
                        done = False
            if done:
                break
        if all(H[row][j] == 0 for j in range(col, n)):
            continue
        if H[row][col] < 0:
            negate_col(col)
        for j in range(col):
            q = H[row][j] // H[row][col]
            if q:
                add_col(col, j, -q)
        col += 1

    return IntMatrix(H, cols=n), IntMatrix(V)


def rank(A: IntMatrix) -> int:
    H, _ = hermite_column_form(A)
    return sum(1 for j in range(H.cols) if any(H[i, j] for i in range(H.rows)))


def is_unimodular(A: IntMatrix) -> bool:
    if A.rows != A.cols:
        return False
    _, D, _ = smith_normal_form(A)
    return all(D[i, i] == 1 for i in range(A.rows))


def cokernel(A: IntMatrix) -> FinAbPresentation:
    """Present coker(A) = Z^rows / column span of A in invariant-factor form."""
    _, D, _ = smith_normal_form(A)
    diag = [D[i, i] for i in range(min(A.rows, A.cols))]
    r = sum(1 for d in diag if d != 0)
    torsion = tuple(d for d in diag if d > 1)
    return FinAbPresentation(free_rank=A.rows - r, torsion=torsion)


def kernel_basis(A: IntMatrix) -> IntMatrix:
    """Columns form a Z-basis of {x : A x = 0}; the basis is saturated."""
    H, V = hermite_column_form(A)
    zero_cols = [j for j in range(H.cols) if all(H[i, j] == 0 for i in range(H.rows))]
    gens = [V.column(j) for j in zero_cols]
    if not gens:
        return IntMatrix.from_columns([], rows=A.cols)
    # canonicalize the basis
    K, _ = hermite_column_form(IntMatrix.from_columns(gens))
    cols = [K.column(j) for j in range(K.cols) if any(K.column(j))]
    return IntMatrix.from_columns(cols, rows=A.cols)


def solve_integer(A: IntMatrix, b: Sequence[int]) -> Vector | None:
    """Some integer solution of A x = b, or None.  Hermite-form based."""
    if len(b) != A.rows:
        raise RankMismatchError(f"rhs of length {len(b)} for {A.shape} matrix")
    H, V = hermite_column_form(A)
    y = [0] * A.cols
    used = [False] * A.cols
    for i in range(A.rows):
        residual = b[i] - sum(H[i, j] * y[j] for j in range(A.cols))
        if residual == 0:
            continue
        pivot_col = None
        for j in range(A.cols):
            if not used[j] and H[i, j] != 0 and all(H[k, j] == 0 for k in range(i)):
                pivot_col = j
                break
        if pivot_col is None or residual % H[i, pivot_col] != 0:
            return None
        y[pivot_col] = residual // H[i, pivot_col]
        used[pivot_col] = True
    x = V.apply(y)
    if A.apply(x) != tuple(b):
        return None
    return x


def reduce_mod_lattice(x: Sequence[int], basis: IntMatrix) -> Vector:
    """Deterministic representative of x modulo the column span of ``basis``.

    Uses the Hermite form of the basis and reduces against pivot rows from
    the top; with a fixed basis this is a canonical normal form.
    """
    if basis.cols == 0:
        return tuple(x)
    H, _ = hermite_column_form(basis)
    v = list(x)
    for j in range(H.cols):
        prow = next((i for i in range(H.rows) if H[i, j] != 0), None)
        if prow is None:
            continue
        q = v[prow] // H[prow, j]
        if q:
            for i in range(H.rows):
                v[i] -= q * H[i, j]
    return tuple(v)


def image_basis(A: IntMatrix) -> IntMatrix:
    """Canonical basis (Hermite form columns) of the column span of A."""
    H, _ = hermite_column_form(A)
    cols = [H.column(j) for j in range(H.cols) if any(H.column(j))]
    return IntMatrix.from_columns(cols, rows=A.rows)


def lattice_intersection(B1: IntMatrix, B2: IntMatrix) -> IntMatrix:
    """Basis of (column span of B1) ∩ (column span of B2) over Z."""
    if B1.rows != B2.rows:
        raise RankMismatchError("ambient ranks differ")
    if B1.cols == 0 or B2.cols == 0:
        return IntMatrix.from_columns([], rows=B1.rows)
    stacked = B1.hstack(-B2)
    K = kernel_basis(stacked)
    gens = []
    for j in range(K.cols):
        coeffs = K.column(j)[: B1.cols]
        gens.append(B1.apply(coeffs))
    gens = [g for g in gens if any(g)]
    if not gens:
        return IntMatrix.from_columns([], rows=B1.rows)
    return image_basis(IntMatrix.from_columns(gens))


def in_column_span(A: IntMatrix, v: Sequence[int]) -> bool:
    return solve_integer(A, v) is not None
