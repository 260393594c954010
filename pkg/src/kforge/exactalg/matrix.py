"""Exact integer matrices and their normal forms.

Everything here is arbitrary-precision and deterministic: the same input
always yields bit-identical output, because downstream reports are compared
byte for byte. Matrices are immutable tuples of tuples, so they hash and the
expensive decompositions can be memoized.

Smith normal form uses smallest-absolute-value pivoting with full row and
column reduction; Hermite normal form is the column-style canonical form
(pivots positive, entries left of a pivot reduced into [0, pivot)), which
makes equality of column lattices a simple matrix comparison.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Sequence

from ..errors import ShapeMismatchError

_CACHE_SIZE = 1 << 15


@dataclass(frozen=True)
class IntMatrix:
    """An immutable integer matrix.

    data is a tuple of row tuples. Zero-row and zero-column matrices are
    legal; they show up constantly as trivial groups and empty relation
    blocks.
    """

    rows: int
    cols: int
    data: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ShapeMismatchError("negative dimensions")
        if len(self.data) != self.rows:
            raise ShapeMismatchError(
                f"expected {self.rows} rows, got {len(self.data)}"
            )
        for r in self.data:
            if len(r) != self.cols:
                raise ShapeMismatchError(
                    f"expected {self.cols} columns, got {len(r)}"
                )

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_rows(rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        """Build from a list of rows; cols disambiguates the zero-row case."""
        data = tuple(tuple(int(v) for v in r) for r in rows)
        if data:
            width = len(data[0])
        elif cols is not None:
            width = cols
        else:
            width = 0
        return IntMatrix(len(data), width, data)

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix(
            n, n, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
        )

    @staticmethod
    def zeros(rows: int, cols: int) -> "IntMatrix":
        return IntMatrix(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @staticmethod
    def column(values: Sequence[int]) -> "IntMatrix":
        return IntMatrix(len(values), 1, tuple((int(v),) for v in values))

    @staticmethod
    def diagonal(values: Sequence[int], rows: int | None = None, cols: int | None = None) -> "IntMatrix":
        """Rectangular diagonal matrix; dimensions default to len(values)."""
        k = len(values)
        m = k if rows is None else rows
        n = k if cols is None else cols
        if k > min(m, n):
            raise ShapeMismatchError("too many diagonal entries")
        return IntMatrix(
            m,
            n,
            tuple(
                tuple(
                    int(values[i]) if i == j and i < k else 0 for j in range(n)
                )
                for i in range(m)
            ),
        )

    # -- access ------------------------------------------------------------

    def entry(self, i: int, j: int) -> int:
        return self.data[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.data[i]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.data)

    def columns_slice(self, start: int, stop: int) -> "IntMatrix":
        """The submatrix made of columns start..stop-1."""
        if not (0 <= start <= stop <= self.cols):
            raise ShapeMismatchError("column slice out of range")
        return IntMatrix(
            self.rows, stop - start, tuple(r[start:stop] for r in self.data)
        )

    def rows_slice(self, start: int, stop: int) -> "IntMatrix":
        if not (0 <= start <= stop <= self.rows):
            raise ShapeMismatchError("row slice out of range")
        return IntMatrix(stop - start, self.cols, self.data[start:stop])

    def select_columns(self, indices: Sequence[int]) -> "IntMatrix":
        return IntMatrix(
            self.rows,
            len(indices),
            tuple(tuple(r[j] for j in indices) for r in self.data),
        )

    def select_rows(self, indices: Sequence[int]) -> "IntMatrix":
        return IntMatrix(
            len(indices), self.cols, tuple(self.data[i] for i in indices)
        )

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            self.cols,
            self.rows,
            tuple(tuple(r[j] for r in self.data) for j in range(self.cols)),
        )

    def is_zero(self) -> bool:
        return all(v == 0 for r in self.data for v in r)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        self._same_shape(other)
        return IntMatrix(
            self.rows,
            self.cols,
            tuple(
                tuple(a + b for a, b in zip(ra, rb))
                for ra, rb in zip(self.data, other.data)
            ),
        )

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        self._same_shape(other)
        return IntMatrix(
            self.rows,
            self.cols,
            tuple(
                tuple(a - b for a, b in zip(ra, rb))
                for ra, rb in zip(self.data, other.data)
            ),
        )

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(
            self.rows, self.cols, tuple(tuple(-v for v in r) for r in self.data)
        )

    def __mul__(self, scalar: int) -> "IntMatrix":
        if not isinstance(scalar, int):
            return NotImplemented
        return IntMatrix(
            self.rows,
            self.cols,
            tuple(tuple(scalar * v for v in r) for r in self.data),
        )

    __rmul__ = __mul__

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if not isinstance(other, IntMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ShapeMismatchError(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        cols = other.transpose().data
        return IntMatrix(
            self.rows,
            other.cols,
            tuple(
                tuple(sum(a * b for a, b in zip(r, c)) for c in cols)
                for r in self.data
            ),
        )

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Matrix times column vector."""
        if len(vec) != self.cols:
            raise ShapeMismatchError(
                f"vector length {len(vec)} does not match {self.cols} columns"
            )
        return tuple(sum(a * b for a, b in zip(r, vec)) for r in self.data)

    def _same_shape(self, other: "IntMatrix") -> None:
        if self.rows != other.rows or self.cols != other.cols:
            raise ShapeMismatchError(
                f"shape {self.rows}x{self.cols} vs {other.rows}x{other.cols}"
            )


def hstack(*parts: IntMatrix) -> IntMatrix:
    """Concatenate matrices left to right."""
    if not parts:
        raise ShapeMismatchError("hstack needs at least one matrix")
    rows = parts[0].rows
    for p in parts:
        if p.rows != rows:
            raise ShapeMismatchError("hstack row counts differ")
    return IntMatrix(
        rows,
        sum(p.cols for p in parts),
        tuple(
            tuple(v for p in parts for v in p.data[i]) for i in range(rows)
        ),
    )


def vstack(*parts: IntMatrix) -> IntMatrix:
    """Concatenate matrices top to bottom."""
    if not parts:
        raise ShapeMismatchError("vstack needs at least one matrix")
    cols = parts[0].cols
    for p in parts:
        if p.cols != cols:
            raise ShapeMismatchError("vstack column counts differ")
    return IntMatrix(
        sum(p.rows for p in parts),
        cols,
        tuple(r for p in parts for r in p.data),
    )


def block(grid: Sequence[Sequence[IntMatrix]]) -> IntMatrix:
    """Assemble a block matrix from a 2-d grid of blocks."""
    return vstack(*(hstack(*row) for row in grid))


class SnfDecomposition(NamedTuple):
    """u @ a @ v == d with u, v unimodular and d in Smith normal form."""

    u: IntMatrix
    d: IntMatrix
    v: IntMatrix

    def diagonal(self) -> tuple[int, ...]:
        return tuple(
            self.d.data[i][i] for i in range(min(self.d.rows, self.d.cols))
        )

    def rank(self) -> int:
        return sum(1 for x in self.diagonal() if x != 0)


class HermiteDecomposition(NamedTuple):
    """a @ w == h with w unimodular and h the canonical column Hermite form.

    pivots lists (row, col) positions; pivot columns are packed to the left
    and the remaining columns of h are zero.
    """

    h: IntMatrix
    w: IntMatrix
    pivots: tuple[tuple[int, int], ...]

    def rank(self) -> int:
        return len(self.pivots)


@lru_cache(maxsize=_CACHE_SIZE)
def smith(a: IntMatrix) -> SnfDecomposition:
    """Smith normal form over the integers.

    Returns (u, d, v) with u @ a @ v == d, |det u| == |det v| == 1, d
    diagonal with nonnegative entries and d[i] dividing d[i+1]. Pivoting
    picks the smallest nonzero absolute value in the trailing submatrix
    (first hit in row-major order on ties), which keeps intermediate entries
    small without floating point.

    >>> a = IntMatrix.from_rows([[4, 0], [0, 6]])
    >>> u, d, v = smith(a)
    >>> d.data
    ((2, 0), (0, 12))
    >>> (u @ a @ v) == d
    True
    """
    m, n = a.rows, a.cols
    mat = [list(r) for r in a.data]
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    v = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def swap_rows(i: int, j: int) -> None:
        mat[i], mat[j] = mat[j], mat[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        for r in mat:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(dst: int, src: int, c: int) -> None:
        md, ms = mat[dst], mat[src]
        for k in range(n):
            md[k] += c * ms[k]
        ud, us = u[dst], u[src]
        for k in range(m):
            ud[k] += c * us[k]

    def add_col(dst: int, src: int, c: int) -> None:
        for r in mat:
            r[dst] += c * r[src]
        for r in v:
            r[dst] += c * r[src]

    def negate_row(i: int) -> None:
        mat[i] = [-x for x in mat[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    limit = min(m, n)
    while t < limit:
        best_i = best_j = -1
        best_abs = 0
        for i in range(t, m):
            row = mat[i]
            for j in range(t, n):
                val = row[j]
                if val != 0:
                    av = -val if val < 0 else val
                    if best_i < 0 or av < best_abs:
                        best_i, best_j, best_abs = i, j, av
        if best_i < 0:
            break
        if best_i != t:
            swap_rows(t, best_i)
        if best_j != t:
            swap_cols(t, best_j)
        if mat[t][t] < 0:
            negate_row(t)
        p = mat[t][t]

        retry = False
        for i in range(t + 1, m):
            val = mat[i][t]
            if val:
                if val % p:
                    retry = True
                add_row(i, t, -(val // p))
        if retry:
            continue
        for j in range(t + 1, n):
            val = mat[t][j]
            if val:
                if val % p:
                    retry = True
                add_col(j, t, -(val // p))
        if retry:
            continue

        # the chain condition: every remaining entry must be divisible by p
        bad_row = -1
        for i in range(t + 1, m):
            row = mat[i]
            for j in range(t + 1, n):
                if row[j] % p:
                    bad_row = i
                    break
            if bad_row >= 0:
                break
        if bad_row >= 0:
            add_row(t, bad_row, 1)
            continue
        t += 1

    return SnfDecomposition(
        IntMatrix(m, m, tuple(tuple(r) for r in u)),
        IntMatrix(m, n, tuple(tuple(r) for r in mat)),
        IntMatrix(n, n, tuple(tuple(r) for r in v)),
    )


@lru_cache(maxsize=_CACHE_SIZE)
def hermite(a: IntMatrix) -> HermiteDecomposition:
    """Canonical column Hermite normal form.

    Column operations only, so the column lattice is preserved exactly:
    a @ w == h. Pivots are positive, sit in columns 0..r-1 with strictly
    increasing rows, have only zeros above and to their right, and every
    entry left of a pivot in its row lies in [0, pivot). Uniqueness of this
    form is what lets lattice_hnf decide lattice equality by ==.

    >>> a = IntMatrix.from_rows([[4, 6], [0, 2]])
    >>> h, w, pivots = hermite(a)
    >>> h.data
    ((2, 0), (2, 4))
    >>> (a @ w) == h
    True
    >>> pivots
    ((0, 0), (1, 1))
    """
    m, n = a.rows, a.cols
    mat = [list(r) for r in a.data]
    w = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    pivots: list[tuple[int, int]] = []

    def swap_cols(i: int, j: int) -> None:
        for r in mat:
            r[i], r[j] = r[j], r[i]
        for r in w:
            r[i], r[j] = r[j], r[i]

    def add_col(dst: int, src: int, c: int) -> None:
        for r in mat:
            r[dst] += c * r[src]
        for r in w:
            r[dst] += c * r[src]

    def negate_col(j: int) -> None:
        for r in mat:
            r[j] = -r[j]
        for r in w:
            r[j] = -r[j]

    c = 0
    for i in range(m):
        if c >= n:
            break
        while True:
            best = -1
            best_abs = 0
            row = mat[i]
            for j in range(c, n):
                val = row[j]
                if val != 0:
                    av = -val if val < 0 else val
                    if best < 0 or av < best_abs:
                        best, best_abs = j, av
            if best < 0:
                break  # no pivot in this row
            if best != c:
                swap_cols(c, best)
            if mat[i][c] < 0:
                negate_col(c)
            p = mat[i][c]
            done = True
            for j in range(c + 1, n):
                val = mat[i][j]
                if val:
                    add_col(j, c, -(val // p))
                    if val % p:
                        done = False
            if done:
                break
        if best < 0:
            continue
        p = mat[i][c]
        for j in range(c):
            val = mat[i][j]
            if val // p:
                add_col(j, c, -(val // p))
        pivots.append((i, c))
        c += 1

    return HermiteDecomposition(
        IntMatrix(m, n, tuple(tuple(r) for r in mat)),
        IntMatrix(n, n, tuple(tuple(r) for r in w)),
        tuple(pivots),
    )


def lattice_hnf(a: IntMatrix) -> IntMatrix:
    """Canonical basis of the column lattice of a, as a matrix.

    Zero columns are pruned, so two matrices with the same number of rows
    span the same sublattice of Z^rows exactly when their lattice_hnf
    results compare equal.
    """
    h, _, pivots = hermite(a)
    return h.columns_slice(0, len(pivots))


def kernel_basis(a: IntMatrix) -> IntMatrix:
    """A basis for the integer kernel of a, one column per basis vector.

    The basis is the last cols - rank columns of the Smith v matrix, which
    pins the result down deterministically.
    """
    u, d, v = smith(a)
    r = SnfDecomposition(u, d, v).rank()
    return v.columns_slice(r, a.cols)


def _kernel_lattice(a: IntMatrix) -> IntMatrix:
    """A kernel basis from the Hermite transform.

    Spans the same lattice as kernel_basis but reuses the hermite cache;
    internal fast path for the exactness checks.
    """
    h, w, pivots = hermite(a)
    return w.columns_slice(len(pivots), a.cols)


def solve_linear(a: IntMatrix, b: Sequence[int]) -> tuple[int, ...] | None:
    """One integer solution x of a @ x == b, or None when none exists.

    Deterministic choice: solve h @ y == b by forward substitution with y
    zero on the non-pivot coordinates, then return w @ y.

    >>> a = IntMatrix.from_rows([[2, 1], [0, 3]])
    >>> solve_linear(a, (1, 3))
    (0, 1)
    >>> solve_linear(a, (1, 0)) is None
    True
    """
    if len(b) != a.rows:
        raise ShapeMismatchError(
            f"vector length {len(b)} does not match {a.rows} rows"
        )
    h, w, pivots = hermite(a)
    y = [0] * a.cols
    col_of_row = {pr: pc for pr, pc in pivots}
    npiv = len(pivots)
    for i in range(a.rows):
        hrow = h.data[i]
        acc = b[i] - sum(hrow[k] * y[k] for k in range(npiv) if y[k])
        k = col_of_row.get(i)
        if k is None:
            if acc != 0:
                return None
        else:
            p = hrow[k]
            if acc % p:
                return None
            y[k] = acc // p
    return w.apply(y)


@dataclass(frozen=True)
class ImageSection:
    """Canonical basis of an image lattice together with chosen preimages.

    basis has one column per lattice generator (the pivot columns of the
    Hermite form of the defining matrix) and matrix @ preimages == basis.
    """

    basis: IntMatrix
    preimages: IntMatrix

    def section(self, x: Sequence[int]) -> tuple[int, ...] | None:
        """A preimage of x under the defining matrix, or None if x is
        outside the image lattice."""
        coords = self.coordinates(x)
        if coords is None:
            return None
        return self.preimages.apply(coords)

    def coordinates(self, x: Sequence[int]) -> tuple[int, ...] | None:
        """Coefficients of x in the basis columns, or None."""
        if len(x) != self.basis.rows:
            raise ShapeMismatchError(
                f"vector length {len(x)} does not match {self.basis.rows} rows"
            )
        return solve_linear(self.basis, tuple(x))


def image_section(a: IntMatrix) -> ImageSection:
    """Basis of the column lattice of a plus a section of a onto it."""
    h, w, pivots = hermite(a)
    cols = list(range(len(pivots)))
    return ImageSection(h.select_columns(cols), w.select_columns(cols))


def det(a: IntMatrix) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    if a.rows != a.cols:
        raise ShapeMismatchError("determinant of a non-square matrix")
    n = a.rows
    if n == 0:
        return 1
    mat = [list(r) for r in a.data]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if mat[k][k] == 0:
            for i in range(k + 1, n):
                if mat[i][k] != 0:
                    mat[k], mat[i] = mat[i], mat[k]
                    sign = -sign
                    break
            else:
                return 0
        pk = mat[k][k]
        for i in range(k + 1, n):
            mik = mat[i][k]
            row_i, row_k = mat[i], mat[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pk - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = pk
    return sign * mat[n - 1][n - 1]
