"""Integer matrices and Smith normal form.

Everything here is exact arbitrary-precision arithmetic on plain Python
integers; the diagonalization keeps track of the unimodular row and column
transforms so that ``left * A * right == diag(d)`` can be re-verified.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd


class IntMatrix:
    """Immutable integer matrix.

    Entries are stored as a tuple of row tuples.  Supports just enough
    arithmetic for homology computations: multiplication, kernels and
    determinants over Z.
    """

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries):
        rows = tuple(tuple(int(x) for x in row) for row in entries)
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise ValueError("ragged matrix")
        else:
            width = 0
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "rows", len(rows))
        object.__setattr__(self, "cols", width)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("IntMatrix is immutable")

    @classmethod
    def zero(cls, rows: int, cols: int) -> "IntMatrix":
        return cls([[0] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def __getitem__(self, idx):
        i, j = idx
        return self.entries[i][j]

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"IntMatrix({[list(r) for r in self.entries]})"

    def __mul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        out = [
            [
                sum(self.entries[i][k] * other.entries[k][j] for k in range(self.cols))
                for j in range(other.cols)
            ]
            for i in range(self.rows)
        ]
        return IntMatrix(out)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(list(zip(*self.entries)) if self.rows else [[] for _ in range(self.cols)])

    def det(self) -> int:
        """Determinant by fraction-free Bareiss elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        m = [list(r) for r in self.entries]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k] != 0:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
                m[i][k] = 0
            prev = m[k][k]
        return sign * m[n - 1][n - 1]


@dataclass(frozen=True)
class SmithForm:
    """Diagonalization d with unimodular transforms: left*A*right = diag(d)."""

    d: tuple[int, ...]
    left: IntMatrix
    right: IntMatrix

    @property
    def rank(self) -> int:
        return sum(1 for x in self.d if x != 0)

    def diagonal_matrix(self, rows: int, cols: int) -> IntMatrix:
        m = [[0] * cols for _ in range(rows)]
        for i, x in enumerate(self.d):
            m[i][i] = x
        return IntMatrix(m)


def smith_normal_form(a: IntMatrix) -> SmithForm:
    """Smith normal form over Z with transforms.

    Returns ``SmithForm(d, left, right)`` with ``left * a * right`` diagonal,
    ``d[i] >= 0``, ``d[i] | d[i+1]``, and both transforms unimodular.
    """
    m = [list(r) for r in a.entries]
    nrows, ncols = a.rows, a.cols
    left = [[1 if i == j else 0 for j in range(nrows)] for i in range(nrows)]
    right = [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for row in m:
            row[i], row[j] = row[j], row[i]
        for row in right:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):
        # row[dst] += k * row[src]
        m[dst] = [x + k * y for x, y in zip(m[dst], m[src])]
        left[dst] = [x + k * y for x, y in zip(left[dst], left[src])]

    def add_col(dst, src, k):
        for row in m:
            row[dst] += k * row[src]
        for row in right:
            row[dst] += k * row[src]

    def negate_row(i):
        m[i] = [-x for x in m[i]]
        left[i] = [-x for x in left[i]]

    n = min(nrows, ncols)
    t = 0
    while t < n:
        # find a pivot: nonzero entry of least absolute value in the submatrix
        pivot = None
        best = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                v = abs(m[i][j])
                if v and (best is None or v < best):
                    best = v
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        # clear row and column t
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, nrows):
                if m[i][t]:
                    q = m[i][t] // m[t][t]
                    add_row(i, t, -q)
                    if m[i][t]:
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, ncols):
                if m[t][j]:
                    q = m[t][j] // m[t][t]
                    add_col(j, t, -q)
                    if m[t][j]:
                        swap_cols(t, j)
                        dirty = True
        # divisibility: fold any non-divisible entry into column t and redo
        piv = m[t][t]
        offender = None
        for i in range(t + 1, nrows):
            for j in range(t + 1, ncols):
                if m[i][j] % piv:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            add_row(t, offender, 1)
            continue
        if m[t][t] < 0:
            negate_row(t)
        t += 1

    d = [m[i][i] for i in range(n)]
    while d and d[-1] == 0:
        d.pop()
    return SmithForm(tuple(d), IntMatrix(left), IntMatrix(right))


def determinant_divisors(a: IntMatrix) -> list[int]:
    """gcd of all k-by-k minors for k = 1..min(rows, cols); brute force.

    Independent oracle for the Smith form: the k-th invariant factor equals
    g_k / g_{k-1} where g_k is the k-th determinant divisor.
    """
    from itertools import combinations

    n = min(a.rows, a.cols)
    out = []
    for k in range(1, n + 1):
        g = 0
        for rows in combinations(range(a.rows), k):
            for cols in combinations(range(a.cols), k):
                sub = IntMatrix([[a.entries[i][j] for j in cols] for i in rows])
                g = gcd(g, sub.det())
                if g == 1:
                    break
            if g == 1:
                break
        out.append(g)
    return out


def is_unimodular(a: IntMatrix) -> bool:
    return a.rows == a.cols and abs(a.det()) == 1
