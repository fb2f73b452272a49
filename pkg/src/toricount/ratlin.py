"""Exact integer/rational linear algebra.

Matrices are plain lists of lists holding ints or ``Fraction``s; everything
here is exact, sizes are tiny (dimensions well under 100), so clarity beats
asymptotics throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd


def frac_matrix(rows):
    return [[Fraction(x) for x in row] for row in rows]


def mat_mul(a, b):
    n, m, p = len(a), len(b), len(b[0])
    assert len(a[0]) == m
    return [
        [sum(a[i][t] * b[t][j] for t in range(m)) for j in range(p)]
        for i in range(n)
    ]


def mat_vec(a, v):
    return [sum(row[j] * v[j] for j in range(len(v))) for row in a]


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(a):
    return [list(col) for col in zip(*a)]


def dot(u, v):
    return sum(x * y for x, y in zip(u, v))


def mat_rank(rows) -> int:
    """Rank over Q by Gaussian elimination with exact fractions."""
    m = frac_matrix(rows)
    if not m:
        return 0
    nrows, ncols = len(m), len(m[0])
    rank = 0
    row = 0
    for col in range(ncols):
        piv = next((r for r in range(row, nrows) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        inv = 1 / m[row][col]
        m[row] = [x * inv for x in m[row]]
        for r in range(nrows):
            if r != row and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[row])]
        rank += 1
        row += 1
        if row == nrows:
            break
    return rank


def in_row_span(rows, vec) -> bool:
    """Whether ``vec`` lies in the Q-span of ``rows``."""
    base = [list(r) for r in rows]
    return mat_rank(base) == mat_rank(base + [list(vec)])


def solve_square(a, b):
    """Solve a*x = b exactly; ``a`` square nonsingular.  Returns Fractions."""
    n = len(a)
    m = [[Fraction(a[i][j]) for j in range(n)] + [Fraction(b[i])] for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [m[i][n] for i in range(n)]


def det_int(a) -> int:
    """Determinant of an integer matrix (fraction-free Bareiss)."""
    n = len(a)
    if n == 0:
        return 1
    m = [[int(x) for x in row] for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            piv = next((r for r in range(k + 1, n) if m[r][k] != 0), None)
            if piv is None:
                return 0
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def vec_gcd(v) -> int:
    g = 0
    for x in v:
        g = gcd(g, abs(int(x)))
    return g


def primitivize(v):
    """Scale a rational vector to its primitive integer representative."""
    v = [Fraction(x) for x in v]
    if all(x == 0 for x in v):
        raise ValueError("zero vector has no primitive representative")
    denom = 1
    for x in v:
        denom = denom * x.denominator // gcd(denom, x.denominator)
    w = [int(x * denom) for x in v]
    g = vec_gcd(w)
    return tuple(x // g for x in w)


@dataclass(frozen=True)
class SmithDecomposition:
    """U*A*V = diag(invariant_factors), with U, V unimodular.

    ``invariant_factors`` lists the nonzero diagonal entries d_1 | d_2 | ...;
    the remaining diagonal is zero.  The cokernel of A as a map
    Z^cols -> Z^rows is  (+)_i Z/d_i  (+)  Z^(rows - rank).
    """

    invariant_factors: tuple
    left: tuple       # rows x rows
    right: tuple      # cols x cols
    shape: tuple

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    def coker_rank(self) -> int:
        return self.shape[0] - self.rank

    def torsion_factors(self) -> tuple:
        return tuple(d for d in self.invariant_factors if d > 1)

    def torsion_order(self) -> int:
        t = 1
        for d in self.torsion_factors():
            t *= d
        return t

    def free_projection(self):
        """Rows of U projecting Z^rows onto the free part of coker(A)."""
        return [list(self.left[i]) for i in range(self.rank, self.shape[0])]


class _SnfState:
    def __init__(self, a):
        self.m = [[int(x) for x in row] for row in a]
        self.nrows = len(self.m)
        self.ncols = len(self.m[0]) if self.nrows else 0
        self.u = identity(self.nrows)
        self.v = identity(self.ncols)

    def swap_rows(self, i, j):
        if i != j:
            self.m[i], self.m[j] = self.m[j], self.m[i]
            self.u[i], self.u[j] = self.u[j], self.u[i]

    def swap_cols(self, i, j):
        if i != j:
            for row in self.m:
                row[i], row[j] = row[j], row[i]
            for row in self.v:
                row[i], row[j] = row[j], row[i]

    def addmul_row(self, dst, src, c):
        self.m[dst] = [x + c * y for x, y in zip(self.m[dst], self.m[src])]
        self.u[dst] = [x + c * y for x, y in zip(self.u[dst], self.u[src])]

    def addmul_col(self, dst, src, c):
        for row in self.m:
            row[dst] += c * row[src]
        for row in self.v:
            row[dst] += c * row[src]

    def negate_row(self, i):
        self.m[i] = [-x for x in self.m[i]]
        self.u[i] = [-x for x in self.u[i]]

    def diagonalize(self):
        m = self.m
        for t in range(min(self.nrows, self.ncols)):
            while True:
                # smallest nonzero entry of the trailing submatrix as pivot
                best = None
                for i in range(t, self.nrows):
                    for j in range(t, self.ncols):
                        if m[i][j] != 0 and (best is None or abs(m[i][j]) < best[0]):
                            best = (abs(m[i][j]), i, j)
                if best is None:
                    return
                self.swap_rows(t, best[1])
                self.swap_cols(t, best[2])
                for i in range(t + 1, self.nrows):
                    if m[i][t] != 0:
                        self.addmul_row(i, t, -(m[i][t] // m[t][t]))
                for j in range(t + 1, self.ncols):
                    if m[t][j] != 0:
                        self.addmul_col(j, t, -(m[t][j] // m[t][t]))
                if all(m[i][t] == 0 for i in range(t + 1, self.nrows)) and all(
                    m[t][j] == 0 for j in range(t + 1, self.ncols)
                ):
                    break
                # a nonzero remainder survived; it is smaller than the pivot,
                # so the loop terminates
            if m[t][t] < 0:
                self.negate_row(t)


def smith_normal_form(a) -> SmithDecomposition:
    """Smith normal form of an integer matrix, with both transforms.

    Elementary-operation algorithm with smallest-entry pivoting; after
    diagonalising, divisibility violations d_i does-not-divide d_{i+1} are
    folded back (add column i+1 to column i) and rediagonalised.  Each fix
    strictly decreases d_i, so this terminates.
    """
    if not a or not len(a[0]):
        nrows = len(a)
        ncols = len(a[0]) if nrows else 0
        return SmithDecomposition(
            invariant_factors=(),
            left=tuple(tuple(row) for row in identity(nrows)),
            right=tuple(tuple(row) for row in identity(ncols)),
            shape=(nrows, ncols),
        )
    st = _SnfState(a)
    st.diagonalize()
    while True:
        diag = [st.m[i][i] for i in range(min(st.nrows, st.ncols))]
        bad = next(
            (i for i in range(len(diag) - 1) if diag[i] != 0 and diag[i + 1] % diag[i] != 0),
            None,
        )
        if bad is None:
            break
        st.addmul_col(bad, bad + 1, 1)
        st.diagonalize()
    factors = tuple(
        st.m[i][i] for i in range(min(st.nrows, st.ncols)) if st.m[i][i] != 0
    )
    return SmithDecomposition(
        invariant_factors=factors,
        left=tuple(tuple(row) for row in st.u),
        right=tuple(tuple(row) for row in st.v),
        shape=(st.nrows, st.ncols),
    )
