"""Small exact linear algebra routines over Python ints and Fractions.

Everything here is written for the matrix sizes this package actually
meets (n <= ~20 plus candidate pools of short vectors), so clarity beats
asymptotics.  No floats anywhere: determinants use Bareiss, ranks and
inverses use Fraction Gaussian elimination.
"""

from __future__ import annotations

from fractions import Fraction

IntMatrix = list[list[int]]


def mat_vec(m: IntMatrix, v: list[int]) -> list[int]:
    return [sum(row[j] * v[j] for j in range(len(v))) for row in m]


def mat_mul(a, b):
    rows, inner, cols = len(a), len(b), len(b[0])
    return [
        [sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)]
        for i in range(rows)
    ]


def transpose(a):
    return [list(col) for col in zip(*a)]


def identity(n: int) -> IntMatrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def int_det(matrix: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    a = [row[:] for row in matrix]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


class RankTracker:
    """Incremental exact rank via row-reduced Fraction echelon rows."""

    def __init__(self):
        self._rows: list[list[Fraction]] = []
        self._pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self._rows)

    def copy(self) -> "RankTracker":
        dup = RankTracker()
        dup._rows = list(self._rows)
        dup._pivots = list(self._pivots)
        return dup

    def _reduce(self, vec) -> list[Fraction]:
        v = [Fraction(x) for x in vec]
        for row, p in zip(self._rows, self._pivots):
            if v[p] != 0:
                c = v[p]
                v = [vi - c * ri for vi, ri in zip(v, row)]
        return v

    def contains(self, vec) -> bool:
        return all(x == 0 for x in self._reduce(vec))

    def add(self, vec) -> bool:
        """Add vec to the span; True if it increased the rank."""
        v = self._reduce(vec)
        for p, x in enumerate(v):
            if x != 0:
                inv = Fraction(1) / x
                v = [vi * inv for vi in v]
                self._rows.append(v)
                self._pivots.append(p)
                return True
        return False


def exact_rank(vectors) -> int:
    tracker = RankTracker()
    for v in vectors:
        tracker.add(v)
    return tracker.rank


def solve_fraction(a, rhs):
    """Solve a (square, nonsingular) system exactly; returns Fractions.

    ``rhs`` may be a vector or a matrix of column vectors given as rows of
    the second operand, i.e. we solve A X = RHS with RHS shaped like A.
    """
    n = len(a)
    vector_rhs = not isinstance(rhs[0], (list, tuple))
    b = [[Fraction(rhs[i])] for i in range(n)] if vector_rhs else [
        [Fraction(x) for x in row] for row in rhs
    ]
    m = [[Fraction(x) for x in row] + b[i] for i, row in enumerate(a)]
    cols = len(m[0])
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        m[k], m[piv] = m[piv], m[k]
        inv = Fraction(1) / m[k][k]
        m[k] = [x * inv for x in m[k]]
        for i in range(n):
            if i != k and m[i][k] != 0:
                c = m[i][k]
                m[i] = [x - c * y for x, y in zip(m[i], m[k])]
    sol = [row[n:cols] for row in m]
    return [row[0] for row in sol] if vector_rhs else sol


def invert_fraction_matrix(a):
    return solve_fraction(a, identity(len(a)))
