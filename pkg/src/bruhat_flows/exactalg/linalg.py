"""Small exact linear algebra over Fraction (lists of lists)."""

from fractions import Fraction


def to_q(rows):
    return [[Fraction(v) for v in r] for r in rows]


def row_reduce(rows):
    """Reduced row echelon form; returns (rref, pivot columns)."""
    a = [list(r) for r in rows]
    if not a:
        return a, []
    ncol = len(a[0])
    piv = []
    r = 0
    for c in range(ncol):
        p = next((i for i in range(r, len(a)) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / Fraction(a[r][c])
        a[r] = [v * inv for v in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                ar = a[r]
                a[i] = [vi - f * vr for vi, vr in zip(a[i], ar)]
        piv.append(c)
        r += 1
        if r == len(a):
            break
    return a, piv


def rank(rows):
    return len(row_reduce(to_q(rows))[1]) if rows else 0


def span_basis(vectors):
    """Row basis (reduced) of the span of the given vectors."""
    if not vectors:
        return []
    red, piv = row_reduce(to_q(vectors))
    return red[: len(piv)]


def solve(a, b):
    """Unique solution of a x = b (a square or overdetermined, full column rank)."""
    n = len(a[0])
    aug = [list(map(Fraction, row)) + [Fraction(bi)] for row, bi in zip(a, b)]
    red, piv = row_reduce(aug)
    if n in piv:
        raise ValueError("inconsistent linear system")
    if len(piv) < n:
        raise ValueError("singular linear system")
    return [red[i][n] for i in range(n)]


def inverse(a):
    n = len(a)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    red, piv = row_reduce(aug)
    if piv[:n] != list(range(n)):
        raise ValueError("singular matrix")
    return [row[n:] for row in red[:n]]


class IncrementalSolver:
    """Accumulate equations row by row until the unknowns are pinned down."""

    def __init__(self, n):
        self.n = n
        self.rows = []  # echelon rows: (pivot, coeffs + rhs)

    def add(self, coeffs, rhs):
        v = [Fraction(c) for c in coeffs] + [Fraction(rhs)]
        for p, r in self.rows:
            if v[p]:
                f = v[p]
                v = [a - f * b for a, b in zip(v, r)]
        p = next((i for i in range(self.n) if v[i]), None)
        if p is None:
            if v[self.n]:
                raise ValueError("inconsistent linear system")
            return False
        inv = 1 / v[p]
        v = [a * inv for a in v]
        self.rows.append((p, v))
        return True

    def full(self):
        return len(self.rows) == self.n

    def solution(self):
        if not self.full():
            raise ValueError("underdetermined")
        rows = sorted(self.rows, key=lambda pr: pr[0], reverse=True)
        x = [Fraction(0)] * self.n
        for p, r in rows:
            x[p] = r[self.n] - sum(r[j] * x[j] for j in range(p + 1, self.n) if r[j])
        return x
