"""Exact linear algebra over Fraction: small dense matrices, sparse ranks."""

from __future__ import annotations

from fractions import Fraction


class LinearSolveError(ValueError):
    """Raised when an exact linear system has no (unique) solution."""


def identity(n: int) -> list[list[Fraction]]:
    return [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]


def zero_matrix(n: int) -> list[list[Fraction]]:
    return [[Fraction(0)] * n for _ in range(n)]


def mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a, c):
    c = Fraction(c)
    return [[x * c for x in row] for row in a]


def mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    out = [[Fraction(0)] * m for _ in range(n)]
    for i in range(n):
        row = a[i]
        for t in range(k):
            c = row[t]
            if c:
                bt = b[t]
                oi = out[i]
                for j in range(m):
                    if bt[j]:
                        oi[j] += c * bt[j]
    return out

def is_zero_matrix(a) -> bool:
    return all(not x for row in a for x in row)


def rank(rows) -> int:
    """Rank of a family of sparse vectors given as dicts key -> Fraction.

    Keys may be arbitrary hashables; zero entries need not be stored.
    """
    basis: list[dict] = []
    pivots: list = []
    r = 0
    for row in rows:
        row = {k: Fraction(v) for k, v in row.items() if v}
        for pivot, vec in zip(pivots, basis):
            c = row.get(pivot)
            if c:
                factor = c / vec[pivot]
                for k, v in vec.items():
                    s = row.get(k, 0) - factor * v
                    if s:
                        row[k] = s
                    else:
                        row.pop(k, None)
        if row:
            pivot = next(iter(row))
            pivots.append(pivot)
            basis.append(row)
            r += 1
    return r


def solve_unique(columns, target):
    """Solve sum_i c_i * columns[i] = target exactly; vectors are sparse dicts.

    Returns the coefficient list.  Raises LinearSolveError when the system is
    inconsistent or the columns are linearly dependent.
    """
    keys = sorted({k for col in columns for k in col} | set(target))
    index = {k: i for i, k in enumerate(keys)}
    n_eq, n_var = len(keys), len(columns)
    a = [[Fraction(0)] * (n_var + 1) for _ in range(n_eq)]
    for j, col in enumerate(columns):
        for k, v in col.items():
            a[index[k]][j] = Fraction(v)
    for k, v in target.items():
        a[index[k]][n_var] = Fraction(v)

    pivot_of_col: dict[int, int] = {}
    row = 0
    for col in range(n_var):
        pivot = next((r for r in range(row, n_eq) if a[r][col]), None)
        if pivot is None:
            continue
        a[row], a[pivot] = a[pivot], a[row]
        inv = Fraction(1) / a[row][col]
        a[row] = [x * inv for x in a[row]]
        for r in range(n_eq):
            if r != row and a[r][col]:
                factor = a[r][col]
                a[r] = [x - factor * y for x, y in zip(a[r], a[row])]
        pivot_of_col[col] = row
        row += 1
    if len(pivot_of_col) < n_var:
        raise LinearSolveError("columns are linearly dependent")
    for r in range(row, n_eq):
        if a[r][n_var]:
            raise LinearSolveError("inconsistent linear system")
    return [a[pivot_of_col[j]][n_var] for j in range(n_var)]
