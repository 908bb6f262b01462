"""Exact Gaussian elimination over the rational function field.

Pivots are any entries that are not identically zero; the pivot functions
are collected so callers can report where a frame or solve degenerates on
the chart (zero sets of numerators/denominators).  Pivot choice is
deterministic: prefer constants, then lowest total degree, then lowest row.
"""

from __future__ import annotations

from .errors import SingularBasis
from .scalars import Chart, ScalarField


def _pivot_cost(entry: ScalarField):
    if entry.is_constant():
        return (0, 0)
    return (1, entry.num.total_degree() + entry.den.total_degree())


class Eliminator:
    """Row echelon reduction of a matrix, reusable for repeated solves."""

    def __init__(self, chart: Chart, rows):
        self.chart = chart
        self.rows = [list(r) for r in rows]
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        self.pivots = []  # (row, col) in elimination order
        self.pivot_values = []
        self.row_order = list(range(self.nrows))
        self._reduce()

    def _reduce(self):
        m = self.rows
        zero = self.chart.zero()
        piv_r = 0
        for col in range(self.ncols):
            best = None
            for r in range(piv_r, self.nrows):
                e = m[r][col]
                if e.is_zero():
                    continue
                cost = _pivot_cost(e)
                if best is None or cost < best[0]:
                    best = (cost, r)
            if best is None:
                continue
            r = best[1]
            if r != piv_r:
                m[piv_r], m[r] = m[r], m[piv_r]
                ro = self.row_order
                ro[piv_r], ro[r] = ro[r], ro[piv_r]
            pivot = m[piv_r][col]
            self.pivots.append((piv_r, col))
            self.pivot_values.append(pivot)
            inv = pivot.inverse()
            row = m[piv_r]
            m[piv_r] = [e * inv if not e.is_zero() else e for e in row]
            for rr in range(self.nrows):
                if rr == piv_r:
                    continue
                f = m[rr][col]
                if f.is_zero():
                    continue
                prow = m[piv_r]
                m[rr] = [
                    a - f * b if not b.is_zero() else a
                    for a, b in zip(m[rr], prow)
                ]
            piv_r += 1
            if piv_r == self.nrows:
                break

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def pivot_columns(self):
        return [c for _, c in self.pivots]


def rank(chart: Chart, rows) -> int:
    return Eliminator(chart, rows).rank


def kernel_basis(chart: Chart, rows):
    """Deterministic basis of the right kernel of the matrix."""
    return kernel_basis_with_pivots(chart, rows)[0]


def kernel_basis_with_pivots(chart: Chart, rows):
    """Kernel basis plus the pivot functions used during elimination.

    Nonconstant pivots mark chart loci where the reduction degenerates;
    callers surface them in reports rather than rejecting the input.
    """
    if not rows:
        return [], []
    elim = Eliminator(chart, rows)
    ncols = elim.ncols
    pivot_cols = elim.pivot_columns()
    pivot_set = set(pivot_cols)
    free_cols = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    zero = chart.zero()
    one = chart.one()
    for fc in free_cols:
        vec = [zero] * ncols
        vec[fc] = one
        for (r, c) in elim.pivots:
            vec[c] = -elim.rows[r][fc]
        basis.append(vec)
    return basis, list(elim.pivot_values)


def solve(chart: Chart, rows, rhs):
    """One exact solution of A x = b, or None if inconsistent.

    Free variables are set to zero, so the answer is deterministic.
    """
    nrows = len(rows)
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    elim = Eliminator(chart, aug)
    ncols = len(rows[0])
    zero = chart.zero()
    sol = [zero] * ncols
    for (r, c) in elim.pivots:
        if c == ncols:
            return None  # pivot in the rhs column: inconsistent
    for (r, c) in elim.pivots:
        sol[c] = elim.rows[r][ncols]
    # rows beyond rank must have zero rhs
    for r in range(elim.rank, nrows):
        if not elim.rows[r][ncols].is_zero():
            return None
    return sol


def invert(chart: Chart, rows):
    """Exact inverse of a square matrix, or None when singular."""
    n = len(rows)
    one = chart.one()
    zero = chart.zero()
    aug = [
        list(r) + [one if j == k else zero for j in range(n)]
        for k, r in enumerate(rows)
    ]
    elim = Eliminator(chart, aug)
    if elim.rank < n or any(c >= n for _, c in elim.pivots):
        return None
    inv = [[zero] * n for _ in range(n)]
    for (r, c) in elim.pivots:
        for j in range(n):
            inv[c][j] = elim.rows[r][n + j]
    return inv


def mat_vec(rows, vec, zero):
    out = []
    for r in rows:
        acc = zero
        for a, b in zip(r, vec):
            if not (a.is_zero() or b.is_zero()):
                acc = acc + a * b
        out.append(acc)
    return out


def mat_mul(a, b, zero):
    n, k = len(a), len(b)
    m = len(b[0])
    out = []
    for r in range(n):
        row = []
        for c in range(m):
            acc = zero
            for j in range(k):
                x, y = a[r][j], b[j][c]
                if not (x.is_zero() or y.is_zero()):
                    acc = acc + x * y
            row.append(acc)
        out.append(row)
    return out


def in_span(chart: Chart, span_rows, target):
    """Membership of target in the row span; returns coefficients or None."""
    if not span_rows:
        return None if any(not t.is_zero() for t in target) else []
    cols = list(zip(*span_rows))
    sol = solve(chart, [list(c) for c in cols], list(target))
    return sol


class SolveCache:
    """Factor a square system once and answer many right-hand sides."""

    def __init__(self, chart: Chart, rows):
        self.chart = chart
        self.inverse = invert(chart, rows)
        if self.inverse is None:
            raise SingularBasis("matrix is singular over the function field")

    def solve(self, rhs):
        return mat_vec(self.inverse, rhs, self.chart.zero())
