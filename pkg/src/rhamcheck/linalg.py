"""Exact sparse linear algebra over the rationals.

Everything downstream (de Rham truncations, simplicial cohomology, the
forms-family complexes) funnels through two operations: kernel/image
bases of a single map, and the cohomology of a composable pair.  All
vectors are exact Fractions; there is no floating-point path here.

Elimination strategy: dense rational Gauss-Jordan below 64x64 entries,
fraction-free (Bareiss) elimination with minimal-fill-in pivoting on the
sparse path above that.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .errors import CompositionNonzero, NotACocycle

DENSE_LIMIT = 64


class SparseMatrix:
    """Immutable sparse rational matrix; entries keyed by (row, col)."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows, cols, entries):
        self.rows = rows
        self.cols = cols
        clean = {}
        for (i, j), value in entries.items():
            value = Fraction(value)
            if value == 0:
                continue
            if not (0 <= i < rows and 0 <= j < cols):
                raise ValueError("entry (%d, %d) out of range" % (i, j))
            clean[(i, j)] = value
        self.entries = clean

    @classmethod
    def zero(cls, rows, cols):
        return cls(rows, cols, {})

    @classmethod
    def identity(cls, n):
        return cls(n, n, {(i, i): Fraction(1) for i in range(n)})

    @classmethod
    def from_rows(cls, rows_list):
        rows = len(rows_list)
        cols = len(rows_list[0]) if rows else 0
        entries = {}
        for i, row in enumerate(rows_list):
            for j, value in enumerate(row):
                if value:
                    entries[(i, j)] = Fraction(value)
        return cls(rows, cols, entries)

    @classmethod
    def from_columns(cls, columns, rows):
        entries = {}
        for j, col in enumerate(columns):
            for i, value in enumerate(col):
                if value:
                    entries[(i, j)] = Fraction(value)
        return cls(rows, len(columns), entries)

    def column(self, j):
        col = [Fraction(0)] * self.rows
        for (i, jj), value in self.entries.items():
            if jj == j:
                col[i] = value
        return col

    def mul_vec(self, vec):
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        out = [Fraction(0)] * self.rows
        for (i, j), value in self.entries.items():
            if vec[j]:
                out[i] += value * vec[j]
        return out

    def matmul(self, other):
        if self.cols != other.rows:
            raise ValueError("shape mismatch in matmul")
        by_row = {}
        for (i, k), value in self.entries.items():
            by_row.setdefault(i, []).append((k, value))
        by_col = {}
        for (k, j), value in other.entries.items():
            by_col.setdefault(k, []).append((j, value))
        entries = {}
        for i, row in by_row.items():
            for k, a in row:
                for j, b in by_col.get(k, ()):
                    key = (i, j)
                    entries[key] = entries.get(key, Fraction(0)) + a * b
        return SparseMatrix(self.rows, other.cols, entries)

    def is_zero(self):
        return not self.entries

    def hstack(self, other):
        if self.rows != other.rows:
            raise ValueError("row count mismatch in hstack")
        entries = dict(self.entries)
        for (i, j), value in other.entries.items():
            entries[(i, j + self.cols)] = value
        return SparseMatrix(self.rows, self.cols + other.cols, entries)

    def to_dense(self):
        dense = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (i, j), value in self.entries.items():
            dense[i][j] = value
        return dense


def _rref_dense(dense, rows, cols):
    """In-place reduced row echelon form; returns pivot column list."""
    pivots = []
    r = 0
    for c in range(cols):
        pivot_row = None
        for i in range(r, rows):
            if dense[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        dense[r], dense[pivot_row] = dense[pivot_row], dense[r]
        inv = Fraction(1) / dense[r][c]
        dense[r] = [inv * x for x in dense[r]]
        for i in range(rows):
            if i != r and dense[i][c] != 0:
                factor = dense[i][c]
                dense[i] = [x - factor * y for x, y in zip(dense[i], dense[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return pivots


def _integer_rows(matrix):
    """Rows of `matrix` scaled to coprime integers (kernel-preserving)."""
    by_row = [dict() for _ in range(matrix.rows)]
    for (i, j), value in matrix.entries.items():
        by_row[i][j] = value
    rows = []
    for row in by_row:
        if not row:
            rows.append({})
            continue
        denom_lcm = 1
        for value in row.values():
            d = value.denominator
            denom_lcm = denom_lcm * d // gcd(denom_lcm, d)
        ints = {j: int(v * denom_lcm) for j, v in row.items()}
        g = 0
        for v in ints.values():
            g = gcd(g, abs(v))
        if g > 1:
            ints = {j: v // g for j, v in ints.items()}
        rows.append(ints)
    return rows


def _echelon_sparse(matrix):
    """Fraction-free elimination; returns (pivot cols, echelon rows).

    Pivot selection is by minimal fill-in (Markowitz count) among the
    remaining nonzero entries; echelon rows come back as rational dicts
    normalized so the pivot entry is 1.
    """
    rows = [r for r in _integer_rows(matrix) if r]
    pivots = []
    echelon = []
    while rows:
        col_count = {}
        for row in rows:
            for j in row:
                col_count[j] = col_count.get(j, 0) + 1
        best = None
        for ridx, row in enumerate(rows):
            rcount = len(row)
            for j in row:
                score = (rcount - 1) * (col_count[j] - 1)
                key = (score, j, ridx)
                if best is None or key < best[0]:
                    best = (key, ridx, j)
        _, ridx, pcol = best
        pivot_row = rows.pop(ridx)
        pivot_val = pivot_row[pcol]
        new_rows = []
        for row in rows:
            if pcol in row:
                factor = row[pcol]
                merged = {}
                for j in set(row) | set(pivot_row):
                    value = row.get(j, 0) * pivot_val - pivot_row.get(j, 0) * factor
                    if value:
                        merged[j] = value
                g = 0
                for v in merged.values():
                    g = gcd(g, abs(v))
                if g > 1:
                    merged = {j: v // g for j, v in merged.items()}
                if merged:
                    new_rows.append(merged)
            else:
                new_rows.append(row)
        rows = new_rows
        pivots.append(pcol)
        echelon.append({j: Fraction(v, pivot_val) for j, v in pivot_row.items()})
    # back-substitute so each pivot column appears in exactly one row
    order = sorted(range(len(pivots)), key=lambda k: pivots[k])
    for a in range(len(order)):
        for b in range(a + 1, len(order)):
            ra, rb = order[a], order[b]
            pb = pivots[rb]
            if pb in echelon[ra]:
                factor = echelon[ra][pb]
                for j, v in echelon[rb].items():
                    nv = echelon[ra].get(j, Fraction(0)) - factor * v
                    if nv:
                        echelon[ra][j] = nv
                    else:
                        echelon[ra].pop(j, None)
    paired = sorted(zip(pivots, echelon))
    pivots = [p for p, _ in paired]
    echelon = [e for _, e in paired]
    return pivots, echelon


def _rref(matrix):
    """(pivot columns, rref rows as dicts col->Fraction), dense or sparse."""
    if matrix.rows < DENSE_LIMIT and matrix.cols < DENSE_LIMIT:
        dense = matrix.to_dense()
        pivots = _rref_dense(dense, matrix.rows, matrix.cols)
        rows = []
        for r in range(len(pivots)):
            rows.append({j: v for j, v in enumerate(dense[r]) if v})
        return pivots, rows
    return _echelon_sparse(matrix)


def kernel_image(matrix):
    """Exact kernel basis, column-space basis, and rank of a matrix.

    The kernel basis is read off the reduced echelon form (one vector
    per free column); the image basis is the original columns at the
    pivot positions, so image vectors are honest columns of the input.
    """
    pivots, rows = _rref(matrix)
    rank = len(pivots)
    pivot_set = set(pivots)
    free_cols = [j for j in range(matrix.cols) if j not in pivot_set]
    kernel = []
    for f in free_cols:
        vec = [Fraction(0)] * matrix.cols
        vec[f] = Fraction(1)
        for p, row in zip(pivots, rows):
            if f in row:
                vec[p] = -row[f]
        kernel.append(vec)
    image = [matrix.column(j) for j in pivots]
    return kernel, image, rank


def solve(matrix, rhs):
    """One exact solution of matrix * x = rhs, or None if inconsistent."""
    augmented = matrix.hstack(SparseMatrix.from_columns([rhs], matrix.rows))
    pivots, rows = _rref(augmented)
    if matrix.cols in pivots:
        return None
    x = [Fraction(0)] * matrix.cols
    for p, row in zip(pivots, rows):
        x[p] = row.get(matrix.cols, Fraction(0))
    return x


class _Echelon:
    """A reduced echelon basis supporting linear reduction against it."""

    def __init__(self, vectors, length):
        self.length = length
        self.rows = []  # list of (pivot index, dict col->Fraction with pivot 1)
        for vec in vectors:
            self.add(vec)

    def reduce(self, vec):
        out = {j: v for j, v in enumerate(vec) if v} if isinstance(vec, list) else dict(vec)
        for pivot, row in self.rows:
            coeff = out.get(pivot)
            if coeff:
                for j, v in row.items():
                    nv = out.get(j, Fraction(0)) - coeff * v
                    if nv:
                        out[j] = nv
                    else:
                        out.pop(j, None)
        return out

    def add(self, vec):
        """Reduce and insert; returns the reduced dict (empty if dependent)."""
        red = self.reduce(vec)
        if not red:
            return red
        pivot = max(red)
        inv = Fraction(1) / red[pivot]
        row = {j: v * inv for j, v in red.items()}
        for _, existing in self.rows:
            coeff = existing.get(pivot)
            if coeff:
                for j, v in row.items():
                    nv = existing.get(j, Fraction(0)) - coeff * v
                    if nv:
                        existing[j] = nv
                    else:
                        existing.pop(j, None)
        self.rows.append((pivot, row))
        self.rows.sort(key=lambda pr: pr[0])
        return red

    def contains(self, vec):
        return not self.reduce(vec)


def _dict_to_vec(d, length):
    vec = [Fraction(0)] * length
    for j, v in d.items():
        vec[j] = v
    return vec


class CohomologyPair:
    """H = ker(d_next) / im(d_prev) for a composable pair of maps.

    `representatives` are cocycles extending a basis of the image to a
    basis of the kernel; `class_of` returns (coordinates, witness) with
    cocycle = sum(coords * representatives) + d_prev * witness, exactly.
    """

    def __init__(self, d_prev, d_next):
        if d_prev.rows != d_next.cols:
            raise ValueError("d_prev codomain != d_next domain")
        composite = d_next.matmul(d_prev)
        if not composite.is_zero():
            raise CompositionNonzero("d_next . d_prev != 0")
        self.d_prev = d_prev
        self.d_next = d_next
        self.space_dim = d_prev.rows
        kernel, _, _ = kernel_image(d_next)
        boundary_basis, _, _ = kernel_image_of_columns(d_prev)
        self._boundary_echelon = _Echelon(boundary_basis, self.space_dim)
        reps = []
        reduced = []
        rep_echelon = _Echelon([], self.space_dim)
        for vec in kernel:
            red = self._boundary_echelon.reduce(vec)
            red = rep_echelon.add(red)
            if red:
                reps.append(_dict_to_vec(red, self.space_dim))
                reduced.append(red)
        self.representatives = reps
        self._reduced = reduced
        self.dimension = len(reps)

    def is_cocycle(self, vec):
        return all(v == 0 for v in self.d_next.mul_vec(vec))

    def class_of(self, vec):
        """Coordinates of a cocycle in the representative basis, plus witness."""
        if len(vec) != self.space_dim:
            raise ValueError("vector length mismatch")
        if not self.is_cocycle(vec):
            raise NotACocycle("class_of on a vector with nonzero coboundary")
        work = dict(self._boundary_echelon.reduce(vec))
        coords = [Fraction(0)] * self.dimension
        # each reduced representative has its pivot as its largest support
        # index, so descending pivot order peels coordinates off uniquely
        order = sorted(range(self.dimension), key=lambda i: max(self._reduced[i]), reverse=True)
        for i in order:
            red = self._reduced[i]
            pivot = max(red)
            coeff = work.get(pivot, Fraction(0)) / red[pivot]
            if coeff:
                coords[i] = coeff
                for j, v in red.items():
                    nv = work.get(j, Fraction(0)) - coeff * v
                    if nv:
                        work[j] = nv
                    else:
                        work.pop(j, None)
        if work:
            raise NotACocycle("cocycle not spanned by representatives and boundaries")
        boundary_part = list(vec)
        for i, rep in enumerate(self.representatives):
            if coords[i]:
                boundary_part = [a - coords[i] * b for a, b in zip(boundary_part, rep)]
        witness = solve(self.d_prev, boundary_part)
        if witness is None:
            raise NotACocycle("boundary part has no preimage")
        return coords, witness


def kernel_image_of_columns(matrix):
    """(column-space basis, pivot column indices, rank) of a matrix."""
    pivots, _ = _rref(matrix)
    image = [matrix.column(j) for j in pivots]
    return image, pivots, len(pivots)


def cohomology_pair(d_prev, d_next):
    """Convenience wrapper returning the CohomologyPair object."""
    return CohomologyPair(d_prev, d_next)
