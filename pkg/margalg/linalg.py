"""Exact sparse linear algebra over the rationals.

Rows are dicts mapping a column key to a nonzero Fraction. Column keys only
need to be hashable and mutually comparable, so monomials can index columns
directly.
"""

from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

Row = dict[Hashable, Fraction]


class EchelonForm:
    """Reduced row-echelon form built one row at a time.

    Every stored row has a pivot coefficient of 1 and is zero in every other
    pivot column.
    """

    def __init__(self, rows: Iterable[Mapping] = ()):
        self._pivots: dict[Hashable, Row] = {}
        for row in rows:
            self.add(row)

    @property
    def rank(self) -> int:
        return len(self._pivots)

    @property
    def pivots(self) -> list:
        return sorted(self._pivots)

    def reduce(self, row: Mapping) -> Row:
        """Return row minus its projection onto the stored row space."""
        result: Row = {k: Fraction(v) for k, v in row.items() if v}
        for col in [c for c in result if c in self._pivots]:
            factor = result.get(col)
            if not factor:
                continue
            for k, v in self._pivots[col].items():
                value = result.get(k, 0) - factor * v
                if value:
                    result[k] = value
                else:
                    result.pop(k, None)
        return result

    def contains(self, row: Mapping) -> bool:
        return not self.reduce(row)

    def add(self, row: Mapping) -> bool:
        """Insert a row; returns False when it was already in the span."""
        reduced = self.reduce(row)
        if not reduced:
            return False
        pivot = min(reduced)
        scale = reduced[pivot]
        reduced = {k: v / scale for k, v in reduced.items()}
        for other in self._pivots.values():
            factor = other.get(pivot)
            if not factor:
                continue
            for k, v in reduced.items():
                value = other.get(k, 0) - factor * v
                if value:
                    other[k] = value
                else:
                    other.pop(k, None)
        self._pivots[pivot] = reduced
        return True

    def nullspace(self, columns: Iterable) -> list[Row]:
        """Basis of the right kernel, one vector per free column, in column order."""
        basis = []
        pivot_rows = list(self._pivots.items())
        for free in sorted(columns):
            if free in self._pivots:
                continue
            vector: Row = {free: Fraction(1)}
            for pivot, row in pivot_rows:
                coeff = row.get(free)
                if coeff:
                    vector[pivot] = -coeff
            basis.append(vector)
        return basis


def rank(rows: Iterable[Mapping]) -> int:
    return EchelonForm(rows).rank


def nullspace(rows: Iterable[Mapping], ncols: int) -> list[list[Fraction]]:
    """Kernel basis of a matrix with columns 0..ncols-1, as dense vectors."""
    echelon = EchelonForm(rows)
    return [
        [vector.get(c, Fraction(0)) for c in range(ncols)]
        for vector in echelon.nullspace(range(ncols))
    ]


def dense_rows(matrix: Iterable[Iterable]) -> list[Row]:
    return [{j: Fraction(v) for j, v in enumerate(r) if v} for r in matrix]


def integer_kernel(matrix: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """Z-basis of the integer vectors v with matrix * v = 0.

    Unimodular column operations bring the matrix, stacked on an identity,
    to column echelon form; the columns whose matrix part vanishes carry the
    basis in their identity part.
    """
    m = len(matrix)
    columns = [
        [int(row[c]) for row in matrix] + [1 if r == c else 0 for r in range(ncols)]
        for c in range(ncols)
    ]
    start = 0
    for r in range(m):
        while start < ncols:
            nonzero = [c for c in range(start, ncols) if columns[c][r]]
            if not nonzero:
                break
            pivot = min(nonzero, key=lambda c: abs(columns[c][r]))
            cleared = True
            for c in nonzero:
                if c == pivot:
                    continue
                q = columns[c][r] // columns[pivot][r]
                columns[c] = [a - q * b for a, b in zip(columns[c], columns[pivot])]
                cleared = cleared and not columns[c][r]
            if cleared:
                columns[start], columns[pivot] = columns[pivot], columns[start]
                start += 1
                break
    return [column[m:] for column in columns[start:]]
