"""Exact multi-way tables, their margins and the independence decomposition.

Entries are Fractions stored densely in row-major order with the last index
varying fastest. Indices are 1-based throughout, matching the "+"-notation
used for margins: a MarginSelector slot is either a concrete index or PLUS.
"""

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import combinations, product
from operator import mul
from typing import Iterable, Iterator, Optional, Sequence, Union

from margalg.complexes import FaceSet, SimplicialComplex, canonicalize
from margalg.config import Config
from margalg.errors import DegenerateTotal, ShapeMismatch
from margalg.linalg import EchelonForm

logger = logging.getLogger(__name__)

PLUS = "+"

Slot = Union[int, str]


def to_rational(value) -> Fraction:
    """Convert an int, Fraction or "p/q" string into a Fraction.

    Floats are refused so that no inexact value can enter a table.
    """
    if isinstance(value, bool) or isinstance(value, float):
        raise ShapeMismatch(f"entry {value!r} is not an exact rational")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ShapeMismatch(f"cannot read rational from {value!r}") from e
    raise ShapeMismatch(f"entry {value!r} is not an exact rational")


def rational_text(value: Fraction) -> str:
    return str(value)


@dataclass(frozen=True)
class Shape:
    dims: tuple[int, ...]

    def __post_init__(self):
        for a in self.dims:
            if int(a) < 1:
                raise ShapeMismatch(f"every dimension must be positive, got {self.dims}")

    @classmethod
    def of(cls, dims: Iterable[int]) -> "Shape":
        return cls(tuple(int(a) for a in dims))

    @classmethod
    def parse(cls, text: str) -> "Shape":
        try:
            return cls.of(int(a) for a in text.split(",") if a.strip())
        except ValueError as e:
            raise ShapeMismatch(f"cannot read shape from {text!r}") from e

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def size(self) -> int:
        return reduce(mul, self.dims, 1)

    def cells(self) -> Iterator[tuple[int, ...]]:
        """All 1-based index tuples in row-major order."""
        return product(*(range(1, a + 1) for a in self.dims))

    def offset(self, index: Sequence[int]) -> int:
        pos = 0
        for i, a in zip(index, self.dims):
            pos = pos * a + (i - 1)
        return pos

    def restrict(self, face: FaceSet) -> "Shape":
        return Shape(tuple(self.dims[j - 1] for j in face.members))

    def check_face(self, face: FaceSet) -> None:
        for j in face.members:
            if j < 1 or j > self.n:
                raise ShapeMismatch(f"vertex {j} outside 1..{self.n}")

    def check_complex(self, complex_: SimplicialComplex) -> None:
        if complex_.n != self.n:
            raise ShapeMismatch(
                f"complex on {complex_.n} vertices used with a {self.n}-way shape")

    def __str__(self) -> str:
        return "x".join(str(a) for a in self.dims)


@dataclass(frozen=True)
class MarginSelector:
    """Index tuple whose slots are concrete 1-based indices or PLUS."""

    slots: tuple[Slot, ...]

    @classmethod
    def of(cls, slots: Iterable) -> "MarginSelector":
        parsed = []
        for s in slots:
            if s == PLUS:
                parsed.append(PLUS)
            else:
                try:
                    parsed.append(int(s))
                except (TypeError, ValueError) as e:
                    raise ShapeMismatch(f"selector slot {s!r} is neither an index nor {PLUS!r}") from e
        return cls(tuple(parsed))

    @classmethod
    def for_face(cls, n: int, face: FaceSet, index: Sequence[int]) -> "MarginSelector":
        """sigma(J)_index: the given index on the face, PLUS elsewhere."""
        slots: list[Slot] = [PLUS] * n
        for j, i in zip(face.members, index):
            slots[j - 1] = i
        return cls(tuple(slots))

    @property
    def face(self) -> FaceSet:
        return FaceSet(tuple(j + 1 for j, s in enumerate(self.slots) if s != PLUS))

    def check(self, shape: Shape) -> None:
        if len(self.slots) != shape.n:
            raise ShapeMismatch(
                f"selector of length {len(self.slots)} used with a {shape.n}-way shape")
        for s, a in zip(self.slots, shape.dims):
            if s == PLUS:
                continue
            if not isinstance(s, int) or isinstance(s, bool):
                raise ShapeMismatch(f"selector slot {s!r} is neither an index nor {PLUS!r}")
            if not 1 <= s <= a:
                raise ShapeMismatch(f"index {s} outside 1..{a}")

    def matches(self, cell: Sequence[int]) -> bool:
        return all(s == PLUS or s == i for s, i in zip(self.slots, cell))

    def __str__(self) -> str:
        return "(" + ",".join(str(s) for s in self.slots) + ")"


@dataclass(frozen=True)
class Table:
    shape: Shape
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.entries) != self.shape.size:
            raise ShapeMismatch(
                f"shape {self.shape} needs {self.shape.size} entries, got {len(self.entries)}")

    @classmethod
    def create(cls, shape: Union[Shape, Sequence[int]], entries: Iterable) -> "Table":
        if not isinstance(shape, Shape):
            shape = Shape.of(shape)
        return cls(shape, tuple(to_rational(e) for e in entries))

    @classmethod
    def zeros(cls, shape: Shape) -> "Table":
        return cls(shape, (Fraction(0),) * shape.size)

    @classmethod
    def from_nested(cls, nested) -> "Table":
        """Build a table from nested lists, e.g. [[1, 2], [3, 4]]."""
        dims = []
        level = nested
        while isinstance(level, (list, tuple)):
            dims.append(len(level))
            level = level[0] if level else None
        flat: list = []

        def walk(node, depth):
            if depth == len(dims):
                flat.append(node)
                return
            if len(node) != dims[depth]:
                raise ShapeMismatch("ragged nested table")
            for child in node:
                walk(child, depth + 1)

        walk(nested, 0)
        return cls.create(Shape.of(dims), flat)

    def __getitem__(self, index: Sequence[int]) -> Fraction:
        return self.entries[self.shape.offset(index)]

    def items(self) -> Iterator[tuple[tuple[int, ...], Fraction]]:
        return zip(self.shape.cells(), self.entries)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def __add__(self, other: "Table") -> "Table":
        if other.shape != self.shape:
            raise ShapeMismatch(f"cannot add {self.shape} and {other.shape} tables")
        return Table(self.shape, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "Table") -> "Table":
        if other.shape != self.shape:
            raise ShapeMismatch(f"cannot subtract {other.shape} from {self.shape} table")
        return Table(self.shape, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def scaled(self, factor) -> "Table":
        factor = to_rational(factor)
        return Table(self.shape, tuple(factor * e for e in self.entries))

    def nested(self):
        """Entries as nested lists of Fractions (a bare Fraction for rank 0)."""
        if self.shape.n == 0:
            return self.entries[0]
        flat = list(self.entries)
        for a in reversed(self.shape.dims[1:]):
            flat = [flat[k:k + a] for k in range(0, len(flat), a)]
        return flat

    def to_dict(self) -> dict:
        return {
            "shape": list(self.shape.dims),
            "entries": [rational_text(e) for e in self.entries],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Table":
        try:
            return cls.create(Shape.of(data["shape"]), data["entries"])
        except KeyError as e:
            raise ShapeMismatch(f"table JSON is missing {e}") from e


def margin_entry(table: Table, sel: MarginSelector) -> Fraction:
    """Sum of the entries matching the fixed slots of sel.

    Raises:
        ShapeMismatch: If sel does not conform to the table's shape.
    """
    sel.check(table.shape)
    ranges = [
        range(1, a + 1) if s == PLUS else (s,)
        for s, a in zip(sel.slots, table.shape.dims)
    ]
    return sum((table[cell] for cell in product(*ranges)), Fraction(0))


def marginalize(table: Table, face: FaceSet) -> Table:
    """The margin A_J: sum over every index outside J.

    J = {} gives the rank-0 table holding the grand total.
    """
    table.shape.check_face(face)
    positions = [j - 1 for j in face.members]
    margin_shape = table.shape.restrict(face)
    sums = [Fraction(0)] * margin_shape.size
    for cell, value in table.items():
        if value:
            sums[margin_shape.offset([cell[p] for p in positions])] += value
    return Table(margin_shape, tuple(sums))


def grand_total(table: Table) -> Fraction:
    return sum(table.entries, Fraction(0))


def one_margins(table: Table) -> list[tuple[Fraction, ...]]:
    return [marginalize(table, FaceSet((j,))).entries for j in range(1, table.shape.n + 1)]


def _flattening_rank_at_most_one(table: Table, axis: int) -> bool:
    """Every 2x2 minor of the axis-vs-rest flattening vanishes."""
    rows: dict[int, list[Fraction]] = {}
    for cell, value in table.items():
        rows.setdefault(cell[axis], []).append(value)
    keys = sorted(rows)
    for p, q in combinations(keys, 2):
        rp, rq = rows[p], rows[q]
        for c, d in combinations(range(len(rp)), 2):
            if rp[c] * rq[d] != rp[d] * rq[c]:
                return False
    return True


def is_completely_independent(table: Table) -> bool:
    """True iff the table is a rank-1 tensor.

    Decided by the one-coordinate-interchange minors, which are exactly the
    2x2 minors of the n one-versus-rest flattenings.
    """
    return all(_flattening_rank_at_most_one(table, axis) for axis in range(table.shape.n))


def is_delta_independent(table: Table, complex_: SimplicialComplex) -> bool:
    table.shape.check_complex(complex_)
    return all(is_completely_independent(marginalize(table, f)) for f in complex_.facets)


def outer_product(vectors: Sequence[Sequence]) -> Table:
    """Rank-1 table whose (i_1, ..., i_n) entry is the product of v_j[i_j]."""
    values = [[to_rational(v) for v in vec] for vec in vectors]
    if any(not vec for vec in values):
        raise ShapeMismatch("outer product factors must be nonempty")
    shape = Shape(tuple(len(vec) for vec in values))
    entries = tuple(
        reduce(mul, (vec[i - 1] for vec, i in zip(values, cell)), Fraction(1))
        for cell in shape.cells()
    )
    return Table(shape, entries)


def independent_part(table: Table, strict: bool = False) -> Table:
    """The completely independent part B^I of a table.

    The (i_1, ..., i_n) entry is the product of the one-dimensional margins
    divided by t^(n-1), t the grand total, so B^I keeps the one-margins and
    total of B. With strict set the division is skipped, which coincides with
    the normalized formula only when t = 1.

    Raises:
        DegenerateTotal: If the grand total is zero.
    """
    total = grand_total(table)
    if total == 0:
        raise DegenerateTotal("the independent part needs a nonzero grand total")
    if table.shape.n == 0:
        return table
    product_table = outer_product(one_margins(table))
    if strict or table.shape.n == 1:
        return product_table
    return product_table.scaled(1 / total ** (table.shape.n - 1))


def decompose(table: Table, strict: bool = False) -> tuple[Table, Table]:
    """Split a table as B = B^I + B^0 with B^I completely independent."""
    independent = independent_part(table, strict=strict)
    return independent, table - independent


def detect_complex(table: Table, strict: bool = False) -> SimplicialComplex:
    """The complex of faces J whose margin of B^0 vanishes.

    Subsets are scanned in graded lexicographic order; the result is
    downward closed and returned by its facets.
    """
    _, zero_part = decompose(table, strict=strict)
    n = table.shape.n
    faces = []
    for k in range(n + 1):
        for subset in combinations(range(1, n + 1), k):
            face = FaceSet(subset)
            if marginalize(zero_part, face).is_zero():
                faces.append(face)
    logger.debug("detected %d zero-margin faces for a %s table", len(faces), table.shape)
    return canonicalize(faces, n)


def margin_map_rows(shape: Shape, complex_: SimplicialComplex) -> list[dict[int, Fraction]]:
    """Rows of the linear map sending a table to its margins on the facets."""
    shape.check_complex(complex_)
    rows = []
    for face in complex_.facets:
        positions = [j - 1 for j in face.members]
        margin_shape = shape.restrict(face)
        face_rows: list[dict[int, Fraction]] = [{} for _ in range(margin_shape.size)]
        for column, cell in enumerate(shape.cells()):
            face_rows[margin_shape.offset([cell[p] for p in positions])][column] = Fraction(1)
        rows.extend(face_rows)
    return rows


def zero_margin_basis(shape: Shape, complex_: SimplicialComplex) -> list[Table]:
    """Exact basis of the tables whose margins on every face of the complex vanish."""
    echelon = EchelonForm(margin_map_rows(shape, complex_))
    return [
        Table(shape, tuple(vector.get(c, Fraction(0)) for c in range(shape.size)))
        for vector in echelon.nullspace(range(shape.size))
    ]


def sample_zero_margin_table(shape: Shape, complex_: SimplicialComplex, seed: int) -> Table:
    """Seeded combination of the zero-margin kernel basis.

    Returns the zero table exactly when the kernel is trivial.
    """
    rng = random.Random(seed)
    result = Table.zeros(shape)
    for basis_table in zero_margin_basis(shape, complex_):
        result = result + basis_table.scaled(rng.choice(Config.KERNEL_COEFFICIENTS))
    return result


def random_rank_one_table(shape: Shape, seed: int, max_weight: int = 9) -> Table:
    """Seeded rank-1 probability table: each factor has positive weights summing to 1."""
    rng = random.Random(seed)
    vectors = []
    for a in shape.dims:
        weights = [rng.randint(1, max_weight) for _ in range(a)]
        total = sum(weights)
        vectors.append([Fraction(w, total) for w in weights])
    return outer_product(vectors)


def random_table(shape: Shape, rng: random.Random, low: int = -5, high: int = 5,
                 denominator: Optional[int] = None) -> Table:
    """Table of random small rationals, for property tests and checks."""
    entries = []
    for _ in range(shape.size):
        value = Fraction(rng.randint(low, high))
        if denominator:
            value /= rng.randint(1, denominator)
        entries.append(value)
    return Table(shape, tuple(entries))
