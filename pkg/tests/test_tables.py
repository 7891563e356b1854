import random
from fractions import Fraction
from itertools import combinations

import pytest
from margalg.complexes import FaceSet, parse_facets
from margalg.errors import DegenerateTotal, ShapeMismatch
from margalg.ideals import segre_margin_gens
from margalg.tables import (
    PLUS, MarginSelector, Shape, Table, decompose, detect_complex, grand_total,
    independent_part, is_completely_independent, is_delta_independent, margin_entry,
    marginalize, outer_product, random_rank_one_table, random_table,
    sample_zero_margin_table, to_rational, zero_margin_basis,
)

SMALL_SHAPES = [(2, 2), (2, 3), (3, 2), (2, 2, 2), (3, 2, 2), (2, 2, 2, 2)]


class TestToRational:
    def test_accepts_exact_values(self):
        assert to_rational(3) == 3
        assert to_rational("3/4") == Fraction(3, 4)
        assert to_rational(Fraction(-1, 2)) == Fraction(-1, 2)

    def test_refuses_floats(self):
        with pytest.raises(ShapeMismatch):
            to_rational(0.5)

    def test_refuses_garbage(self):
        with pytest.raises(ShapeMismatch):
            to_rational("half")


class TestShape:
    def test_cells_are_row_major(self):
        assert list(Shape((2, 2)).cells()) == [(1, 1), (1, 2), (2, 1), (2, 2)]

    def test_parse(self):
        assert Shape.parse("2,3,4").dims == (2, 3, 4)
        assert Shape.parse("2,3").size == 6

    def test_rejects_zero_dimension(self):
        with pytest.raises(ShapeMismatch):
            Shape((2, 0))


class TestTable:
    def test_wrong_entry_count(self):
        with pytest.raises(ShapeMismatch):
            Table.create((2, 2), [1, 2, 3])

    def test_from_nested(self):
        table = Table.from_nested([[1, 2], [3, 4]])
        assert table.shape.dims == (2, 2)
        assert table[(2, 1)] == 3

    def test_ragged_nested(self):
        with pytest.raises(ShapeMismatch):
            Table.from_nested([[1, 2], [3]])

    def test_dict_round_trip(self):
        table = Table.create((2, 3), ["1/2", 0, -1, 2, "7/3", 5])
        assert Table.from_dict(table.to_dict()) == table


class TestMarginSelector:
    def test_for_face(self):
        assert MarginSelector.for_face(3, FaceSet.of([1, 3]), (2, 1)).slots == (2, PLUS, 1)

    def test_face_of_selector(self):
        assert MarginSelector.of([1, "+", 2]).face == FaceSet.of([1, 3])

    def test_margin_entry(self):
        table = Table.from_nested([[1, 2], [3, 4]])
        assert margin_entry(table, MarginSelector.of(["+", 2])) == 6
        assert margin_entry(table, MarginSelector.of(["+", "+"])) == 10

    def test_out_of_range_index(self):
        table = Table.from_nested([[1, 2], [3, 4]])
        with pytest.raises(ShapeMismatch):
            margin_entry(table, MarginSelector.of([3, "+"]))

    @pytest.mark.parametrize("slots", [("x", PLUS), (PLUS, "1"), (PLUS, None)])
    def test_unknown_slot_is_a_shape_error(self, slots):
        with pytest.raises(ShapeMismatch, match="neither an index"):
            MarginSelector(slots).check(Shape((2, 2)))

    def test_unreadable_slot(self):
        with pytest.raises(ShapeMismatch):
            MarginSelector.of(["x", "+"])


class TestMarginalize:
    def test_one_margins(self):
        table = Table.from_nested([[1, 2], [3, 4]])
        assert marginalize(table, FaceSet.of([1])).entries == (3, 7)
        assert marginalize(table, FaceSet.of([2])).entries == (4, 6)

    def test_empty_face_is_grand_total(self):
        table = Table.from_nested([[1, 2], [3, 4]])
        total = marginalize(table, FaceSet())
        assert total.shape.dims == ()
        assert total.entries == (10,)

    def test_full_face_is_identity(self):
        table = Table.from_nested([[[1, 2], [3, 4]], [[5, 6], [7, 8]]])
        assert marginalize(table, FaceSet.of([1, 2, 3])) == table

    def test_face_outside_shape(self):
        with pytest.raises(ShapeMismatch):
            marginalize(Table.from_nested([[1, 2], [3, 4]]), FaceSet.of([3]))

    def test_margins_compose(self):
        rng = random.Random(0)
        for _ in range(1000):
            shape = Shape(rng.choice(SMALL_SHAPES))
            table = random_table(shape, rng)
            outer = FaceSet.of(v for v in range(1, shape.n + 1) if rng.random() < 0.7)
            inner = FaceSet.of(v for v in outer if rng.random() < 0.5)
            positions = FaceSet.of(outer.members.index(v) + 1 for v in inner)
            assert marginalize(marginalize(table, outer), positions) == marginalize(table, inner)


class TestCompleteIndependence:
    def test_rank_one(self):
        assert is_completely_independent(outer_product([[1, 2], [3, 5], [1, 1]]))

    def test_not_rank_one(self):
        assert not is_completely_independent(Table.from_nested([[1, 2], [3, 4]]))

    def test_agrees_with_interchange_minors(self):
        rng = random.Random(1)
        for case in range(1000):
            shape = Shape(rng.choice(SMALL_SHAPES[:5]))
            if case % 2:
                table = outer_product([[rng.randint(-3, 3) for _ in range(a)] for a in shape.dims])
            else:
                table = random_table(shape, rng, -2, 2)
            minors = segre_margin_gens(shape, FaceSet(tuple(range(1, shape.n + 1)))).generators
            vanishes = all(m.evaluate(list(table.entries)) == 0 for m in minors)
            assert is_completely_independent(table) == vanishes

    def test_delta_independence(self, triangle):
        table = random_rank_one_table(Shape((2, 2, 2)), seed=3)
        assert is_delta_independent(table, triangle)

    def test_zero_margin_perturbation_keeps_delta_independence(self, triangle, two_facets):
        shape = Shape((2, 2, 2))
        for seed in range(200):
            complex_ = (triangle, two_facets)[seed % 2]
            base = random_rank_one_table(shape, seed)
            zero_part = sample_zero_margin_table(shape, complex_, seed)
            epsilon = Fraction(1, seed % 7 + 2)
            assert is_delta_independent(base + zero_part.scaled(epsilon), complex_)
            assert is_delta_independent(base + zero_part.scaled(-epsilon), complex_)

    def test_sub_margins_of_independent_margins_are_independent(self, triangle):
        rng = random.Random(4)
        for case in range(300):
            shape = Shape(rng.choice(SMALL_SHAPES))
            if case % 3 == 0:
                table = random_rank_one_table(shape, case)
            elif case % 3 == 1 and shape.n == 3:
                table = random_rank_one_table(shape, case) + sample_zero_margin_table(shape, triangle, case)
            else:
                table = random_table(shape, rng, 0, 2)
            for k in range(shape.n + 1):
                for face in combinations(range(1, shape.n + 1), k):
                    if not is_completely_independent(marginalize(table, FaceSet(face))):
                        continue
                    for m in range(k):
                        for sub in combinations(face, m):
                            assert is_completely_independent(marginalize(table, FaceSet(sub)))


class TestDecompose:
    def test_independent_part_normalizes(self):
        independent, zero_part = decompose(Table.from_nested([[1, 2], [3, 4]]))
        assert independent.entries == (Fraction(6, 5), Fraction(9, 5), Fraction(14, 5), Fraction(21, 5))
        assert zero_part.entries == (Fraction(-1, 5), Fraction(1, 5), Fraction(1, 5), Fraction(-1, 5))

    def test_strict_skips_division(self):
        independent = independent_part(Table.from_nested([[1, 2], [3, 4]]), strict=True)
        assert independent.entries == (12, 18, 28, 42)

    def test_zero_total(self):
        with pytest.raises(DegenerateTotal):
            decompose(Table.from_nested([[1, -1], [0, 0]]))

    def test_one_way_table(self):
        table = Table.create((3,), [1, 2, 3])
        assert independent_part(table) == table

    def test_parts_sum_back(self):
        rng = random.Random(2)
        for _ in range(1000):
            shape = Shape(rng.choice(SMALL_SHAPES))
            table = random_table(shape, rng, 1, 6, denominator=3)
            independent, zero_part = decompose(table)
            assert independent + zero_part == table
            assert grand_total(independent) == grand_total(table)
            assert is_completely_independent(independent)
            for j in range(1, shape.n + 1):
                assert marginalize(zero_part, FaceSet((j,))).is_zero()

    def test_rank_one_plus_zero_margin_is_recovered(self, triangle):
        shape = Shape((2, 2, 2))
        for seed in range(20):
            rank_one = random_rank_one_table(shape, seed)
            zero_part = sample_zero_margin_table(shape, triangle, seed)
            independent, residual = decompose(rank_one + zero_part)
            assert independent == rank_one
            assert residual == zero_part


class TestZeroMarginKernel:
    def test_triangle_kernel_is_one_dimensional(self, triangle):
        basis = zero_margin_basis(Shape((2, 2, 2)), triangle)
        assert len(basis) == 1
        for face in triangle.facets:
            assert marginalize(basis[0], face).is_zero()

    def test_full_simplex_kernel_is_trivial(self):
        complex_ = parse_facets("1,2")
        assert sample_zero_margin_table(Shape((2, 2)), complex_, seed=4).is_zero()

    def test_detect_complex(self, triangle):
        shape = Shape((2, 2, 2))
        table = random_rank_one_table(shape, 5) + sample_zero_margin_table(shape, triangle, 5)
        assert detect_complex(table) == triangle

    def test_detected_faces_are_the_independent_margins(self, triangle, two_facets):
        rng = random.Random(6)
        for case in range(200):
            shape = Shape(rng.choice([(2, 2, 2), (2, 2, 3), (3, 2, 2)]))
            if case % 3 == 2:
                table = random_table(shape, rng, 1, 9)
                table = table.scaled(1 / grand_total(table))
            else:
                complex_ = (triangle, two_facets)[case % 3]
                table = random_rank_one_table(shape, case) + sample_zero_margin_table(shape, complex_, case)
            assert grand_total(table) == 1
            detected = detect_complex(table)
            for k in range(shape.n + 1):
                for face in combinations(range(1, shape.n + 1), k):
                    face = FaceSet(face)
                    assert detected.contains(face) == is_completely_independent(marginalize(table, face))
