import random
from fractions import Fraction

import pytest
from margalg.errors import BudgetExceeded
from margalg.groebner import (
    StepBudget, buchberger, eliminate, ideal_member, intersect, is_groebner_basis,
    linear_member, radical_member, s_polynomial, same_ideal, saturate,
)
from margalg.poly import Ring


@pytest.fixture
def ring():
    return Ring.of("x,y")


def _random_polynomial(ring, rng, max_degree, terms):
    p = ring.zero()
    for _ in range(terms):
        mono = {i: 0 for i in range(ring.nvars)}
        for _ in range(rng.randint(0, max_degree)):
            mono[rng.randrange(ring.nvars)] += 1
        p = p + ring.monomial(mono, rng.choice([-3, -2, -1, 1, 2, 3]))
    return p


def _random_binomial(ring, rng, degree):
    monos = []
    for _ in range(2):
        mono = {i: 0 for i in range(ring.nvars)}
        for _ in range(degree):
            mono[rng.randrange(ring.nvars)] += 1
        monos.append(ring.monomial(mono))
    return monos[0] - rng.choice([1, 2]) * monos[1]


def _random_form(ring, rng, degree, terms):
    """Random homogeneous polynomial of the given degree."""
    p = ring.zero()
    for _ in range(terms):
        mono = {i: 0 for i in range(ring.nvars)}
        for _ in range(degree):
            mono[rng.randrange(ring.nvars)] += 1
        p = p + ring.monomial(mono, rng.choice([-2, -1, 1, 2, 3]))
    return p


class TestBuchberger:
    def test_lex_basis(self, ring):
        gens = [ring.parse("x^2 + y^2 - 1"), ring.parse("x - y")]
        basis = buchberger(gens, order="lex")
        assert {str(g) for g in basis.generators} == {"x - y", "y^2 - 1/2"}
        assert is_groebner_basis(basis)

    def test_unit_ideal(self, ring):
        basis = buchberger([ring.parse("x"), ring.parse("x - 1")])
        assert basis.is_unit()
        assert basis.generators == (ring.one(),)

    def test_normal_form(self, ring):
        basis = buchberger([ring.parse("x^2 - y")])
        assert basis.normal_form(ring.parse("x^3")) == ring.parse("x*y")

    def test_s_polynomial(self, ring):
        s = s_polynomial(ring.parse("x^2 - y"), ring.parse("x*y - 1"))
        assert s == ring.parse("x - y^2")

    def test_empty_generators_need_a_ring(self, ring):
        with pytest.raises(ValueError):
            buchberger([])
        assert buchberger([], ring=ring).generators == ()

    def test_budget_exhaustion_keeps_partial_basis(self, ring):
        with pytest.raises(BudgetExceeded) as info:
            buchberger([ring.parse("x^2 - y"), ring.parse("x*y - 1")], budget=0)
        assert info.value.steps == 1
        assert len(info.value.partial.generators) == 2

    def test_shared_budget_accumulates(self, ring):
        budget = StepBudget(10**6)
        buchberger([ring.parse("x^2 - y"), ring.parse("x*y - 1")], budget=budget)
        first = budget.used
        buchberger([ring.parse("x^2 - y"), ring.parse("x*y - 1")], budget=budget)
        assert first > 0
        assert budget.used == 2 * first

    def test_degree_limit_needs_homogeneous_input(self, ring):
        with pytest.raises(ValueError):
            buchberger([ring.parse("x^2 - y")], degree_limit=2)

    def test_truncated_basis_refuses_high_degree(self, ring):
        basis = buchberger([ring.parse("x^2 - y^2")], degree_limit=2)
        assert basis.contains(ring.parse("3*x^2 - 3*y^2"))
        with pytest.raises(ValueError):
            basis.contains(ring.parse("x^3"))

    def test_random_ideals(self):
        rng = random.Random(0)
        ring = Ring.of("x,y,z")
        for _ in range(1000):
            gens = [_random_polynomial(ring, rng, 2, rng.randint(1, 3)) for _ in range(rng.randint(1, 3))]
            gens = [g for g in gens if not g.is_zero()]
            if not gens:
                continue
            basis = buchberger(gens)
            assert is_groebner_basis(basis)
            member = ring.zero()
            for g in gens:
                assert basis.normal_form(g).is_zero()
                member = member + _random_polynomial(ring, rng, 1, 2) * g
            assert basis.contains(member)

    def test_normal_form_is_idempotent(self):
        rng = random.Random(3)
        ring = Ring.of("x,y,z")
        for _ in range(1000):
            gens = [_random_polynomial(ring, rng, 2, rng.randint(1, 3)) for _ in range(rng.randint(1, 3))]
            gens = [g for g in gens if not g.is_zero()]
            if not gens:
                continue
            basis = buchberger(gens)
            p = _random_polynomial(ring, rng, 3, 4)
            remainder = basis.normal_form(p)
            assert basis.normal_form(remainder) == remainder
            assert basis.contains(p - remainder)


class TestMembership:
    def test_ideal_member(self, ring):
        gens = [ring.parse("x^2 - y")]
        assert ideal_member(ring.parse("x^4 - y^2"), gens)
        assert not ideal_member(ring.parse("x"), gens)

    def test_zero_is_always_a_member(self, ring):
        assert ideal_member(ring.zero(), [])

    def test_radical_member(self, ring):
        assert radical_member(ring.parse("x"), [ring.parse("x^2")])
        assert not radical_member(ring.parse("y"), [ring.parse("x^2")])

    def test_same_ideal(self, ring):
        assert same_ideal([ring.parse("x + y"), ring.parse("x - y")], [ring.parse("x"), ring.parse("y")])
        assert not same_ideal([ring.parse("x")], [ring.parse("x^2")])

    def test_same_ideal_with_zero_ideals(self, ring):
        assert same_ideal([], [])
        assert same_ideal([ring.zero()], [])
        assert not same_ideal([], [ring.parse("x")])
        assert not same_ideal([ring.parse("x")], [ring.zero()])

    def test_linear_member_agrees_on_four_variables(self):
        rng = random.Random(2)
        ring = Ring.of("a,b,c,d")
        for case in range(1000):
            gens = [_random_form(ring, rng, rng.randint(1, 2), rng.randint(1, 3))
                    for _ in range(rng.randint(1, 3))]
            degree = rng.randint(1, 3)
            if case % 2:
                p = sum((_random_form(ring, rng, degree - g.degree(), 2) * g
                         for g in gens if 0 <= g.degree() <= degree), ring.zero())
            else:
                p = _random_form(ring, rng, degree, rng.randint(1, 4))
            if p.is_zero():
                continue
            assert linear_member(p, gens, p.degree()) == ideal_member(p, gens)

    def test_linear_member_agrees_on_homogeneous_input(self):
        rng = random.Random(1)
        ring = Ring.of("a,b,c")
        for case in range(1000):
            gens = [_random_binomial(ring, rng, 2) for _ in range(2)]
            if case % 2:
                p = sum((_random_polynomial(ring, rng, 0, 1) * ring.var(rng.randrange(3)) * g
                         for g in gens), ring.zero())
            else:
                p = _random_binomial(ring, rng, 3)
            assert linear_member(p, gens, 3) == ideal_member(p, gens)


class TestIdealOperations:
    def test_eliminate_twisted_cubic_curve(self):
        ring = Ring.of("t,x,y")
        gens = [ring.parse("x - t^2"), ring.parse("y - t^3")]
        assert eliminate(gens, ["t"]) == [ring.parse("x^3 - y^2")]

    def test_saturate(self, ring):
        assert saturate([ring.parse("x*y")], ring.parse("x")) == [ring.parse("y")]

    def test_saturate_by_zero(self, ring):
        with pytest.raises(ValueError):
            saturate([ring.parse("x")], ring.zero())

    def test_saturation_vanishes_off_the_saturating_hypersurface(self):
        rng = random.Random(5)
        ring = Ring.of("x,y,z")
        for _ in range(300):
            point = [Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(3)]
            shifted = [ring.var(i) - point[i] for i in range(3)]
            gens = [sum((_random_polynomial(ring, rng, 1, 2) * s for s in shifted), ring.zero())
                    for _ in range(2)]
            f = _random_polynomial(ring, rng, 1, 3)
            if f.is_zero() or f.evaluate(point) == 0:
                continue
            for g in saturate(gens, f):
                assert g.evaluate(point) == 0

    def test_intersect(self, ring):
        assert intersect([ring.parse("x")], [ring.parse("y")]) == [ring.parse("x*y")]

    def test_intersect_with_zero_ideal(self, ring):
        assert intersect([ring.parse("x")], []) == []
