"""Buchberger's algorithm and the ideal operations built on it.

Pairs are selected by the normal strategy (smallest lcm degree, then the term
order, then creation index) and pruned with the Gebauer-Moeller criteria, so a
run is fully deterministic. Every top-reduction and every processed pair costs
one step of a StepBudget; running out raises BudgetExceeded carrying the basis
built so far.
"""

import heapq
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from margalg.config import Config
from margalg.errors import BudgetExceeded, RingMismatch
from margalg.linalg import EchelonForm
from margalg.poly import Monomial, Polynomial, Ring, TermOrder, monomials_up_to

logger = logging.getLogger(__name__)


class StepBudget:
    """Cooperative step counter shared by the calls of one computation."""

    def __init__(self, limit: Optional[int] = None):
        self.limit = Config.DEFAULT_BUDGET if limit is None else int(limit)
        self.used = 0

    def tick(self, steps: int = 1) -> None:
        self.used += steps
        if self.used > self.limit:
            raise BudgetExceeded(f"step budget of {self.limit} exhausted", steps=self.used)

    @property
    def remaining(self) -> int:
        return max(self.limit - self.used, 0)


BudgetLike = Union[None, int, StepBudget]


def as_budget(budget: BudgetLike) -> StepBudget:
    return budget if isinstance(budget, StepBudget) else StepBudget(budget)


@dataclass(frozen=True)
class PartialBasis:
    """State of an interrupted Buchberger run."""

    generators: tuple[Polynomial, ...]
    pending_pairs: int

    def to_dict(self) -> dict:
        return {
            "generators": [str(g) for g in self.generators],
            "pending_pairs": self.pending_pairs,
        }


class _Element:
    """Monic basis element prepared for fast division."""

    __slots__ = ("lm", "tail", "support", "degree")

    def __init__(self, lm: Monomial, tail: list[tuple[Monomial, Fraction]]):
        self.lm = lm
        self.tail = tail
        self.support = [(i, e) for i, e in enumerate(lm) if e]
        self.degree = sum(lm)

    def divides(self, m: Monomial) -> bool:
        return all(m[i] >= e for i, e in self.support)

    def terms(self) -> dict[Monomial, Fraction]:
        terms = {self.lm: Fraction(1)}
        terms.update(self.tail)
        return terms


def _negated(key: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(-k for k in key)


def _lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def _divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _element(terms: dict[Monomial, Fraction], key) -> _Element:
    lm = max(terms, key=key)
    scale = terms[lm]
    tail = [(m, c / scale) for m, c in terms.items() if m != lm]
    tail.sort(key=lambda t: key(t[0]), reverse=True)
    return _Element(lm, tail)


def _reduce(terms: dict[Monomial, Fraction], basis: Sequence[_Element], key,
            budget: StepBudget) -> dict[Monomial, Fraction]:
    """Remainder of the full multivariate division of terms by basis."""
    terms = dict(terms)
    heap = [(_negated(key(m)), m) for m in terms]
    heapq.heapify(heap)
    queued = set(terms)
    remainder: dict[Monomial, Fraction] = {}
    while heap:
        _, m = heapq.heappop(heap)
        queued.discard(m)
        c = terms.pop(m, None)
        if c is None:
            continue
        divisor = next((g for g in basis if g.divides(m)), None)
        if divisor is None:
            remainder[m] = c
            continue
        budget.tick()
        shift = tuple(a - b for a, b in zip(m, divisor.lm))
        for gm, gc in divisor.tail:
            mm = tuple(a + b for a, b in zip(shift, gm))
            value = terms.get(mm, 0) - c * gc
            if value:
                terms[mm] = value
                if mm not in queued:
                    queued.add(mm)
                    heapq.heappush(heap, (_negated(key(mm)), mm))
            else:
                terms.pop(mm, None)
    return remainder


def _s_polynomial(f: _Element, g: _Element) -> dict[Monomial, Fraction]:
    lcm = _lcm(f.lm, g.lm)
    uf = tuple(a - b for a, b in zip(lcm, f.lm))
    ug = tuple(a - b for a, b in zip(lcm, g.lm))
    terms: dict[Monomial, Fraction] = {}
    for m, c in f.tail:
        mm = tuple(a + b for a, b in zip(uf, m))
        terms[mm] = terms.get(mm, 0) + c
    for m, c in g.tail:
        mm = tuple(a + b for a, b in zip(ug, m))
        value = terms.get(mm, 0) - c
        if value:
            terms[mm] = value
        else:
            terms.pop(mm, None)
    return {m: c for m, c in terms.items() if c}


@dataclass(frozen=True)
class GroebnerBasis:
    """A Groebner basis together with the order it was computed for.

    With degree_limit set the basis is truncated: it decides membership only
    for homogeneous polynomials of degree at most degree_limit.
    """

    ring: Ring
    generators: tuple[Polynomial, ...]
    reduced: bool = True
    degree_limit: Optional[int] = None
    steps: int = 0
    _elements: list = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        key = self.ring.key
        object.__setattr__(self, "_elements", [_element(g.terms, key) for g in self.generators])

    @property
    def order(self) -> TermOrder:
        return self.ring.order

    def is_unit(self) -> bool:
        return any(g.is_constant() and not g.is_zero() for g in self.generators)

    def normal_form(self, p: Polynomial, budget: BudgetLike = None) -> Polynomial:
        if not p.ring.same_variables(self.ring):
            raise RingMismatch("polynomial and basis live in different rings")
        remainder = _reduce(p.terms, self._elements, self.ring.key, as_budget(budget))
        return Polynomial(self.ring, remainder)

    def contains(self, p: Polynomial, budget: BudgetLike = None) -> bool:
        if self.degree_limit is not None and not (
                p.is_homogeneous() and p.degree() <= self.degree_limit):
            raise ValueError(
                f"basis truncated at degree {self.degree_limit} cannot decide {p}")
        return self.normal_form(p, budget).is_zero()

    def to_dict(self) -> dict:
        return {
            "order": self.order.kind,
            "reduced": self.reduced,
            "degree_limit": self.degree_limit,
            "generators": [str(g) for g in self.generators],
        }


def normal_form(p: Polynomial, basis: GroebnerBasis, budget: BudgetLike = None) -> Polynomial:
    return basis.normal_form(p, budget)


def s_polynomial(f: Polynomial, g: Polynomial, order: Optional[TermOrder] = None) -> Polynomial:
    ring = f.ring if order is None else f.ring.with_order(order)
    key = ring.key
    return Polynomial(ring, _s_polynomial(_element(f.terms, key), _element(g.terms, key)))


def _update(basis: list[_Element], active: list[int], pairs: set, h: int):
    """Gebauer-Moeller installation of element h into the active set and pair set."""
    mh = basis[h].lm

    candidates = list(active)
    kept: list[tuple[int, int]] = []
    for pos, g in enumerate(candidates):
        mg = basis[g].lm
        mhg = _lcm(mh, mg)
        coprime = mhg == tuple(a + b for a, b in zip(mh, mg))

        def lcm_divides(other: int) -> bool:
            return _divides(_lcm(mh, basis[other].lm), mhg)

        if coprime or (
                not any(lcm_divides(o) for o in candidates[pos + 1:])
                and not any(lcm_divides(o) for _, o in kept)):
            kept.append((h, g))

    new_pairs = set()
    for _, g in kept:
        mg = basis[g].lm
        if _lcm(mh, mg) != tuple(a + b for a, b in zip(mh, mg)):
            new_pairs.add((g, h))

    surviving = set()
    for i, j in pairs:
        mij = _lcm(basis[i].lm, basis[j].lm)
        if (not _divides(mh, mij)
                or _lcm(basis[i].lm, mh) == mij
                or _lcm(basis[j].lm, mh) == mij):
            surviving.add((i, j))

    new_active = [g for g in active if not _divides(mh, basis[g].lm)]
    new_active.append(h)
    return new_active, surviving, new_pairs


def buchberger(gens: Iterable[Polynomial], order: Union[None, str, TermOrder] = None,
               budget: BudgetLike = None, degree_limit: Optional[int] = None,
               ring: Optional[Ring] = None) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by gens.

    Args:
        gens: Generators, all in the same ring.
        order: Term order; defaults to the ring's own order.
        budget: Step limit or a shared StepBudget (defaults to config).
        degree_limit: For homogeneous generators, stop at this degree.
        ring: Ring to use when gens is empty.

    Raises:
        BudgetExceeded: With a PartialBasis when the budget runs out.
    """
    gens = [g for g in gens]
    if ring is None:
        if not gens:
            raise ValueError("buchberger needs a ring when no generators are given")
        ring = gens[0].ring
    for g in gens:
        if not g.ring.same_variables(ring):
            raise RingMismatch("generators live in different rings")
    if order is not None:
        ring = ring.with_order(order)
    budget = as_budget(budget)
    start = budget.used
    key = ring.key

    inputs = [g for g in gens if not g.is_zero()]
    if degree_limit is not None:
        if not all(g.is_homogeneous() for g in inputs):
            raise ValueError("degree-limited bases need homogeneous generators")
        inputs = [g for g in inputs if g.degree() <= degree_limit]
    inputs.sort(key=lambda g: key(max(g.terms, key=key)))

    basis: list[_Element] = []
    active: list[int] = []
    alive: set[tuple[int, int]] = set()
    heap: list = []

    def install(terms: dict[Monomial, Fraction]) -> bool:
        """Add a reduced nonzero element; True when it is a unit."""
        nonlocal active, alive
        element = _element(terms, key)
        basis.append(element)
        if not any(element.lm):
            return True
        active, alive, fresh = _update(basis, active, alive, len(basis) - 1)
        for i, j in fresh:
            lcm = _lcm(basis[i].lm, basis[j].lm)
            heapq.heappush(heap, (sum(lcm), key(lcm), j, i))
        alive |= fresh
        return False

    def finish(elements: list[_Element]) -> GroebnerBasis:
        generators = tuple(Polynomial(ring, e.terms()) for e in elements)
        return GroebnerBasis(ring, generators, True, degree_limit, budget.used - start)

    try:
        unit = False
        for g in inputs:
            terms = _reduce(g.terms, [basis[i] for i in active], key, budget)
            if terms and install(terms):
                unit = True
                break
        while heap and not unit:
            degree, _, j, i = heapq.heappop(heap)
            if (i, j) not in alive:
                continue
            if degree_limit is not None and degree > degree_limit:
                break
            alive.discard((i, j))
            budget.tick()
            s = _s_polynomial(basis[i], basis[j])
            terms = _reduce(s, [basis[k] for k in active], key, budget)
            if terms and install(terms):
                unit = True
        if unit:
            return finish([_Element((0,) * ring.nvars, [])])

        minimal = sorted((basis[i] for i in active), key=lambda e: key(e.lm))
        reduced = []
        for pos, e in enumerate(minimal):
            others = minimal[:pos] + minimal[pos + 1:]
            tail = _reduce(dict(e.tail), others, key, budget)
            reduced.append(_Element(e.lm, sorted(tail.items(), key=lambda t: key(t[0]), reverse=True)))
        reduced.sort(key=lambda e: key(e.lm), reverse=True)
    except BudgetExceeded as e:
        partial = PartialBasis(
            tuple(Polynomial(ring, basis[i].terms()) for i in active),
            len(alive),
        )
        logger.warning("Groebner basis interrupted after %d steps with %d elements",
                       budget.used - start, len(active))
        raise BudgetExceeded(str(e), steps=budget.used, partial=partial) from e

    logger.debug("Groebner basis of %d generators in %d variables: %d elements, %d steps",
                 len(inputs), ring.nvars, len(reduced), budget.used - start)
    return finish(reduced)


def is_groebner_basis(basis: GroebnerBasis) -> bool:
    """Every S-polynomial of every pair reduces to zero."""
    elements = basis._elements
    key = basis.ring.key
    budget = StepBudget(10**18)
    for i in range(len(elements)):
        for j in range(i + 1, len(elements)):
            if _reduce(_s_polynomial(elements[i], elements[j]), elements, key, budget):
                return False
    return True


def ideal_member(p: Polynomial, gens: Sequence[Polynomial], budget: BudgetLike = None) -> bool:
    """Decide p in <gens>, truncating the basis at deg p when everything is homogeneous."""
    if p.is_zero():
        return True
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return False
    homogeneous = p.is_homogeneous() and all(g.is_homogeneous() for g in gens)
    limit = p.degree() if homogeneous else None
    basis = buchberger(gens, budget=budget, degree_limit=limit, ring=p.ring)
    return basis.normal_form(p, budget).is_zero()


def _front_indices(ring: Ring, front: Iterable[Union[str, int]]) -> list[int]:
    indices = []
    for v in front:
        i = v if isinstance(v, int) else ring.index.get(v)
        if i is None:
            raise RingMismatch(f"no variable named {v!r} to eliminate")
        indices.append(i)
    return sorted(set(indices))


def eliminate(gens: Sequence[Polynomial], front: Iterable[Union[str, int]],
              budget: BudgetLike = None, ring: Optional[Ring] = None) -> list[Polynomial]:
    """Generators of <gens> intersected with the subring free of the front variables.

    The result is the part of a block-elimination Groebner basis that avoids
    the front block, written in the original ring.
    """
    gens = [g for g in gens if not g.is_zero()]
    if ring is None:
        if not gens:
            return []
        ring = gens[0].ring
    indices = _front_indices(ring, front)
    if not gens:
        return []
    order = TermOrder.block(indices) if indices else ring.order
    basis = buchberger(gens, order=order, budget=budget, ring=ring)
    kept = [g for g in basis.generators if not (g.support() & set(indices))]
    logger.debug("eliminated %d variables: %d of %d basis elements kept",
                 len(indices), len(kept), len(basis.generators))
    return [Polynomial(ring, g.terms) for g in kept]


def _with_extra_variable(ring: Ring) -> tuple[Ring, Polynomial]:
    extended = ring.extended([ring.fresh_name("w")])
    return extended, extended.var(0)


def _drop_extra(polys: Iterable[Polynomial], ring: Ring) -> list[Polynomial]:
    return [p.lift(ring) for p in polys]


def saturate(gens: Sequence[Polynomial], f: Polynomial, budget: BudgetLike = None) -> list[Polynomial]:
    """Generators of the saturation (<gens> : f^inf) via <gens, 1 - w*f>."""
    if f.is_zero():
        raise ValueError("cannot saturate by the zero polynomial")
    ring = f.ring
    extended, w = _with_extra_variable(ring)
    system = [g.lift(extended) for g in gens if not g.is_zero()]
    system.append(extended.one() - w * f.lift(extended))
    return _drop_extra(eliminate(system, [0], budget=budget, ring=extended), ring)


def intersect(gens_a: Sequence[Polynomial], gens_b: Sequence[Polynomial],
              budget: BudgetLike = None, ring: Optional[Ring] = None) -> list[Polynomial]:
    """Generators of the intersection via w*A + (1-w)*B, eliminating w."""
    gens_a = [g for g in gens_a if not g.is_zero()]
    gens_b = [g for g in gens_b if not g.is_zero()]
    if not gens_a or not gens_b:
        return []
    ring = ring or gens_a[0].ring
    extended, w = _with_extra_variable(ring)
    system = [w * g.lift(extended) for g in gens_a]
    system += [(extended.one() - w) * g.lift(extended) for g in gens_b]
    return _drop_extra(eliminate(system, [0], budget=budget, ring=extended), ring)


def radical_member(p: Polynomial, gens: Sequence[Polynomial], budget: BudgetLike = None) -> bool:
    """Rabinowitsch test: p is in the radical iff <gens, 1 - w*p> is the unit ideal."""
    if p.is_zero():
        return True
    ring = p.ring
    extended, w = _with_extra_variable(ring)
    system = [g.lift(extended) for g in gens if not g.is_zero()]
    system.append(extended.one() - w * p.lift(extended))
    return buchberger(system, budget=budget, ring=extended).is_unit()


def contains_ideal(basis: GroebnerBasis, gens: Iterable[Polynomial],
                   budget: BudgetLike = None) -> Optional[Polynomial]:
    """First generator not in the ideal of basis, or None when all are members."""
    for g in gens:
        if not basis.normal_form(g, budget).is_zero():
            return g
    return None


def same_ideal(gens_a: Sequence[Polynomial], gens_b: Sequence[Polynomial],
               budget: BudgetLike = None, ring: Optional[Ring] = None) -> bool:
    budget = as_budget(budget)
    gens_a = [g for g in gens_a if not g.is_zero()]
    gens_b = [g for g in gens_b if not g.is_zero()]
    if not gens_a or not gens_b:
        # a zero ideal only equals another zero ideal
        return not gens_a and not gens_b
    ring = ring or gens_a[0].ring
    basis_a = buchberger(gens_a, budget=budget, ring=ring)
    basis_b = buchberger(gens_b, budget=budget, ring=ring)
    return basis_a.generators == basis_b.generators


def linear_member(p: Polynomial, gens: Sequence[Polynomial], degree: int) -> bool:
    """Coefficient-space membership: p = sum c_i * g_i with deg(c_i * g_i) <= degree.

    Decides membership exactly for homogeneous inputs with degree = deg p;
    in general it is a one-sided certificate.
    """
    if p.is_zero():
        return True
    ring = p.ring
    echelon = EchelonForm()
    for g in gens:
        if g.is_zero() or g.degree() > degree:
            continue
        for mono in monomials_up_to(ring.nvars, degree - g.degree()):
            echelon.add({
                tuple(a + b for a, b in zip(mono, m)): c for m, c in g.terms.items()
            })
    return echelon.contains(p.terms)
