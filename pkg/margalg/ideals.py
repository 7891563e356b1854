"""Ring contexts and generator factories for the ideals attached to a complex.

Four kinds of ring appear:

* R(shape): one variable x[i_1,...,i_n] per table cell.
* S_Delta(shape, complex): one variable X[t_1,...,t_n] per entry of each
  margin A_J with J a face of the complex; t_j is an index on J and "+"
  elsewhere. Facet variables come first, then smaller faces.
* Y(shape): the Segre parameters y[j,i].
* Y-bullet(shape): the parameters y[j,i] plus one y[j,+] per slot.

Generator lists are deterministic and returned inside an IdealSpec, which
serializes to JSON with the canonical polynomial text.
"""

import logging
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations, combinations_with_replacement, product
from typing import Callable, Iterable, Optional, Sequence

from margalg.complexes import FaceSet, SimplicialComplex
from margalg.config import Config
from margalg.errors import FaceNotInComplex, RingMismatch, ShapeMismatch
from margalg.groebner import BudgetLike, as_budget, buchberger, eliminate
from margalg.linalg import EchelonForm, dense_rows, integer_kernel, nullspace
from margalg.poly import Monomial, Polynomial, Ring, monomials_of_degree
from margalg.tables import PLUS, MarginSelector, Shape

logger = logging.getLogger(__name__)

R_RING = "R"
S_RING = "S_Delta"
Y_RING = "Y"
Y_BULLET_RING = "Y_bullet"

_NAME = re.compile(r"^([A-Za-z_]+)\[([^\]]*)\]$")


def cell_name(letter: str, slots: Iterable) -> str:
    return f"{letter}[{','.join(str(s) for s in slots)}]"


def parse_cell(name: str) -> tuple[str, tuple]:
    """Split "X[1,+,2]" into ("X", (1, "+", 2))."""
    match = _NAME.match(name)
    if not match:
        raise RingMismatch(f"{name!r} is not a structured variable name")
    slots = tuple(
        PLUS if s.strip() == PLUS else int(s)
        for s in match.group(2).split(",") if s.strip()
    )
    return match.group(1), slots


def _face_of(slots: Sequence) -> FaceSet:
    return FaceSet(tuple(j + 1 for j, s in enumerate(slots) if s != PLUS))


def _face_cells(shape: Shape, face: FaceSet) -> list[tuple]:
    """Selectors sigma(J)_u for every index u on the face, row-major."""
    return [
        MarginSelector.for_face(shape.n, face, index).slots
        for index in shape.restrict(face).cells()
    ]


@dataclass(frozen=True)
class RingContext:
    """A structured polynomial ring: its kind, shape and (for S_Delta) complex."""

    kind: str
    shape: Shape
    complex: Optional[SimplicialComplex] = None
    facets_only: bool = False

    @cached_property
    def faces(self) -> tuple[FaceSet, ...]:
        if self.kind != S_RING:
            return ()
        faces = self.complex.facets if self.facets_only else self.complex.faces()
        return tuple(sorted(faces, key=lambda f: (-len(f), f.members)))

    @cached_property
    def cells(self) -> tuple[tuple, ...]:
        if self.kind == R_RING:
            return tuple(self.shape.cells())
        if self.kind == S_RING:
            return tuple(c for face in self.faces for c in _face_cells(self.shape, face))
        bullet = self.kind == Y_BULLET_RING
        cells = []
        for j, a in enumerate(self.shape.dims, start=1):
            cells.extend((j, i) for i in range(1, a + 1))
            if bullet:
                cells.append((j, PLUS))
        return tuple(cells)

    @property
    def letter(self) -> str:
        return {R_RING: "x", S_RING: "X"}.get(self.kind, "y")

    @cached_property
    def ring(self) -> Ring:
        return Ring(tuple(cell_name(self.letter, c) for c in self.cells))

    @cached_property
    def position(self) -> dict[tuple, int]:
        return {c: i for i, c in enumerate(self.cells)}

    def variable(self, cell: Sequence) -> Polynomial:
        i = self.position.get(tuple(cell))
        if i is None:
            raise FaceNotInComplex(f"no variable {cell_name(self.letter, cell)} in {self.kind}")
        return self.ring.var(i)

    def has_face(self, face: FaceSet) -> bool:
        return face in self.faces

    def face_variables(self, face: FaceSet) -> list[Polynomial]:
        if not self.has_face(face):
            raise FaceNotInComplex(f"face {face} is not among the {self.kind} faces")
        return [self.variable(c) for c in _face_cells(self.shape, face)]

    def to_dict(self) -> dict:
        data = {"ring": self.kind, "shape": list(self.shape.dims)}
        if self.complex is not None:
            data["complex"] = self.complex.to_dict()
        if self.facets_only:
            data["facets_only"] = True
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "RingContext":
        kind = data.get("ring", R_RING)
        shape = Shape.of(data["shape"])
        if kind == S_RING:
            complex_ = SimplicialComplex.from_dict(data["complex"])
            return s_context(shape, complex_, bool(data.get("facets_only", False)))
        if kind == R_RING:
            return r_context(shape)
        if kind == Y_RING:
            return y_context(shape)
        if kind == Y_BULLET_RING:
            return y_bullet_context(shape)
        raise RingMismatch(f"unknown ring kind {kind!r}")


@lru_cache(maxsize=None)
def r_context(shape: Shape) -> RingContext:
    return RingContext(R_RING, shape)


@lru_cache(maxsize=None)
def s_context(shape: Shape, complex_: SimplicialComplex, facets_only: bool = False) -> RingContext:
    shape.check_complex(complex_)
    return RingContext(S_RING, shape, complex_, facets_only)


@lru_cache(maxsize=None)
def y_context(shape: Shape) -> RingContext:
    return RingContext(Y_RING, shape)


@lru_cache(maxsize=None)
def y_bullet_context(shape: Shape) -> RingContext:
    return RingContext(Y_BULLET_RING, shape)


@dataclass(frozen=True)
class IdealSpec:
    """A named generator list living in a structured ring."""

    name: str
    context: RingContext
    generators: tuple[Polynomial, ...]
    face: Optional[FaceSet] = None
    descriptor: Optional[dict] = field(default=None, compare=False)

    @property
    def ring(self) -> Ring:
        return self.context.ring

    def __len__(self) -> int:
        return len(self.generators)

    def to_dict(self) -> dict:
        data = self.context.to_dict()
        data["name"] = self.name
        if self.face is not None:
            data["face"] = list(self.face.members)
        if self.descriptor is not None:
            data["descriptor"] = self.descriptor
        data["generators"] = [str(g) for g in self.generators]
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "IdealSpec":
        context = RingContext.from_dict(data)
        generators = tuple(context.ring.parse(text) for text in data.get("generators", []))
        face = FaceSet.of(data["face"]) if data.get("face") is not None else None
        return cls(data.get("name", "ideal"), context, generators, face, data.get("descriptor"))


def sign_normalized(p: Polynomial) -> Polynomial:
    """Flip the sign so the lexicographically smallest monomial is positive."""
    if p.is_zero():
        return p
    smallest = min(p.terms)
    return -p if p.terms[smallest] < 0 else p


def _deduplicated(polys: Iterable[Polynomial]) -> tuple[Polynomial, ...]:
    seen = set()
    result = []
    for p in polys:
        text = str(p)
        if text not in seen:
            seen.add(text)
            result.append(p)
    return tuple(result)


@lru_cache(maxsize=4096)
def margin_form(shape: Shape, slots: tuple) -> Polynomial:
    """The linear form x_sigma: the sum of the cells matching the selector."""
    MarginSelector(slots).check(shape)
    context = r_context(shape)
    ring = context.ring
    terms = {}
    ranges = [range(1, a + 1) if s == PLUS else (s,) for s, a in zip(slots, shape.dims)]
    for cell in product(*ranges):
        mono = [0] * ring.nvars
        mono[context.position[cell]] = 1
        terms[tuple(mono)] = Fraction(1)
    return Polynomial(ring, terms)


def _interchange_minors(margin_shape: Shape, entry: Callable[[tuple], Polynomial]) -> list[Polynomial]:
    """One-coordinate-interchange 2x2 minors of a table whose entries are given by entry."""
    cells = list(margin_shape.cells())
    minors = []
    for axis in range(margin_shape.n):
        for u, v in combinations(cells, 2):
            if u[axis] == v[axis]:
                continue
            u_swapped = u[:axis] + (v[axis],) + u[axis + 1:]
            v_swapped = v[:axis] + (u[axis],) + v[axis + 1:]
            if u_swapped == v:
                continue
            minor = entry(u) * entry(v) - entry(u_swapped) * entry(v_swapped)
            if not minor.is_zero():
                minors.append(sign_normalized(minor))
    return list(_deduplicated(minors))


def _selector(shape: Shape, face: FaceSet, index: Sequence[int]) -> tuple:
    return MarginSelector.for_face(shape.n, face, index).slots


def segre_margin_gens(shape: Shape, face: FaceSet) -> IdealSpec:
    """Segre minors of the margin A_J with each entry expanded as a sum of cells."""
    shape.check_face(face)
    minors = _interchange_minors(
        shape.restrict(face), lambda u: margin_form(shape, _selector(shape, face, u)))
    return IdealSpec("Segre", r_context(shape), tuple(minors), face)


def segre_margin_gens_s(shape: Shape, complex_: SimplicialComplex, face: FaceSet) -> IdealSpec:
    """The same minors written in the S_Delta symbols of the face."""
    context = s_context(shape, complex_)
    if not context.has_face(face):
        raise FaceNotInComplex(f"face {face} is not in {complex_}")
    minors = _interchange_minors(
        shape.restrict(face), lambda u: context.variable(_selector(shape, face, u)))
    return IdealSpec("Segre", context, tuple(minors), face)


def i_delta_gens(shape: Shape, complex_: SimplicialComplex) -> IdealSpec:
    shape.check_complex(complex_)
    gens = []
    for facet in complex_.facets:
        gens.extend(segre_margin_gens(shape, facet).generators)
    return IdealSpec("I_Delta", r_context(shape), _deduplicated(gens))


def i_delta_gens_s(shape: Shape, complex_: SimplicialComplex) -> IdealSpec:
    """I_Delta pushed to S_Delta, each minor written in its facet's symbols."""
    gens = []
    for facet in complex_.facets:
        gens.extend(segre_margin_gens_s(shape, complex_, facet).generators)
    return IdealSpec("I_Delta", s_context(shape, complex_), _deduplicated(gens))


def l_gens(shape: Shape, face: FaceSet) -> IdealSpec:
    """Linear forms x_sigma for every selector with face J; J = {} gives the grand total."""
    shape.check_face(face)
    forms = tuple(margin_form(shape, s) for s in _face_cells(shape, face))
    return IdealSpec("L", r_context(shape), forms, face)


def l_gens_s(shape: Shape, complex_: SimplicialComplex, face: FaceSet,
             facets_only: bool = False) -> IdealSpec:
    """The S_Delta symbols X[sigma] of the face.

    Raises:
        FaceNotInComplex: If the face has no symbols in S_Delta.
    """
    context = s_context(shape, complex_, facets_only)
    return IdealSpec("L", context, tuple(context.face_variables(face)), face)


def l_hat_gens(shape: Shape, complex_: SimplicialComplex, facets: Iterable[FaceSet],
               vertex: int) -> IdealSpec:
    """Sum over the given facets F of the S_Delta symbols of F minus the vertex."""
    context = s_context(shape, complex_)
    gens = []
    for facet in facets:
        gens.extend(context.face_variables(facet.without(vertex)))
    return IdealSpec("L_hat", context, _deduplicated(gens), FaceSet((vertex,)))


@dataclass(frozen=True)
class KDeltaCounts:
    variables: int
    raw_generators: int
    minimal_generators: int
    t_dimension: int

    def to_dict(self) -> dict:
        return {
            "variables": self.variables,
            "raw_generators": self.raw_generators,
            "minimal_generators": self.minimal_generators,
            "t_dimension": self.t_dimension,
        }


def k_delta_gens(shape: Shape, complex_: SimplicialComplex,
                 facets_only: bool = False) -> tuple[IdealSpec, KDeltaCounts]:
    """The compatibility relations R_{J,K} for every unordered pair of faces.

    Each relation equates the J-margin and the K-margin restricted to an index
    assignment on J and K's intersection. The counts report the rank of the
    relations and the dimension of the quotient T_Delta.
    """
    context = s_context(shape, complex_, facets_only)
    ring = context.ring
    relations = []
    echelon = EchelonForm()
    for a, b in combinations(context.faces, 2):
        common = a.intersection(b)
        positions = [j - 1 for j in common.members]
        for w in shape.restrict(common).cells():
            terms: dict[Monomial, Fraction] = {}
            for face, sign in ((a, 1), (b, -1)):
                for slots in _face_cells(shape, face):
                    if all(slots[p] == i for p, i in zip(positions, w)):
                        mono = [0] * ring.nvars
                        mono[context.position[slots]] = 1
                        mono = tuple(mono)
                        terms[mono] = terms.get(mono, 0) + sign
            relation = Polynomial(ring, terms)
            relations.append(relation)
            echelon.add({m.index(1): c for m, c in relation.terms.items()})
    counts = KDeltaCounts(
        variables=ring.nvars,
        raw_generators=len(relations),
        minimal_generators=echelon.rank,
        t_dimension=ring.nvars - echelon.rank,
    )
    logger.debug("K_Delta for %s on %s: %s", complex_, shape, counts)
    return IdealSpec("K_Delta", context, tuple(relations)), counts


@lru_cache(maxsize=None)
def _eta_monomial(shape: Shape, slots: tuple) -> Polynomial:
    context = y_bullet_context(shape)
    image = context.ring.one()
    for j, s in enumerate(slots, start=1):
        image = image * context.variable((j, s))
    return image


@lru_cache(maxsize=None)
def _sigma_image(shape: Shape, slots: tuple) -> Polynomial:
    context = y_context(shape)
    image = context.ring.one()
    for j, s in enumerate(slots, start=1):
        if s == PLUS:
            factor = context.ring.zero()
            for i in range(1, shape.dims[j - 1] + 1):
                factor = factor + context.variable((j, i))
        else:
            factor = context.variable((j, s))
        image = image * factor
    return image


def _image(p: Polynomial, shape: Shape, image_of: Callable[[Shape, tuple], Polynomial],
           target: Ring) -> Polynomial:
    mapping = {}
    for i in p.support():
        _, slots = parse_cell(p.ring.names[i])
        if len(slots) != shape.n:
            raise ShapeMismatch(f"variable {p.ring.names[i]} does not fit shape {shape}")
        mapping[i] = image_of(shape, slots)
    return p.substitute(mapping, target)


def eta_image(p: Polynomial, shape: Shape) -> Polynomial:
    """X[sigma] -> product of y[j, sigma_j], with y[j,+] for summed slots."""
    return _image(p, shape, _eta_monomial, y_bullet_context(shape).ring)


def sigma_delta_image(p: Polynomial, shape: Shape) -> Polynomial:
    """X[sigma] -> product over the slots of y[j, sigma_j] or of the sum of y[j, *].

    Cell variables x[i] of R map to the Segre monomial, so the same map serves
    as the Segre parameterization.
    """
    return _image(p, shape, _sigma_image, y_context(shape).ring)


def tau_delta_image(p: Polynomial, shape: Shape) -> Polynomial:
    """X[sigma] -> the linear form x_sigma in R."""
    return _image(p, shape, margin_form, r_context(shape).ring)


def p_delta_member(p: Polynomial, shape: Shape) -> bool:
    """Exact kernel test for sigma_Delta."""
    return sigma_delta_image(p, shape).is_zero()


def monomial_map_kernel(source: Ring, images: Sequence[Polynomial],
                        budget: BudgetLike = None) -> list[Polynomial]:
    """Kernel of the ring map sending source variable k to images[k].

    Built as <X_k - image_k> in the joint ring with the parameters in front,
    followed by elimination of the parameters.
    """
    if len(images) != source.nvars:
        raise RingMismatch("one image per source variable is required")
    target = images[0].ring if images else Ring(())
    joint = Ring(target.names + source.names)
    front = range(target.nvars)
    system = []
    for k, image in enumerate(images):
        system.append(joint.var(target.nvars + k) - image.lift(joint))
    kernel = eliminate(system, front, budget=budget, ring=joint)
    return [p.lift(source) for p in kernel]


def _lattice_binomial(ring: Ring, vector: Sequence[Fraction]) -> Polynomial:
    positive = tuple(int(v) if v > 0 else 0 for v in vector)
    negative = tuple(int(-v) if v < 0 else 0 for v in vector)
    return Polynomial(ring, {positive: 1, negative: -1})


def _divided_by_last(p: Polynomial) -> Polynomial:
    last = p.ring.nvars - 1
    power = min(m[last] for m in p.terms)
    if not power:
        return p
    return Polynomial(p.ring, {m[:last] + (m[last] - power,): c for m, c in p.terms.items()})


def toric_kernel(source: Ring, images: Sequence[Polynomial],
                 budget: BudgetLike = None) -> list[Polynomial]:
    """Reduced Groebner basis of the kernel of a monomial map.

    The binomials of an integer kernel basis of the exponent matrix are
    saturated by one variable at a time: a grevlex basis with that variable
    last, divided by its largest power, generates the saturation of a
    homogeneous ideal. Images that are not monic monomials of one degree fall
    back to monomial_map_kernel.
    """
    if len(images) != source.nvars:
        raise RingMismatch("one image per source variable is required")
    budget = as_budget(budget)
    if not images:
        return []
    monic = all(len(img.terms) == 1 and next(iter(img.terms.values())) == 1 for img in images)
    if not monic or len({img.degree() for img in images}) > 1:
        return monomial_map_kernel(source, images, budget)
    exponents = [next(iter(img.terms)) for img in images]
    matrix = [[e[p] for e in exponents] for p in range(len(exponents[0]))]
    lattice = nullspace(dense_rows(matrix), source.nvars)
    if any(v.denominator != 1 for vector in lattice for v in vector):
        logger.debug("rational kernel basis is not integral; using column operations")
        lattice = integer_kernel(matrix, source.nvars)
    gens = [_lattice_binomial(source, vector) for vector in lattice]
    names = source.names
    for i, name in enumerate(names):
        if not gens:
            break
        ring = Ring(names[:i] + names[i + 1:] + (name,))
        basis = buchberger([g.lift(ring) for g in gens], budget=budget, ring=ring)
        gens = [_divided_by_last(g) for g in basis.generators]
    basis = buchberger([g.lift(source) for g in gens], budget=budget, ring=source)
    return list(basis.generators)


# (shape, complex) -> (generators, steps the computation cost)
_Q_CACHE: dict[tuple, tuple[tuple[Polynomial, ...], int]] = {}


def q_delta_gens(shape: Shape, complex_: SimplicialComplex, degree_cap: Optional[int] = None,
                 budget: BudgetLike = None) -> IdealSpec:
    """Generators of the toric ideal Q_Delta = ker eta_Delta.

    By default the reduced grevlex basis from toric_kernel is returned. It is
    cached per process, and a cache hit still charges the budget the steps of
    the original run. With degree_cap the binomials of degree <= cap with
    equal eta-images are listed instead; that set need not generate Q_Delta.
    """
    context = s_context(shape, complex_)
    ring = context.ring
    images = [_eta_monomial(shape, c) for c in context.cells]
    if degree_cap is not None:
        exponents = [next(iter(img.terms)) for img in images]
        gens = []
        for degree in range(2, degree_cap + 1):
            fibers: dict[Monomial, list[Monomial]] = {}
            for mono in monomials_of_degree(ring.nvars, degree):
                key = [0] * len(exponents[0])
                for i, e in enumerate(mono):
                    if e:
                        key = [k + e * x for k, x in zip(key, exponents[i])]
                fibers.setdefault(tuple(key), []).append(mono)
            for members in fibers.values():
                first = members[0]
                for other in members[1:]:
                    gens.append(sign_normalized(Polynomial(ring, {first: 1, other: -1})))
        return IdealSpec("Q_Delta", context, _deduplicated(gens),
                         descriptor={"degree_cap": degree_cap})
    budget = as_budget(budget)
    key = (shape, complex_)
    cached = _Q_CACHE.get(key)
    if cached is None:
        start = budget.used
        kernel = toric_kernel(ring, images, budget=budget)
        cached = (tuple(sign_normalized(p) for p in kernel), budget.used - start)
        _Q_CACHE[key] = cached
        logger.info("Q_Delta for %s on %s: %d generators in %d steps",
                    complex_, shape, len(kernel), cached[1])
    else:
        budget.tick(cached[1])
    return IdealSpec("Q_Delta", context, cached[0])


@dataclass(frozen=True)
class JBinomial:
    """A J_Delta generator together with the faces its symbols are paired in."""

    polynomial: Polynomial
    first_face: FaceSet
    second_face: FaceSet


def j_delta_binomials(shape: Shape, complex_: SimplicialComplex) -> list[JBinomial]:
    """Degree-2 binomials of ker eta_Delta whose symbols pair up inside margins.

    X_a X_b - X_c X_d qualifies when, for one of the two pairings, the faces of
    the paired symbols together form a face of the complex, so both symbols are
    entries of that margin or of its sub-margins.
    """
    context = s_context(shape, complex_)
    ring = context.ring
    cells = context.cells
    faces = [_face_of(c) for c in cells]
    etas = [next(iter(_eta_monomial(shape, c).terms)) for c in cells]

    def together(i: int, k: int) -> Optional[FaceSet]:
        union = faces[i].union(faces[k])
        return union if complex_.contains(union) else None

    fibers: dict[tuple, list[tuple[int, int]]] = {}
    for a, b in combinations_with_replacement(range(ring.nvars), 2):
        image = tuple(x + y for x, y in zip(etas[a], etas[b]))
        fibers.setdefault(image, []).append((a, b))

    found = []
    for members in fibers.values():
        for (a, b), (c, d) in combinations(members, 2):
            for left, right in (((a, c), (b, d)), ((a, d), (b, c))):
                first = together(*left)
                second = together(*right) if first is not None else None
                if first is not None and second is not None:
                    binomial = ring.var(a) * ring.var(b) - ring.var(c) * ring.var(d)
                    found.append(JBinomial(sign_normalized(binomial), first, second))
                    break
    seen = set()
    unique = []
    for item in found:
        text = str(item.polynomial)
        if text not in seen:
            seen.add(text)
            unique.append(item)
    return unique


def j_delta_gens(shape: Shape, complex_: SimplicialComplex) -> IdealSpec:
    binomials = j_delta_binomials(shape, complex_)
    return IdealSpec("J_Delta", s_context(shape, complex_),
                     tuple(b.polynomial for b in binomials))


def kq_gens(shape: Shape, complex_: SimplicialComplex, budget: BudgetLike = None) -> tuple[Polynomial, ...]:
    """K_Delta + Q_Delta, whose radical is P_Delta."""
    k_spec, _ = k_delta_gens(shape, complex_)
    return k_spec.generators + q_delta_gens(shape, complex_, budget=budget).generators


def sigma_kernel(shape: Shape, complex_: SimplicialComplex, degree: int) -> list[Polynomial]:
    """Basis of the degree-d homogeneous part of P_Delta, by linear algebra.

    Columns are the degree-d monomials of S_Delta, rows the monomials of their
    sigma_Delta-images; the nullspace is read back as polynomials.
    """
    context = s_context(shape, complex_)
    ring = context.ring
    monomials = list(monomials_of_degree(ring.nvars, degree))
    variable_images = [_sigma_image(shape, c) for c in context.cells]
    rows: dict[Monomial, dict[int, Fraction]] = {}
    for column, mono in enumerate(monomials):
        image = y_context(shape).ring.one()
        for i, e in enumerate(mono):
            if e:
                image = image * variable_images[i] ** e
        for m, c in image.terms.items():
            rows.setdefault(m, {})[column] = c
    echelon = EchelonForm(rows[m] for m in sorted(rows))
    kernel = []
    for vector in echelon.nullspace(range(len(monomials))):
        kernel.append(Polynomial(ring, {monomials[c]: v for c, v in vector.items()}))
    return kernel


def coprime_point(nvars: int, rng: random.Random) -> list[Fraction]:
    """Coordinates from 1 and the primes up to JACOBIAN_SAMPLE_MAX, in seeded order.

    The first coordinates are pairwise coprime and distinct; once that pool
    is used up the rest are drawn from 1..JACOBIAN_SAMPLE_MAX.
    """
    top = Config.JACOBIAN_SAMPLE_MAX
    pool = [1] + [p for p in range(2, top + 1) if all(p % d for d in range(2, int(p ** 0.5) + 1))]
    rng.shuffle(pool)
    extra = [rng.randint(1, top) for _ in range(max(nvars - len(pool), 0))]
    return [Fraction(c) for c in (pool + extra)[:nvars]]


def dim_via_jacobian(param: Sequence[Polynomial], seed: int) -> int:
    """Rank of the Jacobian of a parameterization at a seeded point.

    Two independent coprime points (see coprime_point) are tried and the
    larger rank is returned.
    """
    if not param:
        raise ValueError("dim_via_jacobian needs at least one polynomial")
    ring = param[0].ring
    rng = random.Random(seed)
    partials = [[p.derivative(v) for v in range(ring.nvars)] for p in param]
    best = 0
    for _ in range(2):
        point = coprime_point(ring.nvars, rng)
        echelon = EchelonForm()
        for row in partials:
            echelon.add({v: d.evaluate(point) for v, d in enumerate(row) if not d.is_zero()})
        best = max(best, echelon.rank)
    return best


def segre_parameterization(shape: Shape) -> list[Polynomial]:
    """sigma images of the cell variables of R: x[i] -> prod y[j, i_j]."""
    return [_sigma_image(shape, c) for c in r_context(shape).cells]


def eta_parameterization(shape: Shape, complex_: SimplicialComplex,
                         facets_only: bool = True) -> list[Polynomial]:
    """eta images of the facet symbols, or of every face symbol with facets_only=False."""
    return [_eta_monomial(shape, c) for c in s_context(shape, complex_, facets_only).cells]


def sigma_parameterization(shape: Shape, complex_: SimplicialComplex) -> list[Polynomial]:
    return [_sigma_image(shape, c) for c in s_context(shape, complex_).cells]


def expected_dimension(shape: Shape) -> int:
    """1 - n + sum a_i, the dimension of T_Delta / P_Delta when every vertex is covered."""
    return 1 - shape.n + sum(shape.dims)


def plus_minor(shape: Shape, u: Sequence, v: Sequence, axis: int) -> Polynomial:
    """Interchange minor along axis of two selectors, "+" slots expanded as sums.

    axis is 1-based and must hold concrete indices in both selectors.
    """
    u, v = tuple(u), tuple(v)
    k = axis - 1
    if u[k] == PLUS or v[k] == PLUS:
        raise ShapeMismatch("the interchanged coordinate must be concrete in both selectors")
    u_swapped = u[:k] + (v[k],) + u[k + 1:]
    v_swapped = v[:k] + (u[k],) + v[k + 1:]
    return (margin_form(shape, u) * margin_form(shape, v)
            - margin_form(shape, u_swapped) * margin_form(shape, v_swapped))


def _completions(shape: Shape, slots: tuple) -> list[tuple]:
    ranges = [range(1, a + 1) if s == PLUS else (s,) for s, a in zip(slots, shape.dims)]
    return list(product(*ranges))


def telescoped_plus_minor(shape: Shape, u: Sequence, v: Sequence, axis: int) -> Polynomial:
    """The same minor as a sum of ordinary cell minors, one per completion of the "+" slots."""
    k = axis - 1
    ring = r_context(shape).ring
    total = ring.zero()
    for cu in _completions(shape, tuple(u)):
        for cv in _completions(shape, tuple(v)):
            cu_swapped = cu[:k] + (cv[k],) + cu[k + 1:]
            cv_swapped = cv[:k] + (cu[k],) + cv[k + 1:]
            total = total + (margin_form(shape, cu) * margin_form(shape, cv)
                             - margin_form(shape, cu_swapped) * margin_form(shape, cv_swapped))
    return total


def grand_total_form(shape: Shape) -> Polynomial:
    return margin_form(shape, (PLUS,) * shape.n)
