"""Minimal primes over I_Delta as symbolic component descriptors.

A descriptor partitions the facets into groups and gives each group a witness
set K contained in every facet of the group and meeting every foreign facet's
complement. Its component is the sum of the groups' P-ideals plus the
symbols L_{F - k} for F in the group and k in the witness, all in S_Delta
together with K_Delta.
"""

import logging
from dataclasses import dataclass, replace
from itertools import combinations, product
from typing import Iterator, Optional, Sequence

from margalg.complexes import FaceSet, SimplicialComplex, vertex_covers
from margalg.config import Config
from margalg.errors import CapExceeded
from margalg.groebner import BudgetLike, as_budget, buchberger, radical_member
from margalg.ideals import (
    IdealSpec,
    i_delta_gens_s,
    k_delta_gens,
    kq_gens,
    l_gens_s,
    l_hat_gens,
    s_context,
    segre_margin_gens_s,
)
from margalg.poly import Polynomial
from margalg.tables import PLUS, Shape

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ComponentDescriptor:
    """Facet groups (0-based facet indices) and one witness set per group."""

    partition: tuple[tuple[int, ...], ...]
    witnesses: tuple[FaceSet, ...]
    minimal: Optional[bool] = None

    def is_trivial(self) -> bool:
        return len(self.partition) == 1

    def killed_faces(self, complex_: SimplicialComplex) -> list[FaceSet]:
        """Faces F - k whose symbols the component sets to zero."""
        faces = []
        for group, witness in zip(self.partition, self.witnesses):
            for k in witness:
                for i in group:
                    face = complex_.facets[i].without(k)
                    if face not in faces:
                        faces.append(face)
        return faces

    def label(self, complex_: SimplicialComplex) -> str:
        groups = []
        for group, witness in zip(self.partition, self.witnesses):
            facets = ",".join(complex_.facets[i].label() for i in group)
            groups.append(f"[{facets}|K={witness.label()}]")
        return " + ".join(groups)

    def to_dict(self) -> dict:
        data = {
            "partition": [list(g) for g in self.partition],
            "witnesses": [list(w.members) for w in self.witnesses],
        }
        if self.minimal is not None:
            data["minimal"] = self.minimal
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "ComponentDescriptor":
        return cls(
            tuple(tuple(int(i) for i in g) for g in data["partition"]),
            tuple(FaceSet.of(w) for w in data["witnesses"]),
            data.get("minimal"),
        )


def set_partitions(m: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """All partitions of range(m) as restricted growth strings, the single block first."""
    if m == 0:
        yield ()
        return

    def grow(prefix: list[int], top: int):
        if len(prefix) == m:
            blocks: dict[int, list[int]] = {}
            for i, b in enumerate(prefix):
                blocks.setdefault(b, []).append(i)
            yield tuple(tuple(blocks[b]) for b in sorted(blocks))
            return
        for b in range(top + 2):
            yield from grow(prefix + [b], max(top, b))

    yield from grow([0], 0)


def _minimal_hitting_sets(universe: FaceSet, sets: Sequence[set]) -> list[FaceSet]:
    found: list[set] = []
    for k in range(len(universe) + 1):
        for candidate in combinations(universe.members, k):
            chosen = set(candidate)
            if not all(s & chosen for s in sets):
                continue
            if any(f <= chosen for f in found):
                continue
            found.append(chosen)
    return [FaceSet.of(f) for f in found]


def _group_witnesses(complex_: SimplicialComplex, group: tuple[int, ...]) -> list[FaceSet]:
    facets = complex_.facets
    common = facets[group[0]]
    for i in group[1:]:
        common = common.intersection(facets[i])
    foreign = [facets[j] for j in range(len(facets)) if j not in group]
    if not foreign:
        return [FaceSet()]
    required = [set(common.difference(f).members) for f in foreign]
    if any(not r for r in required):
        return []
    return _minimal_hitting_sets(common, required)


def minimal_prime_candidates(shape: Shape, complex_: SimplicialComplex) -> list[ComponentDescriptor]:
    """Every descriptor whose groups admit a witness, with minimal witnesses only.

    The single-block partition comes first and stands for P_Delta.

    Raises:
        CapExceeded: If the complex has more facets than the enumeration cap.
    """
    shape.check_complex(complex_)
    m = len(complex_.facets)
    if m > Config.CANDIDATE_FACET_CAP:
        logger.warning("minimal prime enumeration refused: %d facets (cap %d)",
                       m, Config.CANDIDATE_FACET_CAP)
        raise CapExceeded(f"{m} facets exceed the enumeration cap of {Config.CANDIDATE_FACET_CAP}")
    descriptors = []
    for partition in set_partitions(m):
        options = [_group_witnesses(complex_, group) for group in partition]
        if any(not o for o in options):
            continue
        for witnesses in product(*options):
            descriptors.append(ComponentDescriptor(partition, tuple(witnesses)))
    logger.debug("%d minimal prime candidates for %s", len(descriptors), complex_)
    return descriptors


def _embedded(polys: Sequence[Polynomial], target) -> list[Polynomial]:
    return [p.lift(target) for p in polys]


def group_prime_gens(shape: Shape, complex_: SimplicialComplex, facets: Sequence[FaceSet],
                     budget: BudgetLike = None) -> list[Polynomial]:
    """Generators, in S_Delta of the whole complex, of P for the sub-complex on facets.

    A single facet gives its Segre minors; larger groups give K + Q of the
    sub-complex, which generate P up to radical.
    """
    ring = s_context(shape, complex_).ring
    if len(facets) == 1:
        return list(segre_margin_gens_s(shape, complex_, facets[0]).generators)
    sub = SimplicialComplex(complex_.n, tuple(sorted(facets, key=FaceSet.sort_key)))
    return _embedded(kq_gens(shape, sub, budget=budget), ring)


def render_component(desc: ComponentDescriptor, shape: Shape, complex_: SimplicialComplex,
                     budget: BudgetLike = None) -> IdealSpec:
    k_spec, _ = k_delta_gens(shape, complex_)
    gens = list(k_spec.generators)
    for group, witness in zip(desc.partition, desc.witnesses):
        facets = [complex_.facets[i] for i in group]
        gens.extend(group_prime_gens(shape, complex_, facets, budget))
        for k in witness:
            gens.extend(l_hat_gens(shape, complex_, facets, k).generators)
    return IdealSpec("P_component", k_spec.context, _unique(gens), descriptor=desc.to_dict())


def _unique(gens: Sequence[Polynomial]) -> tuple[Polynomial, ...]:
    seen = set()
    result = []
    for g in gens:
        if g.is_zero():
            continue
        text = str(g)
        if text not in seen:
            seen.add(text)
            result.append(g)
    return tuple(result)


def _radically_contains(container: IdealSpec, basis, gens: Sequence[Polynomial], budget) -> bool:
    for g in gens:
        if basis.normal_form(g, budget).is_zero():
            continue
        if not radical_member(g, container.generators, budget=budget):
            return False
    return True


def minimal_primes(shape: Shape, complex_: SimplicialComplex,
                   budget: BudgetLike = None) -> list[tuple[ComponentDescriptor, IdealSpec]]:
    """Candidates with their rendered ideals, each flagged minimal or not.

    A candidate is not minimal when another candidate's component lies in its
    radical; of two components with equal radicals the earlier one is kept.
    """
    budget = as_budget(budget)
    descriptors = minimal_prime_candidates(shape, complex_)
    rendered = [render_component(d, shape, complex_, budget) for d in descriptors]
    bases = [buchberger(r.generators, budget=budget, ring=r.ring) for r in rendered]

    contains = {}

    def inside(a: int, b: int) -> bool:
        """Component a lies in the radical of component b."""
        if (a, b) not in contains:
            contains[(a, b)] = _radically_contains(rendered[b], bases[b], rendered[a].generators, budget)
        return contains[(a, b)]

    flagged = []
    for i, desc in enumerate(descriptors):
        minimal = True
        for j in range(len(descriptors)):
            if j == i or not inside(j, i):
                continue
            if not inside(i, j) or j < i:
                minimal = False
                break
        flagged.append(replace(desc, minimal=minimal))
        logger.debug("component %s minimal=%s", desc.label(complex_), minimal)
    return list(zip(flagged, rendered))


def graph_component(shape: Shape, complex_: SimplicialComplex, cover: FaceSet,
                    budget: BudgetLike = None) -> IdealSpec:
    """The component sum_{j in cover} P_{Delta(j)} + sum_{j not in cover} L_{j}.

    Raises:
        NotAGraph: If a facet has more than two vertices.
        ValueError: If cover is not a vertex cover.
    """
    covers = vertex_covers(complex_)
    edges = [set(e.members) for e in complex_.edges()]
    if not all(e & set(cover.members) for e in edges):
        raise ValueError(f"{cover} is not a vertex cover of {complex_}")
    k_spec, _ = k_delta_gens(shape, complex_)
    gens = list(k_spec.generators)
    faces = set(complex_.faces())
    for j in range(1, complex_.n + 1):
        if j in cover:
            star = [f for f in complex_.facets if j in f]
            if star:
                gens.extend(group_prime_gens(shape, complex_, star, budget))
        elif FaceSet((j,)) in faces:
            gens.extend(l_gens_s(shape, complex_, FaceSet((j,))).generators)
    descriptor = {"cover": list(cover.members), "minimal_cover": cover in covers}
    return IdealSpec("P_component", k_spec.context, _unique(gens), descriptor=descriptor)


def _one_margin_symbols(shape: Shape, complex_: SimplicialComplex, vertex: int) -> list[Polynomial]:
    return list(l_gens_s(shape, complex_, FaceSet((vertex,))).generators)


def four_cycle_components(shape: Shape, budget: BudgetLike = None) -> dict[str, IdealSpec]:
    """P, Q1, Q2 and Q3 for the complex {12},{13},{24},{34}, rendered in S_Delta.

    Q3 is I_Delta plus the squares of the one-margin symbols and of the
    grand total; it is primary, not prime.
    """
    complex_ = SimplicialComplex(4, tuple(FaceSet(f) for f in ((1, 2), (1, 3), (2, 4), (3, 4))))
    context = s_context(shape, complex_)
    k_spec, _ = k_delta_gens(shape, complex_)
    k = list(k_spec.generators)

    def groups(pairs, vertices):
        gens = list(k)
        for pair in pairs:
            gens.extend(group_prime_gens(shape, complex_, [FaceSet(f) for f in pair], budget))
        for v in vertices:
            gens.extend(_one_margin_symbols(shape, complex_, v))
        return gens

    squares = [g ** 2 for v in range(1, 5) for g in _one_margin_symbols(shape, complex_, v)]
    squares.append(context.variable((PLUS,) * 4) ** 2)
    components = {
        "P": k + list(kq_gens(shape, complex_, budget=budget)),
        "Q1": groups((((1, 2), (2, 4)), ((1, 3), (3, 4))), (1, 4)),
        "Q2": groups((((1, 2), (1, 3)), ((2, 4), (3, 4))), (2, 3)),
        "Q3": k + list(i_delta_gens_s(shape, complex_).generators) + squares,
    }
    return {
        name: IdealSpec("P_component", context, _unique(gens), descriptor={"component": name})
        for name, gens in components.items()
    }
