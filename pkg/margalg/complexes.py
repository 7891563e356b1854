"""Simplicial complexes on the vertex set {1, ..., n}.

A complex is stored by its facets, an antichain of FaceSets kept in graded
lexicographic order. Faces below the facets are produced on demand.
"""

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Optional

from margalg.errors import NotAGraph, VertexOutOfRange


@dataclass(frozen=True, order=True)
class FaceSet:
    """A subset of the vertices, stored sorted and duplicate-free."""

    members: tuple[int, ...] = ()

    @classmethod
    def of(cls, vertices: Iterable[int]) -> "FaceSet":
        return cls(tuple(sorted(set(int(v) for v in vertices))))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __contains__(self, vertex: int) -> bool:
        return vertex in self.members

    def issubset(self, other: "FaceSet") -> bool:
        return set(self.members) <= set(other.members)

    def union(self, other: "FaceSet") -> "FaceSet":
        return FaceSet.of(self.members + other.members)

    def intersection(self, other: "FaceSet") -> "FaceSet":
        return FaceSet.of(set(self.members) & set(other.members))

    def difference(self, other: "FaceSet") -> "FaceSet":
        return FaceSet.of(set(self.members) - set(other.members))

    def without(self, vertex: int) -> "FaceSet":
        return FaceSet(tuple(v for v in self.members if v != vertex))

    def sort_key(self) -> tuple:
        """Graded lexicographic key: smaller faces first, then lexicographic."""
        return (len(self.members), self.members)

    def label(self) -> str:
        return "".join(str(v) for v in self.members) if self.members else "{}"

    def __str__(self) -> str:
        return "{" + ",".join(str(v) for v in self.members) + "}"


def _check_vertices(face: FaceSet, n: int) -> None:
    for v in face.members:
        if v < 1 or v > n:
            raise VertexOutOfRange(f"vertex {v} outside 1..{n}")


@dataclass(frozen=True)
class SimplicialComplex:
    """A downward-closed family of subsets of {1, ..., n}, held by its facets."""

    n: int
    facets: tuple[FaceSet, ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise VertexOutOfRange(f"vertex count must be nonnegative, got {self.n}")
        for face in self.facets:
            _check_vertices(face, self.n)
        for a, b in combinations(self.facets, 2):
            if a.issubset(b) or b.issubset(a):
                raise ValueError(f"facets {a} and {b} are not an antichain")

    @classmethod
    def full_simplex(cls, n: int) -> "SimplicialComplex":
        return cls(n, (FaceSet(tuple(range(1, n + 1))),))

    def faces(self) -> tuple[FaceSet, ...]:
        """All faces of the downward closure, in graded lexicographic order."""
        found: set[FaceSet] = set()
        for facet in self.facets:
            for k in range(len(facet) + 1):
                for subset in combinations(facet.members, k):
                    found.add(FaceSet(subset))
        return tuple(sorted(found, key=FaceSet.sort_key))

    def contains(self, face: FaceSet) -> bool:
        return any(face.issubset(facet) for facet in self.facets)

    def is_graph(self) -> bool:
        return all(len(f) <= 2 for f in self.facets)

    def edges(self) -> tuple[FaceSet, ...]:
        return tuple(f for f in self.facets if len(f) == 2)

    def vertices(self) -> tuple[int, ...]:
        """Vertices that appear in at least one facet."""
        return tuple(sorted({v for f in self.facets for v in f.members}))

    def subcomplex(self, facet_indices: Iterable[int]) -> "SimplicialComplex":
        return canonicalize([self.facets[i] for i in facet_indices], self.n)

    def to_dict(self) -> dict:
        return {"n": self.n, "facets": [list(f.members) for f in self.facets]}

    @classmethod
    def from_dict(cls, data: dict) -> "SimplicialComplex":
        return canonicalize([FaceSet.of(f) for f in data.get("facets", [])], int(data["n"]))

    def __str__(self) -> str:
        return "{" + ", ".join(str(f) for f in self.facets) + "}"


def canonicalize(facets: Iterable[FaceSet], n: int) -> SimplicialComplex:
    """Build a complex from any generating family of faces.

    Faces contained in another listed face are dropped and the survivors are
    sorted in graded lexicographic order.

    Raises:
        VertexOutOfRange: If a face mentions a vertex outside 1..n.
    """
    unique = sorted(set(facets), key=FaceSet.sort_key)
    for face in unique:
        _check_vertices(face, n)
    maximal = [
        f for f in unique
        if not any(f != g and f.issubset(g) for g in unique)
    ]
    return SimplicialComplex(n, tuple(maximal))


def parse_facets(text: str, n: Optional[int] = None) -> SimplicialComplex:
    """Parse a command-line facet list such as "1,2;1,3;2,3".

    Facets are separated by ";" and vertices by ",". An empty facet is written
    as an empty item. When n is omitted the largest vertex is used.
    """
    facets = []
    for item in text.split(";"):
        item = item.strip()
        vertices = [int(v) for v in item.split(",") if v.strip()] if item else []
        facets.append(FaceSet.of(vertices))
    if n is None:
        n = max((v for f in facets for v in f.members), default=0)
    return canonicalize(facets, n)


def vertex_covers(complex_: SimplicialComplex) -> list[FaceSet]:
    """All minimal vertex covers of a graph, in lexicographic order.

    A facet with fewer than two vertices imposes no covering condition.

    Raises:
        NotAGraph: If some facet has more than two vertices.
    """
    if not complex_.is_graph():
        raise NotAGraph(f"complex {complex_} has a facet with more than two vertices")
    edges = [set(e.members) for e in complex_.edges()]
    covers: list[tuple[int, ...]] = []
    vertices = range(1, complex_.n + 1)
    # Increasing size guarantees any proper subcover is found first
    for k in range(complex_.n + 1):
        for candidate in combinations(vertices, k):
            chosen = set(candidate)
            if not all(e & chosen for e in edges):
                continue
            if any(set(c) <= chosen for c in covers):
                continue
            covers.append(candidate)
    return [FaceSet(c) for c in sorted(covers)]
