"""Finite presentations of countable ultragraphs and their set analyses.

An ultragraph is presented by a vertex universe and a list of edge families.
Each family assigns sources through an affine rule ``s(e_i) = a*i + b`` and
ranges that depend only on ``i mod q``. That keeps every derived set (edges
emitted by a vertex set, range intersections, residuals) ultimately periodic,
so the analyses below are exact.
"""
import logging
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple, Union

from .errors import (
    EmptyRange,
    InvalidSourceRule,
    OverlappingIndices,
    RfumRequired,
    SinkFound,
    UnknownEdge,
)
from .setcalc import UPSet, union_all

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SingleEdge:
    """One edge ``e_edge`` with an explicit source vertex and range."""
    edge: int
    source: int
    range: UPSet

    def as_indexed(self) -> "IndexedFamily":
        return IndexedFamily(UPSet.finite([self.edge]), 0, self.source, (self.range,))


@dataclass(frozen=True)
class IndexedFamily:
    """Edges ``e_i`` for ``i`` in ``indices`` with ``s(e_i) = coeff*i + offset``.

    ``ranges[k]`` is the range of every ``e_i`` with ``i % len(ranges) == k``.
    ``coeff == 0`` gives a constant source, the only way a single vertex emits
    infinitely many edges.
    """
    indices: UPSet
    coeff: int
    offset: int
    ranges: Tuple[UPSet, ...]

    @property
    def period(self) -> int:
        return len(self.ranges)

    def as_indexed(self) -> "IndexedFamily":
        return self

    def source_of(self, i: int) -> int:
        return self.coeff * i + self.offset

    def range_of(self, i: int) -> UPSet:
        return self.ranges[i % self.period]

    def residue_indices(self, k: int) -> UPSet:
        q = self.period
        return self.indices & UPSet.from_predicate(lambda i: i % q == k, None, 0, q)


EdgeFamily = Union[SingleEdge, IndexedFamily]


@dataclass(frozen=True)
class UltragraphPresentation:
    """Vertex universe (``None`` for infinitely many vertices) plus edge families."""
    vertex_universe: Optional[int]
    families: Tuple[EdgeFamily, ...]


@dataclass(frozen=True)
class GSet:
    """A member of G0 with its certificate.

    ``set`` is the union of the range-lattice elements in ``lattice_parts``
    and the finite vertex set ``finite_part``, which is disjoint from them.
    """
    set: UPSet
    lattice_parts: Tuple[UPSet, ...]
    finite_part: UPSet

    def parts_union(self) -> UPSet:
        return union_all(self.lattice_parts, self.set.universe) | self.finite_part


@dataclass(frozen=True)
class NotInGZero:
    """Witness that a vertex set is outside G0: an infinite residual."""
    residual: UPSet


@dataclass(frozen=True)
class RangeDecomposition:
    """``range`` of ``edge`` as minimal infinite emitters plus single vertices."""
    edge: int
    range: UPSet
    emitters: Tuple[UPSet, ...]
    singletons: UPSet


@dataclass(frozen=True)
class RfumPass:
    decompositions: Tuple[RangeDecomposition, ...]

    passed = True


@dataclass(frozen=True)
class RfumFail:
    edge: int
    residual: UPSet

    passed = False


RfumResult = Union[RfumPass, RfumFail]


@dataclass(frozen=True)
class ValidationResult:
    """Outcome of a successful validation: the distinct ranges and edge set."""
    distinct_ranges: Tuple[Tuple[UPSet, int], ...]
    edges: UPSet
    vertex_universe: Optional[int]


def _affine_image(family: IndexedFamily, universe: Optional[int], index: int) -> UPSet:
    """Source image of ``family`` checked against the vertex universe."""
    indices = family.indices
    if indices.is_empty:
        return UPSet.empty(universe)
    if family.coeff == 0:
        lowest = highest = family.offset
    else:
        lowest = family.source_of(indices.min())
        highest = None if not indices.is_finite else family.source_of(max(indices.members()))
    if lowest < 1:
        raise InvalidSourceRule(
            f"family {index} sends e_{indices.min()} to vertex {lowest}, outside the universe"
        )
    if universe is not None and (highest is None or highest > universe):
        raise InvalidSourceRule(
            f"family {index} sends edges outside the vertex universe 1..{universe}"
        )
    image = indices.image_affine(family.coeff, family.offset, None)
    if universe is None:
        return image
    return UPSet.finite(image.members(), universe)


def validate(presentation: UltragraphPresentation) -> ValidationResult:
    """Check the standing assumptions on a presentation.

    Family index sets must be pairwise disjoint, every range that some edge
    uses must be nonempty and inside the vertex universe, and every vertex must
    emit at least one edge.

    Raises:
        OverlappingIndices: two families define the same edge
        EmptyRange: some edge has an empty range
        InvalidSourceRule: a source rule leaves the vertex universe
        SinkFound: some vertex emits no edge
    """
    universe = presentation.vertex_universe
    families = [f.as_indexed() for f in presentation.families]

    for i, first in enumerate(families, start=1):
        for j in range(i + 1, len(families) + 1):
            common = first.indices & families[j - 1].indices
            if not common.is_empty:
                raise OverlappingIndices(i, j, common.min())

    distinct: Dict[UPSet, int] = {}
    for index, family in enumerate(families, start=1):
        for k, rng in enumerate(family.ranges):
            hit = family.residue_indices(k)
            if hit.is_empty:
                continue
            if rng.universe != universe:
                raise InvalidSourceRule(
                    f"family {index} has a range over a different vertex universe"
                )
            if rng.is_empty:
                raise EmptyRange(hit.min())
            rep = hit.min()
            if rng not in distinct or rep < distinct[rng]:
                distinct[rng] = rep

    sources = union_all(
        (_affine_image(f, universe, i) for i, f in enumerate(families, start=1)), universe
    )
    missing = UPSet.full(universe) - sources
    if not missing.is_empty:
        raise SinkFound(missing.min())

    edges = union_all((f.indices for f in families), None)
    ranges = tuple(sorted(distinct.items(), key=lambda item: item[1]))
    logger.info("validated presentation: %d families, %d distinct ranges",
                len(families), len(ranges))
    return ValidationResult(ranges, edges, universe)


class Ultragraph:
    """A validated presentation together with its cached analyses.

    Analyses are computed on first use and never change afterwards, so an
    instance can be shared freely once built.
    """

    def __init__(self, presentation: UltragraphPresentation, name: str = "ultragraph"):
        self.presentation = presentation
        self.name = name
        self._validation = validate(presentation)
        self.families: Tuple[IndexedFamily, ...] = tuple(
            f.as_indexed() for f in presentation.families
        )
        self._epsilon: Dict[UPSet, UPSet] = {}
        self._lattice: Optional[Tuple[UPSet, ...]] = None
        self._minimal: Optional[Tuple[UPSet, ...]] = None
        self._within: Dict[UPSet, Tuple[UPSet, ...]] = {}
        self._rfum: Optional[RfumResult] = None

    def __repr__(self) -> str:
        return f"Ultragraph({self.name!r})"

    # -- primitive data --------------------------------------------------

    @property
    def vertex_universe(self) -> Optional[int]:
        return self.presentation.vertex_universe

    @property
    def vertices(self) -> UPSet:
        return UPSet.full(self.vertex_universe)

    @property
    def edges(self) -> UPSet:
        return self._validation.edges

    @property
    def validation(self) -> ValidationResult:
        return self._validation

    def is_finite(self) -> bool:
        return self.vertex_universe is not None and self.edges.is_finite

    def has_edge(self, edge: int) -> bool:
        return self.edges.contains(edge)

    def _family_of(self, edge: int) -> IndexedFamily:
        for family in self.families:
            if family.indices.contains(edge):
                return family
        raise UnknownEdge(edge)

    def source(self, edge: int) -> int:
        return self._family_of(edge).source_of(edge)

    def range(self, edge: int) -> UPSet:
        return self._family_of(edge).range_of(edge)

    def vertex_set(self, members: Sequence[int]) -> UPSet:
        return UPSet.finite(members, self.vertex_universe)

    # -- edges and ranges ------------------------------------------------

    def epsilon(self, vertices: UPSet) -> UPSet:
        """``{e : s(e) in vertices}`` as a set of edge indices."""
        cached = self._epsilon.get(vertices)
        if cached is None:
            cached = union_all(
                (vertices.preimage_affine(f.coeff, f.offset, f.indices)
                 for f in self.families),
                None,
            )
            self._epsilon[vertices] = cached
        return cached

    def out_edges(self, vertex: int) -> UPSet:
        return self.epsilon(self.vertex_set([vertex]))

    def is_infinite_emitter(self, vertices: UPSet) -> bool:
        return not self.epsilon(vertices).is_finite

    def edges_with_range(self, target: UPSet) -> UPSet:
        return union_all(
            (f.residue_indices(k)
             for f in self.families
             for k, rng in enumerate(f.ranges) if rng == target),
            None,
        )

    def distinct_ranges(self) -> Tuple[Tuple[UPSet, int], ...]:
        """Distinct ranges in use, each with its smallest edge."""
        return self._validation.distinct_ranges

    def range_lattice(self) -> Tuple[UPSet, ...]:
        """All nonempty intersections of distinct ranges."""
        if self._lattice is None:
            found = {rng for rng, _ in self.distinct_ranges()}
            frontier = set(found)
            while frontier:
                fresh = set()
                for a in frontier:
                    for b in found:
                        meet = a & b
                        if not meet.is_empty and meet not in found:
                            fresh.add(meet)
                found |= fresh
                frontier = fresh
            self._lattice = tuple(sorted(found, key=lambda s: s.sort_key))
            logger.info("range lattice of %s has %d elements", self.name, len(self._lattice))
        return self._lattice

    def infinite_emitter_vertices(self) -> UPSet:
        """Vertices that emit infinitely many edges."""
        found = [f.offset for f in self.families if f.coeff == 0 and not f.indices.is_finite]
        return self.vertex_set(found)

    # -- emitters --------------------------------------------------------

    def minimal_infinite_emitters(self, within: Optional[UPSet] = None) -> Tuple[UPSet, ...]:
        """Minimal infinite emitters, optionally only those inside ``within``.

        Candidates are the lattice elements that emit infinitely many edges
        and the infinite-emitter singletons; a candidate is minimal when no
        other candidate is a proper subset of it.
        """
        if self._minimal is None:
            candidates = [s for s in self.range_lattice() if self.is_infinite_emitter(s)]
            candidates += [self.vertex_set([v])
                           for v in self.infinite_emitter_vertices().members()]
            unique = list(dict.fromkeys(candidates))
            minimal = [a for a in unique if not any(b < a for b in unique)]
            self._minimal = tuple(sorted(minimal, key=lambda s: s.sort_key))
            logger.info("%s has %d minimal infinite emitters", self.name, len(self._minimal))
        if within is None:
            return self._minimal
        cached = self._within.get(within)
        if cached is None:
            cached = tuple(a for a in self._minimal if a <= within)
            self._within[within] = cached
        return cached

    def emitters_at(self, path: Sequence[int]) -> Tuple[UPSet, ...]:
        """Possible terminals of finite points with edge path ``path``."""
        if not path:
            return self.minimal_infinite_emitters()
        return self.minimal_infinite_emitters(within=self.range(path[-1]))

    def valid_next(self, path: Sequence[int]) -> UPSet:
        """Edges that may follow ``path``."""
        if not path:
            return self.edges
        return self.epsilon(self.range(path[-1]))

    # -- G0 and Condition (RFUM) -----------------------------------------

    def gzero_member(self, subset: UPSet) -> Union[GSet, NotInGZero]:
        """Decide membership of ``subset`` in G0.

        ``subset`` is in G0 exactly when what remains after removing every
        lattice element contained in it is finite.
        """
        inside = [s for s in self.range_lattice() if s <= subset]
        covered = union_all(inside, subset.universe)
        residual = subset - covered
        if not residual.is_finite:
            return NotInGZero(residual)
        maximal = tuple(s for s in inside if not any(s < t for t in inside))
        return GSet(subset, maximal, residual)

    def rfum_check(self) -> RfumResult:
        """Condition (RFUM): each range is finitely many minimal emitters plus vertices."""
        if self._rfum is None:
            decompositions = []
            result: Optional[RfumResult] = None
            for rng, edge in self.distinct_ranges():
                emitters = self.minimal_infinite_emitters(within=rng)
                residual = rng - union_all(emitters, rng.universe)
                if not residual.is_finite:
                    result = RfumFail(edge, residual)
                    break
                decompositions.append(RangeDecomposition(edge, rng, emitters, residual))
            self._rfum = result or RfumPass(tuple(decompositions))
            logger.info("Condition (RFUM) for %s: %s", self.name,
                        "pass" if self._rfum.passed else "fail")
        return self._rfum

    def basis_compact(self) -> bool:
        """Whether every basis element is known to be compact."""
        return self.rfum_check().passed

    def decomposition_of(self, edge: int) -> RangeDecomposition:
        """RFUM decomposition of ``r(edge)``."""
        result = self.rfum_check()
        target = self.range(edge)
        if isinstance(result, RfumPass):
            for decomposition in result.decompositions:
                if decomposition.range == target:
                    return decomposition
        raise RfumRequired(f"{self.name} does not satisfy Condition (RFUM)")
