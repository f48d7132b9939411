"""The shift map, shift morphisms and the finite ultragraph to graph conjugacy."""
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from .errors import InvalidPath, LengthZeroPoint, NotComposable, NotFinite, TableNotShiftClosed
from .models import MorphismReport
from .setcalc import UPSet
from .topology import Cylinder, FullCylinder, RestrictedCylinder
from .ultragraph import SingleEdge, Ultragraph, UltragraphPresentation
from .ultrapath import InfinitePath, Point, Ultrapath, concat_point, drop_prefix

logger = logging.getLogger(__name__)


def shift(x: Point) -> Point:
    """``sigma(x)``: drop the first edge; length-zero points are fixed."""
    if isinstance(x, Ultrapath) and not x.edges:
        return x
    return drop_prefix(x, 1)


def local_window(space: Ultragraph, x: Point) -> Cylinder:
    """A basis neighborhood of ``x`` without length-zero points.

    The shift is injective on it: every member starts with the first edge of
    ``x`` (and, for a finite point, keeps its whole edge path).

    Raises:
        LengthZeroPoint: for ``x = (A, A)``
    """
    if isinstance(x, InfinitePath):
        first = x.edge_at(0)
        return FullCylinder((first,), space.range(first))
    if not x.edges:
        raise LengthZeroPoint(f"{x} has length zero; the shift is not a local homeomorphism there")
    return RestrictedCylinder(x.edges, x.terminal, UPSet.empty())


@dataclass(frozen=True)
class GraphConjugacy:
    """The length-preserving conjugacy from a finite ultragraph to its graph.

    ``labels[k - 1] == (e, v)`` says that graph edge ``f_k`` is ``f_{e_v}``:
    it leaves ``s(e)`` and ends at ``v``.
    """
    source: Ultragraph
    target: Ultragraph
    labels: Tuple[Tuple[int, int], ...]
    index: Dict[Tuple[int, int], int] = field(compare=False, repr=False)

    def _image_edge(self, x: InfinitePath, k: int) -> int:
        return self.index[(x.edge_at(k), self.source.source(x.edge_at(k + 1)))]

    def apply(self, x: Point) -> InfinitePath:
        """``e_1 e_2 ...`` to ``g_1 g_2 ...`` with ``g_i = f_{(e_i) s(e_{i+1})}``."""
        if not isinstance(x, InfinitePath):
            raise InvalidPath(f"{x} is not a point of the shift space of a finite ultragraph")
        n = len(x.prefix)
        prefix = tuple(self._image_edge(x, k) for k in range(n))
        cycle = tuple(self._image_edge(x, n + k) for k in range(len(x.cycle)))
        return InfinitePath(prefix, cycle)

    def inverse(self, y: Point) -> InfinitePath:
        if not isinstance(y, InfinitePath):
            raise InvalidPath(f"{y} is not a point of the graph shift space")
        prefix = tuple(self.labels[f - 1][0] for f in y.prefix)
        return InfinitePath(prefix, tuple(self.labels[f - 1][0] for f in y.cycle))

    def apply_word(self, edges: Sequence[int], vertex: int) -> Tuple[int, ...]:
        """Image of the cylinder of ``(e_1 ... e_L, {v})``: the graph path ``g_1 ... g_L``."""
        if not edges:
            return ()
        if not self.source.range(edges[-1]).contains(vertex):
            raise InvalidPath(f"v_{vertex} is not in r(e_{edges[-1]})")
        ends = [self.source.source(e) for e in edges[1:]] + [vertex]
        return tuple(self.index[(e, v)] for e, v in zip(edges, ends))

    def to_networkx(self) -> nx.MultiDiGraph:
        graph = nx.MultiDiGraph(name=self.target.name)
        graph.add_nodes_from(self.target.vertices.members())
        for k, (e, v) in enumerate(self.labels, start=1):
            graph.add_edge(self.source.source(e), v, key=k, origin=e)
        return graph

    def adjacency(self) -> np.ndarray:
        size = self.target.vertex_universe
        matrix = np.zeros((size, size), dtype=np.int64)
        for e, v in self.labels:
            matrix[self.source.source(e) - 1, v - 1] += 1
        return matrix

    def path_counts(self, max_length: int) -> List[int]:
        """Number of graph paths of each length ``1..max_length``."""
        matrix = self.adjacency()
        power = np.identity(matrix.shape[0], dtype=np.int64)
        counts = []
        for _ in range(max_length):
            power = power @ matrix
            counts.append(int(power.sum()))
        return counts


def to_graph(space: Ultragraph) -> Tuple[Ultragraph, GraphConjugacy]:
    """The graph with edges ``f_{e_v}`` (``v`` in ``r(e)``) and the conjugacy onto it.

    Graph edges are numbered ``1..m`` in lexicographic order of ``(e, v)``.

    Raises:
        NotFinite: if the ultragraph has infinitely many vertices or edges
    """
    if not space.is_finite():
        raise NotFinite(f"{space.name} is not finite")
    universe = space.vertex_universe
    labels = tuple((e, v) for e in space.edges.members() for v in space.range(e).members())
    families = tuple(
        SingleEdge(k, space.source(e), UPSet.finite([v], universe))
        for k, (e, v) in enumerate(labels, start=1)
    )
    graph = Ultragraph(UltragraphPresentation(universe, families), name=f"{space.name}-graph")
    index = {label: k for k, label in enumerate(labels, start=1)}
    logger.info("%s has %d edges as a graph", space.name, len(labels))
    return graph, GraphConjugacy(space, graph, labels, index)


@dataclass
class MorphismTable:
    """A finite piece of a map between shift spaces."""
    entries: Dict[Point, Point]
    source: Ultragraph
    target: Ultragraph

    def __len__(self) -> int:
        return len(self.entries)


def table_from_map(source: Ultragraph, target: Ultragraph,
                   mapping: Callable[[Point], Point], points: Iterable[Point]) -> MorphismTable:
    return MorphismTable({x: mapping(x) for x in points}, source, target)


def identity_table(space: Ultragraph, points: Iterable[Point]) -> MorphismTable:
    return table_from_map(space, space, lambda x: x, points)


def _closure_gap(table: MorphismTable, depth: int) -> Optional[Point]:
    for x in table.entries:
        current = x
        for _ in range(max(depth, 1)):
            current = shift(current)
            if current not in table.entries:
                return current
    return None


def morphism_check(table: MorphismTable, depth: int = 4) -> MorphismReport:
    """Check a table for shift commuting, length preservation and injectivity.

    Also checks the consequence ``phi(a.x) = b.phi(x)`` for entries of positive
    length, where ``b`` is the first edge of ``phi(a.x)``.

    Raises:
        TableNotShiftClosed: if some iterate ``sigma^k(x)``, ``k <= depth``, is missing
    """
    gap = _closure_gap(table, depth)
    if gap is not None:
        raise TableNotShiftClosed(str(gap))
    failures = []
    commutes = length_preserving = injective = lemma_holds = True
    seen: Dict[Point, Point] = {}
    for x, image in table.entries.items():
        tail_image = table.entries[shift(x)]
        if shift(image) != tail_image:
            commutes = False
            failures.append(f"commuting fails at {x}: sigma(phi(x)) = {shift(image)}, "
                            f"phi(sigma(x)) = {tail_image}")
        if image.length != x.length:
            length_preserving = False
            failures.append(f"length changes at {x}: {image}")
        if image in seen:
            injective = False
            failures.append(f"{seen[image]} and {x} both map to {image}")
        seen.setdefault(image, x)
        if x.length >= 1:
            if image.length < 1:
                lemma_holds = False
                failures.append(f"prefix lemma fails at {x}: image has length zero")
                continue
            b = image.edge_at(0)
            try:
                rebuilt = concat_point(table.target, Ultrapath((b,), table.target.range(b)),
                                       tail_image)
            except NotComposable:
                rebuilt = None
            if rebuilt != image:
                lemma_holds = False
                failures.append(f"prefix lemma fails at {x}: {image} is not e{b} . {tail_image}")
    logger.info("morphism check on %d entries: %d failures", len(table), len(failures))
    return MorphismReport(entries=len(table), depth=depth, commutes=commutes,
                          length_preserving=length_preserving, injective=injective,
                          lemma_holds=lemma_holds, failures=failures)
