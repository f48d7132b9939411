"""Finite paths, ultrapaths and points of the shift space.

An ultrapath is a pair ``(alpha, A)`` of a finite edge path and a vertex set
``A`` inside ``r(alpha)``; the length-zero ultrapaths ``(A, A)`` are elements
of G0. Points of the shift space are finite points (ultrapaths whose terminal
is a minimal infinite emitter) and infinite paths, of which only the
eventually periodic ones are representable.
"""
import math
from dataclasses import dataclass
from typing import Sequence, Tuple, Union

from .errors import InvalidPath, NotComposable
from .setcalc import UPSet
from .ultragraph import GSet, Ultragraph


def spell_edges(edges: Sequence[int]) -> str:
    return ".".join(f"e{e}" for e in edges)


@dataclass(frozen=True)
class Ultrapath:
    """The pair ``(edges, terminal)``; ``edges == ()`` is the set ``terminal``."""
    edges: Tuple[int, ...]
    terminal: UPSet

    @property
    def length(self) -> int:
        return len(self.edges)

    def edge_at(self, k: int) -> int:
        return self.edges[k]

    def head(self, n: int) -> Tuple[int, ...]:
        return self.edges[:n]

    def __str__(self) -> str:
        return f"fin {spell_edges(self.edges)}:[{self.terminal}]"


# finite points of X are ultrapaths whose terminal is a minimal infinite emitter
FinitePoint = Ultrapath


def _primitive_root(cycle: Tuple[int, ...]) -> Tuple[int, ...]:
    n = len(cycle)
    for d in range(1, n + 1):
        if n % d == 0 and cycle == cycle[:d] * (n // d):
            return cycle[:d]
    return cycle


@dataclass(frozen=True)
class InfinitePath:
    """``prefix`` followed by ``cycle`` repeated forever, in canonical form.

    The cycle is primitive and the prefix is as short as possible, so two
    instances are equal exactly when they spell the same edge sequence.
    """
    prefix: Tuple[int, ...]
    cycle: Tuple[int, ...]

    def __post_init__(self):
        if not self.cycle:
            raise InvalidPath("an infinite path needs a nonempty cycle")
        prefix, cycle = tuple(self.prefix), _primitive_root(tuple(self.cycle))
        while prefix and prefix[-1] == cycle[-1]:
            cycle = (prefix[-1],) + cycle[:-1]
            prefix = prefix[:-1]
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "cycle", cycle)

    @property
    def length(self) -> float:
        return math.inf

    def edge_at(self, k: int) -> int:
        if k < len(self.prefix):
            return self.prefix[k]
        return self.cycle[(k - len(self.prefix)) % len(self.cycle)]

    def head(self, n: int) -> Tuple[int, ...]:
        return tuple(self.edge_at(k) for k in range(n))

    def __str__(self) -> str:
        return f"path {spell_edges(self.prefix)}(cycle {spell_edges(self.cycle)})"


Point = Union[Ultrapath, InfinitePath]


def drop_prefix(point: Point, n: int) -> Point:
    """Remove the first ``n`` edges of ``point``."""
    if isinstance(point, InfinitePath):
        if n <= len(point.prefix):
            return InfinitePath(point.prefix[n:], point.cycle)
        k = (n - len(point.prefix)) % len(point.cycle)
        return InfinitePath((), point.cycle[k:] + point.cycle[:k])
    return Ultrapath(point.edges[n:], point.terminal)


def is_path(graph: Ultragraph, edges: Sequence[int]) -> bool:
    """Whether ``edges`` are defined and satisfy ``s(e_{i+1}) in r(e_i)``."""
    if not all(graph.has_edge(e) for e in edges):
        return False
    return all(graph.range(a).contains(graph.source(b)) for a, b in zip(edges, edges[1:]))


def validate_path(graph: Ultragraph, edges: Sequence[int]) -> None:
    for e in edges:
        if not graph.has_edge(e):
            raise InvalidPath(f"edge e_{e} is not defined")
    for a, b in zip(edges, edges[1:]):
        if not graph.range(a).contains(graph.source(b)):
            raise InvalidPath(f"s(e_{b}) = v_{graph.source(b)} is not in r(e_{a})")


def make_ultrapath(graph: Ultragraph, edges: Sequence[int], terminal: UPSet) -> Ultrapath:
    """Build ``(edges, terminal)`` after checking it is an ultrapath.

    Raises:
        InvalidPath: the edges do not form a path, or the terminal is empty,
            outside ``r(edges)`` or not in G0
    """
    edges = tuple(edges)
    validate_path(graph, edges)
    if terminal.is_empty:
        raise InvalidPath("an ultrapath needs a nonempty terminal set")
    if edges and not terminal <= graph.range(edges[-1]):
        raise InvalidPath(f"terminal {terminal} is not contained in r(e_{edges[-1]})")
    if not edges and not isinstance(graph.gzero_member(terminal), GSet):
        raise InvalidPath(f"{terminal} is not in G0")
    return Ultrapath(edges, terminal)


def embed(graph: Ultragraph, edges: Sequence[int]) -> Ultrapath:
    """The ultrapath ``(alpha, r(alpha))`` of a nonempty finite path."""
    if not edges:
        raise InvalidPath("only nonempty paths embed as (alpha, r(alpha))")
    return make_ultrapath(graph, edges, graph.range(edges[-1]))


def m_alpha(graph: Ultragraph, edges: Sequence[int]) -> Tuple[UPSet, ...]:
    """Minimal infinite emitters contained in ``r(alpha)`` (all of them for ``alpha = ()``)."""
    validate_path(graph, edges)
    return graph.emitters_at(tuple(edges))


def finite_point(graph: Ultragraph, edges: Sequence[int], terminal: UPSet) -> Ultrapath:
    edges = tuple(edges)
    validate_path(graph, edges)
    if terminal not in graph.emitters_at(edges):
        raise InvalidPath(
            f"{terminal} is not a minimal infinite emitter inside the range of the path"
        )
    return Ultrapath(edges, terminal)


def infinite_path(graph: Ultragraph, prefix: Sequence[int], cycle: Sequence[int]) -> InfinitePath:
    """Build and validate an eventually periodic infinite path.

    Three cycle repetitions cover every consecutive pair, including the
    wrap-around from the last cycle edge back to the first.
    """
    point = InfinitePath(tuple(prefix), tuple(cycle))
    validate_path(graph, point.prefix + point.cycle * 3)
    return point


def validate_point(graph: Ultragraph, point: Point) -> Point:
    if isinstance(point, InfinitePath):
        validate_path(graph, point.prefix + point.cycle * 3)
        return point
    return finite_point(graph, point.edges, point.terminal)


def source(graph: Ultragraph, point: Union[Point, Ultrapath]) -> Union[int, UPSet]:
    """``s(x)``: a vertex for positive length, the set ``A`` for ``(A, A)``."""
    if isinstance(point, Ultrapath) and not point.edges:
        return point.terminal
    return graph.source(point.edge_at(0))


def range_of(point: Ultrapath) -> UPSet:
    return point.terminal


def length(point: Point) -> float:
    return point.length


def _starts_in(graph: Ultragraph, point: Point, target: UPSet) -> bool:
    """Whether ``s(point)`` lies in ``target`` (is contained in it for length zero)."""
    start = source(graph, point)
    if isinstance(start, UPSet):
        return start <= target
    return target.contains(start)


def concat(graph: Ultragraph, x: Ultrapath, y: Ultrapath) -> Ultrapath:
    """The product ``x . y`` of two ultrapaths.

    Raises:
        NotComposable: in every case the product is undefined
    """
    if not x.edges and not y.edges:
        meet = x.terminal & y.terminal
        if meet.is_empty:
            raise NotComposable(f"{x.terminal} and {y.terminal} are disjoint")
        return Ultrapath((), meet)
    if not y.edges:
        meet = x.terminal & y.terminal
        if meet.is_empty:
            raise NotComposable(f"{y.terminal} misses the terminal {x.terminal}")
        return Ultrapath(x.edges, meet)
    first = graph.source(y.edges[0])
    if not x.terminal.contains(first):
        raise NotComposable(f"s(e_{y.edges[0]}) = v_{first} is not in {x.terminal}")
    return Ultrapath(x.edges + y.edges, y.terminal)


def concat_point(graph: Ultragraph, y: Ultrapath, gamma: Point) -> Point:
    """The point ``y . gamma``; undefined when ``s(gamma)`` is not in ``r(y)``."""
    if not _starts_in(graph, gamma, y.terminal):
        raise NotComposable("s(gamma) is not in r(y)")
    if isinstance(gamma, InfinitePath):
        return InfinitePath(y.edges + gamma.prefix, gamma.cycle)
    return Ultrapath(y.edges + gamma.edges, gamma.terminal)


def initial_segment(graph: Ultragraph, x: Point, y: Ultrapath) -> bool:
    """Whether ``x = y . x'`` for some ``x'``."""
    n = y.length
    if x.length < n or tuple(x.head(n)) != y.edges:
        return False
    if x.length == n:
        return not (x.terminal & y.terminal).is_empty
    return y.terminal.contains(graph.source(x.edge_at(n)))
