"""Brute-force counterparts of the symbolic engines, for cross-checking.

Everything here works on explicit truncations: vertex and edge indices up to
a cap, points enumerated up to a prefix and cycle length. None of it reuses
the lattice, clopen or partial-action code it is meant to check; it reads the
raw presentation and tests definitions directly. Costs grow exponentially
with the caps.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Dict, FrozenSet, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from .errors import CapRequired
from .paction import IDENTITY, FWord
from .setcalc import UPSet
from .topology import Cylinder, FullCylinder
from .ultragraph import SingleEdge, Ultragraph, UltragraphPresentation
from .ultrapath import InfinitePath, Point, Ultrapath

logger = logging.getLogger(__name__)


def truncate(subset: UPSet, cap: int) -> np.ndarray:
    """Membership mask of ``subset`` on ``0..cap`` built from its raw bits (slot 0 unused)."""
    mask = np.zeros(cap + 1, dtype=bool)
    head = np.frombuffer(subset.prefix.encode(), dtype=np.uint8) == ord("1")
    upto = min(len(head), cap)
    mask[1:upto + 1] = head[:upto]
    rest = cap - len(head)
    if subset.universe is None and rest > 0:
        tail = np.frombuffer(subset.pattern.encode(), dtype=np.uint8) == ord("1")
        mask[len(head) + 1:] = np.tile(tail, -(-rest // len(tail)))[:rest]
    return mask


class TruncatedGraph:
    """Edges ``<= cap`` read straight from the presentation, ranges as masks."""

    def __init__(self, space: Ultragraph, cap: int):
        self.space = space
        self.cap = cap
        self.sources: Dict[int, int] = {}
        raw_ranges: Dict[int, UPSet] = {}
        for family in space.presentation.families:
            if isinstance(family, SingleEdge):
                if family.edge <= cap:
                    self.sources[family.edge] = family.source
                    raw_ranges[family.edge] = family.range
                continue
            for e in np.flatnonzero(truncate(family.indices, cap)):
                e = int(e)
                self.sources[e] = family.coeff * e + family.offset
                raw_ranges[e] = family.ranges[e % len(family.ranges)]
        self.vertex_cap = max([cap] + list(self.sources.values()))
        self.ranges = {e: truncate(r, self.vertex_cap) for e, r in raw_ranges.items()}
        self.line = nx.DiGraph()
        self.line.add_nodes_from(sorted(self.sources))
        for e, mask in self.ranges.items():
            for f, v in self.sources.items():
                if mask[v]:
                    self.line.add_edge(e, f)

    def edges(self) -> List[int]:
        return sorted(self.sources)

    def successors(self, edge: int) -> List[int]:
        return sorted(self.line.successors(edge))

    def mask(self, subset: UPSet) -> np.ndarray:
        return truncate(subset, self.vertex_cap)

    def is_path(self, edges: Sequence[int]) -> bool:
        if not all(e in self.sources for e in edges):
            return False
        return all(self.line.has_edge(a, b) for a, b in zip(edges, edges[1:]))


def _resolve_cap(space: Ultragraph, cap: Optional[int]) -> int:
    if cap is not None:
        return cap
    if space.vertex_universe is None or not space.edges.is_finite:
        raise CapRequired(f"{space.name} is infinite; an index cap is needed")
    return max(space.edges.members(), default=0)


def _walks(graph: TruncatedGraph, length: int) -> List[Tuple[int, ...]]:
    """All edge paths of exactly ``length`` edges."""
    if length == 0:
        return [()]
    walks = [(e,) for e in graph.edges()]
    for _ in range(length - 1):
        walks = [w + (f,) for w in walks for f in graph.successors(w[-1])]
    return walks


def _closed_walks(graph: TruncatedGraph, max_length: int) -> List[Tuple[int, ...]]:
    found = []
    for length in range(1, max_length + 1):
        found += [w for w in _walks(graph, length) if graph.line.has_edge(w[-1], w[0])]
    return found


def enumerate_points(space: Ultragraph, prefix_len: int, cycle_len: int,
                     cap: Optional[int] = None) -> List[Point]:
    """Finite points with ``|alpha| <= prefix_len`` and eventually periodic
    infinite paths with prefix ``<= prefix_len`` and cycle ``<= cycle_len``,
    all with edge indices ``<= cap``.

    Raises:
        CapRequired: for infinite ultragraphs without ``cap``
    """
    graph = TruncatedGraph(space, _resolve_cap(space, cap))
    points: Dict[Point, None] = {}
    prefixes = [w for k in range(prefix_len + 1) for w in _walks(graph, k)]
    for w in prefixes:
        for terminal in space.emitters_at(w):
            points[Ultrapath(w, terminal)] = None
    cycles = _closed_walks(graph, cycle_len)
    for w in prefixes:
        for c in cycles:
            if not w or graph.line.has_edge(w[-1], c[0]):
                points[InfinitePath(w, c)] = None
    logger.debug("enumerated %d points of %s", len(points), space.name)
    return sorted(points, key=lambda x: (isinstance(x, InfinitePath), str(x)))


def naive_minimal_emitters(space: Ultragraph, cap: int) -> List[FrozenSet[int]]:
    """Minimal infinite emitters truncated to ``1..cap``, by explicit enumeration.

    A set counts as an infinite emitter when it is the source of some edge
    with index in ``(cap/2, cap]``; that stands in for infinitely many edges.
    A single vertex counts when it is the source of more late edges than
    there are edge families, which only a constant source rule allows.
    """
    graph = TruncatedGraph(space, cap)
    late = [e for e in graph.edges() if e > cap // 2]
    masks = {m.tobytes(): m for m in (graph.ranges[e] for e in graph.edges()) if m.any()}
    frontier = list(masks.values())
    while frontier:
        fresh = []
        for a in frontier:
            for b in list(masks.values()):
                meet = a & b
                if meet.any() and meet.tobytes() not in masks:
                    masks[meet.tobytes()] = meet
                    fresh.append(meet)
        frontier = fresh
    families = len(space.presentation.families)
    for v in sorted({graph.sources[e] for e in late}):
        if sum(1 for e in late if graph.sources[e] == v) > families:
            single = np.zeros(graph.vertex_cap + 1, dtype=bool)
            single[v] = True
            masks.setdefault(single.tobytes(), single)

    def emits_late(mask: np.ndarray) -> bool:
        return any(mask[graph.sources[e]] for e in late)

    candidates = [m for m in masks.values() if emits_late(m)]
    minimal = []
    for a in candidates:
        if not any((b <= a).all() and (b != a).any() for b in candidates):
            minimal.append(frozenset(int(i) for i in np.flatnonzero(a[:cap + 1])))
    return sorted(minimal, key=lambda s: sorted(s))


# -- the partial action by definition ----------------------------------------


def _naive_split(word: FWord) -> Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    letters = word.letters
    n = 0
    while n < len(letters) and letters[n][1] == 1:
        n += 1
    if any(sign == 1 for _, sign in letters[n:]):
        return None
    return tuple(e for e, _ in letters[:n]), tuple(e for e, _ in reversed(letters[n:]))


def _starts_with(x: Point, edges: Tuple[int, ...]) -> bool:
    return x.length >= len(edges) and all(x.edge_at(k) == e for k, e in enumerate(edges))


def _tail_starts_in(graph: TruncatedGraph, x: Point, skip: int, mask: np.ndarray) -> bool:
    """Whether the source of ``x`` with ``skip`` edges removed lies in ``mask``."""
    if isinstance(x, Ultrapath) and x.length == skip:
        inside = graph.mask(x.terminal)
        return bool(not (inside & ~mask).any())
    return bool(mask[graph.sources[x.edge_at(skip)]])


def naive_in_domain(graph: TruncatedGraph, word: FWord, x: Point) -> bool:
    """Membership of ``x`` in ``X_word`` straight from the definitions."""
    split = _naive_split(word)
    if split is None:
        return False
    a, b = split
    if not a and not b:
        return True
    if not graph.is_path(a) or not graph.is_path(b):
        return False
    if not b:
        return _starts_with(x, a)
    if not a:
        return _tail_starts_in(graph, x, 0, graph.ranges[b[-1]])
    return _starts_with(x, a) and _tail_starts_in(
        graph, x, len(a), graph.ranges[a[-1]] & graph.ranges[b[-1]]
    )


def naive_act(graph: TruncatedGraph, word: FWord, x: Point) -> Optional[Point]:
    """``theta_word(x)``, or None when ``x`` is outside ``X_{word^-1}``."""
    if not naive_in_domain(graph, word.inverse(), x):
        return None
    a, b = _naive_split(word)
    if isinstance(x, Ultrapath):
        return Ultrapath(a + x.edges[len(b):], x.terminal)
    start = max(len(b), len(x.prefix))
    rest = tuple(x.edge_at(k) for k in range(len(b), start))
    cycle = tuple(x.edge_at(start + k) for k in range(len(x.cycle)))
    return InfinitePath(a + rest, cycle)


def naive_cylinder_member(graph: TruncatedGraph, cylinder: Cylinder, x: Point) -> bool:
    base = cylinder.path
    if not _starts_with(x, base):
        return False
    if isinstance(cylinder, FullCylinder):
        return _tail_starts_in(graph, x, len(base), graph.mask(cylinder.subset))
    if isinstance(x, Ultrapath) and x.length == len(base):
        return x.terminal == cylinder.emitter
    following = x.edge_at(len(base))
    return (bool(graph.mask(cylinder.emitter)[graph.sources[following]])
            and not cylinder.excluded.contains(following))


# -- pointwise crossed product ---------------------------------------------

Coefficient = Callable[[Point], Fraction]
PointwiseElem = Dict[FWord, Coefficient]


def _constant_zero(x: Point) -> Fraction:
    return Fraction(0)


@dataclass
class PointwiseAlgebra:
    """Crossed-product elements as word -> coefficient-function maps, evaluated point by point."""
    graph: TruncatedGraph

    def s(self, edge: int) -> PointwiseElem:
        word = FWord.of([edge])
        return {word: lambda x: Fraction(int(naive_in_domain(self.graph, word, x)))}

    def p(self, subset: UPSet) -> PointwiseElem:
        mask = self.graph.mask(subset)
        return {IDENTITY: lambda x: Fraction(int(_tail_starts_in(self.graph, x, 0, mask)))}

    def add(self, x: PointwiseElem, y: PointwiseElem) -> PointwiseElem:
        total = dict(x)
        for word, h in y.items():
            f = total.get(word, _constant_zero)
            total[word] = lambda p, f=f, h=h: f(p) + h(p)
        return total

    def mul(self, x: PointwiseElem, y: PointwiseElem) -> PointwiseElem:
        total: PointwiseElem = {}
        for g, f in x.items():
            for t, h in y.items():
                def term(p: Point, g=g, f=f, h=h) -> Fraction:
                    if not naive_in_domain(self.graph, g, p):
                        return Fraction(0)
                    return f(p) * h(naive_act(self.graph, g.inverse(), p))
                total = self.add(total, {g * t: term})
        return total

    def star(self, x: PointwiseElem) -> PointwiseElem:
        result: PointwiseElem = {}
        for g, f in x.items():
            def term(p: Point, g=g, f=f) -> Fraction:
                if not naive_in_domain(self.graph, g.inverse(), p):
                    return Fraction(0)
                return f(naive_act(self.graph, g, p))
            result = self.add(result, {g.inverse(): term})
        return result

    def value(self, element: PointwiseElem, word: FWord, x: Point) -> Fraction:
        f = element.get(word)
        return f(x) if f is not None else Fraction(0)


# -- random instances ----------------------------------------------------


def random_finite_presentation(rng: np.random.Generator, max_vertices: int = 5,
                               max_edges: int = 6) -> UltragraphPresentation:
    """A random finite ultragraph without sinks."""
    n = int(rng.integers(1, max_vertices + 1))
    m = int(rng.integers(n, max(n, max_edges) + 1))
    sources = list(rng.permutation(np.arange(1, n + 1))) + list(rng.integers(1, n + 1, m - n))
    families = []
    for e, v in enumerate(sources, start=1):
        bits = rng.integers(0, 2, n).astype(bool)
        if not bits.any():
            bits[rng.integers(0, n)] = True
        members = [int(i) + 1 for i in np.flatnonzero(bits)]
        families.append(SingleEdge(e, int(v), UPSet.finite(members, n)))
    return UltragraphPresentation(n, tuple(families))


def distinct_pairs(points: Sequence[Point]) -> List[Tuple[Point, Point]]:
    return list(combinations(points, 2))
