"""Cylinder sets and the clopen-set calculus of the shift space.

A ``Clopen`` is stored as a finite prefix tree. Each node at a finite path
``w`` carries

* ``atoms``: minimal infinite emitters ``A`` such that the finite point
  ``(w, A)`` is in the set, and
* ``edges``: next edges ``e`` such that every point extending ``w e`` is in
  the set.

Points that pass through a child node are decided by the child. The root is
always present; any other node is kept only when its part of the set is
neither empty nor the whole cylinder below it, which makes the tree unique
for a given set. Equality of clopens is therefore structural.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import (
    Callable,
    Dict,
    FrozenSet,
    List,
    Optional,
    Sequence,
    Tuple,
    Union,
)

from .errors import (
    InvalidCylinder,
    InvalidPath,
    LengthZeroPoint,
    PointsEqual,
)
from .setcalc import UPSet
from .ultragraph import GSet, Ultragraph
from .ultrapath import InfinitePath, Point, Ultrapath, spell_edges, validate_path

logger = logging.getLogger(__name__)

Path = Tuple[int, ...]
_Tree = Dict[Path, Tuple[FrozenSet[UPSet], UPSet]]


@dataclass(frozen=True)
class FullCylinder:
    """``D_(path, subset)``: points ``path . x'`` with ``s(x')`` in ``subset``."""
    path: Path
    subset: UPSet

    def __str__(self) -> str:
        return f"full {spell_edges(self.path)}:[{self.subset}]"


@dataclass(frozen=True)
class RestrictedCylinder:
    """``D_(path, emitter), excluded``: the finite point ``(path, emitter)`` and
    the points ``path e x'`` with ``e`` in ``epsilon(emitter)`` minus ``excluded``."""
    path: Path
    emitter: UPSet
    excluded: UPSet

    def __str__(self) -> str:
        text = f"restricted {spell_edges(self.path)}:[{self.emitter}]"
        if not self.excluded.is_empty:
            text += " without " + ",".join(f"e{e}" for e in self.excluded.members())
        return text


Cylinder = Union[FullCylinder, RestrictedCylinder]


@dataclass(frozen=True)
class Node:
    path: Path
    atoms: FrozenSet[UPSet]
    edges: UPSet

    def sorted_atoms(self) -> Tuple[UPSet, ...]:
        return tuple(sorted(self.atoms, key=lambda s: s.sort_key))


def _canonicalize(space: Ultragraph, tree: _Tree) -> None:
    # deepest first, so a node's children are settled before the node itself
    for path in sorted(tree, key=len, reverse=True):
        if not path or path not in tree:
            continue
        if any(len(p) == len(path) + 1 and p[:-1] == path for p in tree):
            continue
        atoms, edges = tree[path]
        if not atoms and edges.is_empty:
            del tree[path]
            continue
        if atoms == frozenset(space.emitters_at(path)) and edges == space.valid_next(path):
            parent_atoms, parent_edges = tree[path[:-1]]
            tree[path[:-1]] = (parent_atoms, parent_edges | UPSet.finite([path[-1]]))
            del tree[path]


def _ensure(space: Ultragraph, tree: _Tree, path: Path) -> None:
    """Refine ``tree`` until it has a node at ``path``, without changing the set."""
    if path in tree:
        return
    parent = path[:-1]
    _ensure(space, tree, parent)
    atoms, edges = tree[parent]
    edge = path[-1]
    if edges.contains(edge):
        tree[parent] = (atoms, edges - UPSet.finite([edge]))
        tree[path] = (frozenset(space.emitters_at(path)), space.valid_next(path))
    else:
        tree[path] = (frozenset(), UPSet.empty())


def _empty_tree() -> _Tree:
    return {(): (frozenset(), UPSet.empty())}


@dataclass(frozen=True)
class Clopen:
    """A clopen subset of the shift space of ``space`` in canonical tree form."""
    nodes: Tuple[Node, ...]
    space: Ultragraph = field(compare=False, repr=False)

    @classmethod
    def from_tree(cls, space: Ultragraph, tree: _Tree) -> "Clopen":
        tree = dict(tree)
        _canonicalize(space, tree)
        nodes = tuple(Node(path, atoms, edges) for path, (atoms, edges) in sorted(tree.items()))
        return cls(nodes, space)

    def tree(self) -> _Tree:
        return {n.path: (n.atoms, n.edges) for n in self.nodes}

    @property
    def root(self) -> Node:
        return self.nodes[0]

    @property
    def depth(self) -> int:
        return max(len(n.path) for n in self.nodes)

    @property
    def is_empty(self) -> bool:
        return len(self.nodes) == 1 and not self.root.atoms and self.root.edges.is_empty

    def has_length_zero_points(self) -> bool:
        return bool(self.root.atoms)

    def member(self, point: Point) -> bool:
        tree = self.tree()
        path: Path = ()
        while True:
            atoms, edges = tree[path]
            if isinstance(point, Ultrapath) and point.length == len(path):
                return point.terminal in atoms
            edge = point.edge_at(len(path))
            child = path + (edge,)
            if child in tree:
                path = child
                continue
            return edges.contains(edge)

    __contains__ = member

    def _combine(self, other: "Clopen", atom_op: Callable, edge_op: Callable) -> "Clopen":
        space = self.space
        left, right = self.tree(), other.tree()
        for path in set(left) | set(right):
            _ensure(space, left, path)
            _ensure(space, right, path)
        combined = {
            path: (atom_op(left[path][0], right[path][0]), edge_op(left[path][1], right[path][1]))
            for path in left
        }
        return Clopen.from_tree(space, combined)

    def union(self, other: "Clopen") -> "Clopen":
        return self._combine(other, lambda a, b: a | b, lambda a, b: a | b)

    def intersect(self, other: "Clopen") -> "Clopen":
        return self._combine(other, lambda a, b: a & b, lambda a, b: a & b)

    def difference(self, other: "Clopen") -> "Clopen":
        return self._combine(other, lambda a, b: a - b, lambda a, b: a - b)

    def complement(self) -> "Clopen":
        return whole(self.space).difference(self)

    def is_subset(self, other: "Clopen") -> bool:
        return self.difference(other).is_empty

    def is_disjoint(self, other: "Clopen") -> bool:
        return self.intersect(other).is_empty

    __or__ = union
    __and__ = intersect
    __sub__ = difference
    __le__ = is_subset

    def __str__(self) -> str:
        if self.is_empty:
            return "empty"
        parts = []
        for node in self.nodes:
            bits = []
            if node.atoms:
                bits.append("atoms " + "; ".join(str(a) for a in node.sorted_atoms()))
            if not node.edges.is_empty:
                bits.append(f"next {node.edges}")
            if bits:
                parts.append(f"{spell_edges(node.path) or '.'}: " + ", ".join(bits))
        return " / ".join(parts)


def empty(space: Ultragraph) -> Clopen:
    return Clopen.from_tree(space, _empty_tree())


def whole(space: Ultragraph) -> Clopen:
    """The whole shift space: every length-zero point and every first edge."""
    return Clopen.from_tree(
        space, {(): (frozenset(space.minimal_infinite_emitters()), space.edges)}
    )


def check_cylinder(space: Ultragraph, cylinder: Cylinder) -> None:
    """Raise ``InvalidCylinder`` unless ``cylinder`` describes a basis element."""
    try:
        validate_path(space, cylinder.path)
    except InvalidPath as e:
        raise InvalidCylinder(str(e)) from e
    bound = space.range(cylinder.path[-1]) if cylinder.path else space.vertices
    if isinstance(cylinder, FullCylinder):
        subset = cylinder.subset
        if subset.is_empty:
            raise InvalidCylinder("a full cylinder needs a nonempty vertex set")
        if subset.universe != bound.universe or not subset <= bound:
            raise InvalidCylinder(f"{subset} is not contained in the range of the base")
        if not isinstance(space.gzero_member(subset), GSet):
            raise InvalidCylinder(f"{subset} is not in G0")
        return
    if cylinder.emitter not in space.emitters_at(cylinder.path):
        raise InvalidCylinder(
            f"{cylinder.emitter} is not a minimal infinite emitter inside the range of the base"
        )
    excluded = cylinder.excluded
    if not excluded.is_finite or not excluded <= space.epsilon(cylinder.emitter):
        raise InvalidCylinder("excluded edges must be a finite subset of epsilon(emitter)")


def cyl_to_clopen(space: Ultragraph, cylinder: Cylinder) -> Clopen:
    """Normal form of a basis element."""
    check_cylinder(space, cylinder)
    tree = _empty_tree()
    for k in range(1, len(cylinder.path)):
        tree[cylinder.path[:k]] = (frozenset(), UPSet.empty())
    if isinstance(cylinder, FullCylinder):
        atoms = frozenset(a for a in space.emitters_at(cylinder.path) if a <= cylinder.subset)
        tree[cylinder.path] = (atoms, space.epsilon(cylinder.subset))
    else:
        tree[cylinder.path] = (
            frozenset([cylinder.emitter]),
            space.epsilon(cylinder.emitter) - cylinder.excluded,
        )
    return Clopen.from_tree(space, tree)


def member(point: Point, clopen: Clopen) -> bool:
    return clopen.member(point)


def clopen_op(kind: str, first: Clopen, second: Clopen) -> Clopen:
    """Apply ``union``, ``intersect`` or ``difference`` to two clopens."""
    try:
        operation = {
            "union": first.union,
            "intersect": first.intersect,
            "difference": first.difference,
        }[kind]
    except KeyError:
        raise ValueError(f"unknown clopen operation '{kind}'") from None
    return operation(second)


def union_all(space: Ultragraph, clopens: Sequence[Clopen]) -> Clopen:
    result = empty(space)
    for clopen in clopens:
        result = result | clopen
    return result


def vertex_clopen(space: Ultragraph, vertex: int) -> Clopen:
    """``X_v``: all points whose source is the vertex ``v``."""
    return cyl_to_clopen(space, FullCylinder((), space.vertex_set([vertex])))


def subtree(clopen: Clopen, prefix: Path) -> Clopen:
    """``{x' : prefix . x' in clopen}``, re-rooted at the empty path."""
    space = clopen.space
    tree = clopen.tree()
    path: Path = ()
    for edge in prefix:
        child = path + (edge,)
        if child in tree:
            path = child
            continue
        if tree[path][1].contains(edge):
            full = prefix
            return Clopen.from_tree(
                space, {(): (frozenset(space.emitters_at(full)), space.valid_next(full))}
            )
        return empty(space)
    n = len(prefix)
    return Clopen.from_tree(
        space, {p[n:]: value for p, value in tree.items() if p[:n] == prefix}
    )


def graft(clopen: Clopen, prefix: Path) -> Clopen:
    """``{prefix . x : x in clopen, s(x) in r(prefix)}``."""
    space = clopen.space
    if not prefix:
        return clopen
    inside = clopen & cyl_to_clopen(space, FullCylinder((), space.range(prefix[-1])))
    tree = _empty_tree()
    for k in range(1, len(prefix)):
        tree[prefix[:k]] = (frozenset(), UPSet.empty())
    for node in inside.nodes:
        tree[prefix + node.path] = (node.atoms, node.edges)
    return Clopen.from_tree(space, tree)


def shift_image(clopen: Clopen) -> Clopen:
    """``sigma(S)`` for a clopen without length-zero points."""
    if clopen.has_length_zero_points():
        raise LengthZeroPoint("the shift image is only computed away from length-zero points")
    space = clopen.space
    first_edges = clopen.root.edges
    pieces = [
        cyl_to_clopen(space, FullCylinder((), rng))
        for rng, _ in space.distinct_ranges()
        if not (first_edges & space.edges_with_range(rng)).is_empty
    ]
    pieces += [subtree(clopen, node.path) for node in clopen.nodes if len(node.path) == 1]
    return union_all(space, pieces)


# -- neighborhoods and separation --------------------------------------------


def neighborhood(space: Ultragraph, point: Point, size: int = 1,
                 excluded: Optional[UPSet] = None) -> Cylinder:
    """A basis neighborhood of ``point``.

    Infinite paths get ``D_(x_1...x_size, r(x_size))``; finite points
    ``(alpha, A)`` get ``D_(alpha, A), excluded``.
    """
    if isinstance(point, InfinitePath):
        if size < 1:
            raise ValueError("neighborhoods of infinite paths need size >= 1")
        head = point.head(size)
        return FullCylinder(head, space.range(head[-1]))
    excluded = excluded if excluded is not None else UPSet.empty()
    return RestrictedCylinder(point.edges, point.terminal,
                              excluded & space.epsilon(point.terminal))


def exterior_neighborhood(space: Ultragraph, point: Point, clopen: Clopen) -> Cylinder:
    """A basis element containing ``point`` and disjoint from ``clopen``.

    Raises:
        ValueError: if ``point`` belongs to ``clopen``
    """
    if clopen.member(point):
        raise ValueError("the point lies inside the clopen set")
    depth = clopen.depth
    if isinstance(point, InfinitePath):
        return neighborhood(space, point, depth + 1)
    tree = clopen.tree()
    if point.edges not in tree:
        return neighborhood(space, point)
    _, edges = tree[point.edges]
    through = [p[-1] for p in tree if len(p) == len(point.edges) + 1 and p[:-1] == point.edges]
    close = (edges | UPSet.finite(through)) & space.epsilon(point.terminal)
    if not close.is_finite:
        raise ValueError("clopen set is not closed around the point")
    return neighborhood(space, point, excluded=close)


def _first_difference(x: Point, y: Point) -> Optional[int]:
    if isinstance(x, InfinitePath) and isinstance(y, InfinitePath):
        limit = max(len(x.prefix), len(y.prefix)) + math.lcm(len(x.cycle), len(y.cycle))
    else:
        limit = int(min(x.length, y.length))
    for k in range(limit):
        if x.edge_at(k) != y.edge_at(k):
            return k
    return None


def _separate_extension(space: Ultragraph, short: Ultrapath, long: Point) -> Tuple[Cylinder, Cylinder]:
    n = short.length
    step = long.edge_at(n)
    inner = RestrictedCylinder(short.edges, short.terminal,
                               UPSet.finite([step]) & space.epsilon(short.terminal))
    head = long.head(n + 1)
    return inner, FullCylinder(head, space.range(step))


def separate(space: Ultragraph, x: Point, y: Point) -> Tuple[Cylinder, Cylinder]:
    """Disjoint basis neighborhoods of two distinct points.

    Raises:
        PointsEqual: if ``x == y``
    """
    k = _first_difference(x, y)
    if k is not None:
        return (FullCylinder(x.head(k + 1), space.range(x.edge_at(k))),
                FullCylinder(y.head(k + 1), space.range(y.edge_at(k))))
    if x == y:
        raise PointsEqual("cannot separate a point from itself")
    if x.length < y.length:
        return _separate_extension(space, x, y)
    if y.length < x.length:
        second, first = _separate_extension(space, y, x)
        return first, second
    a, b = x.terminal, y.terminal
    meet = a & b
    if meet.is_empty:
        return FullCylinder(x.edges, a), FullCylinder(y.edges, b)
    # distinct minimal emitters meet in a set that emits finitely many edges
    shared = space.epsilon(meet)
    return (RestrictedCylinder(x.edges, a, shared & space.epsilon(a)),
            RestrictedCylinder(y.edges, b, shared & space.epsilon(b)))


# -- convergence --------------------------------------------------------------


@dataclass(frozen=True)
class ConvergenceTest:
    """One tested neighborhood: settled from index ``settled_from`` on, or not."""
    description: str
    settled_from: Optional[int]
    window_failures: int


@dataclass(frozen=True)
class ConvergenceVerdict:
    verdict: str
    horizon: int
    tests: Tuple[ConvergenceTest, ...]

    @property
    def witness(self) -> Optional[ConvergenceTest]:
        if self.verdict == "certificate":
            return None
        return next((t for t in self.tests if t.settled_from is None), None)


SequenceLike = Union[Sequence[Point], Callable[[int], Point]]


def _edge_set_label(edges: Sequence[int]) -> str:
    return "{" + ",".join(f"e_{e}" for e in edges) + "}"


def converges(space: Ultragraph, sequence: SequenceLike, target: Point,
              horizon: int = 100, depth: int = 4) -> ConvergenceVerdict:
    """Test the convergence criterion for ``x^n -> target`` up to ``horizon``.

    Infinite targets need the first ``M`` edges to agree eventually, for
    ``M`` up to the length of the prefix and cycle plus ``depth``. A finite
    target ``(alpha, A)`` needs, for each tested finite ``F`` inside
    ``epsilon(A)``, that eventually ``x^n`` is the target or extends
    ``alpha`` through an edge of ``epsilon(A)`` outside ``F``. The tested
    ``F`` are the first ``m`` edges of ``epsilon(A)`` for ``m <= depth`` and
    the next edges seen in the first half of the run.

    A test settles when it holds on the window ``(horizon/2, horizon]``; a
    test failing on the whole window yields a counterexample, anything else
    is inconclusive. An explicit list is its own horizon.
    """
    if callable(sequence):
        terms = [sequence(n) for n in range(1, horizon + 1)]
    else:
        terms = list(sequence)[:horizon]
        horizon = len(terms)
    half = horizon // 2

    checks: List[Tuple[str, Callable[[Point], bool]]] = []
    if isinstance(target, InfinitePath):
        for m in range(1, len(target.prefix) + len(target.cycle) + depth + 1):
            head = target.head(m)
            checks.append((f"prefix length {m}",
                           lambda x, m=m, head=head: x.length >= m and x.head(m) == head))
    else:
        alpha, n = target.edges, target.length
        emitted = space.epsilon(target.terminal)

        def extends_outside(x: Point, excluded: UPSet) -> bool:
            if x == target:
                return True
            return (x.length > n and x.head(n) == alpha
                    and emitted.contains(x.edge_at(n)) and not excluded.contains(x.edge_at(n)))

        firsts: List[int] = []
        members = emitted.members()
        for m in range(depth + 1):
            excluded = UPSet.finite(firsts)
            checks.append((f"F = {_edge_set_label(firsts)}",
                           lambda x, excluded=excluded: extends_outside(x, excluded)))
            nxt = next(members, None)
            if nxt is None:
                break
            firsts.append(nxt)
        seen = sorted({x.edge_at(n) for x in terms[:half]
                       if x.length > n and x.head(n) == alpha and emitted.contains(x.edge_at(n))})
        if seen:
            excluded = UPSet.finite(seen)
            checks.append((f"F = {_edge_set_label(seen)}",
                           lambda x, excluded=excluded: extends_outside(x, excluded)))

    tests = []
    verdict = "certificate"
    for description, holds in checks:
        failures = [i for i, x in enumerate(terms, start=1) if not holds(x)]
        in_window = [i for i in failures if i > half]
        if not in_window:
            tests.append(ConvergenceTest(description, (failures[-1] + 1) if failures else 1, 0))
            continue
        tests.append(ConvergenceTest(description, None, len(in_window)))
        if len(in_window) == horizon - half:
            verdict = "counterexample"
        elif verdict == "certificate":
            verdict = "inconclusive"
    logger.info("convergence test over %d terms: %s", horizon, verdict)
    return ConvergenceVerdict(verdict, horizon, tuple(tests))


def density_sequence(space: Ultragraph, point: Ultrapath, count: int,
                     max_steps: int = 64) -> List[InfinitePath]:
    """Infinite paths ``alpha . gamma^n`` approaching the finite point ``(alpha, A)``.

    ``gamma^n`` starts with the n-th edge of ``epsilon(A)`` and then always
    follows the smallest admissible next edge until an edge repeats.
    """
    emitted = space.epsilon(point.terminal).members()
    result = []
    for _ in range(count):
        first = next(emitted, None)
        if first is None:
            break
        walk = [first]
        while walk[-1] not in walk[:-1]:
            if len(walk) > max_steps:
                raise ValueError(f"no cycle within {max_steps} steps from e_{first}")
            walk.append(space.valid_next((walk[-1],)).min())
        start = walk.index(walk[-1])
        result.append(InfinitePath(point.edges + tuple(walk[:start]), tuple(walk[start:-1])))
    return result
