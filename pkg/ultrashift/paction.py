"""The partial action of the free group on the edges.

Every reduced word has the shape ``a b^-1`` with ``a`` and ``b`` finite edge
words (either may be empty) or is degenerate. Only words of that shape with
``a`` and ``b`` paths have nonempty domains, and on those the action rewrites
prefixes: attach ``a``, strip ``b``, or replace ``b`` by ``a``.
"""
import logging
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple, Union

from .errors import DegenerateWord, NotInGZeroError, OutsideDomain, RfumRequired
from .models import AxiomsReport
from .setcalc import UPSet
from .topology import (
    Clopen,
    FullCylinder,
    cyl_to_clopen,
    empty,
    graft,
    subtree,
    union_all,
    vertex_clopen,
    whole,
)
from .ultragraph import GSet, Ultragraph
from .ultrapath import Point, Ultrapath, concat_point, drop_prefix, is_path

logger = logging.getLogger(__name__)

Letter = Tuple[int, int]

ZERO, POS, NEG, MIXED, DEGENERATE = "Zero", "Pos", "Neg", "Mixed", "Degenerate"


def reduce(letters: Iterable[Letter]) -> Tuple[Letter, ...]:
    """Free-group cancellation of adjacent ``x x^-1`` pairs."""
    stack: List[Letter] = []
    for edge, sign in letters:
        if sign not in (1, -1):
            raise ValueError(f"letter exponent must be +1 or -1, got {sign}")
        if stack and stack[-1] == (edge, -sign):
            stack.pop()
        else:
            stack.append((edge, sign))
    return tuple(stack)


@dataclass(frozen=True)
class FWord:
    """A reduced word in the edges and their formal inverses."""
    letters: Tuple[Letter, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", reduce(self.letters))

    @classmethod
    def of(cls, positive: Sequence[int] = (), negative: Sequence[int] = ()) -> "FWord":
        """The word ``a b^-1`` for edge words ``a`` and ``b``."""
        return cls(tuple((e, 1) for e in positive) + tuple((e, -1) for e in reversed(negative)))

    def __mul__(self, other: "FWord") -> "FWord":
        return FWord(self.letters + other.letters)

    def inverse(self) -> "FWord":
        return FWord(tuple((e, -s) for e, s in reversed(self.letters)))

    @property
    def sort_key(self) -> Tuple:
        return (len(self.letters), self.letters)

    def split(self) -> Tuple[str, Tuple[int, ...], Tuple[int, ...]]:
        """Shape plus the words ``a`` and ``b`` of ``a b^-1``."""
        signs = [s for _, s in self.letters]
        n = signs.count(1)
        if signs != [1] * n + [-1] * (len(signs) - n):
            return DEGENERATE, (), ()
        a = tuple(e for e, _ in self.letters[:n])
        b = tuple(e for e, _ in reversed(self.letters[n:]))
        if not a and not b:
            return ZERO, a, b
        if not b:
            return POS, a, b
        if not a:
            return NEG, a, b
        return MIXED, a, b

    @property
    def shape(self) -> str:
        return self.split()[0]

    def __str__(self) -> str:
        if not self.letters:
            return "0"
        text = ""
        for k, (edge, sign) in enumerate(self.letters):
            if sign < 0:
                text += f"~e{edge}"
            else:
                text += ("." if k else "") + f"e{edge}"
        return text


IDENTITY = FWord()


def degree(word: FWord) -> int:
    """Gauge degree ``|a| - |b|`` of ``a b^-1``.

    Raises:
        DegenerateWord: for words not of the form ``a b^-1``
    """
    shape, a, b = word.split()
    if shape == DEGENERATE:
        raise DegenerateWord(f"{word} is not of the form a b^-1")
    return len(a) - len(b)


class PartialAction:
    """Domains ``X_c`` and maps ``theta_c`` for a space satisfying Condition (RFUM)."""

    def __init__(self, space: Ultragraph):
        if not space.rfum_check().passed:
            raise RfumRequired(f"{space.name} does not satisfy Condition (RFUM)")
        self.space = space
        self._domains = {}

    def domain(self, word: FWord) -> Clopen:
        """The clopen set ``X_c``; empty unless ``c = a b^-1`` with paths ``a``, ``b``."""
        cached = self._domains.get(word)
        if cached is None:
            cached = self._domain(word)
            self._domains[word] = cached
        return cached

    def _domain(self, word: FWord) -> Clopen:
        space = self.space
        shape, a, b = word.split()
        if shape == ZERO:
            return whole(space)
        if shape == DEGENERATE or not is_path(space, a) or not is_path(space, b):
            return empty(space)
        if shape == POS:
            return cyl_to_clopen(space, FullCylinder(a, space.range(a[-1])))
        if shape == NEG:
            decomposition = space.decomposition_of(b[-1])
            parts = [cyl_to_clopen(space, FullCylinder((), emitter))
                     for emitter in decomposition.emitters]
            parts += [vertex_clopen(space, v) for v in decomposition.singletons.members()]
            return union_all(space, parts)
        meet = space.range(a[-1]) & space.range(b[-1])
        if meet.is_empty:
            return empty(space)
        return cyl_to_clopen(space, FullCylinder(a, meet))

    def act(self, word: FWord, point: Point) -> Point:
        """``theta_c(x)`` for ``x`` in ``X_{c^-1}``.

        Raises:
            OutsideDomain: if ``x`` is not in ``X_{c^-1}``
        """
        if not self.domain(word.inverse()).member(point):
            raise OutsideDomain(f"{point} is not in the domain of theta_{word}")
        shape, a, b = word.split()
        stripped = drop_prefix(point, len(b))
        if not a:
            return stripped
        return concat_point(self.space, Ultrapath(a, self.space.range(a[-1])), stripped)

    def push(self, word: FWord, clopen: Clopen) -> Clopen:
        """``theta_c(S & X_{c^-1})`` as a clopen set."""
        inside = clopen & self.domain(word.inverse())
        shape, a, b = word.split()
        if shape == ZERO:
            return inside
        if shape == DEGENERATE:
            return empty(self.space)
        return graft(subtree(inside, b), a)

    def xa_set(self, subset: Union[UPSet, GSet]) -> Clopen:
        """``X_A``: points whose source lies in ``A`` (is contained in it for length zero).

        Raises:
            NotInGZeroError: if ``A`` is not in G0
        """
        certificate = subset if isinstance(subset, GSet) else self.space.gzero_member(subset)
        if not isinstance(certificate, GSet):
            raise NotInGZeroError(str(certificate.residual))
        parts = [cyl_to_clopen(self.space, FullCylinder((), part))
                 for part in certificate.lattice_parts]
        parts += [vertex_clopen(self.space, v) for v in certificate.finite_part.members()]
        return union_all(self.space, parts)

    def axioms_check(self, t: FWord, h: FWord, sample: Sequence[Point]) -> AxiomsReport:
        """Check ``theta_t o theta_h = theta_th`` on a sample and the domain containment."""
        th = t * h
        outer = self.domain(th.inverse()) & self.domain(h.inverse())
        checked = skipped = 0
        mismatches = []
        for x in sample:
            if not outer.member(x):
                skipped += 1
                continue
            checked += 1
            try:
                left = self.act(t, self.act(h, x))
            except OutsideDomain as e:
                mismatches.append(f"{x}: {e}")
                continue
            right = self.act(th, x)
            if left != right:
                mismatches.append(f"{x}: {left} != {right}")
        moved = self.push(t, self.domain(t.inverse()) & self.domain(h))
        containment = moved <= self.domain(th)
        logger.debug("axioms t=%s h=%s: %d checked, %d mismatches", t, h, checked, len(mismatches))
        return AxiomsReport(t=str(t), h=str(h), checked=checked, skipped=skipped,
                            mismatches=mismatches, containment=containment)
