"""Ultimately periodic subsets of a linearly indexed universe.

Every vertex set, edge set and element of G0 handled by the library is a
``UPSet``: explicit membership bits below a threshold ``t`` followed by a
pattern of period ``p`` that repeats forever. Indices are 1-based. A finite
universe ``{1..n}`` is stored in the same type with an empty pattern.

Values are immutable and always canonical (``t`` and ``p`` minimal), so
structural equality is set equality.
"""
from dataclasses import dataclass
from math import gcd
from typing import Callable, Iterable, Iterator, Optional, Tuple

from .errors import UniverseMismatch


@dataclass(frozen=True)
class Cardinality:
    """``Finite(k)`` when ``count`` is an int, ``Infinite`` when it is None."""
    count: Optional[int]

    @property
    def is_infinite(self) -> bool:
        return self.count is None

    def __str__(self) -> str:
        return "Infinite" if self.count is None else f"Finite({self.count})"


INFINITE = Cardinality(None)


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _minimal_period(bits: str) -> str:
    n = len(bits)
    for d in range(1, n + 1):
        if n % d == 0 and bits == bits[:d] * (n // d):
            return bits[:d]
    return bits


def _canonical(prefix: str, pattern: str) -> Tuple[str, str]:
    pattern = _minimal_period(pattern)
    # index t joins the periodic tail when it agrees with the bit one period later
    while prefix and prefix[-1] == pattern[-1]:
        pattern = prefix[-1] + pattern[:-1]
        prefix = prefix[:-1]
    return prefix, pattern


@dataclass(frozen=True)
class UPSet:
    """An ultimately periodic set of positive integers.

    Attributes:
        universe: ``n`` for the finite universe ``{1..n}``, ``None`` for the
            positive integers.
        prefix: membership bits ('0'/'1') of indices ``1..t``.
        pattern: membership bits of indices ``t+1..t+p``, repeated forever.
            Empty for finite universes.
    """
    universe: Optional[int]
    prefix: str
    pattern: str = ""

    def __post_init__(self):
        prefix, pattern = self.prefix, self.pattern
        if set(prefix + pattern) - {"0", "1"}:
            raise ValueError(f"membership bits must be 0/1, got {prefix!r} {pattern!r}")
        if self.universe is not None:
            n = self.universe
            if n < 0:
                raise ValueError("finite universe size must be >= 0")
            if "1" in prefix[n:] or "1" in pattern:
                raise ValueError(f"members outside the finite universe 1..{n}")
            prefix, pattern = prefix[:n].ljust(n, "0"), ""
        else:
            prefix, pattern = _canonical(prefix, pattern or "0")
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "pattern", pattern)

    # -- builders --------------------------------------------------------

    @classmethod
    def empty(cls, universe: Optional[int] = None) -> "UPSet":
        return cls(universe, "", "0")

    @classmethod
    def full(cls, universe: Optional[int] = None) -> "UPSet":
        if universe is not None:
            return cls(universe, "1" * universe)
        return cls(None, "", "1")

    @classmethod
    def finite(cls, members: Iterable[int], universe: Optional[int] = None) -> "UPSet":
        members = sorted(set(members))
        if members and members[0] < 1:
            raise ValueError(f"indices are 1-based, got {members[0]}")
        top = members[-1] if members else 0
        bits = ["0"] * top
        for i in members:
            bits[i - 1] = "1"
        return cls(universe, "".join(bits), "" if universe is not None else "0")

    @classmethod
    def periodic(cls, start: int, period: int, bits: str,
                 universe: Optional[int] = None) -> "UPSet":
        """The ``ap(start, period, bits)`` literal: ``{i >= start : bits[(i-start) % period] == '1'}``."""
        if start < 1 or period < 1 or len(bits) != period:
            raise ValueError(
                f"ap({start},{period},{bits}) needs start >= 1, period >= 1 "
                f"and exactly {period} bits"
            )
        return cls.from_predicate(
            lambda i: i >= start and bits[(i - start) % period] == "1",
            universe, start - 1, period,
        )

    @classmethod
    def from_predicate(cls, member: Callable[[int], bool], universe: Optional[int],
                       threshold: int, period: int) -> "UPSet":
        """Sample ``member`` on ``1..threshold+period``.

        The caller guarantees ``member`` is periodic with ``period`` beyond
        ``threshold``; for finite universes the whole universe is sampled.
        """
        if universe is not None:
            return cls(universe, "".join("1" if member(i) else "0"
                                         for i in range(1, universe + 1)))
        prefix = "".join("1" if member(i) else "0" for i in range(1, threshold + 1))
        pattern = "".join("1" if member(i) else "0"
                          for i in range(threshold + 1, threshold + period + 1))
        return cls(None, prefix, pattern)

    # -- structure -------------------------------------------------------

    @property
    def threshold(self) -> int:
        return len(self.prefix)

    @property
    def period(self) -> int:
        return len(self.pattern) or 1

    @property
    def sort_key(self) -> Tuple:
        return (self.universe or 0, len(self.prefix), self.prefix, self.pattern)

    def contains(self, i: int) -> bool:
        if i < 1:
            return False
        if i <= len(self.prefix):
            return self.prefix[i - 1] == "1"
        if self.universe is not None:
            return False
        return self.pattern[(i - len(self.prefix) - 1) % len(self.pattern)] == "1"

    __contains__ = contains

    def cardinality(self) -> Cardinality:
        if "1" in self.pattern:
            return INFINITE
        return Cardinality(self.prefix.count("1"))

    @property
    def is_finite(self) -> bool:
        return "1" not in self.pattern

    @property
    def is_empty(self) -> bool:
        return "1" not in self.prefix and "1" not in self.pattern

    def members(self) -> Iterator[int]:
        """Members in increasing order; endless for infinite sets."""
        for i, bit in enumerate(self.prefix, start=1):
            if bit == "1":
                yield i
        if "1" not in self.pattern:
            return
        i = len(self.prefix)
        while True:
            for bit in self.pattern:
                i += 1
                if bit == "1":
                    yield i

    def members_upto(self, cap: int) -> Iterator[int]:
        for i in self.members():
            if i > cap:
                return
            yield i

    def min(self) -> Optional[int]:
        return next(self.members(), None)

    # -- boolean algebra -------------------------------------------------

    def _check_universe(self, other: "UPSet") -> None:
        if self.universe != other.universe:
            raise UniverseMismatch(
                f"universe {_universe_name(self.universe)} vs "
                f"{_universe_name(other.universe)}"
            )

    def _combine(self, other: "UPSet", op: Callable[[bool, bool], bool]) -> "UPSet":
        self._check_universe(other)
        return UPSet.from_predicate(
            lambda i: op(self.contains(i), other.contains(i)),
            self.universe,
            max(self.threshold, other.threshold),
            _lcm(self.period, other.period),
        )

    def union(self, other: "UPSet") -> "UPSet":
        return self._combine(other, lambda a, b: a or b)

    def intersect(self, other: "UPSet") -> "UPSet":
        return self._combine(other, lambda a, b: a and b)

    def difference(self, other: "UPSet") -> "UPSet":
        return self._combine(other, lambda a, b: a and not b)

    def complement(self) -> "UPSet":
        return UPSet.from_predicate(lambda i: not self.contains(i), self.universe,
                                    self.threshold, self.period)

    def is_subset(self, other: "UPSet") -> bool:
        return self.difference(other).is_empty

    def is_disjoint(self, other: "UPSet") -> bool:
        return self.intersect(other).is_empty

    __or__ = union
    __and__ = intersect
    __sub__ = difference
    __invert__ = complement
    __le__ = is_subset

    def __lt__(self, other: "UPSet") -> bool:
        return self.is_subset(other) and self != other

    # -- affine maps -----------------------------------------------------

    def preimage_affine(self, coeff: int, offset: int, domain: "UPSet") -> "UPSet":
        """``{i in domain : coeff*i + offset in self}`` over ``domain``'s universe."""
        if coeff == 0:
            return domain if self.contains(offset) else UPSet.empty(domain.universe)
        if self.universe is not None:
            threshold, period = max(0, self.universe - offset), 1
        else:
            threshold, period = max(0, self.threshold - offset), self.period
        hits = UPSet.from_predicate(lambda i: self.contains(coeff * i + offset),
                                    domain.universe, threshold, period)
        return hits & domain

    def image_affine(self, coeff: int, offset: int,
                     universe: Optional[int]) -> "UPSet":
        """``{coeff*i + offset : i in self}`` as a set over ``universe``."""
        if coeff == 0:
            if self.is_empty:
                return UPSet.empty(universe)
            return UPSet.finite([offset], universe)

        def member(j: int) -> bool:
            q, rem = divmod(j - offset, coeff)
            return rem == 0 and self.contains(q)

        return UPSet.from_predicate(
            member, universe,
            max(0, coeff * self.threshold + offset),
            coeff * self.period,
        )

    # -- rendering -------------------------------------------------------

    def literal(self) -> str:
        """Canonical literal, e.g. ``fin{1,2} | ap(3,1,1)``; ``fin{}`` when empty."""
        parts = []
        finite = [i for i, bit in enumerate(self.prefix, start=1) if bit == "1"]
        if finite or "1" not in self.pattern:
            parts.append("fin{" + ",".join(str(i) for i in finite) + "}")
        if "1" in self.pattern:
            shift = self.pattern.index("1")
            start = self.threshold + 1 + shift
            bits = self.pattern[shift:] + self.pattern[:shift]
            parts.append(f"ap({start},{len(bits)},{bits})")
        return " | ".join(parts)

    def __str__(self) -> str:
        return self.literal()


def _universe_name(universe: Optional[int]) -> str:
    return "N" if universe is None else f"1..{universe}"


def ups_op(kind: str, first: UPSet, second: Optional[UPSet] = None) -> UPSet:
    """Apply ``union``, ``intersect``, ``difference`` or ``complement``."""
    if kind == "complement":
        return first.complement()
    if second is None:
        raise ValueError(f"'{kind}' needs two operands")
    try:
        return {
            "union": first.union,
            "intersect": first.intersect,
            "difference": first.difference,
        }[kind](second)
    except KeyError:
        raise ValueError(f"unknown set operation '{kind}'") from None


def ups_cardinality(s: UPSet) -> Cardinality:
    return s.cardinality()


def ups_equal(first: UPSet, second: UPSet) -> bool:
    first._check_universe(second)
    return first == second


def union_all(sets: Iterable[UPSet], universe: Optional[int]) -> UPSet:
    result = UPSet.empty(universe)
    for s in sets:
        result = result | s
    return result
