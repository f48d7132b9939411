"""The algebraic partial crossed product of indicator functions by the free group.

Elements are finite sums ``sum f_g delta_g`` where each coefficient ``f_g`` is
a rational combination of indicators of clopen sets supported in ``X_g``.
Products use the partial crossed product rules

    (f delta_g)(h delta_t) = alpha_g(alpha_{g^-1}(f) h) delta_{gt}
    (f delta_g)*           = alpha_{g^-1}(f) delta_{g^-1}

where ``alpha_g`` moves an indicator along ``theta_g``. Indicators never leave
this normal form, so every identity below is checked as an exact equality.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .errors import UltrashiftError
from .models import GradingReport, RelationCheck, RelationsReport
from .paction import IDENTITY, FWord, PartialAction, degree
from .setcalc import UPSet
from .topology import Clopen, union_all, vertex_clopen
from .ultragraph import Ultragraph
from .ultrapath import Point, spell_edges

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]


@dataclass(frozen=True)
class IndicatorCombo:
    """``sum c_k 1_{S_k}`` with disjoint nonempty ``S_k`` and distinct nonzero ``c_k``.

    Terms are sorted by coefficient, which makes the representation unique.
    """
    terms: Tuple[Tuple[Fraction, Clopen], ...]
    space: Ultragraph = field(compare=False, repr=False)

    @classmethod
    def from_pieces(cls, space: Ultragraph,
                    pieces: Iterable[Tuple[Scalar, Clopen]]) -> "IndicatorCombo":
        """Normalize pieces whose supports are pairwise disjoint."""
        grouped: Dict[Fraction, Clopen] = {}
        for coeff, clopen in pieces:
            coeff = Fraction(coeff)
            if coeff == 0 or clopen.is_empty:
                continue
            grouped[coeff] = grouped[coeff] | clopen if coeff in grouped else clopen
        return cls(tuple(sorted(grouped.items(), key=lambda item: item[0])), space)

    @classmethod
    def zero(cls, space: Ultragraph) -> "IndicatorCombo":
        return cls((), space)

    @classmethod
    def indicator(cls, clopen: Clopen, coeff: Scalar = 1) -> "IndicatorCombo":
        return cls.from_pieces(clopen.space, [(coeff, clopen)])

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def support(self) -> Clopen:
        return union_all(self.space, [clopen for _, clopen in self.terms])

    def value_at(self, point: Point) -> Fraction:
        for coeff, clopen in self.terms:
            if clopen.member(point):
                return coeff
        return Fraction(0)

    def __add__(self, other: "IndicatorCombo") -> "IndicatorCombo":
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        mine, theirs = self.support(), other.support()
        pieces = []
        for a, left in self.terms:
            for b, right in other.terms:
                pieces.append((a + b, left & right))
            pieces.append((a, left - theirs))
        pieces += [(b, right - mine) for b, right in other.terms]
        return IndicatorCombo.from_pieces(self.space, pieces)

    def scale(self, factor: Scalar) -> "IndicatorCombo":
        factor = Fraction(factor)
        return IndicatorCombo.from_pieces(self.space, [(c * factor, s) for c, s in self.terms])

    def __neg__(self) -> "IndicatorCombo":
        return self.scale(-1)

    def __sub__(self, other: "IndicatorCombo") -> "IndicatorCombo":
        return self + (-other)

    def __mul__(self, other: "IndicatorCombo") -> "IndicatorCombo":
        pieces = [(a * b, left & right) for a, left in self.terms for b, right in other.terms]
        return IndicatorCombo.from_pieces(self.space, pieces)

    def map_supports(self, move: Callable[[Clopen], Clopen]) -> "IndicatorCombo":
        """Apply an injective set map to every support."""
        return IndicatorCombo.from_pieces(self.space, [(c, move(s)) for c, s in self.terms])

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        return " + ".join(f"{coeff}*[{clopen}]" for coeff, clopen in self.terms)


@dataclass(frozen=True)
class CrossedElem:
    """``sum f_g delta_g`` with nonzero coefficients, sorted by word."""
    terms: Tuple[Tuple[FWord, IndicatorCombo], ...]

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def words(self) -> Tuple[FWord, ...]:
        return tuple(word for word, _ in self.terms)

    def coefficient(self, word: FWord) -> Optional[IndicatorCombo]:
        for w, combo in self.terms:
            if w == word:
                return combo
        return None

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        return "\n".join(f"{word}: {combo}" for word, combo in self.terms)


class CrossedProduct:
    """Arithmetic in the crossed product of a space satisfying Condition (RFUM)."""

    def __init__(self, space: Ultragraph):
        self.space = space
        self.action = PartialAction(space)
        self._range_projections: Dict[int, CrossedElem] = {}

    # -- construction ------------------------------------------------------

    def element(self, terms: Dict[FWord, IndicatorCombo]) -> CrossedElem:
        """Build an element after pruning zeros and checking ``supp f_g <= X_g``."""
        kept = []
        for word, combo in terms.items():
            if combo.is_zero:
                continue
            if not combo.support() <= self.action.domain(word):
                raise UltrashiftError(f"coefficient of delta_{word} is not supported in X_{word}")
            kept.append((word, combo))
        return CrossedElem(tuple(sorted(kept, key=lambda item: item[0].sort_key)))

    def zero(self) -> CrossedElem:
        return CrossedElem(())

    def monomial(self, word: FWord, clopen: Clopen, coeff: Scalar = 1) -> CrossedElem:
        return self.element({word: IndicatorCombo.indicator(clopen, coeff)})

    # -- arithmetic --------------------------------------------------------

    def alpha(self, word: FWord, combo: IndicatorCombo) -> IndicatorCombo:
        """``alpha_g(f) = f o theta_{g^-1}`` for ``f`` supported in ``X_{g^-1}``."""
        return combo.map_supports(lambda clopen: self.action.push(word, clopen))

    def add(self, x: CrossedElem, y: CrossedElem) -> CrossedElem:
        total: Dict[FWord, IndicatorCombo] = dict(x.terms)
        for word, combo in y.terms:
            total[word] = total[word] + combo if word in total else combo
        return self.element(total)

    def scale(self, x: CrossedElem, factor: Scalar) -> CrossedElem:
        return self.element({word: combo.scale(factor) for word, combo in x.terms})

    def sub(self, x: CrossedElem, y: CrossedElem) -> CrossedElem:
        return self.add(x, self.scale(y, -1))

    def mul(self, x: CrossedElem, y: CrossedElem) -> CrossedElem:
        total: Dict[FWord, IndicatorCombo] = {}
        for g, f in x.terms:
            pulled = self.alpha(g.inverse(), f)
            for t, h in y.terms:
                product = pulled * h
                if product.is_zero:
                    continue
                moved = self.alpha(g, product)
                word = g * t
                total[word] = total[word] + moved if word in total else moved
        return self.element(total)

    def star(self, x: CrossedElem) -> CrossedElem:
        return self.element({g.inverse(): self.alpha(g.inverse(), f) for g, f in x.terms})

    def product(self, factors: Sequence[CrossedElem]) -> CrossedElem:
        if not factors:
            raise UltrashiftError("a product needs at least one factor")
        result = factors[0]
        for factor in factors[1:]:
            result = self.mul(result, factor)
        return result

    # -- images of the generators -------------------------------------------

    def phi_s(self, edge: int) -> CrossedElem:
        """``1_e delta_e``."""
        word = FWord.of([edge])
        return self.monomial(word, self.action.domain(word))

    def phi_p(self, subset: UPSet) -> CrossedElem:
        """``1_A delta_0``; raises ``NotInGZeroError`` outside G0."""
        return self.monomial(IDENTITY, self.action.xa_set(subset))

    def phi_path(self, edges: Sequence[int]) -> CrossedElem:
        """``phi_s(e_1) ... phi_s(e_n)``, which is ``1_a delta_a`` for a path ``a``."""
        return self.product([self.phi_s(e) for e in edges])

    def phi_mixed(self, positive: Sequence[int], negative: Sequence[int]) -> CrossedElem:
        """``phi_path(a) phi_path(b)*``, which is ``1_{ab^-1} delta_{ab^-1}``."""
        if not negative:
            return self.phi_path(positive)
        right = self.star(self.phi_path(negative))
        return self.mul(self.phi_path(positive), right) if positive else right

    def range_projection(self, edge: int) -> CrossedElem:
        """``s_e s_e*``."""
        cached = self._range_projections.get(edge)
        if cached is None:
            s = self.phi_s(edge)
            cached = self.mul(s, self.star(s))
            self._range_projections[edge] = cached
        return cached

    # -- verification ------------------------------------------------------

    def relations_report(self, sets: Sequence[UPSet], edge_limit: int = 20, vrange: int = 20,
                         range_override: Optional[Dict[int, UPSet]] = None) -> RelationsReport:
        """Check the ultragraph relations on the images of the generators.

        ``sets`` are the vertex sets used for the projection relations;
        ``range_override`` replaces ``r(e)`` on the right-hand side of
        ``s_e* s_e = p_{r(e)}``, which is how a corrupted range is detected.
        """
        space = self.space
        override = range_override or {}
        checks: List[RelationCheck] = []

        def record(relation: str, subject: str, passed: bool, detail: str = "") -> None:
            checks.append(RelationCheck(relation=relation, subject=subject, passed=passed,
                                        detail="" if passed else detail))

        record("p_empty", "fin{}", self.phi_p(UPSet.empty(space.vertex_universe)).is_zero)
        for first, second in combinations_with_replacement(sets, 2):
            pa, pb = self.phi_p(first), self.phi_p(second)
            meet = self.phi_p(first & second)
            subject = f"{first}; {second}"
            product = self.mul(pa, pb)
            record("p_meet", subject, product == meet, f"p_A p_B = {product}")
            joined = self.phi_p(first | second)
            expected = self.sub(self.add(pa, pb), meet)
            record("p_union", subject, joined == expected, f"p_(A|B) = {joined}")

        edges = list(space.edges.members_upto(edge_limit))
        for e in edges:
            s = self.phi_s(e)
            s_star = self.star(s)
            left = self.mul(s_star, s)
            right = self.phi_p(override.get(e, space.range(e)))
            record("s*s", f"e_{e}", left == right, f"s_e* s_e = {left}")
            record("partial_isometry", f"e_{e}", self.mul(self.range_projection(e), s) == s)
            below = self.action.domain(FWord.of([e])) <= vertex_clopen(space, space.source(e))
            record("range_below_source", f"e_{e}", below, f"X_e is not inside X_v{space.source(e)}")

        for v in space.vertices.members_upto(vrange):
            out = space.out_edges(v)
            if not out.is_finite:
                continue
            total = self.zero()
            for e in out.members():
                total = self.add(total, self.range_projection(e))
            expected = self.phi_p(space.vertex_set([v]))
            record("vertex_sum", f"v_{v}", total == expected,
                   f"sum of s_e s_e* over {spell_edges(list(out.members()))} = {total}")

        for e, f in combinations(edges, 2):
            product = self.mul(self.range_projection(e), self.range_projection(f))
            record("orthogonal_ranges", f"e_{e}, e_{f}", product.is_zero, f"product = {product}")

        report = RelationsReport(presentation=space.name, checks=checks)
        logger.info("relations for %s: %d checks, %d failures",
                    space.name, len(checks), len(report.failures()))
        return report

    def grading_check(self, x: CrossedElem, y: CrossedElem) -> GradingReport:
        """Degrees of the components of ``x y`` are sums of degrees of ``x`` and ``y``."""
        left = sorted({degree(g) for g in x.words()})
        right = sorted({degree(t) for t in y.words()})
        allowed = {a + b for a in left for b in right}
        components, violations = [], []
        for word in self.mul(x, y).words():
            d = degree(word)
            components.append(f"{word}: {d}")
            if d not in allowed:
                violations.append(f"{word} has degree {d}, expected one of {sorted(allowed)}")
        return GradingReport(left_degrees=left, right_degrees=right,
                             components=components, violations=violations)
