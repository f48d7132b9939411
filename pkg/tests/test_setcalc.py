"""Tests for ultimately periodic sets."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ultrashift.errors import UniverseMismatch
from ultrashift.oracle import truncate
from ultrashift.setcalc import UPSet, ups_cardinality, ups_equal, ups_op

ODDS = UPSet.periodic(1, 2, "10")
EVENS = UPSet.periodic(2, 2, "10")
ALL = UPSet.full()
COFIN3 = UPSet.periodic(3, 1, "1")

upsets = st.builds(
    lambda prefix, pattern: UPSet(None, prefix, pattern),
    st.text(alphabet="01", max_size=6),
    st.text(alphabet="01", min_size=1, max_size=4),
)
trees = st.recursive(
    upsets,
    lambda children: st.one_of(
        st.tuples(st.sampled_from(["union", "intersect", "difference"]), children, children),
        st.tuples(st.just("complement"), children),
    ),
    max_leaves=6,
)

BOUND = 10_000


def evaluate(tree):
    """Evaluate an operation tree symbolically and on explicit masks."""
    if isinstance(tree, UPSet):
        return tree, truncate(tree, BOUND)
    if tree[0] == "complement":
        inner, mask = evaluate(tree[1])
        result = ~mask
        result[0] = False
        return ups_op("complement", inner), result
    kind, left, right = tree
    (a, ma), (b, mb) = evaluate(left), evaluate(right)
    combined = {"union": ma | mb, "intersect": ma & mb, "difference": ma & ~mb}[kind]
    return ups_op(kind, a, b), combined


class TestOperations:
    """Boolean operations on ultimately periodic sets."""

    def test_odds_union_evens(self):
        """Odds and evens partition the positive integers."""
        assert ups_op("union", ODDS, EVENS) == ALL

    def test_odds_intersect_evens(self):
        """Odds and evens are disjoint."""
        assert ups_op("intersect", ODDS, EVENS).is_empty

    def test_cofinite_meets_finite(self):
        """{i >= 3} & {1,2,3} is {3}."""
        assert COFIN3 & UPSet.finite([1, 2, 3]) == UPSet.finite([3])

    def test_complement_in_finite_universe(self):
        """Complements are taken inside the universe."""
        assert ~UPSet.finite([1], 3) == UPSet.finite([2, 3], 3)

    def test_universe_mismatch(self):
        """Sets over different universes cannot be combined."""
        with pytest.raises(UniverseMismatch):
            UPSet.finite([1], 3) | UPSet.finite([1])

    def test_unknown_operation(self):
        """Unknown operation names are rejected."""
        with pytest.raises(ValueError, match="unknown set operation"):
            ups_op("xor", ODDS, EVENS)

    def test_subset_operators(self):
        """``<=`` is inclusion and ``<`` is proper inclusion."""
        assert COFIN3 <= ALL
        assert COFIN3 < ALL
        assert not ALL < ALL
        assert not ODDS <= EVENS

    @settings(max_examples=1000, deadline=None)
    @given(trees)
    def test_matches_brute_force(self, tree):
        """Symbolic results agree with masks on indices below 10^4."""
        symbolic, mask = evaluate(tree)
        assert np.array_equal(truncate(symbolic, BOUND), mask)

    @settings(max_examples=200, deadline=None)
    @given(upsets, upsets, upsets)
    def test_de_morgan_and_distributivity(self, a, b, c):
        """De Morgan and distributive laws hold as equalities."""
        assert ~(a | b) == ~a & ~b
        assert ~(a & b) == ~a | ~b
        assert a & (b | c) == (a & b) | (a & c)
        assert a | (b & c) == (a | b) & (a | c)


class TestCardinality:
    """Finite/infinite classification."""

    def test_finite_pair(self):
        """{1,2} has two members."""
        assert str(ups_cardinality(UPSet.finite([1, 2]))) == "Finite(2)"

    def test_odds_infinite(self):
        """The odd numbers are infinite."""
        assert str(ups_cardinality(ODDS)) == "Infinite"

    def test_self_difference(self):
        """A set minus itself is empty."""
        assert str(ups_cardinality(COFIN3 - COFIN3)) == "Finite(0)"

    @settings(max_examples=200, deadline=None)
    @given(upsets)
    def test_agrees_with_counting(self, s):
        """Finite cardinalities equal the number of members up to t + p."""
        card = ups_cardinality(s)
        if card.is_infinite:
            assert "1" in s.pattern
        else:
            assert card.count == sum(s.contains(i) for i in range(1, s.threshold + s.period + 1))


class TestCanonicalForm:
    """Equality is structural on canonical forms."""

    def test_period_minimized(self):
        """Pattern 1010 reduces to pattern 10."""
        assert ups_equal(UPSet(None, "", "10"), UPSet(None, "", "1010"))

    def test_threshold_minimized(self):
        """A prefix bit that continues the pattern joins the tail."""
        assert UPSet(None, "1", "01") == ODDS
        assert ODDS.threshold == 0

    def test_odds_differ_from_evens(self):
        """Different sets have different forms."""
        assert not ups_equal(ODDS, EVENS)

    def test_union_with_empty(self):
        """S | {} == S."""
        assert ups_equal(COFIN3, COFIN3 | UPSet.empty())

    def test_finite_universe_padding(self):
        """Finite-universe sets store exactly n bits."""
        s = UPSet.finite([2], 4)
        assert s.prefix == "0100"
        assert s.pattern == ""

    def test_members_outside_universe(self):
        """Members beyond a finite universe are rejected."""
        with pytest.raises(ValueError, match="outside the finite universe"):
            UPSet.finite([5], 3)


class TestMembersAndMaps:
    """Enumeration and affine maps."""

    def test_members_upto(self):
        """Members are produced in increasing order."""
        assert list(COFIN3.members_upto(6)) == [3, 4, 5, 6]
        assert list(UPSet.finite([2, 7]).members()) == [2, 7]

    def test_min(self):
        """The smallest member, or None for the empty set."""
        assert EVENS.min() == 2
        assert UPSet.empty().min() is None

    def test_preimage_of_shift(self):
        """{i : i + 1 is odd} is the even numbers."""
        assert ODDS.preimage_affine(1, 1, ALL) == EVENS

    def test_preimage_of_doubling(self):
        """Doubling lands in the evens and never in the odds."""
        assert EVENS.preimage_affine(2, 0, ALL) == ALL
        assert ODDS.preimage_affine(2, 0, ALL).is_empty

    def test_constant_preimage(self):
        """A constant map pulls back to everything or nothing."""
        assert ODDS.preimage_affine(0, 3, COFIN3) == COFIN3
        assert EVENS.preimage_affine(0, 3, COFIN3).is_empty

    def test_image_of_doubling(self):
        """Doubling the positive integers gives the evens."""
        assert ALL.image_affine(2, 0, None) == EVENS
        assert UPSet.finite([1, 2]).image_affine(3, 1, None) == UPSet.finite([4, 7])
