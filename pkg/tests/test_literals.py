"""Tests for the textual syntaxes."""
import pytest

from ultrashift.errors import ParseError
from ultrashift.literals import Generator, parse_cylinder, parse_generator, parse_point, parse_set, parse_word
from ultrashift.paction import FWord
from ultrashift.setcalc import UPSet
from ultrashift.topology import FullCylinder, RestrictedCylinder
from ultrashift.ultrapath import InfinitePath, Ultrapath

ODDS = UPSet.periodic(1, 2, "10")
EVENS = UPSet.periodic(2, 2, "10")
COFIN3 = UPSet.periodic(3, 1, "1")


class TestParseSet:
    """Set literals and expressions."""

    def test_finite_and_periodic(self):
        """A finite head plus a cofinite tail is everything."""
        assert parse_set("fin{1,2} | ap(3,1,1)") == UPSet.full()

    def test_empty_literal(self):
        """fin{} is the empty set."""
        assert parse_set("fin{}").is_empty

    def test_precedence(self):
        """& binds tighter than |."""
        assert parse_set("fin{1} | fin{2} & fin{3}") == UPSet.finite([1])
        assert parse_set("(fin{1} | fin{2}) & fin{2}") == UPSet.finite([2])

    def test_complement_and_difference(self):
        """~ and \\ are complement and difference."""
        assert parse_set("ap(1,2,10) & ~fin{1}") == UPSet.periodic(3, 2, "10")
        assert parse_set("all \\ ap(1,2,10)") == EVENS

    def test_finite_universe(self):
        """Complements stay inside a finite universe."""
        assert parse_set("~fin{1}", universe=3) == UPSet.finite([2, 3], 3)

    def test_rendered_forms_parse_back(self):
        """Printed sets parse to equal values."""
        for s in (ODDS, EVENS, COFIN3, UPSet.finite([2, 5]) | UPSet.periodic(9, 3, "101")):
            assert parse_set(str(s)) == s

    def test_wrong_bit_count(self):
        """ap needs exactly ``period`` bits."""
        with pytest.raises(ParseError, match="exactly 2 bits") as info:
            parse_set("ap(1,2,1)")
        assert info.value.column == 1

    def test_missing_number(self):
        """The column points at the offending character."""
        with pytest.raises(ParseError, match="expected a number") as info:
            parse_set("fin{1,")
        assert info.value.column == 7

    def test_trailing_text(self):
        """Unconsumed input is an error."""
        with pytest.raises(ParseError, match="unexpected trailing text"):
            parse_set("fin{1} junk")

    def test_member_outside_universe(self):
        """Range errors surface as parse errors."""
        with pytest.raises(ParseError, match="outside the finite universe"):
            parse_set("fin{4}", universe=3)

    def test_error_location(self):
        """Line and source name appear in the message."""
        with pytest.raises(ParseError, match=r"^g\.ug:5:1: "):
            parse_set("nope", line=5, source="g.ug")


class TestParsePoint:
    """Point literals."""

    def test_infinite_path(self):
        """Cycles are reduced to their primitive root."""
        point = parse_point("path e1(cycle e3.e3)")
        assert point == InfinitePath((1,), (3,))
        assert str(point) == "path e1(cycle e3)"

    def test_prefix_absorbed_into_cycle(self):
        """A prefix that repeats the cycle is folded away."""
        point = parse_point("path e2.e3(cycle e2.e3)")
        assert point == InfinitePath((), (2, 3))
        assert parse_point(str(point)) == point

    def test_finite_point(self):
        """fin e1:[set] is the ultrapath (e1, set)."""
        point = parse_point("fin e1:[ap(3,1,1)]")
        assert point == Ultrapath((1,), COFIN3)
        assert str(point) == "fin e1:[ap(3,1,1)]"

    def test_length_zero(self):
        """A point without edges is a vertex set."""
        point = parse_point("fin :[fin{1}]")
        assert point.length == 0

    def test_empty_cycle(self):
        """Cycles need an edge."""
        with pytest.raises(ParseError, match="at least one edge"):
            parse_point("path e1(cycle )")

    def test_unknown_keyword(self):
        """Points start with path or fin."""
        with pytest.raises(ParseError, match="starts with 'path' or 'fin'"):
            parse_point("e1.e2")


class TestParseCylinder:
    """Cylinder literals."""

    def test_full(self):
        """full path:[set]."""
        assert parse_cylinder("full e1.e2:[all]") == FullCylinder((1, 2), UPSet.full())

    def test_restricted(self):
        """restricted with excluded edges renders back unchanged."""
        text = "restricted e1:[ap(3,1,1)] without e3,e4"
        cylinder = parse_cylinder(text)
        assert cylinder == RestrictedCylinder((1,), COFIN3, UPSet.finite([3, 4]))
        assert str(cylinder) == text

    def test_restricted_without_exclusions(self):
        """The without clause is optional."""
        assert parse_cylinder("restricted :[ap(3,1,1)]").excluded.is_empty


class TestParseWord:
    """Free-group words."""

    def test_mixed(self):
        """e1.e2~e3 is e1 e2 e3^-1."""
        word = parse_word("e1.e2~e3")
        assert word == FWord(((1, 1), (2, 1), (3, -1)))
        assert word == FWord.of((1, 2), (3,))
        assert str(word) == "e1.e2~e3"

    def test_cancellation(self):
        """Words are reduced on construction."""
        assert parse_word("e1~e1") == FWord()
        assert str(parse_word("e1~e1")) == "0"

    def test_zero_and_inverse(self):
        """0 is the identity and ~e1 an inverse edge."""
        assert parse_word("0") == FWord()
        assert parse_word("~e1") == FWord(((1, -1),))

    def test_degenerate_renders_back(self):
        """Words outside a b^-1 still print and parse."""
        word = parse_word("e1~e2.e3")
        assert word.shape == "Degenerate"
        assert parse_word(str(word)) == word


class TestParseGenerator:
    """Generator operands of mul and star."""

    def test_kinds(self):
        """s, s* and p generators."""
        assert parse_generator("s:e1.e2") == Generator("s", edges=(1, 2))
        assert parse_generator("s*:e1") == Generator("s*", edges=(1,))
        assert parse_generator("p:ap(1,2,10)") == Generator("p", subset=ODDS)

    def test_missing_edges(self):
        """s needs a path."""
        with pytest.raises(ParseError, match="at least one edge"):
            parse_generator("s:")

    def test_unknown_kind(self):
        """Anything else is rejected."""
        with pytest.raises(ParseError, match="generator is"):
            parse_generator("q:1")
