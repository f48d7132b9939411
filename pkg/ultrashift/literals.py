"""Parsers for the textual syntaxes of sets, points, words, cylinders and generators.

Rendering lives on the types themselves (``str(x)``); everything printed by
the library parses back here to an equal value.

Set grammar, loosest binding first::

    set    := term (('|' | '\\') term)*
    term   := factor ('&' factor)*
    factor := '~' factor | atom
    atom   := 'fin{' [int (',' int)*] '}' | 'ap(' start ',' period ',' bits ')'
            | 'all' | '(' set ')'
"""
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .errors import ParseError
from .paction import FWord
from .setcalc import UPSet
from .topology import Cylinder, FullCylinder, RestrictedCylinder
from .ultrapath import InfinitePath, Point, Ultrapath


class _Scanner:
    """Cursor over one line of text with position-aware errors."""

    def __init__(self, text: str, line: int = 1, source: Optional[str] = None):
        self.text = text
        self.pos = 0
        self.line = line
        self.source = source

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.line, self.pos + 1, self.source)

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def at_end(self) -> bool:
        self.skip()
        return self.pos >= len(self.text)

    def looking_at(self, token: str) -> bool:
        self.skip()
        return self.text.startswith(token, self.pos)

    def accept(self, token: str) -> bool:
        if self.looking_at(token):
            self.pos += len(token)
            return True
        return False

    def expect(self, token: str) -> None:
        if not self.accept(token):
            found = self.text[self.pos:self.pos + 8] or "end of input"
            raise self.error(f"expected '{token}', found '{found}'")

    def integer(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise self.error("expected a number")
        return int(self.text[start:self.pos])

    def bits(self) -> str:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] in "01":
            self.pos += 1
        if start == self.pos:
            raise self.error("expected membership bits")
        return self.text[start:self.pos]

    def finish(self) -> None:
        if not self.at_end():
            raise self.error(f"unexpected trailing text '{self.text[self.pos:]}'")


# -- sets ---------------------------------------------------------------------


def _set_expr(scan: _Scanner, universe: Optional[int]) -> UPSet:
    result = _set_term(scan, universe)
    while True:
        if scan.accept("|"):
            result = result | _set_term(scan, universe)
        elif scan.accept("\\"):
            result = result - _set_term(scan, universe)
        else:
            return result


def _set_term(scan: _Scanner, universe: Optional[int]) -> UPSet:
    result = _set_factor(scan, universe)
    while scan.accept("&"):
        result = result & _set_factor(scan, universe)
    return result


def _set_factor(scan: _Scanner, universe: Optional[int]) -> UPSet:
    if scan.accept("~"):
        return ~_set_factor(scan, universe)
    return _set_atom(scan, universe)


def _set_atom(scan: _Scanner, universe: Optional[int]) -> UPSet:
    column = scan.pos
    try:
        if scan.accept("fin"):
            scan.expect("{")
            members = []
            if not scan.accept("}"):
                members.append(scan.integer())
                while scan.accept(","):
                    members.append(scan.integer())
                scan.expect("}")
            return UPSet.finite(members, universe)
        if scan.accept("ap"):
            scan.expect("(")
            start = scan.integer()
            scan.expect(",")
            period = scan.integer()
            scan.expect(",")
            bits = scan.bits()
            scan.expect(")")
            return UPSet.periodic(start, period, bits, universe)
    except ParseError:
        raise
    except ValueError as e:
        scan.pos = column
        raise scan.error(str(e)) from None
    if scan.accept("all"):
        return UPSet.full(universe)
    if scan.accept("("):
        inner = _set_expr(scan, universe)
        scan.expect(")")
        return inner
    raise scan.error("expected 'fin{', 'ap(', 'all' or '('")


def parse_set(text: str, universe: Optional[int] = None, line: int = 1,
              source: Optional[str] = None) -> UPSet:
    """Parse a set literal over ``universe`` (``None`` for the positive integers)."""
    scan = _Scanner(text, line, source)
    result = _set_expr(scan, universe)
    scan.finish()
    return result


# -- edges, points and cylinders ---------------------------------------------


def _edge(scan: _Scanner) -> int:
    scan.expect("e")
    edge = scan.integer()
    if edge < 1:
        raise scan.error("edge indices start at 1")
    return edge


def _edge_path(scan: _Scanner) -> Tuple[int, ...]:
    """``e1.e2...``; possibly empty."""
    if not scan.looking_at("e"):
        return ()
    edges = [_edge(scan)]
    while scan.accept("."):
        edges.append(_edge(scan))
    return tuple(edges)


def _bracketed_set(scan: _Scanner, universe: Optional[int]) -> UPSet:
    scan.expect("[")
    result = _set_expr(scan, universe)
    scan.expect("]")
    return result


def _point(scan: _Scanner, universe: Optional[int]) -> Point:
    if scan.accept("path"):
        prefix = _edge_path(scan)
        scan.expect("(")
        scan.expect("cycle")
        cycle = _edge_path(scan)
        if not cycle:
            raise scan.error("a cycle needs at least one edge")
        scan.expect(")")
        return InfinitePath(prefix, cycle)
    if scan.accept("fin"):
        edges = _edge_path(scan)
        scan.expect(":")
        return Ultrapath(edges, _bracketed_set(scan, universe))
    raise scan.error("a point starts with 'path' or 'fin'")


def parse_point(text: str, universe: Optional[int] = None, line: int = 1,
                source: Optional[str] = None) -> Point:
    """Parse ``path e1(cycle e2.e3)`` or ``fin e1:[set]``; no validity check."""
    scan = _Scanner(text, line, source)
    point = _point(scan, universe)
    scan.finish()
    return point


def parse_cylinder(text: str, universe: Optional[int] = None) -> Cylinder:
    """Parse ``full e1:[set]`` or ``restricted e1:[set] without e3,e4``."""
    scan = _Scanner(text)
    if scan.accept("full"):
        path = _edge_path(scan)
        scan.expect(":")
        cylinder: Cylinder = FullCylinder(path, _bracketed_set(scan, universe))
    elif scan.accept("restricted"):
        path = _edge_path(scan)
        scan.expect(":")
        emitter = _bracketed_set(scan, universe)
        excluded: List[int] = []
        if scan.accept("without"):
            excluded.append(_edge(scan))
            while scan.accept(","):
                excluded.append(_edge(scan))
        cylinder = RestrictedCylinder(path, emitter, UPSet.finite(excluded))
    else:
        raise scan.error("a cylinder starts with 'full' or 'restricted'")
    scan.finish()
    return cylinder


# -- words and generators ----------------------------------------------------


def parse_word(text: str) -> FWord:
    """Parse ``0``, ``e1.e2~e3`` or ``~e1``; the result is reduced."""
    scan = _Scanner(text)
    if scan.accept("0"):
        scan.finish()
        return FWord()
    letters = []
    while True:
        sign = -1 if scan.accept("~") else 1
        letters.append((_edge(scan), sign))
        if scan.at_end():
            return FWord(tuple(letters))
        scan.accept(".")


@dataclass(frozen=True)
class Generator:
    """``s:<path>``, ``s*:<path>`` or ``p:<set>`` on the command line."""
    kind: str
    edges: Tuple[int, ...] = ()
    subset: Optional[UPSet] = None


def parse_generator(text: str, universe: Optional[int] = None) -> Generator:
    scan = _Scanner(text)
    if scan.accept("s*:"):
        generator = Generator("s*", edges=_edge_path(scan))
    elif scan.accept("s:"):
        generator = Generator("s", edges=_edge_path(scan))
    elif scan.accept("p:"):
        generator = Generator("p", subset=_set_expr(scan, universe))
    else:
        raise scan.error("a generator is 's:<path>', 's*:<path>' or 'p:<set>'")
    if generator.kind != "p" and not generator.edges:
        raise scan.error("expected at least one edge")
    scan.finish()
    return generator
