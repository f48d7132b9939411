"""Reading and writing presentation, morphism-table and sequence files.

A presentation file is a list of sections::

    # comments run to the end of the line
    [vertices]
    universe = infinite          # or the number of vertices

    [family]
    kind = single
    edge = 1
    source = 1
    range = ap(3,1,1)

    [family]
    kind = indexed
    indices = ap(2,1,1)
    source = i                   # a*i+b, i-1, or a constant vertex
    range = all                  # or range[0] = ..., range[1] = ... by i mod q

Every problem is reported as a ``ParseError`` carrying the line and column.
"""
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .dynamics import MorphismTable
from .errors import ParseError, UltrashiftError
from .literals import parse_point, parse_set
from .setcalc import UPSet
from .ultragraph import EdgeFamily, IndexedFamily, SingleEdge, Ultragraph, UltragraphPresentation
from .ultrapath import Point, validate_point

logger = logging.getLogger(__name__)

_SOURCE_RULE = re.compile(r"^(?:(\d+)\s*\*\s*)?i\s*(?:([+-])\s*(\d+))?$")
_RANGE_KEY = re.compile(r"^range\[(\d+)\]$")
_TEMPLATE = re.compile(r"\{\s*(?:(\d+)\s*\*\s*)?n\s*(?:([+-])\s*(\d+))?\s*\}")


@dataclass
class _Entry:
    value: str
    line: int
    column: int


@dataclass
class _Section:
    name: str
    line: int
    entries: Dict[str, _Entry] = field(default_factory=dict)


class VerticesSection(BaseModel):
    """The ``[vertices]`` section."""
    model_config = ConfigDict(extra="forbid")

    universe: Union[Literal["infinite"], int] = Field(description="'infinite' or a vertex count")

    @field_validator("universe")
    @classmethod
    def _positive(cls, value):
        if isinstance(value, int) and value < 1:
            raise ValueError("a finite universe needs at least one vertex")
        return value


class FamilySection(BaseModel):
    """One ``[family]`` section before its sets are parsed."""
    model_config = ConfigDict(extra="forbid")

    kind: Literal["single", "indexed"] = Field(description="single edge or indexed family")
    edge: Optional[int] = Field(None, ge=1, description="Edge index of a single edge")
    indices: Optional[str] = Field(None, description="Index set of an indexed family")
    source: str = Field(description="Source vertex or affine rule in i")
    range: Optional[str] = Field(None, description="Range of every edge")
    ranges: Dict[int, str] = Field(default_factory=dict, description="Ranges by i mod q")


def _split_sections(text: str, source: Optional[str]) -> List[_Section]:
    sections: List[_Section] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        if stripped.startswith("[") and stripped.endswith("]"):
            sections.append(_Section(stripped[1:-1].strip(), number))
            continue
        if "=" not in line:
            raise ParseError("expected 'key = value'", number, len(raw) - len(raw.lstrip()) + 1,
                             source)
        if not sections:
            raise ParseError("entry outside a section", number, 1, source)
        key, value = line.split("=", 1)
        column = len(key) + 2 + (len(value) - len(value.lstrip()))
        key = key.strip()
        if key in sections[-1].entries:
            raise ParseError(f"duplicate key '{key}'", number, 1, source)
        sections[-1].entries[key] = _Entry(value.strip(), number, column)
    return sections


def _set_value(entry: _Entry, universe: Optional[int], source: Optional[str]) -> UPSet:
    try:
        return parse_set(entry.value, universe)
    except ParseError as e:
        raise ParseError(e.message, entry.line, entry.column + e.column - 1, source) from None


def _source_rule(entry: _Entry, source: Optional[str]) -> Tuple[int, int]:
    """``(coeff, offset)`` of ``s(e_i) = coeff*i + offset``."""
    text = entry.value.replace(" ", "")
    if text.isdigit():
        return 0, int(text)
    match = _SOURCE_RULE.match(text)
    if not match:
        raise ParseError(f"bad source rule '{entry.value}'", entry.line, entry.column, source)
    coeff = int(match.group(1) or 1)
    offset = int(match.group(3) or 0)
    if match.group(2) == "-":
        offset = -offset
    return coeff, offset


def _family(section: _Section, universe: Optional[int], source: Optional[str]) -> EdgeFamily:
    raw = {key: entry.value for key, entry in section.entries.items() if not _RANGE_KEY.match(key)}
    raw["ranges"] = {int(_RANGE_KEY.match(key).group(1)): entry.value
                     for key, entry in section.entries.items() if _RANGE_KEY.match(key)}
    try:
        model = FamilySection(**raw)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(part) for part in first["loc"])
        raise ParseError(f"[family] {where}: {first['msg']}", section.line, 1, source) from None

    rule = section.entries["source"]
    coeff, offset = _source_rule(rule, source)
    if model.range is not None and model.ranges:
        raise ParseError("give either 'range' or 'range[k]' entries, not both",
                         section.line, 1, source)
    if model.range is not None:
        ranges = (_set_value(section.entries["range"], universe, source),)
    elif model.ranges:
        if sorted(model.ranges) != list(range(len(model.ranges))):
            raise ParseError("range[k] keys must be 0..q-1", section.line, 1, source)
        ranges = tuple(_set_value(section.entries[f"range[{k}]"], universe, source)
                       for k in range(len(model.ranges)))
    else:
        raise ParseError("[family] needs a range", section.line, 1, source)

    if model.kind == "single":
        if model.edge is None or coeff != 0 or len(ranges) != 1:
            raise ParseError("a single edge needs 'edge', a constant source and one range",
                             section.line, 1, source)
        return SingleEdge(model.edge, offset, ranges[0])
    if model.indices is None:
        raise ParseError("an indexed family needs 'indices'", section.line, 1, source)
    indices = _set_value(section.entries["indices"], None, source)
    return IndexedFamily(indices, coeff, offset, ranges)


def parse_presentation(text: str, source: Optional[str] = None) -> UltragraphPresentation:
    """Parse presentation text; semantic validation happens in ``Ultragraph``."""
    sections = _split_sections(text, source)
    heads = [s for s in sections if s.name == "vertices"]
    if len(heads) != 1:
        raise ParseError("exactly one [vertices] section is required",
                         heads[1].line if heads else 1, 1, source)
    head = heads[0]
    entries = {key: entry.value for key, entry in head.entries.items()}
    if entries.get("universe", "").isdigit():
        entries["universe"] = int(entries["universe"])
    try:
        universe = VerticesSection(**entries).universe
    except ValidationError as e:
        first = e.errors()[0]
        raise ParseError(f"[vertices] {first['msg']}", head.line, 1, source) from None
    universe = None if universe == "infinite" else universe

    families = []
    for section in sections:
        if section.name == "vertices":
            continue
        if section.name != "family":
            raise ParseError(f"unknown section [{section.name}]", section.line, 1, source)
        families.append(_family(section, universe, source))
    return UltragraphPresentation(universe, tuple(families))


def load_presentation(path: Union[str, Path]) -> Ultragraph:
    """Read, parse and validate a presentation file; the name is the file stem."""
    path = Path(path)
    presentation = parse_presentation(path.read_text(), source=str(path))
    logger.info("loaded %s with %d families", path.name, len(presentation.families))
    return Ultragraph(presentation, name=path.stem)


def _format_source(family: IndexedFamily) -> str:
    if family.coeff == 0:
        return str(family.offset)
    text = "i" if family.coeff == 1 else f"{family.coeff}*i"
    if family.offset:
        text += f"{'+' if family.offset > 0 else '-'}{abs(family.offset)}"
    return text


def format_presentation(presentation: UltragraphPresentation) -> str:
    """Presentation text that parses back to ``presentation``."""
    universe = presentation.vertex_universe
    lines = ["[vertices]", f"universe = {'infinite' if universe is None else universe}"]
    for family in presentation.families:
        lines.append("")
        lines.append("[family]")
        if isinstance(family, SingleEdge):
            lines += ["kind = single", f"edge = {family.edge}", f"source = {family.source}",
                      f"range = {family.range}"]
            continue
        lines += ["kind = indexed", f"indices = {family.indices}",
                  f"source = {_format_source(family)}"]
        if len(family.ranges) == 1:
            lines.append(f"range = {family.ranges[0]}")
        else:
            lines += [f"range[{k}] = {r}" for k, r in enumerate(family.ranges)]
    return "\n".join(lines) + "\n"


# -- morphism tables and sequences -------------------------------------------


def _content_lines(text: str):
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line


def _checked_point(text: str, space: Ultragraph, line: int, source: str) -> Point:
    point = parse_point(text, space.vertex_universe, line, source)
    try:
        return validate_point(space, point)
    except UltrashiftError as e:
        raise ParseError(str(e), line, 1, source) from None


def load_table(path: Union[str, Path], space: Ultragraph) -> MorphismTable:
    """Read ``point -> point`` lines; ``[target] other.ug`` names the target space."""
    path = Path(path)
    target = space
    entries: Dict[Point, Point] = {}
    for number, line in _content_lines(path.read_text()):
        if line.startswith("[target]"):
            target = load_presentation(path.parent / line[len("[target]"):].strip())
            continue
        if "->" not in line:
            raise ParseError("expected 'point -> point'", number, 1, str(path))
        left, right = line.split("->", 1)
        x = _checked_point(left.strip(), space, number, str(path))
        if x in entries:
            raise ParseError(f"{x} is listed twice", number, 1, str(path))
        entries[x] = _checked_point(right.strip(), target, number, str(path))
    return MorphismTable(entries, space, target)


def _expand_template(template: str, n: int) -> str:
    def value(match: re.Match) -> str:
        coeff = int(match.group(1) or 1)
        offset = int(match.group(3) or 0)
        return str(coeff * n + (-offset if match.group(2) == "-" else offset))

    return _TEMPLATE.sub(value, template)


def load_sequence(path: Union[str, Path], space: Ultragraph) -> Union[List[Point], Callable[[int], Point]]:
    """Read an explicit list of points, or a ``rule <point template>`` line.

    Templates use ``{n}``, ``{n+k}`` and ``{a*n+k}`` for numbers depending on
    the term index ``n = 1, 2, ...``.
    """
    path = Path(path)
    lines = list(_content_lines(path.read_text()))
    if lines and lines[0][1].startswith("rule "):
        if len(lines) > 1:
            raise ParseError("a rule file holds a single rule line", lines[1][0], 1, str(path))
        number, line = lines[0]
        template = line[len("rule "):].strip()
        _checked_point(_expand_template(template, 1), space, number, str(path))
        return lambda n: validate_point(
            space, parse_point(_expand_template(template, n), space.vertex_universe)
        )
    return [_checked_point(line, space, number, str(path)) for number, line in lines]
