"""Command handlers for the ultrashift command line.

Each handler takes an already loaded ultragraph plus the parsed arguments of
its subcommand and returns a ``CommandResult`` with the text to print and the
exit code. Exit code 1 means a check ran and failed; input errors propagate
as ``UltrashiftError`` and are turned into exit code 2 by ``main``.
"""
import logging
from pathlib import Path
from typing import List, Optional, Sequence

from .config import AnalysisConfig
from .crossed import CrossedElem, CrossedProduct
from .dynamics import local_window, morphism_check, shift, to_graph
from .errors import UltrashiftError
from .literals import Generator, parse_cylinder, parse_generator, parse_point, parse_set, parse_word
from .models import (
    CommandResult,
    ConvergenceEntry,
    ConvergenceReport,
    RangeDecompositionEntry,
    RfumReport,
    ValidationReport,
)
from .oracle import TruncatedGraph, enumerate_points, naive_act, naive_minimal_emitters, truncate
from .paction import PartialAction, degree
from .setcalc import UPSet
from .topology import clopen_op, converges, cyl_to_clopen, separate, shift_image
from .ug_files import format_presentation, load_sequence, load_table
from .ultragraph import GSet, RfumPass, Ultragraph
from .ultrapath import Point, validate_point

logger = logging.getLogger(__name__)


def _point(space: Ultragraph, text: str) -> Point:
    return validate_point(space, parse_point(text, space.vertex_universe))


def _universe_label(space: Ultragraph) -> str:
    universe = space.vertex_universe
    return "infinite" if universe is None else str(universe)


def validation_report(space: Ultragraph) -> ValidationReport:
    return ValidationReport(
        presentation=space.name,
        vertex_universe=_universe_label(space),
        families=len(space.families),
        edges=str(space.edges),
        distinct_ranges=[f"r(e_{edge}) = {rng}" for rng, edge in space.distinct_ranges()],
    )


def rfum_report(space: Ultragraph) -> RfumReport:
    result = space.rfum_check()
    if not isinstance(result, RfumPass):
        return RfumReport(presentation=space.name, verdict="Fail", edge=result.edge,
                          residual=str(result.residual))
    decompositions = [
        RangeDecompositionEntry(
            edge=d.edge,
            range=str(d.range),
            emitters=[str(a) for a in d.emitters],
            singletons=list(d.singletons.members()),
        )
        for d in result.decompositions
    ]
    return RfumReport(presentation=space.name, verdict="Pass", decompositions=decompositions)


# -- set analyses ------------------------------------------------------------


def handle_validate(space: Ultragraph, args, config: AnalysisConfig) -> CommandResult:
    return CommandResult(output=validation_report(space).render())


def handle_emitters(space: Ultragraph, args, config: AnalysisConfig) -> CommandResult:
    emitters = space.minimal_infinite_emitters()
    lines = [f"minimal infinite emitters of {space.name}: {len(emitters)}"]
    lines += [f"  {a}" for a in emitters]
    if not getattr(args, "oracle", False):
        return CommandResult(output="\n".join(lines))
    symbolic = sorted((frozenset(int(i) for i, bit in enumerate(truncate(a, config.cap)) if bit)
                       for a in emitters), key=sorted)
    naive = naive_minimal_emitters(space, config.cap)
    agree = symbolic == naive
    lines.append(f"oracle (cap {config.cap}): {'agrees' if agree else 'DISAGREES'}")
    if not agree:
        lines += [f"  oracle {sorted(s)}" for s in naive]
    return CommandResult(output="\n".join(lines), exit_code=0 if agree else 1)


def handle_rfum(space: Ultragraph, args, config: AnalysisConfig) -> CommandResult:
    report = rfum_report(space)
    return CommandResult(output=report.render(), exit_code=0 if report.passed else 1)


def handle_lattice(space: Ultragraph, args, config: AnalysisConfig) -> CommandResult:
    lattice = space.range_lattice()
    lines = [f"range lattice of {space.name}: {len(lattice)} elements"]
    lines += [f"  {element}" for element in lattice]
    return CommandResult(output="\n".join(lines))


def handle_gzero(space: Ultragraph, args, config: AnalysisConfig) -> CommandResult:
    subset = parse_set(args.set, space.vertex_universe)
    result = space.gzero_member(subset)
    if not isinstance(result, GSet):
        return CommandResult(output=f"not in G0: residual {result.residual}", exit_code=1)
    lines = [f"in G0: {subset}"]
    lines += [f"  lattice part {part}" for part in result.lattice_parts]
    lines.append(f"  finite part {result.finite_part}")
    return CommandResult(output="\n".join(lines))


# -- dynamics ----------------------------------------------------------------


def handle_shift(space: Ultragraph, args, config: AnalysisConfig) -> CommandResult:
    return CommandResult(output=str(shift(_point(space, args.point))))


def handle_window(space: Ultragraph, args, config: AnalysisConfig) -> CommandResult:
    window = local_window(space, _point(space, args.point))
    image = shift_image(cyl_to_clopen(space, window))
    return CommandResult(output=f"{window}\nimage: {image}")


def handle_tograph(space: Ultragraph, args, config: AnalysisConfig) -> CommandResult:
    graph, conjugacy = to_graph(space)
    labels = [f"# f{k} = e{e} to v{v}" for k, (e, v) in enumerate(conjugacy.labels, start=1)]
    return CommandResult(output="\n".join(labels) + "\n" + format_presentation(graph.presentation))


def handle_checkmorphism(space: Ultragraph, args, config: AnalysisConfig) -> CommandResult:
    table = load_table(Path(args.table), space)
    report = morphism_check(table, config.depth)
    return CommandResult(output=report.render(), exit_code=0 if report.passed else 1)


# -- partial action ----------------------------------------------------------


def handle_domain(space: Ultragraph, args, config: AnalysisConfig) -> CommandResult:
    word = parse_word(args.word)
    return CommandResult(output=str(PartialAction(space).domain(word)))


def handle_act(space: Ultragraph, args, config: AnalysisConfig) -> CommandResult:
    word = parse_word(args.word)
    return CommandResult(output=str(PartialAction(space).act(word, _point(space, args.point))))


def handle_axioms(space: Ultragraph, args, config: AnalysisConfig) -> CommandResult:
    action = PartialAction(space)
    t, h = parse_word(args.t), parse_word(args.h)
    sample = enumerate_points(space, config.prefix_len, config.cycle_len, config.cap)
    report = action.axioms_check(t, h, sample)
    output, passed = report.render(), report.passed
    if getattr(args, "oracle", False):
        graph = TruncatedGraph(space, config.cap)
        disagreements = 0
        for word in (t, h, t * h):
            domain = action.domain(word.inverse())
            for x in sample:
                expected = naive_act(graph, word, x)
                actual = action.act(word, x) if domain.member(x) else None
                disagreements += expected != actual
        output += f"\noracle (cap {config.cap}): {disagreements} disagreements"
        passed = passed and disagreements == 0
    return CommandResult(output=output, exit_code=0 if passed else 1)


# -- topology ----------------------------------------------------------------


def handle_separate(space: Ultragraph, args, config: AnalysisConfig) -> CommandResult:
    first, second = separate(space, _point(space, args.x), _point(space, args.y))
    return CommandResult(output=f"{first}\n{second}")


def handle_converge(space: Ultragraph, args, config: AnalysisConfig) -> CommandResult:
    sequence = load_sequence(Path(args.seqfile), space)
    target = _point(space, args.point)
    verdict = converges(space, sequence, target, config.horizon, config.depth)
    report = ConvergenceReport(
        target=str(target),
        horizon=verdict.horizon,
        verdict=verdict.verdict,
        tests=[ConvergenceEntry(description=t.description, settled_from=t.settled_from,
                                window_failures=t.window_failures) for t in verdict.tests],
    )
    return CommandResult(output=report.render(), exit_code=0 if report.passed else 1)


def handle_cyl(space: Ultragraph, args, config: AnalysisConfig) -> CommandResult:
    cylinder = parse_cylinder(args.cylinder, space.vertex_universe)
    return CommandResult(output=str(cyl_to_clopen(space, cylinder)))


def handle_clopen(space: Ultragraph, args, config: AnalysisConfig) -> CommandResult:
    first = cyl_to_clopen(space, parse_cylinder(args.first, space.vertex_universe))
    second = cyl_to_clopen(space, parse_cylinder(args.second, space.vertex_universe))
    return CommandResult(output=str(clopen_op(args.op, first, second)))


# -- crossed product ---------------------------------------------------------


def _generator_element(algebra: CrossedProduct, generator: Generator) -> CrossedElem:
    if generator.kind == "p":
        return algebra.phi_p(generator.subset)
    element = algebra.phi_path(generator.edges)
    return algebra.star(element) if generator.kind == "s*" else element


def _product(algebra: CrossedProduct, texts: Sequence[str]) -> CrossedElem:
    universe = algebra.space.vertex_universe
    factors = [_generator_element(algebra, parse_generator(text, universe)) for text in texts]
    return algebra.product(factors)


def handle_mul(space: Ultragraph, args, config: AnalysisConfig) -> CommandResult:
    algebra = CrossedProduct(space)
    return CommandResult(output=str(_product(algebra, args.generators)))


def handle_star(space: Ultragraph, args, config: AnalysisConfig) -> CommandResult:
    algebra = CrossedProduct(space)
    return CommandResult(output=str(algebra.star(_product(algebra, args.generators))))


def default_relation_sets(space: Ultragraph, extra: Optional[List[UPSet]] = None) -> List[UPSet]:
    """The range lattice, the first two single vertices and any extra sets."""
    sets = list(space.range_lattice())
    sets += [space.vertex_set([v]) for v in space.vertices.members_upto(2)]
    return sets + list(extra or [])


def handle_relations(space: Ultragraph, args, config: AnalysisConfig) -> CommandResult:
    extra = [parse_set(text, space.vertex_universe) for text in getattr(args, "sets", None) or []]
    report = CrossedProduct(space).relations_report(
        default_relation_sets(space, extra), config.edge_limit, config.vrange
    )
    return CommandResult(output=report.render(), exit_code=0 if report.passed else 1)


def handle_degree(args) -> CommandResult:
    return CommandResult(output=str(degree(parse_word(args.word))))


HANDLERS = {
    "validate": handle_validate,
    "emitters": handle_emitters,
    "rfum": handle_rfum,
    "lattice": handle_lattice,
    "gzero": handle_gzero,
    "shift": handle_shift,
    "window": handle_window,
    "tograph": handle_tograph,
    "checkmorphism": handle_checkmorphism,
    "domain": handle_domain,
    "act": handle_act,
    "axioms": handle_axioms,
    "relations": handle_relations,
    "separate": handle_separate,
    "converge": handle_converge,
    "cyl": handle_cyl,
    "clopen": handle_clopen,
    "mul": handle_mul,
    "star": handle_star,
}


def dispatch(command: str, space: Ultragraph, args, config: AnalysisConfig) -> CommandResult:
    try:
        handler = HANDLERS[command]
    except KeyError:
        raise UltrashiftError(f"unknown command '{command}'") from None
    logger.debug("running %s on %s", command, space.name)
    return handler(space, args, config)
