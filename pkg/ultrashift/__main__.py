"""Command-line interface for ultrashift."""

import argparse
import logging
import sys
from typing import List, Optional

from .config import AnalysisConfig
from .handlers import dispatch, handle_degree
from .ug_files import load_presentation


def create_parser() -> argparse.ArgumentParser:
    """Create the command-line argument parser."""
    parser = argparse.ArgumentParser(
        description="Edge shift spaces of ultragraphs: analyses, dynamics and the crossed product",
        prog="ultrashift",
    )
    parser.add_argument("--log-level", default="WARNING",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
                        help="Logging level (logs go to stderr)")
    parser.add_argument("--cap", type=int, help="Index cap for oracles and point enumeration")
    parser.add_argument("--vrange", type=int, help="Vertices checked by the vertex-sum relation")
    parser.add_argument("--edge-limit", dest="edge_limit", type=int,
                        help="Edges swept by 'relations'")
    parser.add_argument("--horizon", type=int, help="Terms inspected by 'converge'")
    parser.add_argument("--depth", type=int, help="Shift-closure depth for morphism tables")
    parser.add_argument("--prefix-len", dest="prefix_len", type=int,
                        help="Longest prefix of enumerated sample points")
    parser.add_argument("--cycle-len", dest="cycle_len", type=int,
                        help="Longest cycle of enumerated sample points")

    commands = parser.add_subparsers(dest="command", required=True)

    def command(name: str, help_text: str, *operands: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=help_text)
        sub.add_argument("presentation", help="Presentation file (.ug)")
        for operand in operands:
            sub.add_argument(operand)
        return sub

    command("validate", "Validate a presentation and list its distinct ranges")
    command("emitters", "List minimal infinite emitters").add_argument(
        "--oracle", action="store_true", help="Cross-check with brute-force enumeration")
    command("rfum", "Check Condition (RFUM)")
    command("lattice", "List the range lattice")
    command("gzero", "Decide membership of a vertex set in G0", "set")
    command("shift", "Apply the shift map to a point", "point")
    command("window", "Neighborhood on which the shift is injective", "point")
    command("tograph", "Convert a finite ultragraph to a graph")
    command("checkmorphism", "Check a morphism table", "table")
    command("domain", "Domain X_c of a free-group word", "word")
    command("act", "Apply theta_c to a point", "word", "point")
    command("axioms", "Check the partial-action axioms for two words", "t", "h").add_argument(
        "--oracle", action="store_true", help="Cross-check every image with the naive action")
    command("relations", "Verify the ultragraph relations in the crossed product").add_argument(
        "--set", dest="sets", action="append", help="Extra vertex set for the projection relations")
    command("separate", "Disjoint neighborhoods of two distinct points", "x", "y")
    command("converge", "Test convergence of a sequence file to a point", "seqfile", "point")
    command("cyl", "Normal form of a cylinder", "cylinder")
    clopen = command("clopen", "Combine two cylinders")
    clopen.add_argument("op", choices=["union", "intersect", "difference"])
    clopen.add_argument("first")
    clopen.add_argument("second")
    command("mul", "Multiply generator images").add_argument("generators", nargs="+")
    command("star", "Adjoint of a product of generator images").add_argument(
        "generators", nargs="+")
    degree = commands.add_parser("degree", help="Gauge degree of a free-group word")
    degree.add_argument("word")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for the application."""
    parser = create_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=args.log_level, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")

    try:
        config = AnalysisConfig.from_args(args)
        if args.command == "degree":
            result = handle_degree(args)
        else:
            space = load_presentation(args.presentation)
            result = dispatch(args.command, space, args, config)
    except (ValueError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return 2

    print(result.output)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
