"""Analysis settings shared by the command-line handlers."""
import argparse
from dataclasses import dataclass, fields


@dataclass(frozen=True)
class AnalysisConfig:
    """Bounds for sweeps, enumerations and convergence tests.

    Attributes:
        cap: edge and vertex index cap for oracles and point enumeration
        vrange: vertices ``1..vrange`` checked by the vertex-sum relation
        edge_limit: edges ``1..edge_limit`` swept by ``relations``
        horizon: number of sequence terms inspected by ``converge``
        depth: shift-closure depth for morphism tables, and the number of
            extra neighborhoods tried by ``converge``
        prefix_len: longest finite prefix of enumerated points
        cycle_len: longest cycle of enumerated infinite paths
    """
    cap: int = 12
    vrange: int = 20
    edge_limit: int = 20
    horizon: int = 100
    depth: int = 4
    prefix_len: int = 2
    cycle_len: int = 2

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) < 0:
                raise ValueError(f"{f.name} must be non-negative")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "AnalysisConfig":
        """Take every field present on ``args``; the rest keep their defaults."""
        given = {f.name: getattr(args, f.name) for f in fields(cls)
                 if getattr(args, f.name, None) is not None}
        return cls(**given)
