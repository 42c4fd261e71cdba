from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .cooling import CoolingFunction
from .formats import vertex_to_json
from .graph import sort_vertices
from .rational import format_rational

SCHEMA = "folner-result/1"


@dataclass
class FolnerResult:
    """Minimum cooling norm ``N``, a Følner-optimal subset and a cooling function of norm ``N``.

    ``cooling`` is relative to the heat assignment the engine was run with.
    ``steps`` is an engine-specific trace (simplex step records, or the
    sequence of trial norms for the flow engine).
    """

    N: Fraction
    S0: frozenset
    cooling: CoolingFunction
    engine: str
    steps: list = field(default_factory=list)

    def to_json(self, trace: bool = False) -> dict:
        out = {
            "schema": SCHEMA,
            "engine": self.engine,
            "N": format_rational(self.N),
            "S0": [vertex_to_json(v) for v in sort_vertices(self.S0)],
            "cooling": self.cooling.to_json(),
        }
        if trace:
            out["trace"] = [s.to_json() if hasattr(s, "to_json") else format_rational(s) for s in self.steps]
        return out
