"""Run configuration: scale caps, seeding, and output options.

Every cap is a hard bound: operations raise :class:`~bnfuse.errors.ScaleError`
rather than silently truncating when an instance exceeds one.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields

from .errors import DomainError

DEFAULT_SEED = 1729

OBJECTIVES = ("retained-independencies", "min-new-arcs", "min-union-arcs")

_CAP_FIELDS = (
    "closure_universe_cap",
    "ordering_factorial_cap",
    "arc_subset_cap",
    "search_frontier_cap",
    "cycle_vertex_cap",
    "mfas_vertex_cap",
)


@dataclass(frozen=True)
class RunConfig:
    """Caps and knobs shared by the CLI and the verification harnesses."""

    closure_universe_cap: int = 6       # max universe size for closures / full separation models
    ordering_factorial_cap: int = 7     # max |V| for exhaustive ordering search
    arc_subset_cap: int = 16            # max arc count for subset-enumeration solvers
    search_frontier_cap: int = 200_000  # max states explored by sequence-search solvers
    cycle_vertex_cap: int = 12          # max |V| for simple-cycle enumeration
    mfas_vertex_cap: int = 9            # max |V| for the ordering-based deletion solver
    seed: int = DEFAULT_SEED
    objective: str = "retained-independencies"
    format: str = "json"

    def __post_init__(self) -> None:
        for name in _CAP_FIELDS:
            if getattr(self, name) < 1:
                raise DomainError(f"cap {name} must be positive")
        if self.objective not in OBJECTIVES:
            raise DomainError(f"unknown objective: {self.objective!r}")
        if self.format not in ("json", "text"):
            raise DomainError(f"unknown output format: {self.format!r}")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        if not isinstance(data, dict):
            raise DomainError("config must be a JSON object")
        unknown = set(data) - {f.name for f in fields(cls)}
        if unknown:
            raise DomainError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def load(cls, path) -> "RunConfig":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))
