"""Run configuration shared by the CLI and the verify/bench harness."""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .errors import InputError

DEFAULT_OMEGA = 2.3716
DEFAULT_BUDGET = 2_000_000

ENV_OMEGA = "MAXKCOVER_OMEGA"
ENV_BUDGET = "MAXKCOVER_BUDGET"

COVER_ALGOS = ("auto", "oracle", "mm", "large-universe", "intermediate", "small-universe")
PDS_ALGOS = ("auto", "oracle", "sparse", "pds2-table", "pds2-sparse")
ALL_ALGOS = tuple(dict.fromkeys(COVER_ALGOS + PDS_ALGOS))


def _env_float(name: str, fallback: float) -> float:
    raw = os.environ.get(name)
    return float(raw) if raw else fallback


def _env_int(name: str, fallback: int) -> int:
    raw = os.environ.get(name)
    return int(raw) if raw else fallback


@dataclass
class RunConfig:
    """Validated knobs for one solver run."""

    k: int = 2
    algorithm: str = "auto"
    omega: float = field(default_factory=lambda: _env_float(ENV_OMEGA, DEFAULT_OMEGA))
    budget: int = field(default_factory=lambda: _env_int(ENV_BUDGET, DEFAULT_BUDGET))
    seed: int = 0
    output: str = "human"

    def __post_init__(self):
        if self.algorithm not in ALL_ALGOS:
            raise InputError(f"unknown algorithm selector {self.algorithm!r}")
        if not 2.0 <= self.omega <= 3.0:
            raise InputError(f"omega must lie in [2, 3], got {self.omega}")
        if self.budget <= 0:
            raise InputError("budget must be positive")
        if self.output not in ("human", "structured"):
            raise InputError(f"unknown output format {self.output!r}")
