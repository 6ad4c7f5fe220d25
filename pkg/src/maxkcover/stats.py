"""Lightweight operation counters attached to solver results."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class OpStats:
    """Mutable counter bag threaded through a solver run.

    Counters track abstract work units (set unions evaluated, triangles
    scanned, bundles enumerated, recursion depth reached); `regime` records
    which algorithmic route a dispatcher chose.
    """

    counters: dict[str, int] = field(default_factory=dict)
    regime: str | None = None

    def bump(self, key: str, amount: int = 1) -> None:
        self.counters[key] = self.counters.get(key, 0) + amount

    def note_depth(self, depth: int) -> None:
        if depth > self.counters.get("recursion_depth", 0):
            self.counters["recursion_depth"] = depth

    def get(self, key: str) -> int:
        return self.counters.get(key, 0)

    def merge(self, other: "OpStats") -> None:
        for key, value in other.counters.items():
            if key == "recursion_depth":
                self.note_depth(value)
            else:
                self.bump(key, value)

    def as_lines(self) -> list[str]:
        lines = [f"counter.{k}={self.counters[k]}" for k in sorted(self.counters)]
        if self.regime is not None:
            lines.insert(0, f"regime={self.regime}")
        return lines
