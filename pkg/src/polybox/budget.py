"""Node and wall-clock budgets shared by the search routines."""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field

ENV_BUDGET = "POLYBOX_BUDGET_NODES"


class BudgetExceeded(RuntimeError):
    """A search ran out of its node or time allowance before completing."""

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


def default_node_budget() -> int | None:
    v = os.environ.get(ENV_BUDGET)
    return int(v) if v else None


@dataclass
class Budget:
    """Counts search nodes; ``tick`` raises once either limit is passed.

    The clock is only consulted every 4096 ticks.
    """

    max_nodes: int | None = None
    max_seconds: float | None = None
    nodes: int = 0
    started: float = field(default_factory=time.monotonic)
    _next_clock: int = field(default=4096, repr=False)

    @classmethod
    def from_env(cls, max_seconds: float | None = None) -> "Budget":
        return cls(default_node_budget(), max_seconds)

    def tick(self, n: int = 1) -> None:
        self.nodes += n
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            raise BudgetExceeded(f"node budget {self.max_nodes} exhausted")
        if self.max_seconds is not None and self.nodes >= self._next_clock:
            self._next_clock = self.nodes + 4096
            if time.monotonic() - self.started > self.max_seconds:
                raise BudgetExceeded(f"time budget {self.max_seconds}s exhausted")

    @property
    def elapsed(self) -> float:
        return time.monotonic() - self.started


UNLIMITED = None


def ensure(budget: Budget | None) -> Budget:
    return budget if budget is not None else Budget()
