"""Step and wall-clock budgets shared by the search engines."""

from __future__ import annotations

import time
from dataclasses import dataclass


@dataclass(frozen=True)
class Budget:
    """Either a step allowance or a wall-clock allowance (or neither: unlimited)."""

    steps: int | None = None
    seconds: float | None = None

    def __post_init__(self):
        if self.steps is not None and self.steps < 0:
            raise ValueError("step budget must be non-negative")
        if self.seconds is not None and self.seconds < 0:
            raise ValueError("wall budget must be non-negative")

    @staticmethod
    def of_steps(steps: int) -> "Budget":
        return Budget(steps=steps)

    @staticmethod
    def of_wall(seconds: float) -> "Budget":
        return Budget(seconds=seconds)


UNLIMITED = Budget()


class BudgetMeter:
    """Mutable per-attempt counter; tick() is False once the budget is spent."""

    def __init__(self, budget: Budget):
        self.budget = budget
        self.steps_used = 0
        self._deadline = (
            None if budget.seconds is None else time.monotonic() + budget.seconds
        )

    def tick(self, n: int = 1) -> bool:
        self.steps_used += n
        if self.budget.steps is not None and self.steps_used > self.budget.steps:
            self.steps_used = self.budget.steps
            return False
        if self._deadline is not None and time.monotonic() >= self._deadline:
            return False
        return True
