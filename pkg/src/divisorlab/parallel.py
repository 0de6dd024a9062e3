"""Deterministic block parallelism.

Work is split into a fixed list of independent tasks; results are combined in
task-index order regardless of the thread count, so outputs are bitwise
reproducible across 1..N threads.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(fn: Callable[[T], R], tasks: Sequence[T], threads: int = 1) -> list[R]:
    """Apply fn to every task, returning results in task order."""
    if threads <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, tasks))


class CompensatedSum:
    """Neumaier running sum; order of add() calls fixes the result exactly."""

    __slots__ = ("total", "_c")

    def __init__(self) -> None:
        self.total = 0.0
        self._c = 0.0

    def add(self, x: float) -> None:
        t = self.total + x
        if abs(self.total) >= abs(x):
            self._c += (self.total - t) + x
        else:
            self._c += (x - t) + self.total
        self.total = t

    @property
    def value(self) -> float:
        return self.total + self._c
