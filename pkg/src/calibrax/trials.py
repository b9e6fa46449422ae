"""Seeded trial execution.

Each trial gets its own generator derived from (seed, stream, index), so
results do not depend on how trials are split across workers.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .report import VerificationReport

THREADS_ENV = "CALIBRAX_THREADS"


@dataclass
class Outcome:
    ok: bool
    residual: float
    frame: Optional[np.ndarray] = None
    extra: dict = field(default_factory=dict)


def worker_count() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return n


def trial_rng(seed: int, stream: int, index: int) -> np.random.Generator:
    return np.random.default_rng([seed, stream, index])


def run_trials(
    fn: Callable[[int], Outcome], n: int, workers: Optional[int] = None, chunk: int = 2048
) -> list[Outcome]:
    """Evaluate ``fn(i)`` for i in range(n); output order is always index order."""
    workers = worker_count() if workers is None else workers
    if workers <= 1 or n <= chunk:
        return [fn(i) for i in range(n)]
    bounds = [(s, min(s + chunk, n)) for s in range(0, n, chunk)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = pool.map(lambda b: [fn(i) for i in range(*b)], bounds)
        return [o for part in parts for o in part]


def summarize(
    check: str,
    outcomes: list[Outcome],
    seed: int,
    params: dict,
    started: float,
    stats: Optional[dict] = None,
) -> VerificationReport:
    """Aggregate outcomes; the first failing trial supplies the counterexample."""
    passed = sum(1 for o in outcomes if o.ok)
    residual = max((o.residual for o in outcomes), default=0.0)
    bad = next((o for o in outcomes if not o.ok), None)
    return VerificationReport(
        check=check,
        seed=seed,
        attempted=len(outcomes),
        passed=passed,
        max_residual=float(residual),
        params=params,
        counterexample=None if bad is None else bad.frame,
        stats=stats or {},
        wall_ms=(time.perf_counter() - started) * 1e3,
    )
