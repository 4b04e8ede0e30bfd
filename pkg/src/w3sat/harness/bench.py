"""Clause-database growth and runtime measurements across instance sizes."""

from __future__ import annotations

import time
from dataclasses import dataclass

from ..core import clause_db_bound
from ..engine import EngineOptions, saturate
from .generate import GenConfig, gen_random

BENCH_FIELDS = ("n", "seeds", "db_bound", "max_db_size", "max_ratio", "max_passes", "refuted")
TIMING_FIELDS = ("n", "seeds", "mean_seconds", "max_seconds")


@dataclass(frozen=True)
class BenchRow:
    n: int
    seeds: int
    db_bound: int
    max_db_size: int
    max_passes: int
    refuted: int
    mean_seconds: float
    max_seconds: float

    @property
    def max_ratio(self) -> float:
        return self.max_db_size / self.db_bound

    def as_dict(self):
        return {
            "n": self.n,
            "seeds": self.seeds,
            "db_bound": self.db_bound,
            "max_db_size": self.max_db_size,
            "max_ratio": f"{self.max_ratio:.6f}",
            "max_passes": self.max_passes,
            "refuted": self.refuted,
        }

    def timing_dict(self):
        return {
            "n": self.n,
            "seeds": self.seeds,
            "mean_seconds": f"{self.mean_seconds:.6f}",
            "max_seconds": f"{self.max_seconds:.6f}",
        }


def bench_bounds(n_list, seeds, density: float = 4.27, opts: EngineOptions | None = None,
                 progress=None) -> list[BenchRow]:
    """Saturate one random instance per (n, seed) and aggregate per n.

    Raises AssertionError if any run's database exceeds the size bound;
    everything else (passes, timings) is recorded without judgement.
    """
    seeds = list(seeds)
    rows = []
    for n in n_list:
        bound = clause_db_bound(n)
        sizes, passes, times, refuted = [], [], [], 0
        for seed in seeds:
            inst = gen_random(GenConfig.at_density(n, density, seed))
            t0 = time.perf_counter()
            verdict = saturate(inst, opts)
            times.append(time.perf_counter() - t0)
            if verdict.stats.db_size > bound:
                raise AssertionError(
                    f"n={n} seed={seed}: db_size {verdict.stats.db_size} exceeds bound {bound}")
            sizes.append(verdict.stats.db_size)
            passes.append(verdict.stats.passes)
            refuted += verdict.refuted
        rows.append(BenchRow(
            n=n,
            seeds=len(seeds),
            db_bound=bound,
            max_db_size=max(sizes, default=0),
            max_passes=max(passes, default=0),
            refuted=refuted,
            mean_seconds=sum(times) / len(times) if times else 0.0,
            max_seconds=max(times, default=0.0),
        ))
        if progress:
            progress(n)
    return rows
