"""Seeded random 3-CNF generation.

Instances come from Python's ``random.Random`` (Mersenne Twister MT19937)
seeded with the integer seed, so a config always produces the same clauses
on every platform and Python version that keeps the MT19937 stream stable.
Each clause draws 3 distinct variables with ``sample`` and then one
polarity bit per variable with ``getrandbits(1)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from ..core import Clause, Instance
from ..errors import BadConfig

CLAUSE_WIDTH = 3


@dataclass(frozen=True)
class GenConfig:
    n_vars: int
    n_clauses: int
    seed: int
    clause_width: int = CLAUSE_WIDTH

    @classmethod
    def at_density(cls, n_vars: int, density: float, seed: int) -> "GenConfig":
        return cls(n_vars, round(density * n_vars), seed)

    @property
    def density(self) -> float:
        return self.n_clauses / self.n_vars if self.n_vars else 0.0


def gen_random(cfg: GenConfig) -> Instance:
    if cfg.clause_width != CLAUSE_WIDTH:
        raise BadConfig("only width-3 clauses are generated")
    if cfg.n_vars < CLAUSE_WIDTH:
        raise BadConfig(f"need at least {CLAUSE_WIDTH} variables, got {cfg.n_vars}")
    if cfg.n_clauses < 0:
        raise BadConfig("n_clauses must be non-negative")
    if not 0 <= cfg.seed < 2**64:
        raise BadConfig("seed must fit in 64 unsigned bits")
    rng = random.Random(cfg.seed)
    universe = range(1, cfg.n_vars + 1)
    clauses = []
    for _ in range(cfg.n_clauses):
        chosen = sorted(rng.sample(universe, CLAUSE_WIDTH))
        clauses.append(Clause(tuple(v if rng.getrandbits(1) else -v for v in chosen)))
    return Instance(cfg.n_vars, tuple(clauses))
