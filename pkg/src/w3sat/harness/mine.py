"""Search for instances the oracle proves unsatisfiable but the engine
saturates without a contradicting unit pair, and shrink them.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from ..core import Instance, clause_db_bound
from ..engine import EngineStats, saturate
from ..errors import BadConfig, NotACounterexample
from ..oracle import solve_dpll
from .generate import GenConfig, gen_random

log = logging.getLogger(__name__)

DEFAULT_DENSITY = 4.27


@dataclass(frozen=True)
class MineResult:
    """Outcome of a mining run. ``instance`` is None when nothing was found
    within the budget."""

    tried: int
    unsat_seen: int
    instance: Instance | None = None
    config: GenConfig | None = None
    engine_stats: EngineStats | None = None
    max_db_ratio: float = 0.0

    @property
    def found(self) -> bool:
        return self.instance is not None


def candidate_config(index: int, n_range: tuple[int, int], density: float, seed_start: int) -> GenConfig:
    """Candidate ``index`` uses seed ``seed_start + index`` and cycles n
    upward through ``n_range`` so small instances are tried first."""
    lo, hi = n_range
    n = lo + index % (hi - lo + 1)
    return GenConfig.at_density(n, density, seed_start + index)


def is_counterexample(inst: Instance) -> bool:
    if solve_dpll(inst).sat:
        return False
    return not saturate(inst).refuted


def mine_counterexample(n_range=(10, 40), density: float = DEFAULT_DENSITY,
                        seed_start: int = 0, budget: int = 100_000,
                        progress=None) -> MineResult:
    """Try up to ``budget`` generated instances in seed order and return the
    first with oracle UNSAT and engine Saturated.

    Satisfiable candidates never reach the engine.
    """
    lo, hi = n_range
    if lo < 3 or hi < lo:
        raise BadConfig(f"bad n range {n_range}")
    unsat = 0
    peak = 0.0
    for i in range(budget):
        cfg = candidate_config(i, n_range, density, seed_start)
        inst = gen_random(cfg)
        if progress:
            progress(i + 1, budget)
        if solve_dpll(inst).sat:
            continue
        unsat += 1
        verdict = saturate(inst)
        peak = max(peak, verdict.stats.db_size / clause_db_bound(cfg.n_vars))
        if not verdict.refuted:
            log.info("counterexample at seed %d (n=%d, m=%d)", cfg.seed, cfg.n_vars, cfg.n_clauses)
            return MineResult(i + 1, unsat, inst, cfg, verdict.stats, peak)
    return MineResult(budget, unsat, max_db_ratio=peak)


def minimize(inst: Instance, assume_monotone: bool = True) -> Instance:
    """Greedy clause removal down to a 1-minimal counterexample.

    Removing clauses can only shrink the saturated clause set, so once the
    full instance saturates every subset does too. With
    ``assume_monotone`` the loop therefore consults only the oracle; the
    result is re-checked against the engine either way.
    """
    if not is_counterexample(inst):
        raise NotACounterexample("input is not oracle-UNSAT and engine-Saturated")

    def keeps(clauses) -> bool:
        cand = Instance(inst.n_vars, tuple(clauses))
        if solve_dpll(cand).sat:
            return False
        return assume_monotone or not saturate(cand).refuted

    clauses = list(inst.clauses)
    changed = True
    while changed:
        changed = False
        i = 0
        while i < len(clauses):
            trial = clauses[:i] + clauses[i + 1:]
            if keeps(trial):
                clauses = trial
                changed = True
            else:
                i += 1
    out = Instance(inst.n_vars, tuple(clauses))
    if saturate(out).refuted:
        raise AssertionError("minimized instance is refuted; monotonicity broken")
    return out


def is_one_minimal(inst: Instance) -> bool:
    """Audit: ``inst`` is a counterexample and dropping any single clause
    makes it stop being one."""
    if not is_counterexample(inst):
        return False
    for i in range(len(inst.clauses)):
        sub = Instance(inst.n_vars, inst.clauses[:i] + inst.clauses[i + 1:])
        if is_counterexample(sub):
            return False
    return True
