"""Engine-versus-oracle comparison over batches of generated instances."""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field
from multiprocessing import Pool

from ..core import Instance, clause_db_bound
from ..engine import EngineOptions, Verdict, check_trace, saturate
from ..errors import OracleTooLarge, SoundnessViolation, TooLarge
from ..oracle import OracleResult, Status, solve_dpll, solve_enumerate
from .generate import GenConfig, gen_random

COMPARE_FIELDS = (
    "seed", "n", "m", "oracle_status", "engine_verdict", "agree",
    "engine_passes", "db_size", "db_bound", "trace_ok",
)


@dataclass(frozen=True)
class ComparisonRow:
    seed: int
    n: int
    m: int
    oracle_status: str
    engine_verdict: str
    agree: bool
    engine_passes: int
    db_size: int
    db_bound: int
    trace_ok: bool | None
    wall_time: float = field(default=0.0, compare=False)

    def as_dict(self):
        return {name: getattr(self, name) for name in COMPARE_FIELDS}


@dataclass
class ComparisonReport:
    rows: list[ComparisonRow]

    @property
    def counts(self) -> Counter:
        c = Counter()
        for r in self.rows:
            if r.engine_verdict == "Refuted" and r.oracle_status == "SAT":
                c["soundness_violations"] += 1
            elif r.engine_verdict == "Saturated" and r.oracle_status == "UNSAT":
                c["disagreements"] += 1
            elif r.oracle_status == "SAT":
                c["agree_sat"] += 1
            else:
                c["agree_unsat"] += 1
        return c

    @property
    def agree_sat(self):
        return self.counts["agree_sat"]

    @property
    def agree_unsat(self):
        return self.counts["agree_unsat"]

    @property
    def disagreements(self):
        return self.counts["disagreements"]

    @property
    def soundness_violations(self):
        return self.counts["soundness_violations"]

    @property
    def max_db_ratio(self) -> float:
        return max((r.db_size / r.db_bound for r in self.rows), default=0.0)

    def summary(self) -> dict:
        c = self.counts
        return {
            "instances": len(self.rows),
            "agree_sat": c["agree_sat"],
            "agree_unsat": c["agree_unsat"],
            "disagreements": c["disagreements"],
            "soundness_violations": c["soundness_violations"],
            "trace_failures": sum(1 for r in self.rows if r.trace_ok is False),
            "max_db_ratio": round(self.max_db_ratio, 6),
        }


def run_oracle(inst: Instance, oracle: str = "enumerate") -> OracleResult:
    if oracle == "enumerate":
        try:
            return solve_enumerate(inst)
        except TooLarge as exc:
            raise OracleTooLarge(str(exc)) from None
    if oracle == "dpll":
        return solve_dpll(inst)
    raise ValueError(f"unknown oracle {oracle!r}")


def compare_instance(inst: Instance, seed: int = 0, oracle: str = "enumerate",
                     opts: EngineOptions | None = None) -> tuple[ComparisonRow, Verdict]:
    """Run engine and oracle on one instance. Raises
    :class:`SoundnessViolation` when a refutation is contradicted by the
    oracle or its trace fails the replay audit."""
    t0 = time.perf_counter()
    verdict = saturate(inst, opts)
    truth = run_oracle(inst, oracle)
    trace_ok = None
    if verdict.refuted:
        report = check_trace(inst, verdict)
        trace_ok = report.ok
        if truth.sat:
            raise SoundnessViolation(
                f"seed {seed}: engine refuted on x{verdict.var} but the oracle found "
                f"model {truth.witness}")
        if not report.ok:
            raise SoundnessViolation(
                f"seed {seed}: refutation trace fails at step {report.failed_step}: {report.reason}")
    row = ComparisonRow(
        seed=seed,
        n=inst.n_vars,
        m=len(inst.clauses),
        oracle_status=truth.status.value,
        engine_verdict=verdict.kind.value,
        agree=verdict.refuted == (truth.status is Status.UNSAT),
        engine_passes=verdict.stats.passes,
        db_size=verdict.stats.db_size,
        db_bound=clause_db_bound(inst.n_vars),
        trace_ok=trace_ok,
        wall_time=time.perf_counter() - t0,
    )
    if row.db_size > row.db_bound:
        raise AssertionError(f"seed {seed}: db_size {row.db_size} exceeds bound {row.db_bound}")
    return row, verdict


def _compare_cfg(args) -> ComparisonRow:
    cfg, oracle = args
    return compare_instance(gen_random(cfg), cfg.seed, oracle)[0]


def compare(cfgs, oracle: str = "enumerate", workers: int = 1, progress=None) -> ComparisonReport:
    """Compare engine and oracle on every config, rows in input order.

    With ``workers > 1`` instances fan out to a process pool; rows are
    still collected in input order so the report matches a serial run.
    """
    cfgs = list(cfgs)
    tasks = [(cfg, oracle) for cfg in cfgs]
    rows = []
    if workers > 1:
        with Pool(workers) as pool:
            for row in pool.imap(_compare_cfg, tasks, chunksize=16):
                rows.append(row)
                if progress:
                    progress(len(rows), len(tasks))
    else:
        for task in tasks:
            rows.append(_compare_cfg(task))
            if progress:
                progress(len(rows), len(tasks))
    return ComparisonReport(rows)


def sweep_configs(n_lo: int, n_hi: int, densities, count: int, seed: int = 0) -> list[GenConfig]:
    """``count`` configs cycling n through ``n_lo..n_hi`` and then through
    the densities; config ``i`` uses seed ``seed + i``."""
    densities = list(densities)
    span = n_hi - n_lo + 1
    out = []
    for i in range(count):
        n = n_lo + i % span
        d = densities[(i // span) % len(densities)]
        out.append(GenConfig.at_density(n, d, seed + i))
    return out
