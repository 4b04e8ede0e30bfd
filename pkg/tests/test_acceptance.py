"""Acceptance checks, one test per criterion.

Each test prints a single ``CRITERION <n> PASS|FAIL: <detail>`` line (the
``announce`` fixture in conftest.py repeats them in the run summary) and
then asserts. Findings such as disagreement counts, lemma pass rates or
whether a counterexample exists are printed, never asserted.

Runs in a few minutes on one core. Also runnable directly:
``python tests/test_acceptance.py``.
"""

import itertools
import json
import random
import sys
from math import comb

import numpy as np
import pytest

from w3sat.core import Clause, Instance, blocked_count, clause_db_bound
from w3sat.engine import DerivationStep, Rule, check_derivation, format_trace, saturate
from w3sat.harness.compare import COMPARE_FIELDS, compare, sweep_configs
from w3sat.harness.generate import GenConfig, gen_random
from w3sat.harness.lemmas import LEMMAS, check_lemma_shape, replay
from w3sat.harness.mine import is_one_minimal, mine_counterexample, minimize
from w3sat.io import emit_dimacs, emit_paper_lists, parse_dimacs, parse_paper_lists
from w3sat.oracle import (
    is_unsat_by_full_cover,
    reduce_full_to_units_trace,
    solve_dpll,
    solve_enumerate,
    units_imply_all,
)
from w3sat.report import csv_text, json_text

pytestmark = pytest.mark.slow

COMPARE_COUNT = 10_000
DENSITIES = (3.0, 4.27, 5.5)


@pytest.fixture(scope="module")
def compare_run():
    cfgs = sweep_configs(6, 14, DENSITIES, COMPARE_COUNT, seed=0)
    return cfgs, compare(cfgs)


@pytest.fixture(scope="module")
def mine_run(tmp_path_factory):
    first = mine_counterexample((10, 40), 4.27, 0, 100_000)
    second = mine_counterexample((10, 40), 4.27, 0, 100_000)
    out = {"first": first, "second": second, "dir": tmp_path_factory.mktemp("mined")}
    if first.found:
        small = minimize(first.instance)
        out["minimized"] = small
        out["min_verdict"] = saturate(small)
        out["min_oracle"] = solve_dpll(small)
        out["one_minimal"] = is_one_minimal(small)
        for stem, inst, verdict in (("counterexample", first.instance, saturate(first.instance)),
                                    ("minimized", small, out["min_verdict"])):
            (out["dir"] / f"{stem}.cnf").write_text(emit_dimacs(inst))
            (out["dir"] / f"{stem}.json").write_text(json_text({
                "seed": first.config.seed, "n": inst.n_vars, "m": len(inst.clauses),
                "engine_stats": verdict.stats.as_dict(),
                "oracle_status": solve_dpll(inst).status.value}))
    return out


def test_criterion_1_soundness(compare_run, announce):
    cfgs, report = compare_run
    refuted = [r for r in report.rows if r.engine_verdict == "Refuted"]
    confirmed = all(r.oracle_status == "UNSAT" and r.trace_ok for r in refuted)
    ok = (len(report.rows) >= 10_000 and report.soundness_violations == 0 and confirmed
          and {c.n_vars for c in cfgs} == set(range(6, 15)))
    assert announce(1, ok, f"{len(report.rows)} instances, {len(refuted)} refutations, all "
                           f"oracle-confirmed and trace-checked; soundness violations "
                           f"{report.soundness_violations}")


def test_criterion_2_counting(announce):
    bad = 0
    checked = 0
    for n in range(1, 11):
        grid = np.array(list(itertools.product((0, 1), repeat=n)), dtype=np.int8)
        for w in range(1, min(3, n) + 1):
            for vs in itertools.combinations(range(1, n + 1), w):
                cols = grid[:, [v - 1 for v in vs]]
                for signs in itertools.product((1, -1), repeat=w):
                    # a literal is false when a positive var is 0 or a negated var is 1
                    falsified = np.all(cols == (np.array(signs) < 0), axis=1)
                    c = Clause(tuple(v * s for v, s in zip(vs, signs)))
                    bad += int(falsified.sum()) != blocked_count(c, n)
                    checked += 1
    rng = random.Random(2)
    split_bad = 0
    for _ in range(1000):
        n = rng.randint(2, 12)
        w = rng.randint(1, min(3, n - 1))
        vs = rng.sample(range(1, n + 1), w)
        t = rng.choice([v for v in range(1, n + 1) if v not in vs])
        lits = [v if rng.getrandbits(1) else -v for v in vs]
        grid = np.array(list(itertools.product((0, 1), repeat=n)), dtype=np.int8)
        blocked = np.all(grid[:, [abs(l) - 1 for l in lits]] == (np.array(lits) < 0), axis=1)
        split_bad += 2 * int(grid[blocked, t - 1].sum()) != int(blocked.sum())
    ok = bad == 0 and split_bad == 0
    assert announce(2, ok, f"blocked_count matched enumeration on {checked} clauses (n<=10), "
                           f"{bad} mismatches; half-split failures {split_bad}/1000")


def test_criterion_3_full_cover(announce):
    mismatches = 0
    unsat = 0
    for seed in range(1000):
        n = 3 + seed % 8
        inst = gen_random(GenConfig.at_density(n, DENSITIES[seed % 3] + 1.0, seed))
        truth = not solve_enumerate(inst).sat
        unsat += truth
        mismatches += is_unsat_by_full_cover(inst) != truth
    ok = mismatches == 0 and 0 < unsat < 1000
    assert announce(3, ok, f"full-cover test agreed with enumeration on 1000 instances "
                           f"(n 3..10, {unsat} UNSAT); mismatches {mismatches}")


def test_criterion_4_constructions(announce):
    failures = 0
    runs = 0
    for n in range(1, 9):
        full = {Clause(tuple(v * s for v, s in zip(range(1, n + 1), signs)))
                for signs in itertools.product((1, -1), repeat=n)}
        inst = Instance(n, tuple(sorted(full)))
        for keep in range(1, n + 1):
            steps = reduce_full_to_units_trace(full, n, keep)
            runs += 1
            ok = (check_derivation(inst, steps, goal=Clause((keep,))).ok
                  and check_derivation(inst, steps, goal=Clause((-keep,))).ok)
            failures += not ok
    rng = random.Random(4)
    target_fail = 0
    for _ in range(500):
        n = rng.randint(2, 8)
        a = rng.randint(1, n)
        vs = sorted(rng.sample(range(1, n + 1), rng.randint(1, n)))
        target = Clause(tuple(v if rng.getrandbits(1) else -v for v in vs))
        givens = [DerivationStep(0, Rule.GIVEN, (), Clause((a,))),
                  DerivationStep(1, Rule.GIVEN, (), Clause((-a,)))]
        inst = Instance(n, (Clause((a,)), Clause((-a,))))
        report = check_derivation(inst, givens + units_imply_all(a, target, n), goal=target)
        target_fail += not report.ok
    ok = failures == 0 and target_fail == 0
    assert announce(4, ok, f"unit-pair elimination checked for {runs} (n, keep_var) pairs, "
                           f"{failures} failures; 500 unit-pair targets, {target_fail} failures")


def test_criterion_5_db_bound(compare_run, mine_run, announce):
    _, report = compare_run
    over = [r for r in report.rows if r.db_size > r.db_bound]
    mine_peak = max(mine_run["first"].max_db_ratio, mine_run["second"].max_db_ratio)
    extra = []
    if "min_verdict" in mine_run:
        small = mine_run["minimized"]
        extra.append(mine_run["min_verdict"].stats.db_size / clause_db_bound(small.n_vars))
    peak = max([report.max_db_ratio, mine_peak, *extra])
    ok = not over and peak <= 1.0 and clause_db_bound(5) == 8 * comb(5, 3) + 4 * comb(5, 2) + 10 == 130
    assert announce(5, ok, f"peak db_size/bound {peak:.4f} over compare and mining runs "
                           f"(compare {report.max_db_ratio:.4f}, mining {mine_peak:.4f}); "
                           f"rows over bound {len(over)}")


def test_criterion_6_completeness_measurement(compare_run, mine_run, announce):
    _, report = compare_run
    summary = report.summary()
    csv_ok = csv_text(COMPARE_FIELDS, (r.as_dict() for r in report.rows)).count("\n") == len(report.rows) + 1
    first, second = mine_run["first"], mine_run["second"]
    deterministic = first == second
    detail = (f"compare: {summary['instances']} instances, disagreements "
              f"{summary['disagreements']}, soundness violations {summary['soundness_violations']}; ")
    ok = summary["soundness_violations"] == 0 and "disagreements" in summary and csv_ok and deterministic
    if first.found:
        verdict, oracle = mine_run["min_verdict"], mine_run["min_oracle"]
        small = mine_run["minimized"]
        persisted = parse_dimacs((mine_run["dir"] / "minimized.cnf").read_text())
        side = json.loads((mine_run["dir"] / "minimized.json").read_text())
        verified = (not verdict.refuted and not oracle.sat and mine_run["one_minimal"]
                    and sorted(persisted.clauses) == sorted(small.clauses)
                    and side["oracle_status"] == "UNSAT")
        ok = ok and verified
        detail += (f"mine: counterexample at seed {first.config.seed} (n={first.config.n_vars}, "
                   f"m={first.config.n_clauses}) after {first.tried} candidates, minimized to "
                   f"{len(small.clauses)} clauses, engine Saturated, DPLL UNSAT, 1-minimal, persisted")
    else:
        detail += f"mine: NotFound after {first.tried} candidates ({first.unsat_seen} UNSAT)"
    assert announce(6, ok, detail)


def test_criterion_7_lemma_shapes(announce):
    rates = []
    replay_bad = 0
    total_fail = 0
    for lemma in LEMMAS:
        for k in (4, 5):
            r = check_lemma_shape(lemma, k, 8, 10_000, seed=7)
            assert r.trials == 10_000
            assert r.target_derived_at_reduced_width + len(r.failures) == r.premise_matches
            total_fail += len(r.failures)
            for f in r.failures:
                replay_bad += replay(lemma, k, 8, f.trial_seed) != f
            rate = "n/a" if r.pass_rate is None else f"{r.pass_rate:.3f}"
            rates.append(f"{lemma}/k{k}={rate}")
    ok = replay_bad == 0
    assert announce(7, ok, f"10^4 trials each, {total_fail} failure witnesses, "
                           f"{replay_bad} failed to replay; pass rates " + " ".join(rates))


def test_criterion_8_determinism_and_round_trip(announce):
    problems = []
    for seed in range(200):
        inst = gen_random(GenConfig.at_density(5 + seed % 6, DENSITIES[seed % 3], seed))
        a, b = saturate(inst), saturate(inst)
        if a.describe() != b.describe() or format_trace(a.trace) != format_trace(b.trace):
            problems.append(f"engine seed {seed}")
        d = emit_dimacs(inst)
        if parse_dimacs(d) != inst or emit_dimacs(parse_dimacs(d)) != d:
            problems.append(f"dimacs seed {seed}")
        p = emit_paper_lists(inst)
        back = parse_paper_lists(p, n_vars=inst.n_vars)
        if back != inst or emit_paper_lists(back) != p:
            problems.append(f"list seed {seed}")
    cfgs = sweep_configs(6, 10, DENSITIES, 150, seed=99)
    texts = [csv_text(COMPARE_FIELDS, (r.as_dict() for r in compare(cfgs, workers=w).rows))
             for w in (1, 1, 2)]
    if len(set(texts)) != 1:
        problems.append("compare report bytes")
    lem = [json_text(check_lemma_shape("5.18", 4, 8, 500, seed=1).row()) for _ in range(2)]
    if lem[0] != lem[1]:
        problems.append("lemma report bytes")
    ok = not problems
    assert announce(8, ok, "200 instances: verdicts, traces and both text formats reproduce "
                           "byte-for-byte; compare and lemma reports identical across reruns "
                           "and worker counts" if ok else f"problems: {problems}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
