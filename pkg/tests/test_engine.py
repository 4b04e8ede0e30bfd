import dataclasses
import itertools

import pydot
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from w3sat.core import Clause, Instance, clause_db_bound, resolve
from w3sat.engine import (
    DerivationStep,
    EngineOptions,
    Rule,
    VerdictKind,
    check_derivation,
    check_trace,
    export_derivation_dag,
    format_trace,
    parse_trace,
    saturate,
)
from w3sat.errors import MalformedTrace, NotRefuted, WidthTooLarge
from w3sat.harness.generate import GenConfig, gen_random
from w3sat.io import parse_paper_lists
from w3sat.oracle import solve_enumerate

ALL_EIGHT = Instance.from_lists(
    [[s1 * 1, s2 * 2, s3 * 3] for s1, s2, s3 in itertools.product((1, -1), repeat=3)])

MODES = {
    "worklist": EngineOptions(),
    "unpruned": EngineOptions(skip_subsumed=False),
    "sweep": EngineOptions(conformance_sweep=True),
}


def small_instances(count, n_lo=3, n_hi=8, seed=0):
    densities = (3.0, 4.27, 5.5)
    for i in range(count):
        n = n_lo + i % (n_hi - n_lo + 1)
        yield gen_random(GenConfig.at_density(n, densities[i % 3], seed + i))


def test_unit_pair_refuted_from_givens():
    inst = Instance.from_lists([[1], [-1]])
    v = saturate(inst)
    assert v.kind is VerdictKind.REFUTED and v.var == 1
    assert [s.rule for s in v.trace] == [Rule.GIVEN, Rule.GIVEN]
    assert check_trace(inst, v)


def test_all_eight_clauses_refuted_within_bound():
    v = saturate(ALL_EIGHT)
    assert v.refuted
    assert v.stats.db_size <= 26 == clause_db_bound(3)
    assert check_trace(ALL_EIGHT, v)


def test_single_clause_saturates():
    inst = Instance.from_lists([[1, 2, 3]])
    assert not saturate(inst).refuted
    assert solve_enumerate(inst).sat


def test_list_format_example_saturates():
    inst = parse_paper_lists("[[-1,2,3],[1,4,5]]")
    assert saturate(inst).kind is VerdictKind.SATURATED
    assert solve_enumerate(inst).sat


def test_wide_input_rejected():
    with pytest.raises(WidthTooLarge):
        saturate(Instance.from_lists([[1, 2, 3, 4]]))


def test_empty_instance_saturates():
    v = saturate(Instance(3, ()))
    assert not v.refuted and v.stats.db_size == 0


def test_saturated_db_is_closed():
    """Every resolvent of width <= 3 and every expansion of a stored clause
    is already in the final database."""
    from w3sat.core import expansions
    for inst in small_instances(30, 3, 5):
        v = saturate(inst, EngineOptions(skip_subsumed=False))
        if v.refuted:
            continue
        db = set(v.db)
        for c in db:
            assert expansions(c, inst.n_vars, 3) <= db
            for d in db:
                r = resolve(c, d)
                if isinstance(r, Clause) and r.width <= 3:
                    assert r in db


@pytest.mark.parametrize("mode", ["unpruned", "sweep"])
def test_schedules_agree(mode):
    for inst in small_instances(60, 3, 7, seed=100):
        base = saturate(inst)
        other = saturate(inst, MODES[mode])
        assert base.refuted == other.refuted
        if not base.refuted:
            assert set(base.db) == set(other.db)


def test_expansion_off_db_is_subset():
    for inst in small_instances(60, 3, 8, seed=300):
        full = saturate(inst)
        bare = saturate(inst, EngineOptions(expansion=False))
        if not full.refuted:
            assert not bare.refuted
            assert set(bare.db) <= set(full.db)


def test_refutations_are_sound_and_checked():
    seen = 0
    for inst in small_instances(300, 4, 10, seed=1000):
        v = saturate(inst)
        if v.refuted:
            seen += 1
            assert not solve_enumerate(inst).sat
            assert check_trace(inst, v)
    assert seen > 20


def test_db_bound_respected():
    for inst in small_instances(100, 3, 10, seed=7):
        assert saturate(inst).stats.db_size <= clause_db_bound(inst.n_vars)


def test_deterministic():
    inst = gen_random(GenConfig.at_density(9, 5.5, 4))
    a, b = saturate(inst), saturate(inst)
    assert a.describe() == b.describe()
    assert format_trace(a.trace) == format_trace(b.trace)


# trace checking

def test_forged_resolve_step_fails():
    v = saturate(ALL_EIGHT)
    idx = next(i for i, s in enumerate(v.trace) if s.rule is Rule.RESOLVE)
    step = v.trace[idx]
    forged = dataclasses.replace(step, clause=Clause.of(1, 2, 3))
    trace = v.trace[:idx] + (forged,) + v.trace[idx + 1:]
    report = check_trace(ALL_EIGHT, dataclasses.replace(v, trace=trace))
    assert not report.ok and report.failed_step == step.id


def test_dangling_parent_raises():
    inst = Instance.from_lists([[1], [-1]])
    steps = [DerivationStep(0, Rule.GIVEN, (), Clause.of(1)),
             DerivationStep(1, Rule.EXPAND, (7,), Clause.of(1, 2))]
    with pytest.raises(MalformedTrace):
        check_derivation(inst, steps)


def test_given_not_in_instance_fails():
    inst = Instance.from_lists([[1], [-1]])
    steps = [DerivationStep(0, Rule.GIVEN, (), Clause.of(-1, 2))]
    assert check_derivation(Instance(2, inst.clauses), steps).failed_step == 0


def test_check_trace_requires_refutation():
    with pytest.raises(NotRefuted):
        check_trace(ALL_EIGHT, saturate(Instance.from_lists([[1, 2]])))


def test_trace_text_round_trip():
    v = saturate(ALL_EIGHT)
    text = format_trace(v.trace)
    assert parse_trace(text) == v.trace
    assert format_trace(parse_trace(text)) == text


def test_parse_trace_rejects_garbage():
    with pytest.raises(MalformedTrace):
        parse_trace("0 given - 1 2\n")
    with pytest.raises(MalformedTrace):
        parse_trace("x resolve 1,2 3 0\n")


# DOT export

def test_dot_for_given_contradiction():
    text = export_derivation_dag(saturate(Instance.from_lists([[1], [-1]])))
    graph = pydot.graph_from_dot_data(text)[0]
    assert len(graph.get_nodes()) - sum(n.get_name() in ("node", "edge", "graph")
                                        for n in graph.get_nodes()) == 2
    assert graph.get_edges() == []


def test_dot_roots_are_the_givens():
    v = saturate(ALL_EIGHT)
    text = export_derivation_dag(v)
    graph = pydot.graph_from_dot_data(text)[0]
    targets = {e.get_destination() for e in graph.get_edges()}
    names = {n.get_name() for n in graph.get_nodes()} - {"node", "edge", "graph"}
    roots = names - targets
    given_ids = {f"n{s.id}" for s in v.trace if s.rule is Rule.GIVEN}
    assert roots == given_ids
    assert {s.clause for s in v.trace if s.rule is Rule.GIVEN} == set(ALL_EIGHT.clauses)


def test_dot_requires_refutation():
    with pytest.raises(NotRefuted):
        export_derivation_dag(saturate(Instance.from_lists([[1, 2]])))


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 7), st.integers(0, 2**32))
def test_every_refutation_exports_parseable_dot(n, seed):
    inst = gen_random(GenConfig.at_density(n, 6.0, seed))
    v = saturate(inst)
    if v.refuted:
        graphs = pydot.graph_from_dot_data(export_derivation_dag(v))
        assert graphs and len(graphs[0].get_edges()) == sum(len(s.parents) for s in v.trace)
