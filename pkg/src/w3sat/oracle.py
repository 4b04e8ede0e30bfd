"""Ground truth for the engine: exhaustive and backtracking satisfiability
deciders, plus the full-width constructions (expand every given clause to
width n, reduce the complete width-n cover to a unit pair, and derive any
clause from a unit pair) realized at small n.

Nothing here calls the saturation engine.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass

import numpy as np

from .core import Clause, Instance, TAUTOLOGY, expansion_lits, lit_var, resolve
from .engine import DerivationStep, Rule
from .errors import IncompleteCover, TooLarge, VarOutOfRange

ENUMERATE_MAX_N = 24
FULL_EXPANSION_MAX_N = 16
_CHUNK_BITS = 16


def _env_max_n(default: int) -> int:
    raw = os.environ.get("W3SAT_MAX_N")
    return int(raw) if raw else default


class Status(enum.Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"


@dataclass(frozen=True)
class OracleResult:
    status: Status
    witness: tuple[int, ...] | None
    nodes_explored: int

    @property
    def sat(self) -> bool:
        return self.status is Status.SAT


def satisfies(inst: Instance, witness) -> bool:
    for c in inst.clauses:
        if not any((witness[lit_var(l) - 1] == 1) == (l > 0) for l in c.lits):
            return False
    return True


def _sat_result(inst, witness, nodes) -> OracleResult:
    witness = tuple(int(b) for b in witness)
    if len(witness) != inst.n_vars or not satisfies(inst, witness):
        raise AssertionError(f"oracle produced a non-satisfying witness {witness}")
    return OracleResult(Status.SAT, witness, nodes)


def solve_enumerate(inst: Instance, max_n: int | None = None) -> OracleResult:
    """Scan all 2^n assignments in lexicographic order (x1 most significant,
    0 before 1) and return the first one no clause blocks.

    A clause blocks assignment ``a`` exactly when ``a & mask == value``,
    where ``mask`` selects the clause's variables and ``value`` has a 1 for
    every negated literal. ``nodes_explored`` counts assignments examined.
    """
    limit = _env_max_n(ENUMERATE_MAX_N) if max_n is None else max_n
    n = inst.n_vars
    if n > limit:
        raise TooLarge(f"enumeration limited to n <= {limit}, got n={n}")
    masks = np.zeros(len(inst.clauses), dtype=np.int64)
    values = np.zeros(len(inst.clauses), dtype=np.int64)
    for k, c in enumerate(inst.clauses):
        for l in c.lits:
            bit = 1 << (n - lit_var(l))
            masks[k] |= bit
            if l < 0:
                values[k] |= bit
    total = 1 << n
    step = 1 << min(n, _CHUNK_BITS)
    for base in range(0, total, step):
        idx = np.arange(base, min(base + step, total), dtype=np.int64)
        blocked = np.zeros(idx.shape, dtype=bool)
        for mask, value in zip(masks, values):
            blocked |= (idx & mask) == value
        free = np.flatnonzero(~blocked)
        if free.size:
            a = base + int(free[0])
            bits = [(a >> (n - v)) & 1 for v in range(1, n + 1)]
            return _sat_result(inst, bits, a + 1)
    return OracleResult(Status.UNSAT, None, total)


def solve_dpll(inst: Instance) -> OracleResult:
    """Backtracking search with unit propagation.

    Branches on the lowest-index unassigned variable, trying 0 before 1.
    Variables left unassigned in a model are set to 0.
    """
    n = inst.n_vars
    clauses = [c.lits for c in inst.clauses]
    assign = [0] * (n + 1)  # 0 unassigned, 1 true, -1 false
    nodes = 0

    def value(l):
        a = assign[l if l > 0 else -l]
        return a if l > 0 else -a

    def propagate(trail) -> bool:
        changed = True
        while changed:
            changed = False
            for c in clauses:
                unassigned = None
                count = 0
                satisfied = False
                for l in c:
                    v = value(l)
                    if v == 1:
                        satisfied = True
                        break
                    if v == 0:
                        count += 1
                        unassigned = l
                if satisfied:
                    continue
                if count == 0:
                    return False
                if count == 1:
                    var = abs(unassigned)
                    assign[var] = 1 if unassigned > 0 else -1
                    trail.append(var)
                    changed = True
        return True

    def search() -> bool:
        nonlocal nodes
        nodes += 1
        trail: list[int] = []
        if not propagate(trail):
            for v in trail:
                assign[v] = 0
            return False
        var = next((v for v in range(1, n + 1) if assign[v] == 0), None)
        if var is None:
            return True
        for choice in (-1, 1):
            assign[var] = choice
            if search():
                return True
        assign[var] = 0
        for v in trail:
            assign[v] = 0
        return False

    if search():
        return _sat_result(inst, [1 if assign[v] == 1 else 0 for v in range(1, n + 1)], nodes)
    return OracleResult(Status.UNSAT, None, nodes)


def full_expansion(inst: Instance, max_n: int | None = None) -> set[Clause]:
    """All width-n clauses that some given clause subsumes."""
    limit = FULL_EXPANSION_MAX_N if max_n is None else max_n
    n = inst.n_vars
    if n > limit:
        raise TooLarge(f"full expansion limited to n <= {limit}, got n={n}")
    out: set[Clause] = set()
    for c in inst.clauses:
        if c.width == n:
            out.add(c)
        else:
            out.update(Clause(t) for t in expansion_lits(c.lits, n, n) if len(t) == n)
    return out


def is_unsat_by_full_cover(inst: Instance, max_n: int | None = None) -> bool:
    return len(full_expansion(inst, max_n)) == 2 ** inst.n_vars


def clause_for_assignment(bits) -> Clause:
    """The unique width-n clause blocking ``bits``: x_i appears positive
    exactly when bit i is 0."""
    return Clause(tuple(v if b == 0 else -v for v, b in enumerate(bits, 1)))


def reduce_full_to_units_trace(full, n: int, keep_var: int) -> list[DerivationStep]:
    """Derive ``[keep_var]`` and ``[-keep_var]`` from the complete set of
    width-n clauses by eliminating every other variable in turn.

    Variables are eliminated in descending index order. Each round pairs
    clauses that differ only in the eliminated variable and resolves them,
    halving the clause set. The returned trace starts with one given step
    per input clause (in sorted order); the last two steps are the units.
    """
    full = set(full)
    if not 1 <= keep_var <= n:
        raise VarOutOfRange(f"keep_var must be in 1..{n}")
    if len(full) != 2**n or any(c.width != n for c in full):
        raise IncompleteCover(f"need all {2**n} width-{n} clauses, got {len(full)}")
    steps: list[DerivationStep] = []
    current: list[tuple[int, Clause]] = []
    for c in sorted(full):
        steps.append(DerivationStep(len(steps), Rule.GIVEN, (), c))
        current.append((steps[-1].id, c))
    for t in range(n, 0, -1):
        if t == keep_var:
            continue
        halves: dict[tuple[int, ...], dict[bool, tuple[int, Clause]]] = {}
        for cid, c in current:
            rest = tuple(l for l in c.lits if lit_var(l) != t)
            positive = t in c.lits
            halves.setdefault(rest, {})[positive] = (cid, c)
        nxt = []
        for rest in sorted(halves):
            pair = halves[rest]
            if len(pair) != 2:
                raise IncompleteCover(f"no partner for {rest} when eliminating x{t}")
            (pa, ca), (pb, cb) = pair[True], pair[False]
            r = resolve(ca, cb)
            if r != Clause(rest):
                raise AssertionError(f"unexpected resolvent {r} of {ca} and {cb}")
            steps.append(DerivationStep(len(steps), Rule.RESOLVE, (min(pa, pb), max(pa, pb)), r))
            nxt.append((steps[-1].id, r))
        current = nxt
    return steps


def reduce_full_to_units(full, n: int, keep_var: int) -> tuple[Clause, Clause]:
    steps = reduce_full_to_units_trace(full, n, keep_var)
    pos, neg = Clause((keep_var,)), Clause((-keep_var,))
    units = {s.clause for s in steps if s.clause.width == 1}
    if not {pos, neg} <= units:
        raise AssertionError(f"elimination ended without the unit pair for x{keep_var}")
    return pos, neg


def units_imply_all(a_var: int, target: Clause, n: int) -> list[DerivationStep]:
    """Derive ``target`` from the units ``[a]`` (step 0) and ``[-a]`` (step 1).

    Targets mentioning ``a`` are single expansions of the matching unit.
    Otherwise, with ``target = [b, c, d, ...]``, expand ``[a]`` to ``[a, b]``
    and ``[-a]`` to ``[-a, c, d, ...]`` and resolve the two on ``a``.
    The givens themselves are not part of the returned list.
    """
    if not 1 <= a_var <= n or any(lit_var(l) > n for l in target.lits):
        raise VarOutOfRange(f"a_var and target must lie within 1..{n}")
    pos, neg = Clause((a_var,)), Clause((-a_var,))
    if target in (pos, neg):
        return []
    if a_var in target.lits:
        return [DerivationStep(2, Rule.EXPAND, (0,), target)]
    if -a_var in target.lits:
        return [DerivationStep(2, Rule.EXPAND, (1,), target)]
    first, rest = target.lits[0], target.lits[1:]
    with_a = Clause(tuple(sorted((a_var, first), key=abs)))
    steps = [DerivationStep(2, Rule.EXPAND, (0,), with_a)]
    if rest:
        without = Clause(tuple(sorted((-a_var,) + rest, key=abs)))
        steps.append(DerivationStep(3, Rule.EXPAND, (1,), without))
        other = 3
    else:
        other = 1
    r = resolve(with_a, steps[-1].clause if rest else neg)
    assert r is not TAUTOLOGY and r == target
    steps.append(DerivationStep(steps[-1].id + 1, Rule.RESOLVE, (2, other), r))
    return steps
