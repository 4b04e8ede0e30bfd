"""Width-3 saturation: close a clause database under resolution and
expansion, stopping at the first contradicting unit pair.

Two schedules are provided. The default worklist processes clauses in id
order and pairs each one with every earlier clause it clashes with, so each
unordered pair is visited once. ``conformance_sweep`` instead repeats the
literal all-pairs pass until a pass adds nothing, checking units only at
the end of a pass. Both reach the same clause set; the worklist is much
faster.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property

from .core import (
    Clause,
    Instance,
    Marker,
    clause_db_bound,
    expansion_lits,
    lit_var,
    resolve,
    resolve_lits,
    subsumes,
)
from .errors import MalformedTrace, NotRefuted, WidthTooLarge

MAX_WIDTH = 3


class Rule(enum.Enum):
    GIVEN = "given"
    RESOLVE = "resolve"
    EXPAND = "expand"


@dataclass(frozen=True)
class DerivationStep:
    id: int
    rule: Rule
    parents: tuple[int, ...]
    clause: Clause

    def format(self) -> str:
        parents = ",".join(map(str, self.parents)) or "-"
        lits = " ".join(map(str, self.clause.lits))
        return f"{self.id} {self.rule.value} {parents} {lits} 0"


@dataclass(frozen=True)
class EngineOptions:
    expansion: bool = True
    conformance_sweep: bool = False
    # None means the clause-count bound plus one.
    max_passes: int | None = None
    # Skip clauses strictly subsumed by a stored clause. Their resolvents are
    # expansions of clauses derived anyway, so the fixpoint is unchanged.
    # Only applies while expansion is on.
    skip_subsumed: bool = True


@dataclass(frozen=True)
class EngineStats:
    passes: int
    resolutions_attempted: int
    clauses_added: int
    db_size: int

    def as_dict(self):
        return {
            "passes": self.passes,
            "resolutions_attempted": self.resolutions_attempted,
            "clauses_added": self.clauses_added,
            "db_size": self.db_size,
        }


class VerdictKind(enum.Enum):
    REFUTED = "Refuted"
    SATURATED = "Saturated"


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    stats: EngineStats
    var: int | None = None
    trace: tuple[DerivationStep, ...] = ()
    n_vars: int = 0
    db_keys: tuple[int, ...] = field(default=(), repr=False)

    @cached_property
    def db(self) -> tuple[Clause, ...]:
        """Final database contents in id order."""
        return tuple(Clause(_lits_of(k, self.n_vars)) for k in self.db_keys)

    @property
    def refuted(self) -> bool:
        return self.kind is VerdictKind.REFUTED

    def describe(self) -> str:
        s = self.stats
        head = self.kind.value
        if self.refuted:
            head += f" var={self.var}"
        return (
            f"{head} passes={s.passes} resolutions_attempted={s.resolutions_attempted} "
            f"clauses_added={s.clauses_added} db_size={s.db_size}"
        )


class EngineError(RuntimeError):
    pass


def _key_of(lits, n: int) -> int:
    key = 0
    for l in lits:
        key |= 1 << (l - 1) if l > 0 else 1 << (n - l - 1)
    return key


def _lits_of(key: int, n: int) -> tuple[int, ...]:
    lits = []
    low = (1 << n) - 1
    pos, neg = key & low, key >> n
    while pos:
        bit = pos & -pos
        lits.append(bit.bit_length())
        pos ^= bit
    while neg:
        bit = neg & -neg
        lits.append(-bit.bit_length())
        neg ^= bit
    lits.sort(key=abs)
    return tuple(lits)


class _Db:
    """Deduplicating clause store with occurrence lists and a unit index.

    Clauses are keyed by a bitmask: bit ``v-1`` for literal ``v`` and bit
    ``n+v-1`` for ``-v``.
    """

    def __init__(self, n: int):
        self.n = n
        self.bound = clause_db_bound(n)
        self.keys: list[int] = []
        self.clauses: list[tuple[int, ...]] = []
        self.ids: dict[int, int] = {}
        self.rules: list[Rule] = []
        self.parents: list[tuple[int, ...]] = []
        # clauses the worklist no longer needs to process
        self.dead: list[bool] = []
        self.occ: dict[int, list[int]] = {}
        self.units: dict[int, int] = {}
        self.contradiction: tuple[int, int] | None = None

    def __len__(self):
        return len(self.keys)

    def add(self, key, lits, rule, parents=(), index=True):
        """Insert a clause; returns the new id or None for a duplicate.

        With ``index=False`` the clause gets no occurrence-list entries and
        its literal tuple is built lazily; only for clauses that will never
        be resolved.
        """
        if key in self.ids:
            return None
        cid = len(self.keys)
        if cid >= self.bound:
            raise EngineError(f"clause database exceeded the bound {self.bound}")
        self.keys.append(key)
        self.ids[key] = cid
        self.rules.append(rule)
        self.parents.append(parents)
        if not index:
            self.clauses.append(None)
            self.dead.append(True)
            return cid
        if lits is None:
            lits = _lits_of(key, self.n)
        self.clauses.append(lits)
        self.dead.append(False)
        occ = self.occ
        for l in lits:
            bucket = occ.get(l)
            if bucket is None:
                occ[l] = [cid]
            else:
                bucket.append(cid)
        if len(lits) == 1:
            lit = lits[0]
            self.units[lit] = cid
            other = self.units.get(-lit)
            if other is not None and self.contradiction is None:
                self.contradiction = (other, cid)
        return cid

    def lits(self, i) -> tuple[int, ...]:
        c = self.clauses[i]
        if c is None:
            c = self.clauses[i] = _lits_of(self.keys[i], self.n)
        return c

    def add_lits(self, lits, rule, parents=()):
        return self.add(_key_of(lits, self.n), lits, rule, parents)

    def ancestry(self, roots):
        seen = set()
        stack = list(roots)
        while stack:
            i = stack.pop()
            if i in seen:
                continue
            seen.add(i)
            stack.extend(self.parents[i])
        return sorted(seen)

    def step(self, i) -> DerivationStep:
        return DerivationStep(i, self.rules[i], self.parents[i], Clause(self.lits(i)))


def _load(inst: Instance) -> _Db:
    for idx, c in enumerate(inst.clauses):
        if c.width > MAX_WIDTH:
            raise WidthTooLarge(f"clause {idx} {c} has width {c.width} > {MAX_WIDTH}", idx)
    db = _Db(inst.n_vars)
    for c in inst.clauses:
        db.add_lits(c.lits, Rule.GIVEN)
        if db.contradiction:
            break
    return db


def _verdict(db: _Db, passes: int, attempts: int, n_given: int) -> Verdict:
    stats = EngineStats(passes, attempts, len(db) - n_given, len(db))
    keys = tuple(db.keys)
    if db.contradiction is None:
        return Verdict(VerdictKind.SATURATED, stats, n_vars=db.n, db_keys=keys)
    first, second = db.contradiction
    trace = tuple(db.step(i) for i in db.ancestry([first, second]))
    var = abs(db.clauses[second][0])
    return Verdict(VerdictKind.REFUTED, stats, var=var, trace=trace, n_vars=db.n, db_keys=keys)


def saturate(inst: Instance, opts: EngineOptions | None = None) -> Verdict:
    """Run width-3 saturation on ``inst``.

    Deterministic: the same instance and options give the same verdict,
    statistics and trace.
    """
    opts = opts or EngineOptions()
    db = _load(inst)
    n_given = len(db)
    if db.contradiction:
        return _verdict(db, 0, 0, n_given)
    if opts.conformance_sweep:
        return _sweep(db, opts, n_given)
    return _worklist(db, opts, n_given)


def _strict_subset_stored(ids, key: int) -> bool:
    """True iff a clause whose literals are a strict subset of ``key``'s is stored."""
    bits = []
    k = key
    while k:
        b = k & -k
        bits.append(b)
        k ^= b
    if len(bits) == 3:
        a, b, c = bits
        return ((a | b) in ids or (a | c) in ids or (b | c) in ids
                or a in ids or b in ids or c in ids)
    if len(bits) == 2:
        return bits[0] in ids or bits[1] in ids
    return False


def _expansion_keys(key: int, width: int, n: int):
    """Keys of the strict superclauses of ``key`` up to width 3, in the order
    :func:`~w3sat.core.expansion_lits` yields them."""
    low = (1 << n) - 1
    used = (key | (key >> n)) & low
    free = [v for v in range(n) if not used >> v & 1]
    # pos bit, neg bit per free var, positive first
    for v in free:
        yield key | (1 << v)
        yield key | (1 << (n + v))
    if width == 1:
        for x, v in enumerate(free):
            pv, nv = 1 << v, 1 << (n + v)
            for w in free[x + 1:]:
                pw, nw = 1 << w, 1 << (n + w)
                yield key | pv | pw
                yield key | pv | nw
                yield key | nv | pw
                yield key | nv | nw


def _worklist(db: _Db, opts: EngineOptions, n_given: int) -> Verdict:
    max_passes = opts.max_passes or db.bound + 1
    n = db.n
    expand = opts.expansion
    # Pruning relies on expansion: it keeps the database upward closed.
    prune = opts.skip_subsumed and expand
    keys, clauses, ids, occ, dead = db.keys, db.clauses, db.ids, db.occ, db.dead
    low = (1 << n) - 1
    add = db.add
    EXPAND, RESOLVE = Rule.EXPAND, Rule.RESOLVE
    attempts = 0
    passes = 0
    start = 0
    # Each pass processes the clauses added by the previous one.
    while start < len(keys):
        passes += 1
        if passes > max_passes:
            raise EngineError(f"no fixpoint after {max_passes} passes")
        end = len(keys)
        for i in range(start, end):
            if dead[i]:
                continue
            ck = keys[i]
            if prune and _strict_subset_stored(ids, ck):
                dead[i] = True
                continue
            cp, cn = ck & low, ck >> n
            for l in clauses[i]:
                partners = occ.get(-l)
                if not partners:
                    continue
                for j in partners:
                    if j >= i:
                        break
                    if dead[j]:
                        continue
                    attempts += 1
                    dk = keys[j]
                    clash = (cp & (dk >> n)) | (cn & dk & low)
                    if clash & (clash - 1):
                        continue  # tautology
                    r = (ck | dk) & ~(clash | (clash << n))
                    if r.bit_count() <= MAX_WIDTH and r not in ids:
                        if prune and _strict_subset_stored(ids, r):
                            add(r, None, RESOLVE, (j, i), False)
                            continue
                        add(r, None, RESOLVE, (j, i))
                        if db.contradiction:
                            return _verdict(db, passes, attempts, n_given)
            width = ck.bit_count()
            if expand and width < MAX_WIDTH:
                for e in _expansion_keys(ck, width, n):
                    cid = ids.get(e)
                    if cid is None:
                        add(e, None, EXPAND, (i,), not prune)
                    elif prune:
                        dead[cid] = True
        start = end
    return _verdict(db, passes, attempts, n_given)


def _sweep(db: _Db, opts: EngineOptions, n_given: int) -> Verdict:
    max_passes = opts.max_passes or db.bound + 1
    n = db.n
    clauses = db.clauses
    attempts = 0
    passes = 0
    changed = True
    while changed:
        passes += 1
        if passes > max_passes:
            raise EngineError(f"no fixpoint after {max_passes} passes")
        changed = False
        snapshot = len(clauses)
        for i in range(snapshot):
            c = clauses[i]
            for j in range(snapshot):
                attempts += 1
                r = resolve_lits(c, clauses[j])
                if r.__class__ is tuple and len(r) <= MAX_WIDTH:
                    if db.add_lits(r, Rule.RESOLVE, (min(i, j), max(i, j))) is not None:
                        changed = True
            if opts.expansion and len(c) < MAX_WIDTH:
                for e in expansion_lits(c, n, MAX_WIDTH):
                    if db.add_lits(e, Rule.EXPAND, (i,)) is not None:
                        changed = True
        pair = _first_contradiction(db)
        if pair is not None:
            db.contradiction = pair
            return _verdict(db, passes, attempts, n_given)
    return _verdict(db, passes, attempts, n_given)


def _first_contradiction(db: _Db):
    best = None
    for lit, cid in db.units.items():
        other = db.units.get(-lit)
        if other is None:
            continue
        pair = (min(cid, other), max(cid, other))
        key = (pair[1], pair[0])
        if best is None or key < (best[1], best[0]):
            best = pair
    return best


@dataclass(frozen=True)
class CheckReport:
    ok: bool
    failed_step: int | None = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def check_derivation(inst: Instance, steps, goal: Clause | None = None) -> CheckReport:
    """Replay ``steps`` against ``inst`` without trusting the producer.

    Given steps must be clauses of ``inst``; resolve steps must equal the
    resolvent of their parents; expand steps must strictly extend their
    parent. Raises :class:`MalformedTrace` for dangling or forward parent
    references.
    """
    given = set(inst.clauses)
    known: dict[int, Clause] = {}
    for step in steps:
        sid, clause = step.id, step.clause
        if sid in known:
            raise MalformedTrace(f"step id {sid} appears twice")
        for p in step.parents:
            if p not in known:
                raise MalformedTrace(f"step {sid} refers to unknown parent {p}")
            if p >= sid:
                raise MalformedTrace(f"step {sid} refers to later step {p}")
        if any(lit_var(l) > inst.n_vars for l in clause.lits) or clause.width == 0:
            return CheckReport(False, sid, "clause outside the variable range")
        if step.rule is Rule.GIVEN:
            if step.parents or clause not in given:
                return CheckReport(False, sid, "given clause not in the instance")
        elif step.rule is Rule.RESOLVE:
            if len(step.parents) != 2:
                return CheckReport(False, sid, "resolve step needs two parents")
            a, b = (known[p] for p in step.parents)
            if resolve(a, b) != clause:
                return CheckReport(False, sid, "clause is not the resolvent of its parents")
        elif step.rule is Rule.EXPAND:
            if len(step.parents) != 1:
                return CheckReport(False, sid, "expand step needs one parent")
            parent = known[step.parents[0]]
            if parent == clause or not subsumes(parent, clause):
                return CheckReport(False, sid, "clause is not a strict expansion of its parent")
        known[sid] = clause
    if goal is not None and goal not in known.values():
        return CheckReport(False, None, f"goal {goal} never derived")
    return CheckReport(True)


def check_trace(inst: Instance, verdict: Verdict) -> CheckReport:
    """Audit a refutation: replay every step, then require that the final
    step is a unit whose complement also occurs in the trace."""
    if not verdict.refuted:
        raise NotRefuted("check_trace needs a refuted verdict")
    report = check_derivation(inst, verdict.trace)
    if not report:
        return report
    if not verdict.trace:
        return CheckReport(False, None, "empty trace")
    last = verdict.trace[-1]
    if last.clause.width != 1:
        return CheckReport(False, last.id, "trace does not end in a unit clause")
    lit = last.clause.lits[0]
    if verdict.var is not None and lit_var(lit) != verdict.var:
        return CheckReport(False, last.id, "final unit does not match the reported variable")
    if not any(s.clause.lits == (-lit,) for s in verdict.trace):
        return CheckReport(False, last.id, "complementary unit missing from trace")
    return CheckReport(True)


def format_trace(trace) -> str:
    """Line-oriented trace: ``<id> <rule> <parents|-> <literals> 0``."""
    return "".join(step.format() + "\n" for step in trace)


def parse_trace(text: str) -> tuple[DerivationStep, ...]:
    steps = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            sid = int(parts[0])
            rule = Rule(parts[1])
            parents = () if parts[2] == "-" else tuple(int(p) for p in parts[2].split(","))
            lits = [int(p) for p in parts[3:]]
        except (IndexError, ValueError) as exc:
            raise MalformedTrace(f"line {lineno}: {exc}") from None
        if not lits or lits[-1] != 0:
            raise MalformedTrace(f"line {lineno}: literal list must end with 0")
        steps.append(DerivationStep(sid, rule, parents, Clause(tuple(sorted(lits[:-1], key=abs)))))
    return tuple(steps)


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def export_derivation_dag(verdict: Verdict) -> str:
    """Render a refutation trace as a DOT digraph, nodes in id order."""
    if not verdict.refuted:
        raise NotRefuted("only refuted verdicts carry a derivation")
    lines = ["digraph derivation {", "  rankdir=TB;", "  node [shape=box];"]
    for step in verdict.trace:
        label = _dot_escape(str(step.clause))
        extra = ', style=filled, fillcolor="#f4cccc"' if step.clause.width == 1 else ""
        lines.append(f'  n{step.id} [label="{step.id}: {label}"{extra}];')
    for step in verdict.trace:
        for p in step.parents:
            lines.append(f'  n{p} -> n{step.id} [label="{step.rule.value}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
