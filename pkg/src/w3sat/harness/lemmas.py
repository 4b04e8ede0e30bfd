"""Randomized shape checks for the width-reduction lemmas.

Each lemma describes a derivation that passes through one or two clauses
of width ``k`` and claims the same result is reachable while only ever
storing clauses of width at most ``k - 1``. A checker samples premise
clauses matching the lemma's shape, computes the width-(k-1) closure of
the premises, and records whether the lemma's target clause is derived or
subsumed by a derived clause. Results are measurements, not assertions.

Closures are computed with resolution only, and the target counts as
derived when a closure clause subsumes it. Adding expansion would not
change the answer: resolving a weakened clause always yields a weakening
of a resolvent of the unweakened one (or of the unweakened clause itself).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from ..core import (EMPTY_CONTRADICTION, Clause, Marker, expansion_lits, lit_var,
                    resolve_lits, subsumes)
from ..errors import BadParams

LEMMAS = ("5.11", "5.12", "5.17", "5.18", "5.19")


@dataclass(frozen=True)
class LemmaFailure:
    lemma_id: str
    k: int
    n: int
    trial_seed: int
    premises: tuple[Clause, ...]
    intermediates: dict
    target: Clause

    def repro_command(self) -> str:
        return (f"w3sat lemmas --lemma {self.lemma_id} --k {self.k} --n {self.n} "
                f"--replay {self.trial_seed}")

    def as_dict(self):
        return {
            "lemma_id": self.lemma_id,
            "k": self.k,
            "n": self.n,
            "trial_seed": self.trial_seed,
            "premises": [list(c.lits) for c in self.premises],
            "intermediates": {k: list(v.lits) for k, v in self.intermediates.items()},
            "target": list(self.target.lits),
            "repro": self.repro_command(),
        }


@dataclass
class LemmaShapeReport:
    lemma_id: str
    k: int
    n: int
    seed: int
    trials: int = 0
    premise_matches: int = 0
    target_derived_at_reduced_width: int = 0
    failures: list[LemmaFailure] = field(default_factory=list)

    @property
    def skipped(self) -> int:
        return self.trials - self.premise_matches

    @property
    def pass_rate(self) -> float | None:
        if not self.premise_matches:
            return None
        return self.target_derived_at_reduced_width / self.premise_matches

    def row(self) -> dict:
        rate = self.pass_rate
        return {
            "lemma_id": self.lemma_id,
            "k": self.k,
            "n": self.n,
            "seed": self.seed,
            "trials": self.trials,
            "premise_matches": self.premise_matches,
            "skipped": self.skipped,
            "derived": self.target_derived_at_reduced_width,
            "failures": len(self.failures),
            "pass_rate": "" if rate is None else f"{rate:.6f}",
        }


@dataclass(frozen=True)
class Premise:
    """A matched premise: the clauses the closure starts from, the
    lemma's intermediate clauses, and the clause to reach."""

    premises: tuple[Clause, ...]
    intermediates: dict
    target: Clause


# premise matching

def _res(a: Clause, b: Clause):
    r = resolve_lits(a.lits, b.lits)
    return None if isinstance(r, Marker) else Clause(r)


def _strict_sub(a: Clause, b: Clause) -> bool:
    return a.width < b.width and subsumes(a, b)


def match_premise(lemma_id: str, k: int, clauses) -> Premise | None:
    """Check whether ``clauses`` fit the lemma's premise at width ``k``.

    Clause order per lemma (names follow the lemma statements):
    5.11 ``(A, B, C)``, 5.12 ``(A, B, C)``, 5.17 ``(A, B, C, D)``,
    5.18 ``(A, B, C, E)``, 5.19 ``(A, B, C, D)``. Returns None for
    degenerate or non-matching samples.
    """
    reduced = k - 1
    ends = (k - 1, k)
    if lemma_id == "5.11":
        a, b, c = clauses
        if max(a.width, b.width, c.width) > reduced:
            return None
        e = _res(a, b)
        if e is None or e.width != k:
            return None
        d = _res(c, e)
        if d is None or d.width not in ends:
            return None
        return Premise((a, b, c), {"E": e}, d)
    if lemma_id == "5.12":
        a, b, c = clauses
        if a.width > reduced or c.width > reduced or b.width != k or not _strict_sub(a, b):
            return None
        d = _res(b, c)
        if d is None or d.width not in ends:
            return None
        return Premise((a, c), {"B": b}, d)
    if lemma_id == "5.17":
        a, b, c, d = clauses
        if max(x.width for x in clauses) > reduced:
            return None
        e, f = _res(a, b), _res(c, d)
        if e is None or f is None or e.width != k or f.width != k:
            return None
        g = _res(e, f)
        if g is None or g.width not in ends:
            return None
        return Premise((a, b, c, d), {"E": e, "F": f}, g)
    if lemma_id == "5.18":
        a, b, c, e = clauses
        if max(a.width, b.width, c.width) > reduced or e.width != k or not _strict_sub(c, e):
            return None
        d = _res(a, b)
        if d is None or d.width != k:
            return None
        f = _res(d, e)
        if f is None or f.width not in ends:
            return None
        return Premise((a, b, c), {"D": d, "E": e}, f)
    if lemma_id == "5.19":
        a, b, c, d = clauses
        if max(a.width, b.width) > reduced or c.width != k or d.width != k:
            return None
        if not (_strict_sub(a, c) and _strict_sub(b, d)):
            return None
        e = _res(c, d)
        if e is None or e.width not in ends:
            return None
        return Premise((a, b), {"C": c, "D": d}, e)
    raise BadParams(f"unknown lemma {lemma_id!r}; expected one of {LEMMAS}")


# constructive sampling

def _fill(rng: random.Random, n: int, base, width: int, pool=()):
    """Extend literal list ``base`` to ``width`` distinct variables, drawing
    each extra literal from ``pool`` half the time when possible."""
    lits = list(base)
    used = {lit_var(l) for l in lits}
    pool = [l for l in pool if lit_var(l) not in used]
    while len(lits) < width:
        if pool and rng.random() < 0.5:
            lit = pool.pop(rng.randrange(len(pool)))
        else:
            free = [v for v in range(1, n + 1) if v not in used]
            if not free:
                break
            v = rng.choice(free)
            lit = v if rng.getrandbits(1) else -v
        if lit_var(lit) in used:
            continue
        used.add(lit_var(lit))
        lits.append(lit)
    lits.sort(key=abs)
    return Clause(tuple(lits))


def _random_clause(rng, n, width, avoid=()):
    vars_ = rng.sample([v for v in range(1, n + 1) if v not in avoid], width)
    return tuple(sorted((v if rng.getrandbits(1) else -v for v in vars_), key=abs))


def _split(rng, n, k, target):
    """Two clauses of width < k clashing on a fresh pivot whose resolvent
    is ``target`` (overlap between the halves is allowed)."""
    used = {lit_var(l) for l in target}
    free = [v for v in range(1, n + 1) if v not in used]
    if not free or len(target) > 2 * (k - 2):
        return None
    pivot = rng.choice(free)
    lits = list(target)
    rng.shuffle(lits)
    cut = rng.randint(len(lits) - (k - 2), k - 2)
    left, right = set(lits[:cut]), set(lits[cut:])
    spare = [l for l in lits if l not in right]
    rng.shuffle(spare)
    while len(right) < k - 2 and spare and rng.random() < 0.5:
        right.add(spare.pop())
    mk = lambda extra, side: Clause(tuple(sorted(side | {extra}, key=abs)))
    return mk(pivot, left), mk(-pivot, right)


def _clasher(rng, n, width, base):
    """A clause of ``width`` holding the complement of one literal of
    ``base``, filled mostly from ``base`` with at most one fresh literal,
    so its resolvent with ``base`` keeps roughly the width of ``base``."""
    lit = rng.choice(base)
    others = [l for l in base if l != lit]
    rng.shuffle(others)
    take = others[:max(0, width - 1)]
    body = set(take) | {-lit}
    if len(body) < width or rng.random() < 0.3:
        used = {lit_var(l) for l in base}
        free = [v for v in range(1, n + 1) if v not in used]
        if free:
            v = rng.choice(free)
            if len(body) >= width and take:
                body.discard(take[-1])
            body.add(v if rng.getrandbits(1) else -v)
    return Clause(tuple(sorted(body, key=abs)))


def _superclause(rng, n, base: Clause, width: int, pool=()):
    return _fill(rng, n, base.lits, width, pool)


def _sample_pair(rng, n, k):
    """A, B of width < k whose resolvent has width k (or None)."""
    e = _random_clause(rng, n, k)
    pair = _split(rng, n, k, e)
    return (pair, Clause(e)) if pair else (None, None)


def sample_candidate(lemma_id: str, k: int, n: int, rng: random.Random):
    """Draw clauses aimed at the lemma's premise shape. Draws can still
    miss the shape (width collisions, tautologies); the matcher decides."""
    if lemma_id == "5.11":
        pair, e = _sample_pair(rng, n, k)
        if pair is None:
            return None
        return (*pair, _clasher(rng, n, rng.randint(1, k - 1), e.lits))
    if lemma_id == "5.12":
        a = _fill(rng, n, [], rng.randint(1, k - 1))
        b = _superclause(rng, n, a, k)
        return (a, b, _clasher(rng, n, rng.randint(1, k - 1), b.lits))
    if lemma_id == "5.17":
        pair, e = _sample_pair(rng, n, k)
        if pair is None:
            return None
        f = _clasher(rng, n, k, e.lits)
        other = _split(rng, n, k, f.lits)
        if other is None:
            return None
        return (*pair, *other)
    if lemma_id == "5.18":
        pair, d = _sample_pair(rng, n, k)
        if pair is None:
            return None
        e = _clasher(rng, n, k, d.lits)
        lits = list(e.lits)
        c = Clause(tuple(sorted(rng.sample(lits, rng.randint(1, k - 1)), key=abs)))
        return (*pair, c, e)
    if lemma_id == "5.19":
        a = _fill(rng, n, [], rng.randint(1, k - 1))
        c = _superclause(rng, n, a, k)
        d = _clasher(rng, n, k, c.lits)
        b = Clause(tuple(sorted(rng.sample(d.lits, rng.randint(1, k - 1)), key=abs)))
        return (a, b, c, d)
    raise BadParams(f"unknown lemma {lemma_id!r}; expected one of {LEMMAS}")


# closure

def _resolvent(a, b):
    r = resolve_lits(a, b)
    if r.__class__ is tuple:
        return r
    return () if r is EMPTY_CONTRADICTION else None


def reduced_closure(premises, max_width: int) -> set[tuple[int, ...]]:
    """Resolution closure of ``premises`` keeping only resolvents of width
    at most ``max_width`` (premises wider than that are dropped).

    Clauses come back as literal tuples; ``()`` stands for the empty clause,
    which a unit and its complement produce and which subsumes everything.
    """
    clauses = [c.lits for c in premises if c.width <= max_width]
    seen = set(clauses)
    i = 0
    while i < len(clauses) and () not in seen:
        c = clauses[i]
        for j in range(i):
            r = _resolvent(c, clauses[j])
            if r is not None and len(r) <= max_width and r not in seen:
                seen.add(r)
                clauses.append(r)
        i += 1
    return seen


def expansion_closure(premises, n: int, max_width: int) -> set[tuple[int, ...]]:
    """Closure under resolution and expansion, both capped at ``max_width``.
    Slow; kept to cross-check :func:`reduced_closure`."""
    clauses = [c.lits for c in premises if c.width <= max_width]
    seen = set(clauses)
    i = 0
    while i < len(clauses) and () not in seen:
        c = clauses[i]
        new = []
        for j in range(i):
            r = _resolvent(c, clauses[j])
            if r is not None and len(r) <= max_width:
                new.append(r)
        new.extend(expansion_lits(c, n, max_width))
        for r in new:
            if r not in seen:
                seen.add(r)
                clauses.append(r)
        i += 1
    return seen


def covers(closure, target: Clause) -> bool:
    """True when some clause of ``closure`` subsumes ``target``."""
    lits = set(target.lits)
    return any(lits.issuperset(c) for c in closure)


def derived_at_reduced_width(premise: Premise, k: int) -> bool:
    return covers(reduced_closure(premise.premises, k - 1), premise.target)


def trial_seed(seed: int, trial: int) -> int:
    return (seed << 32) | trial


def run_trial(lemma_id: str, k: int, n: int, tseed: int):
    """Sample one candidate from ``tseed``; returns ``(premise, derived)``,
    with ``premise`` None when the sample does not match the shape."""
    rng = random.Random(tseed)
    candidate = sample_candidate(lemma_id, k, n, rng)
    premise = None if candidate is None else match_premise(lemma_id, k, candidate)
    if premise is None:
        return None, False
    return premise, derived_at_reduced_width(premise, k)


def _check_params(lemma_id, k, n, trials):
    if lemma_id not in LEMMAS:
        raise BadParams(f"unknown lemma {lemma_id!r}; expected one of {LEMMAS}")
    if not 3 <= k <= n <= 10:
        raise BadParams(f"need 3 <= k <= n <= 10, got k={k}, n={n}")
    if trials < 0:
        raise BadParams("trials must be non-negative")


def check_lemma_shape(lemma_id: str, k: int, n: int, trials: int, seed: int = 0) -> LemmaShapeReport:
    _check_params(lemma_id, k, n, trials)
    report = LemmaShapeReport(lemma_id, k, n, seed)
    for t in range(trials):
        tseed = trial_seed(seed, t)
        premise, derived = run_trial(lemma_id, k, n, tseed)
        report.trials += 1
        if premise is None:
            continue
        report.premise_matches += 1
        if derived:
            report.target_derived_at_reduced_width += 1
        else:
            report.failures.append(LemmaFailure(
                lemma_id, k, n, tseed, premise.premises, premise.intermediates, premise.target))
    return report


def replay(lemma_id: str, k: int, n: int, tseed: int) -> LemmaFailure | None:
    """Re-run a single trial; returns the failure it produces, if any."""
    _check_params(lemma_id, k, n, 1)
    premise, derived = run_trial(lemma_id, k, n, tseed)
    if premise is None or derived:
        return None
    return LemmaFailure(lemma_id, k, n, tseed, premise.premises, premise.intermediates, premise.target)
