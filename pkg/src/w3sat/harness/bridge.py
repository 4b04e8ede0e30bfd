"""Experiment: does discarding width-4 resolvents lose refutations?

The main engine throws width-4 resolvents away. This variant keeps them in
a side pool and resolves each against the stored clauses once more, storing
any result of width at most 3. Pool members are never resolved with each
other and never stored themselves.

The closure here uses resolution only. Expansion cannot change whether a
contradicting unit pair is reached: a resolvent of weakened clauses is a
weakening of a resolvent of the originals (or of an original), so every
clause of width at most 3 that expansion would enable is already subsumed.
The tests cross-check this against a brute-force version with expansion.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from itertools import combinations

from ..core import EMPTY_CONTRADICTION, Instance, expansion_lits, resolve_lits


@dataclass(frozen=True)
class BridgeResult:
    refuted: bool
    stored: int
    pool: int


def _clashes(c, occ):
    seen = set()
    for l in c:
        for j in occ.get(-l, ()):
            if j not in seen:
                seen.add(j)
                yield j


def saturate_bridged(inst: Instance, expansion: bool = False, bridge: bool = True) -> BridgeResult:
    """Width-3 resolution closure with optional width-4 bridging.

    Clauses strictly containing a stored clause are dropped (or skipped if
    they were stored first): everything they could produce is a weakening
    of something the smaller clause produces. ``expansion=True`` instead
    keeps every clause and stores every expansion of width at most 3; it
    exists for cross-checking on small instances and is far slower.
    """
    prune = not expansion
    n = inst.n_vars
    stored: list[tuple[int, ...]] = []
    index: set[tuple[int, ...]] = set()
    occ: dict[int, list[int]] = defaultdict(list)
    pool: list[tuple[int, ...]] = []
    pool_index: set[tuple[int, ...]] = set()
    pool_occ: dict[int, list[int]] = defaultdict(list)
    refuted = False

    def subsumed(c) -> bool:
        for size in range(1, min(len(c) - 1, 3) + 1):
            for sub in combinations(c, size):
                if sub in index:
                    return True
        return False

    def store(c) -> bool:
        nonlocal refuted
        if c in index or (prune and subsumed(c)):
            return False
        index.add(c)
        stored.append(c)
        if len(c) == 1 and (-c[0],) in index:
            refuted = True
        return True

    def resolvent(a, b):
        nonlocal refuted
        r = resolve_lits(a, b)
        if r is EMPTY_CONTRADICTION:
            refuted = True
            return None
        return r if r.__class__ is tuple else None

    for c in inst.clauses:
        store(c.lits)
    i = 0
    while i < len(stored) and not refuted:
        c = stored[i]
        if prune and subsumed(c):
            i += 1
            continue
        for j in _clashes(c, occ):
            r = resolvent(c, stored[j])
            if r is None:
                continue
            if len(r) <= 3:
                store(r)
            elif bridge and len(r) == 4 and r not in pool_index and not (prune and subsumed(r)):
                pool_index.add(r)
                pool.append(r)
                p = len(pool) - 1
                for l in r:
                    pool_occ[l].append(p)
                # catch up with clauses already processed; later ones find
                # this entry through pool_occ
                for k in _clashes(r, occ):
                    s = resolvent(r, stored[k])
                    if s is not None and len(s) <= 3:
                        store(s)
                s = resolvent(r, c)
                if s is not None and len(s) <= 3:
                    store(s)
        if bridge:
            for p in _clashes(c, pool_occ):
                s = resolvent(pool[p], c)
                if s is not None and len(s) <= 3:
                    store(s)
        if expansion:
            for e in expansion_lits(c, n, 3):
                store(e)
        for l in c:
            occ[l].append(i)
        i += 1
    return BridgeResult(refuted, len(stored), len(pool))
