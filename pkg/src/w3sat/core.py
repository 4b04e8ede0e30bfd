"""Clause algebra: literals, canonical clauses, instances, and the three
derivation primitives (subsumption, expansion, resolution).

Literals are signed integers: ``+v`` is variable ``v`` and ``-v`` its
negation, the same convention DIMACS and the bracketed list format use.
A :class:`Clause` stores its literals sorted by variable index, so two
clauses over the same literal set are equal and hash alike.
"""

from __future__ import annotations

import enum
import itertools
from math import comb
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import EmptyClauseInput, VarOutOfRange, WidthExceedsN

Literal = int
Assignment = Sequence[int]  # bit i-1 holds the value of variable i


def make_literal(var: int, positive: bool = True) -> Literal:
    if var < 1:
        raise VarOutOfRange(f"variable index must be >= 1, got {var}")
    return var if positive else -var


def negate(lit: Literal) -> Literal:
    return -lit


def lit_var(lit: Literal) -> int:
    return lit if lit > 0 else -lit


def is_positive(lit: Literal) -> bool:
    return lit > 0


def format_literal(lit: Literal) -> str:
    return f"x{lit}" if lit > 0 else f"¬x{-lit}"


class Marker(enum.Enum):
    """Non-clause outcomes of :func:`canonicalize` and :func:`resolve`."""

    TAUTOLOGY = "tautology"
    NO_PIVOT = "no-pivot"
    EMPTY = "empty-contradiction"

    def __repr__(self):
        return f"Marker.{self.name}"


TAUTOLOGY = Marker.TAUTOLOGY
NO_PIVOT = Marker.NO_PIVOT
EMPTY_CONTRADICTION = Marker.EMPTY


@dataclass(frozen=True, order=True)
class Clause:
    """A canonical, tautology-free disjunction of literals.

    Build clauses with :func:`canonicalize` or :meth:`of`; the constructor
    trusts that ``lits`` is already canonical.
    """

    lits: tuple[int, ...]

    @classmethod
    def of(cls, *lits: int) -> "Clause":
        c = canonicalize(lits)
        if c is TAUTOLOGY:
            raise ValueError(f"{lits} is a tautology")
        return c

    @property
    def width(self) -> int:
        return len(self.lits)

    @property
    def vars(self) -> tuple[int, ...]:
        return tuple(lit_var(l) for l in self.lits)

    def __len__(self):
        return len(self.lits)

    def __iter__(self):
        return iter(self.lits)

    def __contains__(self, lit):
        return lit in self.lits

    def __str__(self):
        return "[" + ", ".join(format_literal(l) for l in self.lits) + "]"

    def __repr__(self):
        return f"Clause{self.lits}"


def canonicalize(raw_literals: Iterable[int]) -> Clause | Marker:
    """Collapse duplicate literals and sort by variable.

    Returns :data:`TAUTOLOGY` when some variable occurs in both polarities.
    """
    raw = list(raw_literals)
    if not raw:
        raise EmptyClauseInput("a clause needs at least one literal")
    seen: dict[int, int] = {}
    for lit in raw:
        if lit == 0:
            raise VarOutOfRange("literal 0 does not name a variable")
        v = lit_var(lit)
        prev = seen.get(v)
        if prev is None:
            seen[v] = lit
        elif prev != lit:
            return TAUTOLOGY
    return Clause(tuple(seen[v] for v in sorted(seen)))


def is_tautology(raw_literals: Iterable[int]) -> bool:
    lits = set(raw_literals)
    return any(-l in lits for l in lits)


@dataclass(frozen=True)
class Instance:
    """A CNF instance over variables ``1..n_vars``.

    Duplicate clauses are allowed and kept. ``tautologies_dropped`` records
    how many input clauses were discarded during ingestion; it does not take
    part in equality.
    """

    n_vars: int
    clauses: tuple[Clause, ...]
    tautologies_dropped: int = field(default=0, compare=False)

    def __post_init__(self):
        if self.n_vars < 0:
            raise VarOutOfRange(f"n_vars must be >= 0, got {self.n_vars}")
        for c in self.clauses:
            for l in c.lits:
                if lit_var(l) > self.n_vars:
                    raise VarOutOfRange(
                        f"clause {c} mentions x{lit_var(l)} but n_vars={self.n_vars}"
                    )

    @classmethod
    def from_lists(cls, lists: Iterable[Iterable[int]], n_vars: int | None = None) -> "Instance":
        clauses = []
        dropped = 0
        for raw in lists:
            c = canonicalize(raw)
            if c is TAUTOLOGY:
                dropped += 1
            else:
                clauses.append(c)
        if n_vars is None:
            n_vars = max((max(c.vars) for c in clauses), default=0)
        return cls(n_vars, tuple(clauses), dropped)

    @property
    def max_width(self) -> int:
        return max((c.width for c in self.clauses), default=0)

    def to_lists(self) -> list[list[int]]:
        return [list(c.lits) for c in self.clauses]

    def __len__(self):
        return len(self.clauses)


def _check_range(c: Clause, n: int):
    for l in c.lits:
        if lit_var(l) > n:
            raise VarOutOfRange(f"{c} mentions x{lit_var(l)} beyond assignment length {n}")


def blocks(c: Clause, a: Assignment) -> bool:
    """True iff every literal of ``c`` is false under ``a``."""
    _check_range(c, len(a))
    for l in c.lits:
        value = a[lit_var(l) - 1]
        if (l > 0) == bool(value):
            return False
    return True


def blocked_count(c: Clause, n: int) -> int:
    if c.width > n:
        raise WidthExceedsN(f"clause width {c.width} exceeds n={n}")
    _check_range(c, n)
    return 2 ** (n - c.width)


def subsumes(c: Clause, d: Clause) -> bool:
    """True iff every literal of ``c`` also occurs in ``d``."""
    if c.width > d.width:
        return False
    return set(c.lits).issubset(d.lits)


def resolve_lits(c: Sequence[int], d: Sequence[int]):
    """Tuple-level resolution shared by :func:`resolve` and the engine.

    Returns a canonical literal tuple or a :class:`Marker`.
    """
    pivot = 0
    for l in c:
        if -l in d:
            if pivot:
                return TAUTOLOGY
            pivot = l
    if not pivot:
        return NO_PIVOT
    merged = {l for l in c if l != pivot}
    merged.update(l for l in d if l != -pivot)
    if not merged:
        return EMPTY_CONTRADICTION
    return tuple(sorted(merged, key=abs))


def resolve(c: Clause, d: Clause) -> Clause | Marker:
    """Resolve two clauses on their single clashing variable.

    Two or more clashing variables give :data:`TAUTOLOGY` (every candidate
    resolvent contains a complementary pair); none gives :data:`NO_PIVOT`;
    a unit against its negation gives :data:`EMPTY_CONTRADICTION`.
    """
    r = resolve_lits(c.lits, d.lits)
    if isinstance(r, Marker):
        return r
    return Clause(r)


def expansion_lits(lits: tuple[int, ...], n: int, max_width: int):
    """Yield the strict canonical superclauses of ``lits`` up to ``max_width``
    over variables ``1..n``, narrowest first then lexicographically."""
    used = {lit_var(l) for l in lits}
    free = [v for v in range(1, n + 1) if v not in used]
    for extra in range(1, max_width - len(lits) + 1):
        for chosen in itertools.combinations(free, extra):
            for signs in itertools.product((1, -1), repeat=extra):
                new = list(lits)
                new.extend(s * v for s, v in zip(signs, chosen))
                new.sort(key=abs)
                yield tuple(new)


def expansions(c: Clause, n: int, max_width: int) -> set[Clause]:
    if c.width > max_width or max_width > n:
        raise WidthExceedsN(f"need width({c})={c.width} <= max_width={max_width} <= n={n}")
    _check_range(c, n)
    return {Clause(t) for t in expansion_lits(c.lits, n, max_width)}


def resolvent_width_bounds(k: int, m: int) -> tuple[int, int]:
    if k < 1 or m < 1:
        raise ValueError("clause widths must be >= 1")
    return max(k, m) - 1, k + m - 2


def clause_db_bound(n: int) -> int:
    """Number of distinct canonical clauses of width 1..3 over n variables."""
    return 8 * comb(n, 3) + 4 * comb(n, 2) + 2 * n
