"""Reading and writing instances.

Two text formats are supported: DIMACS CNF and the bracketed list-of-lists
form ``[[-1, 2, 3], [1, 4, 5]]`` where each inner list is a clause and a
minus sign marks negation. Both go through the same canonicalization:
duplicate literals merge, tautologies are dropped and counted, and clauses
wider than ``max_width`` are rejected.
"""

from __future__ import annotations

import json
import logging

from .core import TAUTOLOGY, Instance, canonicalize
from .errors import EmptyClauseInput, ParseError, VarOutOfRange, WidthTooLarge

log = logging.getLogger(__name__)

DEFAULT_MAX_WIDTH = 3


def _build(raw_clauses, n_vars, max_width, where):
    clauses = []
    dropped = 0
    for idx, raw in enumerate(raw_clauses):
        for lit in raw:
            if abs(lit) > n_vars:
                raise VarOutOfRange(f"{where(idx)}: literal {lit} exceeds n={n_vars}")
        c = canonicalize(raw)
        if c is TAUTOLOGY:
            dropped += 1
            continue
        if max_width is not None and c.width > max_width:
            raise WidthTooLarge(f"{where(idx)}: width {c.width} > {max_width}", idx)
        clauses.append(c)
    if dropped:
        log.info("dropped %d tautological clause(s)", dropped)
    return Instance(n_vars, tuple(clauses), dropped)


def parse_dimacs(text: str, max_width: int | None = DEFAULT_MAX_WIDTH) -> Instance:
    n_vars = None
    declared_m = None
    raw_clauses: list[list[int]] = []
    clause_lines: list[int] = []
    current: list[int] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("c"):
            continue
        if stripped.startswith("%"):
            break
        if stripped.startswith("p"):
            parts = stripped.split()
            if n_vars is not None:
                raise ParseError("duplicate problem line", line=lineno)
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(f"bad problem line {stripped!r}", line=lineno)
            try:
                n_vars, declared_m = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(f"bad problem line {stripped!r}", line=lineno) from None
            if n_vars < 0 or declared_m < 0:
                raise ParseError("negative counts in problem line", line=lineno)
            continue
        if n_vars is None:
            raise ParseError("clause before the 'p cnf' line", line=lineno)
        for tok in stripped.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ParseError(f"bad token {tok!r}", line=lineno) from None
            if lit == 0:
                if not current:
                    raise EmptyClauseInput(f"line {lineno}: empty clause")
                raw_clauses.append(current)
                clause_lines.append(lineno)
                current = []
            else:
                current.append(lit)
    if n_vars is None:
        raise ParseError("missing 'p cnf' problem line")
    if current:
        raise ParseError("last clause is not terminated by 0", line=lineno)
    if declared_m != len(raw_clauses):
        log.warning("header declares %d clauses, found %d", declared_m, len(raw_clauses))
    return _build(raw_clauses, n_vars, max_width,
                  lambda i: f"clause {i} (line {clause_lines[i]})")


def parse_paper_lists(text: str, n_vars: int | None = None,
                      max_width: int | None = DEFAULT_MAX_WIDTH) -> Instance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not a list of integer lists: {exc.msg}", position=exc.pos) from None
    if not isinstance(data, list):
        raise ParseError("top level must be a list", position=0)
    for idx, clause in enumerate(data):
        if not isinstance(clause, list):
            raise ParseError(f"clause {idx} is not a list")
        if not clause:
            raise EmptyClauseInput(f"clause {idx} is empty")
        for lit in clause:
            if type(lit) is not int or lit == 0:
                raise ParseError(f"clause {idx}: {lit!r} is not a nonzero integer")
    inferred = max((abs(l) for clause in data for l in clause), default=0)
    if n_vars is None:
        n_vars = inferred
    return _build(data, n_vars, max_width, lambda i: f"clause {i}")


def detect_format(text: str) -> str:
    return "paper" if text.lstrip().startswith("[") else "dimacs"


def parse_instance(text: str, fmt: str | None = None, n_vars: int | None = None,
                   max_width: int | None = DEFAULT_MAX_WIDTH) -> Instance:
    fmt = fmt or detect_format(text)
    if fmt == "dimacs":
        inst = parse_dimacs(text, max_width)
        if n_vars is not None and n_vars != inst.n_vars:
            if n_vars < inst.n_vars:
                raise VarOutOfRange(f"--vars {n_vars} is below the declared n={inst.n_vars}")
            inst = Instance(n_vars, inst.clauses, inst.tautologies_dropped)
        return inst
    if fmt == "paper":
        return parse_paper_lists(text, n_vars, max_width)
    raise ValueError(f"unknown format {fmt!r}")


def emit_dimacs(inst: Instance, comments=()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p cnf {inst.n_vars} {len(inst.clauses)}")
    lines.extend(" ".join(map(str, c.lits)) + " 0" for c in inst.clauses)
    return "\n".join(lines) + "\n"


def emit_paper_lists(inst: Instance) -> str:
    return json.dumps(inst.to_lists()) + "\n"
