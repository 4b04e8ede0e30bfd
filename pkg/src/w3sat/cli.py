"""Command-line entry point: ``w3sat <command> ...``.

Exit codes: 0 finished (SAT, Saturated, or a report was written),
10 UNSAT or Refuted, 20 counterexample found, 2 usage or input error,
1 internal error (including a soundness violation).
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .engine import EngineOptions, check_trace, export_derivation_dag, format_trace, saturate
from .errors import SoundnessViolation, W3satError
from .harness.lemmas import LEMMAS
from .io import emit_dimacs, parse_instance
from .report import RunRecord, digest, timing_path, write_csv, write_json

log = logging.getLogger("w3sat")

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2
EXIT_UNSAT = 10
EXIT_FOUND = 20

DEFAULT_SEED = 0


class UsageError(Exception):
    pass


# argument helpers

def int_range(text: str) -> tuple[int, int]:
    """Parse ``"10..40"`` or ``"12"`` into an inclusive pair."""
    try:
        if ".." in text:
            lo, hi = (int(p) for p in text.split("..", 1))
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or LO..HI, got {text!r}") from None
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def int_list(text: str) -> list[int]:
    """Comma-separated integers, each item optionally a ``LO..HI`` range."""
    out = []
    for part in text.split(","):
        lo, hi = int_range(part.strip())
        out.extend(range(lo, hi + 1))
    return out


def float_list(text: str) -> list[float]:
    try:
        return [float(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def resolve_seed(flag: int | None) -> int:
    """Flag first, then ``W3SAT_SEED``, then the built-in default."""
    if flag is not None:
        return flag
    env = os.environ.get("W3SAT_SEED")
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"W3SAT_SEED must be an integer, got {env!r}") from None
    return DEFAULT_SEED


def read_input(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def load_instance(args):
    data = read_input(args.input)
    inst = parse_instance(data.decode("utf-8"), args.format, args.vars)
    if inst.tautologies_dropped:
        print(f"dropped {inst.tautologies_dropped} tautological clause(s)", file=sys.stderr)
    return inst, digest(data)


def engine_options(args) -> EngineOptions:
    return EngineOptions(expansion=not args.no_expand, conformance_sweep=args.sweep,
                         max_passes=args.max_passes)


def _progress(label):
    def report(done, total=None):
        if total:
            if done == total or done % max(1, total // 20) == 0:
                log.info("%s %d/%d", label, done, total)
        else:
            log.info("%s %s", label, done)
    return report


# commands

def cmd_solve(args) -> int:
    inst, dig = load_instance(args)
    verdict = saturate(inst, engine_options(args))
    print(verdict.describe())
    if args.check:
        if verdict.refuted:
            report = check_trace(inst, verdict)
            print("trace check: ok" if report.ok else
                  f"trace check: FAILED at step {report.failed_step}: {report.reason}")
            if not report.ok:
                raise SoundnessViolation("refutation trace failed the replay check")
        else:
            print("trace check: nothing to check (not refuted)")
    if args.trace and verdict.refuted:
        Path(args.trace).write_text(format_trace(verdict.trace), encoding="utf-8")
    if args.dot and verdict.refuted:
        Path(args.dot).write_text(export_derivation_dag(verdict), encoding="utf-8")
    if args.record:
        payload = {"verdict": verdict.kind.value, "var": verdict.var, **verdict.stats.as_dict()}
        RunRecord("solve", _opts(args), dig, payload).write(args.record)
    return EXIT_UNSAT if verdict.refuted else EXIT_OK


def cmd_oracle(args) -> int:
    from .harness.compare import run_oracle
    from .oracle import solve_enumerate

    inst, dig = load_instance(args)
    if args.method == "enumerate" and args.max_n is not None:
        result = solve_enumerate(inst, args.max_n)
    else:
        result = run_oracle(inst, args.method)
    if result.sat:
        print("SAT " + " ".join(str(v if b else -v) for v, b in enumerate(result.witness, 1)))
    else:
        print("UNSAT")
    print(f"nodes_explored={result.nodes_explored}")
    if args.record:
        payload = {"status": result.status.value,
                   "witness": list(result.witness) if result.witness else None,
                   "nodes_explored": result.nodes_explored}
        RunRecord("oracle", _opts(args), dig, payload).write(args.record)
    return EXIT_OK if result.sat else EXIT_UNSAT


def cmd_compare(args) -> int:
    from .harness.compare import COMPARE_FIELDS, compare, sweep_configs

    seed = resolve_seed(args.seed)
    lo, hi = args.n
    cfgs = sweep_configs(lo, hi, args.density, args.count, seed)
    report = compare(cfgs, args.oracle, args.workers, _progress("compare"))
    out = Path(args.out)
    write_csv(out / "compare.csv", COMPARE_FIELDS, (r.as_dict() for r in report.rows))
    write_csv(timing_path(out / "compare.csv"), ("seed", "wall_time"),
              ({"seed": r.seed, "wall_time": f"{r.wall_time:.6f}"} for r in report.rows))
    summary = {"seed": seed, "n": [lo, hi], "densities": args.density, **report.summary()}
    write_json(out / "compare.summary.json", summary)
    if not args.no_plot:
        from .plotting import plot_agreement
        plot_agreement(report.rows, out / "compare.png")
    print(" ".join(f"{k}={v}" for k, v in report.summary().items()))
    return EXIT_OK


def _persist(out: Path, stem: str, inst, sidecar: dict):
    (out / f"{stem}.cnf").write_text(
        emit_dimacs(inst, comments=[f"seed {sidecar['seed']}"]), encoding="utf-8")
    write_json(out / f"{stem}.json", sidecar)


def cmd_mine(args) -> int:
    from .harness.mine import mine_counterexample, minimize
    from .oracle import solve_dpll

    seed = resolve_seed(args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    result = mine_counterexample(args.n, args.density, seed, args.budget, _progress("mine"))
    if not result.found:
        write_json(out / "mine.json", {"outcome": "NotFound", "tried": result.tried,
                                       "unsat_seen": result.unsat_seen, "seed": seed,
                                       "n": list(args.n), "density": args.density,
                                       "max_db_ratio": round(result.max_db_ratio, 6)})
        print(f"NotFound tried={result.tried} unsat_seen={result.unsat_seen}")
        return EXIT_OK
    cfg = result.config
    sidecar = {"seed": cfg.seed, "n": cfg.n_vars, "m": cfg.n_clauses,
               "engine_stats": result.engine_stats.as_dict(),
               "oracle_status": solve_dpll(result.instance).status.value}
    _persist(out, "counterexample", result.instance, sidecar)
    summary = {"outcome": "Found", "tried": result.tried, "unsat_seen": result.unsat_seen,
               "max_db_ratio": round(result.max_db_ratio, 6), **sidecar}
    if not args.no_minimize:
        small = minimize(result.instance)
        verdict = saturate(small)
        oracle = solve_dpll(small)
        if verdict.refuted or oracle.sat:
            raise AssertionError("minimized instance failed re-verification")
        small_side = {"seed": cfg.seed, "n": small.n_vars, "m": len(small.clauses),
                      "engine_stats": verdict.stats.as_dict(),
                      "oracle_status": oracle.status.value}
        _persist(out, "minimized", small, small_side)
        summary["minimized_m"] = len(small.clauses)
    if args.bridge:
        from .harness.bridge import saturate_bridged
        target = small if not args.no_minimize else result.instance
        summary["bridge_refuted"] = saturate_bridged(target).refuted
    write_json(out / "mine.json", summary)
    extras = "".join(f" {k}={summary[k]}" for k in ("minimized_m", "bridge_refuted") if k in summary)
    print(f"Found seed={cfg.seed} n={cfg.n_vars} m={cfg.n_clauses} tried={result.tried}{extras}")
    return EXIT_FOUND


def cmd_lemmas(args) -> int:
    from .harness.lemmas import check_lemma_shape, replay

    seed = resolve_seed(args.seed)
    lemmas = args.lemma or list(LEMMAS)
    if args.replay is not None:
        if len(lemmas) != 1 or len(args.k) != 1:
            raise UsageError("--replay needs exactly one --lemma and one --k")
        failure = replay(lemmas[0], args.k[0], args.n, args.replay)
        if failure is None:
            print("trial does not fail")
        else:
            print(f"failure {failure.as_dict()}")
        return EXIT_OK
    reports = [check_lemma_shape(lem, k, args.n, args.trials, seed)
               for lem in lemmas for k in args.k]
    out = Path(args.out)
    rows = [r.row() for r in reports]
    write_csv(out / "lemmas.csv", rows[0].keys() if rows else (), rows)
    write_json(out / "lemma_failures.json",
               [f.as_dict() for r in reports for f in r.failures])
    if not args.no_plot and reports:
        from .plotting import plot_lemmas
        plot_lemmas(reports, out / "lemmas.png")
    for row in rows:
        print(" ".join(f"{k}={v}" for k, v in row.items()))
    return EXIT_OK


def cmd_bench(args) -> int:
    from .harness.bench import BENCH_FIELDS, TIMING_FIELDS, bench_bounds

    seed = resolve_seed(args.seed)
    rows = bench_bounds(args.n, range(seed, seed + args.seeds), args.density,
                        progress=_progress("bench n="))
    out = Path(args.out)
    write_csv(out / "bench.csv", BENCH_FIELDS, (r.as_dict() for r in rows))
    write_csv(timing_path(out / "bench.csv"), TIMING_FIELDS, (r.timing_dict() for r in rows))
    if not args.no_plot:
        from .plotting import plot_bench
        plot_bench(rows, out / "bench.png")
    for r in rows:
        print(" ".join(f"{k}={v}" for k, v in r.as_dict().items()))
    return EXIT_OK


def cmd_export_dot(args) -> int:
    inst, _ = load_instance(args)
    verdict = saturate(inst, engine_options(args))
    if not verdict.refuted:
        raise UsageError("instance saturated without a contradiction; no derivation to export")
    text = export_derivation_dag(verdict)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text, encoding="utf-8")
    return EXIT_OK


def _opts(args) -> dict:
    skip = {"func", "command", "input", "record", "log_level"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


# parser

def _input_args(p):
    p.add_argument("input", help="instance file, or - for stdin")
    p.add_argument("--format", choices=("dimacs", "paper"),
                   help="input format (default: guess from the first character)")
    p.add_argument("--vars", type=int, metavar="N",
                   help="number of variables; variables in no clause still count "
                        "(they change which expansions exist)")


def _engine_args(p):
    p.add_argument("--no-expand", action="store_true", help="disable clause expansion")
    p.add_argument("--sweep", action="store_true",
                   help="rescan all pairs every pass instead of the worklist schedule")
    p.add_argument("--max-passes", type=int, metavar="K", help="safety cap on passes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="w3sat", description="Width-3 clause saturation for 3-CNF, with an oracle "
                                  "and experiment harness.",
        epilog="exit codes: 0 SAT / Saturated / report written, 10 UNSAT / Refuted, "
               "20 counterexample found, 2 usage or input error, 1 internal error. "
               "Environment: W3SAT_SEED (default seed), W3SAT_MAX_N (enumeration guard).")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default="WARNING",
                        choices=("DEBUG", "INFO", "WARNING", "ERROR"))
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="saturate an instance and report the verdict")
    _input_args(p)
    _engine_args(p)
    p.add_argument("--trace", metavar="PATH", help="write the refutation trace")
    p.add_argument("--check", action="store_true", help="replay-check the refutation trace")
    p.add_argument("--dot", metavar="PATH", help="write the derivation DAG as DOT")
    p.add_argument("--record", metavar="PATH", help="write a JSON run record")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="decide an instance by enumeration or DPLL")
    _input_args(p)
    p.add_argument("--method", choices=("enumerate", "dpll"), default="enumerate")
    p.add_argument("--max-n", type=int, metavar="N",
                   help="enumeration size guard (default: W3SAT_MAX_N or 24)")
    p.add_argument("--record", metavar="PATH", help="write a JSON run record")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("compare", help="engine vs. oracle on random instances")
    p.add_argument("--n", type=int_range, default=(6, 14), metavar="LO..HI")
    p.add_argument("--density", type=float_list, default=[3.0, 4.27, 5.5],
                   metavar="D[,D...]", help="clauses per variable")
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--oracle", choices=("enumerate", "dpll"), default="enumerate")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--seed", type=int, help="first seed (default: W3SAT_SEED or 0)")
    p.add_argument("--out", default="reports/compare")
    p.add_argument("--no-plot", action="store_true")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("mine", help="search for UNSAT instances the engine fails to refute")
    p.add_argument("--n", type=int_range, default=(10, 40), metavar="LO..HI")
    p.add_argument("--density", type=float, default=4.27)
    p.add_argument("--budget", type=int, default=100_000)
    p.add_argument("--seed", type=int, help="first seed (default: W3SAT_SEED or 0)")
    p.add_argument("--out", default="reports/mine")
    p.add_argument("--no-minimize", action="store_true")
    p.add_argument("--bridge", action="store_true",
                   help="also test the found instance with width-4 resolvents resolved once "
                        "more (experiment; slow at large n)")
    p.set_defaults(func=cmd_mine)

    p = sub.add_parser("lemmas", help="randomized width-reduction shape checks")
    p.add_argument("--lemma", action="append", choices=LEMMAS,
                   help="repeatable; default all")
    p.add_argument("--k", type=int_list, default=[4, 5], metavar="K[,K...]")
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, help="default: W3SAT_SEED or 0")
    p.add_argument("--replay", type=int, metavar="TRIAL_SEED",
                   help="re-run one trial by its seed and print the failure, if any")
    p.add_argument("--out", default="reports/lemmas")
    p.add_argument("--no-plot", action="store_true")
    p.set_defaults(func=cmd_lemmas)

    p = sub.add_parser("bench", help="database size and runtime against n")
    p.add_argument("--n", type=int_list, default=list(range(5, 31, 5)), metavar="N[,N...]")
    p.add_argument("--seeds", type=int, default=5, help="instances per n")
    p.add_argument("--seed", type=int, help="first seed (default: W3SAT_SEED or 0)")
    p.add_argument("--density", type=float, default=4.27)
    p.add_argument("--out", default="reports/bench")
    p.add_argument("--no-plot", action="store_true")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("export-dot", help="write the refutation derivation DAG as DOT")
    _input_args(p)
    _engine_args(p)
    p.add_argument("--out", default="-", help="output path (default stdout)")
    p.set_defaults(func=cmd_export_dot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=args.log_level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except SoundnessViolation as exc:
        print(f"FATAL soundness violation: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (UsageError, W3satError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001 - last-resort reporting
        log.exception("internal error")
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
