"""Command-line front end.

    retropq run <trace> [--checked] [--backend naive|rangetree]
    retropq check [--trace PATH | --seed S --ops N] [--retro F --extract F --delete F --probes K]
    retropq gen --ops N --seed S [--retro F --extract F --delete F] -o PATH
    retropq bench --schedule 12,14,17 [--backend B --seed S --csv PATH]

Exit codes: 0 ok, 1 usage, 2 trace error, 3 validity violation or
infeasible generation, 4 divergence between a backend and the oracle.
"""

from __future__ import annotations

import argparse
import bisect
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from . import replay
from .bench import run_bench
from .errors import GenerationStuck, InvalidTimeline, RetroPQError, TraceError
from .retro_queue import MonotonicRetroQueue
from .trace import (
    Command,
    WorkloadParams,
    gen_workload,
    parse_trace_lines,
    serialize_trace,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_TRACE = 2
EXIT_INVALID = 3
EXIT_DIVERGENCE = 4

_UPDATE_CALLS = {
    "I": lambda q, c: q.insert_insert(c.time, c.key),
    "DI": lambda q, c: q.delete_insert(c.time),
    "E": lambda q, c: q.insert_extract(c.time),
    "DE": lambda q, c: q.delete_extract(c.time),
}


def _fmt(value) -> str:
    return "none" if value is None else str(value)


# --------------------------------------------------------------------------
# run
# --------------------------------------------------------------------------

@dataclass
class RunReport:
    """One output line per Q/LE command, in input order, plus diagnostics."""

    outputs: List[str] = field(default_factory=list)
    errors: List[str] = field(default_factory=list)
    updates: int = 0
    queries: int = 0
    exit_code: int = EXIT_OK


def run_trace(line_cmds: List[Tuple[int, Command]], backend: str = "rangetree",
              checked: bool = False) -> RunReport:
    """Execute a parsed trace against one timeline."""
    queue = MonotonicRetroQueue(backend=backend, checked=checked)
    report = RunReport()
    for lineno, cmd in line_cmds:
        try:
            if cmd.op == "Q":
                report.outputs.append(f"min {cmd.time} {_fmt(queue.get_min(cmd.time))}")
                report.queries += 1
            elif cmd.op == "LE":
                report.outputs.append(
                    f"le {cmd.time} {_fmt(queue.last_extracted(cmd.time))}")
                report.queries += 1
            else:
                _UPDATE_CALLS[cmd.op](queue, cmd)
                report.updates += 1
        except InvalidTimeline as exc:
            report.errors.append(f"line {lineno}: {exc}")
            report.exit_code = EXIT_INVALID
            return report
        except RetroPQError as exc:
            report.errors.append(f"line {lineno}: {exc}")
            report.exit_code = EXIT_TRACE
            return report
    return report


# --------------------------------------------------------------------------
# check
# --------------------------------------------------------------------------

@dataclass
class Divergence:
    index: int  # position in the command list
    command: Command
    backend: str
    expected: object
    got: object


@dataclass
class CheckResult:
    ok: bool
    updates: int = 0
    queries: int = 0
    divergence: Optional[Divergence] = None
    prefix: List[Command] = field(default_factory=list)
    invalid: Optional[str] = None  # set when the trace itself is unusable


def run_check(cmds: List[Command],
              queues: Optional[Dict[str, MonotonicRetroQueue]] = None) -> CheckResult:
    """Run every command through the oracle and each backend, comparing all
    Q/LE answers. Stops at the first divergence and reports the minimal
    failing prefix. Updates are oracle-validated first, so a divergence
    verdict is only ever issued about a valid timeline."""
    if queues is None:
        queues = {name: MonotonicRetroQueue(backend=name)
                  for name in ("naive", "rangetree")}
    result = CheckResult(ok=True)
    ops: List[replay.OpRecord] = []
    times: List[int] = []
    recs: Dict[int, replay.OpRecord] = {}

    for i, cmd in enumerate(cmds):
        if cmd.op in ("Q", "LE"):
            oracle_fn = replay.get_min if cmd.op == "Q" else replay.last_extracted
            expected = oracle_fn(ops, cmd.time)
            query = ((lambda q: q.get_min(cmd.time)) if cmd.op == "Q"
                     else (lambda q: q.last_extracted(cmd.time)))
            result.queries += 1
            for name, queue in queues.items():
                got = query(queue)
                if got != expected:
                    result.ok = False
                    result.divergence = Divergence(i, cmd, name, expected, got)
                    result.prefix = cmds[: i + 1]
                    return result
            continue

        # An update: mirror it into the oracle's op list, then every backend.
        if cmd.op == "I":
            rec = replay.insert_op(cmd.time, cmd.key)
        elif cmd.op == "E":
            rec = replay.extract_op(cmd.time)
        else:
            rec = recs.get(cmd.time)
            want = replay.OpKind.INSERT if cmd.op == "DI" else replay.OpKind.EXTRACT
            if rec is None or rec.kind is not want:
                result.ok = False
                result.invalid = f"command {i}: no matching update to delete at {cmd.time}"
                return result
        at = bisect.bisect_left(times, cmd.time)
        if cmd.op in ("I", "E"):
            if at < len(times) and times[at] == cmd.time:
                result.ok = False
                result.invalid = f"command {i}: duplicate update time {cmd.time}"
                return result
            candidate = ops[:at] + [rec] + ops[at:]
        else:
            candidate = ops[:at] + ops[at + 1:]
        verdict = replay.validate(candidate)
        if not verdict.ok:
            result.ok = False
            result.invalid = (f"command {i}: timeline becomes invalid "
                              f"({verdict.violation} at {verdict.time})")
            return result
        ops = candidate
        if cmd.op in ("I", "E"):
            times.insert(at, cmd.time)
            recs[cmd.time] = rec
        else:
            times.pop(at)
            del recs[cmd.time]
        for name, queue in queues.items():
            try:
                _UPDATE_CALLS[cmd.op](queue, cmd)
            except RetroPQError as exc:
                result.ok = False
                result.divergence = Divergence(i, cmd, name, "accepted", repr(exc))
                result.prefix = cmds[: i + 1]
                return result
        result.updates += 1
    return result


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad arguments; this tool reserves 2 for trace errors.
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _build_parser() -> _Parser:
    parser = _Parser(prog="retropq", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run_p = sub.add_parser("run", help="execute a trace and print query answers")
    run_p.add_argument("trace", help="path to a trace file")
    run_p.add_argument("--checked", action="store_true",
                       help="oracle-validate every update (slow, safe)")
    run_p.add_argument("--backend", choices=("naive", "rangetree"),
                       default="rangetree")

    check_p = sub.add_parser("check", help="differentially test both backends "
                                           "against the replay oracle")
    check_p.add_argument("--trace", help="trace file to check")
    check_p.add_argument("--seed", type=int, default=0)
    check_p.add_argument("--ops", type=int, default=256,
                         help="updates to generate when no trace is given")
    check_p.add_argument("--retro", type=float, default=0.5)
    check_p.add_argument("--extract", type=float, default=0.3)
    check_p.add_argument("--delete", type=float, default=0.1)
    check_p.add_argument("--probes", type=int, default=2,
                         help="Q/LE probes per generated update")

    gen_p = sub.add_parser("gen", help="generate a random valid workload")
    gen_p.add_argument("--ops", type=int, required=True)
    gen_p.add_argument("--seed", type=int, required=True)
    gen_p.add_argument("--retro", type=float, default=0.5)
    gen_p.add_argument("--extract", type=float, default=0.3)
    gen_p.add_argument("--delete", type=float, default=0.1)
    gen_p.add_argument("--probes", type=int, default=2)
    gen_p.add_argument("-o", "--out", required=True, help="output trace path")

    bench_p = sub.add_parser("bench", help="per-operation latency scaling")
    bench_p.add_argument("--schedule", default="12,14,17",
                         help="comma-separated exponents k; each runs m=2^k updates")
    bench_p.add_argument("--backend", choices=("naive", "rangetree"),
                         default="rangetree")
    bench_p.add_argument("--seed", type=int, default=0)
    bench_p.add_argument("--csv", help="also write rows as CSV to this path")
    return parser


def _params_from(args, probes: int) -> WorkloadParams:
    return WorkloadParams(
        op_count=args.ops, retroactive_fraction=args.retro,
        extract_fraction=args.extract, delete_fraction=args.delete,
        seed=args.seed, probes_per_update=probes)


def _cmd_run(args) -> int:
    try:
        with open(args.trace, "r", encoding="ascii") as fh:
            line_cmds = parse_trace_lines(fh.read())
    except (OSError, UnicodeDecodeError, TraceError) as exc:
        print(f"trace error: {exc}", file=sys.stderr)
        return EXIT_TRACE
    report = run_trace(line_cmds, backend=args.backend, checked=args.checked)
    for line in report.outputs:
        print(line)
    for err in report.errors:
        print(err, file=sys.stderr)
    return report.exit_code


def _cmd_check(args) -> int:
    if args.trace is not None:
        try:
            with open(args.trace, "r", encoding="ascii") as fh:
                cmds = [cmd for _, cmd in parse_trace_lines(fh.read())]
        except (OSError, UnicodeDecodeError, TraceError) as exc:
            print(f"trace error: {exc}", file=sys.stderr)
            return EXIT_TRACE
    else:
        try:
            cmds = gen_workload(_params_from(args, args.probes))
        except GenerationStuck as exc:
            print(f"generation stuck: {exc}", file=sys.stderr)
            return EXIT_INVALID
    result = run_check(cmds)
    if result.invalid is not None:
        print(f"invalid trace: {result.invalid}", file=sys.stderr)
        return EXIT_INVALID
    if result.ok:
        print(f"check passed: {result.updates} updates, {result.queries} probes, "
              f"backends naive+rangetree vs oracle")
        return EXIT_OK
    d = result.divergence
    print(f"DIVERGENCE at command {d.index} ({d.command.op} {d.command.time}): "
          f"backend {d.backend} answered {_fmt(d.got)}, oracle says {_fmt(d.expected)}",
          file=sys.stderr)
    print("minimal failing prefix:", file=sys.stderr)
    sys.stderr.write(serialize_trace(result.prefix))
    return EXIT_DIVERGENCE


def _cmd_gen(args) -> int:
    try:
        cmds = gen_workload(_params_from(args, args.probes))
    except GenerationStuck as exc:
        print(f"generation stuck: {exc}", file=sys.stderr)
        return EXIT_INVALID
    try:
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write(serialize_trace(cmds))
    except OSError as exc:
        print(f"cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_TRACE
    return EXIT_OK


def _cmd_bench(args) -> int:
    try:
        exponents = [int(tok) for tok in args.schedule.split(",") if tok]
    except ValueError:
        print(f"bad schedule: {args.schedule!r}", file=sys.stderr)
        return EXIT_USAGE
    report = run_bench(exponents, backend=args.backend, seed=args.seed)
    sys.stdout.write(report.to_text())
    if args.csv:
        try:
            with open(args.csv, "w", encoding="ascii") as fh:
                fh.write(report.to_csv())
        except OSError as exc:
            print(f"cannot write {args.csv}: {exc}", file=sys.stderr)
            return EXIT_TRACE
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    handler = {"run": _cmd_run, "check": _cmd_check,
               "gen": _cmd_gen, "bench": _cmd_bench}[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
