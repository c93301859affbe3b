"""Line-oriented trace format plus seeded generators of valid workloads.

Grammar (ASCII, one command per line, LF-terminated):

    I <time> <key>    add insert(key) at time        DI <time>  remove it
    E <time>          add extract-min at time        DE <time>  remove it
    Q <time>          probe the minimum at time
    LE <time>         probe the last-extracted value at time

Fields are signed 64-bit decimal integers separated by single spaces;
lines starting with '#' and blank lines are ignored. ``serialize_trace``
emits the canonical form, so parse(serialize(cmds)) == cmds and
serializing a parsed canonical trace reproduces it byte for byte.
"""

from __future__ import annotations

import bisect
import random
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

from . import replay
from .errors import GenerationStuck, NonIntegerField, TraceSyntaxError
from .retro_queue import MonotonicRetroQueue

INT64_MIN = -(1 << 63)
INT64_MAX = (1 << 63) - 1

_ARITY = {"I": 2, "DI": 1, "E": 1, "DE": 1, "Q": 1, "LE": 1}
UPDATE_OPS = ("I", "DI", "E", "DE")
PROBE_OPS = ("Q", "LE")

_MAX_CONSECUTIVE_REJECTIONS = 10_000
_TIME_STRIDE = 16  # appended update times advance by this, leaving gaps


@dataclass(frozen=True)
class Command:
    op: str
    time: int
    key: Optional[int] = None  # only "I" carries a key


def _parse_int(token: str, line: int) -> int:
    # Grammar: optional '-' then decimal digits. int() alone is too lax
    # (it takes '+5' and '1_0').
    body = token[1:] if token.startswith("-") else token
    if not (body.isascii() and body.isdigit()):
        raise NonIntegerField(f"not an integer: {token!r}", line)
    value = int(token, 10)
    if not INT64_MIN <= value <= INT64_MAX:
        raise NonIntegerField(f"outside signed 64-bit range: {token}", line)
    return value


def parse_trace_lines(text: Union[str, bytes]) -> List[Tuple[int, Command]]:
    """Parse a trace, keeping each command's 1-based source line."""
    if isinstance(text, (bytes, bytearray)):
        try:
            text = text.decode("ascii")
        except UnicodeDecodeError as exc:
            raise TraceSyntaxError(f"trace is not ASCII: {exc}", 0) from None
    out: List[Tuple[int, Command]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        op = fields[0]
        arity = _ARITY.get(op)
        if arity is None:
            raise TraceSyntaxError(f"unknown command {op!r}", lineno)
        if len(fields) != arity + 1:
            raise TraceSyntaxError(
                f"{op} takes {arity} field(s), got {len(fields) - 1}", lineno)
        time = _parse_int(fields[1], lineno)
        key = _parse_int(fields[2], lineno) if arity == 2 else None
        out.append((lineno, Command(op, time, key)))
    return out


def parse_trace(text: Union[str, bytes]) -> List[Command]:
    return [cmd for _, cmd in parse_trace_lines(text)]


def serialize_trace(cmds: List[Command]) -> str:
    """Canonical form: single spaces, one command per line, trailing LF."""
    lines = []
    for cmd in cmds:
        if cmd.op == "I":
            lines.append(f"I {cmd.time} {cmd.key}")
        else:
            lines.append(f"{cmd.op} {cmd.time}")
    return "".join(line + "\n" for line in lines)


def updates_only(cmds: List[Command]) -> List[Command]:
    return [c for c in cmds if c.op in UPDATE_OPS]


@dataclass(frozen=True)
class WorkloadParams:
    """Knobs for the random workload generators.

    ``retroactive_fraction`` is the chance a new update lands strictly
    inside the existing time span instead of after it; ``probes_per_update``
    Q/LE probes follow every accepted update.
    """

    op_count: int
    key_range: Tuple[int, int] = (0, 1 << 30)
    retroactive_fraction: float = 0.5
    extract_fraction: float = 0.3
    delete_fraction: float = 0.1
    seed: int = 0
    probes_per_update: int = 2

    def __post_init__(self):
        if self.op_count < 1:
            raise ValueError("op_count must be >= 1")
        lo, hi = self.key_range
        if lo > hi:
            raise ValueError("empty key_range")
        for name in ("retroactive_fraction", "extract_fraction", "delete_fraction"):
            frac = getattr(self, name)
            if not 0.0 <= frac <= 1.0:
                raise ValueError(f"{name} must be within [0, 1]")
        if self.probes_per_update < 0:
            raise ValueError("probes_per_update must be >= 0")


class _ProposalState:
    """Bookkeeping shared by both generators."""

    def __init__(self, params: WorkloadParams, rng: random.Random,
                 append_only_extracts: bool = False):
        self.params = params
        self.rng = rng
        self.append_only_extracts = append_only_extracts
        self.used_times: set = set()
        self.used_keys: set = set()
        self.max_time: Optional[int] = None  # largest update time ever used
        self.update_times: List[int] = []    # sorted, live updates only
        self.kind_at: dict = {}              # live update time -> "I" | "E"
        self.key_at: dict = {}               # live insert time -> key

    def pick_new_time(self, append_only: bool = False) -> Optional[int]:
        """A fresh update time: retroactive (inside the live span) or appended.

        Appends go past the largest time ever used, deleted updates
        included, so they can never collide."""
        rng, times = self.rng, self.update_times
        if self.max_time is None:
            return 0
        if (not append_only and times
                and rng.random() < self.params.retroactive_fraction
                and times[-1] - times[0] >= 2):
            t = rng.randrange(times[0] + 1, times[-1])
            return None if t in self.used_times else t
        return self.max_time + _TIME_STRIDE

    def pick_key(self, floor: Optional[int] = None) -> Optional[int]:
        """A fresh element key. Mostly drawn above ``floor`` (the last value
        extracted before the chosen insert time) so proposals usually stick;
        a quarter stay blind draws, keeping the rejection path honest."""
        lo, hi = self.params.key_range
        if floor is not None and self.rng.random() >= 0.25:
            lo = max(lo, floor + 1)
            if lo > hi:
                return None
        key = self.rng.randint(lo, hi)
        return None if key in self.used_keys else key

    def pick_deletion(self) -> Optional[Command]:
        if not self.update_times:
            return None
        t = self.rng.choice(self.update_times)
        return Command("DI" if self.kind_at[t] == "I" else "DE", t)

    def commit(self, cmd: Command) -> None:
        if cmd.op in ("I", "E"):
            bisect.insort(self.update_times, cmd.time)
            self.used_times.add(cmd.time)
            if self.max_time is None or cmd.time > self.max_time:
                self.max_time = cmd.time
            self.kind_at[cmd.time] = cmd.op
            if cmd.op == "I":
                self.used_keys.add(cmd.key)
                self.key_at[cmd.time] = cmd.key
        else:  # DI / DE: the time stays burnt, the update goes away
            self.update_times.remove(cmd.time)
            del self.kind_at[cmd.time]
            self.key_at.pop(cmd.time, None)

    def probes(self) -> List[Command]:
        rng = self.rng
        out = []
        for _ in range(self.params.probes_per_update):
            op = rng.choice(PROBE_OPS)
            if self.update_times and rng.random() < 0.5:
                t = rng.choice(self.update_times)
            elif self.update_times:
                t = rng.randint(self.update_times[0] - _TIME_STRIDE,
                                self.update_times[-1] + _TIME_STRIDE)
            else:
                t = rng.randint(-_TIME_STRIDE, _TIME_STRIDE)
            out.append(Command(op, t))
        return out


def gen_workload(params: WorkloadParams) -> List[Command]:
    """Random workload whose every update prefix is a valid timeline.

    Validity needs no cleverness here: each proposal is tested by running
    the replay oracle over the would-be timeline and rejected on refusal.
    Raises GenerationStuck after 10^4 consecutive rejections.
    """
    rng = random.Random(params.seed)
    state = _ProposalState(params, rng)
    ops: List[replay.OpRecord] = []  # sorted by time
    cmds: List[Command] = []
    emitted = 0
    rejections = 0

    while emitted < params.op_count:
        cmd = _propose(state, lambda t: replay.last_extracted(ops, t))
        candidate = _apply_to_ops(ops, cmd) if cmd is not None else None
        if candidate is not None and replay.validate(candidate).ok:
            ops = candidate
            state.commit(cmd)
            cmds.append(cmd)
            cmds.extend(state.probes())
            emitted += 1
            rejections = 0
        else:
            rejections += 1
            if rejections >= _MAX_CONSECUTIVE_REJECTIONS:
                raise GenerationStuck(
                    f"{rejections} consecutive rejections; params look infeasible")
    return cmds


def _propose(state: _ProposalState, floor_at) -> Optional[Command]:
    """One random command, or None when the draw came up unusable.
    ``floor_at(t)`` reports the last value extracted at or before t."""
    rng, params = state.rng, state.params
    if state.update_times and rng.random() < params.delete_fraction:
        return state.pick_deletion()
    is_extract = rng.random() < params.extract_fraction
    t = state.pick_new_time(append_only=is_extract and state.append_only_extracts)
    if t is None:
        return None
    if is_extract:
        return Command("E", t)
    key = state.pick_key(floor_at(t))
    if key is None:
        return None
    return Command("I", t, key)


def _apply_to_ops(ops: List[replay.OpRecord], cmd: Command
                  ) -> Optional[List[replay.OpRecord]]:
    times = [op.time for op in ops]
    if cmd.op in ("I", "E"):
        rec = (replay.insert_op(cmd.time, cmd.key) if cmd.op == "I"
               else replay.extract_op(cmd.time))
        at = bisect.bisect_left(times, cmd.time)
        return ops[:at] + [rec] + ops[at:]
    at = bisect.bisect_left(times, cmd.time)
    return ops[:at] + ops[at + 1:]


def gen_workload_fast(params: WorkloadParams) -> List[Command]:
    """Like :func:`gen_workload` but with O(log m) validity checks, for
    benchmark-sized workloads where replaying the oracle per proposal is
    hopeless.

    Validity is guaranteed constructively instead of by oracle rejection:
    a new insert at time t only needs its key to beat last_extracted(t);
    removing a never-extracted element, or any extract-min, cannot break a
    valid timeline; extract-mins are only appended after the whole span and
    only while elements are left over. Each restriction is re-verified
    against the oracle in the tests, on small workloads.
    """
    rng = random.Random(params.seed)
    state = _ProposalState(params, rng, append_only_extracts=True)
    shadow = MonotonicRetroQueue(backend="naive")
    cmds: List[Command] = []
    live_inserts = 0
    live_extracts = 0
    emitted = 0
    rejections = 0

    while emitted < params.op_count:
        cmd = _propose(state, shadow.last_extracted)
        ok = False
        if cmd is not None:
            if cmd.op == "I":
                floor = shadow.last_extracted(cmd.time)
                ok = floor is None or cmd.key > floor
                if ok:
                    shadow.insert_insert(cmd.time, cmd.key)
                    live_inserts += 1
            elif cmd.op == "E":
                # Appended extracts only: valid iff something is left at the end.
                ok = (cmd.time > state.update_times[-1]
                      if state.update_times else False) and live_inserts > live_extracts
                if ok:
                    shadow.insert_extract(cmd.time)
                    live_extracts += 1
            elif cmd.op == "DI":
                key = state.key_at[cmd.time]
                ok = shadow.extraction_time(key) is None
                if ok:
                    shadow.delete_insert(cmd.time)
                    live_inserts -= 1
            else:  # DE
                ok = True
                shadow.delete_extract(cmd.time)
                live_extracts -= 1
        if ok:
            state.commit(cmd)
            cmds.append(cmd)
            cmds.extend(state.probes())
            emitted += 1
            rejections = 0
        else:
            rejections += 1
            if rejections >= _MAX_CONSECUTIVE_REJECTIONS:
                raise GenerationStuck(
                    f"{rejections} consecutive rejections; params look infeasible")
    return cmds
