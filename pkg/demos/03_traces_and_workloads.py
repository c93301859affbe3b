"""Traces on disk and random valid workloads.

The trace format is one command per line: I/DI/E/DE edit the timeline,
Q/LE probe it. The generator produces seeded random workloads whose every
update prefix is a valid monotonic history, which is what the differential
checker feeds to both backends and the replay oracle.
"""

from retropq import parse_trace, replay, serialize_trace
from retropq.cli import run_check, run_trace
from retropq.trace import (
    WorkloadParams,
    gen_workload,
    parse_trace_lines,
    updates_only,
)

text = """\
# a tiny retroactive session
I 10 5
I 20 3
E 30
Q 25
Q 30
LE 30
"""

print("Parsing a hand-written trace:")
for cmd in parse_trace(text):
    print(f"  {cmd}")
print()

print("Running it (the answers land one line per probe):")
report = run_trace(parse_trace_lines(text))
for line in report.outputs:
    print(f"  {line}")
print()

print("Serialization is canonical; parsing it back is the identity:")
cmds = parse_trace(text)
canonical = serialize_trace(cmds)
print("  " + repr(canonical))
assert parse_trace(canonical) == cmds
assert serialize_trace(parse_trace(canonical)) == canonical
print()

print("A seeded workload: 12 updates, retroactive half the time, 1 probe each.")
params = WorkloadParams(op_count=12, retroactive_fraction=0.5, seed=4,
                        probes_per_update=1)
workload = gen_workload(params)
print(serialize_trace(workload), end="")
print()

print("Every update prefix of a generated workload is a valid timeline:")
records = {}
for cmd in updates_only(workload):
    if cmd.op == "I":
        records[cmd.time] = replay.insert_op(cmd.time, cmd.key)
    elif cmd.op == "E":
        records[cmd.time] = replay.extract_op(cmd.time)
    else:
        del records[cmd.time]
    ops = sorted(records.values(), key=lambda r: r.time)
    assert replay.validate(ops).ok
print(f"  {len(updates_only(workload))} prefixes validated against the oracle")
print()

print("The differential checker replays probes through both backends:")
result = run_check(gen_workload(WorkloadParams(op_count=128, seed=99,
                                               probes_per_update=4)))
print(f"  ok={result.ok}  updates={result.updates}  probes={result.queries}")
