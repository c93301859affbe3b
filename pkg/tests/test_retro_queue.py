import random

import pytest

from retropq import (
    DuplicateKey,
    DuplicateTime,
    EmptyExtract,
    KeyNotFound,
    MonotonicRetroQueue,
    MonotonicityViolation,
    NoOperationAtTime,
    RankOutOfRange,
    WrongOperationKind,
    replay,
)
from retropq.replay import EMPTY_EXTRACT, MONOTONICITY
from retropq.trace import WorkloadParams, gen_workload, updates_only


def build(text, backend="rangetree", checked=False):
    """'I 10 5, E 30' -> queue with those updates applied in order."""
    queue = MonotonicRetroQueue(backend=backend, checked=checked)
    for chunk in text.split(","):
        fields = chunk.split()
        if not fields:
            continue
        if fields[0] == "I":
            queue.insert_insert(int(fields[1]), int(fields[2]))
        else:
            queue.insert_extract(int(fields[1]))
    return queue


def test_insert_insert():
    queue = MonotonicRetroQueue()
    queue.insert_insert(10, 5)
    assert [(r.time, r.key) for r in queue.operations()] == [(10, 5)]
    with pytest.raises(DuplicateTime):
        queue.insert_insert(10, 7)
    with pytest.raises(DuplicateKey):
        queue.insert_insert(11, 5)


def test_checked_retroactive_insert_shifts_the_extraction():
    queue = build("I 10 5, I 20 3, E 30", checked=True)
    queue.insert_insert(15, 4)
    assert queue.get_min(30) == 4
    # the oracle agrees about the edited timeline
    assert replay.get_min(queue.operations(), 30) == 4


def test_delete_insert():
    queue = build("I 10 5")
    assert queue.delete_insert(10) == 5
    assert queue.operations() == []

    queue = build("E 30")  # unchecked, deliberately invalid timeline
    with pytest.raises(WrongOperationKind):
        queue.delete_insert(30)

    queue = build("I 10 5, I 20 3, E 30")
    assert queue.delete_insert(20) == 3
    assert queue.get_min(35) is None  # 5 got extracted at 30 instead
    assert replay.get_min(queue.operations(), 35) is None


def test_insert_extract():
    queue = build("I 10 5")
    queue.insert_extract(30)
    assert queue.get_min(30) is None
    assert replay.get_min(queue.operations(), 30) is None

    empty = MonotonicRetroQueue(checked=True)
    with pytest.raises(EmptyExtract):
        empty.insert_extract(30)

    queue = build("I 10 5, E 30")
    with pytest.raises(DuplicateTime):
        queue.insert_extract(30)


def test_delete_extract():
    queue = build("I 10 5, E 30")
    queue.delete_extract(30)
    assert queue.get_min(30) == 5
    assert replay.get_min(queue.operations(), 30) == 5

    queue = build("I 10 5")
    with pytest.raises(WrongOperationKind):
        queue.delete_extract(10)
    with pytest.raises(NoOperationAtTime):
        queue.delete_extract(99)


def test_last_extracted():
    queue = build("I 10 5, I 20 3, E 30")
    assert queue.last_extracted(25) is None
    assert queue.last_extracted(30) == 3  # inclusive at the extraction time
    queue.insert_extract(40)
    assert queue.last_extracted(41) == 5
    assert replay.last_extracted(queue.operations(), 41) == 5


def test_get_min():
    queue = build("I 10 5, I 20 3, E 30")
    assert queue.get_min(25) == 3
    assert queue.get_min(30) == 5  # 3 is already gone at its extraction time
    assert MonotonicRetroQueue().get_min(100) is None


def test_extraction_time():
    queue = build("I 10 5, I 20 3, E 30")
    assert queue.extraction_time(3) == 30
    assert queue.extraction_time(5) is None
    with pytest.raises(KeyNotFound):
        build("I 10 5").extraction_time(9)


def test_validate():
    assert build("I 10 5, E 30").validate().ok
    report = build("E 30").validate()
    assert (report.ok, report.time, report.violation) == (False, 30, EMPTY_EXTRACT)
    report = build("I 10 10, E 20, I 25 5").validate()
    assert (report.ok, report.time, report.violation) == (False, 25, MONOTONICITY)


def test_queries_on_invalid_timelines_fail_loudly():
    # Unchecked mode happily stores an inconsistent history; queries that
    # would need a nonexistent extracted element raise instead of guessing.
    queue = build("E 30")
    with pytest.raises(RankOutOfRange):
        queue.last_extracted(30)
    assert queue.last_extracted(29) is None


def test_checked_mode_rejects_and_rolls_back():
    queue = build("I 10 10, E 20", checked=True)
    before = [(t, queue.get_min(t), ) for t in (0, 10, 15, 20, 25)]
    with pytest.raises(MonotonicityViolation):
        queue.insert_insert(25, 5)  # below the value extracted at 20
    with pytest.raises(EmptyExtract):
        queue.insert_extract(30)  # nothing left to extract
    with pytest.raises(EmptyExtract):
        queue.delete_insert(10)  # would orphan the extraction at 20
    assert [(t, queue.get_min(t)) for t in (0, 10, 15, 20, 25)] == before
    assert len(queue) == 2


def test_error_precedence_beats_validity_checks():
    queue = build("I 10 5, E 20", checked=True)
    with pytest.raises(DuplicateTime):
        queue.insert_insert(20, 1)  # time clash reported, not monotonicity
    with pytest.raises(WrongOperationKind):
        queue.delete_insert(20)


def test_counters():
    queue = build("I 10 5, I 20 3, E 30")
    assert len(queue) == 3
    assert queue.element_count == 2
    assert queue.extract_count == 1
    assert queue.backend_name == "rangetree"
    # element tree and point structure always hold the same population
    assert queue.element_count == len(queue._points)


def test_backend_choice():
    assert MonotonicRetroQueue(backend="naive").backend_name == "naive"
    with pytest.raises(ValueError):
        MonotonicRetroQueue(backend="btree")


def test_backends_agree_with_oracle_on_random_workloads():
    rng = random.Random(100)
    for seed in range(12):
        cmds = updates_only(gen_workload(WorkloadParams(
            op_count=80, seed=seed, probes_per_update=0)))
        queues = {name: MonotonicRetroQueue(backend=name)
                  for name in ("naive", "rangetree")}
        ops = []
        for cmd in cmds:
            for queue in queues.values():
                if cmd.op == "I":
                    queue.insert_insert(cmd.time, cmd.key)
                elif cmd.op == "E":
                    queue.insert_extract(cmd.time)
                elif cmd.op == "DI":
                    queue.delete_insert(cmd.time)
                else:
                    queue.delete_extract(cmd.time)
            ops = _fold(ops, cmd)
            times = [op.time for op in ops] or [0]
            probes = [rng.choice(times), rng.randint(-10, max(times) + 20)]
            for t in probes:
                want_min = replay.get_min(ops, t)
                want_last = replay.last_extracted(ops, t)
                for queue in queues.values():
                    assert queue.get_min(t) == want_min
                    assert queue.last_extracted(t) == want_last


def _fold(ops, cmd):
    if cmd.op == "I":
        return sorted(ops + [replay.insert_op(cmd.time, cmd.key)],
                      key=lambda r: r.time)
    if cmd.op == "E":
        return sorted(ops + [replay.extract_op(cmd.time)], key=lambda r: r.time)
    return [op for op in ops if op.time != cmd.time]


def test_extraction_time_matches_oracle_sequence():
    for seed in (3, 5, 8):
        cmds = updates_only(gen_workload(WorkloadParams(
            op_count=60, seed=seed, extract_fraction=0.45, probes_per_update=0)))
        queue = MonotonicRetroQueue()
        for cmd in cmds:
            {"I": lambda c: queue.insert_insert(c.time, c.key),
             "E": lambda c: queue.insert_extract(c.time),
             "DI": lambda c: queue.delete_insert(c.time),
             "DE": lambda c: queue.delete_extract(c.time)}[cmd.op](cmd)
        extracted = {key: t for t, key in replay.extracted_sequence(queue.operations())}
        for op in queue.operations():
            if op.kind is replay.OpKind.INSERT:
                assert queue.extraction_time(op.key) == extracted.get(op.key)
