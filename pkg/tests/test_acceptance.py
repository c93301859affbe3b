"""Acceptance suite: one test per criterion, one printed PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v -s``. The whole module is
property-based plus scaling smoke checks; every tolerance is pinned here.
"""

import random
import time
from contextlib import contextmanager

from retropq import (
    DuplicateCoordinate,
    InvalidTimeline,
    MonotonicRetroQueue,
    NaiveMinY,
    Point,
    QueryRect,
    RangeTreeMinY,
    parse_trace,
    replay,
    serialize_trace,
)
from retropq.bench import run_bench
from retropq.cli import run_check
from retropq.replay import OpKind, extract_op, insert_op
from retropq.trace import WorkloadParams, gen_workload, updates_only


@contextmanager
def criterion(name, notes=None):
    try:
        yield
    except BaseException:
        print(f"\nACCEPTANCE {name}: FAIL")
        raise
    detail = f" ({'; '.join(notes)})" if notes else ""
    print(f"\nACCEPTANCE {name}: PASS{detail}")


def fold_updates(cmds):
    """Final op list left behind by a sequence of I/DI/E/DE commands."""
    records = {}
    for cmd in cmds:
        if cmd.op == "I":
            records[cmd.time] = insert_op(cmd.time, cmd.key)
        elif cmd.op == "E":
            records[cmd.time] = extract_op(cmd.time)
        elif cmd.op in ("DI", "DE"):
            del records[cmd.time]
    return sorted(records.values(), key=lambda r: r.time)


def test_oracle_equivalence_100_seeds():
    notes = []
    with criterion("oracle-equivalence", notes):
        start = time.monotonic()
        probes = 0
        probes_at_update_times = 0
        for seed in range(100):
            cmds = gen_workload(WorkloadParams(
                op_count=256, retroactive_fraction=0.5, seed=seed,
                probes_per_update=32))
            update_times = {c.time for c in cmds if c.op in ("I", "E")}
            probes_at_update_times += sum(
                1 for c in cmds if c.op in ("Q", "LE") and c.time in update_times)
            result = run_check(cmds)  # both backends vs the replay oracle
            assert result.ok, f"seed {seed}: {result.divergence}"
            assert result.updates == 256
            assert result.queries == 256 * 32
            probes += result.queries
        elapsed = time.monotonic() - start
        assert probes_at_update_times > 0, "no probe ever hit an update time"
        assert elapsed < 120, f"took {elapsed:.0f}s, budget is 120s"
        notes.append(f"100 seeds x 256 updates, {probes} probes, "
                     f"0 divergences, {elapsed:.0f}s")


def test_extraction_pairing_1000_timelines():
    # k-th earliest extraction removes exactly the k-th smallest element.
    notes = []
    with criterion("extraction-pairing", notes):
        rng = random.Random(0xA11CE)
        checked = 0
        for seed in range(1000):
            m = rng.randint(1, 512)
            cmds = updates_only(gen_workload(WorkloadParams(
                op_count=m, seed=seed, probes_per_update=0)))
            ops = fold_updates(cmds)
            inserted = sorted(op.key for op in ops if op.kind is OpKind.INSERT)
            sequence = replay.extracted_sequence(ops)
            for k, (_, key) in enumerate(sequence):
                assert key == inserted[k], (seed, k)
            checked += len(sequence)
        notes.append(f"1000 timelines, {checked} extractions, 0 violations")


def test_existence_predicate_1000_timelines():
    # alive(x, t) <=> inserted by t and above the last extracted value at t
    notes = []
    with criterion("existence-predicate", notes):
        rng = random.Random(0xE715)
        checked = 0
        for seed in range(1000):
            m = rng.randint(1, 128)
            cmds = updates_only(gen_workload(WorkloadParams(
                op_count=m, seed=seed, probes_per_update=0)))
            ops = fold_updates(cmds)
            queue = MonotonicRetroQueue(backend="naive")
            for op in ops:
                if op.kind is OpKind.INSERT:
                    queue.insert_insert(op.time, op.key)
                else:
                    queue.insert_extract(op.time)
            times = [op.time for op in ops]
            lo, hi = times[0] - 20, times[-1] + 20
            inserts = [(op.key, op.time) for op in ops
                       if op.kind is OpKind.INSERT]
            for x, inserted_at in inserts:
                for _ in range(16):
                    t = rng.choice(times) if rng.random() < 0.4 else rng.randint(lo, hi)
                    floor = queue.last_extracted(t)
                    predicted = inserted_at <= t and (floor is None or x > floor)
                    assert replay.exists(ops, x, t) == predicted, (seed, x, t)
                    checked += 1
        notes.append(f"1000 timelines, {checked} (element, time) probes, 0 violations")


def test_range_search_differential_100k_ops():
    notes = []
    with criterion("range-search-differential", notes):
        start = time.monotonic()
        rng = random.Random(0xD1FF)
        naive, tree = NaiveMinY(), RangeTreeMinY()
        live = []
        queries = 0
        span = 10**9
        for _ in range(100_000):
            action = rng.random()
            if action < 0.37 or not live:
                p = Point(rng.randrange(span), rng.randrange(span))
                try:
                    naive.insert(p)
                except DuplicateCoordinate:
                    continue
                tree.insert(p)
                live.append(p)
            elif action < 0.70:
                p = live.pop(rng.randrange(len(live)))
                naive.remove(p)
                tree.remove(p)
            else:
                rect = QueryRect(
                    rng.randrange(-span // 4, span + span // 4),
                    None if rng.random() < 0.2 else rng.randrange(-5, span))
                assert tree.min_y_in(rect) == naive.min_y_in(rect)
                queries += 1
            assert len(tree) == len(naive)
        elapsed = time.monotonic() - start
        assert elapsed < 60, f"took {elapsed:.0f}s, budget is 60s"
        notes.append(f"100000 ops ({queries} queries), exact agreement, "
                     f"{elapsed:.0f}s")


def test_validator_formulations_10k_histories():
    notes = []
    with criterion("validator-equivalence", notes):
        rng = random.Random(0x5EED)
        verdicts = {True: 0, False: 0}
        for _ in range(10_000):
            n = rng.randint(1, 64)
            times = sorted(rng.sample(range(4096), n))
            keys = iter(rng.sample(range(100_000), n))
            ops = [extract_op(t) if rng.random() < 0.42 else insert_op(t, next(keys))
                   for t in times]
            ok = replay.validate(ops).ok
            assert ok == replay.validate_via_sequence(ops)
            verdicts[ok] += 1
        assert verdicts[True] and verdicts[False]
        notes.append(f"10000 histories: {verdicts[True]} accepted, "
                     f"{verdicts[False]} rejected, formulations agree")


def test_scaling_smoke():
    # get_min is O(log^2 m): 2^12 -> 2^17 predicts ~2.0x, tolerance 4x.
    # insert_extract is O(log m): predicts ~1.42x, tolerance 2.5x.
    notes = []
    with criterion("scaling-smoke", notes):
        start = time.monotonic()
        report = run_bench([12, 14, 17], backend="rangetree", seed=0)
        elapsed = time.monotonic() - start
        q_ratio = report.mean_ns(1 << 17, "get_min") / report.mean_ns(1 << 12, "get_min")
        e_ratio = (report.mean_ns(1 << 17, "insert_extract")
                   / report.mean_ns(1 << 12, "insert_extract"))
        assert q_ratio <= 4.0, f"get_min mean grew {q_ratio:.2f}x"
        assert e_ratio <= 2.5, f"insert_extract mean grew {e_ratio:.2f}x"
        assert elapsed < 300, f"bench took {elapsed:.0f}s, budget is 300s"
        notes.append(f"get_min x{q_ratio:.2f} (<=4), insert_extract "
                     f"x{e_ratio:.2f} (<=2.5), bench {elapsed:.0f}s")


def test_trace_round_trip_1000():
    notes = []
    with criterion("trace-round-trip", notes):
        for seed in range(1000):
            key_range = (-(1 << 40), 1 << 40) if seed % 3 == 0 else (0, 1 << 30)
            cmds = gen_workload(WorkloadParams(
                op_count=1 + seed % 32, seed=seed, key_range=key_range,
                probes_per_update=2))
            text = serialize_trace(cmds)
            assert parse_trace(text) == cmds
            assert serialize_trace(parse_trace(text)) == text
        notes.append("1000 traces, parse/serialize identity and canonical")


def test_checked_rollback_1000_injections():
    notes = []
    with criterion("checked-rollback", notes):
        rng = random.Random(0x0B5E)
        injections = 0
        for seed in range(50):
            cmds = updates_only(gen_workload(WorkloadParams(
                op_count=64, seed=1000 + seed, probes_per_update=0)))
            queue = MonotonicRetroQueue(backend="rangetree", checked=True)
            for cmd in cmds:
                if cmd.op == "I":
                    queue.insert_insert(cmd.time, cmd.key)
                elif cmd.op == "E":
                    queue.insert_extract(cmd.time)
                elif cmd.op == "DI":
                    queue.delete_insert(cmd.time)
                else:
                    queue.delete_extract(cmd.time)
            ops = queue.operations()
            times = [op.time for op in ops]
            sample = times + [rng.randint(times[0] - 30, times[-1] + 30)
                              for _ in range(8)]

            def snapshot():
                return [(queue.get_min(t), queue.last_extracted(t))
                        for t in sample]

            extractions = replay.extracted_sequence(ops)
            before = snapshot()
            for j in range(20):
                if extractions and j % 2 == 0:
                    # fresh unused key below everything ever extracted
                    attempt = lambda: queue.insert_insert(
                        times[-1] + 100 + j, -1 - j)
                else:
                    # extract before the first insert: the queue is empty there
                    attempt = lambda: queue.insert_extract(times[0] - 100 - j)
                try:
                    attempt()
                except InvalidTimeline:
                    pass
                else:
                    raise AssertionError(f"injection {seed}/{j} was accepted")
                injections += 1
                assert snapshot() == before, f"answers moved after rejection {j}"
            assert queue.operations() == ops
        assert injections == 1000
        notes.append(f"{injections} rejected updates, all observations unchanged")
