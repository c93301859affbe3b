"""Per-operation latency measurements over a doubling size schedule.

Each schedule entry k runs one workload of m = 2^k updates in unchecked
mode, timing every update individually, then times a batch of get_min
probes against the fully built timeline. The first tenth of the update
samples (structure still tiny) and a fixed batch of warmup probes are
discarded. Reported per op kind: sample count, mean and p99 wall time.
"""

from __future__ import annotations

import gc
import io
import random
import time
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

from .retro_queue import MonotonicRetroQueue
from .trace import WorkloadParams, gen_workload_fast

_APPLY = {
    "I": lambda q, c: q.insert_insert(c.time, c.key),
    "DI": lambda q, c: q.delete_insert(c.time),
    "E": lambda q, c: q.insert_extract(c.time),
    "DE": lambda q, c: q.delete_extract(c.time),
}

_KIND_NAME = {
    "I": "insert_insert",
    "DI": "delete_insert",
    "E": "insert_extract",
    "DE": "delete_extract",
}


@dataclass(frozen=True)
class BenchRow:
    m: int
    backend: str
    op_kind: str
    count: int
    mean_ns: float
    p99_ns: int


@dataclass
class BenchReport:
    rows: List[BenchRow] = field(default_factory=list)
    sizes: Dict[int, Tuple[int, int]] = field(default_factory=dict)
    # sizes: m -> (updates on the timeline, elements alive on it)

    def mean_ns(self, m: int, op_kind: str) -> float:
        for row in self.rows:
            if row.m == m and row.op_kind == op_kind:
                return row.mean_ns
        raise KeyError(f"no row for m={m}, op_kind={op_kind}")

    def to_text(self) -> str:
        out = io.StringIO()
        header = f"{'m':>8} {'backend':<10} {'op_kind':<16} {'count':>8} {'mean_ns':>12} {'p99_ns':>12}"
        out.write(header + "\n")
        out.write("-" * len(header) + "\n")
        for row in self.rows:
            out.write(f"{row.m:>8} {row.backend:<10} {row.op_kind:<16} "
                      f"{row.count:>8} {row.mean_ns:>12.0f} {row.p99_ns:>12}\n")
        for m, (updates, elements) in sorted(self.sizes.items()):
            out.write(f"# m={m}: timeline holds {updates} updates, "
                      f"{elements} live elements\n")
        return out.getvalue()

    def to_csv(self) -> str:
        lines = ["m,backend,op_kind,mean_ns,p99_ns"]
        for row in self.rows:
            lines.append(f"{row.m},{row.backend},{row.op_kind},"
                         f"{row.mean_ns:.1f},{row.p99_ns}")
        return "\n".join(lines) + "\n"


def _stats(samples: List[int]) -> Tuple[int, float, int]:
    count = len(samples)
    mean = sum(samples) / count
    p99 = sorted(samples)[min(count - 1, (99 * count) // 100)]
    return count, mean, p99


def run_bench(exponents: Sequence[int], backend: str = "rangetree",
              seed: int = 0, queries: int = 2048, warmup: int = 256) -> BenchReport:
    """Benchmark one backend across m = 2^k for each k in ``exponents``."""
    report = BenchReport()
    timer = time.perf_counter_ns
    for k in sorted(exponents):
        m = 1 << k
        updates = gen_workload_fast(WorkloadParams(
            op_count=m, retroactive_fraction=0.5, extract_fraction=0.35,
            delete_fraction=0.05, seed=seed + k, probes_per_update=0))

        queue = MonotonicRetroQueue(backend=backend, checked=False)
        samples: Dict[str, List[int]] = {name: [] for name in _KIND_NAME.values()}
        gc_was_enabled = gc.isenabled()
        gc.disable()
        try:
            for cmd in updates:
                apply = _APPLY[cmd.op]
                t0 = timer()
                apply(queue, cmd)
                samples[_KIND_NAME[cmd.op]].append(timer() - t0)

            # Probe times: half at exact update times, half anywhere in the span.
            rng = random.Random((seed << 20) ^ m)
            times = sorted(rec.time for rec in queue.operations())
            lo, hi = times[0], times[-1]
            probe_times = [
                rng.choice(times) if rng.random() < 0.5 else rng.randint(lo, hi)
                for _ in range(queries + warmup)
            ]
            for t in probe_times[:warmup]:
                queue.get_min(t)
            probe_samples: List[int] = []
            for t in probe_times[warmup:]:
                t0 = timer()
                queue.get_min(t)
                probe_samples.append(timer() - t0)
        finally:
            if gc_was_enabled:
                gc.enable()

        for op_kind, vals in samples.items():
            if not vals:
                continue
            vals = vals[len(vals) // 10:]  # drop the tiny-structure ramp-up
            count, mean, p99 = _stats(vals)
            report.rows.append(BenchRow(m, backend, op_kind, count, mean, p99))
        count, mean, p99 = _stats(probe_samples)
        report.rows.append(BenchRow(m, backend, "get_min", count, mean, p99))
        report.sizes[m] = (len(queue), queue.element_count)
    return report
