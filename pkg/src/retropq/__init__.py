"""Fully retroactive monotonic min-priority queue.

A monotonic priority queue only ever extracts a nondecreasing sequence of
values, which pins the k-th extraction to the k-th smallest element and
turns "minimum alive at time t" into a 2-sided rectangle query over
(insertion time, value) points. This package implements the resulting
timeline structure, the order-statistic tree and dynamic min-y
range-search structure underneath it, a brute-force replay oracle for
differential testing, a text trace format with seeded workload
generators, and a benchmarking CLI.
"""

from . import replay
from .bench import BenchReport, BenchRow, run_bench
from .errors import (
    DuplicateCoordinate,
    DuplicateKey,
    DuplicateTime,
    EmptyExtract,
    GenerationStuck,
    InvalidTimeline,
    KeyNotFound,
    MonotonicityViolation,
    NoOperationAtTime,
    NonIntegerField,
    PointNotFound,
    RankOutOfRange,
    RetroPQError,
    TraceError,
    TraceSyntaxError,
    WrongOperationKind,
)
from .order_stat_tree import OrderStatTree
from .range_search import (
    BACKENDS,
    MinYRangeSearch,
    NaiveMinY,
    Point,
    QueryRect,
    RangeTreeMinY,
)
from .replay import OpKind, OpRecord, ValidityReport, extract_op, insert_op
from .retro_queue import MonotonicRetroQueue
from .trace import (
    Command,
    WorkloadParams,
    gen_workload,
    gen_workload_fast,
    parse_trace,
    parse_trace_lines,
    serialize_trace,
)

__version__ = "0.1.0"

__all__ = [
    "BACKENDS",
    "BenchReport",
    "BenchRow",
    "Command",
    "DuplicateCoordinate",
    "DuplicateKey",
    "DuplicateTime",
    "EmptyExtract",
    "GenerationStuck",
    "InvalidTimeline",
    "KeyNotFound",
    "MinYRangeSearch",
    "MonotonicRetroQueue",
    "MonotonicityViolation",
    "NaiveMinY",
    "NoOperationAtTime",
    "NonIntegerField",
    "OpKind",
    "OpRecord",
    "OrderStatTree",
    "Point",
    "PointNotFound",
    "QueryRect",
    "RangeTreeMinY",
    "RankOutOfRange",
    "RetroPQError",
    "TraceError",
    "TraceSyntaxError",
    "ValidityReport",
    "WorkloadParams",
    "WrongOperationKind",
    "extract_op",
    "gen_workload",
    "gen_workload_fast",
    "insert_op",
    "parse_trace",
    "parse_trace_lines",
    "replay",
    "run_bench",
    "serialize_trace",
    "__version__",
]
