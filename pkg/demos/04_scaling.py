"""Per-operation cost scaling of the range-tree backend.

Retroactive extract edits touch only an order-statistic tree (O(log m));
get_min adds one range-tree query (O(log^2 m)). Doubling the workload a
few times should therefore barely move the per-operation means. This is a
scaled-down version of `retropq bench`; bump the exponents for the real
thing.
"""

from retropq.bench import run_bench

exponents = [10, 12, 14]
print(f"benchmarking m = {[1 << k for k in exponents]} updates "
      f"(unchecked mode, rangetree backend)\n")
report = run_bench(exponents, backend="rangetree", seed=0, queries=1024)
print(report.to_text())

lo, hi = 1 << exponents[0], 1 << exponents[-1]
for op_kind, label in (("get_min", "log^2 growth"),
                       ("insert_extract", "log growth")):
    ratio = report.mean_ns(hi, op_kind) / report.mean_ns(lo, op_kind)
    print(f"{op_kind}: mean grew x{ratio:.2f} from m={lo} to m={hi} ({label})")
