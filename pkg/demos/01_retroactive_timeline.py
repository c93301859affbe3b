"""Tour of the retroactive timeline: edit the past, query any moment.

A monotonic min-priority queue never extracts a value smaller than one it
extracted before. This demo builds a small history of inserts and
extract-mins, then edits operations at past times and watches every
affected answer shift, without ever replaying the history.
"""

from retropq import EmptyExtract, MonotonicRetroQueue, MonotonicityViolation


def show(queue, times, label):
    answers = ", ".join(f"t={t}: {queue.get_min(t)}" for t in times)
    print(f"{label:<42} -> {answers}")


queue = MonotonicRetroQueue(backend="rangetree", checked=True)

print("Build a history: insert 5 at t=10, insert 3 at t=20, extract-min at t=30.")
queue.insert_insert(10, 5)
queue.insert_insert(20, 3)
queue.insert_extract(30)

probe_times = [15, 25, 30, 50]
show(queue, probe_times, "initial timeline")
print(f"the extraction at t=30 removed: {queue.last_extracted(30)}")
print(f"element 3 is extracted at: {queue.extraction_time(3)}")
print(f"element 5 is extracted at: {queue.extraction_time(5)} (never)")
print()

print("Retroactively insert 4 at t=15. The extraction at t=30 still removes 3")
print("(the smallest alive there), but afterwards {4, 5} survive instead of {5}.")
queue.insert_insert(15, 4)
show(queue, probe_times, "after insert_insert(15, 4)")
print(f"now t=30 answers {queue.get_min(30)}: 3 was extracted, 4 survives")
print()

print("Delete the insert of 3 at t=20: the t=30 extraction falls on 4 instead.")
removed = queue.delete_insert(20)
print(f"delete_insert(20) returned the removed element: {removed}")
show(queue, probe_times, "after delete_insert(20)")
print()

print("Delete the extraction itself: everything is alive again.")
queue.delete_extract(30)
show(queue, probe_times, "after delete_extract(30)")
print()

print("Put the extraction back, then try edits that would corrupt the history.")
print("Checked mode vets each one against a full replay and rejects it whole:")
queue.insert_extract(30)
show(queue, probe_times, "with the extraction restored")
try:
    queue.insert_extract(5)  # nothing exists before t=10
except EmptyExtract as exc:
    print(f"  insert_extract(5)   -> rejected: {exc}")
try:
    queue.insert_insert(40, 1)  # 1 is below the value extracted at t=30
except MonotonicityViolation as exc:
    print(f"  insert_insert(40,1) -> rejected: {exc}")
show(queue, probe_times, "timeline after the rejections (unchanged)")
print()
print(f"final history: {[(r.time, r.kind.value, r.key) for r in queue.operations()]}")
print(f"validator says: {queue.validate()}")
