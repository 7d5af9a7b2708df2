"""Stage-in placement versus the bandwidth-proportional lower bound.

For growing file counts, on homogeneous and heterogeneous storage networks,
places every file on a storage site and compares the achieved delivery time
with the unbeatable floor (total data over aggregate bandwidth, worst
destination). The achieved time stays within a few percent of the floor.
"""

import random

from dawsched import (PlacementInstance, FileRef, lower_bound, place_stage_in,
                      placement_transfer_time)


def build_instance(n_files, hetero, seed):
    rng = random.Random(seed)
    processors, storages = 3, 4
    if hetero:
        bw = tuple(tuple(rng.uniform(1.0, 10.0) for _ in range(processors))
                   for _ in range(storages))
    else:
        bw = tuple((5.0,) * processors for _ in range(storages))
    files = tuple(FileRef(f"f{i}", rng.uniform(1.0, 100.0), rng.randint(1, processors))
                  for i in range(n_files))
    return PlacementInstance(files, bw)


print(f"{'files':>6}  {'network':>13}  {'lower bound':>11}  {'achieved':>9}  ratio")
for hetero in (False, True):
    for n in (20, 50, 100, 200, 400):
        inst = build_instance(n, hetero, seed=n + (1000 if hetero else 0))
        placement = place_stage_in(inst)
        achieved = placement_transfer_time(placement, inst)
        bound = lower_bound(inst)
        label = "heterogeneous" if hetero else "homogeneous"
        print(f"{n:>6}  {label:>13}  {bound:>11.2f}  {achieved:>9.2f}"
              f"  {achieved / bound:.4f}")
print()

# files wanted by several processors are replicated, one copy per destination
shared = (FileRef("shared", 40.0, 1), FileRef("shared", 40.0, 2))
inst = PlacementInstance(shared, ((8.0, 1.0), (1.0, 8.0)))
placement = place_stage_in(inst)
print("a file consumed by two processors gets one replica per destination:")
for (file_id, dest), storage in sorted(placement.assignment.items()):
    print(f"  {file_id} -> storage {storage} for processor {dest}")
