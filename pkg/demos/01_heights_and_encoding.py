"""Task heights and chromosome encoding, end to end on a small graph.

Builds a ten-task workflow (tasks 1 and 10 are the dummy endpoints), prints
the three height levels that govern execution order, then encodes one
complete schedule as a zero-delimited chromosome and merges it back into a
global execution order.
"""

import random

from dawsched import (Chromosome, Edge, Task, Workflow, compute_equivalent_heights,
                      compute_heights, decode, encode, normalize_workflow,
                      retrieve_schedule, sample_soft_heights)

EDGES = [(1, 2), (1, 3), (1, 4), (4, 6), (4, 8), (8, 5), (3, 7), (8, 7),
         (2, 9), (6, 9), (7, 9), (5, 10), (9, 10)]

tasks = [Task(i, is_dummy=(i in (1, 10))) for i in range(1, 11)]
w = normalize_workflow(Workflow(tasks, [Edge(a, b) for a, b in EDGES]))

heights = compute_heights(w)
eq = compute_equivalent_heights(w, heights)
soft = sample_soft_heights(w, heights, eq, random.Random(42))

print("task        " + " ".join(f"{t:>2}" for t in w.task_ids))
print("height      " + " ".join(f"{heights[t]:>2}" for t in w.task_ids))
print("height_eq   " + " ".join(f"{eq[t]:>2}" for t in w.task_ids))
print("height_soft " + " ".join(f"{soft[t]:>2}" for t in w.task_ids))
print()
print("Every task may run anywhere between its height and its equivalent")
print("height; the soft row is one random draw from those intervals.")
print()

# one complete schedule over three processors, tasks listed in execution order
schedule = {1: [2, 5], 2: [3, 6, 9], 3: [4, 8, 7]}
genes = encode(schedule, w.non_dummy_ids)
print("schedule:", schedule)
print("genes:   ", " ".join(map(str, genes)))
print("decoded: ", decode(genes, w.non_dummy_ids))

# merging the per-processor lists by soft height gives the global order
table_soft = {1: 0, 2: 2, 3: 1, 4: 1, 5: 3, 6: 3, 7: 3, 8: 2, 9: 4, 10: 5}
chromosome = Chromosome(genes, table_soft)
sequence, processor_of = retrieve_schedule(chromosome)
print("merged execution order:", sequence)
