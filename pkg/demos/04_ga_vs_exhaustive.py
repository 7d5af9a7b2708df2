"""GA quality check against the exhaustive optimum on four DAG structures.

Small instances only: the oracle enumerates every task-processor assignment
crossed with every linear extension, so it is exact but exponential. The GA
matches the optimum on almost every instance and never beats it (it cannot:
the oracle's search space contains every schedule the encoding can express).
"""

import random
import time

from dawsched import (GaParams, GenSpec, generate_platform, generate_workflow,
                      optimal_makespan, run_ga)

REPS = 10
print(f"{'shape':>17}  {'exact':>5}  {'worst ratio':>11}  {'oracle states':>13}  time")
for shape in ("linear", "merging", "emission", "merging_emission"):
    exact = 0
    worst = 1.0
    states = 0
    t0 = time.perf_counter()
    for rep in range(REPS):
        seed = rep * 31 + 5
        rng = random.Random(seed)
        spec = GenSpec(shape=shape, task_count=rng.randint(5, 7), hetero=True, seed=seed)
        w = generate_workflow(spec)
        p = generate_platform(w, rng.randint(2, 3), rng.randint(1, 2),
                              hetero=True, seed=seed + 1)
        ga = run_ga(w, p, GaParams(population_size=50, generations=100,
                                   mutation_rate=0.2, seed=seed))
        opt = optimal_makespan(w, p)
        states += opt.states_explored
        ratio = ga.best_makespan / opt.best_makespan
        worst = max(worst, ratio)
        if ratio <= 1.0 + 1e-9:
            exact += 1
    elapsed = time.perf_counter() - t0
    print(f"{shape:>17}  {exact:>2}/{REPS}  {worst:>11.4f}  {states:>13}  {elapsed:4.1f} s")
