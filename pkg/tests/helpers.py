"""Independent reference implementations used only to cross-check the package.

Nothing in here may call back into the code paths it verifies: the list
scheduler is event driven, the exclusive-mode evaluator serializes compute
and transfer, and the placement optimum is plain enumeration.
"""

import itertools
import random

from dawsched.generators import SHAPES, GenSpec, generate_platform, generate_workflow
from dawsched.platform import Platform
from dawsched.workflow import FileRef


def random_instance(seed, shapes=SHAPES, tasks=(4, 8), procs=(2, 3),
                    storages=(1, 2), hetero=True):
    """Seeded (workflow, platform) pair for property tests."""
    rng = random.Random(seed)
    spec = GenSpec(shape=rng.choice(shapes), task_count=rng.randint(*tasks),
                   seed=seed, hetero=hetero)
    w = generate_workflow(spec)
    p = generate_platform(w, rng.randint(*procs), rng.randint(*storages),
                          hetero=hetero, seed=seed + 1)
    return w, p


def zero_data_copy(w, p):
    """Strip all data movement: zero edges and no stage files."""
    from dawsched.workflow import Edge, Task, Workflow

    tasks = [Task(t.id, (), (), t.is_dummy) for t in w.tasks]
    edges = [Edge(e.producer, e.consumer, 0.0) for e in w.edges]
    bare = Workflow(tasks, edges, start_id=w.start_id, end_id=w.end_id)
    return bare, p


def event_driven_list_makespan(sequence, assignment, w, p):
    """Event-driven simulation of classic list scheduling (no data costs).

    Each processor executes its slice of the sequence in order; a task runs
    once its predecessors finished and the processor is free. Tasks are fired
    chronologically from a ready pool, which is a genuinely different
    mechanism than the evaluator's single sequential fold.
    """
    dummies = {t.id for t in w.tasks if t.is_dummy}
    queues = {}
    for t in sequence:
        queues.setdefault(assignment[t], []).append(t)
    heads = {q: 0 for q in queues}
    proc_free = {q: 0.0 for q in queues}
    finish = {}
    total = len(sequence)
    done = 0
    while done < total:
        best = None
        for q, idx in heads.items():
            if idx >= len(queues[q]):
                continue
            t = queues[q][idx]
            preds = [j for j, _ in w.preds[t] if j not in dummies]
            if any(j not in finish for j in preds):
                continue
            ready = max([proc_free[q]] + [finish[j] for j in preds])
            if best is None or (ready, q) < best[:2]:
                best = (ready, q, t)
        assert best is not None, "sequence is not a linear extension"
        ready, q, t = best
        finish[t] = ready + p.exec_time[t - 1][q - 1]
        proc_free[q] = finish[t]
        heads[q] += 1
        done += 1
    return max(finish.values(), default=0.0)


def exclusive_makespan(sequence, assignment, w, p, placement=None):
    """Evaluate a schedule under a mutually exclusive compute/transfer rule:
    a processor is busy while any of its stage-in, inter-task or stage-out
    transfers run, so nothing overlaps. Used as the dominated baseline."""
    dummies = {t.id for t in w.tasks if t.is_dummy}
    S = p.storage_count
    assign = placement.assignment if placement is not None else {}

    def best_in(q):
        cands = [(p.bw_sp[s - 1][q - 1], -s) for s in range(1, S + 1)]
        bw, neg_s = max(cands, default=(0.0, 0))
        return (-neg_s, bw) if bw > 0 else (None, 0.0)

    def best_out(q):
        cands = [(p.bw_ps[q - 1][s - 1], -s) for s in range(1, S + 1)]
        bw, neg_s = max(cands, default=(0.0, 0))
        return (-neg_s, bw) if bw > 0 else (None, 0.0)

    busy = {}
    in_link = {}
    out_link = {}
    finish = {}
    where = {}
    makespan = 0.0
    for t in sequence:
        q = assignment[t]
        clock = busy.get(q, 0.0)
        task = w.by_id[t]
        for f in task.stage_in:
            if f.size == 0:
                continue
            s = assign.get((f.file_id, q))
            if s is None:
                s, bw = best_in(q)
            else:
                bw = p.bw_sp[s - 1][q - 1]
            start = max(clock, in_link.get((s, q), 0.0))
            done = start + f.size / bw
            in_link[(s, q)] = done
            clock = done
        for j, size in w.preds[t]:
            if j in dummies:
                continue
            if where[j] == q or size == 0:
                clock = max(clock, finish[j])
            else:
                start = max(clock, finish[j])
                clock = start + size / p.bw_pp[where[j] - 1][q - 1]
        fin = clock + p.exec_time[t - 1][q - 1]
        finish[t] = fin
        where[t] = q
        clock = fin
        so = 0.0
        for g in task.stage_out:
            if g.size == 0:
                continue
            if g.dest is not None:
                d, bw = g.dest, p.bw_ps[q - 1][g.dest - 1]
            else:
                d, bw = best_out(q)
            start = max(clock, out_link.get((q, d), 0.0))
            done = start + g.size / bw
            out_link[(q, d)] = done
            clock = done
            so = max(so, done)
        busy[q] = clock
        makespan = max(makespan, fin, so)
    return makespan


def exhaustive_placement_optimum(instance):
    """True minimum delivery time by trying every file-to-storage mapping.

    Destinations are independent, so the optimum is the max over destinations
    of each destination's own exhaustive minimum.
    """
    per_dest = {}
    for f in instance.files:
        per_dest.setdefault(f.dest, []).append(f)
    worst = 0.0
    for q, files in per_dest.items():
        links = [(s + 1, instance.bw_sp[s][q - 1])
                 for s in range(len(instance.bw_sp)) if instance.bw_sp[s][q - 1] > 0]
        assert links, f"destination {q} unreachable"
        best = None
        for combo in itertools.product(range(len(links)), repeat=len(files)):
            loads = [0.0] * len(links)
            for f, il in zip(files, combo):
                loads[il] += f.size
            t = max(load / links[i][1] for i, load in enumerate(loads))
            if best is None or t < best:
                best = t
        worst = max(worst, best or 0.0)
    return worst


def random_placement_instance(seed, files=(50, 80), procs=(1, 3),
                              storages=(2, 5), hetero=True,
                              size_range=(1.0, 100.0), bw_range=(1.0, 10.0)):
    """Seeded stage-in instance for the near-lower-bound property."""
    from dawsched.placement import PlacementInstance

    rng = random.Random(seed)
    P = rng.randint(*procs)
    S = rng.randint(*storages)
    if hetero:
        bw = tuple(tuple(rng.uniform(*bw_range) for _ in range(P)) for _ in range(S))
    else:
        v = rng.uniform(*bw_range)
        bw = tuple((v,) * P for _ in range(S))
    n = rng.randint(*files)
    refs = tuple(FileRef(f"f{i}", rng.uniform(*size_range), rng.randint(1, P))
                 for i in range(n))
    return PlacementInstance(refs, bw)


def single_proc_platform(w, exec_times):
    """One processor, no storage; exec_times maps task id -> seconds."""
    rows = tuple((float(exec_times.get(t.id, 0.0)),) for t in w.tasks)
    return Platform(1, 0, rows, ((1.0,),), (), ())
