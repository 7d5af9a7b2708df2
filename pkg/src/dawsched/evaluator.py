"""Data-aware turnaround evaluation of a decoded schedule.

The evaluator walks the globally merged task sequence once and, for each task
``t`` placed on processor ``q``, fixes four instants:

* stage-in ready: every input file travels from its storage site to ``q``;
  files sharing one storage-to-processor link queue up in sequence order,
  distinct links run in parallel, and transfers start as soon as the link is
  free (a processor can receive data while it executes something else).
* data ready: intermediate data from each predecessor arrives at its finish
  time when both tasks share a processor, otherwise after size/bandwidth on
  the processor-processor link. Inter-task transfers do not contend with each
  other or with stage-in traffic.
* start: the task begins once its stage-in and predecessor data are there and
  the processor has finished the previous task assigned to it.
* stage-out finish: after execution every output file is shipped to its
  storage site; files sharing one processor-to-storage link queue up in task
  finish order. Stage-out does not block the processor.

The turnaround time (makespan) is the latest of all execution finishes and
stage-out finishes. Transfers between tasks on the same processor are free
and never touch :func:`transfer_time`.
"""

from dataclasses import dataclass

from .errors import InvalidScheduleError
from .ga import decode
from .platform import transfer_time

__all__ = [
    "TaskTiming",
    "Timeline",
    "retrieve_schedule",
    "evaluate",
    "timeline_csv",
]


@dataclass(frozen=True)
class TaskTiming:
    stage_in_ready: float
    data_ready: float
    start: float
    finish: float
    stage_out_finish: float  # 0.0 when the task stages nothing out


@dataclass(frozen=True)
class Timeline:
    timings: dict            # task id -> TaskTiming
    makespan: float


def retrieve_schedule(chromosome):
    """Merge the per-processor task lists into one global execution order.

    The merge is by nondecreasing soft height; ties go to the lower processor
    index first, then to the earlier list position. Returns the merged task
    sequence and the task-to-processor map.
    """
    assignment = decode(chromosome.genes)
    soft = chromosome.soft_height
    proc_of = {}
    flat = []
    for q in sorted(assignment):
        for t in assignment[q]:
            proc_of[t] = q
            flat.append(t)
    flat.sort(key=lambda t: soft[t])  # stable: keeps (processor, position) order on ties
    return tuple(flat), proc_of


class _EvalContext:
    """Pre-resolved lookups for one (workflow, platform, placement) triple."""

    __slots__ = ("P", "exec_time", "bw_pp", "bw_sp", "bw_ps", "preds",
                 "stage_in", "stage_out", "dummy", "placement",
                 "best_in", "best_out")

    def __init__(self, w, p, placement=None):
        self.P = p.processor_count
        self.exec_time = p.exec_time
        self.bw_pp = p.bw_pp
        self.bw_sp = p.bw_sp
        self.bw_ps = p.bw_ps
        self.preds = w.preds
        self.dummy = {t.id for t in w.tasks if t.is_dummy}
        self.stage_in = {t.id: t.stage_in for t in w.tasks}
        self.stage_out = {t.id: t.stage_out for t in w.tasks}
        self.placement = placement.assignment if placement is not None else {}

        S = p.storage_count
        # Default hosting: the storage with the best link to each processor.
        self.best_in = [None] * (self.P + 1)
        self.best_out = [None] * (self.P + 1)
        for q in range(1, self.P + 1):
            best_s, best_bw = None, 0.0
            for s in range(1, S + 1):
                bw = p.bw_sp[s - 1][q - 1]
                if bw > best_bw:
                    best_s, best_bw = s, bw
            self.best_in[q] = best_s
            best_s, best_bw = None, 0.0
            for s in range(1, S + 1):
                bw = p.bw_ps[q - 1][s - 1]
                if bw > best_bw:
                    best_s, best_bw = s, bw
            self.best_out[q] = best_s

    def storage_for(self, file_id, q):
        s = self.placement.get((file_id, q))
        return s if s is not None else self.best_in[q]


class _EvalState:
    """Incremental evaluation state; one task is folded in per `place` call.

    The oracle branches on copies of this state, so placing task ``t`` must
    depend only on tasks placed earlier in the sequence (it does: stage-in
    links, predecessor finishes and processor availability are all history).
    """

    __slots__ = ("proc_free", "in_link", "out_link", "finish", "proc", "makespan")

    def __init__(self, P):
        self.proc_free = [0.0] * (P + 1)
        self.in_link = {}    # (storage, processor) -> time the link frees
        self.out_link = {}   # (processor, storage) -> time the link frees
        self.finish = {}
        self.proc = {}
        self.makespan = 0.0

    def copy(self):
        dup = _EvalState.__new__(_EvalState)
        dup.proc_free = self.proc_free[:]
        dup.in_link = self.in_link.copy()
        dup.out_link = self.out_link.copy()
        dup.finish = self.finish.copy()
        dup.proc = self.proc.copy()
        dup.makespan = self.makespan
        return dup

    def place(self, t, q, ctx, timings=None):
        in_link = self.in_link
        finish = self.finish

        si_ready = 0.0
        for f in ctx.stage_in[t]:
            if f.size == 0:
                continue
            s = ctx.storage_for(f.file_id, q)
            bw = ctx.bw_sp[s - 1][q - 1] if s is not None else 0.0
            key = (s, q)
            done = in_link.get(key, 0.0) + transfer_time(f.size, bw)
            in_link[key] = done
            if done > si_ready:
                si_ready = done

        data_ready = 0.0
        for j, size in ctx.preds[t]:
            if j in ctx.dummy:
                continue
            if j not in finish:
                raise InvalidScheduleError(
                    f"task {t} is sequenced before its predecessor {j}")
            arrive = finish[j]
            pj = self.proc[j]
            if pj != q and size > 0:
                arrive += transfer_time(size, ctx.bw_pp[pj - 1][q - 1])
            if arrive > data_ready:
                data_ready = arrive

        start = si_ready
        if data_ready > start:
            start = data_ready
        if self.proc_free[q] > start:
            start = self.proc_free[q]
        fin = start + ctx.exec_time[t - 1][q - 1]
        self.proc_free[q] = fin
        finish[t] = fin
        self.proc[t] = q

        so_finish = 0.0
        for g in ctx.stage_out[t]:
            if g.size == 0:
                continue
            d = g.dest if g.dest is not None else ctx.best_out[q]
            bw = ctx.bw_ps[q - 1][d - 1] if d is not None else 0.0
            key = (q, d)
            launch = max(fin, self.out_link.get(key, 0.0))
            done = launch + transfer_time(g.size, bw)
            self.out_link[key] = done
            if done > so_finish:
                so_finish = done

        top = so_finish if so_finish > fin else fin
        if top > self.makespan:
            self.makespan = top
        if timings is not None:
            timings[t] = TaskTiming(si_ready, data_ready, start, fin, so_finish)


def evaluate(sequence, assignment, w, p, placement=None):
    """Compute the timeline of a schedule.

    ``sequence`` must be a linear extension of the DAG covering every
    non-dummy task exactly once; ``assignment`` maps each of them to a
    processor. ``placement`` optionally pins stage-in files to storage sites
    (keyed by (file_id, destination processor)); files without a pinned site
    are fetched from the storage with the best link to their processor.
    """
    ctx = _EvalContext(w, p, placement)
    state = _EvalState(ctx.P)
    timings = {}
    seen = set()
    for t in sequence:
        if t in seen:
            raise InvalidScheduleError(f"task {t} appears twice in the sequence")
        seen.add(t)
        state.place(t, assignment[t], ctx, timings)
    missing = set(w.non_dummy_ids) - seen
    if missing:
        raise InvalidScheduleError(f"schedule misses tasks {sorted(missing)}")
    return Timeline(timings, state.makespan)


def timeline_csv(timeline, assignment, header_lines=()):
    """Render a timeline as CSV text (one row per task, sorted by id)."""
    out = [f"# {line}" for line in header_lines]
    out.append("task_id,processor,stage_in_ready,data_ready,start,finish,stage_out_finish")
    for t in sorted(timeline.timings):
        tm = timeline.timings[t]
        out.append(f"{t},{assignment[t]},{tm.stage_in_ready!r},{tm.data_ready!r},"
                   f"{tm.start!r},{tm.finish!r},{tm.stage_out_finish!r}")
    return "\n".join(out) + "\n"
