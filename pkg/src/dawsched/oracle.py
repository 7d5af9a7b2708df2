"""Exact minimum-makespan search over every assignment and linear extension.

The candidate space is the cross product of all task-to-processor assignments
(P^n of them) with all linear extensions of the DAG; that covers strictly
more execution orders than the soft-height encoding can express, so the
result is a true optimum baseline for judging the GA. Candidates are timed
with the same incremental engine the schedule evaluator uses.

Sizes are deliberately capped: this is a desk-scale reference, not a solver.
"""

from dataclasses import dataclass

from .errors import TooLargeError
from .evaluator import _EvalContext, _EvalState

__all__ = ["OracleResult", "linear_extensions", "enumerate_schedules", "optimal_makespan"]

DEFAULT_MAX_TASKS = 8
DEFAULT_MAX_PROCS = 3


@dataclass
class OracleResult:
    best_schedule: dict    # processor -> tuple of tasks in execution order
    best_makespan: float
    states_explored: int   # complete candidate schedules timed


def _check_limits(w, p, max_tasks, max_procs):
    n = len(w.non_dummy_ids)
    if n > max_tasks:
        raise TooLargeError(f"{n} tasks exceed the exhaustive limit of {max_tasks}")
    if p.processor_count > max_procs:
        raise TooLargeError(
            f"{p.processor_count} processors exceed the exhaustive limit of {max_procs}")


def linear_extensions(w):
    """Yield every total order of the non-dummy tasks compatible with the DAG."""
    real = set(w.non_dummy_ids)
    preds = {t: frozenset(j for j, _ in w.preds[t] if j in real) for t in real}
    order = []

    def extend(placed, left):
        if not left:
            yield tuple(order)
            return
        for t in sorted(left):
            if preds[t] <= placed:
                order.append(t)
                yield from extend(placed | {t}, left - {t})
                order.pop()

    yield from extend(frozenset(), frozenset(real))


def enumerate_schedules(w, p, max_tasks=DEFAULT_MAX_TASKS, max_procs=DEFAULT_MAX_PROCS):
    """Stream of (assignment, sequence) candidate schedules, extensions outer,
    assignments inner, both in deterministic order."""
    _check_limits(w, p, max_tasks, max_procs)
    tasks = w.non_dummy_ids
    P = p.processor_count

    def assignments(i, current):
        if i == len(tasks):
            yield dict(current)
            return
        for q in range(1, P + 1):
            current[tasks[i]] = q
            yield from assignments(i + 1, current)
        del current[tasks[i]]

    for seq in linear_extensions(w):
        for assignment in assignments(0, {}):
            yield assignment, seq


def optimal_makespan(w, p, max_tasks=DEFAULT_MAX_TASKS, max_procs=DEFAULT_MAX_PROCS,
                     prune=True, placement=None):
    """Minimum achievable makespan over the whole candidate space.

    With ``prune`` on, processor choices whose partial timeline already
    reaches the incumbent makespan are cut (sound: adding tasks never lowers
    the instants already fixed). Prune off times every candidate, so
    ``states_explored`` equals P^n times the number of linear extensions.
    """
    _check_limits(w, p, max_tasks, max_procs)
    ctx = _EvalContext(w, p, placement)
    P = p.processor_count

    best_ms = float("inf")
    best = None
    states = 0

    for seq in linear_extensions(w):
        chosen = []

        def search(i, state):
            nonlocal best_ms, best, states
            if i == len(seq):
                states += 1
                if state.makespan < best_ms:
                    best_ms = state.makespan
                    best = (seq, tuple(chosen))
                return
            t = seq[i]
            for q in range(1, P + 1):
                nxt = state.copy()
                nxt.place(t, q, ctx)
                if prune and nxt.makespan >= best_ms:
                    continue
                chosen.append(q)
                search(i + 1, nxt)
                chosen.pop()

        search(0, _EvalState(P))

    if best is None:
        # every task pruned away is impossible; empty workflows end up here
        return OracleResult({q: () for q in range(1, P + 1)}, 0.0, states)
    seq, procs = best
    schedule = {q: [] for q in range(1, P + 1)}
    for t, q in zip(seq, procs):
        schedule[q].append(t)
    return OracleResult({q: tuple(ts) for q, ts in schedule.items()}, best_ms, states)
