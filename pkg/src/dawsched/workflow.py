"""Task-graph model: DAG workflows with data attachments and execution-order heights.

A workflow is a DAG of tasks. Tasks may carry stage-in files (inputs fetched
from storage sites before execution) and stage-out files (outputs shipped to
storage sites afterwards); edges carry the size of the intermediate data the
consumer needs from the producer.

A *normalized* workflow has a single dummy start task (id 1) and a single
dummy end task (the largest id). Dummy tasks execute in zero time and move no
data; they exist so that every workflow has exactly one entry and one exit.

Three integer levels govern feasible execution orders:

* ``height``      - longest-path depth from the start, computed top down.
* ``height_eq``   - the latest level a task may occupy without delaying any
                    successor, computed bottom up.
* ``height_soft`` - a per-schedule random level in ``[height, height_eq]``.
                    Sorting tasks by nondecreasing soft height always yields
                    an order compatible with the DAG.
"""

import json
from dataclasses import dataclass, field

from .errors import CyclicWorkflowError, InvalidWorkflowError

__all__ = [
    "FileRef",
    "Task",
    "Edge",
    "Workflow",
    "normalize_workflow",
    "compute_heights",
    "compute_equivalent_heights",
    "sample_soft_heights",
    "workflow_from_dict",
    "workflow_to_dict",
    "load_workflow",
    "save_workflow",
]


@dataclass(frozen=True)
class FileRef:
    """A named data file with a size in MB.

    ``dest`` is a storage site id for stage-out files; stage-in files leave it
    ``None`` because their destination is wherever the consuming task runs.
    """

    file_id: object
    size: float
    dest: int | None = None


@dataclass(frozen=True)
class Task:
    id: int
    stage_in: tuple = ()
    stage_out: tuple = ()
    is_dummy: bool = False


@dataclass(frozen=True)
class Edge:
    producer: int
    consumer: int
    size: float = 0.0


class Workflow:
    """Immutable DAG of tasks with derived adjacency and topological order.

    Construction validates ids (unique, contiguous from 1), edge endpoints,
    nonnegative sizes and acyclicity. ``start_id``/``end_id`` are set by
    :func:`normalize_workflow`; most operations require a normalized workflow.
    """

    def __init__(self, tasks, edges, start_id=None, end_id=None):
        tasks = tuple(sorted(tasks, key=lambda t: t.id))
        if not tasks:
            raise InvalidWorkflowError("workflow has no tasks")
        ids = [t.id for t in tasks]
        if len(set(ids)) != len(ids):
            raise InvalidWorkflowError("duplicate task ids")
        if ids != list(range(1, len(ids) + 1)):
            raise InvalidWorkflowError("task ids must be contiguous starting at 1")

        seen = set()
        for e in edges:
            if e.producer == e.consumer:
                raise InvalidWorkflowError(f"self-loop on task {e.producer}")
            if e.producer not in set(ids) or e.consumer not in set(ids):
                raise InvalidWorkflowError(
                    f"edge {e.producer}->{e.consumer} references unknown task")
            if e.size < 0:
                raise InvalidWorkflowError(
                    f"edge {e.producer}->{e.consumer} has negative size")
            if (e.producer, e.consumer) in seen:
                raise InvalidWorkflowError(
                    f"duplicate edge {e.producer}->{e.consumer}")
            seen.add((e.producer, e.consumer))

        self.tasks = tasks
        self.edges = tuple(sorted(edges, key=lambda e: (e.producer, e.consumer)))
        self.by_id = {t.id: t for t in tasks}
        self.start_id = start_id
        self.end_id = end_id

        preds = {t.id: [] for t in tasks}
        succs = {t.id: [] for t in tasks}
        for e in self.edges:
            preds[e.consumer].append((e.producer, e.size))
            succs[e.producer].append((e.consumer, e.size))
        self.preds = {k: tuple(v) for k, v in preds.items()}
        self.succs = {k: tuple(v) for k, v in succs.items()}

        self.topo_order = self._toposort()
        self._heights = None
        self._eq_heights = None

    def _toposort(self):
        indeg = {t.id: len(self.preds[t.id]) for t in self.tasks}
        ready = sorted(i for i, d in indeg.items() if d == 0)
        order = []
        while ready:
            t = ready.pop(0)
            order.append(t)
            inserted = False
            for s, _ in self.succs[t]:
                indeg[s] -= 1
                if indeg[s] == 0:
                    ready.append(s)
                    inserted = True
            if inserted:
                ready.sort()
        if len(order) != len(self.tasks):
            raise CyclicWorkflowError("workflow graph contains a cycle")
        return tuple(order)

    @property
    def sources(self):
        return tuple(t.id for t in self.tasks if not self.preds[t.id])

    @property
    def sinks(self):
        return tuple(t.id for t in self.tasks if not self.succs[t.id])

    @property
    def task_ids(self):
        return tuple(t.id for t in self.tasks)

    @property
    def non_dummy_ids(self):
        return tuple(t.id for t in self.tasks if not t.is_dummy)

    @property
    def is_normalized(self):
        return self.start_id is not None and self.end_id is not None

    def heights(self):
        """Cached height map (normalized workflows only)."""
        if self._heights is None:
            self._heights = compute_heights(self)
        return self._heights

    def eq_heights(self):
        """Cached equivalent-height map (normalized workflows only)."""
        if self._eq_heights is None:
            self._eq_heights = compute_equivalent_heights(self, self.heights())
        return self._eq_heights


def _is_connected(w):
    # Weak connectivity over the undirected view of the edge set.
    adj = {t.id: set() for t in w.tasks}
    for e in w.edges:
        adj[e.producer].add(e.consumer)
        adj[e.consumer].add(e.producer)
    seen = {w.tasks[0].id}
    stack = [w.tasks[0].id]
    while stack:
        for nxt in adj[stack.pop()]:
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return len(seen) == len(w.tasks)


def _check_dummy(task, w):
    if task.stage_in or task.stage_out:
        raise InvalidWorkflowError(f"dummy task {task.id} carries stage files")
    for other, size in w.preds[task.id] + w.succs[task.id]:
        if size != 0:
            raise InvalidWorkflowError(
                f"dummy task {task.id} has a nonzero-size edge with task {other}")


def normalize_workflow(raw):
    """Return ``raw`` with single dummy start/end tasks guaranteed.

    All original sources are attached under a zero-time dummy start (id 1) and
    all original sinks feed a dummy end (largest id), with zero-size edges. A
    qualifying pre-existing dummy endpoint (single source flagged dummy with
    id 1; single sink flagged dummy with the last id) is kept as-is, so the
    operation is idempotent. Disconnected inputs are rejected: the model
    assumes one workflow, not several.
    """
    if not _is_connected(raw):
        raise InvalidWorkflowError("workflow graph is disconnected")

    sources, sinks = raw.sources, raw.sinks
    n = len(raw.tasks)
    start_ok = len(sources) == 1 and sources[0] == 1 and raw.by_id[1].is_dummy
    end_ok = len(sinks) == 1 and sinks[0] == n and raw.by_id[n].is_dummy
    if start_ok:
        _check_dummy(raw.by_id[1], raw)
    if end_ok:
        _check_dummy(raw.by_id[n], raw)

    shift = 0 if start_ok else 1
    tasks = [Task(t.id + shift, t.stage_in, t.stage_out, t.is_dummy) for t in raw.tasks]
    edges = [Edge(e.producer + shift, e.consumer + shift, e.size) for e in raw.edges]

    if not start_ok:
        tasks.insert(0, Task(1, is_dummy=True))
        for s in sources:
            edges.append(Edge(1, s + shift, 0.0))
    end_id = n + shift
    if not end_ok:
        end_id = n + shift + 1
        tasks.append(Task(end_id, is_dummy=True))
        for s in sinks:
            edges.append(Edge(s + shift, end_id, 0.0))

    return Workflow(tasks, edges, start_id=1, end_id=end_id)


def _require_normalized(w):
    if not w.is_normalized:
        raise InvalidWorkflowError("operation requires a normalized workflow")


def compute_heights(w):
    """Top-down longest-path level of every task; the start task sits at 0."""
    _require_normalized(w)
    h = {}
    for t in w.topo_order:
        preds = w.preds[t]
        h[t] = 0 if not preds else 1 + max(h[j] for j, _ in preds)
    return h


def compute_equivalent_heights(w, heights):
    """Bottom-up latest feasible level: the end task keeps its height, any
    other task sits one below the smallest equivalent height among its
    successors."""
    _require_normalized(w)
    heq = {}
    for t in reversed(w.topo_order):
        succs = w.succs[t]
        if not succs:
            heq[t] = heights[t]
        else:
            heq[t] = min(heq[s] for s, _ in succs) - 1
    return heq


def sample_soft_heights(w, heights, eq_heights, rng):
    """Draw a soft height for every task, uniform on its feasible interval.

    The draw for task ``t`` covers ``[height(t), height_eq(t)]``, except that
    the lower end is raised to one past the largest soft height among the
    predecessors of ``t``. On most graphs that clamp never binds and the draw
    is plainly uniform on the whole interval; it exists because on some DAGs
    (a predecessor whose equivalent height reaches the successor's height)
    independent draws could order an ancestor after a descendant, which would
    corrupt every schedule derived from the sample. The clamped interval is
    never empty. Deterministic for a fixed ``rng`` state; uses 64-bit draws
    reduced by modulo (bias is negligible at these interval sizes).
    """
    _require_normalized(w)
    soft = {}
    for t in w.topo_order:
        lo = heights[t]
        for j, _ in w.preds[t]:
            floor = soft[j] + 1
            if floor > lo:
                lo = floor
        hi = eq_heights[t]
        span = hi - lo + 1
        soft[t] = lo if span == 1 else lo + (rng.getrandbits(64) % span)
    return soft


# ---------------------------------------------------------------------------
# JSON interchange
# ---------------------------------------------------------------------------

def _files_from_json(entries, where, allow_dest):
    out = []
    for item in entries:
        if "file_id" not in item or "size" not in item:
            raise InvalidWorkflowError(f"{where}: file entries need file_id and size")
        size = float(item["size"])
        if size < 0:
            raise InvalidWorkflowError(f"{where}: negative file size")
        dest = item.get("dest") if allow_dest else None
        out.append(FileRef(item["file_id"], size, dest))
    return tuple(out)


def workflow_from_dict(doc):
    """Build a (raw, unnormalized) workflow from the JSON document structure."""
    if not isinstance(doc, dict) or "tasks" not in doc or "edges" not in doc:
        raise InvalidWorkflowError("workflow document needs 'tasks' and 'edges'")
    tasks = []
    for td in doc["tasks"]:
        if "id" not in td:
            raise InvalidWorkflowError("task entry without id")
        tasks.append(Task(
            int(td["id"]),
            _files_from_json(td.get("stage_in", []), f"task {td['id']} stage_in", False),
            _files_from_json(td.get("stage_out", []), f"task {td['id']} stage_out", True),
            bool(td.get("dummy", False)),
        ))
    edges = []
    for ed in doc["edges"]:
        if "from" not in ed or "to" not in ed:
            raise InvalidWorkflowError("edge entry needs 'from' and 'to'")
        edges.append(Edge(int(ed["from"]), int(ed["to"]), float(ed.get("size", 0.0))))
    return Workflow(tasks, edges)


def workflow_to_dict(w):
    tasks = []
    for t in w.tasks:
        td = {"id": t.id}
        if t.is_dummy:
            td["dummy"] = True
        if t.stage_in:
            td["stage_in"] = [{"file_id": f.file_id, "size": f.size} for f in t.stage_in]
        if t.stage_out:
            td["stage_out"] = [
                {"file_id": f.file_id, "size": f.size, **({"dest": f.dest} if f.dest else {})}
                for f in t.stage_out
            ]
        tasks.append(td)
    edges = [{"from": e.producer, "to": e.consumer, "size": e.size} for e in w.edges]
    return {"tasks": tasks, "edges": edges}


def load_workflow(path, normalize=True):
    """Parse a workflow JSON file; normalizes by default."""
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidWorkflowError(f"{path}: {exc}") from exc
    w = workflow_from_dict(doc)
    return normalize_workflow(w) if normalize else w


def save_workflow(w, path):
    with open(path, "w") as fh:
        json.dump(workflow_to_dict(w), fh, indent=2, sort_keys=True)
        fh.write("\n")
