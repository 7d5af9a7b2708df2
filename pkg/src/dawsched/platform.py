"""Heterogeneous platform model: processors, storage sites and bandwidths.

Everything is a plain matrix. ``exec_time[t-1][q-1]`` is the run time of task
``t`` on processor ``q``; ``bw_pp``, ``bw_sp`` and ``bw_ps`` hold the
processor-processor, storage-processor (stage-in) and processor-storage
(stage-out) bandwidths in MB/s. A bandwidth of zero means there is no link.
Transfers between tasks on the same processor are free, so the ``bw_pp``
diagonal is never consulted.
"""

import json
from dataclasses import dataclass

from .errors import InvalidWorkflowError, NoRouteError, PlatformValidationError

__all__ = [
    "Platform",
    "Issue",
    "transfer_time",
    "validate_platform",
    "ensure_platform_valid",
    "platform_from_dict",
    "platform_to_dict",
    "load_platform",
    "save_platform",
]


@dataclass(frozen=True)
class Platform:
    processor_count: int
    storage_count: int
    exec_time: tuple      # task x processor, seconds
    bw_pp: tuple          # processor x processor, MB/s
    bw_sp: tuple          # storage x processor, MB/s (stage-in)
    bw_ps: tuple          # processor x storage, MB/s (stage-out)


@dataclass(frozen=True)
class Issue:
    kind: str
    message: str


def transfer_time(size, bandwidth):
    """Seconds to move ``size`` MB over a ``bandwidth`` MB/s link.

    Zero-size transfers are free regardless of the link; a positive size over
    a zero-bandwidth link has no route.
    """
    if size == 0:
        return 0.0
    if bandwidth <= 0:
        raise NoRouteError(f"no route for a {size} MB transfer (bandwidth 0)")
    return size / bandwidth


def _matrix(rows, cols, data, name, issues):
    if len(data) != rows:
        issues.append(Issue("ShapeMismatch", f"{name}: expected {rows} rows, got {len(data)}"))
        return False
    ok = True
    for i, row in enumerate(data):
        if len(row) != cols:
            issues.append(Issue(
                "ShapeMismatch", f"{name} row {i + 1}: expected {cols} entries, got {len(row)}"))
            ok = False
    return ok


def validate_platform(platform, w):
    """Cross-check a platform against a normalized workflow.

    Returns a list of :class:`Issue`; an empty list means the platform is
    usable. Checks matrix shapes, zero execution rows for dummy tasks, value
    sanity, and that every stage-in file can reach every processor through at
    least one storage link (the scheduler may place its task anywhere).
    """
    issues = []
    n = len(w.tasks)
    P, S = platform.processor_count, platform.storage_count
    if P < 1:
        issues.append(Issue("ShapeMismatch", "platform needs at least one processor"))
        return issues

    exec_ok = _matrix(n, P, platform.exec_time, "exec_time", issues)
    _matrix(P, P, platform.bw_pp, "bw_pp", issues)
    sp_ok = _matrix(S, P, platform.bw_sp, "bw_sp", issues)
    _matrix(P, S, platform.bw_ps, "bw_ps", issues)

    if exec_ok:
        for t in w.tasks:
            row = platform.exec_time[t.id - 1]
            if any(v < 0 for v in row):
                issues.append(Issue("BadValue", f"exec_time of task {t.id} is negative"))
            if t.is_dummy and any(v != 0 for v in row):
                issues.append(Issue(
                    "BadValue", f"dummy task {t.id} must have zero exec_time on every processor"))

    for name in ("bw_pp", "bw_sp", "bw_ps"):
        for row in getattr(platform, name):
            if any(v < 0 for v in row):
                issues.append(Issue("BadValue", f"{name} has a negative bandwidth"))
                break

    if sp_ok:
        for q in range(1, P + 1):
            col_max = max((platform.bw_sp[s][q - 1] for s in range(S)), default=0.0)
            if col_max > 0:
                continue
            for t in w.tasks:
                for f in t.stage_in:
                    if f.size > 0:
                        issues.append(Issue(
                            "UnreachableFile",
                            f"stage-in file {f.file_id!r} of task {t.id} cannot reach "
                            f"processor {q}: no storage link"))
    return issues


def ensure_platform_valid(platform, w):
    issues = validate_platform(platform, w)
    if issues:
        raise PlatformValidationError(issues)


def _tuplize(mat):
    return tuple(tuple(float(v) for v in row) for row in mat)


def _transpose(mat):
    return tuple(tuple(col) for col in zip(*mat)) if mat else ()


def platform_from_dict(doc):
    """Build a platform from the JSON document structure.

    When only one of ``bw_sp``/``bw_ps`` is present, the other defaults to its
    transpose (same physical link speeds both ways).
    """
    try:
        P = int(doc["processors"])
        S = int(doc["storages"])
        exec_time = _tuplize(doc["exec_time"])
        bw_pp = _tuplize(doc["bw_pp"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidWorkflowError(f"bad platform document: {exc}") from exc
    bw_sp = doc.get("bw_sp")
    bw_ps = doc.get("bw_ps")
    if bw_sp is None and bw_ps is None:
        bw_sp, bw_ps = (), ()
    elif bw_sp is None:
        bw_ps = _tuplize(bw_ps)
        bw_sp = _transpose(bw_ps)
    elif bw_ps is None:
        bw_sp = _tuplize(bw_sp)
        bw_ps = _transpose(bw_sp)
    else:
        bw_sp = _tuplize(bw_sp)
        bw_ps = _tuplize(bw_ps)
    return Platform(P, S, exec_time, bw_pp, bw_sp, bw_ps)


def platform_to_dict(p):
    return {
        "processors": p.processor_count,
        "storages": p.storage_count,
        "exec_time": [list(r) for r in p.exec_time],
        "bw_pp": [list(r) for r in p.bw_pp],
        "bw_sp": [list(r) for r in p.bw_sp],
        "bw_ps": [list(r) for r in p.bw_ps],
    }


def load_platform(path):
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidWorkflowError(f"{path}: {exc}") from exc
    return platform_from_dict(doc)


def save_platform(p, path):
    with open(path, "w") as fh:
        json.dump(platform_to_dict(p), fh, indent=2, sort_keys=True)
        fh.write("\n")
