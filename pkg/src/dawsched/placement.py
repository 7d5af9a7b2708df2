"""Stage-in data placement: spread input files over storage sites.

Every data file has a fixed destination processor. All files bound for one
processor arrive over parallel storage-to-processor links, files on the same
link one after another, so the delivery time for that processor is the
largest per-link load/bandwidth quotient. The unbeatable floor is reached
when every link carries work proportional to its bandwidth:

    lower bound(q) = (total MB destined to q) / (sum of link bandwidths to q)

and the instance-wide bound is the worst destination's floor.

The placement heuristic works per destination: files sorted by descending
size, links by descending bandwidth; each link gets a quota proportional to
its bandwidth, is filled with the longest prefix of unplaced files that fits,
and then with the one remaining file whose size lands closest to the quota
gap, provided it overshoots by less than the gap it closes. Whatever is left
after all links had their turn goes to the link that currently finishes
earliest. Destinations are independent; a file wanted by several processors
is replicated and placed once per destination.
"""

import json
from bisect import bisect_left
from dataclasses import dataclass

from .errors import InvalidWorkflowError, NoRouteError
from .workflow import FileRef

__all__ = [
    "PlacementInstance",
    "Placement",
    "lower_bound",
    "place_stage_in",
    "placement_transfer_time",
    "link_finish_times",
    "instance_from_dict",
    "instance_to_dict",
    "load_instance",
    "placement_csv",
]


@dataclass(frozen=True)
class PlacementInstance:
    files: tuple   # FileRef entries with dest = destination processor id
    bw_sp: tuple   # storage x processor bandwidth matrix


@dataclass(frozen=True)
class Placement:
    assignment: dict  # (file_id, destination processor) -> storage id


def _destinations(instance):
    dests = {}
    for f in instance.files:
        dests.setdefault(f.dest, []).append(f)
    return dests


def _links_to(instance, q):
    S = len(instance.bw_sp)
    return [(s, instance.bw_sp[s - 1][q - 1])
            for s in range(1, S + 1) if instance.bw_sp[s - 1][q - 1] > 0]


def lower_bound(instance):
    """Bandwidth-proportional delivery-time floor; max over destinations."""
    bound = 0.0
    for q, files in _destinations(instance).items():
        total = sum(f.size for f in files)
        if total == 0:
            continue
        agg = sum(bw for _, bw in _links_to(instance, q))
        if agg == 0:
            raise NoRouteError(f"destination {q} has data but no storage link")
        bound = max(bound, total / agg)
    return bound


def place_stage_in(instance):
    """Greedy bandwidth-proportional placement (see module docstring)."""
    assignment = {}
    for q, files in sorted(_destinations(instance).items()):
        links = sorted(_links_to(instance, q), key=lambda sb: (-sb[1], sb[0]))
        if not links and any(f.size > 0 for f in files):
            raise NoRouteError(f"destination {q} has data but no storage link")
        if not links:
            continue
        total = sum(f.size for f in files)
        agg = sum(bw for _, bw in links)
        on_link = {s: [] for s, _ in links}
        remaining = sorted(files, key=lambda f: (-f.size, str(f.file_id)))

        for s, bw in links:
            quota = total * bw / agg
            acc = 0.0
            k = 0
            while k < len(remaining) and acc + remaining[k].size <= quota + 1e-9:
                acc += remaining[k].size
                k += 1
            taken, remaining = remaining[:k], remaining[k:]
            gap = quota - acc
            if remaining and gap > 1e-9:
                idx = _closest_index(remaining, gap)
                size = remaining[idx].size
                # accept only while the overshoot stays below the gap it closes
                if size < 2 * gap:
                    taken.append(remaining.pop(idx))
            on_link[s] = taken

        def finish(s):
            bw = dict(links)[s]
            return sum(f.size for f in on_link[s]) / bw

        for f in remaining:
            s_best = min(links, key=lambda sb: (finish(sb[0]), sb[0]))[0]
            on_link[s_best].append(f)

        _rebalance(on_link, dict(links))
        for s, taken in on_link.items():
            for f in taken:
                assignment[(f.file_id, q)] = s
    return Placement(assignment)


def _rebalance(on_link, bw):
    """Local repair: move or swap files off the worst link while that strictly
    shortens this destination's delivery time.

    Quota matching works well with many files, but with a handful of large
    files it can park one file on a slow link and blow past the optimum;
    this pass fixes exactly that and leaves balanced placements untouched.
    Every applied operation drops both affected links strictly below the old
    worst finish, so the sorted finish profile decreases and the loop ends.
    """
    load = {s: sum(f.size for f in files) for s, files in on_link.items()}
    while True:
        worst = max(on_link, key=lambda s: (load[s] / bw[s], -s))
        current = load[worst] / bw[worst]
        best_move = None
        for f in sorted(on_link[worst], key=lambda f: (-f.size, str(f.file_id))):
            if f.size == 0:
                continue
            for s in sorted(on_link):
                if s == worst:
                    continue
                candidate = max((load[s] + f.size) / bw[s],
                                current - f.size / bw[worst])
                if candidate < current - 1e-12 and (
                        best_move is None or candidate < best_move[0] - 1e-12):
                    best_move = (candidate, f, s, None)
                for g in sorted(on_link[s], key=lambda g: (-g.size, str(g.file_id))):
                    if g.size >= f.size:
                        continue
                    candidate = max((load[s] - g.size + f.size) / bw[s],
                                    (load[worst] - f.size + g.size) / bw[worst])
                    if candidate < current - 1e-12 and (
                            best_move is None or candidate < best_move[0] - 1e-12):
                        best_move = (candidate, f, s, g)
        if best_move is None:
            return
        _, f, s, g = best_move
        on_link[worst].remove(f)
        on_link[s].append(f)
        load[worst] -= f.size
        load[s] += f.size
        if g is not None:
            on_link[s].remove(g)
            on_link[worst].append(g)
            load[s] -= g.size
            load[worst] += g.size


def _closest_index(files_desc, target):
    """Index of the file whose size is closest to ``target`` in a list sorted
    by descending size; prefers the smaller file on exact ties."""
    sizes_asc = [f.size for f in reversed(files_desc)]
    pos = bisect_left(sizes_asc, target)
    best = None
    for cand in (pos - 1, pos):
        if 0 <= cand < len(sizes_asc):
            diff = abs(sizes_asc[cand] - target)
            if best is None or diff < best[0] - 1e-12 or (
                    abs(diff - best[0]) <= 1e-12 and sizes_asc[cand] < best[1]):
                best = (diff, sizes_asc[cand], cand)
    return len(files_desc) - 1 - best[2]


def link_finish_times(placement, instance):
    """Per-link completion time {(storage, destination): seconds}."""
    loads = {}
    for f in instance.files:
        s = placement.assignment.get((f.file_id, f.dest))
        if s is None:
            raise InvalidWorkflowError(
                f"placement misses file {f.file_id!r} for destination {f.dest}")
        loads[(s, f.dest)] = loads.get((s, f.dest), 0.0) + f.size
    times = {}
    for (s, q), size in loads.items():
        bw = instance.bw_sp[s - 1][q - 1]
        if size > 0 and bw <= 0:
            raise NoRouteError(f"file assigned to dead link storage {s} -> processor {q}")
        times[(s, q)] = size / bw if bw > 0 else 0.0
    return times


def placement_transfer_time(placement, instance):
    """Delivery time of a placement: all links run in parallel, so it is the
    slowest link's load/bandwidth quotient."""
    times = link_finish_times(placement, instance)
    return max(times.values(), default=0.0)


# ---------------------------------------------------------------------------
# JSON / CSV interchange
# ---------------------------------------------------------------------------

def instance_from_dict(doc):
    if not isinstance(doc, dict) or "files" not in doc or "bw_sp" not in doc:
        raise InvalidWorkflowError("instance document needs 'files' and 'bw_sp'")
    bw_sp = tuple(tuple(float(v) for v in row) for row in doc["bw_sp"])
    P = len(bw_sp[0]) if bw_sp else 0
    files = []
    seen = set()
    for fd in doc["files"]:
        try:
            ref = FileRef(fd["id"], float(fd["size"]), int(fd["dest"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidWorkflowError(f"bad file entry: {exc}") from exc
        if ref.size < 0:
            raise InvalidWorkflowError(f"file {ref.file_id!r} has negative size")
        if not 1 <= ref.dest <= P:
            raise InvalidWorkflowError(
                f"file {ref.file_id!r} destination {ref.dest} out of range")
        if (ref.file_id, ref.dest) in seen:
            raise InvalidWorkflowError(
                f"file {ref.file_id!r} listed twice for destination {ref.dest}")
        seen.add((ref.file_id, ref.dest))
        files.append(ref)
    return PlacementInstance(tuple(files), bw_sp)


def instance_to_dict(instance):
    return {
        "files": [{"id": f.file_id, "size": f.size, "dest": f.dest}
                  for f in instance.files],
        "bw_sp": [list(r) for r in instance.bw_sp],
    }


def load_instance(path):
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidWorkflowError(f"{path}: {exc}") from exc
    return instance_from_dict(doc)


def placement_csv(placement, instance, header_lines=()):
    achieved = placement_transfer_time(placement, instance)
    bound = lower_bound(instance)
    out = [f"# {line}" for line in header_lines]
    out.append(f"# lower_bound={bound!r}")
    out.append(f"# achieved={achieved!r}")
    for (s, q), t in sorted(link_finish_times(placement, instance).items()):
        out.append(f"# link storage={s} dest={q} finish={t!r}")
    out.append("file_id,dest,storage")
    rows = sorted(placement.assignment.items(), key=lambda kv: (kv[0][1], str(kv[0][0])))
    for (fid, q), s in rows:
        out.append(f"{fid},{q},{s}")
    return "\n".join(out) + "\n"
