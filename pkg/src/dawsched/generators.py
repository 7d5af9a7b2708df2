"""Synthetic workflows and platforms for benchmarks and demos.

Four canonical DAG structures plus layered random graphs:

* linear            - one chain.
* emission          - a fan-out tree from a single root.
* merging           - the edge-reversed emission tree (fan-in to one sink).
* merging_emission  - one source fanning out into parallel chains that all
                      merge into one sink.
* random            - layered random DAG, connected by construction.

All generated workflows come back normalized (dummy endpoints in place) and
all randomness is driven by the seed in the spec.
"""

import random
from dataclasses import dataclass

from .platform import Platform
from .workflow import Edge, FileRef, Task, Workflow, normalize_workflow

__all__ = ["GenSpec", "generate_workflow", "generate_platform", "SHAPES"]

SHAPES = ("linear", "merging", "emission", "merging_emission", "random")


@dataclass(frozen=True)
class GenSpec:
    shape: str = "random"
    task_count: int = 10
    fan: int = 3
    exec_range: tuple = (1.0, 20.0)
    edge_size_range: tuple = (1.0, 50.0)
    stagein_range: tuple = (1.0, 20.0)
    hetero: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise ValueError(f"unknown shape {self.shape!r}; pick one of {SHAPES}")
        if self.task_count < 1:
            raise ValueError("task_count must be at least 1")
        if self.fan < 1:
            raise ValueError("fan must be at least 1")


def _emission_edges(n, fan):
    edges = []
    parent = 1
    child = 2
    while child <= n:
        for _ in range(fan):
            if child > n:
                break
            edges.append((parent, child))
            child += 1
        parent += 1
    return edges


def _merging_emission_edges(n, fan):
    if n <= 2:
        return [(i, i + 1) for i in range(1, n)]
    mids = list(range(2, n))
    chains = max(1, min(fan, len(mids)))
    edges = []
    for c in range(chains):
        chain = mids[c::chains]
        edges.append((1, chain[0]))
        edges.extend(zip(chain, chain[1:]))
        edges.append((chain[-1], n))
    return edges


def _random_edges(n, fan, rng):
    if n == 1:
        return []
    depth = min(n, rng.randint(2, 4))
    layer_of = {1: 0}
    for t in range(2, n + 1):
        layer_of[t] = rng.randrange(depth)
    layer_of[n] = max(1, layer_of[n])  # guarantee at least two layers
    used = sorted(set(layer_of.values()))
    rank = {l: i for i, l in enumerate(used)}
    layer_of = {t: rank[l] for t, l in layer_of.items()}

    edges = set()
    for t in sorted(layer_of):
        l = layer_of[t]
        if l == 0:
            continue
        below = sorted(u for u in layer_of if layer_of[u] < l)
        edges.add((rng.choice(below), t))
        for u in below:
            if rng.random() < 0.25:
                edges.add((u, t))

    def components():
        adj = {t: set() for t in layer_of}
        for a, b in edges:
            adj[a].add(b)
            adj[b].add(a)
        seen, comps = set(), []
        for t in sorted(layer_of):
            if t in seen:
                continue
            comp, stack = {t}, [t]
            while stack:
                for nxt in adj[stack.pop()]:
                    if nxt not in comp:
                        comp.add(nxt)
                        stack.append(nxt)
            seen |= comp
            comps.append(comp)
        return comps

    # Stitch weakly-connected components together, always edge-ing from a
    # lower layer to a higher one so the graph stays acyclic. The component
    # merged first holds the deepest node, so a suitable anchor always exists.
    comps = components()
    if len(comps) > 1:
        comps.sort(key=lambda c: (-max(layer_of[t] for t in c), min(c)))
        merged = set(comps[0])
        for comp in comps[1:]:
            ups = [u for u in comp if layer_of[u] > 0]
            if ups:
                target = min(ups, key=lambda t: (layer_of[t], t))
                below = [u for u in merged if layer_of[u] < layer_of[target]]
                edges.add((min(below), target))
            else:
                above = [u for u in merged if layer_of[u] > 0]
                v = min(comp)
                edges.add((v, min(above, key=lambda t: (layer_of[t], t))))
            merged |= comp
    return sorted(edges)


def _topology(spec, rng):
    n, fan = spec.task_count, spec.fan
    if spec.shape == "linear":
        return [(i, i + 1) for i in range(1, n)]
    if spec.shape == "emission":
        return _emission_edges(n, fan)
    if spec.shape == "merging":
        return [(b, a) for a, b in _emission_edges(n, fan)]
    if spec.shape == "merging_emission":
        return _merging_emission_edges(n, fan)
    return _random_edges(n, fan, rng)


def generate_workflow(spec):
    """Build a normalized workflow of the requested shape with random edge
    data and stage-in/out files; deterministic for a fixed seed."""
    rng = random.Random(spec.seed)
    topo = _topology(spec, rng)

    tasks = []
    for t in range(1, spec.task_count + 1):
        stage_in = []
        roll = rng.random()
        for k in range(2 if roll < 0.2 else (1 if roll < 0.7 else 0)):
            stage_in.append(FileRef(f"in{t}_{k}", round(rng.uniform(*spec.stagein_range), 3)))
        stage_out = []
        if rng.random() < 0.3:
            stage_out.append(FileRef(f"out{t}", round(rng.uniform(*spec.stagein_range), 3)))
        tasks.append(Task(t, tuple(stage_in), tuple(stage_out)))

    edges = [Edge(a, b, round(rng.uniform(*spec.edge_size_range), 3)) for a, b in topo]
    return normalize_workflow(Workflow(tasks, edges))


def generate_platform(w, processors, storages, hetero=False, seed=0,
                      exec_range=(1.0, 20.0), bw_range=(1.0, 10.0)):
    """Random platform sized for a normalized workflow.

    Homogeneous platforms give every task the same run time on every
    processor and use a single bandwidth per matrix; heterogeneous platforms
    draw each entry independently. Dummy tasks cost zero everywhere.
    """
    if processors < 1 or storages < 0:
        raise ValueError("need at least one processor and nonnegative storages")
    rng = random.Random(seed)
    P, S = processors, storages

    exec_time = []
    for t in w.tasks:
        if t.is_dummy:
            exec_time.append((0.0,) * P)
        elif hetero:
            exec_time.append(tuple(round(rng.uniform(*exec_range), 3) for _ in range(P)))
        else:
            v = round(rng.uniform(*exec_range), 3)
            exec_time.append((v,) * P)

    def matrix(rows, cols):
        if hetero:
            return tuple(tuple(round(rng.uniform(*bw_range), 3) for _ in range(cols))
                         for _ in range(rows))
        v = round(rng.uniform(*bw_range), 3)
        return tuple((v,) * cols for _ in range(rows))

    return Platform(P, S, tuple(exec_time), matrix(P, P), matrix(S, P), matrix(P, S))
