"""Genetic algorithm over zero-delimited schedule chromosomes.

A chromosome encodes a complete schedule as one integer sequence: each
processor segment starts with the delimiter 0, then the processor id, then
the tasks assigned to it in execution order. Dummy start/end tasks never
appear in genes. Every chromosome also owns a private soft-height array;
execution order inside a segment, and globally after merging, follows
nondecreasing soft height.

Offspring keep every task-to-processor assignment the two parents agree on
and randomize the rest, inheriting each task's soft height from one parent at
random. Mutation picks two processors, merges their task lists by soft height
and deals the merged sequence back onto the pair at random. Both operators
produce complete, duplication-free, precedence-safe chromosomes by
construction, which is the whole point of the encoding.
"""

import random
from dataclasses import dataclass, field

from .errors import (CorruptChromosomeError, InvalidScheduleError,
                     MismatchError)
from .workflow import sample_soft_heights

__all__ = [
    "Chromosome",
    "Population",
    "GaParams",
    "GaResult",
    "encode",
    "decode",
    "generate_population",
    "generate_offspring",
    "crossover_generation",
    "mutate",
    "fitness",
    "run_ga",
    "validate_chromosome",
]

DELIMITER = 0


@dataclass(frozen=True, eq=False)
class Chromosome:
    genes: tuple
    soft_height: dict  # task id -> soft height; treated as immutable

    def key(self):
        """Hashable identity for caching evaluations."""
        return self.genes, tuple(sorted(self.soft_height.items()))

    def to_string(self):
        return " ".join(str(g) for g in self.genes)

    def processor_count(self):
        return sum(1 for i, g in enumerate(self.genes[:-1]) if g == DELIMITER)

    def assignment(self):
        return decode(self.genes)


@dataclass
class Population:
    chromosomes: list
    size: int


@dataclass(frozen=True)
class GaParams:
    population_size: int = 50
    generations: int = 100
    mutation_rate: float = 0.2
    seed: int = 0

    def __post_init__(self):
        if self.population_size < 2 or self.population_size % 2:
            raise ValueError("population_size must be even and at least 2")
        if not 0.0 <= self.mutation_rate <= 1.0:
            raise ValueError("mutation_rate must be within [0, 1]")
        if self.generations < 0:
            raise ValueError("generations must be nonnegative")


@dataclass
class GaResult:
    best_assignment: dict      # processor -> tuple of tasks in order
    best_makespan: float
    best_timeline: object
    best_chromosome: Chromosome
    history: list              # best-ever makespan after each generation
    seed: int


def encode(assignment, task_ids):
    """Flatten per-processor ordered task lists into the gene sequence.

    ``assignment`` maps processor ids 1..P to ordered task lists; the lists
    together must cover ``task_ids`` exactly once each.
    """
    procs = sorted(assignment)
    if procs != list(range(1, len(procs) + 1)):
        raise InvalidScheduleError("processor ids must be contiguous from 1")
    expected = set(task_ids)
    seen = set()
    genes = []
    for q in procs:
        genes.append(DELIMITER)
        genes.append(q)
        for t in assignment[q]:
            if t in seen or t not in expected:
                raise InvalidScheduleError(f"task {t} duplicated or unknown")
            seen.add(t)
            genes.append(t)
    if seen != expected:
        raise InvalidScheduleError(f"schedule misses tasks {sorted(expected - seen)}")
    return tuple(genes)


def decode(genes, task_ids=None):
    """Invert :func:`encode`; returns {processor: [tasks...]}.

    Validates the stream structure: leading delimiters, one segment per
    processor 1..P, no duplicate tasks. With ``task_ids`` given, also checks
    the stream covers exactly that task set.
    """
    if not genes or genes[0] != DELIMITER:
        raise CorruptChromosomeError("gene stream must start with the delimiter")
    assignment = {}
    seen = set()
    i = 0
    n = len(genes)
    while i < n:
        if genes[i] != DELIMITER:
            raise CorruptChromosomeError(f"expected delimiter at position {i}")
        if i + 1 >= n or genes[i + 1] == DELIMITER:
            raise CorruptChromosomeError(f"segment at position {i} lacks a processor id")
        q = genes[i + 1]
        if q in assignment:
            raise CorruptChromosomeError(f"processor {q} appears twice")
        tasks = []
        i += 2
        while i < n and genes[i] != DELIMITER:
            t = genes[i]
            if t in seen:
                raise CorruptChromosomeError(f"task {t} assigned twice")
            seen.add(t)
            tasks.append(t)
            i += 1
        assignment[q] = tasks
    if sorted(assignment) != list(range(1, len(assignment) + 1)):
        raise CorruptChromosomeError("processor segments must cover ids 1..P")
    if task_ids is not None:
        expected = set(task_ids)
        if seen - expected:
            raise CorruptChromosomeError(f"unknown tasks {sorted(seen - expected)}")
        if expected - seen:
            raise CorruptChromosomeError(f"missing tasks {sorted(expected - seen)}")
    return assignment


def validate_chromosome(c, w, processor_count):
    """Raise unless ``c`` satisfies every chromosome invariant for (w, P)."""
    assignment = decode(c.genes, w.non_dummy_ids)
    if len(assignment) != processor_count:
        raise CorruptChromosomeError(
            f"expected {processor_count} processor segments, found {len(assignment)}")
    soft = c.soft_height
    for q, tasks in assignment.items():
        for a, b in zip(tasks, tasks[1:]):
            if soft[a] > soft[b]:
                raise CorruptChromosomeError(
                    f"segment of processor {q} is not sorted by soft height")
    heights, eqs = w.heights(), w.eq_heights()
    for t in w.task_ids:
        if not heights[t] <= soft[t] <= eqs[t]:
            raise CorruptChromosomeError(f"soft height of task {t} is out of range")
    for e in w.edges:
        if soft[e.producer] >= soft[e.consumer]:
            raise CorruptChromosomeError(
                f"soft heights do not separate edge {e.producer}->{e.consumer}")


def _place_by_soft_height(task_ids, soft, pick_processor, rng):
    """Assign tasks level by level (lowest soft height first) and build the
    per-processor lists. The order inside one level is shuffled: tasks on the
    same level are independent, and exploring their relative order widens the
    search space."""
    levels = {}
    for t in task_ids:
        levels.setdefault(soft[t], []).append(t)
    assignment = {}
    for level in sorted(levels):
        group = sorted(levels[level])
        rng.shuffle(group)
        for t in group:
            assignment.setdefault(pick_processor(t), []).append(t)
    return assignment


def _build(assignment, P, task_ids, soft):
    full = {q: assignment.get(q, []) for q in range(1, P + 1)}
    return Chromosome(encode(full, task_ids), soft)


def generate_population(w, p, params, rng=None):
    """Random initial population; every chromosome draws its own soft-height
    array and then assigns tasks to uniformly random processors, lowest soft
    level first."""
    rng = rng if rng is not None else random.Random(params.seed)
    heights, eqs = w.heights(), w.eq_heights()
    task_ids = w.non_dummy_ids
    P = p.processor_count
    chromosomes = []
    for _ in range(params.population_size):
        soft = sample_soft_heights(w, heights, eqs, rng)
        assignment = _place_by_soft_height(
            task_ids, soft, lambda t: rng.randint(1, P), rng)
        chromosomes.append(_build(assignment, P, task_ids, soft))
    return Population(chromosomes, params.population_size)


def generate_offspring(a, b, w, rng):
    """Common-assignment crossover of two parents.

    Tasks on the same processor in both parents stay there; the rest are
    reassigned uniformly at random. Each task's soft height comes from one
    parent at random, then ancestors are nudged below descendants where the
    mix would break order (possible because the two parents drew their levels
    independently)."""
    map_a = {t: q for q, ts in a.assignment().items() for t in ts}
    map_b = {t: q for q, ts in b.assignment().items() for t in ts}
    if set(map_a) != set(map_b) or a.processor_count() != b.processor_count():
        raise MismatchError("parents do not describe the same scheduling problem")
    P = a.processor_count()
    task_ids = tuple(sorted(map_a))

    soft = {}
    for t in w.topo_order:
        if t in map_a:
            inherited = (a.soft_height if rng.getrandbits(1) == 0 else b.soft_height)[t]
        else:
            inherited = a.soft_height.get(t, b.soft_height.get(t, 0))
        floor = max((soft[j] + 1 for j, _ in w.preds[t]), default=inherited)
        soft[t] = max(inherited, floor)

    common = {t: map_a[t] for t in task_ids if map_a[t] == map_b[t]}
    assignment = _place_by_soft_height(
        task_ids, soft,
        lambda t: common.get(t) or rng.randint(1, P), rng)
    return _build(assignment, P, task_ids, soft)


def crossover_generation(pop, w, turnaround, rng):
    """One crossover-and-select step.

    Parents are paired into random disjoint pairs; each pair contributes one
    offspring next to both parents, growing the pool to one and a half times
    the population, and ranking selection by turnaround keeps the best
    ``pop.size``. Ties keep earlier pool entries, so the incumbent best always
    survives.
    """
    order = list(range(len(pop.chromosomes)))
    rng.shuffle(order)
    pool = list(pop.chromosomes)
    for k in range(0, len(order) - 1, 2):
        pool.append(generate_offspring(
            pop.chromosomes[order[k]], pop.chromosomes[order[k + 1]], w, rng))
    pool.sort(key=turnaround)
    return Population(pool[:pop.size], pop.size)


def mutate(c, rng):
    """Redistribute the tasks of two random processors.

    Their lists are merge-sorted by soft height (lower processor first on
    ties) and every task in the merged run is dealt uniformly to one of the
    two, preserving relative order. With a single processor there is nothing
    to exchange and the chromosome is returned unchanged."""
    assignment = c.assignment()
    P = len(assignment)
    if P < 2:
        return c
    qi, qj = sorted(rng.sample(range(1, P + 1), 2))
    left, right = assignment[qi], assignment[qj]
    soft = c.soft_height

    merged = []
    x = y = 0
    while x < len(left) and y < len(right):
        if soft[left[x]] <= soft[right[y]]:
            merged.append(left[x]); x += 1
        else:
            merged.append(right[y]); y += 1
    merged.extend(left[x:])
    merged.extend(right[y:])

    new_left, new_right = [], []
    for t in merged:
        (new_left if rng.getrandbits(1) == 0 else new_right).append(t)
    assignment[qi] = new_left
    assignment[qj] = new_right
    task_ids = [t for ts in assignment.values() for t in ts]
    return Chromosome(encode(assignment, task_ids), soft)


def fitness(turnarounds):
    """Fitness of each schedule: the population's worst turnaround minus its
    own, so the slowest chromosome scores 0 and faster ones score higher."""
    if not turnarounds:
        raise ValueError("turnarounds must be nonempty")
    worst = max(turnarounds)
    return [worst - t for t in turnarounds]


def run_ga(w, p, params, rng=None, placement=None):
    """Full GA loop: random population, then per generation one crossover-and-
    select step followed by mutation of each non-elite chromosome with
    probability ``params.mutation_rate``. Returns the best schedule ever seen
    with its timeline and the per-generation best-makespan history.
    Deterministic for a fixed seed."""
    from .evaluator import evaluate, retrieve_schedule

    rng = rng if rng is not None else random.Random(params.seed)
    cache = {}

    def turnaround(c):
        key = c.key()
        got = cache.get(key)
        if got is None:
            seq, proc_of = retrieve_schedule(c)
            got = evaluate(seq, proc_of, w, p, placement).makespan
            cache[key] = got
        return got

    best_c = None
    best_ms = float("inf")

    def consider(c):
        nonlocal best_c, best_ms
        ms = turnaround(c)
        if ms < best_ms:
            best_c, best_ms = c, ms

    pop = generate_population(w, p, params, rng)
    for c in pop.chromosomes:
        consider(c)

    history = []
    for _ in range(params.generations):
        pop = crossover_generation(pop, w, turnaround, rng)
        consider(pop.chromosomes[0])
        chroms = pop.chromosomes
        for i in range(1, len(chroms)):
            if rng.random() < params.mutation_rate:
                chroms[i] = mutate(chroms[i], rng)
                consider(chroms[i])
        history.append(best_ms)

    seq, proc_of = retrieve_schedule(best_c)
    timeline = evaluate(seq, proc_of, w, p, placement)
    best_assignment = {q: tuple(ts) for q, ts in best_c.assignment().items()}
    return GaResult(best_assignment, best_ms, timeline, best_c, history, params.seed)
