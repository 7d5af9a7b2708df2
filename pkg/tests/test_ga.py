import random

import pytest

import dawsched.ga as ga_mod
from dawsched.errors import (CorruptChromosomeError, InvalidScheduleError,
                             MismatchError)
from dawsched.evaluator import evaluate, retrieve_schedule
from dawsched.ga import (Chromosome, GaParams, Population, crossover_generation,
                         decode, encode, fitness, generate_offspring,
                         generate_population, mutate, run_ga,
                         validate_chromosome)
from dawsched.generators import generate_platform
from dawsched.oracle import optimal_makespan
from dawsched.platform import Platform
from dawsched.workflow import Edge, Task, Workflow, normalize_workflow

from conftest import SAMPLE_SOFT, build_sample_workflow
from helpers import random_instance, single_proc_platform

TABLE_GENES = (0, 1, 2, 5, 0, 2, 3, 6, 9, 0, 3, 4, 8, 7)
OTHER_GENES = (0, 1, 2, 9, 0, 2, 3, 6, 7, 0, 3, 4, 8, 5)


def sample_platform(P=3, exec_val=2.0, bw=5.0):
    w = build_sample_workflow()
    exec_time = tuple((0.0,) * P if w.by_id[i].is_dummy else (exec_val,) * P
                      for i in range(1, 11))
    return w, Platform(P, 1, exec_time,
                       tuple((bw,) * P for _ in range(P)),
                       ((bw,) * P,), tuple((bw,) * 1 for _ in range(P)))


def is_linear_extension(seq, w):
    pos = {t: i for i, t in enumerate(seq)}
    for e in w.edges:
        if e.producer in pos and e.consumer in pos:
            if pos[e.producer] >= pos[e.consumer]:
                return False
    return True


# ---------------------------------------------------------------------------
# encoding
# ---------------------------------------------------------------------------

def test_encode_reference_schedule():
    genes = encode({1: [2, 5], 2: [3, 6, 9], 3: [4, 8, 7]}, range(2, 10))
    assert genes == TABLE_GENES


def test_encode_empty_segment():
    assert encode({1: [], 2: [2]}, [2]) == (0, 1, 0, 2, 2)


def test_decode_reference_schedule():
    assert decode(TABLE_GENES, range(2, 10)) == {1: [2, 5], 2: [3, 6, 9], 3: [4, 8, 7]}


def test_decode_duplicate_task():
    genes = (0, 1, 2, 9, 0, 2, 3, 6, 9, 0, 3, 4, 8, 7)
    with pytest.raises(CorruptChromosomeError):
        decode(genes, range(2, 10))


def test_decode_missing_task():
    genes = (0, 1, 2, 9, 0, 2, 3, 6, 7, 0, 3, 4, 8)
    with pytest.raises(CorruptChromosomeError):
        decode(genes, range(2, 10))


def test_decode_structural_garbage():
    with pytest.raises(CorruptChromosomeError):
        decode((1, 2, 3))
    with pytest.raises(CorruptChromosomeError):
        decode((0, 1, 2, 0))  # delimiter with no processor id
    with pytest.raises(CorruptChromosomeError):
        decode((0, 1, 2, 0, 1, 3))  # processor listed twice
    with pytest.raises(CorruptChromosomeError):
        decode((0, 2, 5))  # segments do not cover 1..P


def test_encode_rejects_bad_assignments():
    with pytest.raises(InvalidScheduleError):
        encode({1: [2, 2]}, [2])
    with pytest.raises(InvalidScheduleError):
        encode({1: [2]}, [2, 3])
    with pytest.raises(InvalidScheduleError):
        encode({2: [2]}, [2])


def test_round_trip_random_schedules():
    rng = random.Random(5)
    for _ in range(1000):
        n = rng.randint(1, 12)
        P = rng.randint(1, 4)
        tasks = list(range(2, 2 + n))
        rng.shuffle(tasks)
        assignment = {q: [] for q in range(1, P + 1)}
        for t in tasks:
            assignment[rng.randint(1, P)].append(t)
        genes = encode(assignment, range(2, 2 + n))
        assert decode(genes, range(2, 2 + n)) == assignment


def test_chromosome_string_form():
    c = Chromosome(TABLE_GENES, dict(SAMPLE_SOFT))
    assert c.to_string() == "0 1 2 5 0 2 3 6 9 0 3 4 8 7"


# ---------------------------------------------------------------------------
# population
# ---------------------------------------------------------------------------

def test_population_chromosomes_are_valid():
    for seed in range(30):
        w, p = random_instance(seed)
        pop = generate_population(w, p, GaParams(population_size=6, seed=seed))
        assert len(pop.chromosomes) == 6
        for c in pop.chromosomes:
            validate_chromosome(c, w, p.processor_count)


def test_population_deterministic():
    w, p = sample_platform()
    params = GaParams(population_size=8, seed=42)
    a = generate_population(w, p, params)
    b = generate_population(w, p, params)
    assert [c.genes for c in a.chromosomes] == [c.genes for c in b.chromosomes]
    assert [c.soft_height for c in a.chromosomes] == [c.soft_height for c in b.chromosomes]


def test_population_single_processor():
    w, _ = sample_platform()
    p1 = single_proc_platform(w, {i: 1.0 for i in range(2, 10)})
    pop = generate_population(w, p1, GaParams(population_size=6, seed=0))
    for c in pop.chromosomes:
        assignment = c.assignment()
        assert set(assignment[1]) == set(range(2, 10))
        soft = c.soft_height
        ordered = assignment[1]
        assert all(soft[a] <= soft[b] for a, b in zip(ordered, ordered[1:]))


# ---------------------------------------------------------------------------
# crossover
# ---------------------------------------------------------------------------

def paper_parents():
    w = build_sample_workflow()
    soft = dict(SAMPLE_SOFT)
    return w, Chromosome(TABLE_GENES, soft), Chromosome(OTHER_GENES, dict(soft))


def test_offspring_keeps_common_assignments():
    w, a, b = paper_parents()
    rng = random.Random(99)
    for _ in range(1000):
        child = generate_offspring(a, b, w, rng)
        placed = {t: q for q, ts in child.assignment().items() for t in ts}
        assert placed[3] == 2 and placed[6] == 2
        assert placed[4] == 3 and placed[8] == 3
        assert placed[2] == 1
        validate_chromosome(child, w, 3)


def test_offspring_documented_example_reachable():
    w, a, b = paper_parents()
    target = (0, 1, 2, 9, 0, 2, 3, 6, 5, 0, 3, 4, 8, 7)
    seen = set()
    rng = random.Random(0)
    for _ in range(3000):
        seen.add(generate_offspring(a, b, w, rng).genes)
    assert target in seen


def test_offspring_of_identical_parents_keeps_assignment():
    w, a, _ = paper_parents()
    clone = Chromosome(a.genes, dict(a.soft_height))
    rng = random.Random(3)
    for _ in range(50):
        child = generate_offspring(a, clone, w, rng)
        placed = {t: q for q, ts in child.assignment().items() for t in ts}
        original = {t: q for q, ts in a.assignment().items() for t in ts}
        assert placed == original


def test_offspring_mismatched_parents():
    w, a, _ = paper_parents()
    other = Chromosome(encode({1: [2], 2: [3]}, [2, 3]), {2: 1, 3: 2})
    with pytest.raises(MismatchError):
        generate_offspring(a, other, w, random.Random(0))


def test_crossover_generation_selection(monkeypatch):
    w, p = sample_platform()
    params = GaParams(population_size=10, seed=7)
    pop = generate_population(w, p, params, random.Random(7))

    def turnaround(c):
        seq, proc_of = retrieve_schedule(c)
        return evaluate(seq, proc_of, w, p).makespan

    calls = []
    real = ga_mod.generate_offspring

    def counting(*args, **kwargs):
        calls.append(1)
        return real(*args, **kwargs)

    monkeypatch.setattr(ga_mod, "generate_offspring", counting)
    best_before = min(turnaround(c) for c in pop.chromosomes)
    out = crossover_generation(pop, w, turnaround, random.Random(1))
    assert len(calls) == 5           # one offspring per disjoint pair
    assert len(out.chromosomes) == 10
    assert turnaround(out.chromosomes[0]) <= best_before


def test_crossover_generation_minimal_population():
    w, p = sample_platform()
    pop = generate_population(w, p, GaParams(population_size=2, seed=1))

    def turnaround(c):
        seq, proc_of = retrieve_schedule(c)
        return evaluate(seq, proc_of, w, p).makespan

    out = crossover_generation(pop, w, turnaround, random.Random(2))
    assert len(out.chromosomes) == 2


# ---------------------------------------------------------------------------
# mutation
# ---------------------------------------------------------------------------

class ForcedPair(random.Random):
    """random.Random whose sample() always picks processors 1 and 2."""

    def sample(self, population, k):
        return [1, 2]


def test_mutate_redistributes_chosen_processors():
    _, a, _ = paper_parents()
    rng = ForcedPair(11)
    for _ in range(50):
        mutated = mutate(a, rng)
        assignment = mutated.assignment()
        assert assignment[3] == [4, 8, 7]
        assert sorted(assignment[1] + assignment[2]) == [2, 3, 5, 6, 9]


def test_mutate_preserves_invariants():
    for seed in range(30):
        w, p = random_instance(seed, procs=(2, 3))
        pop = generate_population(w, p, GaParams(population_size=4, seed=seed))
        rng = random.Random(seed)
        for c in pop.chromosomes:
            validate_chromosome(mutate(c, rng), w, p.processor_count)


def test_mutate_single_processor_identity():
    w, _ = sample_platform()
    p1 = single_proc_platform(w, {i: 1.0 for i in range(2, 10)})
    c = generate_population(w, p1, GaParams(population_size=2, seed=0)).chromosomes[0]
    assert mutate(c, random.Random(9)) is c


# ---------------------------------------------------------------------------
# fitness
# ---------------------------------------------------------------------------

def test_fitness_is_gap_to_worst():
    assert fitness([100.0, 80.0, 60.0]) == [0.0, 20.0, 40.0]


def test_fitness_all_equal():
    assert fitness([7.0, 7.0, 7.0]) == [0.0, 0.0, 0.0]


def test_fitness_singleton():
    assert fitness([42.0]) == [0.0]


def test_fitness_nonnegative_with_zero():
    values = fitness([3.0, 9.0, 4.5])
    assert min(values) == 0.0 and all(v >= 0 for v in values)


# ---------------------------------------------------------------------------
# run_ga
# ---------------------------------------------------------------------------

def test_run_ga_single_task():
    w = normalize_workflow(Workflow([Task(1)], []))
    p = single_proc_platform(w, {2: 5.0})
    res = run_ga(w, p, GaParams(population_size=2, generations=3, seed=0))
    assert res.best_makespan == 5.0


def test_run_ga_colocates_data_heavy_chain():
    w = normalize_workflow(Workflow([Task(1), Task(2)], [Edge(1, 2, 1000.0)]))
    exec_time = ((0.0, 0.0), (5.0, 5.0), (3.0, 3.0), (0.0, 0.0))
    p = Platform(2, 0, exec_time, ((1.0, 1.0), (1.0, 1.0)), (), ())
    res = run_ga(w, p, GaParams(population_size=4, generations=10, seed=1))
    assert res.best_makespan == 8.0
    assert optimal_makespan(w, p).best_makespan == 8.0
    procs = {q for q, ts in res.best_assignment.items() if ts}
    assert len(procs) == 1


def test_run_ga_never_beats_oracle():
    for seed in range(30):
        w, p = random_instance(seed, tasks=(5, 7))
        res = run_ga(w, p, GaParams(population_size=8, generations=8, seed=seed))
        opt = optimal_makespan(w, p)
        assert res.best_makespan >= opt.best_makespan - 1e-9


def test_run_ga_deterministic_and_monotone():
    w, p = random_instance(17)
    params = GaParams(population_size=10, generations=15, seed=23)
    r1 = run_ga(w, p, params)
    r2 = run_ga(w, p, params)
    assert r1.history == r2.history
    assert r1.best_chromosome.genes == r2.best_chromosome.genes
    assert all(a >= b for a, b in zip(r1.history, r1.history[1:]))
    assert r1.history[-1] == r1.best_makespan


def test_ga_params_validation():
    with pytest.raises(ValueError):
        GaParams(population_size=3)
    with pytest.raises(ValueError):
        GaParams(mutation_rate=1.5)
