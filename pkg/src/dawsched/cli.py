"""Command-line front end.

Subcommands: ``generate`` (emit workflow/platform/instance files),
``schedule`` (run the GA on a workflow+platform), ``place`` (optimize a
stage-in instance) and ``compare`` (GA vs exhaustive optimum over generated
instances). Every output file starts with reproducibility comments carrying
the configuration and seed. Exit codes: 0 ok, 2 bad input, 3 no route,
4 instance too large for exhaustive search.
"""

import argparse
import json
import os
import random
import sys

from . import __version__
from .errors import (InvalidWorkflowError, NoRouteError,
                     PlatformValidationError, SchedulingError, TooLargeError)
from .evaluator import timeline_csv
from .ga import GaParams, run_ga
from .generators import SHAPES, GenSpec, generate_platform, generate_workflow
from .oracle import optimal_makespan
from .placement import (load_instance, lower_bound, place_stage_in,
                        placement_csv, placement_transfer_time)
from .platform import ensure_platform_valid, load_platform, save_platform
from .workflow import load_workflow, save_workflow

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NOROUTE = 3
EXIT_TOOLARGE = 4

SEED_ENV = "DAWSCHED_SEED"


def _seed_from(args):
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    return int(env) if env else 0


def _write(path, text):
    with open(path, "w") as fh:
        fh.write(text)


def _header(cmd, options):
    pairs = " ".join(f"{k}={v}" for k, v in sorted(options.items()))
    return [f"dawsched {__version__} {cmd}", pairs]


def cmd_generate(args):
    seed = _seed_from(args)
    os.makedirs(args.out, exist_ok=True)
    spec = GenSpec(shape=args.shape, task_count=args.tasks, fan=args.fan,
                   hetero=args.hetero, seed=seed)
    w = generate_workflow(spec)
    p = generate_platform(w, args.processors, args.storages, hetero=args.hetero,
                          seed=seed + 1)
    save_workflow(w, os.path.join(args.out, "workflow.json"))
    save_platform(p, os.path.join(args.out, "platform.json"))
    if args.files:
        rng = random.Random(seed + 2)
        doc = {
            "files": [{"id": f"f{i}", "size": round(rng.uniform(*spec.stagein_range), 3),
                       "dest": rng.randint(1, args.processors)}
                      for i in range(1, args.files + 1)],
            "bw_sp": [list(r) for r in p.bw_sp],
        }
        with open(os.path.join(args.out, "instance.json"), "w") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
    print(f"generated shape={args.shape} tasks={args.tasks} seed={seed} out={args.out}")
    return EXIT_OK


def cmd_schedule(args):
    seed = _seed_from(args)
    w = load_workflow(args.workflow)
    p = load_platform(args.platform)
    ensure_platform_valid(p, w)
    params = GaParams(population_size=args.population, generations=args.generations,
                      mutation_rate=args.mutation_rate, seed=seed)
    result = run_ga(w, p, params)

    os.makedirs(args.out, exist_ok=True)
    options = {"workflow": args.workflow, "platform": args.platform, "seed": seed,
               "population": params.population_size, "generations": params.generations,
               "mutation_rate": params.mutation_rate}
    header = _header("schedule", options)

    doc = {
        "config": options,
        "makespan": result.best_makespan,
        "schedule": {str(q): list(ts) for q, ts in sorted(result.best_assignment.items())},
        "genes": list(result.best_chromosome.genes),
    }
    _write(os.path.join(args.out, "schedule.json"),
           json.dumps(doc, indent=2, sort_keys=True) + "\n")
    proc_of = {t: q for q, ts in result.best_assignment.items() for t in ts}
    _write(os.path.join(args.out, "timeline.csv"),
           timeline_csv(result.best_timeline, proc_of, header))
    hist = [f"# {line}" for line in header] + ["generation,best_makespan"]
    hist += [f"{g + 1},{ms!r}" for g, ms in enumerate(result.history)]
    _write(os.path.join(args.out, "history.csv"), "\n".join(hist) + "\n")
    print(f"makespan={result.best_makespan!r} seed={seed}")
    return EXIT_OK


def cmd_place(args):
    instance = load_instance(args.instance)
    placement = place_stage_in(instance)
    achieved = placement_transfer_time(placement, instance)
    bound = lower_bound(instance)
    os.makedirs(args.out, exist_ok=True)
    header = _header("place", {"instance": args.instance})
    _write(os.path.join(args.out, "placement.csv"),
           placement_csv(placement, instance, header))
    ratio = achieved / bound if bound > 0 else 1.0
    print(f"achieved={achieved!r} lower_bound={bound!r} ratio={ratio:.4f}")
    return EXIT_OK


def cmd_compare(args):
    seed = _seed_from(args)
    master = random.Random(seed)
    params = GaParams(population_size=args.population, generations=args.generations,
                      mutation_rate=args.mutation_rate, seed=seed)
    options = {"shape": args.shape, "reps": args.reps, "seed": seed,
               "population": params.population_size, "generations": params.generations,
               "mutation_rate": params.mutation_rate,
               "tasks": f"{args.tasks[0]}-{args.tasks[1]}"}
    rows = []
    for _ in range(args.reps):
        rep_seed = master.getrandbits(48)
        rng = random.Random(rep_seed)
        spec = GenSpec(shape=args.shape, task_count=rng.randint(*args.tasks),
                       hetero=True, seed=rep_seed)
        w = generate_workflow(spec)
        p = generate_platform(w, rng.randint(2, 3), rng.randint(1, 2),
                              hetero=True, seed=rep_seed + 1)
        ga = run_ga(w, p, GaParams(params.population_size, params.generations,
                                   params.mutation_rate, rep_seed))
        opt = optimal_makespan(w, p)
        ratio = ga.best_makespan / opt.best_makespan if opt.best_makespan > 0 else 1.0
        rows.append(f"{rep_seed},{args.shape},{ga.best_makespan!r},"
                    f"{opt.best_makespan!r},{ratio:.6f}")

    os.makedirs(args.out, exist_ok=True)
    out = [f"# {line}" for line in _header("compare", options)]
    out.append("seed,shape,ga_makespan,opt_makespan,ratio")
    out.extend(rows)
    _write(os.path.join(args.out, "compare.csv"), "\n".join(out) + "\n")
    print(f"wrote {len(rows)} comparisons to {args.out}/compare.csv")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="dawsched",
        description="Data-aware workflow scheduling: GA scheduler, stage-in "
                    "placement and exhaustive baseline.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_seed(sp):
        sp.add_argument("--seed", type=int, default=None,
                        help=f"master seed (default: ${SEED_ENV} or 0)")

    def add_ga(sp):
        sp.add_argument("--population", type=int, default=50)
        sp.add_argument("--generations", type=int, default=100)
        sp.add_argument("--mutation-rate", type=float, default=0.2)

    g = sub.add_parser("generate", help="emit workflow/platform (and instance) files")
    g.add_argument("--shape", choices=SHAPES, default="random")
    g.add_argument("--tasks", type=int, default=10)
    g.add_argument("--fan", type=int, default=3)
    g.add_argument("--processors", type=int, default=3)
    g.add_argument("--storages", type=int, default=2)
    g.add_argument("--hetero", action="store_true")
    g.add_argument("--files", type=int, default=0,
                   help="also emit a stage-in instance with this many files")
    g.add_argument("--out", required=True)
    add_seed(g)
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("schedule", help="run the GA on a workflow and platform")
    s.add_argument("--workflow", required=True)
    s.add_argument("--platform", required=True)
    s.add_argument("--out", required=True)
    add_ga(s)
    add_seed(s)
    s.set_defaults(func=cmd_schedule)

    pl = sub.add_parser("place", help="optimize a stage-in placement instance")
    pl.add_argument("--instance", required=True)
    pl.add_argument("--out", required=True)
    add_seed(pl)
    pl.set_defaults(func=cmd_place)

    c = sub.add_parser("compare", help="GA vs exhaustive optimum on generated instances")
    c.add_argument("--shape", choices=SHAPES, default="random")
    c.add_argument("--reps", type=int, default=30)
    c.add_argument("--tasks", type=int, nargs=2, default=(5, 7),
                   metavar=("MIN", "MAX"))
    c.add_argument("--out", required=True)
    add_ga(c)
    add_seed(c)
    c.set_defaults(func=cmd_compare)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TooLargeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TOOLARGE
    except NoRouteError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOROUTE
    except (InvalidWorkflowError, PlatformValidationError, FileNotFoundError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SchedulingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def console_main():
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())
