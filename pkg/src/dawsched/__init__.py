"""dawsched: data-aware scheduling of DAG workflows on heterogeneous platforms.

The package models workflows whose tasks move real data (stage-in files from
storage, intermediate results between tasks, stage-out files back to storage)
and schedules them with a genetic algorithm whose makespan evaluation charges
every transfer while letting transfers overlap computation. A greedy
bandwidth-proportional optimizer places stage-in files across storage sites,
and an exhaustive oracle provides exact optima on small instances.
"""

__version__ = "0.1.0"

from .errors import (CorruptChromosomeError, CyclicWorkflowError,
                     InvalidScheduleError, InvalidWorkflowError, MismatchError,
                     NoRouteError, PlatformValidationError, SchedulingError,
                     TooLargeError)
from .workflow import (Edge, FileRef, Task, Workflow, compute_equivalent_heights,
                       compute_heights, load_workflow, normalize_workflow,
                       sample_soft_heights, save_workflow, workflow_from_dict,
                       workflow_to_dict)
from .platform import (Issue, Platform, ensure_platform_valid, load_platform,
                       platform_from_dict, platform_to_dict, save_platform,
                       transfer_time, validate_platform)
from .ga import (Chromosome, GaParams, GaResult, Population,
                 crossover_generation, decode, encode, fitness,
                 generate_offspring, generate_population, mutate, run_ga,
                 validate_chromosome)
from .evaluator import TaskTiming, Timeline, evaluate, retrieve_schedule, timeline_csv
from .placement import (Placement, PlacementInstance, instance_from_dict,
                        instance_to_dict, link_finish_times, load_instance,
                        lower_bound, place_stage_in, placement_csv,
                        placement_transfer_time)
from .oracle import (OracleResult, enumerate_schedules, linear_extensions,
                     optimal_makespan)
from .generators import SHAPES, GenSpec, generate_platform, generate_workflow
