import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from dawsched.workflow import Edge, Task, Workflow, normalize_workflow

# 10-task sample graph used throughout: tasks 1 and 10 are the dummy
# endpoints, and the expected height rows are
#   height    0 1 1 1 3 2 3 2 4 5
#   height_eq 0 3 2 1 4 3 3 2 4 5
SAMPLE_EDGES = [
    (1, 2), (1, 3), (1, 4),
    (4, 6), (4, 8),
    (8, 5), (3, 7), (8, 7),
    (2, 9), (6, 9), (7, 9),
    (5, 10), (9, 10),
]
SAMPLE_HEIGHT = {1: 0, 2: 1, 3: 1, 4: 1, 5: 3, 6: 2, 7: 3, 8: 2, 9: 4, 10: 5}
SAMPLE_HEIGHT_EQ = {1: 0, 2: 3, 3: 2, 4: 1, 5: 4, 6: 3, 7: 3, 8: 2, 9: 4, 10: 5}
SAMPLE_SOFT = {1: 0, 2: 2, 3: 1, 4: 1, 5: 3, 6: 3, 7: 3, 8: 2, 9: 4, 10: 5}


def build_sample_workflow(edge_size=0.0):
    tasks = [Task(i, is_dummy=(i in (1, 10))) for i in range(1, 11)]
    edges = []
    for a, b in SAMPLE_EDGES:
        size = 0.0 if (a == 1 or b == 10) else edge_size
        edges.append(Edge(a, b, size))
    return normalize_workflow(Workflow(tasks, edges))


@pytest.fixture
def sample_workflow():
    return build_sample_workflow()
