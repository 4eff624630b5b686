import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from incrcomm.ingest import EdgeEvent  # noqa: E402

SIX_NODE_A = [(1, 2, 13), (1, 3, 8), (2, 3, 6), (4, 5, 12), (4, 6, 9), (5, 6, 5), (3, 4, 2)]
SIX_NODE_B = [SIX_NODE_A[i] for i in (0, 1, 2, 6, 3, 4, 5)]

_criteria = []


def record_criterion(name: str, passed, detail: str = "") -> None:
    """Log one acceptance line; ``passed=None`` means skipped."""
    _criteria.append((name, passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _criteria:
        status = "SKIP" if passed is None else ("PASS" if passed else "FAIL")
        terminalreporter.write_line(f"[{status}] {name}" + (f"  ({detail})" if detail else ""))


def random_stream(rng: random.Random, n_nodes: int, n_events: int, weights=(1.0, 2.0, 0.5, 3.25, 7.0)):
    out = []
    while len(out) < n_events:
        u, v = rng.randrange(n_nodes), rng.randrange(n_nodes)
        if u != v:
            out.append(EdgeEvent(u, v, rng.choice(weights)))
    return out


def planted_events(rng: random.Random, n: int, m: int, k: int, p_in: float = 0.7):
    """Unit-weight edges over ``n`` nodes in ``k`` planted groups."""
    groups = [[] for _ in range(k)]
    label = [rng.randrange(k) for _ in range(n)]
    for i, c in enumerate(label):
        groups[c].append(i)
    seen = set()
    out = []
    while len(out) < m:
        u = rng.randrange(n)
        v = rng.choice(groups[label[u]]) if rng.random() < p_in else rng.randrange(n)
        if u == v:
            continue
        key = (min(u, v), max(u, v))
        if key in seen:
            continue
        seen.add(key)
        out.append(EdgeEvent(u, v, 1.0))
    return out, label


@pytest.fixture
def six_node_a():
    return [EdgeEvent(*e) for e in SIX_NODE_A]


@pytest.fixture
def six_node_b():
    return [EdgeEvent(*e) for e in SIX_NODE_B]
