"""Experiment driver: static start, streamed increments, checkpointed quality.

Protocol: shuffle the edges, run the static optimiser on the first part,
then stream the rest edge by edge, recomputing modularity from scratch at
the end of every subset. Optionally re-run the static optimiser cold at
each checkpoint for comparison.
"""

from __future__ import annotations

import io
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Dict, Iterable, List, Optional, Sequence

from . import louvain
from .errors import NoEventsProcessed
from .graph import Graph
from .incremental import DecisionMode, EdgeType, IncrementalTracker, Operation, OpStats
from .ingest import EdgeEvent, split_stream
from .partition import Partition, modularity

__all__ = [
    "CheckpointRow",
    "ExperimentReport",
    "run_experiment",
    "read_journal",
    "read_report_csv",
    "locate_dataset",
    "REPORT_COLUMNS",
]

REPORT_VERSION = "incrcomm-report v1"
REPORT_COLUMNS = (
    "subset_index",
    "edges_so_far",
    "q_incremental",
    "q_static_rerun",
    "elapsed_incremental_s",
    "elapsed_static_s",
)


@dataclass
class CheckpointRow:
    subset_index: int
    edges_so_far: int
    q_incremental: float
    q_static_rerun: Optional[float] = None
    elapsed_incremental_s: float = 0.0
    elapsed_static_s: Optional[float] = None


@dataclass
class ExperimentReport:
    rows: List[CheckpointRow]
    op_stats: OpStats
    config: Dict[str, object] = field(default_factory=dict)
    initial_passes: int = 0

    @property
    def final(self) -> CheckpointRow:
        return self.rows[-1]

    def to_csv(self) -> str:
        buf = io.StringIO()
        cfg = " ".join(f"{k}={v}" for k, v in self.config.items())
        buf.write(f"# {REPORT_VERSION} {cfg}\n")
        buf.write(",".join(REPORT_COLUMNS) + "\n")
        for r in self.rows:
            buf.write(
                ",".join(
                    (
                        str(r.subset_index),
                        str(r.edges_so_far),
                        _num(r.q_incremental),
                        _num(r.q_static_rerun),
                        _num(r.elapsed_incremental_s),
                        _num(r.elapsed_static_s),
                    )
                )
                + "\n"
            )
        if self.op_stats.total:
            ops = " ".join(f"{k}={v}" for k, v in self.op_stats.counts().items())
            types = " ".join(f"{k}={v}" for k, v in self.op_stats.type_counts().items())
            buf.write(f"# operations {ops}\n# edge_types {types}\n")
        return buf.getvalue()


def _num(x: Optional[float]) -> str:
    return "" if x is None else f"{x:.12g}"


def run_experiment(
    events: Sequence[EdgeEvent],
    *,
    ratio: float = 0.5,
    subsets: int = 10,
    seed: int = 0,
    mode: DecisionMode = DecisionMode.PAPER,
    threshold: float = 1e-6,
    with_static_rerun: bool = False,
    shuffle: bool = True,
    journal: Optional[IO[str]] = None,
) -> ExperimentReport:
    mode = DecisionMode(mode)
    plan = split_stream(events, ratio, subsets, seed, shuffle=shuffle)
    config = {
        "seed": seed,
        "ratio": ratio,
        "subsets": subsets,
        "mode": mode.value,
        "threshold": threshold,
        "shuffle": int(shuffle),
        "static_rerun": "cold" if with_static_rerun else "off",
    }
    lv_config = louvain.LouvainConfig(gain_threshold=threshold, node_order_seed=seed)

    graph = Graph()
    for e in plan.initial:
        graph.add_or_increment_edge(e.source, e.target, e.weight)
    passes = 0
    if graph.node_count:
        res = louvain.run(graph, lv_config)
        partition, passes = res.partition, res.passes
    else:
        partition = Partition()

    tracker = IncrementalTracker(graph, partition, mode, journal)
    q0 = modularity(graph, partition)
    rows = [
        CheckpointRow(
            0,
            len(plan.initial),
            q0,
            q0 if with_static_rerun else None,
            0.0,
            0.0 if with_static_rerun else None,
        )
    ]
    elapsed_inc = 0.0
    elapsed_static = 0.0
    edges = len(plan.initial)
    for k, block in enumerate(plan.subsets, 1):
        t0 = time.perf_counter()
        tracker.apply_many(block)
        elapsed_inc += time.perf_counter() - t0
        edges += len(block)
        q_inc = modularity(graph, partition)
        q_static = None
        if with_static_rerun:
            if graph.node_count:
                t0 = time.perf_counter()
                q_static = louvain.run(graph, lv_config).q
                elapsed_static += time.perf_counter() - t0
            else:
                q_static = 0.0
        rows.append(
            CheckpointRow(
                k,
                edges,
                q_inc,
                q_static,
                elapsed_inc,
                elapsed_static if with_static_rerun else None,
            )
        )
    return ExperimentReport(rows, tracker.op_stats, config, passes)


def read_report_csv(text: str) -> List[Dict[str, Optional[float]]]:
    """Parse the data rows of a report CSV back into dicts."""
    out = []
    header = None
    for line in text.splitlines():
        if not line or line.startswith("#"):
            continue
        cells = line.split(",")
        if header is None:
            header = cells
            continue
        out.append({h: (float(c) if c else None) for h, c in zip(header, cells)})
    return out


def read_journal(lines: Iterable[str]) -> OpStats:
    """Rebuild operation statistics from journal lines."""
    stats = OpStats()
    for line in lines:
        if not line.strip() or line.startswith("#"):
            continue
        f = line.rstrip("\n").split("\t")
        if len(f) < 5:
            continue
        stats.record(EdgeType(f[3]), Operation(f[4]))
    if stats.total == 0:
        raise NoEventsProcessed("journal contains no events")
    return stats


_DATASET_FILES = {
    "wiki-Vote": ("wiki-Vote.txt", "wiki-Vote.txt.gz"),
    "Enron": ("Email-Enron.txt", "Email-Enron.txt.gz", "email-Enron.txt", "email-Enron.txt.gz"),
    "cit-HepTh": ("Cit-HepTh.txt", "Cit-HepTh.txt.gz", "cit-HepTh.txt", "cit-HepTh.txt.gz"),
}


def locate_dataset(name: str, extra_dirs: Iterable[os.PathLike] = ()) -> Optional[Path]:
    """Find a SNAP dataset file on disk.

    Looks in ``$INCRCOMM_DATA``, ``./data`` and ``extra_dirs``; returns None
    if nothing matches.
    """
    dirs: List[Path] = []
    env = os.environ.get("INCRCOMM_DATA")
    if env:
        dirs.extend(Path(p) for p in env.split(os.pathsep) if p)
    dirs.append(Path.cwd() / "data")
    dirs.extend(Path(d) for d in extra_dirs)
    for d in dirs:
        for fname in _DATASET_FILES.get(name, (name,)):
            p = d / fname
            if p.is_file():
                return p
    return None
