"""Streaming modularity-based community detection.

A static two-phase optimiser builds the starting partition; each later
edge is then classified and absorbed with O(1) bookkeeping, except for the
occasional community merge.
"""

from .errors import *  # noqa: F401,F403
from .graph import EdgeOutcome, Graph
from .harness import ExperimentReport, run_experiment
from .incremental import (
    AppliedOp,
    DecisionMode,
    EdgeType,
    IncrementalTracker,
    Operation,
    OpStats,
    apply_edge,
    classify,
    decision_gain_cross,
    should_merge,
)
from .ingest import EdgeEvent, StreamPlan, parse_edge_list, read_edge_list, split_stream, symmetrize
from .louvain import LouvainConfig, LouvainResult
from .louvain import run as run_louvain
from .partition import (
    Partition,
    gain_insert,
    gain_remove,
    modularity,
    modularity_fractions,
    modularity_pairwise,
)

__version__ = "0.1.0"
