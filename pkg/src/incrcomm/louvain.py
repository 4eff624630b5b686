"""Static two-phase modularity optimisation (local moving + aggregation).

Used to build the starting partition that the incremental tracker then
maintains, and as the cold re-run baseline in experiments.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .errors import EmptyGraph
from .graph import Graph
from .partition import (
    Partition,
    insertion_gain,
    modularity,
    neighbor_community_weights,
    relabel,
)

__all__ = ["LouvainConfig", "LouvainResult", "local_move_phase", "aggregate", "run"]

# a move must beat staying put by more than this
MOVE_EPSILON = 1e-12


@dataclass(frozen=True)
class LouvainConfig:
    gain_threshold: float = 1e-6
    node_order_seed: Optional[int] = None
    max_passes: int = 20

    def __post_init__(self) -> None:
        if not self.gain_threshold >= 0:
            raise ValueError(f"gain_threshold must be >= 0, got {self.gain_threshold!r}")
        if self.max_passes < 1:
            raise ValueError(f"max_passes must be >= 1, got {self.max_passes!r}")


@dataclass
class LouvainResult:
    partition: Partition
    q: float
    passes: int
    # modularity of the flat partition after each pass
    history: List[float] = field(default_factory=list)

    def __iter__(self):
        return iter((self.partition, self.q, self.passes))


def local_move_phase(
    graph: Graph,
    partition: Partition,
    config: LouvainConfig = LouvainConfig(),
    rng: Optional[random.Random] = None,
) -> Tuple[bool, float]:
    """Greedy node moves until a full sweep changes nothing.

    Each node goes to the neighbouring community with the largest positive
    gain; ties keep the first candidate met. Returns ``(improved, q_gain)``.
    """
    m = graph.total_weight()
    if m <= 0:
        return False, 0.0
    order = list(graph.nodes())
    if rng is None and config.node_order_seed is not None:
        rng = random.Random(config.node_order_seed)
    if rng is not None:
        rng.shuffle(order)

    assignment = partition.assignment
    tot = partition.sigma_tot
    improved = False
    q_gain = 0.0
    while True:
        moves = 0
        for i in order:
            ci = assignment[i]
            k_i = graph.weighted_degree(i)
            weights = neighbor_community_weights(graph, partition, i)
            leave = -insertion_gain(weights.get(ci, 0.0), tot[ci] - k_i, k_i, m)
            best_c, best = ci, 0.0
            for c, k_c in weights.items():
                if c == ci:
                    continue
                g = leave + insertion_gain(k_c, tot[c], k_i, m)
                if g > best:
                    best_c, best = c, g
            if best_c != ci and best > MOVE_EPSILON:
                partition.move_node(graph, i, best_c)
                q_gain += best
                moves += 1
        if not moves:
            break
        improved = True
    return improved, q_gain


def aggregate(graph: Graph, partition: Partition) -> Tuple[Graph, Dict[int, int]]:
    """Collapse each community into one node.

    Coarse node ids are the community ids. Internal weight becomes a
    self-loop, so total weight and the modularity of the coarse singleton
    partition match the fine partition.
    """
    coarse = Graph()
    mapping: Dict[int, int] = {}
    assignment = partition.assignment
    for u in graph.nodes():
        c = assignment[u]
        mapping[u] = c
        coarse.add_node(c)
    for u, v, w in graph.edges():
        coarse.add_or_increment_edge(mapping[u], mapping[v], w, allow_self_loop=True)
    return coarse, mapping


def run(graph: Graph, config: LouvainConfig = LouvainConfig()) -> LouvainResult:
    """Iterate local moving and aggregation; return a flat partition.

    Stops when a pass gains less than ``config.gain_threshold``, makes no
    move, or ``config.max_passes`` is reached. Communities of the result
    are numbered 0.. in order of their first member in ``graph``.
    """
    if graph.node_count == 0:
        raise EmptyGraph("cannot partition an empty graph")
    rng = random.Random(config.node_order_seed) if config.node_order_seed is not None else None

    flat = {u: u for u in graph.nodes()}
    level = graph
    passes = 0
    history: List[float] = []
    while passes < config.max_passes:
        part = Partition.singletons(level)
        improved, gain = local_move_phase(level, part, config, rng)
        passes += 1
        if not improved:
            history.append(part.tracked_modularity(level))
            break
        coarse, cmap = aggregate(level, part)
        flat = {u: cmap[x] for u, x in flat.items()}
        level = coarse
        history.append(part.tracked_modularity(level))
        if gain < config.gain_threshold:
            break

    partition = Partition.from_assignment(graph, relabel(flat, graph))
    return LouvainResult(partition, modularity(graph, partition), passes, history)
