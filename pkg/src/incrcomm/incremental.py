"""Edge-by-edge community tracking.

Each arriving edge is classified by whether its endpoints are already in
the graph and whether they share a community:

============== =====================================================
InnerCommunity both known, same community -> keep
CrossCommunity both known, different      -> keep or merge (gain test)
HalfNew        exactly one known           -> new node joins its neighbour
New            neither known               -> the pair forms a community
============== =====================================================

Everything except a merge costs O(1) bookkeeping plus one adjacency
update. The merge test reads the graph total and the two communities'
degree sums *before* the edge is inserted.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Optional, TextIO, Tuple

from .errors import NoEventsProcessed, NonPositiveWeight, SelfLoopRejected
from .graph import EdgeOutcome, Graph
from .ingest import EdgeEvent
from .partition import Partition, cross_weight

__all__ = [
    "EdgeType",
    "Operation",
    "DecisionMode",
    "AppliedOp",
    "OpStats",
    "classify",
    "should_merge",
    "decision_gain_cross",
    "apply_edge",
    "IncrementalTracker",
    "ALLOWED_OPERATIONS",
]


class EdgeType(enum.Enum):
    INNER = "InnerCommunity"
    CROSS = "CrossCommunity"
    HALF_NEW = "HalfNew"
    NEW = "New"


class Operation(enum.Enum):
    KEEP = "Keep"
    MERGE = "Merge"
    ASSIGN = "AssignToExisting"
    CREATE = "CreateNew"


class DecisionMode(enum.Enum):
    """How cross-community edges are judged.

    ``PAPER`` applies the closed-form merge inequality as published, which
    ignores weight already running between the two communities and is O(1).
    ``EXACT`` compares the true modularity of both outcomes, scanning the
    smaller community for existing cross weight.
    """

    PAPER = "paper"
    EXACT = "exact"


# operations each edge type may legally produce
ALLOWED_OPERATIONS: Dict[EdgeType, FrozenSet[Operation]] = {
    EdgeType.INNER: frozenset({Operation.KEEP}),
    EdgeType.CROSS: frozenset({Operation.KEEP, Operation.MERGE}),
    EdgeType.HALF_NEW: frozenset({Operation.ASSIGN}),
    EdgeType.NEW: frozenset({Operation.CREATE}),
}


@dataclass(frozen=True)
class AppliedOp:
    """What happened to one edge.

    ``delta_q_keep`` is the modularity change of the structure-preserving
    candidate (keep for inner/cross edges, assign-to-neighbour for half-new
    edges, create for new edges); ``delta_q_alt`` is that of the competing
    candidate, or None when there is none cheap to evaluate.
    """

    edge: EdgeEvent
    edge_type: EdgeType
    operation: Operation
    delta_q_keep: Optional[float]
    delta_q_alt: Optional[float]
    touched: FrozenSet[int] = frozenset()

    def journal_line(self) -> str:
        e = self.edge
        fmt = lambda x: "" if x is None else repr(x)  # noqa: E731
        touched = ",".join(str(c) for c in sorted(self.touched))
        return "\t".join(
            (
                str(e.source),
                str(e.target),
                repr(float(e.weight)),
                self.edge_type.value,
                self.operation.value,
                fmt(self.delta_q_keep),
                fmt(self.delta_q_alt),
                touched,
            )
        )


JOURNAL_HEADER = "# incrcomm-journal v1\tsource\ttarget\tweight\tedge_type\toperation\tdq_keep\tdq_alt\ttouched\n"


@dataclass
class OpStats:
    by_operation: Counter = field(default_factory=Counter)
    by_edge_type: Counter = field(default_factory=Counter)

    @property
    def total(self) -> int:
        return sum(self.by_operation.values())

    def record(self, edge_type: EdgeType, op: Operation) -> None:
        self.by_operation[op] += 1
        self.by_edge_type[edge_type] += 1

    def counts(self) -> Dict[str, int]:
        return {op.value: self.by_operation.get(op, 0) for op in Operation}

    def type_counts(self) -> Dict[str, int]:
        return {t.value: self.by_edge_type.get(t, 0) for t in EdgeType}

    def percentages(self) -> Dict[str, float]:
        n = self.total
        if n == 0:
            raise NoEventsProcessed("no events processed")
        return {k: 100.0 * v / n for k, v in self.counts().items()}

    def fraction(self, op: Operation) -> float:
        n = self.total
        if n == 0:
            raise NoEventsProcessed("no events processed")
        return self.by_operation.get(op, 0) / n

    def format_table(self) -> str:
        n = self.total
        if n == 0:
            raise NoEventsProcessed("no events processed")
        lines = ["kind\tname\tcount\tpercent"]
        for k, v in self.counts().items():
            lines.append(f"operation\t{k}\t{v}\t{100.0 * v / n:.3f}")
        for k, v in self.type_counts().items():
            lines.append(f"edge_type\t{k}\t{v}\t{100.0 * v / n:.3f}")
        lines.append(f"total\t-\t{n}\t100.000")
        return "\n".join(lines)


def classify(graph: Graph, partition: Partition, e: EdgeEvent) -> EdgeType:
    u_known = graph.contains_node(e.source)
    v_known = graph.contains_node(e.target)
    if u_known and v_known:
        if partition.assignment.get(e.source) == partition.assignment.get(e.target):
            return EdgeType.INNER
        return EdgeType.CROSS
    if u_known or v_known:
        return EdgeType.HALF_NEW
    return EdgeType.NEW


def should_merge(m_before: float, w: float, sigma_tot_i: float, sigma_tot_j: float) -> bool:
    """Published merge test: ``w(2m + 2w) > 2(tot_i + w)(tot_j + w)``.

    All quantities are taken before the edge is added.
    """
    return w * (2.0 * m_before + 2.0 * w) > 2.0 * (sigma_tot_i + w) * (sigma_tot_j + w)


def decision_gain_cross(
    m_before: float,
    w: float,
    sigma_tot_i: float,
    sigma_tot_j: float,
    sum_in: float,
    sum_tot_sq: float,
    cross_before: float = 0.0,
) -> Tuple[float, float]:
    """Modularity change of keeping vs merging for a cross-community edge.

    ``sum_in`` and ``sum_tot_sq`` are the partition-wide totals of the
    internal sums and squared degree sums before the edge. ``cross_before``
    is weight already linking the two communities; pass 0 to get the
    published closed form.
    """
    q0 = _q(sum_in, sum_tot_sq, 2.0 * m_before)
    two_m = 2.0 * m_before + 2.0 * w
    rest = sum_tot_sq - sigma_tot_i**2 - sigma_tot_j**2
    q_keep = _q(sum_in, rest + (sigma_tot_i + w) ** 2 + (sigma_tot_j + w) ** 2, two_m)
    q_merge = _q(
        sum_in + 2.0 * w + 2.0 * cross_before,
        rest + (sigma_tot_i + sigma_tot_j + 2.0 * w) ** 2,
        two_m,
    )
    return q_keep - q0, q_merge - q0


def _q(sum_in: float, sum_sq: float, two_m: float) -> float:
    if two_m <= 0:
        return 0.0
    return sum_in / two_m - sum_sq / (two_m * two_m)


def apply_edge(
    graph: Graph,
    partition: Partition,
    e: EdgeEvent,
    mode: DecisionMode = DecisionMode.PAPER,
) -> AppliedOp:
    """Insert one edge into ``graph`` and update ``partition`` accordingly.

    ``e`` may be an :class:`EdgeEvent` or a plain ``(u, v, w)`` tuple.
    """
    if type(e) is not EdgeEvent:
        e = EdgeEvent(*e)
    u, v, w = e
    if not w > 0 or w != w or w == float("inf"):
        raise NonPositiveWeight(f"edge ({u}, {v}) has weight {w!r}")
    if u == v:
        raise SelfLoopRejected(f"self-loop on node {u}")

    etype = classify(graph, partition, e)
    m = graph.total_weight()
    two_m_new = 2.0 * m + 2.0 * w
    s_in = partition.sum_sigma_in
    s_sq = partition.sum_sigma_tot_sq
    q0 = _q(s_in, s_sq, 2.0 * m)

    if etype is EdgeType.INNER:
        c = partition.assignment[u]
        t = partition.sigma_tot[c]
        dq = _q(s_in + 2.0 * w, s_sq - t * t + (t + 2.0 * w) ** 2, two_m_new) - q0
        if graph.add_or_increment_edge(u, v, w) is not EdgeOutcome.IGNORED:
            partition.note_edge_added(u, v, w)
        else:
            dq = 0.0
        return AppliedOp(e, etype, Operation.KEEP, dq, None, frozenset({c}))

    if etype is EdgeType.CROSS:
        ci = partition.assignment[u]
        cj = partition.assignment[v]
        ti = partition.sigma_tot[ci]
        tj = partition.sigma_tot[cj]
        if mode is DecisionMode.EXACT:
            a, b = (ci, cj) if partition.size(ci) <= partition.size(cj) else (cj, ci)
            existing = cross_weight(graph, partition.assignment, partition.members[a], b)
        else:
            existing = 0.0
        dq_keep, dq_merge = decision_gain_cross(m, w, ti, tj, s_in, s_sq, existing)
        if mode is DecisionMode.EXACT:
            merge = dq_merge > dq_keep
        else:
            merge = should_merge(m, w, ti, tj)
        if graph.add_or_increment_edge(u, v, w) is EdgeOutcome.IGNORED:
            return AppliedOp(e, etype, Operation.KEEP, 0.0, None, frozenset({ci, cj}))
        partition.note_edge_added(u, v, w)
        if merge:
            partition.merge_communities(graph, ci, cj)
            op = Operation.MERGE
        else:
            op = Operation.KEEP
        return AppliedOp(e, etype, op, dq_keep, dq_merge, frozenset({ci, cj}))

    if etype is EdgeType.HALF_NEW:
        old, new = (u, v) if graph.contains_node(u) else (v, u)
        c = partition.assignment[old]
        t = partition.sigma_tot[c]
        dq_assign = _q(s_in + 2.0 * w, s_sq - t * t + (t + 2.0 * w) ** 2, two_m_new) - q0
        dq_create = _q(s_in, s_sq - t * t + (t + w) ** 2 + w * w, two_m_new) - q0
        graph.add_or_increment_edge(u, v, w)
        partition.note_edge_added(u, v, w)
        partition.assign_new_node(graph, new, c)
        return AppliedOp(e, etype, Operation.ASSIGN, dq_assign, dq_create, frozenset({c}))

    dq_create = _q(s_in + 2.0 * w, s_sq + 4.0 * w * w, two_m_new) - q0
    graph.add_or_increment_edge(u, v, w)
    c = partition.create_community(graph, (u, v))
    return AppliedOp(e, etype, Operation.CREATE, dq_create, None, frozenset({c}))


class IncrementalTracker:
    """Owns a graph/partition pair and feeds it edges one at a time.

    Optionally writes one journal line per event to ``journal``.
    """

    def __init__(
        self,
        graph: Optional[Graph] = None,
        partition: Optional[Partition] = None,
        mode: DecisionMode = DecisionMode.PAPER,
        journal: Optional[TextIO] = None,
    ) -> None:
        self.graph = graph if graph is not None else Graph()
        self.partition = partition if partition is not None else Partition()
        self.mode = DecisionMode(mode)
        self.journal = journal
        self._stats = OpStats()
        if journal is not None:
            journal.write(JOURNAL_HEADER)

    def classify(self, e: EdgeEvent) -> EdgeType:
        return classify(self.graph, self.partition, e)

    def apply(self, e: EdgeEvent) -> AppliedOp:
        op = apply_edge(self.graph, self.partition, e, self.mode)
        self._stats.record(op.edge_type, op.operation)
        if self.journal is not None:
            self.journal.write(op.journal_line() + "\n")
        return op

    def apply_many(self, events) -> None:
        """Apply events without building AppliedOp results for the caller."""
        graph, partition, mode = self.graph, self.partition, self.mode
        record = self._stats.record
        journal = self.journal
        for e in events:
            op = apply_edge(graph, partition, e, mode)
            record(op.edge_type, op.operation)
            if journal is not None:
                journal.write(op.journal_line() + "\n")

    @property
    def q(self) -> float:
        """Modularity from the running sums."""
        return self.partition.tracked_modularity(self.graph)

    @property
    def op_stats(self) -> OpStats:
        """Counters so far; may be empty."""
        return self._stats

    def stats(self) -> OpStats:
        if self._stats.total == 0:
            raise NoEventsProcessed("no events processed")
        return self._stats

    @property
    def events_processed(self) -> int:
        return self._stats.total
