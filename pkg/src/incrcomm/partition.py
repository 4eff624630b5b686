"""Community assignment with running per-community weight sums.

For every community ``c`` the partition keeps

* ``sigma_in[c]``  - internal weight in ordered-pair form: each internal
  edge counted twice, each member self-loop counted twice;
* ``sigma_tot[c]`` - sum of the weighted degrees of the members.

Two global running totals (sum of ``sigma_in`` and sum of ``sigma_tot**2``)
make the current modularity available in O(1).
"""

from __future__ import annotations

from typing import Dict, Iterable, Mapping, Set, TextIO, Tuple, Union

from .errors import (
    AlreadyAssigned,
    SelfMerge,
    UnassignedNode,
    UnknownCommunity,
    UnknownNode,
    UnknownNodeInPartitionFile,
)
from .graph import Graph

__all__ = [
    "Partition",
    "modularity",
    "modularity_pairwise",
    "modularity_fractions",
    "modularity_from_sums",
    "community_sums",
    "cross_weight",
    "relabel",
    "insertion_gain",
    "gain_insert",
    "gain_remove",
    "neighbor_community_weights",
    "read_partition",
    "write_partition",
]

AssignmentLike = Union["Partition", Mapping[int, int]]


class Partition:
    """Node -> community map plus incrementally maintained weight sums.

    Community ids are handed out from a counter and never reused once a
    community empties out.
    """

    def __init__(self) -> None:
        self.assignment: Dict[int, int] = {}
        self.sigma_in: Dict[int, float] = {}
        self.sigma_tot: Dict[int, float] = {}
        self.members: Dict[int, Set[int]] = {}
        self._next_id = 0
        self._sum_in = 0.0
        self._sum_sq = 0.0

    # -- construction ---------------------------------------------------

    @classmethod
    def singletons(cls, graph: Graph) -> "Partition":
        p = cls()
        for u in graph.nodes():
            p.create_community(graph, (u,))
        return p

    @classmethod
    def from_assignment(cls, graph: Graph, mapping: Mapping[int, int]) -> "Partition":
        """Build a partition whose community ids are the labels in ``mapping``.

        Sums are computed from scratch over ``graph``. Nodes of ``graph``
        missing from ``mapping`` stay unassigned.
        """
        p = cls()
        for u, c in mapping.items():
            if u not in graph:
                raise UnknownNode(u)
            p.assignment[u] = c
            p.members.setdefault(c, set()).add(u)
        s_in, s_tot = community_sums(graph, p.assignment)
        for c in p.members:
            p.sigma_in[c] = s_in.get(c, 0.0)
            p.sigma_tot[c] = s_tot.get(c, 0.0)
        p._next_id = max(p.members, default=-1) + 1
        p._resum()
        return p

    def copy(self) -> "Partition":
        p = Partition()
        p.assignment = dict(self.assignment)
        p.sigma_in = dict(self.sigma_in)
        p.sigma_tot = dict(self.sigma_tot)
        p.members = {c: set(s) for c, s in self.members.items()}
        p._next_id = self._next_id
        p._sum_in = self._sum_in
        p._sum_sq = self._sum_sq
        return p

    # -- queries --------------------------------------------------------

    def community_of(self, u: int) -> int:
        try:
            return self.assignment[u]
        except KeyError:
            raise UnassignedNode(u) from None

    def is_assigned(self, u: int) -> bool:
        return u in self.assignment

    def has_community(self, c: int) -> bool:
        return c in self.members

    @property
    def member_count(self) -> Dict[int, int]:
        return {c: len(s) for c, s in self.members.items()}

    def size(self, c: int) -> int:
        return len(self._members(c))

    def communities(self) -> Dict[int, Set[int]]:
        return {c: set(s) for c, s in self.members.items()}

    def groups(self) -> Set[frozenset]:
        """Communities as a set of frozensets; handy for label-free comparison."""
        return {frozenset(s) for s in self.members.values()}

    def __len__(self) -> int:
        return len(self.members)

    def tracked_modularity(self, graph_or_m: Union[Graph, float]) -> float:
        """Modularity from the running sums, O(1)."""
        m = graph_or_m.total_weight() if isinstance(graph_or_m, Graph) else graph_or_m
        if m <= 0:
            return 0.0
        two_m = 2.0 * m
        return self._sum_in / two_m - self._sum_sq / (two_m * two_m)

    @property
    def sum_sigma_in(self) -> float:
        return self._sum_in

    @property
    def sum_sigma_tot_sq(self) -> float:
        return self._sum_sq

    # -- mutation -------------------------------------------------------

    def note_edge_added(self, u: int, v: int, w: float) -> None:
        """Account for an edge of weight ``w`` just added to the graph.

        Only endpoints that are already assigned are touched; an unassigned
        endpoint's degree is picked up when it is assigned.
        """
        cu = self.assignment.get(u)
        if u == v:
            if cu is not None:
                self._update(cu, 2.0 * w, 2.0 * w)
            return
        cv = self.assignment.get(v)
        if cu is not None and cu == cv:
            self._update(cu, 2.0 * w, 2.0 * w)
            return
        if cu is not None:
            self._update(cu, 0.0, w)
        if cv is not None:
            self._update(cv, 0.0, w)

    def create_community(self, graph: Graph, seeds: Iterable[int]) -> int:
        seeds = list(seeds)
        for u in seeds:
            if u in self.assignment:
                raise AlreadyAssigned(u)
        c = self._next_id
        self._next_id += 1
        self.members[c] = set()
        self.sigma_in[c] = 0.0
        self.sigma_tot[c] = 0.0
        for u in seeds:
            self._insert(graph, u, c)
        return c

    def assign_new_node(self, graph: Graph, i: int, c: int) -> None:
        if i in self.assignment:
            raise AlreadyAssigned(i)
        self._members(c)
        self._insert(graph, i, c)

    def move_node(self, graph: Graph, i: int, target: int) -> None:
        source = self.community_of(i)
        self._members(target)
        if source == target:
            return
        self._extract(graph, i)
        self._insert(graph, i, target)

    def merge_communities(self, graph: Graph, a: int, b: int) -> int:
        """Fold the smaller of ``a``/``b`` into the larger; return the survivor.

        Ties on member count keep the smaller id. Costs one scan over the
        smaller side's adjacency.
        """
        if a == b:
            raise SelfMerge(a)
        ma, mb = self._members(a), self._members(b)
        if len(ma) > len(mb) or (len(ma) == len(mb) and a < b):
            keep, gone, moving = a, b, mb
        else:
            keep, gone, moving = b, a, ma
        cross = cross_weight(graph, self.assignment, moving, keep)
        d_in = self.sigma_in[gone] + 2.0 * cross
        d_tot = self.sigma_tot[gone]
        assignment = self.assignment
        survivors = self.members[keep]
        for u in moving:
            assignment[u] = keep
        survivors |= moving
        self._retire(gone)
        self._update(keep, d_in, d_tot)
        return keep

    # -- internals ------------------------------------------------------

    def _members(self, c: int) -> Set[int]:
        try:
            return self.members[c]
        except KeyError:
            raise UnknownCommunity(c) from None

    def _update(self, c: int, d_in: float, d_tot: float) -> None:
        old_tot = self.sigma_tot[c]
        new_tot = old_tot + d_tot
        self.sigma_in[c] += d_in
        self.sigma_tot[c] = new_tot
        self._sum_in += d_in
        self._sum_sq += new_tot * new_tot - old_tot * old_tot

    def _insert(self, graph: Graph, i: int, c: int) -> None:
        k_in = 0.0
        assignment = self.assignment
        for j, w in graph.adjacency(i).items():
            if j != i and assignment.get(j) == c:
                k_in += w
        self_w = graph.self_loop_weight(i)
        assignment[i] = c
        self.members[c].add(i)
        self._update(c, 2.0 * (k_in + self_w), graph.weighted_degree(i))

    def _extract(self, graph: Graph, i: int) -> None:
        c = self.assignment.pop(i)
        k_in = 0.0
        assignment = self.assignment
        for j, w in graph.adjacency(i).items():
            if j != i and assignment.get(j) == c:
                k_in += w
        self_w = graph.self_loop_weight(i)
        self.members[c].discard(i)
        if not self.members[c]:
            self._retire(c)
        else:
            self._update(c, -2.0 * (k_in + self_w), -graph.weighted_degree(i))

    def _retire(self, c: int) -> None:
        tot = self.sigma_tot.pop(c)
        self._sum_in -= self.sigma_in.pop(c)
        self._sum_sq -= tot * tot
        del self.members[c]

    def _resum(self) -> None:
        self._sum_in = sum(self.sigma_in.values())
        self._sum_sq = sum(t * t for t in self.sigma_tot.values())

    def __repr__(self) -> str:
        return f"Partition(nodes={len(self.assignment)}, communities={len(self.members)})"


# -- modularity ----------------------------------------------------------


def _assignment_of(partition: AssignmentLike) -> Mapping[int, int]:
    return partition.assignment if isinstance(partition, Partition) else partition


def _check_assigned(graph: Graph, assignment: Mapping[int, int]) -> None:
    for u in graph.nodes():
        if u not in assignment:
            raise UnassignedNode(u)


def community_sums(
    graph: Graph, assignment: Mapping[int, int]
) -> Tuple[Dict[int, float], Dict[int, float]]:
    """From-scratch ``(sigma_in, sigma_tot)`` for every community label.

    Communities appear in ``sigma_in`` only if they have internal weight.
    """
    s_in: Dict[int, float] = {}
    s_tot: Dict[int, float] = {}
    for u in graph.nodes():
        c = assignment.get(u)
        if c is None:
            continue
        s_tot[c] = s_tot.get(c, 0.0) + graph.weighted_degree(u)
    for u, v, w in graph.edges():
        cu = assignment.get(u)
        if cu is not None and cu == assignment.get(v):
            s_in[cu] = s_in.get(cu, 0.0) + 2.0 * w
    return s_in, s_tot


def modularity_from_sums(
    sigma_in: Mapping[int, float], sigma_tot: Mapping[int, float], m: float
) -> float:
    if m <= 0:
        return 0.0
    two_m = 2.0 * m
    total = 0.0
    for c, tot in sigma_tot.items():
        total += sigma_in.get(c, 0.0) - tot * tot / two_m
    return total / two_m


def modularity(graph: Graph, partition: AssignmentLike) -> float:
    """Modularity of ``partition`` recomputed from the graph.

    Uses the per-community form ``(1/2m) * sum_c (in_c - tot_c**2 / 2m)``.
    A graph with no weight has modularity 0.
    """
    assignment = _assignment_of(partition)
    _check_assigned(graph, assignment)
    s_in, s_tot = community_sums(graph, assignment)
    return modularity_from_sums(s_in, s_tot, graph.total_weight())


def modularity_pairwise(graph: Graph, partition: AssignmentLike) -> float:
    """Modularity by the node-pair double sum. O(n^2); meant for checking."""
    assignment = _assignment_of(partition)
    _check_assigned(graph, assignment)
    m = graph.total_weight()
    if m <= 0:
        return 0.0
    two_m = 2.0 * m
    nodes = list(graph.nodes())
    deg = graph.degrees()
    total = 0.0
    for i in nodes:
        ci = assignment[i]
        adj = graph.adjacency(i)
        ki = deg[i]
        for j in nodes:
            if assignment[j] != ci:
                continue
            a_ij = adj.get(j, 0.0)
            if i == j:
                a_ij *= 2.0
            total += a_ij - ki * deg[j] / two_m
    return total / two_m


def modularity_fractions(graph: Graph, partition: AssignmentLike) -> float:
    """Modularity as ``sum_c (e_cc - a_c**2)`` with edge-end fractions."""
    assignment = _assignment_of(partition)
    _check_assigned(graph, assignment)
    m = graph.total_weight()
    if m <= 0:
        return 0.0
    two_m = 2.0 * m
    e: Dict[int, float] = {}
    a: Dict[int, float] = {}
    for u in graph.nodes():
        c = assignment[u]
        a[c] = a.get(c, 0.0) + graph.weighted_degree(u) / two_m
        for v, w in graph.adjacency(u).items():
            if assignment[v] == c:
                # ordered pairs (u, v) and (v, u) are both visited; self-loop A_uu = 2w
                e[c] = e.get(c, 0.0) + (2.0 * w if u == v else w) / two_m
    return sum(e.get(c, 0.0) - a_c * a_c for c, a_c in a.items())


# -- gains ---------------------------------------------------------------


def insertion_gain(k_i_in: float, sigma_tot: float, k_i: float, m: float) -> float:
    """Modularity change from putting an isolated node into a community.

    ``(1/2m) * (2*k_i_in - sigma_tot*k_i/m)``, where ``sigma_tot`` excludes
    the node itself.
    """
    return (2.0 * k_i_in - sigma_tot * k_i / m) / (2.0 * m)


def neighbor_community_weights(
    graph: Graph, partition: Partition, i: int
) -> Dict[int, float]:
    """Weight from ``i`` to each adjacent community (self-loop excluded)."""
    out: Dict[int, float] = {}
    assignment = partition.assignment
    for j, w in graph.adjacency(i).items():
        if j == i:
            continue
        c = assignment.get(j)
        if c is not None:
            out[c] = out.get(c, 0.0) + w
    return out


def gain_insert(graph: Graph, partition: Partition, i: int, c: int) -> float:
    """Gain of moving ``i``, treated as isolated, into community ``c``.

    If ``i`` currently sits in ``c`` its own degree is taken out of
    ``sigma_tot`` first, so the value is the gain of putting it back.
    """
    if not partition.has_community(c):
        raise UnknownCommunity(c)
    m = graph.total_weight()
    k_i = graph.weighted_degree(i)
    assignment = partition.assignment
    k_in = 0.0
    for j, w in graph.adjacency(i).items():
        if j != i and assignment.get(j) == c:
            k_in += w
    tot = partition.sigma_tot[c]
    if assignment.get(i) == c:
        tot -= k_i
    return insertion_gain(k_in, tot, k_i, m)


def gain_remove(graph: Graph, partition: Partition, i: int) -> float:
    """Gain of pulling ``i`` out of its community into isolation."""
    c = partition.community_of(i)
    return -gain_insert(graph, partition, i, c)


def cross_weight(
    graph: Graph, assignment: Mapping[int, int], nodes: Iterable[int], other: int
) -> float:
    """Total weight of edges from ``nodes`` into community ``other``."""
    total = 0.0
    for u in nodes:
        for v, w in graph.adjacency(u).items():
            if assignment.get(v) == other and v != u:
                total += w
    return total


# -- export --------------------------------------------------------------


def write_partition(partition: AssignmentLike, fp: TextIO) -> None:
    """Write ``node<TAB>community`` lines sorted by node id."""
    assignment = _assignment_of(partition)
    for u in sorted(assignment):
        fp.write(f"{u}\t{assignment[u]}\n")


def read_partition(fp: TextIO) -> Dict[int, int]:
    """Parse a partition export; ``#`` lines and blank lines are skipped."""
    out: Dict[int, int] = {}
    for lineno, line in enumerate(fp, 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        parts = s.split()
        if len(parts) != 2:
            raise UnknownNodeInPartitionFile(f"line {lineno}: expected 'node<TAB>community', got {s!r}")
        try:
            u, c = int(parts[0]), int(parts[1])
        except ValueError:
            raise UnknownNodeInPartitionFile(f"line {lineno}: non-integer field in {s!r}") from None
        if u < 0 or c < 0:
            raise UnknownNodeInPartitionFile(f"line {lineno}: negative id in {s!r}")
        out[u] = c
    return out


def relabel(partition: AssignmentLike, graph: Graph) -> Dict[int, int]:
    """Assignment with communities renumbered 0.. by first member in graph order."""
    assignment = _assignment_of(partition)
    labels: Dict[int, int] = {}
    out: Dict[int, int] = {}
    for u in graph.nodes():
        c = assignment.get(u)
        if c is None:
            continue
        if c not in labels:
            labels[c] = len(labels)
        out[u] = labels[c]
    return out

