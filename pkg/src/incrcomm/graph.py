"""Mutable weighted undirected graph with running degree and weight totals.

Parallel edges are merged by summing their weights. A self-loop of weight
``w`` is stored once in the adjacency and contributes ``2w`` to the owning
node's degree, so the degree sum is always exactly twice the total weight.
"""

from __future__ import annotations

import enum
from typing import Dict, Iterator, List, Optional, Tuple

from .errors import NonPositiveWeight, SelfLoopRejected, UnknownNode

__all__ = ["EdgeOutcome", "Graph"]


class EdgeOutcome(enum.Enum):
    CREATED = "created"
    INCREMENTED = "incremented"
    # only produced when the graph was built with ignore_duplicates=True
    IGNORED = "ignored"


class Graph:
    """Weighted undirected graph keyed by non-negative integer node ids.

    Node ids may be sparse; they are used directly as dictionary keys.
    Nodes come into existence through edge insertion (or :meth:`add_node`).

    Parameters
    ----------
    ignore_duplicates : bool
        When True, inserting an edge that already exists leaves its weight
        untouched and reports :attr:`EdgeOutcome.IGNORED`.
    """

    __slots__ = ("_adj", "_deg", "_m", "_edges", "ignore_duplicates")

    def __init__(self, *, ignore_duplicates: bool = False) -> None:
        self._adj: Dict[int, Dict[int, float]] = {}
        self._deg: Dict[int, float] = {}
        self._m = 0.0
        self._edges = 0
        self.ignore_duplicates = ignore_duplicates

    @classmethod
    def from_edges(cls, edges, *, allow_self_loops: bool = False, **kwargs) -> "Graph":
        """Build a graph from ``(u, v, w)`` triples or objects with
        ``source``/``target``/``weight`` attributes."""
        g = cls(**kwargs)
        for e in edges:
            if hasattr(e, "source"):
                u, v, w = e.source, e.target, e.weight
            else:
                u, v, w = e
            g.add_or_increment_edge(u, v, w, allow_self_loop=allow_self_loops)
        return g

    # -- mutation -------------------------------------------------------

    def add_node(self, u: int) -> None:
        """Register ``u`` without edges. No-op if it already exists."""
        if u not in self._adj:
            self._adj[u] = {}
            self._deg[u] = 0.0

    def add_or_increment_edge(
        self, u: int, v: int, w: float = 1.0, *, allow_self_loop: bool = False
    ) -> EdgeOutcome:
        """Add weight ``w`` to the edge ``{u, v}``, creating it if needed.

        Self-loops are refused unless ``allow_self_loop`` is set; only graph
        aggregation needs them.
        """
        if not w > 0 or w != w or w == float("inf"):
            raise NonPositiveWeight(f"edge ({u}, {v}) has weight {w!r}; must be finite and > 0")
        if u == v and not allow_self_loop:
            raise SelfLoopRejected(f"self-loop on node {u}")
        adj = self._adj
        if u not in adj:
            adj[u] = {}
            self._deg[u] = 0.0
        if v not in adj:
            adj[v] = {}
            self._deg[v] = 0.0
        nbrs = adj[u]
        if v in nbrs:
            if self.ignore_duplicates:
                return EdgeOutcome.IGNORED
            outcome = EdgeOutcome.INCREMENTED
            nbrs[v] += w
            if u != v:
                adj[v][u] += w
        else:
            outcome = EdgeOutcome.CREATED
            self._edges += 1
            nbrs[v] = w
            if u != v:
                adj[v][u] = w
        if u == v:
            self._deg[u] += 2.0 * w
        else:
            self._deg[u] += w
            self._deg[v] += w
        self._m += w
        return outcome

    # -- queries --------------------------------------------------------

    def weighted_degree(self, u: int) -> float:
        try:
            return self._deg[u]
        except KeyError:
            raise UnknownNode(u) from None

    def neighbors(self, u: int) -> List[Tuple[int, float]]:
        """Incident edges of ``u`` as ``(neighbor, weight)`` pairs.

        A self-loop appears once, as ``(u, w_uu)``.
        """
        return list(self.adjacency(u).items())

    def adjacency(self, u: int) -> Dict[int, float]:
        """The live neighbor map of ``u``. Callers must not mutate it."""
        try:
            return self._adj[u]
        except KeyError:
            raise UnknownNode(u) from None

    def edge_weight(self, u: int, v: int) -> Optional[float]:
        nbrs = self._adj.get(u)
        if nbrs is None:
            return None
        return nbrs.get(v)

    def self_loop_weight(self, u: int) -> float:
        return self._adj.get(u, {}).get(u, 0.0)

    def total_weight(self) -> float:
        return self._m

    def contains_node(self, u: int) -> bool:
        return u in self._adj

    __contains__ = contains_node

    @property
    def node_count(self) -> int:
        return len(self._adj)

    @property
    def edge_count(self) -> int:
        return self._edges

    def __len__(self) -> int:
        return len(self._adj)

    def nodes(self) -> Iterator[int]:
        """Nodes in insertion order."""
        return iter(self._adj)

    def edges(self) -> Iterator[Tuple[int, int, float]]:
        """Each stored edge once as ``(u, v, w)``; self-loops as ``(u, u, w)``."""
        seen = set()
        for u, nbrs in self._adj.items():
            for v, w in nbrs.items():
                if v == u or v not in seen:
                    yield u, v, w
            seen.add(u)

    def degrees(self) -> Dict[int, float]:
        return dict(self._deg)

    def copy(self) -> "Graph":
        g = Graph(ignore_duplicates=self.ignore_duplicates)
        g._adj = {u: dict(nbrs) for u, nbrs in self._adj.items()}
        g._deg = dict(self._deg)
        g._m = self._m
        g._edges = self._edges
        return g

    def __repr__(self) -> str:
        return f"Graph(nodes={self.node_count}, edges={self.edge_count}, m={self._m:g})"
