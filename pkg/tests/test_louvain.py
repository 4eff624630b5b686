import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from incrcomm.errors import EmptyGraph
from incrcomm.graph import Graph
from incrcomm.louvain import LouvainConfig, aggregate, local_move_phase, run
from incrcomm.partition import Partition, modularity

from conftest import SIX_NODE_A, planted_events
from oracles import best_partition, dense

TWO_TRIANGLES = [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0), (3, 4, 1.0), (4, 5, 1.0), (3, 5, 1.0)]


def test_local_move_two_triangles():
    g = Graph.from_edges(TWO_TRIANGLES)
    p = Partition.singletons(g)
    improved, gain = local_move_phase(g, p)
    assert improved
    assert p.groups() == {frozenset({0, 1, 2}), frozenset({3, 4, 5})}
    best, _ = best_partition(dense(TWO_TRIANGLES)[0])
    assert modularity(g, p) == pytest.approx(best, abs=1e-12)
    q_single = modularity(g, Partition.singletons(g))
    assert gain == pytest.approx(modularity(g, p) - q_single, abs=1e-12)


def test_local_move_fixed_point():
    g = Graph.from_edges(TWO_TRIANGLES)
    p = Partition.from_assignment(g, {0: 0, 1: 0, 2: 0, 3: 1, 4: 1, 5: 1})
    assert local_move_phase(g, p) == (False, 0.0)


def test_local_move_single_edge():
    g = Graph.from_edges([(0, 1, 1.0)])
    p = Partition.singletons(g)
    improved, gain = local_move_phase(g, p)
    assert improved and len(p) == 1
    assert gain == pytest.approx(0.5)


def test_aggregate_singletons_is_identity():
    edges = [(0, 1, 2.0), (1, 2, 1.0), (0, 2, 3.0)]
    g = Graph.from_edges(edges)
    p = Partition.singletons(g)
    coarse, cmap = aggregate(g, p)
    assert coarse.node_count == 3 and coarse.edge_count == 3
    for u, v, w in edges:
        assert coarse.edge_weight(cmap[u], cmap[v]) == w


def test_aggregate_two_triangles():
    g = Graph.from_edges(TWO_TRIANGLES)
    p = Partition.from_assignment(g, {0: 0, 1: 0, 2: 0, 3: 1, 4: 1, 5: 1})
    coarse, cmap = aggregate(g, p)
    assert coarse.node_count == 2
    assert coarse.edge_weight(0, 1) is None
    assert coarse.self_loop_weight(0) == 3.0 and coarse.self_loop_weight(1) == 3.0
    assert coarse.total_weight() == 6.0
    assert modularity(coarse, Partition.singletons(coarse)) == pytest.approx(modularity(g, p), abs=1e-12)


def test_aggregate_six_node_partition():
    g = Graph.from_edges(SIX_NODE_A)
    p = Partition.from_assignment(g, {1: 0, 2: 0, 3: 0, 4: 1, 5: 1, 6: 1})
    coarse, _ = aggregate(g, p)
    assert coarse.node_count == 2
    assert coarse.edge_weight(0, 1) == 2


def test_run_two_triangles():
    res = run(Graph.from_edges(TWO_TRIANGLES))
    assert res.q == pytest.approx(0.5, abs=1e-12)
    assert len(res.partition) == 2


def test_run_six_node_graph():
    part, q, passes = run(Graph.from_edges(SIX_NODE_A))
    assert part.groups() == {frozenset({1, 2, 3}), frozenset({4, 5, 6})}


def test_run_empty():
    with pytest.raises(EmptyGraph):
        run(Graph())


def test_config_validation():
    with pytest.raises(ValueError):
        LouvainConfig(gain_threshold=-1)
    with pytest.raises(ValueError):
        LouvainConfig(max_passes=0)


def test_determinism_and_passes():
    rng = random.Random(5)
    events, _ = planted_events(rng, 600, 4000, 12)
    g = Graph.from_edges(events)
    a = run(g, LouvainConfig(node_order_seed=11))
    b = run(g, LouvainConfig(node_order_seed=11))
    assert a.partition.assignment == b.partition.assignment
    assert a.q == b.q
    assert a.passes <= 10
    assert a.q == pytest.approx(modularity(g, a.partition), abs=1e-12)
    # monotone across passes
    for q0, q1 in zip(a.history, a.history[1:]):
        assert q1 >= q0 - 1e-9
    assert a.history[-1] == pytest.approx(a.q, abs=1e-9)


small_graphs = st.lists(
    st.tuples(st.integers(0, 6), st.integers(0, 6), st.sampled_from([1.0, 2.0, 0.5])),
    min_size=1,
    max_size=14,
).map(lambda es: [(u, v, w) for u, v, w in es if u != v])


@settings(max_examples=80, deadline=None)
@given(small_graphs.filter(bool), st.integers(0, 1000))
def test_run_never_beats_exhaustive_optimum(edges, seed):
    g = Graph.from_edges(edges)
    res = run(g, LouvainConfig(node_order_seed=seed))
    a, _ = dense(edges)
    best, _ = best_partition(a)
    assert res.q <= best + 1e-9
    for q0, q1 in zip(res.history, res.history[1:]):
        assert q1 >= q0 - 1e-9


@settings(max_examples=100, deadline=None)
@given(
    st.lists(st.tuples(st.integers(0, 20), st.integers(0, 20), st.sampled_from([1.0, 3.0])), min_size=1, max_size=60),
    st.lists(st.integers(0, 4), min_size=21, max_size=21),
)
def test_aggregation_preserves_modularity(edges, labels):
    g = Graph.from_edges(edges, allow_self_loops=True)
    p = Partition.from_assignment(g, {u: labels[u] for u in g.nodes()})
    coarse, cmap = aggregate(g, p)
    assert set(cmap.values()) == set(p.members)
    assert coarse.total_weight() == pytest.approx(g.total_weight())
    assert modularity(coarse, Partition.singletons(coarse)) == pytest.approx(modularity(g, p), abs=1e-9)
