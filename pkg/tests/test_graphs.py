import pytest
from hypothesis import given, settings, strategies as st

from app.core.errors import GraphValidationError
from app.core.graphs import (
    Graph,
    GraphKind,
    build_graph,
    circulant,
    clique,
    cycle,
    dump_graph,
    graph_hash,
    load_graph,
    parse_graph_spec,
    path,
    random_tree,
)


def test_cycle_uses_identifiers_in_construction_order(table1_graph):
    assert table1_graph.nodes == (1, 3, 4, 5, 6)
    assert table1_graph.neighbors(3) == (5, 6)
    assert table1_graph.neighbors(1) == (4, 6)
    assert table1_graph.id_bound == 6
    assert table1_graph.max_degree == 2


def test_default_identifiers_and_bound():
    g = path(4)
    assert g.nodes == (1, 2, 3, 4)
    assert g.id_bound == 4
    assert list(g.edges()) == [(1, 2), (2, 3), (3, 4)]


def test_explicit_id_bound():
    assert cycle(5, id_bound=100).id_bound == 100


def test_clique_and_circulant_degrees():
    assert clique(4).max_degree == 3
    g = circulant(7, 2)
    assert all(g.degree(v) == 4 for v in g.nodes)


@pytest.mark.parametrize(
    "adjacency, invariant",
    [
        ({1: [2], 2: []}, "undirected"),
        ({1: [1]}, "simple"),
        ({1: [2], 2: [1], 3: [4], 4: [3]}, "connected"),
        ({1: [2, 2], 2: [1]}, "simple"),
    ],
)
def test_invalid_graphs_name_the_invariant(adjacency, invariant):
    with pytest.raises(GraphValidationError) as exc:
        Graph(id_bound=10, adjacency=adjacency)
    assert exc.value.invariant == invariant


def test_identifier_outside_bound():
    with pytest.raises(GraphValidationError):
        Graph(id_bound=2, adjacency={1: [3], 3: [1]})


def test_duplicate_identifiers_rejected():
    with pytest.raises(GraphValidationError):
        cycle(3, ids=(1, 1, 2))


def test_circulant_needs_room():
    with pytest.raises(GraphValidationError):
        circulant(4, 2)


def test_parse_graph_spec():
    spec = parse_graph_spec("circulant:7,2")
    assert spec.kind == GraphKind.CIRCULANT
    assert (spec.n, spec.k) == (7, 2)
    tree = parse_graph_spec("tree:10,delta=3,seed=4")
    assert (tree.n, tree.max_degree, tree.seed) == (10, 3, 4)
    with pytest.raises(GraphValidationError):
        parse_graph_spec("torus:3")
    with pytest.raises(GraphValidationError):
        parse_graph_spec("cycle:")


def test_parse_with_ids_builds_table_instance(table1_graph):
    graph = build_graph(parse_graph_spec("cycle:5", ids=[3, 5, 4, 1, 6]))
    assert graph == table1_graph


def test_graph_file_round_trip(tmp_path, table1_graph):
    target = tmp_path / "g.json"
    dump_graph(table1_graph, target)
    assert load_graph(target) == table1_graph
    assert build_graph(parse_graph_spec(f"file:{target}")) == table1_graph


def test_load_graph_rejects_garbage(tmp_path):
    target = tmp_path / "bad.json"
    target.write_text("{not json")
    with pytest.raises(GraphValidationError):
        load_graph(target)


def test_graph_hash_depends_on_identifiers():
    assert graph_hash(cycle(5)) == graph_hash(cycle(5))
    assert graph_hash(cycle(5)) != graph_hash(cycle(5, ids=(3, 5, 4, 1, 6)))


def test_odd_cycle_detection():
    assert cycle(5).is_odd_cycle()
    assert clique(3).is_odd_cycle()
    assert not cycle(6).is_odd_cycle()
    assert not path(5).is_odd_cycle()


@settings(max_examples=30, deadline=None)
@given(n=st.integers(min_value=3, max_value=30), delta=st.integers(min_value=3, max_value=4),
       seed=st.integers(min_value=0, max_value=1000))
def test_random_tree_respects_degree_bound(n, delta, seed):
    tree = random_tree(n, delta, seed)
    assert tree.n == n
    assert tree.max_degree <= delta
    assert len(list(tree.edges())) == n - 1
    assert random_tree(n, delta, seed) == tree
