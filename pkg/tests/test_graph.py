import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cliquemis.graph import (
    Graph,
    closed_neighborhood,
    gnp_random,
    induced_subgraph,
    max_degree,
    random_regular,
    read_edge_list,
    subset,
    write_edge_list,
)

from conftest import graphs, path, star


def test_gnp_p_zero_is_edgeless():
    g = gnp_random(5, 0.0, seed=1)
    assert g.n == 5 and g.edge_count == 0


def test_gnp_p_one_is_complete():
    g = gnp_random(5, 1.0, seed=1)
    assert g.edge_count == 10


def test_gnp_edge_count_is_binomial():
    g = gnp_random(1000, 0.1, seed=7)
    pairs = 1000 * 999 // 2
    mean = pairs * 0.1
    sigma = math.sqrt(pairs * 0.1 * 0.9)
    assert mean == pytest.approx(49950)
    assert sigma == pytest.approx(212.0, abs=0.1)
    assert abs(g.edge_count - mean) <= 3 * sigma


@pytest.mark.parametrize("p", [-0.1, 1.5, float("nan")])
def test_gnp_rejects_bad_p(p):
    with pytest.raises(ValueError):
        gnp_random(10, p, seed=0)


def test_gnp_is_bit_identical_for_same_seed():
    a = gnp_random(300, 0.07, seed=11)
    b = gnp_random(300, 0.07, seed=11)
    assert a == b
    assert a != gnp_random(300, 0.07, seed=12)


def test_gnp_pair_decoding_covers_every_pair():
    # p close to 1 exercises the geometric skipping without the p == 1 shortcut
    g = gnp_random(40, 0.999999, seed=3)
    assert g.edge_count == 40 * 39 // 2


def test_gnp_marginal_frequency_of_one_pair():
    hits = sum(gnp_random(12, 0.3, seed=s).has_edge(2, 9) for s in range(2000))
    sigma = math.sqrt(2000 * 0.3 * 0.7)
    assert abs(hits - 600) <= 4 * sigma


def test_graph_invariants_after_construction():
    g = gnp_random(200, 0.1, seed=5)
    for v in range(g.n):
        row = g.neighbors(v)
        assert np.all(np.diff(row) > 0)
        assert v not in row
        for w in row:
            assert g.has_edge(int(w), v)
    assert g.edge_count == g.degrees.sum() // 2


@pytest.mark.parametrize("edges", [[(0, 0)], [(0, 1), (1, 0)], [(0, 5)]])
def test_from_edges_rejects_non_simple(edges):
    with pytest.raises(ValueError):
        Graph.from_edges(3, edges)


def test_induced_subgraph_examples():
    k4 = Graph.complete(4)
    h, ids = induced_subgraph(k4, subset(4, [0, 1]))
    assert h.edge_count == 1 and list(ids) == [0, 1]

    h, ids = induced_subgraph(k4, subset(4))
    assert h.n == 0 and h.edge_count == 0

    h, ids = induced_subgraph(path(4), subset(4, [0, 2, 3]))
    mapped = {tuple(sorted((int(ids[u]), int(ids[v])))) for u, v in h.edges()}
    assert mapped == {(2, 3)}


def test_max_degree_examples():
    assert max_degree(star(6)) == 5
    assert max_degree(Graph.empty(4)) == 0
    assert max_degree(path(4)) == 2


def test_closed_neighborhood_examples():
    assert set(np.flatnonzero(closed_neighborhood(path(4), subset(4, [1])))) == {0, 1, 2}
    assert not closed_neighborhood(path(4), subset(4)).any()
    assert closed_neighborhood(Graph.complete(4), subset(4, [0])).all()


@given(graphs())
def test_induced_on_full_set_is_identity(g):
    h, ids = induced_subgraph(g, np.ones(g.n, dtype=bool))
    assert h == g and list(ids) == list(range(g.n))


@given(graphs(), st.data())
def test_induced_subgraph_is_monotone(g, data):
    t = np.array(data.draw(st.lists(st.booleans(), min_size=g.n, max_size=g.n)), dtype=bool)
    s = t & np.array(data.draw(st.lists(st.booleans(), min_size=g.n, max_size=g.n)), dtype=bool)

    def edges_of(mask):
        h, ids = induced_subgraph(g, mask)
        return {(int(ids[u]), int(ids[v])) for u, v in h.edges()}

    assert edges_of(s) <= edges_of(t)
    assert edges_of(t) == {(u, v) for u, v in g.edge_set() if t[u] and t[v]}


@given(graphs(), st.data())
def test_closed_neighborhood_contains_set(g, data):
    s = np.array(data.draw(st.lists(st.booleans(), min_size=g.n, max_size=g.n)), dtype=bool)
    out = closed_neighborhood(g, s)
    assert np.all(out[s])
    expected = set(np.flatnonzero(s))
    for v in np.flatnonzero(s):
        expected |= set(g.neighbors(int(v)).tolist())
    assert set(np.flatnonzero(out)) == expected


@pytest.mark.parametrize("n,d", [(10, 3), (50, 4), (200, 16), (64, 63)])
def test_random_regular_is_simple_and_regular(n, d):
    g = random_regular(n, d, seed=1)
    assert np.all(g.degrees == d)
    assert g.edge_count == n * d // 2
    assert random_regular(n, d, seed=1) == g


def test_random_regular_rejects_impossible():
    with pytest.raises(ValueError):
        random_regular(5, 3, seed=0)
    with pytest.raises(ValueError):
        random_regular(4, 4, seed=0)


@settings(max_examples=30)
@given(graphs())
def test_edge_list_roundtrip(tmp_path_factory, g):
    path_ = tmp_path_factory.mktemp("el") / "g.txt"
    write_edge_list(g, path_)
    lines = path_.read_text().splitlines()
    assert lines[0] == f"{g.n} {g.edge_count}"
    assert all(int(a) < int(b) for a, b in (ln.split() for ln in lines[1:]))
    assert read_edge_list(path_) == g


def test_edge_list_rejects_bad_files(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("3 2\n0 1\n")
    with pytest.raises(ValueError):
        read_edge_list(p)
    p.write_text("3 1\n2 1\n")
    with pytest.raises(ValueError):
        read_edge_list(p)
