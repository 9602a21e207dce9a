from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings

from cliquemis.graph import Graph, gnp_random
from cliquemis.verify import SizeLimit, brute_force_all_mis, verify_mis

from conftest import cycle, graphs, path


def subsets_oracle(g: Graph) -> set[frozenset[int]]:
    """Every subset, filtered by the definition directly."""
    edges = g.edge_set()
    out = set()
    for r in range(g.n + 1):
        for s in combinations(range(g.n), r):
            s = set(s)
            if any((u, v) in edges for u in s for v in s if u < v):
                continue
            if all(any((min(v, u), max(v, u)) in edges for u in s) for v in set(range(g.n)) - s):
                out.add(frozenset(s))
    return out


def test_verify_examples():
    k3 = Graph.complete(3)
    assert verify_mis(k3, [0])
    bad = verify_mis(k3, [0, 1])
    assert not bad and bad.edge == (0, 1)
    bad = verify_mis(path(3), [0])
    assert not bad and bad.vertex == 2


def test_verify_accepts_masks():
    g = path(4)
    assert verify_mis(g, np.array([True, False, True, False]))
    assert not verify_mis(g, np.zeros(4, dtype=bool))


def test_brute_force_examples():
    assert brute_force_all_mis(Graph.complete(3)) == {frozenset({0}), frozenset({1}), frozenset({2})}
    assert brute_force_all_mis(Graph.empty(3)) == {frozenset({0, 1, 2})}
    c4 = cycle(4)
    assert subsets_oracle(c4) == {frozenset({0, 2}), frozenset({1, 3})}
    assert brute_force_all_mis(c4) == {frozenset({0, 2}), frozenset({1, 3})}


def test_brute_force_size_limit():
    with pytest.raises(SizeLimit):
        brute_force_all_mis(Graph.empty(21))
    assert len(brute_force_all_mis(gnp_random(20, 0.3, 1))) > 0


@settings(max_examples=60)
@given(graphs(max_n=9))
def test_brute_force_matches_subset_oracle(g):
    found = brute_force_all_mis(g)
    assert found == subsets_oracle(g)
    for s in found:
        assert verify_mis(g, list(s))
