import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from energia.enumeration import generate_connected_bounded
from energia.graph_core import complete_graph, cycle_graph, from_edges, star_graph
from energia.matching import (
    greedy_matching_size,
    is_valid_matching,
    matching_number_bruteforce,
    maximum_matching,
)
from energia.wineglass import wgc, wgp

from conftest import random_graph


def test_small_cases():
    assert maximum_matching(cycle_graph(5)).size == 2
    assert matching_number_bruteforce(complete_graph(4)) == 2
    assert matching_number_bruteforce(star_graph(4)) == 1
    assert matching_number_bruteforce(cycle_graph(7)) == 3


@pytest.mark.parametrize("k", range(1, 9))
def test_wineglass_matching(k):
    assert maximum_matching(wgp(k)).size == 2 * k
    if k >= 2:
        assert maximum_matching(wgc(k)).size == 2 * k


def test_blossom_needed():
    # two triangles joined by a path: a greedy/bipartite approach can get this wrong
    g = from_edges(8, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 5)])
    assert maximum_matching(g).size == 4 == matching_number_bruteforce(g)


def test_bruteforce_budget():
    with pytest.raises(ValueError):
        matching_number_bruteforce(complete_graph(8))


def test_equals_bruteforce_exhaustive_subcubic():
    for n in range(1, 9):
        for g in generate_connected_bounded(n, 3):
            m = maximum_matching(g)
            assert is_valid_matching(g, m)
            assert m.size == matching_number_bruteforce(g)


def test_equals_bruteforce_random(rng):
    done = 0
    while done < 500:
        n = rng.randint(1, 10)
        g = random_graph(rng, n, rng.uniform(0.05, 0.6))
        if g.num_edges > 24:
            continue
        m = maximum_matching(g)
        assert is_valid_matching(g, m)
        assert m.size == matching_number_bruteforce(g)
        assert m.size <= n // 2
        done += 1


@settings(max_examples=200)
@given(st.integers(1, 11), st.integers(0, 2**55 - 1))
def test_greedy_is_lower_bound(n, mask):
    pairs = [(u, v) for v in range(n) for u in range(v)]
    g = from_edges(n, [e for i, e in enumerate(pairs) if mask >> i & 1])
    m = maximum_matching(g)
    assert is_valid_matching(g, m)
    assert greedy_matching_size(g) <= m.size <= n // 2
    assert 2 * greedy_matching_size(g) >= m.size  # maximal matchings are 1/2-approximations
