import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from ramseyfin.engine import AvoidingSearch, bucket_edges, dfs, prefixes


def canonical(col):
    seen = {}
    for c in col:
        if c not in seen:
            seen[c] = len(seen)
    return tuple(seen[c] for c in col)


def avoider_oracle(n, edges, r):
    """Lexicographically least canonical r-coloring of 0..n-1 with no monochromatic edge."""
    for col in itertools.product(range(r), repeat=n):
        if canonical(col) != col:
            continue
        if all(len({col[v] for v in e}) > 1 for e in edges if max(e) < n):
            return col
    return None


hypergraphs = st.integers(1, 9).flatmap(lambda V: st.tuples(
    st.just(V),
    st.lists(st.frozensets(st.integers(0, V - 1), min_size=1, max_size=3), max_size=14)))


@settings(max_examples=120)
@given(hypergraphs, st.integers(1, 3), st.integers(1, 4))
def test_search_matches_oracle(graph, r, split):
    V, edges = graph
    edges = [tuple(sorted(e)) for e in edges]
    buckets = bucket_edges(edges, V)
    with AvoidingSearch(buckets, r, split_depth=split) as search:
        for n in range(V + 1):
            out = search.avoider(n)
            assert not out.capped
            assert out.coloring == (() if n == 0 else avoider_oracle(n, edges, r))


def test_singleton_edge_is_unavoidable():
    buckets = bucket_edges([(0, 1), (2,)], 3)
    assert dfs(3, buckets, 2)[0] is None
    assert dfs(2, buckets, 2)[0] == (0, 1)


def test_budget_reports_capped():
    # 4-APs in a window of 30 with 2 colors: avoiders exist but 50 nodes cannot reach one
    edges = [tuple(a + i * d for i in range(4)) for a in range(30) for d in range(1, 10) if a + 3 * d < 30]
    with AvoidingSearch(bucket_edges(edges, 30), 2, max_nodes=50) as search:
        out = search.avoider(30)
    assert out.capped and out.coloring is None


def test_prefixes_are_canonical_and_ordered():
    heads = prefixes(6, [[] for _ in range(6)], 3, 4)
    assert heads == sorted(heads)
    assert all(canonical(h) == h for h in heads)
    assert len(heads) == 14  # restricted growth strings of length 4 with at most 3 blocks


@pytest.mark.parametrize("workers", [2, 3])
def test_parallel_equals_serial(workers):
    rnd = random.Random(11)
    V = 16
    edges = [tuple(sorted(rnd.sample(range(V), 3))) for _ in range(40)]
    buckets = bucket_edges(edges, V)
    with AvoidingSearch(buckets, 2, split_depth=4) as serial, \
            AvoidingSearch(buckets, 2, workers=workers, split_depth=4) as par:
        for n in range(1, V + 1):
            assert serial.avoider(n) == par.avoider(n)
