"""Backtracking search for colorings that avoid monochromatic hyperedges.

Vertices are 0..V-1 and are colored in index order.  Every hyperedge is filed
under its largest vertex, so the check after coloring vertex v only looks at
edges that have just become fully colored.  Colors are canonical: vertex 0
gets color 0 and a new color may only be the next unused one.  That removes
the r! relabelings without losing any coloring class.

Parallel runs split the tree at a fixed depth that does not depend on the
worker count.  Each prefix gets the same node budget, and prefix results are
merged in canonical order.  The first avoiding coloring reported is therefore
the lexicographically least one however the work was scheduled.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

SPLIT_DEPTH = 10
DEFAULT_MAX_NODES = 5_000_000

_SHARED = {}


@dataclass(frozen=True)
class Outcome:
    coloring: Optional[Tuple[int, ...]]
    capped: bool
    nodes: int

    @property
    def exhausted(self):
        return self.coloring is None and not self.capped


def _violates(col, others_list, c):
    for others in others_list:
        for o in others:
            if col[o] != c:
                break
        else:
            return True
    return False


def dfs(n, buckets, r, prefix=(), budget=None):
    """Lexicographically first canonical avoiding coloring of vertices 0..n-1 extending ``prefix``.

    Returns (coloring or None, capped, nodes).
    """
    start = len(prefix)
    col = list(prefix) + [-1] * (n - start)
    if start == n:
        return tuple(col), False, 0
    top = [-1] * (n + 1)
    for i in range(start):
        top[i + 1] = max(top[i], col[i])
    tries = [0] * n
    pos = start
    nodes = 0
    while True:
        limit = min(r - 1, top[pos] + 1)
        c = tries[pos]
        if c > limit:
            col[pos] = -1
            pos -= 1
            if pos < start:
                return None, False, nodes
            tries[pos] += 1
            continue
        nodes += 1
        if budget is not None and nodes > budget:
            return None, True, nodes
        col[pos] = c
        if _violates(col, buckets[pos], c):
            tries[pos] += 1
            continue
        if pos + 1 == n:
            return tuple(col), False, nodes
        top[pos + 1] = max(top[pos], c)
        pos += 1
        tries[pos] = 0


def prefixes(n, buckets, r, depth):
    """All canonical, non-violating colorings of the first ``depth`` vertices, in order."""
    depth = min(depth, n)
    out = []
    col = []

    def rec(top):
        i = len(col)
        if i == depth:
            out.append(tuple(col))
            return
        for c in range(min(r - 1, top + 1) + 1):
            col.append(c)
            padded = col + [-1] * (n - len(col))
            if not _violates(padded, buckets[i], c):
                rec(max(top, c))
            col.pop()

    rec(-1)
    return out


def _init_worker(buckets, r):
    _SHARED["buckets"] = buckets
    _SHARED["r"] = r


def _run_prefix(job):
    n, prefix, budget = job
    return dfs(n, _SHARED["buckets"], _SHARED["r"], prefix, budget)


class AvoidingSearch:
    """Reusable searcher over windows 0..n-1 of one bucketed hypergraph.

    ``buckets[v]`` lists, for each edge with largest vertex v, the tuple of the
    edge's other vertices.  An empty tuple means the edge is the single vertex
    v, which no coloring can avoid.
    """

    def __init__(self, buckets: Sequence[Sequence[Tuple[int, ...]]], r, workers=1,
                 max_nodes=DEFAULT_MAX_NODES, split_depth=SPLIT_DEPTH):
        if r < 1:
            raise ValueError("r must be >= 1")
        self.buckets = [list(b) for b in buckets]
        self.r = r
        self.workers = max(1, int(workers))
        self.max_nodes = max_nodes
        self.split_depth = split_depth
        self._pool = None

    def __enter__(self):
        if self.workers > 1:
            self._pool = ProcessPoolExecutor(max_workers=self.workers, initializer=_init_worker,
                                             initargs=(self.buckets, self.r))
        return self

    def __exit__(self, *exc):
        if self._pool is not None:
            self._pool.shutdown(wait=True, cancel_futures=True)
            self._pool = None

    def avoider(self, n) -> Outcome:
        if n > len(self.buckets):
            raise ValueError(f"window {n} beyond the {len(self.buckets)} prepared vertices")
        if n == 0:
            return Outcome((), False, 0)
        heads = prefixes(n, self.buckets, self.r, self.split_depth)
        if not heads:
            return Outcome(None, False, 0)
        budget = None if self.max_nodes is None else max(1, self.max_nodes // len(heads))
        jobs = [(n, h, budget) for h in heads]
        total = len(heads)
        if self._pool is None:
            results = (dfs(n, self.buckets, self.r, h, budget) for _, h, budget in jobs)
        else:
            results = self._pool.map(_run_prefix, jobs, chunksize=max(1, len(jobs) // (4 * self.workers)))
        for coloring, capped, nodes in results:
            total += nodes
            if capped:
                return Outcome(None, True, total)
            if coloring is not None:
                return Outcome(coloring, False, total)
        return Outcome(None, False, total)


def bucket_edges(edges, num_vertices) -> List[List[Tuple[int, ...]]]:
    """File each edge (iterable of 0-based vertices) under its largest vertex, deduplicated."""
    buckets = [set() for _ in range(num_vertices)]
    for e in edges:
        vs = sorted(set(e))
        top = vs[-1]
        if top >= num_vertices:
            continue
        buckets[top].add(tuple(vs[:-1]))
    return [sorted(b, key=lambda t: (len(t), t)) for b in buckets]
