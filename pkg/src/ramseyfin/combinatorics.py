"""Finite sums, products and towers; sum subsystems; window largeness tests.

Largeness notions (thick, syndetic, piecewise syndetic, IP_r*) are defined on
infinite semigroups.  Here they are evaluated inside a window [1..n] with the
caller choosing the gap ``g`` and run length ``L``.  There is no wraparound.
"""

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import FrozenSet, Optional, Sequence, Tuple

from .bigint import DEFAULT_BIT_CAP, checked_pow
from .errors import BitCapExceeded


@dataclass(frozen=True)
class GenSeq:
    xs: Tuple[int, ...]
    distinct: bool = True

    def __post_init__(self):
        xs = tuple(int(x) for x in self.xs)
        if not xs:
            raise ValueError("generator sequence must have length >= 1")
        if min(xs) < 1:
            raise ValueError("generator entries must be >= 1")
        if self.distinct and len(set(xs)) != len(xs):
            raise ValueError(f"repeated entries in a distinct sequence: {xs}")
        object.__setattr__(self, "xs", xs)

    def __len__(self):
        return len(self.xs)

    def __iter__(self):
        return iter(self.xs)


@dataclass(frozen=True)
class BlockPartition:
    """Ordered blocks H_1 < H_2 < ... of 1-based positions into a parent sequence."""

    blocks: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        blocks = tuple(tuple(sorted(b)) for b in self.blocks)
        for b in blocks:
            if not b:
                raise ValueError("empty block")
            if len(set(b)) != len(b):
                raise ValueError(f"repeated index inside block {b}")
        for prev, nxt in zip(blocks, blocks[1:]):
            if prev[-1] >= nxt[0]:
                raise ValueError(f"blocks not ordered: max {prev} >= min {nxt}")
        object.__setattr__(self, "blocks", blocks)

    def sums(self, x):
        return tuple(sum(x_at(x, i) for i in b) for b in self.blocks)


@dataclass(frozen=True)
class WindowSet:
    n: int
    members: FrozenSet[int]

    def __post_init__(self):
        members = frozenset(int(m) for m in self.members)
        if self.n < 0:
            raise ValueError("window end must be >= 0")
        bad = [m for m in members if not 1 <= m <= self.n]
        if bad:
            raise ValueError(f"members outside [1..{self.n}]: {sorted(bad)[:5]}")
        object.__setattr__(self, "members", members)

    @classmethod
    def full(cls, n):
        return cls(n, frozenset(range(1, n + 1)))

    @classmethod
    def from_predicate(cls, n, pred):
        return cls(n, frozenset(m for m in range(1, n + 1) if pred(m)))

    def __contains__(self, m):
        return m in self.members

    def __len__(self):
        return len(self.members)

    @property
    def bits(self):
        """Membership bitmask: bit m is set iff m is a member."""
        v = 0
        for m in self.members:
            v |= 1 << m
        return v

    def sorted(self):
        return sorted(self.members)

    def complement(self):
        return WindowSet(self.n, frozenset(range(1, self.n + 1)) - self.members)


@dataclass(frozen=True)
class LargenessParams:
    g: int
    L: int

    def __post_init__(self):
        if self.g < 1 or self.L < 1:
            raise ValueError("g and L must be >= 1")
        if self.g > self.L:
            raise ValueError(f"gap g={self.g} exceeds run length L={self.L}")


def _xs(s):
    return s.xs if isinstance(s, GenSeq) else tuple(s)


def x_at(s, i):
    xs = _xs(s)
    if not 1 <= i <= len(xs):
        raise IndexError(f"index {i} outside 1..{len(xs)}")
    return xs[i - 1]


def x_alpha(s, alpha):
    alpha = set(alpha)
    if not alpha:
        raise ValueError("alpha must be nonempty")
    return sum(x_at(s, i) for i in alpha)


def fs(s):
    out = set()
    for x in _xs(s):
        out |= {v + x for v in out}
        out.add(x)
    return out


def fp(s):
    out = set()
    for x in _xs(s):
        out |= {v * x for v in out}
        out.add(x)
    return out


def tower_chains(k):
    """Nonempty increasing index chains over 1..k, shortest first, then lexicographic."""
    for size in range(1, k + 1):
        yield from itertools.combinations(range(1, k + 1), size)


def chain_tower(xs, chain, bit_cap=DEFAULT_BIT_CAP):
    """x_{i_n} ^ (x_{i_{n-1}} ^ ( ... ^ x_{i_1})) for chain i_1 < ... < i_n.

    The largest index sits at the base; the smallest index is the top exponent.
    """
    value = xs[chain[0] - 1]
    for i in chain[1:]:
        try:
            value = checked_pow(xs[i - 1], value, bit_cap)
        except BitCapExceeded as exc:
            raise BitCapExceeded(f"tower over chain {chain} exceeds {bit_cap} bits",
                                 bits=exc.bits, chain=chain) from None
    return value


def fep_chains(s, bit_cap=DEFAULT_BIT_CAP):
    """Dict chain -> tower value.  Raises BitCapExceeded naming the first bad chain."""
    xs = _xs(s)
    if min(xs) < 2:
        raise ValueError("tower generators must be >= 2")
    if len(set(xs)) != len(xs):
        raise ValueError("tower generators must be distinct")
    values = {}
    for chain in tower_chains(len(xs)):
        if len(chain) == 1:
            values[chain] = xs[chain[0] - 1]
            continue
        inner = values[chain[:-1]]
        base = xs[chain[-1] - 1]
        try:
            values[chain] = checked_pow(base, inner, bit_cap)
        except BitCapExceeded as exc:
            raise BitCapExceeded(f"tower over chain {chain} exceeds {bit_cap} bits",
                                 bits=exc.bits, chain=chain) from None
    return values


def fep(s, bit_cap=DEFAULT_BIT_CAP):
    return set(fep_chains(s, bit_cap).values())


def fep_blocks(blocks, bit_cap=DEFAULT_BIT_CAP):
    """Towers over increasing chains where the j-th level is drawn from FP(G_j)."""
    choices = [sorted(fp(b)) for b in blocks]
    # towers[j] holds every tower whose base level comes from block j
    towers = []
    for j, opts in enumerate(choices):
        mine = set(opts)
        for i in range(j):
            for inner in towers[i]:
                for base in opts:
                    mine.add(checked_pow(base, inner, bit_cap))
        towers.append(mine)
    out = set()
    for t in towers:
        out |= t
    return out


def _block_candidates(start, k, need):
    """Nonempty position sets within start..k in canonical order, leaving room for ``need`` more blocks."""
    last_allowed = k - need

    def rec(prefix, nxt):
        for i in range(nxt, last_allowed + 1):
            block = prefix + (i,)
            yield block
            yield from rec(block, i + 1)

    yield from rec((), start)


def iter_block_partitions(k, m):
    """Every ordered block partition H_1 < ... < H_m over positions 1..k in canonical order."""

    def rec(start, chosen):
        if len(chosen) == m:
            yield tuple(chosen)
            return
        for block in _block_candidates(start, k, m - len(chosen) - 1):
            chosen.append(block)
            yield from rec(block[-1] + 1, chosen)
            chosen.pop()

    yield from rec(1, [])


def is_sum_subsystem(y, x) -> Optional[BlockPartition]:
    """First ordered block partition with y_n = sum over H_n of x, or None."""
    ys, xs = _xs(y), _xs(x)
    k, m = len(xs), len(ys)

    def rec(start, idx, chosen):
        if idx == m:
            return list(chosen)
        for block in _block_candidates(start, k, m - idx - 1):
            if sum(xs[i - 1] for i in block) != ys[idx]:
                continue
            chosen.append(block)
            found = rec(block[-1] + 1, idx + 1, chosen)
            if found is not None:
                return found
            chosen.pop()
        return None

    found = rec(1, 0, [])
    return None if found is None else BlockPartition(tuple(found))


def is_thick(A, L):
    run = 0
    for m in range(1, A.n + 1):
        run = run + 1 if m in A.members else 0
        if run >= L:
            return True
    return False


def _good_window_starts(A, g):
    """good[j] for j in 1..n-g+1: does [j..j+g-1] meet A."""
    n = A.n
    prefix = [0] * (n + 1)
    for m in range(1, n + 1):
        prefix[m] = prefix[m - 1] + (m in A.members)
    return {j: prefix[j + g - 1] - prefix[j - 1] > 0 for j in range(1, n - g + 2)}


def is_syndetic(A, g):
    if A.n == 0:
        return False
    if g >= A.n:
        return len(A.members) > 0
    return all(_good_window_starts(A, g).values())


def is_pws(A, params) -> Optional[Tuple[int, int]]:
    """Leftmost maximal interval I with |I| >= L whose length-g subintervals all meet A."""
    g, L = params.g, params.L
    n = A.n
    if L > n:
        return None
    good = _good_window_starts(A, g)
    j = 1
    last = n - g + 1
    while j <= last:
        if not good[j]:
            j += 1
            continue
        u = j
        while j + 1 <= last and good[j + 1]:
            j += 1
        lo, hi = u, j + g - 1
        if hi - lo + 1 >= L:
            return lo, hi
        j += 1
    return None


@dataclass(frozen=True)
class IPStarResult:
    status: str                      # "holds" | "fails" | "vacuous"
    r: int
    counterexample: Optional[Tuple[int, ...]] = None

    @property
    def holds(self):
        return self.status == "holds"


def _fs_fits(n, r, distinct):
    return (r * (r + 1) // 2 if distinct else r) <= n


def _ip_dfs_from(first, members, n, r, distinct):
    """Lexicographically least counterexample whose first entry is ``first``."""
    if first in members:
        return None
    seq = [first]
    sums = {first}

    def rec(total, last):
        remaining = r - len(seq)
        if remaining == 0:
            return tuple(seq)
        lo = last + 1 if distinct else last
        x = lo
        while True:
            extra = x * remaining + (remaining * (remaining - 1) // 2 if distinct else 0)
            if total + extra > n:
                return None
            new = {x} | {v + x for v in sums}
            if not (new & members):
                added = new - sums
                seq.append(x)
                sums.update(added)
                found = rec(total + x, x)
                if found is not None:
                    return found
                seq.pop()
                sums.difference_update(added)
            x += 1

    return rec(first, first)


def _ip_job(args):
    return _ip_dfs_from(*args)


def is_ip_r_star(A, r, distinct=True, workers=1) -> IPStarResult:
    """Does A meet FS(x_1..x_r) for every length-r sequence with FS inside [1..n]?

    A failing sequence is reported as the lexicographically least one; since FS is
    symmetric that sequence is sorted, so only nondecreasing sequences are scanned.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    n = A.n
    if not _fs_fits(n, r, distinct):
        return IPStarResult("vacuous", r)
    members = A.members
    # largest first entry that can still leave room for the rest
    top = n
    firsts = [x for x in range(1, top + 1)
              if x * r + (r * (r - 1) // 2 if distinct else 0) <= n]
    jobs = [(x, members, n, r, distinct) for x in firsts]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for found in pool.map(_ip_job, jobs, chunksize=max(1, len(jobs) // (4 * workers))):
                if found is not None:
                    return IPStarResult("fails", r, found)
        return IPStarResult("holds", r)
    for job in jobs:
        found = _ip_job(job)
        if found is not None:
            return IPStarResult("fails", r, found)
    return IPStarResult("holds", r)
