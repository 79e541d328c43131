"""Hales-Jewett words, polynomial Hales-Jewett cubes Q(N), and the gamma embedding.

Conventions
-----------
* Letters are 1..t; the variable ``v`` is stored as 0 so that the canonical
  word order (v < 1 < ... < t) is plain tuple order.
* A point of Q(N) = [q]^N x [q]^(N x N) x ... x [q]^(N^d) is stored as one
  tuple per level, each flattened row-major over its multi-index.
* (a, gamma) pairs are ordered by gamma (size, then lexicographic) and then by a.
"""

import itertools
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

from .engine import DEFAULT_MAX_NODES, AvoidingSearch, bucket_edges
from .errors import ParseError, ResourceLimitError

V = 0
DENSE_POINT_CAP = 1 << 24


# ---------------------------------------------------------------- words

def parse_word(text):
    out = []
    for ch in str(text).strip():
        if ch == "v":
            out.append(V)
        elif ch.isdigit() and ch != "0":
            out.append(int(ch))
        else:
            raise ParseError(f"bad letter {ch!r} in word {text!r}", token=ch)
    if not out:
        raise ParseError("empty word", token=str(text))
    return tuple(out)


def format_word(w):
    return "".join("v" if c == V else str(c) for c in w)


def is_variable_word(w):
    return V in w


def substitute(w, a, t=None):
    if not is_variable_word(w):
        raise ValueError(f"{format_word(w)} is not a variable word")
    if a < 1 or (t is not None and a > t):
        raise ValueError(f"letter {a} outside the alphabet")
    return tuple(a if c == V else c for c in w)


def variable_words(t, N):
    for w in itertools.product(range(t + 1), repeat=N):
        if V in w:
            yield w


def line(w, t):
    return [substitute(w, a) for a in range(1, t + 1)]


def point_index(p, t):
    """Row-major index of a point of [t]^N (letters 1..t)."""
    idx = 0
    for c in p:
        idx = idx * t + (c - 1)
    return idx


def points(t, N):
    return itertools.product(range(1, t + 1), repeat=N)


# ---------------------------------------------------------------- colorings

@dataclass(frozen=True)
class CubeColoring:
    """Coloring of [t]^N (kind "hj") or of Q(N) (kind "phj").

    ``dense`` holds colors in row-major point order; otherwise ``rule`` maps a
    point to a color.  ``rule_text`` keeps the serialized rule.
    """

    kind: str
    q: int
    N: int
    d: int
    r: int
    dense: Optional[Tuple[int, ...]] = None
    rule: Optional[Callable] = None
    rule_text: Optional[str] = None

    @property
    def t(self):
        return self.q

    @property
    def coords(self):
        return N_coords(self.N, self.d) if self.kind == "phj" else self.N

    @property
    def num_points(self):
        return self.q ** self.coords

    def color(self, p):
        flat = flatten(p) if self.kind == "phj" and not _is_flat(p) else tuple(p)
        if self.dense is not None:
            return self.dense[point_index(flat, self.q)]
        return self.rule(flat)


def _is_flat(p):
    return bool(p) and isinstance(p[0], int)


def hj_coloring(t, N, r, colors=None, rule=None, rule_text=None):
    return _make_cube("hj", t, N, 1, r, colors, rule, rule_text)


def phj_coloring(q, N, d, r, colors=None, rule=None, rule_text=None):
    return _make_cube("phj", q, N, d, r, colors, rule, rule_text)


def _make_cube(kind, q, N, d, r, colors, rule, rule_text):
    if r < 1:
        raise ValueError("r must be >= 1")
    coords = N_coords(N, d) if kind == "phj" else N
    if colors is not None:
        colors = tuple(colors)
        if len(colors) != q ** coords:
            raise ValueError(f"expected {q ** coords} colors, got {len(colors)}")
        if colors and (min(colors) < 0 or max(colors) >= r):
            raise ValueError(f"color index outside 0..{r - 1}")
    elif rule is None:
        raise ValueError("need dense colors or a rule")
    return CubeColoring(kind, q, N, d, r, colors, rule, rule_text)


# ---------------------------------------------------------------- HJ search

def hj_search(coloring: CubeColoring):
    """First variable word (canonical order) whose line is monochromatic, else None."""
    t, N = coloring.q, coloring.N
    for w in variable_words(t, N):
        pts = line(w, t)
        c0 = coloring.color(pts[0])
        if all(coloring.color(p) == c0 for p in pts[1:]):
            return w
    return None


@dataclass(frozen=True)
class HJNumberResult:
    status: str                          # "found" | "not_found"
    N: Optional[int]
    avoiding: Optional[Tuple[int, ...]]  # avoiding coloring of [t]^(N-1), or of [t]^n_max
    avoiding_N: Optional[int]
    nodes: int


def hj_edges(t, N):
    return [[point_index(p, t) for p in line(w, t)] for w in variable_words(t, N)]


def hj_number(r, t, n_max, workers=1, max_nodes=DEFAULT_MAX_NODES, point_cap=DENSE_POINT_CAP):
    """Least N <= n_max such that every r-coloring of [t]^N has a monochromatic line."""
    if r < 1 or t < 1:
        raise ValueError("r and t must be >= 1")
    if r == 1 or t == 1:
        return HJNumberResult("found", 1, (), 0, 0)
    nodes = 0
    last = None
    for N in range(1, n_max + 1):
        V_count = t ** N
        if V_count > point_cap:
            raise ResourceLimitError(f"[{t}]^{N} has {V_count} points, over the cap {point_cap}")
        buckets = bucket_edges(hj_edges(t, N), V_count)
        with AvoidingSearch(buckets, r, workers=workers, max_nodes=max_nodes) as search:
            out = search.avoider(V_count)
        nodes += out.nodes
        if out.capped:
            raise ResourceLimitError(f"node budget {max_nodes} exhausted while searching [{t}]^{N}")
        if out.coloring is None:
            return HJNumberResult("found", N, last[1] if last else None,
                                  last[0] if last else None, nodes)
        last = (N, out.coloring)
    return HJNumberResult("not_found", None, last[1] if last else None,
                          last[0] if last else None, nodes)


# ---------------------------------------------------------------- PHJ cube

def N_coords(N, d):
    return sum(N ** j for j in range(1, d + 1))


def level_indices(N, j):
    """Multi-indices of level j in row-major order (1-based entries)."""
    return itertools.product(range(1, N + 1), repeat=j)


@dataclass(frozen=True)
class PHJPoint:
    q: int
    N: int
    levels: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        levels = tuple(tuple(int(v) for v in lv) for lv in self.levels)
        for j, lv in enumerate(levels, start=1):
            if len(lv) != self.N ** j:
                raise ValueError(f"level {j} needs {self.N ** j} entries, got {len(lv)}")
            if lv and (min(lv) < 1 or max(lv) > self.q):
                raise ValueError(f"level {j} values outside [1..{self.q}]")
        object.__setattr__(self, "levels", levels)

    @property
    def d(self):
        return len(self.levels)

    def flat(self):
        return flatten(self.levels)


def flatten(levels):
    return tuple(v for lv in levels for v in lv)


def unflatten(flat, N, d):
    out, pos = [], 0
    for j in range(1, d + 1):
        out.append(tuple(flat[pos:pos + N ** j]))
        pos += N ** j
    return tuple(out)


def _flat_pos(idx, N):
    pos = 0
    for i in idx:
        pos = pos * N + (i - 1)
    return pos


def gamma_positions(gamma, N, j):
    """Flat positions (within level j) of the multi-indices in gamma^j."""
    g = sorted(gamma)
    return [_flat_pos(idx, N) for idx in itertools.product(g, repeat=j)]


def check_gamma(gamma, N):
    g = frozenset(gamma)
    if not g:
        raise ValueError("gamma must be nonempty")
    if min(g) < 1 or max(g) > N:
        raise ValueError(f"gamma {sorted(g)} not inside [1..{N}]")
    return g


def phj_oplus(a: PHJPoint, gamma, xs):
    """a (+) x_1 gamma (+) x_2 gamma^2 (+) ... (+) x_d gamma^d."""
    gamma = check_gamma(gamma, a.N)
    if len(xs) != a.d:
        raise ValueError(f"need {a.d} values, got {len(xs)}")
    for x in xs:
        if not 1 <= x <= a.q:
            raise ValueError(f"value {x} outside [1..{a.q}]")
    levels = []
    for j, lv in enumerate(a.levels, start=1):
        lv = list(lv)
        for pos in gamma_positions(gamma, a.N, j):
            lv[pos] = xs[j - 1]
        levels.append(tuple(lv))
    return PHJPoint(a.q, a.N, tuple(levels))


def gamma_embed(a, xs):
    """sum_i a_i x_i + sum_ij a_ij x_i x_j + ... (exact).

    ``a`` may be a PHJPoint or a raw tuple of levels (values unchecked).
    """
    levels = a.levels if isinstance(a, PHJPoint) else tuple(a)
    xs = tuple(xs)
    N = len(xs)
    total = 0
    for j, lv in enumerate(levels, start=1):
        if len(lv) != N ** j:
            raise ValueError(f"level {j} has {len(lv)} entries; expected {N ** j}")
        for pos, idx in enumerate(level_indices(N, j)):
            v = lv[pos]
            if v:
                prod = 1
                for i in idx:
                    prod *= xs[i - 1]
                total += v * prod
    return total


def masked_levels(a: PHJPoint, gamma):
    """a's levels with every gamma^j coordinate set to 0."""
    out = []
    for j, lv in enumerate(a.levels, start=1):
        lv = list(lv)
        for pos in gamma_positions(gamma, a.N, j):
            lv[pos] = 0
        out.append(tuple(lv))
    return tuple(out)


def embedded_pattern(a: PHJPoint, gamma, xs, coeffs):
    """(base, value): value = gamma_embed(a (+) coeffs gamma...), base = off-gamma part."""
    gamma = check_gamma(gamma, a.N)
    value = gamma_embed(phj_oplus(a, gamma, coeffs), xs)
    base = gamma_embed(masked_levels(a, gamma), xs)
    return base, value


def gammas(N):
    for size in range(1, N + 1):
        for g in itertools.combinations(range(1, N + 1), size):
            yield g


def phj_pattern(a: PHJPoint, gamma, q=None):
    q = a.q if q is None else q
    return [phj_oplus(a, gamma, xs) for xs in itertools.product(range(1, q + 1), repeat=a.d)]


def phj_search(coloring: CubeColoring):
    """First (a, gamma) whose PHJ pattern is monochromatic, or None.

    For a fixed gamma the coordinates in gamma^j are overwritten, so the least a
    with a monochromatic pattern has 1s there; only the remaining coordinates
    are enumerated.
    """
    q, N, d = coloring.q, coloring.N, coloring.d
    for gamma in gammas(N):
        fixed = set()
        offset = 0
        for j in range(1, d + 1):
            fixed.update(offset + p for p in gamma_positions(gamma, N, j))
            offset += N ** j
        coords = N_coords(N, d)
        free = [i for i in range(coords) if i not in fixed]
        for vals in itertools.product(range(1, q + 1), repeat=len(free)):
            flat = [1] * coords
            for i, v in zip(free, vals):
                flat[i] = v
            a = PHJPoint(q, N, unflatten(flat, N, d))
            pts = phj_pattern(a, gamma)
            c0 = coloring.color(pts[0].flat())
            if all(coloring.color(p.flat()) == c0 for p in pts[1:]):
                return a, tuple(gamma)
    return None


def cube_rule(feature, int_rule, q):
    """Point -> color by applying an integer rule coloring to a point feature.

    feature is "sum" (coordinate sum), "index" (row-major index + 1) or
    "coord:K" (value at flat coordinate K, 1-based).
    """
    if feature == "sum":
        return lambda p: int_rule.color(sum(p))
    if feature == "index":
        return lambda p: int_rule.color(point_index(p, q) + 1)
    if feature.startswith("coord:"):
        try:
            k = int(feature[len("coord:"):])
        except ValueError:
            raise ParseError(f"bad coordinate in {feature!r}", token=feature) from None
        return lambda p: int_rule.color(p[k - 1])
    raise ParseError(f"unknown cube feature {feature!r}", token=feature)
