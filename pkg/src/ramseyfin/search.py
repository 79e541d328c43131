"""Monochromatic configuration search, Ramsey thresholds, and window-scale verifiers.

Canonical orders (fixed so witnesses are reproducible):

* polynomial configurations: (a, d) lexicographic, a >= 1, d >= 1;
* Schur-type and exponential triples: (x, y) lexicographic;
* avoiding colorings: lexicographic over canonical colorings (element 1 has
  color 0, new colors appear in order);
* sum subsystems: block partitions in depth-first order, each block read as
  its sorted index tuple, prefixes first.
"""

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .bigint import DEFAULT_BIT_CAP, checked_pow, pow_bits_bounds
from .combinatorics import (BlockPartition, GenSeq, IPStarResult, LargenessParams, WindowSet,
                            _block_candidates, fp, fs, is_ip_r_star, is_pws)
from .engine import DEFAULT_MAX_NODES, AvoidingSearch, bucket_edges
from .errors import BitCapExceeded, ResourceLimitError
from .polyarith import IntPoly, PolyFamily, evaluate, format_poly, parse_poly

DEFAULT_MAX_WINDOW = 10_000

WITNESS_KINDS = ("vdw", "poly-config", "schur", "product-schur", "exp", "sumsub", "tower",
                 "hj-line", "phj-pattern")


@dataclass(frozen=True)
class Coloring:
    n: int
    r: int
    assign: Tuple[int, ...]

    def __post_init__(self):
        assign = tuple(int(c) for c in self.assign)
        if self.r < 1:
            raise ValueError("r must be >= 1")
        if len(assign) != self.n:
            raise ValueError(f"coloring of [1..{self.n}] needs {self.n} colors, got {len(assign)}")
        for i, c in enumerate(assign, start=1):
            if not 0 <= c < self.r:
                raise ValueError(f"color {c} of element {i} outside 0..{self.r - 1}")
        object.__setattr__(self, "assign", assign)

    @classmethod
    def constant(cls, n, r=1, c=0):
        return cls(n, r, (c,) * n)

    @classmethod
    def from_rule(cls, n, rule, r=None):
        return cls(n, rule.r if r is None else r, tuple(rule.color(x) for x in range(1, n + 1)))

    def color(self, x):
        if 1 <= x <= self.n:
            return self.assign[x - 1]
        return None

    def classes(self):
        out = [[] for _ in range(self.r)]
        for x, c in enumerate(self.assign, start=1):
            out[c].append(x)
        return out


@dataclass(frozen=True)
class Witness:
    kind: str
    elements: Tuple[int, ...]
    color: Optional[int]
    params: Dict = field(default_factory=dict, hash=False)
    window: Optional[int] = None

    def to_dict(self):
        return {"kind": self.kind, "window": self.window, "elements": list(self.elements),
                "color": self.color, "params": self.params}


def ap_family(k):
    """{d, 2d, ..., (k-1)d}: with the anchor this is a k-term arithmetic progression."""
    if k < 2:
        raise ValueError("k must be >= 2")
    return PolyFamily(tuple(IntPoly((0, i)) for i in range(1, k)))


# ---------------------------------------------------------------- polynomial configurations

def _d_limit(F, n):
    """All d beyond this push some element of the configuration out of [1..n].

    For nonzero p of degree k with leading |c_k| >= 1 and S = sum_{i<k} |c_i|,
    |p(d)| >= d^(k-1) (d - S) >= n once d >= S + n.
    """
    best = None
    for p in F:
        if p.is_zero():
            continue
        S = sum(abs(c) for c in p.coeffs[:-1])
        lim = S + n
        best = lim if best is None else min(best, lim)
    return 1 if best is None else best


def configurations(F, n, include_anchor=True):
    """Yield (a, d, elements) for every configuration inside [1..n], in (a, d) order."""
    F = tuple(F)
    dmax = _d_limit(F, n)
    offsets = [(d, [evaluate(p, d) for p in F]) for d in range(1, dmax + 1)]
    for a in range(1, n + 1):
        for d, offs in offsets:
            elems = [a + o for o in offs]
            if include_anchor:
                elems.append(a)
            if all(1 <= e <= n for e in elems):
                yield a, d, tuple(sorted(set(elems)))


def _mono_color(coloring, elems):
    c0 = coloring.color(elems[0])
    if c0 is None:
        return None
    for e in elems[1:]:
        if coloring.color(e) != c0:
            return None
    return c0


def _config_witness(F, a, d, elems, color, n, include_anchor):
    return Witness("poly-config", elems, color,
                   {"a": a, "d": d, "polys": [format_poly(p) for p in F],
                    "include_anchor": include_anchor}, n)


def find_poly_config(c: Coloring, F: PolyFamily, include_anchor=True) -> Optional[Witness]:
    for a, d, elems in configurations(F, c.n, include_anchor):
        color = _mono_color(c, elems)
        if color is not None:
            return _config_witness(F, a, d, elems, color, c.n, include_anchor)
    return None


def find_ap(c: Coloring, k) -> Optional[Witness]:
    w = find_poly_config(c, ap_family(k), include_anchor=True)
    if w is None:
        return None
    return Witness("vdw", w.elements, w.color, {"a": w.params["a"], "d": w.params["d"], "k": k}, c.n)


# ---------------------------------------------------------------- thresholds

@dataclass(frozen=True)
class ThresholdResult:
    status: str                       # "found" | "not_found" | "capped"
    n: Optional[int]                  # least forcing window when found
    avoiding: Optional[Tuple[int, ...]]
    avoiding_n: Optional[int]         # window the avoiding coloring lives on
    searched_up_to: int               # largest window fully decided
    nodes: int

    def avoiding_coloring(self, r):
        if self.avoiding is None:
            return None
        return Coloring(self.avoiding_n, r, self.avoiding)


@dataclass(frozen=True)
class SearchCaps:
    max_nodes: Optional[int] = DEFAULT_MAX_NODES
    max_window: int = DEFAULT_MAX_WINDOW


def _threshold(edges_for, r, n_max, caps, workers):
    if r < 1:
        raise ValueError("r must be >= 1")
    if n_max > caps.max_window:
        raise ResourceLimitError(f"n_max={n_max} exceeds the window cap {caps.max_window}")
    edges = [[e - 1 for e in cfg] for cfg in edges_for(n_max)]
    buckets = bucket_edges(edges, n_max)
    nodes = 0
    last = (0, ())
    with AvoidingSearch(buckets, r, workers=workers, max_nodes=caps.max_nodes) as search:
        for n in range(1, n_max + 1):
            out = search.avoider(n)
            nodes += out.nodes
            if out.capped:
                return ThresholdResult("capped", None, last[1], last[0], last[0], nodes)
            if out.coloring is None:
                return ThresholdResult("found", n, last[1], last[0], n, nodes)
            last = (n, out.coloring)
    return ThresholdResult("not_found", None, last[1], last[0], n_max, nodes)


def pvdw_threshold(F: PolyFamily, r, n_max, include_anchor=True, caps=SearchCaps(), workers=1):
    """Least n <= n_max such that every r-coloring of [1..n] has a monochromatic F-configuration."""
    F = tuple(F)
    return _threshold(lambda n: [e for _, _, e in configurations(F, n, include_anchor)],
                      r, n_max, caps, workers)


def schur_triples(n, op="add", distinct=True):
    """(x, y, elements) in (x, y) order.

    distinct: x < y (x != y form).  Otherwise x <= y (classical Schur form).
    Multiplicative triples need x >= 2 so that the three entries are genuine.
    """
    lo = 2 if op == "mul" else 1
    for x in range(lo, n + 1):
        for y in range(x + 1 if distinct else x, n + 1):
            z = x + y if op == "add" else x * y
            if z > n:
                break
            yield x, y, tuple(sorted({x, y, z}))


def find_schur(c: Coloring, op="add", distinct=True) -> Optional[Witness]:
    if op not in ("add", "mul"):
        raise ValueError("op must be 'add' or 'mul'")
    kind = "schur" if op == "add" else "product-schur"
    for x, y, elems in schur_triples(c.n, op, distinct):
        color = _mono_color(c, elems)
        if color is not None:
            return Witness(kind, elems, color, {"x": x, "y": y, "distinct": distinct}, c.n)
    return None


def schur_threshold(r, op="add", n_max=50, distinct=True, caps=SearchCaps(), workers=1):
    if op not in ("add", "mul"):
        raise ValueError("op must be 'add' or 'mul'")
    return _threshold(lambda n: [e for _, _, e in schur_triples(n, op, distinct)],
                      r, n_max, caps, workers)


def validate_avoiding(coloring: Coloring, edges) -> bool:
    """True iff no edge (tuple of elements) is monochromatic under the coloring."""
    for e in edges:
        if _mono_color(coloring, e) is not None:
            return False
    return True


# ---------------------------------------------------------------- exponential triples

@dataclass
class ExpSearchResult:
    witness: Optional[Witness]
    skipped: list


def find_exp(c, x_max, y_max, bit_cap=DEFAULT_BIT_CAP) -> ExpSearchResult:
    """Least (x, y), x != y, x, y >= 2, with {x, y, x^y} one color."""
    skipped = []
    for x in range(2, x_max + 1):
        cx = c.color(x)
        for y in range(2, y_max + 1):
            if x == y or c.color(y) != cx or cx is None:
                continue
            try:
                z = checked_pow(x, y, bit_cap)
            except BitCapExceeded:
                skipped.append({"x": x, "y": y, "reason": "bit-cap"})
                continue
            if c.color(z) == cx:
                window = c.n if isinstance(c, Coloring) else None
                return ExpSearchResult(Witness("exp", tuple(sorted({x, y, z})), cx,
                                               {"x": x, "y": y}, window), skipped)
    return ExpSearchResult(None, skipped)


# ---------------------------------------------------------------- the set R and IP_r*

def anchor_set(A: WindowSet, offsets, include_anchor=True) -> WindowSet:
    """{m in [1..n] : m + o in A for every offset o (and m in A if include_anchor)}."""
    n = A.n
    window = ((1 << (n + 1)) - 1) ^ 1
    bits = A.bits
    acc = bits if include_anchor else window
    for o in set(offsets):
        if o > n or o < -n:
            return WindowSet(n, frozenset())
        if o >= 0:
            acc &= bits >> o
        else:
            acc &= (bits << -o) & window
        if not acc:
            break
    acc &= window
    return WindowSet(n, frozenset(m for m in range(1, n + 1) if acc >> m & 1))


def config_set_R(A: WindowSet, F: PolyFamily, params: LargenessParams) -> WindowSet:
    """R = {n : {m : {m} u {m + p(n)} inside A} is piecewise syndetic (window sense)}."""
    members = []
    for n in range(1, A.n + 1):
        M = anchor_set(A, [evaluate(p, n) for p in F], include_anchor=True)
        if M.members and is_pws(M, params) is not None:
            members.append(n)
    return WindowSet(A.n, frozenset(members))


@dataclass(frozen=True)
class IPRVerdict:
    status: str                           # "found" | "none" | "vacuous"
    r: Optional[int]
    R: WindowSet
    checks: Tuple[IPStarResult, ...]


def verify_ipr_pvdw(A: WindowSet, F: PolyFamily, params: LargenessParams, r_max,
                    distinct=True, workers=1) -> IPRVerdict:
    R = config_set_R(A, F, params)
    checks = []
    for r in range(1, r_max + 1):
        res = is_ip_r_star(R, r, distinct=distinct, workers=workers)
        checks.append(res)
        if res.status == "holds":
            return IPRVerdict("found", r, R, tuple(checks))
        if res.status == "vacuous":
            return IPRVerdict("vacuous", None, R, tuple(checks))
    return IPRVerdict("none", None, R, tuple(checks))


# ---------------------------------------------------------------- sum subsystems

@dataclass(frozen=True)
class SumSubResult:
    y: Tuple[int, ...]
    blocks: BlockPartition
    anchors: Tuple[int, ...]               # least anchor a(N) for N = 1..N_target
    anchor_sets: Tuple[WindowSet, ...]


def _pattern_offsets(F, ys):
    vals = fs(ys) | fp(ys)
    return {evaluate(p, y) for p in F for y in vals}


def sumsub_pattern_search(A: WindowSet, B: Optional[WindowSet], x, F: PolyFamily, N_target,
                          include_anchor=False, max_nodes=DEFAULT_MAX_NODES) -> Optional[SumSubResult]:
    """Search ordered block partitions of x for a sum subsystem y_1..y_{N_target} with

        { a(N) + p(y) : p in F, y in FS(y_1..y_N) u FP(y_1..y_N) } inside A

    for some anchor a(N) in [1..n] and every N <= N_target.  With include_anchor
    the anchor itself must lie in A too.  If B is given, FP(y) must lie inside B.
    """
    xs = tuple(x.xs if isinstance(x, GenSeq) else x)
    F = tuple(F)
    if N_target < 1:
        raise ValueError("N_target must be >= 1")
    k = len(xs)
    nodes = 0
    blocks, ys, sets = [], [], []

    def rec(start):
        nonlocal nodes
        idx = len(blocks)
        if idx == N_target:
            return True
        for block in _block_candidates(start, k, N_target - idx - 1):
            nodes += 1
            if nodes > max_nodes:
                raise ResourceLimitError(f"sum-subsystem search exceeded {max_nodes} nodes")
            y = sum(xs[i - 1] for i in block)
            cand = ys + [y]
            if B is not None and not all(v in B.members for v in fp(cand)):
                continue
            S = anchor_set(A, _pattern_offsets(F, cand), include_anchor)
            if not S.members:
                continue
            blocks.append(block)
            ys.append(y)
            sets.append(S)
            if rec(block[-1] + 1):
                return True
            blocks.pop()
            ys.pop()
            sets.pop()
        return False

    if not rec(1):
        return None
    return SumSubResult(tuple(ys), BlockPartition(tuple(blocks)),
                        tuple(min(s.members) for s in sets), tuple(sets))


def sumsub_witness(res: SumSubResult, x, F, include_anchor=False, window=None):
    F = tuple(F)
    elems = set()
    for N, a in enumerate(res.anchors, start=1):
        ys = res.y[:N]
        elems |= {a + o for o in _pattern_offsets(F, ys)}
        if include_anchor:
            elems.add(a)
    xs = list(x.xs if isinstance(x, GenSeq) else x)
    return Witness("sumsub", tuple(sorted(elems)), 1,
                   {"x": xs, "blocks": [list(b) for b in res.blocks.blocks], "y": list(res.y),
                    "polys": [format_poly(p) for p in F], "anchors": list(res.anchors),
                    "include_anchor": include_anchor}, window)


# ---------------------------------------------------------------- cube witnesses

def hj_witness(cube, word) -> Witness:
    """Witness for a monochromatic line; elements are 1-based row-major point indices."""
    from . import hjspace
    pts = hjspace.line(word, cube.q)
    return Witness("hj-line", tuple(hjspace.point_index(p, cube.q) + 1 for p in pts), cube.color(pts[0]),
                   {"word": hjspace.format_word(word), "t": cube.q, "N": cube.N})


def phj_witness(cube, a, gamma) -> Witness:
    from . import hjspace
    pts = [p.flat() for p in hjspace.phj_pattern(a, gamma)]
    return Witness("phj-pattern", tuple(sorted({hjspace.point_index(p, cube.q) + 1 for p in pts})),
                   cube.color(pts[0]), {"a": [list(lv) for lv in a.levels], "gamma": list(gamma)})


# ---------------------------------------------------------------- witness validation

@dataclass
class Context:
    """What a witness is checked against; fields irrelevant to a kind may be None."""
    coloring: object = None          # Coloring or RuleColoring
    A: Optional[WindowSet] = None
    B: Optional[WindowSet] = None
    cube: object = None              # hjspace.CubeColoring
    bit_cap: int = DEFAULT_BIT_CAP


def _fail(msg, diag):
    if diag is not None:
        diag.append(msg)
    return False


def _check_mono(w, coloring, expected, diag):
    if coloring is None:
        return _fail("no coloring supplied", diag)
    if sorted(set(expected)) != sorted(set(w.elements)):
        return _fail(f"elements {list(w.elements)} do not match parameters ({sorted(set(expected))})", diag)
    if isinstance(coloring, Coloring):
        out = [e for e in expected if not 1 <= e <= coloring.n]
        if out:
            return _fail(f"elements {out} outside window [1..{coloring.n}]", diag)
        if w.window is not None and w.window != coloring.n:
            return _fail(f"witness window {w.window} differs from coloring window {coloring.n}", diag)
    colors = {coloring.color(e) for e in expected}
    if None in colors:
        return _fail("element outside the coloring's domain", diag)
    if colors != {w.color}:
        return _fail(f"colors {sorted(colors)} are not all {w.color}", diag)
    return True


def validate_witness(w: Witness, ctx: Context, diag: Optional[list] = None) -> bool:
    """Recompute every element and membership from scratch."""
    p = w.params
    try:
        if w.kind == "vdw":
            a, d, k = int(p["a"]), int(p["d"]), int(p["k"])
            if d < 1 or k < 2:
                return _fail("vdw needs d >= 1, k >= 2", diag)
            return _check_mono(w, ctx.coloring, [a + i * d for i in range(k)], diag)
        if w.kind == "poly-config":
            a, d = int(p["a"]), int(p["d"])
            if d < 1:
                return _fail("d must be >= 1", diag)
            F = [parse_poly(s) for s in p["polys"]]
            elems = [a + evaluate(q, d) for q in F]
            if p.get("include_anchor", True):
                elems.append(a)
            return _check_mono(w, ctx.coloring, elems, diag)
        if w.kind in ("schur", "product-schur"):
            x, y = int(p["x"]), int(p["y"])
            distinct = p.get("distinct", True)
            if x > y or (distinct and x == y) or x < 1:
                return _fail("need x < y (x <= y when not distinct)", diag)
            if w.kind == "product-schur" and x < 2:
                return _fail("product triples need x >= 2", diag)
            z = x + y if w.kind == "schur" else x * y
            return _check_mono(w, ctx.coloring, [x, y, z], diag)
        if w.kind == "exp":
            x, y = int(p["x"]), int(p["y"])
            if x == y or min(x, y) < 2:
                return _fail("need x != y, both >= 2", diag)
            return _check_mono(w, ctx.coloring, [x, y, checked_pow(x, y, ctx.bit_cap)], diag)
        if w.kind == "tower":
            from .combinatorics import fep
            seq = [int(v) for v in p["xs"]]
            if any(b <= a for a, b in zip(seq, seq[1:])):
                return _fail("tower generators must be increasing", diag)
            return _check_mono(w, ctx.coloring, sorted(fep(seq, ctx.bit_cap)), diag)
        if w.kind == "sumsub":
            return _validate_sumsub(w, ctx, diag)
        if w.kind == "hj-line":
            return _validate_hj(w, ctx, diag)
        if w.kind == "phj-pattern":
            return _validate_phj(w, ctx, diag)
    except (KeyError, TypeError, ValueError) as exc:
        return _fail(f"malformed witness parameters: {exc}", diag)
    return _fail(f"unknown witness kind {w.kind!r}", diag)


def _validate_sumsub(w, ctx, diag):
    p = w.params
    if ctx.A is None:
        return _fail("no set A supplied", diag)
    xs = [int(v) for v in p["x"]]
    try:
        blocks = BlockPartition(tuple(tuple(b) for b in p["blocks"]))
    except ValueError as exc:
        return _fail(f"bad blocks: {exc}", diag)
    if any(not 1 <= i <= len(xs) for b in blocks.blocks for i in b):
        return _fail("block index outside x", diag)
    ys = list(blocks.sums(xs))
    if ys != [int(v) for v in p["y"]]:
        return _fail(f"y={p['y']} does not match block sums {ys}", diag)
    if not fs(ys) <= fs(xs):
        return _fail("FS(y) not inside FS(x)", diag)
    F = [parse_poly(s) for s in p["polys"]]
    anchors = [int(a) for a in p["anchors"]]
    if len(anchors) != len(ys):
        return _fail("need one anchor per level", diag)
    include_anchor = p.get("include_anchor", False)
    elems = set()
    for N, a in enumerate(anchors, start=1):
        if not 1 <= a <= ctx.A.n:
            return _fail(f"anchor {a} outside window", diag)
        vals = fs(ys[:N]) | fp(ys[:N])
        need = {a + evaluate(q, y) for q in F for y in vals}
        if include_anchor:
            need.add(a)
        missing = sorted(v for v in need if v not in ctx.A.members)
        if missing:
            return _fail(f"level {N}: {missing[:5]} not in A", diag)
        elems |= need
    if ctx.B is not None:
        missing = sorted(v for v in fp(ys) if v not in ctx.B.members)
        if missing:
            return _fail(f"FP(y) elements {missing[:5]} not in B", diag)
    if sorted(elems) != sorted(set(w.elements)):
        return _fail("elements do not match the recomputed pattern", diag)
    return True


def _validate_hj(w, ctx, diag):
    from . import hjspace
    cube = ctx.cube
    if cube is None or cube.kind != "hj":
        return _fail("no HJ cube coloring supplied", diag)
    word = hjspace.parse_word(w.params["word"])
    if len(word) != cube.N or not hjspace.is_variable_word(word) or max(word) > cube.q:
        return _fail("word is not a variable word of the cube", diag)
    pts = hjspace.line(word, cube.q)
    if sorted(set(w.elements)) != sorted(hjspace.point_index(pt, cube.q) + 1 for pt in pts):
        return _fail("elements are not the row-major indices of the line", diag)
    colors = {cube.color(pt) for pt in pts}
    if colors != {w.color}:
        return _fail(f"line colors {sorted(colors)} are not all {w.color}", diag)
    return True


def _validate_phj(w, ctx, diag):
    from . import hjspace
    cube = ctx.cube
    if cube is None or cube.kind != "phj":
        return _fail("no PHJ cube coloring supplied", diag)
    a = hjspace.PHJPoint(cube.q, cube.N, tuple(tuple(lv) for lv in w.params["a"]))
    if a.d != cube.d:
        return _fail("point depth differs from cube", diag)
    gamma = hjspace.check_gamma(w.params["gamma"], cube.N)
    pts = [pt.flat() for pt in hjspace.phj_pattern(a, gamma)]
    if sorted(set(w.elements)) != sorted({hjspace.point_index(pt, cube.q) + 1 for pt in pts}):
        return _fail("elements are not the row-major indices of the pattern", diag)
    colors = {cube.color(pt) for pt in pts}
    if colors != {w.color}:
        return _fail(f"pattern colors {sorted(colors)} are not all {w.color}", diag)
    return True
