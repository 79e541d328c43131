"""Exponential machinery: n^a * b, the f_k tower recursion, and exponential patterns.

Values here routinely exceed any dense window, so colorings are rule colorings
(see ``rules``).  Every size overflow is per element: the element is skipped,
recorded, and the run is flagged incomplete.  Overflows are never dropped
silently.
"""

import itertools
import re
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

from .bigint import DEFAULT_BIT_CAP, checked_mul, checked_pow
from .combinatorics import fep_blocks, fep_chains, fp, fs
from .errors import BitCapExceeded, ParseError, ResourceLimitError
from .polyarith import evaluate
from .rules import RuleColoring, parse_rule  # noqa: F401  (re-exported)

DEFAULT_ENUM_CAP = 1_000_000


# ---------------------------------------------------------------- tower expressions

@dataclass(frozen=True)
class Literal:
    value: int

    def __post_init__(self):
        if self.value < 1:
            raise ValueError("tower literals must be >= 1")

    def evaluate(self, bit_cap=DEFAULT_BIT_CAP):
        return self.value

    def prefix(self):
        return str(self.value)


@dataclass(frozen=True)
class Power:
    base: "TowerExpr"
    exponent: "TowerExpr"

    def evaluate(self, bit_cap=DEFAULT_BIT_CAP):
        return checked_pow(self.base.evaluate(bit_cap), self.exponent.evaluate(bit_cap), bit_cap)

    def prefix(self):
        return f"(^ {self.base.prefix()} {self.exponent.prefix()})"


TowerExpr = Union[Literal, Power]

_TOKEN = re.compile(r"\(|\)|\^|\d+")


def parse_tower(text) -> TowerExpr:
    src = str(text)
    tokens = _TOKEN.findall(src)
    leftover = _TOKEN.sub("", src).strip()
    if leftover:
        raise ParseError(f"unexpected characters {leftover!r} in tower expression", token=leftover)
    pos = 0

    def expr():
        nonlocal pos
        if pos >= len(tokens):
            raise ParseError("truncated tower expression", token=src)
        tok = tokens[pos]
        pos += 1
        if tok.isdigit():
            return Literal(int(tok))
        if tok == "(":
            if pos >= len(tokens) or tokens[pos] != "^":
                raise ParseError("expected '^' after '('", token=tokens[pos] if pos < len(tokens) else src)
            pos += 1
            base = expr()
            exponent = expr()
            if pos >= len(tokens) or tokens[pos] != ")":
                raise ParseError("expected ')'", token=tokens[pos] if pos < len(tokens) else src)
            pos += 1
            return Power(base, exponent)
        raise ParseError(f"unexpected token {tok!r}", token=tok)

    out = expr()
    if pos != len(tokens):
        raise ParseError(f"trailing tokens after expression: {tokens[pos:]}", token=tokens[pos])
    return out


# ---------------------------------------------------------------- star and f_k

def star(n, a, b, bit_cap=DEFAULT_BIT_CAP):
    """a *_n b = n^a * b."""
    if n < 2 or a < 1 or b < 1:
        raise ValueError("star needs n >= 2, a >= 1, b >= 1")
    return checked_mul(checked_pow(n, a, bit_cap), b, bit_cap)


@dataclass(frozen=True)
class FSeq:
    k: int
    x: int
    expr: TowerExpr
    value: Optional[int]      # None when the value is over the bit cap
    capped: bool


def f_expr(k, x):
    """Symbolic f_k(x): f_2 = (^ 2 x), f_{k+1} = (^ (^ 2 x) f_k)."""
    if k < 2 or x < 1:
        raise ValueError("f_k needs k >= 2, x >= 1")
    e = Power(Literal(2), Literal(x))
    for _ in range(k - 2):
        e = Power(Power(Literal(2), Literal(x)), e)
    return e


def f_value(k, x, bit_cap=DEFAULT_BIT_CAP):
    """Exact f_k(x) using f_k = 2^(x * f_{k-1}).  Raises BitCapExceeded."""
    if k < 2 or x < 1:
        raise ValueError("f_k needs k >= 2, x >= 1")
    v = checked_pow(2, x, bit_cap)
    for _ in range(k - 2):
        if x * v + 1 > bit_cap:
            raise BitCapExceeded(f"f_{k}({x}) needs more than {bit_cap} bits", bits=None)
        v = 1 << (x * v)
    return v


def f_seq(k, x, bit_cap=DEFAULT_BIT_CAP) -> FSeq:
    expr = f_expr(k, x)
    try:
        return FSeq(k, x, expr, f_value(k, x, bit_cap), False)
    except BitCapExceeded:
        return FSeq(k, x, expr, None, True)


# ---------------------------------------------------------------- PF patterns

@dataclass
class PatternSet:
    values: set = field(default_factory=set)
    omitted: list = field(default_factory=list)

    @property
    def complete(self):
        return not self.omitted


def pf_pattern(n, xs, poly_choices, k_max, bit_cap=DEFAULT_BIT_CAP, enum_cap=DEFAULT_ENUM_CAP):
    """{ x_k * n^(p_1(x_1) + ... + p_{k-1}(x_{k-1})) : k <= k_max, p_i in poly_choices[i-1] }.

    Negative exponent sums give non-integers and are omitted with reason
    "negative-exponent".
    """
    xs = tuple(xs)
    if n < 2:
        raise ValueError("n must be >= 2")
    if not 1 <= k_max <= len(xs):
        raise ValueError(f"k_max={k_max} must lie in 1..{len(xs)}")
    if len(poly_choices) < k_max - 1:
        raise ValueError(f"need polynomial choices for indices 1..{k_max - 1}")
    out = PatternSet()
    count = 0
    for k in range(1, k_max + 1):
        fams = [list(poly_choices[i]) for i in range(k - 1)]
        for choice in itertools.product(*fams):
            count += 1
            if count > enum_cap:
                raise ResourceLimitError(f"pattern enumeration exceeds {enum_cap} elements")
            e = sum(evaluate(p, xs[i]) for i, p in enumerate(choice))
            if e < 0:
                out.omitted.append({"k": k, "exponent": e, "reason": "negative-exponent"})
                continue
            try:
                out.values.add(checked_mul(checked_pow(n, e, bit_cap), xs[k - 1], bit_cap))
            except BitCapExceeded:
                out.omitted.append({"k": k, "exponent": e, "reason": "bit-cap"})
    return out


def pf_block_pattern(n, blocks, poly_choices, k_max, bit_cap=DEFAULT_BIT_CAP, enum_cap=DEFAULT_ENUM_CAP):
    """Block form: z_k * n^(sum p_i(y_i)) with y_i in FS(G_i) u FP(G_i) and z_k in FS(G_k)."""
    if not 1 <= k_max <= len(blocks):
        raise ValueError(f"k_max={k_max} must lie in 1..{len(blocks)}")
    ys = [sorted(fs(b) | fp(b)) for b in blocks]
    zs = [sorted(fs(b)) for b in blocks]
    out = PatternSet()
    count = 0
    for k in range(1, k_max + 1):
        fams = [list(poly_choices[i]) for i in range(k - 1)]
        for choice in itertools.product(*fams):
            for yv in itertools.product(*ys[:k - 1]):
                e = sum(evaluate(p, y) for p, y in zip(choice, yv))
                for z in zs[k - 1]:
                    count += 1
                    if count > enum_cap:
                        raise ResourceLimitError(f"pattern enumeration exceeds {enum_cap} elements")
                    if e < 0:
                        out.omitted.append({"k": k, "exponent": e, "reason": "negative-exponent"})
                        continue
                    try:
                        out.values.add(checked_mul(checked_pow(n, e, bit_cap), z, bit_cap))
                    except BitCapExceeded:
                        out.omitted.append({"k": k, "exponent": e, "reason": "bit-cap"})
    return out


# ---------------------------------------------------------------- lambda patterns

def _lambda_bound(i, a_seq, N, f_bounds, bit_cap):
    """Upper bound for lambda_i (1-based).  lambda_1 <= N; missing f bounds fall back to N."""
    if i == 1:
        return N
    entry = None
    if f_bounds is not None and i - 2 < len(f_bounds):
        entry = f_bounds[i - 2]
    if entry is None:
        return N
    if isinstance(entry, int):
        return entry
    return entry(a_seq[i - 2])


def tower_bounds(k_max, bit_cap=DEFAULT_BIT_CAP):
    """f_bounds entries f_2, ..., f_{k_max} built from the f_k recursion."""
    return [(lambda a, k=k: f_value(k, a, bit_cap)) for k in range(2, k_max + 1)]


def lambda_pattern(a_seq, N, f_bounds=None, bit_cap=DEFAULT_BIT_CAP, enum_cap=DEFAULT_ENUM_CAP):
    """Yield (k, lambdas, value-or-None) over the pattern a_k * 2^(sum lambda_i a_i) in order."""
    a_seq = tuple(a_seq)
    count = 0
    for k in range(1, len(a_seq) + 1):
        ranges = []
        size = 1
        for i in range(1, k):
            b = _lambda_bound(i, a_seq, N, f_bounds, bit_cap)
            ranges.append(range(b + 1))
            size *= b + 1
        if count + size > enum_cap:
            raise ResourceLimitError(f"lambda enumeration exceeds {enum_cap} elements")
        for lams in itertools.product(*ranges):
            count += 1
            e = sum(l * a for l, a in zip(lams, a_seq))
            try:
                yield k, lams, checked_mul(checked_pow(2, e, bit_cap), a_seq[k - 1], bit_cap)
            except BitCapExceeded:
                yield k, lams, None


@dataclass
class LambdaCheck:
    failing: Optional[int]
    failing_at: Optional[dict]
    checked: int
    omitted: list

    @property
    def monochromatic(self):
        return self.failing is None


def check_lambda_pattern(a_seq, N, f_bounds, coloring, bit_cap=DEFAULT_BIT_CAP,
                         enum_cap=DEFAULT_ENUM_CAP) -> LambdaCheck:
    """First pattern element whose color differs from the first element's color."""
    ref = None
    checked = 0
    omitted = []
    for k, lams, value in lambda_pattern(a_seq, N, f_bounds, bit_cap, enum_cap):
        if value is None:
            omitted.append({"k": k, "lambdas": list(lams), "reason": "bit-cap"})
            continue
        checked += 1
        c = coloring.color(value)
        if ref is None:
            ref = c
        elif c != ref:
            return LambdaCheck(value, {"k": k, "lambdas": list(lams)}, checked, omitted)
    return LambdaCheck(None, None, checked, omitted)


# ---------------------------------------------------------------- FEP search

@dataclass
class FEPSearchResult:
    seq: Optional[Tuple[int, ...]]
    color: Optional[int]
    elements: Optional[List[int]]
    skipped: list
    examined: int


def _mono(values, coloring):
    it = iter(values)
    c0 = coloring.color(next(it))
    if c0 is None:
        return None
    for v in it:
        if coloring.color(v) != c0:
            return None
    return c0


def fep_monochrome_search(candidates, set_size, coloring, bit_cap=DEFAULT_BIT_CAP) -> FEPSearchResult:
    """First increasing sequence from ``candidates`` whose whole FEP is one color."""
    cands = sorted(set(candidates))
    if cands and cands[0] < 2:
        raise ValueError("tower candidates must be >= 2")
    skipped = []
    examined = 0
    for seq in itertools.combinations(cands, set_size):
        examined += 1
        # singletons first: cheap rejection before building towers
        c0 = coloring.color(seq[0])
        if any(coloring.color(x) != c0 for x in seq[1:]):
            continue
        try:
            values = fep_chains(seq, bit_cap)
        except BitCapExceeded as exc:
            skipped.append({"seq": list(seq), "chain": list(exc.chain or ()), "reason": "bit-cap"})
            continue
        c = _mono(sorted(values.values()), coloring)
        if c is not None:
            return FEPSearchResult(seq, c, sorted(set(values.values())), skipped, examined)
    return FEPSearchResult(None, None, None, skipped, examined)


def fep_block_search(blocks, set_size, coloring, bit_cap=DEFAULT_BIT_CAP) -> FEPSearchResult:
    """Block variant: choose blocks G_{j_1} < ... and require every tower with levels in FP(G_j) to share a color."""
    blocks = [tuple(sorted(b)) for b in blocks]
    skipped = []
    examined = 0
    for idx in itertools.combinations(range(len(blocks)), set_size):
        examined += 1
        chosen = [blocks[i] for i in idx]
        try:
            values = fep_blocks(chosen, bit_cap)
        except BitCapExceeded:
            skipped.append({"blocks": [list(b) for b in chosen], "reason": "bit-cap"})
            continue
        c = _mono(sorted(values), coloring)
        if c is not None:
            return FEPSearchResult(tuple(idx), c, sorted(values), skipped, examined)
    return FEPSearchResult(None, None, None, skipped, examined)
