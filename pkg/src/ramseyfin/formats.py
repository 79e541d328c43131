"""Text formats for colorings, window sets and cube colorings; JSON for witnesses and reports.

Coloring file::

    n r
    c_1 c_2 ... c_n            (colors 0..r-1, any whitespace)

or a single line ``rule: <rule>`` for a rule coloring of all positive integers.
A header ``n r`` followed by ``rule: <rule>`` materializes the rule on [1..n].

Window-set file::

    n
    list: a b c ...      |      rule: <rule>      (members = nonzero rule color)

Cube coloring file::

    hj t N r                    |   phj q N d r
    colors in row-major point order, or  rule: <feature> <rule>
    with feature one of  sum | index | coord:K
"""

import json
import sys

from .combinatorics import WindowSet
from .errors import ParseError
from .hjspace import CubeColoring, N_coords, cube_rule, hj_coloring, phj_coloring
from .rules import RuleColoring, parse_rule
from .search import Coloring, Witness

SCHEMA = 1

if hasattr(sys, "set_int_max_str_digits"):
    # tower values routinely exceed the default decimal-conversion limit
    sys.set_int_max_str_digits(0)


def _lines(text):
    return [ln.strip() for ln in str(text).splitlines() if ln.strip() and not ln.strip().startswith("#")]


def _int(tok, what):
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected integer for {what}, got {tok!r}", token=tok) from None


# ---------------------------------------------------------------- colorings

def parse_coloring(text):
    lines = _lines(text)
    if not lines:
        raise ParseError("empty coloring file", token="")
    if lines[0].startswith("rule:"):
        if len(lines) > 1:
            raise ParseError("unexpected content after rule line", token=lines[1])
        return parse_rule(lines[0][len("rule:"):])
    head = lines[0].split()
    if len(head) != 2:
        raise ParseError(f"header must be 'n r', got {lines[0]!r}", token=lines[0])
    n, r = _int(head[0], "n"), _int(head[1], "r")
    if n < 0 or r < 1:
        raise ParseError(f"bad header {lines[0]!r}", token=lines[0])
    body = lines[1:]
    if body and body[0].startswith("rule:"):
        if len(body) > 1:
            raise ParseError("unexpected content after rule line", token=body[1])
        rule = parse_rule(body[0][len("rule:"):], r=r)
        return Coloring.from_rule(n, rule, r)
    toks = " ".join(body).split()
    if len(toks) != n:
        raise ParseError(f"expected {n} colors, got {len(toks)}", token=toks[n] if len(toks) > n else lines[-1])
    assign = []
    for tok in toks:
        c = _int(tok, "color")
        if not 0 <= c < r:
            raise ParseError(f"color index {c} outside 0..{r - 1}", token=tok)
        assign.append(c)
    return Coloring(n, r, tuple(assign))


def format_coloring(c):
    if isinstance(c, RuleColoring):
        return f"rule: {c.expr}\n"
    return f"{c.n} {c.r}\n{' '.join(map(str, c.assign))}\n"


# ---------------------------------------------------------------- window sets

def parse_windowset(text):
    lines = _lines(text)
    if len(lines) != 2:
        raise ParseError("window set needs exactly two lines: n, then list:/rule:",
                         token=lines[2] if len(lines) > 2 else (lines[0] if lines else ""))
    n = _int(lines[0], "n")
    if n < 0:
        raise ParseError("window end must be >= 0", token=lines[0])
    body = lines[1]
    if body.startswith("list:"):
        members = []
        for tok in body[len("list:"):].split():
            m = _int(tok, "member")
            if not 1 <= m <= n:
                raise ParseError(f"member {m} outside [1..{n}]", token=tok)
            members.append(m)
        return WindowSet(n, frozenset(members))
    if body.startswith("rule:"):
        rule = parse_rule(body[len("rule:"):])
        return WindowSet.from_predicate(n, lambda m: rule.color(m) != 0)
    raise ParseError(f"expected 'list:' or 'rule:', got {body!r}", token=body.split()[0])


def format_windowset(A):
    return f"{A.n}\nlist: {' '.join(map(str, A.sorted()))}\n"


# ---------------------------------------------------------------- cubes

def parse_cube(text):
    lines = _lines(text)
    if not lines:
        raise ParseError("empty cube file", token="")
    head = lines[0].split()
    kind = head[0]
    if kind == "hj" and len(head) == 4:
        q, N, r = (_int(t, "header") for t in head[1:])
        d = 1
    elif kind == "phj" and len(head) == 5:
        q, N, d, r = (_int(t, "header") for t in head[1:])
    else:
        raise ParseError(f"cube header must be 'hj t N r' or 'phj q N d r', got {lines[0]!r}", token=head[0])
    if min(q, N, d, r) < 1:
        raise ParseError(f"bad cube header {lines[0]!r}", token=lines[0])
    make = hj_coloring if kind == "hj" else (lambda q_, N_, r_, **kw: phj_coloring(q_, N_, d, r_, **kw))
    body = lines[1:]
    if body and body[0].startswith("rule:"):
        parts = body[0][len("rule:"):].split(None, 1)
        if len(parts) != 2:
            raise ParseError("cube rule needs '<feature> <rule>'", token=body[0])
        int_rule = parse_rule(parts[1], r=r)
        return make(q, N, r, rule=cube_rule(parts[0], int_rule, q),
                    rule_text=f"{parts[0]} {int_rule.expr}")
    coords = N if kind == "hj" else N_coords(N, d)
    toks = " ".join(body).split()
    if len(toks) != q ** coords:
        raise ParseError(f"expected {q ** coords} colors, got {len(toks)}",
                         token=toks[q ** coords] if len(toks) > q ** coords else lines[-1])
    colors = []
    for tok in toks:
        c = _int(tok, "color")
        if not 0 <= c < r:
            raise ParseError(f"color index {c} outside 0..{r - 1}", token=tok)
        colors.append(c)
    return make(q, N, r, colors=tuple(colors))


def format_cube(c: CubeColoring):
    head = f"hj {c.q} {c.N} {c.r}" if c.kind == "hj" else f"phj {c.q} {c.N} {c.d} {c.r}"
    if c.dense is None:
        return f"{head}\nrule: {c.rule_text}\n"
    return f"{head}\n{' '.join(map(str, c.dense))}\n"


# ---------------------------------------------------------------- witnesses and reports

def witness_to_json(w: Witness, context=None):
    out = {"schema": SCHEMA, **w.to_dict()}
    if context:
        out["context"] = context
    return out


def witness_from_json(obj):
    if obj.get("schema") != SCHEMA:
        raise ParseError(f"unsupported witness schema {obj.get('schema')!r}", token=str(obj.get("schema")))
    try:
        return Witness(obj["kind"], tuple(int(e) for e in obj["elements"]), obj["color"],
                       dict(obj.get("params") or {}), obj.get("window"))
    except KeyError as exc:
        raise ParseError(f"witness missing field {exc}", token=str(exc)) from None


def dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def strip_perf(report):
    return {k: v for k, v in report.items() if k != "perf"}
