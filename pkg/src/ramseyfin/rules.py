"""Rule colorings: pure, total colorings of the positive integers.

Grammar::

    rule     := mod | bits | thresh | lead | compose
    mod      := "mod:" m ":" c_0 "," ... "," c_{m-1}      color = c[x mod m]
    bits     := "bits:" t_1 "," t_2 ...                   color = #{i : bitlen(x) >= t_i}
    thresh   := "thresh:" t_1 "," t_2 ...                 color = #{i : x >= t_i}
    lead     := "lead:" b ":" c_1 "," ... "," c_{b-1}     color = c[leading base-b digit]
    compose  := "compose(" rule ";" rule ";" table ")"    color = table[c1 * r2 + c2]

Rule colorings exist because tower values are far too large for a dense window.
"""

from dataclasses import dataclass, field
from math import log
from typing import Callable

from .errors import ParseError


@dataclass(frozen=True)
class RuleColoring:
    expr: str
    r: int
    rule: Callable[[int], int] = field(compare=False, repr=False)

    def color(self, x):
        if x < 1:
            return None
        return self.rule(x)

    def __str__(self):
        return self.expr


def _ints(text, what):
    try:
        return [int(t) for t in text.split(",") if t != ""]
    except ValueError:
        raise ParseError(f"bad integer list in {what}: {text!r}", token=text) from None


def _leading_digit(x, b):
    if b == 2:
        return 1
    k = int((x.bit_length() - 1) * log(2) / log(b))
    while b ** (k + 1) <= x:
        k += 1
    while k > 0 and b ** k > x:
        k -= 1
    return x // b ** k


def _split_top(text, sep):
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def _compile(src):
    """Return (callable, color_count)."""
    if src.startswith("compose(") and src.endswith(")"):
        parts = _split_top(src[len("compose("):-1], ";")
        if len(parts) != 3:
            raise ParseError(f"compose needs rule;rule;table, got {src!r}", token=src)
        f1, r1 = _compile(parts[0])
        f2, r2 = _compile(parts[1])
        table = _ints(parts[2], "compose table")
        if len(table) != r1 * r2:
            raise ParseError(f"compose table needs {r1 * r2} entries, got {len(table)}", token=parts[2])
        if min(table) < 0:
            raise ParseError("negative color in compose table", token=parts[2])
        return (lambda x: table[f1(x) * r2 + f2(x)]), max(table) + 1
    name, _, rest = src.partition(":")
    if name == "mod":
        m_text, _, cols_text = rest.partition(":")
        try:
            m = int(m_text)
        except ValueError:
            raise ParseError(f"bad modulus {m_text!r}", token=m_text) from None
        cols = _ints(cols_text, "mod")
        if m < 1 or len(cols) != m:
            raise ParseError(f"mod:{m} needs exactly {m} colors", token=src)
        if min(cols) < 0:
            raise ParseError("negative color", token=cols_text)
        return (lambda x: cols[x % m]), max(cols) + 1
    if name == "bits":
        ts = sorted(_ints(rest, "bits"))
        return (lambda x: sum(1 for t in ts if x.bit_length() >= t)), len(ts) + 1
    if name == "thresh":
        ts = sorted(_ints(rest, "thresh"))
        return (lambda x: sum(1 for t in ts if x >= t)), len(ts) + 1
    if name == "lead":
        b_text, _, cols_text = rest.partition(":")
        try:
            b = int(b_text)
        except ValueError:
            raise ParseError(f"bad base {b_text!r}", token=b_text) from None
        cols = _ints(cols_text, "lead")
        if b < 2 or len(cols) != b - 1:
            raise ParseError(f"lead:{b} needs exactly {b - 1} colors", token=src)
        return (lambda x: cols[_leading_digit(x, b) - 1]), max(cols) + 1
    raise ParseError(f"unknown rule {name!r}", token=name)


def parse_rule(text, r=None):
    src = "".join(str(text).split())
    if not src:
        raise ParseError("empty rule", token="")
    fn, count = _compile(src)
    if r is None:
        r = count
    elif count > r:
        raise ParseError(f"rule {src!r} uses {count} colors but r={r}", token=src)
    return RuleColoring(src, r, fn)
