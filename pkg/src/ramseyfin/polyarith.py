"""Integer polynomials with zero constant term.

Coefficients are plain Python ints, so evaluation and the shift/dilate
transforms never wrap around.  A polynomial is stored as its ascending
coefficient tuple with trailing zeros trimmed; the zero polynomial is ``(0,)``.
"""

import itertools
import re
from dataclasses import dataclass
from math import comb
from typing import Iterable, Iterator, Tuple

from .errors import ParseError, ResourceLimitError

DEFAULT_FAMILY_CAP = 1_000_000


@dataclass(frozen=True)
class IntPoly:
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        cs = [int(c) for c in self.coeffs] or [0]
        if cs[0] != 0:
            raise ValueError(f"nonzero constant term {cs[0]}: polynomial not in the zero-constant class")
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def monomial(cls, degree, coefficient=1):
        if degree < 1:
            raise ValueError("monomial degree must be >= 1")
        return cls((0,) * degree + (coefficient,))

    def is_zero(self):
        return self.coeffs == (0,)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __call__(self, x):
        return evaluate(self, x)

    def __str__(self):
        return format_poly(self)


ZERO = IntPoly((0,))
IDENTITY = IntPoly((0, 1))


@dataclass(frozen=True)
class PolyFamily:
    polys: Tuple[IntPoly, ...]

    def __post_init__(self):
        polys = tuple(self.polys)
        if not polys:
            raise ValueError("polynomial family must be nonempty")
        if len(set(polys)) != len(polys):
            raise ValueError("polynomial family contains duplicates")
        object.__setattr__(self, "polys", polys)

    @classmethod
    def of(cls, *items):
        """Build from IntPoly values or mini-language strings."""
        return cls(tuple(parse_poly(p) if isinstance(p, str) else p for p in items))

    def __iter__(self) -> Iterator[IntPoly]:
        return iter(self.polys)

    def __len__(self):
        return len(self.polys)

    def labels(self):
        return [format_poly(p) for p in self.polys]


def evaluate(p, x):
    """Horner evaluation, exact."""
    acc = 0
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def shift(p, y):
    """The polynomial n -> p(n + y) - p(y)."""
    cs = p.coeffs
    out = [0] * len(cs)
    for i, c in enumerate(cs):
        if c == 0:
            continue
        ypow = 1
        # walk k downward from i so y^(i-k) is built incrementally
        for k in range(i, -1, -1):
            out[k] += c * comb(i, k) * ypow
            ypow *= y
    out[0] = 0
    return IntPoly(tuple(out))


def dilate(p, y):
    """The polynomial n -> p(y * n)."""
    return IntPoly(tuple(c * y ** i for i, c in enumerate(p.coeffs)))


def deg_coef(p):
    """(degree, max |coefficient|); the zero polynomial gives (0, 0)."""
    if p.is_zero():
        return 0, 0
    return p.degree, max(abs(c) for c in p.coeffs)


def family_size(deg_bound, coef_bound, include_zero=False):
    total = (2 * coef_bound + 1) ** deg_bound
    return total if include_zero else total - 1


def enumerate_family(deg_bound, coef_bound, include_zero=False, cap=DEFAULT_FAMILY_CAP):
    """All p with deg(p) <= deg_bound and coef(p) <= coef_bound.

    Ordered by degree, then by coefficient tuple read from the top degree down.
    """
    if deg_bound < 1 and not include_zero:
        raise ValueError("deg_bound must be >= 1 unless the zero polynomial is included")
    if deg_bound < 0 or coef_bound < 0:
        raise ValueError("bounds must be nonnegative")
    size = family_size(deg_bound, coef_bound, include_zero)
    if size > cap:
        raise ResourceLimitError(f"family of {size} polynomials exceeds cap {cap}")
    values = range(-coef_bound, coef_bound + 1)
    polys = [ZERO] if include_zero else []
    for deg in range(1, deg_bound + 1):
        lead_values = [v for v in values if v != 0]
        for lead in lead_values:
            for lower in itertools.product(values, repeat=deg - 1):
                polys.append(IntPoly((0,) + tuple(reversed(lower)) + (lead,)))
    return PolyFamily(tuple(polys))


_TERM = re.compile(r"(?P<coef>\d+)?\s*(?P<star>\*)?\s*(?P<var>d(?:\s*\^\s*(?P<exp>\d+))?)?")


def parse_poly(text):
    """Parse the mini-language: terms ``c*d^k``, ``d^k``, ``c*d``, ``cd``, ``d`` joined by +/-."""
    if text is None:
        raise ParseError("empty polynomial", token="")
    src = "".join(str(text).split())
    if not src:
        raise ParseError("empty polynomial", token="")
    coeffs = {}
    pos = 0
    first = True
    while pos < len(src):
        sign = 1
        if src[pos] in "+-":
            sign = -1 if src[pos] == "-" else 1
            pos += 1
        elif not first:
            raise ParseError(f"expected '+' or '-' at {src[pos:]!r}", token=src[pos:])
        m = _TERM.match(src, pos)
        term = m.group(0) if m else ""
        if not term or (m.group("star") and not m.group("var")) or (m.group("star") and not m.group("coef")):
            bad = src[pos:pos + 1] or src
            raise ParseError(f"bad term near {src[pos:]!r}", token=bad)
        coef = int(m.group("coef")) if m.group("coef") else 1
        if m.group("var"):
            k = int(m.group("exp")) if m.group("exp") is not None else 1
        else:
            k = 0
        if k == 0 and coef != 0:
            raise ParseError(f"constant term {term!r}: polynomials must have zero constant term",
                             token=term)
        coeffs[k] = coeffs.get(k, 0) + sign * coef
        pos = m.end()
        first = False
    deg = max(coeffs) if coeffs else 0
    return IntPoly(tuple(coeffs.get(i, 0) for i in range(deg + 1)))


def format_poly(p):
    """Canonical ascending-degree printer; parse_poly(format_poly(p)) == p."""
    if p.is_zero():
        return "0"
    parts = []
    for k, c in enumerate(p.coeffs):
        if c == 0:
            continue
        var = "d" if k == 1 else f"d^{k}"
        mag = abs(c)
        body = var if mag == 1 else f"{mag}*{var}"
        sign = "-" if c < 0 else "+"
        if not parts:
            parts.append(body if c > 0 else "-" + body)
        else:
            parts.append(sign + body)
    return "".join(parts)


def parse_family(items: Iterable[str]):
    return PolyFamily(tuple(parse_poly(s) for s in items))
