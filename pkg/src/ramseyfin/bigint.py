"""Exact integer helpers that refuse to build numbers above a bit cap."""

from .errors import BitCapExceeded

DEFAULT_BIT_CAP = 1 << 20


def pow_bits_bounds(base, exp):
    """Lower and upper bounds on ``(base**exp).bit_length()`` for base >= 2, exp >= 0."""
    if exp == 0:
        return 1, 1
    b = base.bit_length()
    return exp * (b - 1) + 1, exp * b


def checked_pow(base, exp, bit_cap=DEFAULT_BIT_CAP):
    if exp < 0:
        raise ValueError(f"negative exponent {exp}")
    if base in (0, 1) or exp == 0:
        return base ** exp
    lo, hi = pow_bits_bounds(abs(base), exp)
    if lo > bit_cap:
        raise BitCapExceeded(f"{base}^{exp} needs at least {lo} bits (cap {bit_cap})", bits=lo)
    value = base ** exp
    if hi > bit_cap and value.bit_length() > bit_cap:
        raise BitCapExceeded(f"{base}^{exp} has {value.bit_length()} bits (cap {bit_cap})",
                             bits=value.bit_length())
    return value


def checked_mul(a, b, bit_cap=DEFAULT_BIT_CAP):
    if a.bit_length() + b.bit_length() - 1 > bit_cap:
        raise BitCapExceeded(f"product exceeds {bit_cap} bits",
                             bits=a.bit_length() + b.bit_length() - 1)
    value = a * b
    if value.bit_length() > bit_cap:
        raise BitCapExceeded(f"product exceeds {bit_cap} bits", bits=value.bit_length())
    return value
