"""Extended-precision natural logarithms of exact integers and rationals.

Working precision is read from ``ENGEL_PRECISION_BITS`` (default 128) on
every call, so tests and the CLI can change it without reloading modules.
"""

import os
from fractions import Fraction

import mpmath

DEFAULT_PRECISION_BITS = 128


def precision_bits():
    raw = os.environ.get("ENGEL_PRECISION_BITS")
    if raw is None:
        return DEFAULT_PRECISION_BITS
    bits = int(raw)
    if bits < 53:
        raise ValueError(f"ENGEL_PRECISION_BITS must be >= 53, got {bits}")
    return bits


def log_int(n):
    """Natural log of a positive integer as an ``mpf``."""
    if n <= 0:
        raise ValueError(f"log of non-positive integer {n}")
    with mpmath.workprec(precision_bits()):
        return mpmath.log(mpmath.mpf(n))


def log_sum(ints):
    """Sum of natural logs of positive integers, summed in iteration order."""
    with mpmath.workprec(precision_bits()):
        total = mpmath.mpf(0)
        for n in ints:
            if n <= 0:
                raise ValueError(f"log of non-positive integer {n}")
            total += mpmath.log(mpmath.mpf(n))
        return total


def log_fraction(x):
    x = Fraction(x)
    if x <= 0:
        raise ValueError(f"log of non-positive value {x}")
    with mpmath.workprec(precision_bits()):
        return mpmath.log(mpmath.mpf(x.numerator)) - mpmath.log(mpmath.mpf(x.denominator))


def log_real(x):
    """Log of a positive real given as float or mpf, at working precision."""
    with mpmath.workprec(precision_bits()):
        return mpmath.log(mpmath.mpf(x))

