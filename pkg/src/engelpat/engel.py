"""Engel expansion digits, the Engel map, and cylinder geometry.

Points of the Engel domain (0, 1] are ``fractions.Fraction`` values.  Digit
extraction runs on the integer pair ``(p, q)`` of ``x = p/q``::

    d = q // p + 1
    (p, q) <- (p * d - q, q)

which is the Engel map ``T(x) = x * d_1(x) - 1`` without renormalising the
fraction at every step.  The boundary convention is the half-open partition
``x in (1/(n+1), 1/n]  =>  d_1(x) = n + 1``, so ``1/2`` has digits ``3, 3, ...``.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Optional, Tuple

from ._logs import log_sum

#: Above this depth cylinders carry only ``log_length``.
MAX_EXACT_DEPTH = 64


class EngelDomainError(ValueError):
    """Raised for points outside (0, 1]."""


class AdmissibilityError(ValueError):
    """Raised for digit words that are not admissible Engel prefixes."""


def as_rational(x):
    """Coerce ``x`` to an exact ``Fraction``.

    Accepts ints, ``Fraction``/``Rational`` instances and strings such as
    ``"3/8"`` or ``"0.375"``. Floats are rejected: digit extraction is
    discontinuous and a binary float would silently change the digits.
    """
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, (Fraction, int)):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse {x!r} as an exact rational") from exc
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def format_rational(x):
    """Serialise as ``"p/q"`` (always with a denominator)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _check_domain(x):
    x = as_rational(x)
    if not 0 < x <= 1:
        raise EngelDomainError(f"{x} is outside the Engel domain (0, 1]")
    return x


def first_digit(x):
    """First Engel digit ``floor(1/x) + 1``; always >= 2."""
    x = _check_domain(x)
    return x.denominator // x.numerator + 1


def engel_map(x):
    """The Engel map ``T(x) = x * d_1(x) - 1``, mapping (0, 1] to itself."""
    x = _check_domain(x)
    return x * first_digit(x) - 1


def is_admissible(seq, strict=False):
    """True iff ``d_1 >= 2`` and the digits are nondecreasing.

    With ``strict=True`` the digits must increase strictly.  Total: any input
    that is not a sequence of integers simply returns False.
    """
    try:
        ds = list(seq)
    except TypeError:
        return False
    for d in ds:
        if isinstance(d, bool) or not isinstance(d, int):
            return False
    if not ds or ds[0] < 2:
        return False
    for prev, cur in zip(ds, ds[1:]):
        if cur < prev or (strict and cur == prev):
            return False
    return True


@dataclass(frozen=True)
class DigitSeq:
    """A finite admissible Engel prefix ``(d_1, ..., d_n)``."""

    digits: Tuple[int, ...]
    strict: bool = False

    def __post_init__(self):
        ds = tuple(self.digits)
        object.__setattr__(self, "digits", ds)
        if not is_admissible(ds, strict=self.strict):
            kind = "strictly increasing" if self.strict else "admissible"
            raise AdmissibilityError(f"digit word {list(ds)} is not {kind}")

    def __len__(self):
        return len(self.digits)

    def __iter__(self):
        return iter(self.digits)

    def __getitem__(self, i):
        return self.digits[i]

    def extend(self, *more):
        return DigitSeq(self.digits + tuple(more), strict=self.strict)

    def to_json(self):
        return [str(d) for d in self.digits]

    @classmethod
    def from_json(cls, data, strict=False):
        return cls(tuple(int(d) for d in data), strict=strict)


def _digit_tuple(seq):
    if isinstance(seq, DigitSeq):
        return seq.digits
    ds = tuple(seq)
    if not ds or not is_admissible(ds):
        raise AdmissibilityError(f"digit word {list(ds)} is not admissible")
    return ds


def digits(x, n):
    """The first ``n`` Engel digits of ``x``."""
    x = _check_domain(x)
    if n < 1:
        raise ValueError(f"digit count must be >= 1, got {n}")
    p, q = x.numerator, x.denominator
    out = []
    for _ in range(n):
        d = q // p + 1
        out.append(d)
        p = p * d - q
    return DigitSeq(tuple(out))


def _horner(ds):
    """``sum_j 1/(d_1...d_j)`` as an unreduced integer pair (num, den)."""
    num, den = 0, 1
    for d in reversed(ds):
        # S_j = (1 + S_{j+1}) / d_j
        num, den = den + num, den * d
    return num, den


def partial_sum(seq):
    """Exact partial sum ``sum_{j<=n} 1/(d_1...d_j)`` of an admissible word."""
    ds = _digit_tuple(seq)
    num, den = _horner(ds)
    return Fraction(num, den)


def _prefix_product(ds):
    prod = 1
    for d in ds:
        prod *= d
    return prod


def endpoints(seq):
    """Exact ``(left, right, length)`` of the cylinder, without a depth limit."""
    ds = _digit_tuple(seq)
    head = ds[:-1]
    last = ds[-1]
    base = _prefix_product(head)
    left = partial_sum(ds)
    length = Fraction(1, base * last * (last - 1))
    right = (partial_sum(head) if head else Fraction(0)) + Fraction(1, base * (last - 1))
    return left, right, length


def cylinder_log_length(seq):
    """Natural log of ``|I_n|`` from the digit factors, as an ``mpf``."""
    ds = _digit_tuple(seq)
    return -log_sum(list(ds) + [ds[-1] - 1])


@dataclass(frozen=True)
class Cylinder:
    """The cylinder ``I_n(d_1..d_n) = (left, right]``.

    ``left``, ``right`` and ``length`` are ``None`` beyond
    ``max_exact_depth``; ``log_length`` is always present.
    """

    base: DigitSeq
    left: Optional[Fraction]
    right: Optional[Fraction]
    length: Optional[Fraction]
    log_length: float = field(repr=False)

    def __contains__(self, x):
        if self.left is None:
            raise ValueError("membership needs exact endpoints")
        return self.left < as_rational(x) <= self.right

    @property
    def depth(self):
        return len(self.base)


def cylinder(seq, max_exact_depth=MAX_EXACT_DEPTH):
    ds = seq if isinstance(seq, DigitSeq) else DigitSeq(_digit_tuple(seq))
    log_len = float(cylinder_log_length(ds))
    if len(ds) > max_exact_depth:
        return Cylinder(ds, None, None, None, log_len)
    left, right, length = endpoints(ds)
    return Cylinder(ds, left, right, length, log_len)


def tail_mass(seq):
    """Total length ``1/(d_1...d_n (d_n - 1))`` available to extensions of ``seq``.

    This is the length of the order-``n`` cylinder itself; the children with
    digits ``d_n, d_n + 1, ...`` tile it.
    """
    return endpoints(seq)[2]


def common_prefix_length(a, b):
    n = 0
    for x, y in zip(a, b):
        if x != y:
            break
        n += 1
    return n

