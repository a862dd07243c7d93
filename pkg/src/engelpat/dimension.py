"""Cylinder measure on E_0, the four-cylinder local-dimension quotient, and
the length asymptotics of window-constrained cylinders.

All logarithms are taken of exact integers at ``ENGEL_PRECISION_BITS`` and
returned as floats.
"""

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from ._logs import log_int, log_sum, precision_bits
from .construction import ConstructionError, DnTable, E0Config, allowed_digits, window


class MeasureContext:
    """An E_0 configuration with its ``#D_n`` table; ``mu(I_n) = 1/#D_n``."""

    def __init__(self, cfg, dn=None):
        self.cfg = cfg
        self.dn = dn if dn is not None else DnTable(cfg)

    @classmethod
    def from_pattern(cls, pseq, depth):
        return cls(E0Config.from_pattern(pseq, depth))

    def check_word(self, seq):
        ds = tuple(seq)
        if len(ds) > self.cfg.depth:
            raise ConstructionError(f"word of length {len(ds)} deeper than {self.cfg.depth}")
        if not self.cfg.is_prefix(ds):
            raise ConstructionError(f"{list(ds)} is not an admissible E_0 word for a={self.cfg.a}")
        return ds


def mu_cylinder(ctx, seq):
    ds = ctx.check_word(seq)
    return Fraction(1, ctx.dn.count(len(ds)))


def local_dim_quotient(ctx, seq):
    """``(log #D_n - log 4) / -log|I_{n+1}|`` for a word of length ``n + 1 >= 2``."""
    ds = ctx.check_word(seq)
    if len(ds) < 2:
        raise ConstructionError("local dimension quotient needs depth >= 2")
    n = len(ds) - 1
    with mpmath.workprec(precision_bits()):
        num = ctx.dn.log_count(n) - log_int(4)
        den = log_sum(ds + (ds[-1] - 1,))
        return float(num / den)


def _denominator_bound(a, n):
    # sum_{k=1}^{n+1} log(2a^k) + log(2a^{n+1})
    return log_sum([2 * a**k for k in range(1, n + 2)] + [2 * a ** (n + 1)])


def analytic_lower_bound(a, n):
    """``sum_{k<=n} log(a^k - sqrt k)`` over the all-maximal-window denominator."""
    if a < 5 or n < 1:
        raise ValueError(f"need a >= 5 and n >= 1, got a={a}, n={n}")
    with mpmath.workprec(precision_bits()):
        num = mpmath.fsum(mpmath.log(mpmath.mpf(a) ** k - mpmath.sqrt(k)) for k in range(1, n + 1))
        return float(num / _denominator_bound(a, n))


def chain_lower_bound(a, n):
    """The bound ``L_n`` must clear: the analytic quotient with ``log 4`` kept."""
    with mpmath.workprec(precision_bits()):
        num = mpmath.fsum(mpmath.log(mpmath.mpf(a) ** k - mpmath.sqrt(k)) for k in range(1, n + 1))
        return float((num - mpmath.log(4)) / _denominator_bound(a, n))


@dataclass(frozen=True)
class LengthRatio:
    ratio: float
    lower: float  # all digits a^k
    upper: float  # all digits 2a^k - 1


def _neg_log_length(ds):
    return log_sum(list(ds) + [ds[-1] - 1])


def length_asymptotic_ratio(seq, a):
    """``-log|I_n| / (n^2 log(a) / 2)`` with its exact window envelopes."""
    ds = tuple(seq)
    n = len(ds)
    if n < 1:
        raise ConstructionError("empty word")
    for k, d in enumerate(ds, start=1):
        lo, hi = window(a, k)
        if not lo <= d < hi:
            raise ConstructionError(f"digit {d} at level {k} outside [{lo}, {hi})")
    with mpmath.workprec(precision_bits()):
        scale = mpmath.mpf(n * n) / 2 * log_int(a)
        lo_seq = [a**k for k in range(1, n + 1)]
        hi_seq = [2 * a**k - 1 for k in range(1, n + 1)]
        return LengthRatio(
            float(_neg_log_length(ds) / scale),
            float(_neg_log_length(lo_seq) / scale),
            float(_neg_log_length(hi_seq) / scale),
        )


def minimal_word(cfg, depth):
    """The E_0 word of smallest allowed digits."""
    cfg = E0Config(cfg.a, cfg.forbidden, max(cfg.depth, depth))
    out = []
    for n in range(1, depth + 1):
        count, it = allowed_digits(cfg, n)
        if count <= 0:
            raise ConstructionError(f"no allowed digit at level {n}")
        out.append(next(it))
    return tuple(out)


@dataclass(frozen=True)
class DimReport:
    n: int
    L_n: float
    A_n: float
    length_ratio: float
    chain_bound: float
    dn_margin: float  # log #D_n - sum log(a^k - sqrt k)

    CSV_FIELDS = ("n", "L_n", "A_n", "length_ratio", "chain_bound", "dn_margin", "chain_margin")

    def as_row(self):
        return {
            "n": self.n,
            "L_n": repr(self.L_n),
            "A_n": repr(self.A_n),
            "length_ratio": repr(self.length_ratio),
            "chain_bound": repr(self.chain_bound),
            "dn_margin": repr(self.dn_margin),
            "chain_margin": repr(self.L_n - self.chain_bound),
        }


def dim_reports(ctx, word, N):
    """One ``DimReport`` per level ``1..N``; ``word`` needs length ``N + 1``."""
    if N < 1:
        raise ValueError("N must be >= 1")
    ds = ctx.check_word(word)
    if len(ds) < N + 1:
        raise ConstructionError(f"word of length {len(ds)} too short for N={N}")
    a = ctx.cfg.a
    rows = []
    with mpmath.workprec(precision_bits()):
        rhs = mpmath.mpf(0)
        for n in range(1, N + 1):
            rhs += mpmath.log(mpmath.mpf(a) ** n - mpmath.sqrt(n))
            rows.append(DimReport(
                n=n,
                L_n=local_dim_quotient(ctx, ds[: n + 1]),
                A_n=analytic_lower_bound(a, n),
                length_ratio=length_asymptotic_ratio(ds[:n], a).ratio,
                chain_bound=chain_lower_bound(a, n),
                dn_margin=float(ctx.dn.log_count(n) - rhs),
            ))
    return rows
