"""The auxiliary digit set E_0, its counts #D_n, and the insertion map pi.

E_0 keeps the points whose n-th digit lies in the window ``[a^n, 2a^n)`` and
avoids every pattern value b_m.  ``merge_pi`` inserts the pattern values into
an E_0 prefix, and ``quasi_lipschitz_ratio`` compares log-distances before
and after insertion with certified truncation intervals.
"""

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, Iterator, List, Optional, Tuple

import mpmath

from ._logs import log_fraction, log_int, precision_bits
from .engel import DigitSeq, common_prefix_length, endpoints, format_rational, partial_sum
from .family import finite_subset

MASK64 = (1 << 64) - 1


class ConstructionError(ValueError):
    """Input is not an E_0 object for the given configuration."""


class EmptyWindowError(ConstructionError):
    pass


class DisjointnessError(ConstructionError):
    """An E_0 digit collides with a pattern value."""


class InsufficientDepthError(ConstructionError):
    pass


class SplitMix64:
    """SplitMix64 counter-based generator.

    State transition ``s <- s + 0x9E3779B97F4A7C15 (mod 2^64)``; output is the
    standard SplitMix64 finaliser of the new state.  Pure-integer, so streams
    are identical on every platform.
    """

    GAMMA = 0x9E3779B97F4A7C15

    def __init__(self, seed):
        self.state = seed & MASK64

    def next_u64(self):
        self.state = (self.state + self.GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def getrandbits(self, k):
        out = 0
        got = 0
        while got < k:
            out = (out << 64) | self.next_u64()
            got += 64
        return out >> (got - k)

    def randbelow(self, n):
        """Uniform integer in ``[0, n)`` by rejection sampling."""
        if n <= 0:
            raise ValueError("randbelow needs n >= 1")
        k = n.bit_length()
        while True:
            r = self.getrandbits(k)
            if r < n:
                return r


def window(a, n):
    """Half-open digit window ``[a^n, 2a^n)`` for level ``n``."""
    lo = a**n
    return lo, 2 * lo


@dataclass(frozen=True)
class E0Config:
    a: int
    forbidden: FrozenSet[int] = frozenset()
    depth: int = 20

    def __post_init__(self):
        if isinstance(self.a, bool) or not isinstance(self.a, int) or self.a < 5:
            raise ConstructionError(f"E_0 needs an integer a >= 5, got {self.a!r}")
        object.__setattr__(self, "forbidden", frozenset(int(b) for b in self.forbidden))
        if self.depth < 0:
            raise ConstructionError("depth must be >= 0")

    @classmethod
    def from_pattern(cls, pseq, depth=20):
        return cls(pseq.a, pseq.value_set, depth)

    @property
    def sorted_forbidden(self):
        return sorted(self.forbidden)

    def excluded_in_window(self, n):
        lo, hi = window(self.a, n)
        fb = self.sorted_forbidden
        return fb[bisect.bisect_left(fb, lo):bisect.bisect_left(fb, hi)]

    def is_prefix(self, seq):
        """True iff every digit sits in its window and avoids the forbidden set."""
        for n, d in enumerate(seq, start=1):
            lo, hi = window(self.a, n)
            if not lo <= d < hi or d in self.forbidden:
                return False
        return True


def _check_level(cfg, n):
    if not 1 <= n <= cfg.depth:
        raise ConstructionError(f"level {n} outside 1..{cfg.depth}")


def allowed_digits(cfg, n) -> Tuple[int, Iterator[int]]:
    """Count and increasing iterator of the allowed digits at level ``n``."""
    _check_level(cfg, n)
    lo, hi = window(cfg.a, n)
    excluded = cfg.excluded_in_window(n)
    ex = set(excluded)

    def it():
        for d in range(lo, hi):
            if d not in ex:
                yield d

    return (hi - lo) - len(excluded), it()


def _nth_allowed(cfg, n, r):
    """The ``r``-th (0-based) allowed digit at level ``n``."""
    lo, _ = window(cfg.a, n)
    d = lo + r
    for b in cfg.excluded_in_window(n):
        if b <= d:
            d += 1
        else:
            break
    return d


@dataclass(frozen=True)
class DnRow:
    n: int
    excluded: int
    allowed: int
    count: int
    log_count: float


class DnTable:
    """Per-level excluded counts ``c_k`` and the exact products ``#D_n``."""

    def __init__(self, cfg):
        self.cfg = cfg
        self.rows: List[DnRow] = [DnRow(0, 0, 1, 1, 0.0)]
        self._log = [mpmath.mpf(0)]

    def _grow(self, n):
        while len(self.rows) <= n:
            k = len(self.rows)
            lo, hi = window(self.cfg.a, k)
            c = len(self.cfg.excluded_in_window(k))
            allowed = (hi - lo) - c
            count = self.rows[-1].count * allowed
            with mpmath.workprec(precision_bits()):
                lg = self._log[-1] + (log_int(allowed) if allowed > 0 else mpmath.ninf)
            self._log.append(lg)
            self.rows.append(DnRow(k, c, allowed, count, float(lg)))

    def row(self, n):
        if n < 0 or n > self.cfg.depth:
            raise ConstructionError(f"level {n} outside 0..{self.cfg.depth}")
        self._grow(n)
        return self.rows[n]

    def log_count(self, n):
        """``log #D_n`` as an ``mpf``."""
        self.row(n)
        return self._log[n]

    def count(self, n):
        return self.row(n).count


def count_Dn(cfg, n):
    return DnTable(cfg).row(n)


def sqrt_window_log_bound(a, n):
    """``sum_{k<=n} log(a^k - sqrt k)`` as an ``mpf``."""
    with mpmath.workprec(precision_bits()):
        return mpmath.fsum(mpmath.log(mpmath.mpf(a) ** k - mpmath.sqrt(k)) for k in range(1, n + 1))


@dataclass(frozen=True)
class DnBoundCheck:
    ok: bool
    margins: Tuple[float, ...]  # log #D_n - sum log(a^k - sqrt k), n = 1..N


def check_Dn_bound(cfg, N):
    """Check ``#D_n > prod_{k<=n} (a^k - sqrt k)`` for ``n = 1..N``."""
    table = DnTable(E0Config(cfg.a, cfg.forbidden, max(cfg.depth, N)))
    margins = []
    ok = True
    with mpmath.workprec(precision_bits()):
        rhs = mpmath.mpf(0)
        for n in range(1, N + 1):
            rhs += mpmath.log(mpmath.mpf(cfg.a) ** n - mpmath.sqrt(n))
            lhs = table.log_count(n)
            margin = lhs - rhs
            margins.append(float(margin))
            if not margin > 0:
                ok = False
    return DnBoundCheck(ok, tuple(margins))


def sample_E0(cfg, depth, seed):
    """One uniformly chosen allowed digit per level ``1..depth``."""
    if depth < 1:
        raise ConstructionError("sample depth must be >= 1")
    cfg = E0Config(cfg.a, cfg.forbidden, max(cfg.depth, depth))
    rng = SplitMix64(seed)
    return DigitSeq(tuple(_draw(cfg, n, rng) for n in range(1, depth + 1)), strict=True)


def _draw(cfg, n, rng):
    count, _ = allowed_digits(cfg, n)
    if count <= 0:
        raise EmptyWindowError(f"no allowed digit at level {n}")
    return _nth_allowed(cfg, n, rng.randbelow(count))


def make_pair(cfg, n, depth, seed):
    """Two E_0 prefixes equal except at position ``n + 1``.

    The first has the larger digit there, so its point lies to the left.
    """
    if not 1 <= n < depth:
        raise ConstructionError(f"need 1 <= n < depth, got n={n}, depth={depth}")
    base = sample_E0(cfg, depth, seed)
    cfg = E0Config(cfg.a, cfg.forbidden, max(cfg.depth, depth))
    count, _ = allowed_digits(cfg, n + 1)
    if count < 2:
        raise EmptyWindowError(f"level {n + 1} has fewer than two allowed digits")
    rng = SplitMix64(seed ^ 0x5DEECE66D)
    d = base[n]
    other = d
    while other == d:
        other = _nth_allowed(cfg, n + 1, rng.randbelow(count))
    hi, lo = max(d, other), min(d, other)
    x1 = base.digits[:n] + (hi,) + base.digits[n + 1:]
    x2 = base.digits[:n] + (lo,) + base.digits[n + 1:]
    return DigitSeq(x1, strict=True), DigitSeq(x2, strict=True)


@dataclass(frozen=True)
class MergedPoint:
    """An E_0 prefix with the pattern values merged in, as a finite-order ``pi(x)``."""

    source: DigitSeq
    inserted: Tuple[int, ...]
    merged: DigitSeq
    value: Fraction
    a: int
    seed: Optional[int] = None
    depth: Optional[int] = None

    def digit_set(self):
        return frozenset(self.merged.digits)

    def to_json(self):
        return {
            "a": self.a,
            "seed": self.seed,
            "depth": self.depth if self.depth is not None else len(self.source),
            "source_digits": self.source.to_json(),
            "inserted": [str(b) for b in self.inserted],
            "merged": self.merged.to_json(),
            "value": format_rational(self.value),
        }

    @classmethod
    def from_json(cls, data):
        source = DigitSeq.from_json(data["source_digits"], strict=True)
        merged = DigitSeq.from_json(data["merged"], strict=True)
        num, den = data["value"].split("/")
        return cls(
            source,
            tuple(int(b) for b in data["inserted"]),
            merged,
            Fraction(int(num), int(den)),
            int(data["a"]),
            data.get("seed"),
            data.get("depth"),
        )


def _merge(source, values):
    if set(source) & set(values):
        clash = sorted(set(source) & set(values))
        raise DisjointnessError(f"source digits collide with pattern values {clash[:5]}")
    return tuple(sorted(set(source) | set(values)))


def merge_pi(source, pseq, seed=None, depth=None):
    """Insert every pattern value into ``source``; the result is strictly increasing."""
    src = source if isinstance(source, DigitSeq) else DigitSeq(tuple(source), strict=True)
    if not src.strict:
        src = DigitSeq(src.digits, strict=True)
    merged = DigitSeq(_merge(src.digits, pseq.values), strict=True)
    return MergedPoint(
        src, tuple(pseq.values), merged, partial_sum(merged), pseq.a, seed,
        depth if depth is not None else len(src),
    )


def certified_merge(source, pseq):
    """Prefix of ``pi(x)`` fixed by the source prefix alone.

    Pattern values below ``a^(D+1)`` precede every admissible next source
    digit, so they are inserted; larger ones are not yet placed.
    """
    cutoff = pseq.a ** (len(source) + 1)
    vals = pseq.values[:bisect.bisect_left(pseq.values, cutoff)]
    return _merge(tuple(source), vals)


@dataclass(frozen=True)
class QuasiLipschitzReport:
    ratio: float
    ratio_lo: float
    ratio_hi: float
    agreement: int  # n: shared source digits
    merged_agreement: int  # n + l
    inserted_below: int  # l
    values_below_window: int  # #{b_m < 2a^(n+1)}
    dx: Tuple[Fraction, Fraction]
    dy: Tuple[Fraction, Fraction]
    sandwich_x: Tuple[bool, bool]
    sandwich_y: Tuple[bool, bool]
    l_bound: bool  # l < sqrt(n + 1)

    @property
    def sandwich_ok(self):
        return all(self.sandwich_x) and all(self.sandwich_y)

    @property
    def width(self):
        return self.ratio_hi - self.ratio_lo


def _distance_interval(left_seq, right_seq):
    # left_seq's point lies to the left of right_seq's point.
    L1, R1, _ = endpoints(left_seq)
    L2, R2, _ = endpoints(right_seq)
    return L2 - R1, R2 - L1, L2 - L1


def quasi_lipschitz_ratio(x1seq, x2seq, pseq, tol=None):
    """``log|pi(x1) - pi(x2)| / log|x1 - x2|`` with a certified enclosing interval.

    Both inputs are E_0 prefixes of equal depth that agree on the first
    ``n >= 1`` digits and differ at ``n + 1 < depth``.  Points are only known
    up to their depth-``D`` cylinders, which gives the interval.
    """
    s1, s2 = tuple(x1seq), tuple(x2seq)
    a = pseq.a
    cfg = E0Config(a, pseq.value_set, max(len(s1), len(s2)))
    for s in (s1, s2):
        if not cfg.is_prefix(s):
            raise ConstructionError(f"{list(s)[:4]}... is not an E_0 prefix for a={a}")
    if len(s1) != len(s2):
        raise ConstructionError("pair must have equal depth")
    n = common_prefix_length(s1, s2)
    if n == len(s1):
        raise ConstructionError("pair does not differ within the computed depth")
    if n < 1:
        raise ConstructionError("pair must share at least one digit")
    if n + 1 >= len(s1):
        raise InsufficientDepthError("need at least one digit beyond the first difference")
    if s1[n] < s2[n]:
        s1, s2 = s2, s1  # s1 is now the left point

    m1, m2 = certified_merge(s1, pseq), certified_merge(s2, pseq)
    nm = common_prefix_length(m1, m2)
    if nm >= min(len(m1), len(m2)):
        raise InsufficientDepthError("merged prefixes do not differ within the computed depth")

    dx_lo, dx_hi, dx_pt = _distance_interval(s1, s2)
    dy_lo, dy_hi, dy_pt = _distance_interval(m1, m2)

    two_a2 = 2 * a * a
    x_lower = endpoints(s2[: n + 1])[2] / two_a2
    x_upper = endpoints(s1[:n])[2]
    y_lower = endpoints(m2[: nm + 1])[2] / two_a2
    y_upper = endpoints(m1[:nm])[2]

    with mpmath.workprec(precision_bits()):
        lx = (log_fraction(dx_lo), log_fraction(dx_hi), log_fraction(dx_pt))
        ly = (log_fraction(dy_lo), log_fraction(dy_hi), log_fraction(dy_pt))
        # All distances are < 1, so both logs are negative.
        ratio = ly[2] / lx[2]
        r_lo = ly[1] / lx[0]
        r_hi = ly[0] / lx[1]

    l = nm - n
    below = bisect.bisect_left(pseq.values, 2 * a ** (n + 1))
    report = QuasiLipschitzReport(
        ratio=float(ratio),
        ratio_lo=float(r_lo),
        ratio_hi=float(r_hi),
        agreement=n,
        merged_agreement=nm,
        inserted_below=l,
        values_below_window=below,
        dx=(dx_lo, dx_hi),
        dy=(dy_lo, dy_hi),
        sandwich_x=(x_lower <= dx_lo, dx_hi <= x_upper),
        sandwich_y=(y_lower <= dy_lo, dy_hi <= y_upper),
        l_bound=l * l < n + 1,
    )
    if tol is not None and report.width > tol:
        raise InsufficientDepthError(
            f"certified interval width {report.width:.3g} exceeds tolerance {tol:.3g}"
        )
    return report


@dataclass(frozen=True)
class ContainmentCheck:
    ok: bool
    witnesses: Tuple[dict, ...]
    violated: Tuple[int, ...]


def verify_pattern_containment(merged, spec, pseq, K):
    """For each ``k <= K`` check ``{f(t_k) : f in F_k}`` lies in the merged digits."""
    if K > pseq.K:
        raise ConstructionError(f"pattern sequence realises only {pseq.K} subsets, asked {K}")
    digits = merged.digit_set()
    witnesses = []
    violated = []
    for k in range(1, K + 1):
        t = pseq.thresholds[k - 1]
        block = finite_subset(spec, k)
        values = [f(t) for f in block]
        present = all(v in digits for v in values)
        witnesses.append({
            "k": k,
            "t": str(t),
            "functions": [f.label for f in block],
            "values": [str(v) for v in values],
            "present": present,
        })
        if not present:
            violated.append(k)
    return ContainmentCheck(not violated, tuple(witnesses), tuple(violated))

