"""Countable function families, their finite subsets, and the pattern values b_m.

A family is indexed from 1.  Nonempty finite subsets are enumerated by the
binary code of ``j``: ``F_j = {f_i : bit (i-1) of j is set}``.  For every
realised subset ``F_k`` a threshold ``t_k`` is chosen as the least positive
integer with

* ``min f(t_k) > 2 * a**(n_k**2)`` over ``f in F_k``,
* ``min f(t_k) > max f(t_{k-1})`` over the previous block,
* all values ``f(t_k)`` pairwise distinct,

where ``n_k = #F_1 + ... + #F_k``.  Sorting the block values gives b_m.
"""

import bisect
import math
import re
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

DEFAULT_SEARCH_CAP = 10**7

ENUMERATIONS = ("binary", "full-first")


class FamilyError(ValueError):
    """Bad family description or subset index."""


class SearchCapError(RuntimeError):
    """No qualifying threshold was found within the probe budget."""


def iroot(n, p):
    """Floor of the ``p``-th root of a nonnegative integer."""
    if n < 0:
        raise ValueError("iroot of negative integer")
    if n < 2 or p == 1:
        return n
    x = 1 << -(-n.bit_length() // p)  # >= true root
    while True:
        y = ((p - 1) * x + n // x ** (p - 1)) // p
        if y >= x:
            break
        x = y
    while x**p > n:
        x -= 1
    while (x + 1) ** p <= n:
        x += 1
    return x


@dataclass(frozen=True)
class PatternFunction:
    """One member ``f_i`` of a family.

    ``kind`` is ``affine`` (``k*n + l``), ``exponential`` (``k**n``),
    ``monomial`` (``n**p``) or ``explicit``.  Explicit functions wrap a
    caller-supplied callable or table; declare ``monotone=True`` only if the
    function is nondecreasing, which lets the threshold search jump ahead.
    """

    kind: str
    params: Tuple[int, ...]
    index: int = 0
    func: Optional[Callable[[int], int]] = field(default=None, compare=False, repr=False)
    label: str = ""
    monotone: bool = False

    @classmethod
    def affine(cls, k, l=0, index=0):
        if k < 1 or l < 0:
            raise FamilyError(f"affine needs k >= 1, l >= 0; got k={k}, l={l}")
        return cls("affine", (k, l), index, label=_affine_label(k, l), monotone=True)

    @classmethod
    def exponential(cls, k, index=0):
        if k < 2:
            raise FamilyError(f"exponential base must be >= 2, got {k}")
        return cls("exponential", (k,), index, label=f"{k}^n", monotone=True)

    @classmethod
    def monomial(cls, p, index=0):
        if p < 1:
            raise FamilyError(f"monomial power must be >= 1, got {p}")
        return cls("monomial", (p,), index, label="n" if p == 1 else f"n^{p}", monotone=True)

    @classmethod
    def explicit(cls, func, label, index=0, monotone=False):
        if isinstance(func, (list, tuple)):
            table = tuple(int(v) for v in func)

            def func(n, _t=table):
                if not 1 <= n <= len(_t):
                    raise FamilyError(f"table function {label!r} undefined at n={n}")
                return _t[n - 1]

        elif isinstance(func, dict):
            table = {int(k): int(v) for k, v in func.items()}

            def func(n, _t=table):
                try:
                    return _t[n]
                except KeyError:
                    raise FamilyError(f"table function {label!r} undefined at n={n}") from None

        return cls("explicit", (), index, func=func, label=label, monotone=monotone)

    def with_index(self, index):
        return PatternFunction(self.kind, self.params, index, self.func, self.label, self.monotone)

    def __call__(self, n):
        if self.kind == "affine":
            k, l = self.params
            return k * n + l
        if self.kind == "exponential":
            return self.params[0] ** n
        if self.kind == "monomial":
            return n ** self.params[0]
        value = self.func(n)
        if isinstance(value, bool) or not isinstance(value, int):
            raise FamilyError(f"{self.label!r} returned non-integer {value!r} at n={n}")
        return value

    def least_arg_above(self, bound):
        """Least ``t >= 1`` with ``f(t) > bound``, or None if not computable in closed form."""
        if self.kind == "affine":
            k, l = self.params
            return max(1, (bound - l) // k + 1)
        if self.kind == "exponential":
            k = self.params[0]
            if bound < k:
                return 1
            t = max(1, int(bound.bit_length() / math.log2(k)) - 1)
            while k**t <= bound:
                t += 1
            while t > 1 and k ** (t - 1) > bound:
                t -= 1
            return t
        if self.kind == "monomial":
            if bound < 1:
                return 1
            return iroot(bound, self.params[0]) + 1
        return None

    def to_json(self):
        return {"index": self.index, "kind": self.kind, "label": self.label}


def _affine_label(k, l):
    head = "n" if k == 1 else f"{k}*n"
    return head if l == 0 else f"{head}+{l}"


def affine_pair(i):
    """Diagonal pairing ``i -> (k, l)`` for the affine family ``k*n + l``.

    Diagonal ``s = (k - 1) + l`` is walked from ``(1, s)`` to ``(s + 1, 0)``:
    ``1 -> n, 2 -> n+1, 3 -> 2n, 4 -> n+2, 5 -> 2n+1, 6 -> 3n, ...``.
    """
    if i < 1:
        raise FamilyError(f"family index must be >= 1, got {i}")
    s = (math.isqrt(8 * (i - 1) + 1) - 1) // 2
    pos = i - 1 - s * (s + 1) // 2
    return 1 + pos, s - pos


@dataclass(frozen=True)
class FamilySpec:
    """A countable family: ``generator(i)`` gives ``f_i``; ``size`` None means infinite."""

    name: str
    generator: Callable[[int], PatternFunction] = field(compare=False, repr=False)
    size: Optional[int] = None
    enumeration: str = "binary"

    def __post_init__(self):
        if self.enumeration not in ENUMERATIONS:
            raise FamilyError(f"unknown enumeration {self.enumeration!r}")
        if self.enumeration == "full-first" and self.size is None:
            raise FamilyError("full-first enumeration needs a finite family")
        if self.size is not None and self.size < 1:
            raise FamilyError("a finite family needs at least one function")

    def function(self, i):
        if i < 1 or (self.size is not None and i > self.size):
            raise FamilyError(f"function index {i} out of range for {self.name!r}")
        return self.generator(i)

    @property
    def subset_count(self):
        return None if self.size is None else 2**self.size - 1


def affine_family(enumeration="binary"):
    return FamilySpec(
        "affine", lambda i: PatternFunction.affine(*affine_pair(i), index=i), None, enumeration
    )


def powers_family(enumeration="binary"):
    return FamilySpec(
        "powers", lambda i: PatternFunction.exponential(i + 1, index=i), None, enumeration
    )


def list_family(functions, name=None, enumeration="binary"):
    fs = [f.with_index(i) for i, f in enumerate(functions, start=1)]
    if not fs:
        raise FamilyError("empty function list")
    name = name or "list: " + "; ".join(f.label for f in fs)
    return FamilySpec(name, lambda i: fs[i - 1], len(fs), enumeration)


_AFFINE_RE = re.compile(r"^(?:(\d+)\*?)?n(?:\+(\d+))?$")
_EXP_RE = re.compile(r"^(\d+)\^n$")
_MONO_RE = re.compile(r"^n\^(\d+)$")


def parse_function(term):
    t = term.replace(" ", "")
    if (m := _MONO_RE.match(t)):
        return PatternFunction.monomial(int(m.group(1)))
    if (m := _EXP_RE.match(t)):
        return PatternFunction.exponential(int(m.group(1)))
    if (m := _AFFINE_RE.match(t)):
        k = int(m.group(1)) if m.group(1) else 1
        l = int(m.group(2)) if m.group(2) else 0
        return PatternFunction.affine(k, l)
    raise FamilyError(f"cannot parse family term {term!r} (use k*n+l, k^n or n^p)")


def parse_family(text, enumeration="binary"):
    """Parse the family DSL: ``affine``, ``powers`` or ``list: 2*n+1; 3^n; n^2``."""
    src = text.strip()
    if src == "affine":
        return affine_family(enumeration)
    if src == "powers":
        return powers_family(enumeration)
    if src.startswith("list:"):
        terms = [t for t in src[len("list:"):].split(";") if t.strip()]
        fs = [parse_function(t) for t in terms]
        labels = [f.label for f in fs]
        if len(set(labels)) != len(labels):
            raise FamilyError(f"duplicate functions in {text!r}")
        return list_family(fs, name="list: " + "; ".join(labels), enumeration=enumeration)
    raise FamilyError(f"unknown family {text!r}; expected 'affine', 'powers' or 'list: ...'")


def _subset_mask(spec, j):
    if j < 1:
        raise FamilyError(f"subset index must be >= 1, got {j}")
    count = spec.subset_count
    if count is not None and j > count:
        raise FamilyError(f"subset index {j} exceeds the {count} subsets of {spec.name!r}")
    if spec.enumeration == "binary":
        return j
    full = (1 << spec.size) - 1
    return full if j == 1 else j - 1


def finite_subset(spec, j):
    """The ``j``-th nonempty finite subset ``F_j`` as a list ordered by index."""
    mask = _subset_mask(spec, j)
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(spec.function(i))
        mask >>= 1
        i += 1
    return out


def n_k(spec, k):
    """Cumulative size ``#F_1 + ... + #F_k``; ``n_0 = 0``."""
    if k < 0:
        raise FamilyError(f"k must be >= 0, got {k}")
    return sum(bin(_subset_mask(spec, j)).count("1") for j in range(1, k + 1))


def _qualifies(values, bound):
    return min(values) > bound and len(set(values)) == len(values)


def _threshold(block, bound, search_cap):
    """Least ``t`` with every ``f(t) > bound`` and pairwise-distinct values."""
    if search_cap < 1:
        raise SearchCapError("search cap leaves no candidate threshold")
    starts = [f.least_arg_above(bound) for f in block]
    if all(s is not None for s in starts):
        # Every member is nondecreasing, so the bound holds from max(starts) on.
        t = max(starts)
        for _ in range(search_cap):
            values = [f(t) for f in block]
            if len(set(values)) == len(values):
                return t
            t += 1
        raise SearchCapError(f"no distinct values within {search_cap} probes above t={max(starts)}")
    if all(f.monotone for f in block):
        return _gallop(block, bound, search_cap)
    for t in range(1, search_cap + 1):
        if _qualifies([f(t) for f in block], bound):
            return t
    raise SearchCapError(f"no threshold t <= {search_cap} for {[f.label for f in block]}")


def _gallop(block, bound, search_cap):
    probes = 0

    def ok(t):
        nonlocal probes
        probes += 1
        if probes > search_cap:
            raise SearchCapError(f"threshold search exceeded {search_cap} probes")
        return min(f(t) for f in block) > bound

    hi = 1
    while not ok(hi):
        hi *= 2
    lo = hi // 2  # ok(lo) is False or lo == 0
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    t = hi
    while True:
        probes += 1
        if probes > search_cap:
            raise SearchCapError(f"threshold search exceeded {search_cap} probes")
        values = [f(t) for f in block]
        if len(set(values)) == len(values):
            return t
        t += 1


def select_thresholds(spec, a, K, search_cap=DEFAULT_SEARCH_CAP):
    """Minimal thresholds ``t_1..t_K``; see the module docstring for the conditions."""
    _check_base(a)
    if K < 0:
        raise FamilyError(f"K must be >= 0, got {K}")
    thresholds = []
    prev_max = None
    cum = 0
    for k in range(1, K + 1):
        block = finite_subset(spec, k)
        cum += len(block)
        bound = 2 * a ** (cum * cum)
        if prev_max is not None and prev_max > bound:
            bound = prev_max
        t = _threshold(block, bound, search_cap)
        thresholds.append(t)
        prev_max = max(f(t) for f in block)
    return thresholds


def _check_base(a):
    if isinstance(a, bool) or not isinstance(a, int) or a < 5:
        raise FamilyError(f"growth base a must be an integer >= 5, got {a!r}")


@dataclass(frozen=True)
class PatternSeq:
    """Sorted pattern values with the (k, f) that produced each one."""

    a: int
    K: int
    thresholds: Tuple[int, ...]
    values: Tuple[int, ...]
    provenance: Tuple[Tuple[int, str], ...]
    family: str = ""
    enumeration: str = "binary"

    @classmethod
    def empty(cls, a, family=""):
        _check_base(a)
        return cls(a, 0, (), (), (), family)

    @property
    def value_set(self):
        return frozenset(self.values)

    def to_json(self):
        return {
            "family": self.family,
            "enumeration": self.enumeration,
            "a": self.a,
            "K": self.K,
            "thresholds": [str(t) for t in self.thresholds],
            "values": [str(v) for v in self.values],
            "provenance": [
                {"value": str(v), "k": k, "function": lab}
                for v, (k, lab) in zip(self.values, self.provenance)
            ],
        }

    @classmethod
    def from_json(cls, data):
        return cls(
            a=int(data["a"]),
            K=int(data["K"]),
            thresholds=tuple(int(t) for t in data["thresholds"]),
            values=tuple(int(v) for v in data["values"]),
            provenance=tuple((int(p["k"]), p["function"]) for p in data["provenance"]),
            family=data.get("family", ""),
            enumeration=data.get("enumeration", "binary"),
        )


def build_b(spec, a, K, search_cap=DEFAULT_SEARCH_CAP):
    """Realise the first ``K`` subsets and return the merged pattern values."""
    thresholds = select_thresholds(spec, a, K, search_cap)
    values: List[int] = []
    prov: List[Tuple[int, str]] = []
    seen = set()
    for k, t in enumerate(thresholds, start=1):
        block = sorted((f(t), f.label) for f in finite_subset(spec, k))
        for v, lab in block:
            if v in seen:
                continue
            seen.add(v)
            values.append(v)
            prov.append((k, lab))
    # Blocks never interleave, so concatenated sorted blocks are sorted.
    assert all(x < y for x, y in zip(values, values[1:]))
    return PatternSeq(
        a, K, tuple(thresholds), tuple(values), tuple(prov), spec.name, spec.enumeration
    )


@dataclass(frozen=True)
class CountCheck:
    """Per-level counts ``c(n) = #{m : b_m < 2 a^n}`` and whether ``c(n) < sqrt(n)``."""

    ok: bool
    counts: Tuple[int, ...]
    scope: str

    def first_failure(self):
        for n, c in enumerate(self.counts, start=1):
            if c * c >= n:
                return n
        return None


def verify_b_count(pseq, N):
    counts = tuple(bisect.bisect_left(pseq.values, 2 * pseq.a**n) for n in range(1, N + 1))
    # c < sqrt(n)  <=>  c*c < n for integers
    ok = all(c * c < n for n, c in enumerate(counts, start=1))
    return CountCheck(ok, counts, f"verified up to K={pseq.K} subsets")
