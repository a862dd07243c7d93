"""Finite-order pattern detectors on sets of digits.

Every ``exists n`` search returns the least witness, and every report says how
far it searched.  Nothing here extrapolates beyond the given finite set.
"""

import bisect
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple


@dataclass(frozen=True)
class DigitSet:
    """Sorted, duplicate-free positive integers."""

    items: Tuple[int, ...]

    def __post_init__(self):
        items = tuple(sorted(set(int(x) for x in self.items)))
        if items and items[0] < 1:
            raise ValueError("digit sets hold positive integers")
        object.__setattr__(self, "items", items)
        object.__setattr__(self, "_members", frozenset(items))

    @classmethod
    def of(cls, xs):
        if isinstance(xs, DigitSet):
            return xs
        return cls(tuple(xs))

    def __contains__(self, x):
        return x in self._members

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    @property
    def max(self):
        return self.items[-1]


@dataclass(frozen=True)
class Detection:
    """Outcome of one detector query."""

    query: str
    parameters: dict
    found: bool
    witness: Optional[int]
    bound_searched: Optional[int]
    length: Optional[int] = None
    profile: Tuple["DensityEntry", ...] = ()

    def to_json(self):
        out = {
            "query": self.query,
            "parameters": {k: _jsonable(v) for k, v in self.parameters.items()},
            "found": self.found,
            "witness": None if self.witness is None else str(self.witness),
            "bound_searched": None if self.bound_searched is None else str(self.bound_searched),
        }
        if self.length is not None:
            out["length"] = self.length
        if self.profile:
            out["profile"] = [
                {"window": e.window, "start": str(e.start), "count": e.count, "density": e.density}
                for e in self.profile
            ]
        return out


def _jsonable(v):
    if isinstance(v, (list, tuple)):
        return [str(x) for x in v]
    return str(v) if isinstance(v, int) and not isinstance(v, bool) else v


@dataclass(frozen=True)
class DensityEntry:
    window: int
    start: int
    count: int

    @property
    def density(self):
        return self.count / self.window


def banach_density_profile(A, windows: Sequence[int]):
    """For each ``w``, the best ``#(A & [m, m+w)) / w`` over starts ``m``.

    An optimal window can always be slid right to start at an element of A,
    so starts are taken from A; the reported start is the least such element.
    """
    A = DigitSet.of(A)
    if not len(A):
        raise ValueError("density profile of an empty set")
    if not windows or any(w < 1 for w in windows):
        raise ValueError("windows must be a nonempty list of lengths >= 1")
    items = A.items
    out = []
    for w in windows:
        best, best_m = 0, items[0]
        for i, m in enumerate(items):
            c = bisect.bisect_left(items, m + w, lo=i) - i
            if c > best:
                best, best_m = c, m
        out.append(DensityEntry(w, best_m, best))
    return out


def longest_ap(A, d):
    """Longest run ``t, t+d, ..., t+(k-1)d`` inside A; returns ``(k, t)``."""
    if d < 1:
        raise ValueError("common difference must be >= 1")
    A = DigitSet.of(A)
    best, best_t = 0, None
    for x in A:
        if x - d in A:
            continue
        k = 1
        while x + k * d in A:
            k += 1
        if k > best:
            best, best_t = k, x
    return best, best_t


def longest_gp(A, q):
    """Longest run ``t, tq, ..., tq^(k-1)`` inside A; returns ``(k, t)``."""
    if q < 2:
        raise ValueError("common ratio must be >= 2")
    A = DigitSet.of(A)
    best, best_t = 0, None
    for x in A:
        if x % q == 0 and x // q in A:
            continue
        k, y = 1, x * q
        while y in A:
            k += 1
            y *= q
        if k > best:
            best, best_t = k, x
    return best, best_t


def find_translation(A, B):
    """Least integer ``n`` with ``B + n`` inside A, or None.

    ``n`` may be negative; candidates are ``a - min(B)`` for ``a`` in A, so
    the search is complete and ``n <= max(A) - 1``.
    """
    A = DigitSet.of(A)
    B = sorted(set(B))
    if not B:
        raise ValueError("B must be nonempty")
    if len(B) > len(A):
        return None
    b0 = B[0]
    for a in A:
        n = a - b0
        if all(b + n in A for b in B[1:]):
            return n
    return None


def find_scalar(A, B):
    """Least ``n >= 1`` with ``n * B`` inside A, or None; ``n <= max(A) // min(B)``."""
    A = DigitSet.of(A)
    B = sorted(set(B))
    if not B or B[0] < 1:
        raise ValueError("B must be a nonempty set of positive integers")
    b0 = B[0]
    for a in A:
        if a % b0:
            continue
        n = a // b0
        if all(n * b in A for b in B[1:]):
            return n
    return None


def find_power(A, B):
    """Least ``n >= 1`` with ``{x**n : x in B}`` inside A, or None.

    Searches ``n`` while ``min(B)**n <= max(A)``.
    """
    A = DigitSet.of(A)
    B = sorted(set(B))
    if not B or B[0] < 2:
        raise ValueError("B must be a nonempty set of integers >= 2")
    if not len(A):
        return None
    n = 1
    while B[0] ** n <= A.max:
        if all(b**n in A for b in B):
            return n
        n += 1
    return None


def power_bound(A, B):
    """Largest exponent ``find_power`` examines."""
    A = DigitSet.of(A)
    b0 = min(B)
    n = 0
    while len(A) and b0 ** (n + 1) <= A.max:
        n += 1
    return n


def detect(A, query, **params):
    """Run one named query and wrap it as a ``Detection``."""
    A = DigitSet.of(A)
    top = A.max if len(A) else 0
    if query == "ap":
        k, t = longest_ap(A, params["d"])
        return Detection("ap", params, k > 0, t, top, length=k)
    if query == "gp":
        k, t = longest_gp(A, params["q"])
        return Detection("gp", params, k > 0, t, top, length=k)
    if query == "translate":
        n = find_translation(A, params["B"])
        return Detection("translate", params, n is not None, n, top)
    if query == "scalar":
        n = find_scalar(A, params["B"])
        return Detection("scalar", params, n is not None, n, top // min(params["B"]))
    if query == "power":
        n = find_power(A, params["B"])
        return Detection("power", params, n is not None, n, power_bound(A, params["B"]))
    if query == "density":
        prof = banach_density_profile(A, params["windows"])
        best = max(prof, key=lambda e: e.density)
        return Detection("density", params, True, best.start, top, profile=tuple(prof))
    raise ValueError(f"unknown query {query!r}")
