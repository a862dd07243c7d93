"""Brute-force reference implementations, kept independent of the package code."""

import math
from fractions import Fraction
from itertools import product


def engel_digits(x, n):
    # Iterate the map on reduced fractions with floor(1/x), not the (p, q) recurrence.
    out = []
    for _ in range(n):
        d = math.floor(1 / x) + 1
        out.append(d)
        x = x * d - 1
    return out


def engel_sum(ds):
    total = Fraction(0)
    prod = 1
    for d in ds:
        prod *= d
        total += Fraction(1, prod)
    return total


def cylinder_formula(ds):
    head = ds[:-1]
    dn = ds[-1]
    p = math.prod(head)
    left = engel_sum(head) + Fraction(1, p * dn)
    right = engel_sum(head) + Fraction(1, p * (dn - 1))
    length = Fraction(1, p * dn * (dn - 1))
    return left, right, length


def threshold_scan(funcs, a, nk, prev_max=None, limit=10**6):
    bound = 2 * a ** (nk * nk)
    for t in range(1, limit + 1):
        vals = [f(t) for f in funcs]
        if min(vals) <= bound:
            continue
        if prev_max is not None and min(vals) <= prev_max:
            continue
        if len(set(vals)) != len(vals):
            continue
        return t
    return None


def enumerate_D(a, n, forbidden):
    windows = [[d for d in range(a**k, 2 * a**k) if d not in forbidden] for k in range(1, n + 1)]
    return windows, math.prod(len(w) for w in windows)


def all_words(a, n, forbidden):
    windows, _ = enumerate_D(a, n, forbidden)
    return product(*windows)


def analytic_bound(a, n):
    num = sum(math.log(a**k - math.sqrt(k)) for k in range(1, n + 1))
    den = sum(math.log(2 * a**k) for k in range(1, n + 2)) + math.log(2 * a ** (n + 1))
    return num / den


def density_brute(A, w):
    S = set(A)
    hi = max(A)
    return max(sum(1 for i in range(m, m + w) if i in S) for m in range(0, hi + 1)) / w


def longest_ap_brute(A, d):
    S = set(A)
    best = 0
    for t in range(1, max(A) + 1 if A else 1):
        k = 0
        while t + k * d in S:
            k += 1
        best = max(best, k)
    return best


def longest_gp_brute(A, q):
    S = set(A)
    best = 0
    for t in range(1, max(A) + 1 if A else 1):
        k = 0
        while t * q**k in S:
            k += 1
        best = max(best, k)
    return best


def translation_brute(A, B):
    S = set(A)
    if not A:
        return None
    for n in range(-max(B), max(A) + 1):
        if all(b + n in S for b in B):
            return n
    return None


def scalar_brute(A, B):
    S = set(A)
    for n in range(1, (max(A) if A else 0) + 1):
        if all(n * b in S for b in B):
            return n
    return None


def power_brute(A, B):
    S = set(A)
    top = max(A) if A else 0
    for n in range(1, top.bit_length() + 1):
        if all(b**n in S for b in B):
            return n
    return None


SWEEP_WINDOWS = (1, 2, 3, 5)
SWEEP_D = (1, 2, 3, 5)
SWEEP_Q = (2, 3)
SWEEP_B = ((1,), (1, 2), (2, 3), (1, 3, 6), (2, 4, 8))


def detector_mismatches(A):
    """Names of detector queries on which the package disagrees with the brute-force references."""
    from engelpat import detectors as det

    bad = []
    if not A:
        return bad
    prof = det.banach_density_profile(A, SWEEP_WINDOWS)
    for e in prof:
        if e.density != density_brute(A, e.window):
            bad.append(("density", e.window))
    for d in SWEEP_D:
        k, t = det.longest_ap(A, d)
        if k != longest_ap_brute(A, d) or not all(t + j * d in A for j in range(k)):
            bad.append(("ap", d))
    for q in SWEEP_Q:
        k, t = det.longest_gp(A, q)
        if k != longest_gp_brute(A, q) or not all(t * q**j in A for j in range(k)):
            bad.append(("gp", q))
    for B in SWEEP_B:
        if det.find_translation(A, B) != translation_brute(A, B):
            bad.append(("translate", B))
        if det.find_scalar(A, B) != scalar_brute(A, B):
            bad.append(("scalar", B))
        if min(B) >= 2 and det.find_power(A, B) != power_brute(A, B):
            bad.append(("power", B))
    return bad


def subsets(universe):
    items = list(universe)
    for mask in range(1, 1 << len(items)):
        yield [x for i, x in enumerate(items) if mask >> i & 1]
