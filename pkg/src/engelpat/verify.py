"""Quick end-to-end self checks used by ``engelpat verify-all``."""

import random
from fractions import Fraction

from .construction import (
    E0Config,
    check_Dn_bound,
    make_pair,
    merge_pi,
    quasi_lipschitz_ratio,
    sample_E0,
    verify_pattern_containment,
)
from .detectors import banach_density_profile, find_translation, longest_ap
from .dimension import MeasureContext, analytic_lower_bound, mu_cylinder
from .engel import cylinder, digits, partial_sum
from .family import PatternSeq, affine_family, build_b, n_k, parse_family, verify_b_count


def _check(name, ok, **detail):
    return {"name": name, "ok": bool(ok), "detail": detail}


def _expansion(rng):
    bad = 0
    for _ in range(200):
        q = rng.randrange(2, 10**6)
        x = Fraction(rng.randrange(1, q + 1), q)
        n = rng.randrange(1, 13)
        seq = digits(x, n)
        gap = x - partial_sum(seq)
        if not 0 <= gap <= cylinder(seq).length:
            bad += 1
    fixed = (
        digits(1, 4).digits == (2, 2, 2, 2)
        and digits(Fraction(1, 2), 3).digits == (3, 3, 3)
        and digits(Fraction(3, 8), 4).digits == (3, 9, 9, 9)
    )
    return _check("engel_expansion", fixed and bad == 0, failures=bad)


def _count_check(a):
    spec = affine_family()
    ok = True
    for K in range(1, 6):
        pseq = build_b(spec, a, K)
        ok &= verify_b_count(pseq, 2 * n_k(spec, K) ** 2).ok
    return _check("b_count", ok, a=a, K_max=5)


def _dn(a, K):
    pseq = build_b(affine_family(), a, K)
    ok_empty = check_Dn_bound(E0Config(a, frozenset(), 12), 12).ok
    ok_k = check_Dn_bound(E0Config.from_pattern(pseq, 12), 12).ok
    return _check("dn_bound", ok_empty and ok_k, a=a, K=K, N=12)


def _measure(a):
    ctx = MeasureContext(E0Config(a, frozenset(), 3))
    total = sum(mu_cylinder(ctx, [d]) for d in range(a, 2 * a))
    return _check("measure_normalisation", total == 1, a=a)


def _dimension(a):
    vals = [analytic_lower_bound(a, n) for n in (1, 5, 10, 20, 30)]
    ok = all(x < y for x, y in zip(vals, vals[1:]))
    return _check("analytic_bound_trend", ok, values=vals)


def _quasi(a, seed):
    pseq = build_b(parse_family("list: n"), a, 1)
    cfg = E0Config.from_pattern(pseq, 60)
    gaps, sandwich = [], True
    for n in (10, 20, 30):
        x1, x2 = make_pair(cfg, n, 2 * n, seed)
        rep = quasi_lipschitz_ratio(x1, x2, pseq)
        gaps.append(abs(rep.ratio - 1))
        sandwich &= rep.sandwich_ok
    identity = quasi_lipschitz_ratio(x1, x2, PatternSeq.empty(a)).ratio == 1.0
    ok = identity and sandwich and gaps[0] >= gaps[1] >= gaps[2]
    return _check("quasi_lipschitz", ok, gaps=gaps)


def _density(a, seed):
    ok = True
    for m in (3, 5):
        terms = "; ".join(f"n+{l}" for l in range(1, m + 1))
        spec = parse_family(f"list: {terms}", enumeration="full-first")
        pseq = build_b(spec, a, 1)
        src = sample_E0(E0Config.from_pattern(pseq, 8), 8, seed)
        point = merge_pi(src, pseq)
        ok &= verify_pattern_containment(point, spec, pseq, 1).ok
        ok &= banach_density_profile(point.merged.digits, [m])[0].density == 1.0
    rng = random.Random(seed)
    for _ in range(200):
        A = sorted(rng.sample(range(1, 80), rng.randrange(1, 30)))
        d, k = rng.randrange(1, 6), rng.randrange(1, 6)
        law = (find_translation(A, [d * j for j in range(1, k + 1)]) is not None) == (longest_ap(A, d)[0] >= k)
        ok &= law
    return _check("pattern_detectors", ok)


def run_all(a=5, K=3, depth=20, seed=1):
    rng = random.Random(seed)
    return [
        _expansion(rng),
        _count_check(a),
        _dn(a, K),
        _measure(a),
        _dimension(a),
        _quasi(a, seed),
        _density(a, seed),
    ]
