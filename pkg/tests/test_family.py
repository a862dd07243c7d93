import json
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from engelpat.family import (
    FamilyError,
    PatternFunction,
    PatternSeq,
    SearchCapError,
    affine_family,
    affine_pair,
    build_b,
    finite_subset,
    iroot,
    list_family,
    n_k,
    parse_family,
    powers_family,
    select_thresholds,
    verify_b_count,
)

from oracles import threshold_scan


def labels(fs):
    return [f.label for f in fs]


def test_finite_subset_binary():
    spec = parse_family("list: n; 2*n; 3*n")
    assert labels(finite_subset(spec, 1)) == ["n"]
    assert labels(finite_subset(spec, 3)) == ["n", "2*n"]
    assert labels(finite_subset(spec, 4)) == ["3*n"]
    with pytest.raises(FamilyError):
        finite_subset(spec, 8)
    with pytest.raises(FamilyError):
        finite_subset(spec, 0)


@pytest.mark.parametrize("k, expected", [(0, 0), (1, 1), (3, 4), (4, 5)])
def test_n_k(k, expected):
    assert n_k(affine_family(), k) == expected


def test_enumeration_is_a_bijection_on_small_indices():
    spec = affine_family()
    seen = {}
    for j in range(1, 2**10):
        key = frozenset(f.index for f in finite_subset(spec, j))
        assert key and key not in seen
        seen[key] = j
    universe = range(1, 11)
    for r in range(1, 11):
        for combo in combinations(universe, r):
            assert frozenset(combo) in seen


def test_every_index_recurs():
    spec = affine_family()
    for i in range(1, 11):
        hits = [j for j in range(1, 2**12) if any(f.index == i for f in finite_subset(spec, j))]
        assert len(hits) == 2**11  # half of all codes carry bit i-1


def test_full_first_enumeration():
    spec = parse_family("list: n+1; n+2; n+3", enumeration="full-first")
    assert labels(finite_subset(spec, 1)) == ["n+1", "n+2", "n+3"]
    rest = {frozenset(labels(finite_subset(spec, j))) for j in range(2, 8)}
    assert len(rest) == 6 and frozenset(["n+1", "n+2", "n+3"]) not in rest
    assert n_k(spec, 1) == 3
    with pytest.raises(FamilyError):
        parse_family("affine", enumeration="full-first")


def test_affine_pairing_injective():
    pairs = [affine_pair(i) for i in range(1, 500)]
    assert len(set(pairs)) == len(pairs)
    assert pairs[:6] == [(1, 0), (1, 1), (2, 0), (1, 2), (2, 1), (3, 0)]
    # every (k, l) with small k + l shows up
    assert {(k, l) for k in range(1, 8) for l in range(0, 8 - k)} <= set(pairs)


def test_powers_family():
    spec = powers_family()
    assert [spec.function(i)(3) for i in range(1, 4)] == [8, 27, 64]


@pytest.mark.parametrize(
    "text, values",
    [("list: n", [1, 2, 3]), ("list: 2*n+1", [3, 5, 7]), ("list: 3^n", [3, 9, 27]),
     ("list: n^2", [1, 4, 9]), ("list: 4n", [4, 8, 12])],
)
def test_dsl_terms(text, values):
    f = parse_family(text).function(1)
    assert [f(n) for n in (1, 2, 3)] == values


@pytest.mark.parametrize("bad", ["linear", "list: n-1", "list: n; n", "list:", "list: 1^n"])
def test_dsl_errors(bad):
    with pytest.raises(FamilyError):
        parse_family(bad)


@pytest.mark.parametrize("n, p", [(0, 2), (1, 3), (15, 2), (16, 2), (10**40 + 7, 3), (2**200, 5)])
def test_iroot(n, p):
    r = iroot(n, p)
    assert r**p <= n < (r + 1) ** p


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10**30), st.sampled_from(["affine", "exp", "mono"]), st.integers(1, 7))
def test_least_arg_above_matches_definition(bound, kind, param):
    if kind == "affine":
        f = PatternFunction.affine(param, param - 1)
    elif kind == "exp":
        f = PatternFunction.exponential(param + 1)
    else:
        f = PatternFunction.monomial(param)
    t = f.least_arg_above(bound)
    assert t >= 1 and f(t) > bound
    assert t == 1 or f(t - 1) <= bound


def test_select_thresholds_examples():
    assert select_thresholds(parse_family("list: n"), 5, 1) == [11]
    assert select_thresholds(parse_family("list: n^2"), 5, 1) == [4]
    with pytest.raises(SearchCapError):
        select_thresholds(parse_family("list: n"), 5, 1, search_cap=0)


def test_thresholds_match_linear_scan():
    # independent brute-force scan for the small blocks
    spec = parse_family("list: n; 2*n; n^2")
    ts = select_thresholds(spec, 5, 2)
    prev = None
    for k, t in enumerate(ts, start=1):
        block = finite_subset(spec, k)
        assert threshold_scan(block, 5, n_k(spec, k), prev) == t
        prev = max(f(t) for f in block)


def test_explicit_functions_use_linear_scan():
    f = PatternFunction.explicit(lambda n: 3 * n + (n % 2), "3n+parity")
    spec = list_family([f])
    assert select_thresholds(spec, 5, 1) == [threshold_scan([f], 5, 1)]
    table = PatternFunction.explicit(list(range(100, 200)), "table")
    assert select_thresholds(list_family([table]), 5, 1) == [1]
    slow = PatternFunction.explicit(lambda n: n, "slow")
    with pytest.raises(SearchCapError):
        select_thresholds(list_family([slow]), 5, 1, search_cap=10)


def test_monotone_explicit_gallops():
    f = PatternFunction.explicit(lambda n: n * n * n, "cube", monotone=True)
    spec = list_family([f])
    t = select_thresholds(spec, 5, 1, search_cap=200)[0]
    assert f(t) > 10 >= f(t - 1)


def test_distinctness_advances_threshold():
    # n+626 and 2n both first exceed 2*5^4 at t=626, where they collide at 1252
    spec = parse_family("list: n+626; 2*n", enumeration="full-first")
    t = select_thresholds(spec, 5, 1)[0]
    assert t == 627 == threshold_scan(finite_subset(spec, 1), 5, 2)
    # same rule on the linear-scan path
    g1 = PatternFunction.explicit(lambda n: n + 100 if n >= 1151 else n, "g1")
    g2 = PatternFunction.explicit(lambda n: 1251 if n <= 1152 else n + 200, "g2")
    spec = list_family([g1, g2], enumeration="full-first")
    t = select_thresholds(spec, 5, 1)[0]
    assert g1(t) != g2(t)
    assert t == threshold_scan([g1, g2], 5, 2, limit=5000)


def test_build_b_examples():
    p = build_b(parse_family("list: n"), 5, 1)
    assert p.values == (11,) and p.thresholds == (11,)
    assert build_b(parse_family("list: n"), 5, 0).values == ()
    spec = parse_family("list: n; 2*n")
    p = build_b(spec, 5, 3)
    assert all(x < y for x, y in zip(p.values, p.values[1:]))
    for k, t in enumerate(p.thresholds, start=1):
        block = [f(t) for f in finite_subset(spec, k)]
        assert min(block) > 2 * 5 ** (n_k(spec, k) ** 2)


@pytest.mark.parametrize("K", [1, 2, 3, 4, 5])
def test_conditions_and_minimality_affine(K):
    spec = affine_family()
    p = build_b(spec, 5, K)
    prev = None
    for k, t in enumerate(p.thresholds, start=1):
        block = finite_subset(spec, k)
        vals = [f(t) for f in block]
        bound = 2 * 5 ** (n_k(spec, k) ** 2)
        assert min(vals) > bound
        assert prev is None or min(vals) > prev
        assert len(set(vals)) == len(vals)
        if t > 1:
            dec = [f(t - 1) for f in block]
            violated = (min(dec) <= bound or (prev is not None and min(dec) <= prev)
                        or len(set(dec)) != len(dec))
            assert violated
        prev = max(vals)
    assert verify_b_count(p, 2 * n_k(spec, K) ** 2).ok


def test_provenance_and_json():
    p = build_b(affine_family(), 5, 3)
    assert p.provenance[0] == (1, "n")
    data = json.loads(json.dumps(p.to_json()))
    assert PatternSeq.from_json(data) == p
    assert data["values"][0] == "11"


def test_verify_b_count_examples():
    p = build_b(parse_family("list: n"), 5, 1)
    chk = verify_b_count(p, 4)
    assert chk.counts == (0, 1, 1, 1) and chk.ok
    assert "K=1" in chk.scope
    empty = PatternSeq.empty(7)
    chk = verify_b_count(empty, 10)
    assert chk.ok and set(chk.counts) == {0}
    bad = PatternSeq(5, 1, (1,), (2, 3), ((1, "x"), (1, "y")))
    chk = verify_b_count(bad, 3)
    assert not chk.ok and chk.first_failure() == 1


@pytest.mark.parametrize("family", ["affine", "powers", "list: n; n^2; 3*n+2"])
@pytest.mark.parametrize("a", [5, 6, 9])
def test_count_check_instances(family, a):
    spec = parse_family(family)
    K = 4
    p = build_b(spec, a, K)
    assert verify_b_count(p, 2 * n_k(spec, K) ** 2).ok


def test_base_must_exceed_four():
    with pytest.raises(FamilyError):
        build_b(affine_family(), 4, 1)
