import random
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logcount import InvariantError
from logcount.classlab import (
    P,
    CountFn,
    base_p_digit,
    combine,
    language,
    mod_jk_compose,
    mod_transform,
    pl_union_H,
    prime_power_flatten,
    sign_polys,
)

DOM = list(range(12))


def tab(fn, nonneg=False):
    return CountFn.tabulate(fn, DOM, nonneg)


tables = st.lists(st.integers(-20, 20), min_size=len(DOM), max_size=len(DOM)).map(
    lambda vs: CountFn.tabulate(lambda x: vs[x], DOM)
)
nonneg_tables = st.lists(st.integers(0, 20), min_size=len(DOM), max_size=len(DOM)).map(
    lambda vs: CountFn.tabulate(lambda x: vs[x], DOM, nonneg=True)
)


def test_countfn_bound_checked():
    with pytest.raises(InvariantError):
        CountFn({0: 5}, 2)
    with pytest.raises(InvariantError):
        CountFn({0: -1}, 3, nonneg=True)


def test_combine_examples():
    f = tab(lambda x: x * x - 3)
    zero = tab(lambda x: 0)
    assert combine("add", [f, zero]).table == f.table
    five = tab(lambda x: 5, nonneg=True)
    assert set(combine(("binom", 2), [five]).table.values()) == {10}
    g = CountFn.tabulate(lambda xi: xi[0] + xi[1], [(x, i) for x in range(4) for i in range(1, 4)])
    assert combine(("poly_prod", 3), [g]).table == {x: (x + 1) * (x + 2) * (x + 3) for x in range(4)}
    assert combine(("poly_sum", 3), [g]).table == {x: 3 * x + 6 for x in range(4)}


def test_combine_misuse():
    f = tab(lambda x: x)
    with pytest.raises(InvariantError):
        combine("negate", [f, f])
    with pytest.raises(InvariantError):
        combine(("binom", 2), [tab(lambda x: -1)])
    with pytest.raises(InvariantError):
        combine("add", [f, CountFn({0: 1}, 1)])
    with pytest.raises(InvariantError):
        combine("bogus", [f])


@settings(max_examples=60, deadline=None)
@given(tables, tables)
def test_combinators_pointwise(f, g):
    s = combine("add", [f, g])
    m = combine("mul", [f, g])
    neg = combine("negate", [f])
    c = combine(("add_const", 7), [f])
    j = combine("join", [f, g])
    for x in DOM:
        assert s(x) == f(x) + g(x)
        assert m(x) == f(x) * g(x)
        assert neg(x) == -f(x)
        assert c(x) == f(x) + 7
        assert j((x, 0)) == f(x) and j((x, 1)) == g(x)


@settings(max_examples=60, deadline=None)
@given(nonneg_tables, nonneg_tables, st.sampled_from([2, 3, 5, 7]))
def test_class_closure_consistency(f, g, p):
    # NL/PL union via sum, intersection via product of nonnegative functions
    assert language(combine("add", [f, g]), "nl") == language(f, "nl") | language(g, "nl")
    assert language(combine("mul", [f, g]), "nl") == language(f, "nl") & language(g, "nl")
    # C=L: zero of f^2 + g^2 is the intersection of zero sets
    sq = combine("add", [combine("mul", [f, f]), combine("mul", [g, g])])
    assert language(sq, "ceql") == language(f, "ceql") & language(g, "ceql")
    # Mod_p intersection via product, complement via the Fermat transform
    assert language(combine("mul", [f, g]), "mod", p) == language(f, "mod", p) & language(g, "mod", p)
    fe = mod_transform("fermat", f, p)
    comp = combine(("add_const", -1), [fe])
    assert language(comp, "mod", p) == frozenset(DOM) - language(f, "mod", p)


def test_ul_language_requires_01():
    with pytest.raises(InvariantError):
        language(tab(lambda x: 2), "ul")
    assert language(tab(lambda x: x % 2), "ul") == frozenset(x for x in DOM if x % 2)


@settings(max_examples=40, deadline=None)
@given(tables, tables, st.sampled_from([(2, 3), (3, 4), (4, 5), (5, 6), (3, 5)]))
def test_mod_jk_composition(fj, fk, jk):
    j, k = jk
    f = mod_jk_compose(fj, fk, j, k)
    assert language(f, "mod", j * k) == language(fj, "mod", j) | language(fk, "mod", k)


def test_mod_jk_needs_coprime():
    f = tab(lambda x: x)
    with pytest.raises(InvariantError):
        mod_jk_compose(f, f, 2, 4)


def test_mod_transform_examples():
    assert set(mod_transform("fermat", tab(lambda x: 0), 5).table.values()) == {0}
    assert mod_transform("fermat", tab(lambda x: 3), 5)(0) == 81
    ind = tab(lambda x: x % 2, nonneg=True)
    out = mod_transform("affine", ind, 5, i=2, j=0)
    assert all(out(x) % 5 == 2 * (x % 2) for x in DOM)
    with pytest.raises(InvariantError):
        mod_transform("fermat", ind, 4)


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
def test_mod_transforms_full_residue_tables(p):
    f = CountFn.tabulate(lambda x: x, list(range(3 * p)))
    fe = mod_transform("fermat", f, p)
    assert all(fe(x) % p == (0 if x % p == 0 else 1) for x in f.table)
    for i in range(p):
        for j in range(p):
            ind = CountFn.tabulate(lambda x: fe(x) % p, list(range(3 * p)), nonneg=True)
            g = mod_transform("affine", ind, p, i, j)
            assert all(g(x) % p == (i if x % p else j) for x in f.table)


def test_prime_power_flatten_examples():
    for p in (2, 3, 5):
        for e in (1, 2, 3):
            assert prime_power_flatten(p**e, p, e) % p == 0
    assert prime_power_flatten(2, 2, 2) % 2 == 1


@pytest.mark.parametrize("p", [2, 3, 5])
def test_prime_power_flatten_sweep(p):
    for e in (1, 2, 3):
        for v in range(0, 1001):
            want = 0 if v % p**e == 0 else 1
            assert prime_power_flatten(v, p, e) % p == want
            assert comb(v, p**e) % p == base_p_digit(v, p, e)


def test_prime_power_flatten_rejects():
    with pytest.raises(InvariantError):
        prime_power_flatten(3, 4, 1)
    with pytest.raises(InvariantError):
        prime_power_flatten(-1, 2, 1)


# --- sign polynomials ----------------------------------------------------------


@pytest.mark.parametrize("n", [2, 4, 6, 8, 10])
def test_gapl_P_inequality(n):
    for z in range(1, 2**n + 1):
        assert 0 <= 4 * P(n, z) < -P(n, -z)


@pytest.mark.parametrize("n", [2, 4, 6, 8, 10])
def test_gapl_S_odd(n):
    for z in range(1, 2**n + 1):
        assert sign_polys("gapl", (n,), -z).S == -sign_polys("gapl", (n,), z).S


@pytest.mark.parametrize(
    "n",
    [
        pytest.param(2, marks=pytest.mark.xfail(strict=True, reason="S < 1 when n/2+1 is even")),
        4,
        pytest.param(6, marks=pytest.mark.xfail(strict=True, reason="S < 1 when n/2+1 is even")),
        8,
        pytest.param(10, marks=pytest.mark.xfail(strict=True, reason="S < 1 when n/2+1 is even")),
    ],
)
def test_gapl_S_stated_bound(n):
    for z in range(1, 2**n + 1):
        s = sign_polys("gapl", (n,), z).S
        assert 1 <= s < Fraction(5, 3)
        assert -Fraction(5, 3) < -s <= -1


@pytest.mark.parametrize("n", [2, 4, 6, 8, 10])
def test_gapl_S_true_bound(n):
    # with q = |P(z)/P(-z)|^(n/2+1) < 4^-(n/2+1), S is (1+q)/(1-q) or (1-q)/(1+q)
    for z in range(1, 2**n + 1):
        s = sign_polys("gapl", (n,), z).S
        if (n // 2 + 1) % 2:
            assert 1 <= s < Fraction(5, 3)
        else:
            assert Fraction(3, 5) < s <= 1


def test_gapl_rejects_odd_n():
    with pytest.raises(InvariantError):
        sign_polys("gapl", (3,), 1)


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("r", [1, 3])
def test_approx_bounds_small(m, r):
    lo = 1 - Fraction(1, 2**r)
    for z in range(1, 2**m + 1):
        assert lo <= sign_polys("approx", (m, r), z).S <= 1
        assert 0 <= sign_polys("approx", (m, r), -z).S <= Fraction(1, 2**r)


def test_pl_union_sign_small():
    n = 2
    vals = [v for v in range(-(2**n), 2**n + 1) if v]
    for d in vals:
        for e in vals:
            assert (pl_union_H(n, d, e) > 0) == (d > 0 or e > 0)
    with pytest.raises(InvariantError):
        pl_union_H(2, 0, 1)


def test_sign_polys_random_points():
    rng = random.Random(0)
    for _ in range(20):
        m = rng.randint(1, 6)
        z = rng.randint(1, 2**m)
        v = sign_polys("approx", (m, 2), z)
        assert v.S == Fraction(v.A, v.B)
