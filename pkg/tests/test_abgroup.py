import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mellinsums import abgroup as ab


def _product_group(orders):
    elems = list(itertools.product(*(range(d) for d in orders)))
    op = lambda g, h: tuple((a + b) % d for a, b, d in zip(g, h, orders))
    return elems, op, tuple(0 for _ in orders)


def _units(n):
    elems = [a for a in range(1, n) if math.gcd(a, n) == 1]
    return elems, (lambda g, h: g * h % n), 1


def _count_killed_by(elems, op, identity, m):
    count = 0
    for g in elems:
        h = identity
        for _ in range(m):
            h = op(h, g)
        count += h == identity
    return count


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 40), min_size=1, max_size=4))
def test_invariant_factors_agree_with_smith_form(orders):
    inv = ab.invariant_factors(orders)
    assert math.prod(inv) == math.prod(orders)
    assert all(b % a == 0 for a, b in zip(inv, inv[1:]))
    d, _, _ = ab.smith_form([[o if i == j else 0 for j in range(len(orders))] for i, o in enumerate(orders)])
    diag = sorted(abs(int(d[i, i])) for i in range(len(orders)))
    assert tuple(x for x in diag if x > 1) == inv


@pytest.mark.parametrize("orders", [(2, 4), (6, 4), (3, 3, 9), (12,), (2, 2, 2)])
def test_discover_structure_on_products(orders):
    elems, op, e = _product_group(orders)
    G = ab.discover_structure(len(elems), op, e, elems)
    assert G.orders == ab.invariant_factors(orders)
    # independent check: |{g : g^m = 1}| = prod gcd(m, d_i)
    for m in range(1, 13):
        expect = _count_killed_by(elems, op, e, m)
        assert math.prod(math.gcd(m, d) for d in G.orders) == expect


@pytest.mark.parametrize("n,expected", [(8, (2, 2)), (15, (2, 4)), (16, (2, 4)), (21, (2, 6)), (24, (2, 2, 2)), (11, (10,))])
def test_unit_groups(n, expected):
    elems, op, e = _units(n)
    G = ab.discover_structure(len(elems), op, e, elems)
    assert G.orders == expected
    assert ab.verify_structure(G, elems)


def test_character_orthogonality_is_exact():
    elems, op, e = _product_group((4, 6))
    G = ab.discover_structure(len(elems), op, e, elems)
    for chi in ab.all_characters(G):
        values = [chi(g) for g in elems]
        assert ab.is_zero_sum(values) == (not chi.is_trivial())
        assert (chi * chi.conjugate()).is_trivial()
        assert chi.order == max(v.order for v in values)


def test_zero_sums():
    r = ab.RootOfUnity.from_ratio
    assert ab.is_zero_sum([r(k, 7) for k in range(7)])
    assert ab.is_zero_sum([r(0, 1), r(1, 2)])
    assert not ab.is_zero_sum([r(0, 1), r(1, 3)])
    # 1 + e(1/3) + e(2/3) and e(1/2) + e(1/2) ... mixed denominators
    assert ab.is_zero_sum([r(0, 1), r(1, 3), r(2, 3), r(1, 4), r(3, 4)])
    assert not ab.is_zero_sum([r(1, 5)])
    assert ab.is_zero_sum([])


def test_root_of_unity_arithmetic():
    a = ab.RootOfUnity(Fraction(3, 4))
    assert (a * a).angle == Fraction(1, 2)
    assert (a ** 4).is_one()
    assert a.conjugate().angle == Fraction(1, 4)
    assert a.order == 4
    assert abs(complex(a) - (-1j)) < 1e-15


def test_errors():
    s3 = list(itertools.permutations(range(3)))
    compose = lambda g, h: tuple(g[h[i]] for i in range(3))
    with pytest.raises(ab.NotAbelian):
        ab.discover_structure(6, compose, (0, 1, 2), s3)
    elems, op, e = _product_group((2, 3))
    with pytest.raises(ab.OrderMismatch):
        ab.discover_structure(7, op, e, elems)
    bad = ab.AbelianGroupStructure((2, 3), lambda g: g, lambda v: (0, 0))
    with pytest.raises(ab.OrderMismatch):
        ab.verify_structure(bad)
    G = ab.cyclic_group(4, lambda g: g, lambda v: v)
    other = ab.cyclic_group(4, lambda g: g, lambda v: v)
    chi = ab.Character(G, (1,))
    with pytest.raises(ab.WrongGroup):
        ab.eval_char(chi, 1, group=other)
    with pytest.raises(ab.WrongGroup):
        chi * ab.Character(other, (1,))
