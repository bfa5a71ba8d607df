import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sympy import GF, Poly, factor_list, primitive_root, symbols

from mellinsums import gf

FIELDS = [(2, 1), (3, 1), (7, 1), (2, 4), (3, 3), (5, 2), (7, 3), (11, 2)]
t = symbols("t")


def _sympy_mul(F, a, b):
    """Independent product: sympy polynomials over GF(p) reduced by the modulus."""
    dom = GF(F.p)
    pa = Poly(list(reversed(F.to_digits(a))), t, domain=dom)
    pb = Poly(list(reversed(F.to_digits(b))), t, domain=dom)
    mod = Poly(list(reversed(F.modulus)), t, domain=dom)
    coeffs = [int(c) % F.p for c in reversed((pa * pb).rem(mod).all_coeffs())]
    return F.from_digits(coeffs)


field_and_elems = st.sampled_from(FIELDS).flatmap(
    lambda pn: st.tuples(st.just(gf.field(*pn)),
                         st.lists(st.integers(0, pn[0] ** pn[1] - 1), min_size=3, max_size=3)))


@settings(max_examples=200, deadline=None)
@given(field_and_elems)
def test_multiplication_matches_sympy(data):
    F, (a, b, _) = data
    assert F.mul(a, b) == _sympy_mul(F, a, b)


@settings(max_examples=200, deadline=None)
@given(field_and_elems)
def test_field_axioms(data):
    F, (a, b, c) = data
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.add(a, F.neg(a)) == 0
    assert F.pow(a, F.q) == a
    assert F.frob(F.add(a, b)) == F.add(F.frob(a), F.frob(b))
    if a:
        assert F.mul(a, F.inv(a)) == 1
        assert F.pow(F.generator, F.dlog(a)) == a


@pytest.mark.parametrize("p,n", FIELDS)
def test_array_ops_agree_with_scalar_ops(p, n):
    F = gf.field(p, n)
    rng = np.random.default_rng(p * n)
    a, b = rng.integers(0, F.q, 50), rng.integers(0, F.q, 50)
    assert list(F.mul_arr(a, b)) == [F.mul(int(x), int(y)) for x, y in zip(a, b)]
    assert list(F.add_arr(a, b)) == [F.add(int(x), int(y)) for x, y in zip(a, b)]
    nz = a[a > 0]
    assert list(F.inv_arr(nz)) == [F.inv(int(x)) for x in nz]
    assert list(F.dlog_arr(nz)) == [F.dlog(int(x)) for x in nz]


def test_generator_of_prime_field_is_least_primitive_root():
    for p in (3, 5, 7, 11, 13, 31, 101):
        assert gf.field(p, 1).generator == primitive_root(p)


def test_bsgs_log_without_tables():
    F = gf.FieldCtx(5, 3, table_limit=10)
    assert not F.has_tables
    for a in (1, 2, 17, 99, 124):
        assert F.pow(F.generator, F.dlog(a)) == a


@pytest.mark.parametrize("p,s,m", [(2, 1, 3), (3, 1, 2), (3, 2, 2), (5, 1, 3), (2, 2, 3)])
def test_norm_and_trace_against_frobenius_orbits(p, s, m):
    T = gf.Tower(p, s)
    F, emb = T.ext(m), T.emb(m)
    rng = np.random.default_rng(0)
    for y in rng.integers(1, F.q, 30):
        orbit = [F.frob(int(y), s * i) for i in range(m)]
        prod, total = 1, 0
        for c in orbit:
            prod, total = F.mul(prod, c), F.add(total, c)
        assert emb.embed(emb.norm(int(y))) == prod
        assert emb.embed(emb.trace(int(y))) == total


@pytest.mark.parametrize("p,s,m", [(3, 1, 2), (2, 2, 2), (5, 1, 2)])
def test_embedding_is_a_ring_map_and_trace_is_balanced(p, s, m):
    T = gf.Tower(p, s)
    k, F, emb = T.base, T.ext(m), T.emb(m)
    for a in range(k.q):
        assert emb.restrict(emb.embed(a)) == a
        for b in range(k.q):
            assert emb.embed(k.mul(a, b)) == F.mul(emb.embed(a), emb.embed(b))
    counts = np.bincount(emb.trace_arr(F.elements()), minlength=k.q)
    assert set(counts) == {F.q // k.q}
    norms = np.bincount(emb.norm_arr(F.elements()[1:]), minlength=k.q)
    assert norms[0] == 0 and set(norms[1:]) == {(F.q - 1) // (k.q - 1)}


@pytest.mark.filterwarnings("ignore::DeprecationWarning")
@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_factorization_matches_sympy(p):
    k = gf.field(p, 1)
    rng = np.random.default_rng(p)
    for _ in range(15):
        g = tuple(int(c) for c in rng.integers(0, p, 6)) + (1,)
        ours = gf.factor_monic(k, g)
        assert gf.expand(k, ours) == gf.ptrim(g)
        _, theirs = factor_list(Poly(list(reversed(g)), t, modulus=p))
        expect = sorted((tuple(int(c) % p for c in reversed(f.all_coeffs())), e) for f, e in theirs)
        expect = [(tuple(c if c >= 0 else c + p for c in f), e) for f, e in expect]
        assert sorted(ours) == sorted(expect)
        for fac, _ in ours:
            assert gf.is_irreducible(k, fac)


def test_factor_in_characteristic_two_extension():
    k = gf.field(2, 2)
    g = gf.pmul(k, gf.from_roots(k, [0, 1, 2, 3]), (1, 1, 1))
    facs = gf.factor_monic(k, gf.pmul(k, g, g))
    assert gf.expand(k, facs) == gf.pmul(k, g, g)
    assert all(gf.is_irreducible(k, f) for f, _ in facs)


def test_factor_over_nonprime_field():
    k = gf.field(3, 2)
    g = gf.from_roots(k, [1, 4, 7])
    assert gf.poly_roots(k, g) == [1, 4, 7]
    assert [m for _, m in gf.factor_monic(k, gf.pmul(k, g, g))] == [2, 2, 2]


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 6), min_size=1, max_size=6), st.lists(st.integers(0, 6), min_size=1, max_size=6))
def test_extended_gcd_bezout(a, b):
    k = gf.field(7, 1)
    a, b = gf.ptrim(tuple(a)), gf.ptrim(tuple(b))
    if not a and not b:
        return
    g, s, u = gf.pxgcd(k, a, b) if a else gf.pxgcd(k, b, a)
    lhs = gf.padd(k, gf.pmul(k, s, a if a else b), gf.pmul(k, u, b if a else a))
    assert lhs == g
    assert gf.pmod(k, a, g) == () and gf.pmod(k, b, g) == ()


def test_matinv_mod():
    a = np.array([[1, 2], [3, 4]])
    inv = gf.matinv_mod(a, 7)
    assert np.array_equal(a @ inv % 7, np.eye(2, dtype=int))


def test_degree_checks():
    with pytest.raises(gf.NotPrime):
        gf.FieldCtx(4, 1)
    with pytest.raises(gf.CompositeModulus):
        gf.FieldCtx(2, 2, (1, 0, 1))
    with pytest.raises(gf.DegreeNotDivisible):
        gf.relative_norm(gf.field(2, 3), 3, 2)
