import math

import numpy as np
import pytest

from mellinsums import gf, tracefn as tf
from mellinsums.torus import TorusCtx


def _brute_kloosterman(F, nu, a):
    """Sum of psi(x_1 + ... + x_nu) over all tuples with product a."""
    psi = tf.additive_character(F)
    units = range(1, F.q)
    total = 0j
    if nu == 2:
        for x in units:
            total += psi[F.add(x, F.div(a, x))]
    else:
        for x in units:
            for y in units:
                total += psi[F.add(F.add(x, y), F.div(a, F.mul(x, y)))]
    return total


@pytest.mark.parametrize("p,s,nu", [(7, 1, 2), (3, 2, 2), (5, 1, 3), (2, 3, 2)])
def test_kloosterman_convolution_matches_direct_sum(p, s, nu):
    T = gf.Tower(p, s)
    F = T.base
    fam = tf.Kloosterman(nu)
    table = fam.raw_points(T, 1)
    assert table[0] == 0
    for a in range(1, F.q):
        brute = _brute_kloosterman(F, nu, a)
        assert abs(table[a] - brute) < 1e-9
        assert abs(fam.raw_value(T, 1, a) - brute) < 1e-9
        assert abs(brute) <= nu * F.q ** ((nu - 1) / 2) + 1e-9
    if nu == 2:
        assert np.allclose(table.imag, 0, atol=1e-9)


@pytest.mark.parametrize("p,n", [(5, 1), (7, 1), (3, 2), (11, 1)])
def test_legendre_traces_count_points(p, n):
    F = gf.field(p, n)
    a = tf.legendre_traces(F)
    squares = np.bincount(F.mul_arr(F.elements(), F.elements()), minlength=F.q)
    x = F.elements()
    for t0 in range(F.q):
        rhs = F.mul_arr(F.mul_arr(x, F.sub_arr(x, np.ones_like(x))), F.sub_arr(x, np.full_like(x, t0)))
        affine = int(squares[rhs].sum())
        assert a[t0] == F.q - affine
        if t0 not in (0, 1):
            assert abs(a[t0]) <= 2 * math.sqrt(F.q)
    assert a[0] == tf.bad_fiber_sign(F, 0)
    assert a[1] == tf.bad_fiber_sign(F, 1)


def test_tannakian_dimensions():
    T = gf.Tower(7)
    assert tf.tannakian_dim(tf.kloosterman(T, 2)) == 1
    assert tf.tannakian_dim(tf.kloosterman(T, 3)) == 1
    assert tf.tannakian_dim(tf.kloosterman_salie(T)) == 2
    assert tf.tannakian_dim(tf.degenerate_gauss(T)) == 1
    f = gf.from_roots(T.base, [1, 2, 3])
    assert tf.tannakian_dim(tf.kummer_diagonal(T, f, 2)) == 4
    assert tf.tannakian_dim(tf.point_mass(tf.MultiplicativeGroup(T), 3)) == 1
    leg = tf.legendre_on_torus(TorusCtx(T, gf.from_roots(T.base, [2, 3])))
    assert tf.tannakian_dim(leg) == 4
    assert tf.tannakian_dim(tf.dual_trace(leg)) == 4
    missing = tf.ObjectDescriptor(tf.AdditiveGroup(T), tf.LegendreFiber())
    with pytest.raises(tf.MissingSingularityData):
        tf.tannakian_dim(missing)


def _descriptors(T):
    yield tf.kloosterman(T, 2)
    yield tf.kloosterman_salie(T)
    yield tf.degenerate_gauss(T, eta=2)
    yield tf.kummer_diagonal(T, gf.from_roots(T.base, [1, 3]), 1)
    yield tf.point_mass(tf.DiagonalGroup(T), (3, 3), alpha=1j)


@pytest.mark.parametrize("n", [1, 2])
def test_table_value_and_pushforward_agree(n):
    T = gf.Tower(5)
    for M in _descriptors(T):
        table = M.table(n)
        G = M.structure(n)
        rng = np.random.default_rng(n)
        for flat in rng.integers(0, table.size, 40):
            v = np.unravel_index(int(flat), table.shape)
            assert abs(M.value(G.decode(tuple(int(c) for c in v)), n) - table[v]) < 1e-9
        assert abs(M.pushforward(n).sum() - table.sum()) < 1e-9
        assert np.all(np.abs(M.table(n)) <= M.trace_bound(n) + 1e-9)


def test_dual_is_conjugate_at_inverse():
    T = gf.Tower(7)
    for M in _descriptors(T):
        D = tf.dual_trace(M)
        assert tf.dual_trace(D) is M or isinstance(M.family, tf.PointMass)
        G = M.structure(1)
        t, d = M.table(1), D.table(1)
        for v in [(1, 2), (4, 0), (5, 6)]:
            if len(v) != t.ndim:
                v = (v[0],) + (v[1],) * (t.ndim - 1)
            neg = tuple(-c % o for c, o in zip(v, t.shape))
            assert abs(d[v] - np.conj(t[neg])) < 1e-12
            g = G.decode(v)
            assert abs(tf.eval_trace(D, g) - d[v]) < 1e-12


def _monic_rows(k, n):
    codes = np.arange(k.q**n, dtype=np.int64)
    rows = [(codes // k.q**i) % k.q for i in range(n)] + [np.ones_like(codes)]
    return np.stack(rows)


@pytest.mark.parametrize("fam", [
    tf.KummerAS(g=((6, 0, 1), (1,)), eta=1),                    # eta(x^2 - 1)
    tf.KummerAS(g=((0, 1), (1,)), f=((0, 1), (1,)), eta=2),     # eta(x) psi(x)
    tf.KummerAS(f=((1,), (0, 1))),                               # psi(1/x)
    tf.KummerAS(g=((2, 1), (3, 1)), f=((1, 0, 3), (0, 1)), eta=3),
])
def test_polynomial_weights_are_products_over_roots(fam):
    T = gf.Tower(7)
    k = T.base
    # split quadratics: product of the values at the two roots; a root at 0
    # lies outside G_m and kills the weight
    rows = _monic_rows(k, 2)
    w = fam.polynomial_weights(k, rows)
    for a in range(k.q):
        for b in range(a, k.q):
            c = gf.from_roots(k, [a, b])
            code = c[0] + k.q * c[1]
            expect = 0 if a == 0 else fam.raw_value(T, 1, a) * fam.raw_value(T, 1, b)
            assert abs(w[code] - expect) < 1e-9
    # irreducible quadratics: the value on k_2 at either root
    F, emb = T.ext(2), T.emb(2)
    for x in range(F.q):
        if F.frob(x, 1) == x:
            continue
        xq = F.frob(x, 1)
        c0 = emb.restrict(F.mul(x, xq))
        c1 = emb.restrict(F.neg(F.add(x, xq)))
        assert abs(w[c0 + k.q * c1] - fam.raw_value(T, 2, x)) < 1e-9


def test_polynomial_norm_flat_matches_points():
    T = gf.Tower(5)
    G = tf.DiagonalGroup(T, alpha=2)
    k, F, emb = T.base, T.ext(3), T.emb(3)
    for x in range(1, F.q, 7):
        conj = [F.frob(x, i) for i in range(3)]
        poly = (1,)
        for c in conj:
            poly = gf.pmul(F, poly, (F.neg(c), 1))
        rows = np.array([[emb.restrict(c)] for c in poly])
        idx, valid = G.polynomial_norm_flat(rows)
        assert valid[0]
        assert idx[0] == G.point_norm_flat(3, np.array([x]))[0]


def test_legendre_value_outside_domain():
    T = gf.Tower(7)
    torus = TorusCtx(T, gf.from_roots(T.base, [2, 3]))
    M = tf.legendre_on_torus(torus)
    F = T.base
    assert M.value((5, 1)) == 0                    # t - 2 with f(2) = 0
    assert M.value((5, 2)) == 0                    # not of the form t - x
    # t - 0 sits over the nodal fibre at 0
    assert abs(M.value((0, 1)) + tf.bad_fiber_sign(F, 0) / 7) < 1e-12
