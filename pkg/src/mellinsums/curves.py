"""Odd-degree hyperelliptic curves y^2 = h(x) and their Jacobians.

Divisor classes are reduced Mumford pairs (u, v) of coefficient tuples
(lowest degree first) over k_n, with u monic, deg v < deg u <= g and
u | v^2 - h.  The neutral element is (1, 0), stored as ((1,), ()).
The Abel-Jacobi map uses the rational Weierstrass point at infinity.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from . import gf
from .abgroup import discover_structure
from .tracefn import ConstantOnCurve, ObjectDescriptor, bad_fiber_sign, legendre_traces, quadratic_character


class BudgetExceeded(RuntimeError):
    pass


class PointNotOnCurve(ValueError):
    pass


class UnsupportedCharacteristic(ValueError):
    pass


IDENTITY = ((1,), ())
INFINITY = "inf"


class HyperellipticCurve:
    def __init__(self, tower: gf.Tower, h):
        k = tower.base
        if tower.p == 2:
            raise UnsupportedCharacteristic("characteristic 2")
        h = gf.ptrim(tuple(int(c) for c in h))
        if any(not 0 <= c < k.q for c in h):
            raise ValueError("coefficients of h must be elements of k")
        if len(h) % 2 == 1 or len(h) < 4:
            raise ValueError("h must have odd degree >= 3")
        if h[-1] != 1:
            raise ValueError("h must be monic")
        if gf.pdeg(gf.pgcd(k, h, gf.pderiv(k, h))) > 0:
            raise ValueError("h is not square-free")
        self.tower = tower
        self.h = h
        self.genus = (len(h) - 2) // 2
        self._counts = {}
        self._zeta = None

    def __repr__(self):
        return f"HyperellipticCurve(y^2 = {list(self.h)} over F_{self.tower.q})"

    def h_over(self, n):
        return tuple(self.tower.emb(n).embed(c) for c in self.h) if n > 1 else self.h

    # -- points ---------------------------------------------------------------
    def count_points(self, n=1, budget=10**7):
        """|C(k_n)|, the point at infinity included."""
        if n not in self._counts:
            F = self.tower.ext(n)
            if F.q > budget:
                raise BudgetExceeded(f"q^n = {F.q}")
            vals = F.poly_eval_arr(self.h_over(n), F.elements())
            self._counts[n] = int(F.q + quadratic_character(F)[vals].sum()) + 1
        return self._counts[n]

    def points(self, n=1):
        """Affine points (x, y) over k_n, in increasing order of (x, y)."""
        F = self.tower.ext(n)
        h = self.h_over(n)
        out = []
        for x in range(F.q):
            hx = gf.peval(F, h, x)
            if hx == 0:
                out.append((x, 0))
            elif F.log_table[hx] % 2 == 0:
                y = int(F.exp_table[F.log_table[hx] // 2])
                out.extend(sorted([(x, y), (x, F.neg(y))]))
        return out

    def on_curve(self, P, n=1):
        if P == INFINITY:
            return True
        F = self.tower.ext(n)
        x, y = P
        return F.mul(y, y) == gf.peval(F, self.h_over(n), x)

    # -- zeta function ----------------------------------------------------------
    def lpoly(self):
        """Integer coefficients of P(T) = prod (1 - alpha_i T), degree 2g."""
        if self._zeta is None:
            g, q = self.genus, self.tower.q
            s = [0] + [q**n + 1 - self.count_points(n) for n in range(1, g + 1)]
            e = [Fraction(1)] + [Fraction(0)] * (2 * g)
            for j in range(1, g + 1):
                e[j] = sum((-1) ** (i - 1) * e[j - i] * s[i] for i in range(1, j + 1)) / j
            for j in range(g + 1, 2 * g + 1):
                e[j] = e[2 * g - j] * q ** (j - g)
            self._zeta = [int((-1) ** j * e[j]) for j in range(2 * g + 1)]
        return self._zeta

    def frobenius_power_sums(self, upto):
        """s_m = sum alpha_i^m = q^m + 1 - |C(k_m)|, exact, from P(T)."""
        P = self.lpoly()
        r = len(P) - 1
        s = [r]
        for m in range(1, upto + 1):
            acc = -m * P[m] if m <= r else 0
            acc -= sum(P[i] * s[m - i] for i in range(1, min(m, r + 1)))
            s.append(acc)
        return s

    def jacobian_order(self, n=1):
        """|Jac(k_n)| = prod (1 - alpha_i^n), exactly."""
        r = 2 * self.genus
        s = self.frobenius_power_sums(n * r)
        sn = [None] + [s[n * j] for j in range(1, r + 1)]
        e = [Fraction(1)]
        for j in range(1, r + 1):
            e.append(sum((-1) ** (i - 1) * e[j - i] * sn[i] for i in range(1, j + 1)) / j)
        return int(sum((-1) ** j * e[j] for j in range(r + 1)))

    # -- Mumford arithmetic -------------------------------------------------------
    def is_reduced(self, D, n=1):
        F = self.tower.ext(n)
        u, v = D
        if not u or u[-1] != 1 or gf.pdeg(u) > self.genus or len(v) > max(len(u) - 1, 0):
            return False
        return not gf.pmod(F, gf.psub(F, gf.pmul(F, v, v), self.h_over(n)), u)

    def compose(self, D1, D2, n=1):
        """Cantor composition followed by reduction."""
        F = self.tower.ext(n)
        h = self.h_over(n)
        (u1, v1), (u2, v2) = D1, D2
        d1, e1, e2 = gf.pxgcd(F, u1, u2)
        d, c1, c2 = gf.pxgcd(F, d1, gf.padd(F, v1, v2))
        s1, s2, s3 = gf.pmul(F, c1, e1), gf.pmul(F, c1, e2), c2
        dd = gf.pmul(F, d, d)
        u = gf.pdivmod(F, gf.pmul(F, u1, u2), dd)[0]
        num = gf.padd(F, gf.padd(F, gf.pmul(F, gf.pmul(F, s1, u1), v2), gf.pmul(F, gf.pmul(F, s2, u2), v1)),
                      gf.pmul(F, s3, gf.padd(F, gf.pmul(F, v1, v2), h)))
        v = gf.pmod(F, gf.pdivmod(F, num, d)[0], u)
        return self.reduce((u, v), n)

    def reduce(self, D, n=1):
        F = self.tower.ext(n)
        h = self.h_over(n)
        u, v = gf.pmonic(F, D[0]), gf.ptrim(D[1])
        v = gf.pmod(F, v, u)
        while gf.pdeg(u) > self.genus:
            u = gf.pmonic(F, gf.pdivmod(F, gf.psub(F, h, gf.pmul(F, v, v)), u)[0])
            v = gf.pmod(F, gf.pscale(F, F.neg(1), v), u)
        return (tuple(u), tuple(v))

    def inverse(self, D, n=1):
        F = self.tower.ext(n)
        u, v = D
        return (u, gf.pscale(F, F.neg(1), v))

    def multiply(self, D, m, n=1):
        if m < 0:
            D, m = self.inverse(D, n), -m
        out, base = IDENTITY, D
        while m:
            if m & 1:
                out = self.compose(out, base, n)
            base = self.compose(base, base, n)
            m >>= 1
        return out

    # -- Abel-Jacobi and norms -----------------------------------------------------
    def embed_s_D(self, P, n=1):
        """The class of (P) - (inf)."""
        if P == INFINITY:
            return IDENTITY
        if not self.on_curve(P, n):
            raise PointNotOnCurve(P)
        F = self.tower.ext(n)
        x, y = P
        return ((F.neg(x), 1), gf.ptrim((y,)))

    def frobenius(self, D, n, power=1):
        """Apply the q-power Frobenius of k ``power`` times to the coefficients."""
        F = self.tower.ext(n)
        k = self.tower.s * power
        u, v = D
        return (tuple(F.frob(c, k) for c in u), tuple(F.frob(c, k) for c in v))

    def jacobian_norm(self, D, n):
        """sum_{i<n} Frob^i(D), computed over k_n and restricted to k."""
        if n == 1:
            return D
        acc = IDENTITY
        for i in range(n):
            acc = self.compose(acc, self.frobenius(D, n, i), n)
        return self.restrict(acc, n)

    def restrict(self, D, n):
        emb = self.tower.emb(n)
        u, v = D
        return (tuple(emb.restrict(c) for c in u), tuple(emb.restrict(c) for c in v))

    def include(self, D, n):
        if n == 1:
            return D
        emb = self.tower.emb(n)
        return tuple(tuple(emb.embed(c) for c in part) for part in D)

    def norm_of_points(self, n):
        """N_{k_n/k}(s_D(P)) for every point P of C(k_n), as a list of
        (class over k, multiplicity) pairs, one per Galois orbit of
        x-coordinates.  Works with closed points of C instead of summing
        Frobenius conjugates over k_n."""
        if n == 1:
            out = [(IDENTITY, 1)]
            out += [(self.embed_s_D(P), 1) for P in self.points(1)]
            return out
        if self.tower.s != 1:
            raise NotImplementedError("closed points are computed over prime fields only")
        F = self.tower.ext(n)
        h = self.h_over(n)
        x_all = F.elements()
        hx = F.poly_eval_arr(h, x_all)
        lam = quadratic_character(F)[hx]
        out = [(IDENTITY, 1)]
        seen = np.zeros(F.q, dtype=bool)
        for x in range(F.q):
            if seen[x] or lam[x] < 0:
                continue
            orbit = [x]
            cur = F.frob(x, 1)
            while cur != x:
                orbit.append(cur)
                cur = F.frob(cur, 1)
            seen[orbit] = True
            d = len(orbit)
            minpoly = _minpoly_over_prime(F, orbit)
            npoints = d * (1 if hx[x] == 0 else 2)
            if hx[x] == 0:
                cls = self.multiply(self.reduce((minpoly, ())), n // d)
                out.append((cls, npoints))
                continue
            y = int(F.exp_table[F.log_table[hx[x]] // 2])
            if F.frob(y, d) != y:
                # y generates a quadratic extension of k(x): P + i(P) ~ 0
                out.append((IDENTITY, npoints))
                continue
            for yy in (y, F.neg(y)):
                v = _interpolate_over_prime(F, x, d, yy)
                cls = self.multiply(self.reduce((minpoly, v)), n // d)
                out.append((cls, d))
        assert sum(m for _, m in out) == self.count_points(n)
        return out

    # -- enumeration ---------------------------------------------------------------
    def jacobian_elements(self, budget=10**6):
        """All reduced divisors over k (exhaustive over u, v)."""
        k = self.tower.base
        g = self.genus
        if k.q ** (2 * g) > budget * 50:
            raise BudgetExceeded("enumeration too large")
        out = [IDENTITY]
        for deg in range(1, g + 1):
            for u in gf.monic_polys(k, deg):
                for code in range(k.q**deg):
                    v = gf.ptrim(tuple((code // k.q**i) % k.q for i in range(deg)))
                    if not gf.pmod(k, gf.psub(k, gf.pmul(k, v, v), self.h), u):
                        out.append((u, v))
        return out

    def jacobian(self, budget=10**6):
        return JacobianGroup(self, budget)


def _minpoly_over_prime(F, orbit):
    """prod (T - c) over an orbit, returned with F_p coefficients."""
    poly = (1,)
    for c in orbit:
        poly = gf.pmul(F, poly, (F.neg(c), 1))
    if any(c >= F.p for c in poly):
        raise AssertionError("orbit polynomial not defined over F_p")
    return poly


def _interpolate_over_prime(F, x, d, y):
    """v in F_p[T] of degree < d with v(x) = y (requires y in F_p(x))."""
    p = F.p
    powers, cur = [], 1
    for _ in range(d):
        powers.append(F.to_digits(cur))
        cur = F.mul(cur, x)
    A = np.array(powers, dtype=np.int64)
    piv = gf._pivot_columns(A, p)
    sol = np.array(F.to_digits(y), dtype=np.int64)[piv] @ gf.matinv_mod(A[:, piv], p) % p
    if not np.array_equal(sol @ A % p, np.array(F.to_digits(y)) % p):
        raise AssertionError("y does not lie in F_p(x)")
    return gf.ptrim(tuple(int(c) for c in sol))


class JacobianGroup:
    """Jac(C) as a group realization for descriptors (tag "jacobian")."""

    tag = "jacobian"

    def __init__(self, curve: HyperellipticCurve, budget=10**6):
        self.curve = curve
        self.tower = curve.tower
        order = curve.jacobian_order(1)
        if order > budget:
            raise BudgetExceeded(f"|Jac| = {order}")
        elems = curve.jacobian_elements(budget)
        self._structure = discover_structure(order, curve.compose, IDENTITY, elems)
        self._push = {}

    def orders(self, n=1):
        if n != 1:
            raise NotImplementedError("only Jac(k) is enumerated")
        return self._structure.orders

    def structure(self, n=1):
        if n != 1:
            raise NotImplementedError("only Jac(k) is enumerated")
        return self._structure

    def group_order(self, n=1):
        return self.curve.jacobian_order(n)

    def identity(self, n=1):
        return IDENTITY

    def include(self, D, n):
        return self.curve.include(D, n)

    def flat(self, D):
        return self._structure.flat_index(self._structure.encode(D))

    def curve_pushforward(self, n):
        """Number of points of C(k_n) over each class of Jac(k) (via the norm)."""
        if n not in self._push:
            out = np.zeros(self._structure.order)
            for cls, mult in self.curve.norm_of_points(n):
                out[self.flat(cls)] += mult
            self._push[n] = out.reshape(self._structure.orders)
        return self._push[n]

    def curve_table(self, n=1):
        if n != 1:
            raise NotImplementedError("only Jac(k) is enumerated")
        return self.curve_pushforward(1)

    def in_curve_image(self, D, n=1):
        if n != 1:
            raise NotImplementedError("only Jac(k) is enumerated")
        return self.curve_table(1).reshape(-1)[self.flat(D)] > 0

    def domain_mask(self, n):
        raise NotImplementedError


def curve_object(curve: HyperellipticCurve, budget=10**6):
    """s_{D*} Q_l (1/2) [1]: t = -q_n^(-1/2) on the image of the curve."""
    return ObjectDescriptor(JacobianGroup(curve, budget), ConstantOnCurve(), shift=1, weight=1,
                            rank=1, label=f"curve in Jacobian, g={curve.genus}")


def jacobian(curve, budget=10**6):
    return JacobianGroup(curve, budget)


def embed_s_D(curve, P, n=1):
    return curve.embed_s_D(P, n)


def jacobian_norm(curve, n, D):
    return curve.jacobian_norm(D, n)


def count_points(curve, n=1):
    return curve.count_points(n)


# ---------------------------------------------------------------------------
# von Mangoldt function of the Legendre family over k(t)

def legendre_von_mangoldt(q, g, seed=0):
    """Lambda_E(g) for E: y^2 = x (x - 1)(x - t) over F_q(t), q prime."""
    tower = gf.Tower(q)
    k = tower.base
    if k.p < 5:
        raise UnsupportedCharacteristic("characteristic must be >= 5")
    g = gf.pmonic(k, g)
    if gf.pdeg(g) < 1:
        return 0
    factors = gf.factor_monic(k, g, seed)
    if len(factors) != 1:
        return 0
    pi, nu = factors[0]
    return prime_power_lambda(k, pi, nu)


def prime_power_lambda(k, pi, nu):
    d = len(pi) - 1
    if pi == (0, 1):
        return d * bad_fiber_sign(k, 0) ** nu
    if pi == (k.neg(1), 1):
        return d * bad_fiber_sign(k, 1) ** nu
    a, qd = local_trace(k, pi), k.q**d
    # alpha^nu + beta^nu with alpha + beta = a, alpha beta = q^d
    s_prev, s = 2, a
    for _ in range(nu - 1):
        s_prev, s = s, a * s - qd * s_prev
    return d * s


def local_trace(k, pi):
    """a_{t0} over the residue field k[t]/pi, t0 the class of t."""
    d = len(pi) - 1
    if d == 1:
        F, t0 = k, k.neg(pi[0])
    else:
        F = gf.FieldCtx(k.p, d, modulus=pi)
        t0 = k.p
    x = F.elements()
    lam = quadratic_character(F)
    cubic = F.mul_arr(F.mul_arr(x, F.sub_arr(x, np.ones_like(x))), F.sub_arr(x, np.full_like(x, t0)))
    return int(-lam[cubic].sum())


def lambda_degree_sum(q, m):
    """sum of Lambda_E(g) over monic g of degree m, by enumerating g."""
    k = gf.Tower(q).base
    return sum(legendre_von_mangoldt(q, g) for g in gf.monic_polys(k, m))


def fiber_trace_sum(q, m):
    """sum of a_{t0}(k_m) over t0 in k_m, bad fibres included."""
    return int(legendre_traces(gf.Tower(q).ext(m)).sum())
