"""The torus T(k_n) = (k_n[t]/f)^x for a square-free monic f over k.

Units are stored as residue polynomials modulo f (coefficient tuples over
k_n).  Characters are addressed through the Chinese remainder theorem: one
discrete logarithm per irreducible factor of f, each in its residue field.
"""

from __future__ import annotations

import math

import numpy as np

from . import gf
from .abgroup import AbelianGroupStructure, Character, all_characters


class NotSquareFree(ValueError):
    pass


class XIsRootOfF(ValueError):
    pass


class _Level:
    """Factorization of f over k_n with one residue field per factor."""

    def __init__(self, torus, n):
        tower = torus.tower
        F = tower.ext(n)
        self.F = F
        self.n = n
        emb = tower.emb(n) if n > 1 else None
        self.f = tuple(emb.embed(c) for c in torus.f) if emb else tuple(torus.f)
        self.factors = [fac for fac, _ in gf.factor_monic(F, self.f)]
        self.locals = []
        for fac in self.factors:
            if len(fac) == 2:
                self.locals.append(None)
            elif F.n == 1:
                self.locals.append(gf.FieldCtx(F.p, len(fac) - 1, modulus=fac))
            else:
                raise NotImplementedError(
                    "irreducible factors of degree > 1 are supported over prime fields only")
        self.orders = tuple(F.order if loc is None else loc.order for loc in self.locals)
        # CRT idempotents: e_i = 1 mod factor i, 0 mod the others
        self.idempotents = []
        for i, fac in enumerate(self.factors):
            other = gf.pdivmod(F, self.f, fac)[0]
            _, s, _ = gf.pxgcd(F, other, fac)
            self.idempotents.append(gf.pmod(F, gf.pmul(F, s, other), self.f))

    def roots(self):
        return [self.F.neg(fac[0]) for fac, loc in zip(self.factors, self.locals) if loc is None]

    def local_logs(self, g):
        F = self.F
        out = []
        for fac, loc in zip(self.factors, self.locals):
            if loc is None:
                val = gf.peval(F, g, F.neg(fac[0]))
                if val == 0:
                    raise ValueError("not a unit modulo f")
                out.append(F.dlog(val))
            else:
                r = gf.pmod(F, g, fac)
                if not r:
                    raise ValueError("not a unit modulo f")
                out.append(loc.dlog(loc.from_digits(r)))
        return tuple(out)

    def from_logs(self, v):
        F = self.F
        g = ()
        for e, fac, loc, idem in zip(v, self.factors, self.locals, self.idempotents):
            if loc is None:
                lift = (F.pow(F.generator, e),)
            else:
                lift = gf.ptrim(loc.to_digits(loc.pow(loc.generator, e)))
            g = gf.padd(F, g, gf.pmul(F, lift, idem))
        return gf.pmod(F, g, self.f)


class TorusCtx:
    """The torus attached to a square-free monic f over the base of ``tower``.

    Also implements the group-realization interface used by descriptors in
    :mod:`mellinsums.tracefn` (objects are supported on the image of
    x -> t - x).
    """

    tag = "torus"

    def __init__(self, tower: gf.Tower, f):
        self.tower = tower
        k = tower.base
        f = gf.ptrim(tuple(int(c) for c in f))
        if len(f) < 3 or f[-1] != 1:
            raise ValueError("f must be monic of degree >= 2")
        if gf.pdeg(gf.pgcd(k, f, gf.pderiv(k, f))) > 0:
            raise NotSquareFree(f)
        self.f = f
        self.degree = len(f) - 1
        self._levels = {}
        self.factors = self.level(1).factors

    def __repr__(self):
        return f"TorusCtx(f={list(self.f)} over F_{self.tower.q})"

    def level(self, n):
        if n not in self._levels:
            self._levels[n] = _Level(self, n)
        return self._levels[n]

    # -- group structure ----------------------------------------------------
    def orders(self, n=1):
        return self.level(n).orders

    def unit_group(self, n=1):
        lev = self.level(n)
        return AbelianGroupStructure(lev.orders, lev.local_logs, lev.from_logs,
                                     name=f"T(F_{lev.F.q})")

    structure = unit_group

    def order(self, n=1):
        return math.prod(self.orders(n))

    def group_order(self, n=1):
        """|T(k_n)| from the degrees of the factors of f over k."""
        q = self.tower.q
        out = 1
        for fac in self.factors:
            d = len(fac) - 1
            g = math.gcd(n, d)
            out *= (q ** (n * d // g) - 1) ** g
        return out

    def identity(self, n=1):
        return (1,)

    def characters(self):
        return all_characters(self.unit_group(1))

    def roots_in_base(self):
        return self.level(1).roots()

    def include(self, g, n):
        if n == 1:
            return g
        emb = self.tower.emb(n)
        return gf.ptrim(emb.embed(c) for c in g)

    # -- the embedding x -> t - x and the norm -------------------------------
    def embed_i_f(self, x, n=1):
        lev = self.level(n)
        if gf.peval(lev.F, lev.f, x) == 0:
            raise XIsRootOfF(x)
        return gf.pmod(lev.F, (lev.F.neg(x), 1), lev.f)

    def point_of(self, g, n):
        g = gf.ptrim(g)
        if len(g) == 2 and g[1] == 1:
            return self.level(n).F.neg(g[0])
        return None

    def domain_mask(self, n):
        F = self.tower.ext(n)
        f = tuple(self.tower.emb(n).embed(c) for c in self.f) if n > 1 else self.f
        return F.poly_eval_arr(f, F.elements()) != 0

    def point_flat(self, n, x):
        """Flat index in T(k_n) of t - x for each x (f(x) != 0)."""
        lev = self.level(n)
        F = lev.F
        x = np.asarray(x, dtype=np.int64)
        coords = []
        for fac, loc in zip(lev.factors, lev.locals):
            if loc is None:
                coords.append(F.dlog_arr(F.sub_arr(np.full_like(x, F.neg(fac[0])), x)))
            else:
                coords.append(loc.dlog_arr((-x) % F.p + F.p))
        return np.ravel_multi_index(tuple(coords), lev.orders)

    def point_norm_flat(self, n, x):
        """Flat index in T(k) of N_{k_n/k}(t - x) for each x (f(x) != 0)."""
        if n == 1:
            return self.point_flat(1, x)
        base = self.level(1)
        emb = self.tower.emb(n)
        F = emb.big
        x = np.asarray(x, dtype=np.int64)
        charpoly = None
        coords = []
        for fac, loc in zip(base.factors, base.locals):
            if loc is None:
                z = emb.embed(base.F.neg(fac[0]))
                coords.append(emb.norm_dlog_arr(F.sub_arr(np.full_like(x, z), x)))
            else:
                if charpoly is None:
                    charpoly = char_poly_arr(F, x)
                red = _reduce_rows(charpoly, fac, F.p)
                coords.append(loc.dlog_arr(loc.from_digits_arr(red.T)))
        return np.ravel_multi_index(tuple(coords), base.orders)

    def norm_to_gm(self, g, n=1):
        """p(g): the product over factors of the local norms down to k_n."""
        lev = self.level(n)
        F = lev.F
        out = 1
        for fac, loc in zip(lev.factors, lev.locals):
            if loc is None:
                out = F.mul(out, gf.peval(F, g, F.neg(fac[0])))
            else:
                r = gf.pmod(F, g, fac)
                y = loc.from_digits(r)
                out = F.mul(out, loc.pow(y, loc.order // F.order))   # lies in F_p
        return out

    # -- characters -----------------------------------------------------------
    def chi(self, exponents):
        return Character(self.unit_group(1), tuple(exponents))

    def gauss_sum(self, exponent, b=1):
        """Normalized Gauss sum q^(-1/2) sum_y eta(y) psi(b y) of the character
        of k^x with the given exponent."""
        from .tracefn import additive_character
        k = self.tower.base
        psi = additive_character(k, b)
        y = k.elements()[1:]
        eta = np.exp(2j * np.pi * exponent * k.log_table[y] / k.order)
        return complex((eta * psi[y]).sum() / math.sqrt(k.q))


def char_poly_arr(F: gf.FieldCtx, x):
    """Coefficients (lowest first) of prod_i (t - x^(p^i)) over F_p, for each x.

    Returns an int array of shape (F.n + 1, len(x)).
    """
    x = np.asarray(x, dtype=np.int64)
    poly = [np.ones_like(x)]
    for i in range(F.n):
        c = F.frob_arr(x, i)
        neg_c = F.neg_arr(c)
        new = [F.mul_arr(neg_c, poly[0])]
        for j in range(1, len(poly)):
            new.append(F.add_arr(poly[j - 1], F.mul_arr(neg_c, poly[j])))
        new.append(poly[-1])
        poly = new
    out = np.array(poly)
    if np.any(out >= F.p):
        raise AssertionError("characteristic polynomial not defined over F_p")
    return out


def _reduce_rows(coeffs, modulus, p):
    """Reduce integer coefficient rows (shape (deg+1, N)) modulo a monic
    polynomial over F_p; returns shape (deg modulus, N)."""
    c = np.array(coeffs, dtype=np.int64) % p
    dm = len(modulus) - 1
    mod = np.array(modulus, dtype=np.int64)
    for top in range(c.shape[0] - 1, dm - 1, -1):
        lead = c[top].copy()
        c[top - dm: top + 1] = (c[top - dm: top + 1] - np.outer(mod, lead)) % p
    out = c[:dm]
    if out.shape[0] < dm:
        out = np.vstack([out, np.zeros((dm - out.shape[0], c.shape[1]), dtype=np.int64)])
    return out


def unit_group(ctx: TorusCtx, n=1):
    return ctx.unit_group(n)


def embed_i_f(ctx: TorusCtx, x, n=1):
    return ctx.embed_i_f(x, n)


def norm_to_gm(ctx: TorusCtx, g, n=1):
    return ctx.norm_to_gm(g, n)
