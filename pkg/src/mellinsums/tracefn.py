"""Descriptors of weight-0 trace functions on commutative groups over k.

A descriptor pairs a *group realization* (G_a, G_m, the diagonal in
G_m x G_a, a torus, a Jacobian) with a *family* of functions on points.
Everything that later modules need reduces to two arrays per extension
degree n:

* ``table(n)``: the normalized trace function on G(k_n), laid out on the
  exponent grid of the group's cyclic decomposition;
* ``pushforward(n)``: the sum of t(x; k_n) over each fibre of the norm map
  G(k_n) -> G(k), laid out on the exponent grid of G(k).

The Mellin transform of ``pushforward(n)`` over G(k) gives every power sum
Tr(Theta(chi)^n) at once.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from . import gf
from .abgroup import AbelianGroupStructure


class PointOutsideDomain(ValueError):
    pass


class MissingSingularityData(ValueError):
    pass


def e_angle(x):
    return np.exp(2j * np.pi * x)


def additive_character(F: gf.FieldCtx, b=1):
    """psi(y) = e(Tr_{F/F_p}(b y) / p) for every y in F, as an array."""
    y = F.elements()
    return e_angle(F.abs_trace_arr(F.scale_arr(b, y)) / F.p)


def quadratic_character(F: gf.FieldCtx):
    """lambda(y) for every y in F, with lambda(0) = 0."""
    out = np.zeros(F.q)
    logs = F.log_table[1:]
    out[1:] = np.where(logs % 2 == 0, 1.0, -1.0)
    return out


# ---------------------------------------------------------------------------
# group realizations

class _PointGroup:
    """Shared code for groups whose objects are supported on images of k_n."""

    tag = ""

    def __init__(self, tower: gf.Tower):
        self.tower = tower

    def q(self, n=1):
        return self.tower.q**n

    @property
    def base_orders(self):
        return self.orders(1)

    def grid_size(self, n=1):
        return math.prod(self.orders(n))

    def domain_mask(self, n):
        return np.ones(self.tower.ext(n).q, dtype=bool)

    def group_order(self, n=1):
        return math.prod(self.orders(n))


class AdditiveGroup(_PointGroup):
    """G_a: k_n with coordinates its base-p digits, most significant first."""

    tag = "Ga"

    def orders(self, n):
        return (self.tower.p,) * (self.tower.s * n)

    def structure(self, n=1):
        F = self.tower.ext(n)
        return AbelianGroupStructure(
            self.orders(n), lambda y: F.to_digits(y)[::-1],
            lambda v: F.from_digits(list(v)[::-1]), name=f"Ga(F_{F.q})")

    def include(self, x, n):
        return self.tower.emb(n).embed(x) if n > 1 else x

    def point_flat(self, n, x):
        return np.asarray(x, dtype=np.int64)

    def point_norm_flat(self, n, x):
        if n == 1:
            return np.asarray(x, dtype=np.int64)
        return self.tower.emb(n).trace_arr(x)

    def point_of(self, g, n):
        return g

    def group_order(self, n=1):
        return self.tower.q**n

    def identity(self, n=1):
        return 0


class MultiplicativeGroup(_PointGroup):
    """G_m: k_n^x with coordinate the discrete logarithm."""

    tag = "Gm"

    def orders(self, n):
        return (self.tower.ext(n).order,)

    def structure(self, n=1):
        F = self.tower.ext(n)
        return AbelianGroupStructure(
            self.orders(n), lambda y: (F.dlog(y),),
            lambda v: F.pow(F.generator, v[0]), name=f"Gm(F_{F.q})")

    def domain_mask(self, n):
        m = np.ones(self.tower.ext(n).q, dtype=bool)
        m[0] = False
        return m

    def include(self, x, n):
        return self.tower.emb(n).embed(x) if n > 1 else x

    def point_flat(self, n, x):
        return self.tower.ext(n).dlog_arr(x)

    def point_norm_flat(self, n, x):
        if n == 1:
            return self.tower.base.dlog_arr(x)
        return self.tower.emb(n).norm_dlog_arr(x)

    def point_of(self, g, n):
        return g

    def group_order(self, n=1):
        return self.tower.q**n - 1

    def identity(self, n=1):
        return 1


class DiagonalGroup(_PointGroup):
    """G_m x G_a with objects supported on the image of x -> (x, alpha x)."""

    tag = "GmxGa"

    def __init__(self, tower, alpha=1):
        super().__init__(tower)
        self.alpha = alpha

    def orders(self, n):
        F = self.tower.ext(n)
        return (F.order,) + (F.p,) * F.n

    def structure(self, n=1):
        F = self.tower.ext(n)
        return AbelianGroupStructure(
            self.orders(n), lambda g: (F.dlog(g[0]),) + tuple(F.to_digits(g[1])[::-1]),
            lambda v: (F.pow(F.generator, v[0]), F.from_digits(list(v[1:])[::-1])),
            name=f"GmxGa(F_{F.q})")

    def domain_mask(self, n):
        m = np.ones(self.tower.ext(n).q, dtype=bool)
        m[0] = False
        return m

    def _alpha(self, n):
        return self.tower.emb(n).embed(self.alpha) if n > 1 else self.alpha

    def include(self, g, n):
        if n == 1:
            return g
        e = self.tower.emb(n)
        return (e.embed(g[0]), e.embed(g[1]))

    def point_flat(self, n, x):
        F = self.tower.ext(n)
        return F.dlog_arr(x) * F.q + F.scale_arr(self._alpha(n), x)

    def point_norm_flat(self, n, x):
        k = self.tower.base
        y = self.tower.ext(n).scale_arr(self._alpha(n), x)
        if n == 1:
            return k.dlog_arr(x) * k.q + y
        e = self.tower.emb(n)
        return e.norm_dlog_arr(x) * k.q + e.trace_arr(y)

    def polynomial_norm_flat(self, coeffs):
        """Flat index of (N x, Tr(alpha x)) read off the coefficients of a
        monic polynomial whose roots are x (the product and sum over roots)."""
        k = self.tower.base
        n = coeffs.shape[0] - 1
        c0 = coeffs[0]
        norm = k.neg_arr(c0) if n % 2 else c0
        trace = k.scale_arr(k.neg(self.alpha), coeffs[n - 1])
        valid = c0 != 0
        return np.where(valid, k.dlog_arr(np.where(valid, norm, 1)) * k.q + trace, 0), valid

    def point_of(self, g, n):
        x, y = g
        if x == 0 or self.tower.ext(n).mul(self._alpha(n), x) != y:
            return None
        return x

    def group_order(self, n=1):
        qn = self.tower.q**n
        return qn * (qn - 1)

    def identity(self, n=1):
        return (1, 0)


# ---------------------------------------------------------------------------
# families of functions on points of k_n (unnormalized)

@dataclass(frozen=True)
class PointMass:
    """alpha^n at the k-rational point x0 of the group, 0 elsewhere."""

    x0: object
    alpha: complex = 1.0
    raw_weight = 0
    variant = "PointMass"


@dataclass(frozen=True)
class KummerAS:
    """x -> eta(g(x)) psi(b f(x)) for rational functions g, f over k.

    Rational functions are (numerator, denominator) coefficient tuples,
    lowest degree first, with coefficients in k.  eta is the character of
    k^x with exponent ``eta`` relative to the generator of k.
    """

    g: tuple = ((0, 1), (1,))
    f: tuple = ((0,), (1,))
    eta: int = 0
    b: int = 1
    raw_weight = 0
    variant = "KummerAS"

    def raw_points(self, tower, n):
        F = tower.ext(n)
        x = F.elements()
        emb = (lambda c: tower.emb(n).embed(c)) if n > 1 else (lambda c: c)
        out = np.ones(F.q, dtype=complex)
        bad = np.zeros(F.q, dtype=bool)
        fnum = F.poly_eval_arr([emb(c) for c in self.f[0]], x)
        fden = F.poly_eval_arr([emb(c) for c in self.f[1]], x)
        bad |= fden == 0
        fval = F.mul_arr(fnum, F.inv_arr(np.where(fden == 0, 1, fden)))
        out *= additive_character(F, emb(self.b))[fval]
        if self.eta % (tower.q - 1):
            gnum = F.poly_eval_arr([emb(c) for c in self.g[0]], x)
            gden = F.poly_eval_arr([emb(c) for c in self.g[1]], x)
            bad |= (gden == 0) | (gnum == 0)
            safe = ~bad
            gval = F.mul_arr(np.where(safe, gnum, 1), F.inv_arr(np.where(safe, gden, 1)))
            logs = tower.emb(n).norm_dlog_arr(gval) if n > 1 else tower.base.dlog_arr(gval)
            out *= e_angle(self.eta * logs / (tower.q - 1))
        out[bad] = 0
        return out

    def polynomial_weights(self, k, coeffs):
        """Product of the raw values over the roots of each monic polynomial
        (coefficient rows, lowest first), using only arithmetic in k.

        The eta part needs g split over k; the additive part needs f to be a
        Laurent polynomial (denominator a multiple of a power of x).
        """
        n = coeffs.shape[0] - 1
        c0 = coeffs[0]
        ok = c0 != 0
        out = np.ones(coeffs.shape[1], dtype=complex)
        num, den = (gf.ptrim(tuple(c)) for c in self.f)
        shift = len(den) - 1
        if any(den[:-1]):
            raise NotImplementedError("additive part must be a Laurent polynomial")
        scale = k.inv(den[-1])
        laurent = {j - shift: k.mul(scale, c) for j, c in enumerate(num) if c}
        if laurent:
            total = np.zeros_like(c0)
            pos = _root_power_sums(k, coeffs, max(0, max(laurent)))
            if min(laurent) < 0:
                # roots of the reversed polynomial are the inverses
                rev = coeffs[::-1].copy()
                inv0 = k.inv_arr(np.where(ok, c0, 1))
                rev = np.stack([k.mul_arr(row, inv0) for row in rev])
                neg = _root_power_sums(k, rev, -min(laurent))
            for j, a in laurent.items():
                term = np.full_like(c0, k.embed_prime(n)) if j == 0 else (pos[j] if j > 0 else neg[-j])
                total = k.add_arr(total, k.scale_arr(a, term))
            out *= additive_character(k, self.b)[total]
        if self.eta % (k.q - 1):
            logs = np.zeros_like(c0)
            for part, sign in ((self.g[0], 1), (self.g[1], -1)):
                value, nz = _root_product(k, coeffs, gf.ptrim(tuple(part)))
                ok &= nz
                logs = logs + sign * k.dlog_arr(np.where(nz, value, 1))
            out *= e_angle(self.eta * logs / (k.q - 1))
        out[~ok] = 0
        return out

    def raw_value(self, tower, n, x):
        F = tower.ext(n)
        emb = (lambda c: tower.emb(n).embed(c)) if n > 1 else (lambda c: c)
        fden = gf.peval(F, [emb(c) for c in self.f[1]], x)
        if fden == 0:
            return 0j
        fval = F.div(gf.peval(F, [emb(c) for c in self.f[0]], x), fden)
        val = cmath.exp(2j * math.pi * F.abs_trace(F.mul(emb(self.b), fval)) / F.p)
        if self.eta % (tower.q - 1):
            gnum = gf.peval(F, [emb(c) for c in self.g[0]], x)
            gden = gf.peval(F, [emb(c) for c in self.g[1]], x)
            if gnum == 0 or gden == 0:
                return 0j
            gval = F.div(gnum, gden)
            nv = tower.emb(n).norm(gval) if n > 1 else gval
            val *= cmath.exp(2j * math.pi * self.eta * tower.base.dlog(nv) / (tower.q - 1))
        return val


def _root_power_sums(k, coeffs, upto):
    """Power sums of the roots, sum_i x_i^j for j = 0..upto, of monic
    polynomials given by coefficient rows (Newton's identities without
    division)."""
    n = coeffs.shape[0] - 1
    zero = np.zeros_like(coeffs[0])
    elem = [np.ones_like(zero)] + [coeffs[n - i] if i % 2 == 0 else k.neg_arr(coeffs[n - i])
                                   for i in range(1, n + 1)]
    power = [np.full_like(zero, k.embed_prime(n))]
    for j in range(1, upto + 1):
        acc = zero
        for i in range(1, min(j - 1, n) + 1):
            term = k.mul_arr(elem[i], power[j - i])
            acc = k.add_arr(acc, term) if i % 2 else k.sub_arr(acc, term)
        if j <= n:
            term = k.scale_arr(k.embed_prime(j), elem[j])
            acc = k.add_arr(acc, term) if j % 2 else k.sub_arr(acc, term)
        power.append(acc)
    return power


def _root_product(k, coeffs, h):
    """prod_i h(x_i) over the roots of each monic polynomial, for h split
    over k; returns (values, nonzero mask)."""
    n = coeffs.shape[0] - 1
    lead = h[-1]
    value = np.full_like(coeffs[0], k.pow(lead, n))
    factors = gf.factor_monic(k, gf.pmonic(k, h)) if len(h) > 1 else []
    for fac, mult in factors:
        if len(fac) != 2:
            raise NotImplementedError("multiplicative part must split over k")
        z = k.neg(fac[0])
        at = np.zeros_like(coeffs[0])
        for row in coeffs[::-1]:
            at = k.add_arr(k.scale_arr(z, at), row)
        if n % 2:
            at = k.neg_arr(at)
        for _ in range(mult):
            value = k.mul_arr(value, at)
    return value, value != 0


@dataclass(frozen=True)
class Kloosterman:
    """The sum of psi(x_1 + ... + x_nu) over x_1 ... x_nu = a (unnormalized)."""

    nu: int = 2
    b: int = 1
    variant = "Kloosterman"

    @property
    def raw_weight(self):
        return self.nu - 1

    def raw_points(self, tower, n):
        # nu-fold multiplicative convolution of psi, done on discrete logs
        F = tower.ext(n)
        b = tower.emb(n).embed(self.b) if n > 1 else self.b
        psi = additive_character(F, b)
        on_logs = psi[F.exp_table]
        conv = np.fft.ifft(np.fft.fft(on_logs) ** self.nu)
        out = np.zeros(F.q, dtype=complex)
        out[F.exp_table] = conv
        return out

    def raw_value(self, tower, n, a):
        if a == 0:
            return 0j
        F = tower.ext(n)
        b = tower.emb(n).embed(self.b) if n > 1 else self.b
        psi = additive_character(F, b)
        if self.nu == 1:
            return complex(psi[a])
        if F.q ** (self.nu - 1) > 10**7:
            return complex(self.raw_points(tower, n)[a])
        # direct (nu-1)-fold sum: x_nu = a / (x_1 ... x_{nu-1})
        units = F.elements()[1:]
        prods = np.ones(1, dtype=np.int64)
        sums = np.zeros(1, dtype=np.int64)
        for _ in range(self.nu - 1):
            prods = F.mul_arr(prods[:, None], units[None, :]).ravel()
            sums = F.add_arr(sums[:, None], units[None, :]).ravel()
        last = F.mul_arr(np.full_like(prods, a), F.inv_arr(prods))
        return complex(psi[F.add_arr(sums, last)].sum())


@dataclass(frozen=True)
class LegendreFiber:
    """t0 -> a_{t0}(k_n) = -sum_X lambda(X (X - 1)(X - t0)).

    At the bad fibres t0 = 0, 1 the same sum gives eps^n for the sign eps of
    the nodal reduction (lambda(-1) at 0, +1 at 1), which is the middle
    extension stalk; see :func:`bad_fiber_sign`.
    """

    raw_weight = 1
    variant = "LegendreFiber"

    def raw_points(self, tower, n):
        F = tower.ext(n)
        return legendre_traces(F).astype(complex)

    def raw_value(self, tower, n, t0):
        F = tower.ext(n)
        x = F.elements()
        lam = quadratic_character(F)
        cubic = F.mul_arr(F.mul_arr(x, F.sub_arr(x, np.ones_like(x))), F.sub_arr(x, np.full_like(x, t0)))
        return complex(-lam[cubic].sum())


def legendre_traces(F: gf.FieldCtx):
    """a_t(F) for every t in F, via an additive correlation on (Z/p)^n."""
    x = F.elements()
    lam = quadratic_character(F)
    u = lam[F.mul_arr(x, F.sub_arr(x, np.ones_like(x)))]
    shape = (F.p,) * F.n
    corr = np.fft.ifftn(np.fft.fftn(u.reshape(shape)) * np.conj(np.fft.fftn(lam.reshape(shape))))
    # corr[t] = sum_X u(X) lam(X - t) = -a_t
    return -np.rint(corr.real.reshape(-1)).astype(np.int64)


def bad_fiber_sign(F: gf.FieldCtx, t0):
    """Frobenius sign on the rank-one stalk of the Legendre family at 0 or 1.

    The nodal fibre y^2 = x^2 (x - 1) at t0 = 0 has tangents y = +-i x, split
    iff -1 is a square; at t0 = 1, y^2 = x (x - 1)^2 has split tangents.
    """
    if t0 == 0:
        return 1 if F.pow(F.neg(1), F.order // 2) == 1 else -1
    if t0 == 1:
        return 1
    raise ValueError("bad fibres are 0 and 1")


@dataclass(frozen=True)
class ConstantOnCurve:
    """The constant function 1 on the points of a curve."""

    raw_weight = 0
    variant = "CurvePush"


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SingularityDatum:
    point: object          # "0", "inf", or an element of k
    drop: int = 0
    swan: int = 0
    breaks: tuple = ()


@dataclass(frozen=True, eq=False)
class ObjectDescriptor:
    """A normalized trace function: (-1)^shift q_n^(-weight/2) times the
    family's raw values, transported into ``group``."""

    group: object
    family: object
    shift: int = 0
    weight: int = 0
    rank: int = 1
    singularities: tuple = ()
    label: str = ""
    bound: float = 1.0            # generic rank bound for |raw| / q_n^(raw_weight/2)
    dual_of: object = dc_field(default=None, repr=False)

    @property
    def tower(self):
        return self.group.tower

    @property
    def variant(self):
        if self.dual_of is not None:
            return "Dual"
        if isinstance(self.family, ConstantOnCurve):
            return "CurvePush"
        if self.group.tag == "GmxGa" and not isinstance(self.family, PointMass):
            return "DeltaPush"
        if self.group.tag == "torus" and not isinstance(self.family, PointMass):
            return "TorusPush"
        return self.family.variant

    def norm_factor(self, n):
        return (-1) ** self.shift * (self.tower.q**n) ** (-self.weight / 2)

    def trace_bound(self, n):
        raw_w = getattr(self.family, "raw_weight", 0)
        return self.bound * (self.tower.q**n) ** ((raw_w - self.weight) / 2)

    def structure(self, n=1):
        return self.group.structure(n)

    # -- evaluation -------------------------------------------------------
    def table(self, n=1):
        """t(.; k_n) on the exponent grid of G(k_n)."""
        if self.dual_of is not None:
            return np.conj(_negate_grid(self.dual_of.table(n)))
        shape = self.group.orders(n)
        out = np.zeros(math.prod(shape), dtype=complex)
        fam = self.family
        if isinstance(fam, PointMass):
            G = self.group.structure(n)
            v = G.encode(self.group.include(fam.x0, n))
            out[np.ravel_multi_index(v, shape)] = fam.alpha**n
        elif isinstance(fam, ConstantOnCurve):
            out = self.group.curve_table(n).astype(complex)
        else:
            mask = self.group.domain_mask(n)
            raw = fam.raw_points(self.tower, n)
            x = np.flatnonzero(mask)
            np.add.at(out, self.group.point_flat(n, x), raw[x])
        return out.reshape(shape) * self.norm_factor(n)

    def pushforward(self, n):
        """Sum of t(x; k_n) over each fibre of the norm G(k_n) -> G(k)."""
        if self.dual_of is not None:
            return np.conj(_negate_grid(self.dual_of.pushforward(n)))
        shape = self.group.orders(1)
        size = math.prod(shape)
        fam = self.family
        if isinstance(fam, PointMass):
            G = self.group.structure(1)
            v = tuple(n * c for c in G.encode(fam.x0))
            out = np.zeros(size, dtype=complex)
            out[np.ravel_multi_index(tuple(c % d for c, d in zip(v, shape)), shape)] = fam.alpha**n
        elif isinstance(fam, ConstantOnCurve):
            out = self.group.curve_pushforward(n).astype(complex)
        else:
            mask = self.group.domain_mask(n)
            raw = fam.raw_points(self.tower, n)
            x = np.flatnonzero(mask)
            idx = self.group.point_norm_flat(n, x)
            out = (np.bincount(idx, weights=raw[x].real, minlength=size)
                   + 1j * np.bincount(idx, weights=raw[x].imag, minlength=size))
        return out.reshape(shape) * self.norm_factor(n)

    def identity_trace(self, n=1):
        """t_M(e; k_n), without building k_n for point masses."""
        fam = self.family
        if isinstance(fam, PointMass) and self.dual_of is None:
            return fam.alpha**n if fam.x0 == self.group.identity(1) else 0j
        return self.value(self.group.identity(n), n)

    def value(self, g, n=1):
        """t_M(g; k_n) for a group element g in native form (eval_trace)."""
        if self.dual_of is not None:
            G = self.structure(n)
            inv = G.decode(tuple(-c for c in G.encode(g)))
            return complex(np.conj(self.dual_of.value(inv, n)))
        fam = self.family
        if isinstance(fam, PointMass):
            return fam.alpha**n if g == self.group.include(fam.x0, n) else 0j
        if isinstance(fam, ConstantOnCurve):
            return self.norm_factor(n) if self.group.in_curve_image(g, n) else 0j
        x = self.group.point_of(g, n)
        if x is None or not self.group.domain_mask(n)[x]:
            return 0j
        return fam.raw_value(self.tower, n, x) * self.norm_factor(n)


def _negate_grid(arr):
    """arr[-v] for every exponent vector v (the pullback by inversion)."""
    out = arr
    for axis in range(arr.ndim):
        out = np.roll(np.flip(out, axis=axis), 1, axis=axis)
    return out


def eval_trace(M: ObjectDescriptor, x, n=1):
    return M.value(x, n)


def dual_trace(M: ObjectDescriptor) -> ObjectDescriptor:
    """The descriptor with t(x) = conj(t_M(x^{-1}))."""
    if M.dual_of is not None:
        return M.dual_of
    if isinstance(M.family, PointMass):
        G = M.structure(1)
        x_inv = G.decode(tuple(-c for c in G.encode(M.family.x0)))
        fam = PointMass(x_inv, complex(np.conj(M.family.alpha)))
        return ObjectDescriptor(M.group, fam, M.shift, M.weight, M.rank, M.singularities,
                                f"dual({M.label})", M.bound)
    return ObjectDescriptor(M.group, M.family, M.shift, M.weight, M.rank, M.singularities,
                            f"dual({M.label})", M.bound, dual_of=M)


# ---------------------------------------------------------------------------
# tannakian dimension from singularity data

def tannakian_dim(M: ObjectDescriptor) -> int:
    if M.dual_of is not None:
        return tannakian_dim(M.dual_of)
    tag = M.group.tag
    if isinstance(M.family, PointMass):
        return 1
    if tag == "jacobian":
        return 2 * M.group.curve.genus - 2
    if not M.singularities and M.variant not in ("KummerAS",):
        raise MissingSingularityData(M.label or M.variant)
    sing = M.singularities
    swan_at = {}
    for s in sing:
        swan_at[str(s.point)] = swan_at.get(str(s.point), 0) + s.swan
    if tag == "GmxGa":
        # diagonal object Delta_* F [1]
        breaks = [lam for s in sing if s.point == "inf" for lam in s.breaks]
        finite = sum(s.swan + s.drop for s in sing if s.point not in ("0", "inf"))
        return int(sum(max(0, lam - 1) for lam in breaks) + finite + M.rank + swan_at.get("0", 0))
    if tag == "torus":
        f = M.group.f
        roots = set(M.group.roots_in_base())
        swan = sum(s.swan for s in sing)
        drop = sum(s.drop for s in sing if s.point not in ("inf",) and s.point not in roots)
        return int((len(f) - 2) * M.rank + swan + drop)
    if tag == "Gm":
        # generic Euler characteristic on G_m
        return int(sum(s.swan for s in sing) + sum(s.drop for s in sing if s.point not in ("0", "inf")))
    if tag == "Ga":
        breaks = [lam for s in sing if s.point == "inf" for lam in s.breaks]
        breaks += [0] * max(0, M.rank - len(breaks))
        finite = sum(s.swan + s.drop for s in sing if s.point != "inf")
        return int(-M.rank + sum(max(lam, 1) for lam in breaks) + finite)
    raise MissingSingularityData(tag)


# ---------------------------------------------------------------------------
# ready-made descriptors

def point_mass(group, x0, alpha=1.0, label="point mass"):
    return ObjectDescriptor(group, PointMass(x0, complex(alpha)), label=label)


def kloosterman(tower, nu=2, b=1):
    sing = (SingularityDatum("inf", swan=1, breaks=(Fraction(1, nu),) * nu),)
    # Kl_nu [1] (nu/2): t(a) = (-1)^nu q^(-nu/2) Kl_nu(a)
    return ObjectDescriptor(MultiplicativeGroup(tower), Kloosterman(nu, b), shift=nu,
                            weight=nu, rank=nu, singularities=sing,
                            label=f"Kl_{nu}", bound=nu)


def kloosterman_salie(tower, b=1):
    """Delta_* L_{psi(1/x)} [1](1/2): t(x, x) = -q^(-1/2) psi(1/x)."""
    fam = KummerAS(f=((1,), (0, 1)), b=b)
    sing = (SingularityDatum("0", swan=1), SingularityDatum("inf", breaks=(0,)))
    return ObjectDescriptor(DiagonalGroup(tower), fam, shift=1, weight=1, rank=1,
                            singularities=sing, label="Kloosterman-Salie")


def degenerate_gauss(tower, eta=1, b=1):
    """Delta_* (L_eta (x) L_{psi(bx)}) [1](1/2), the tannakian-dimension-1 case."""
    fam = KummerAS(g=((0, 1), (1,)), f=((0, 1), (1,)), eta=eta, b=b)
    sing = (SingularityDatum("inf", breaks=(1,)),)
    return ObjectDescriptor(DiagonalGroup(tower), fam, shift=1, weight=1, rank=1,
                            singularities=sing, label="degenerate Gauss")


def kummer_diagonal(tower, f, eta):
    """Delta_* L_{eta(f)} [1](1/2) for a polynomial f with distinct nonzero roots."""
    fam = KummerAS(g=(tuple(f), (1,)), eta=eta)
    roots = gf.poly_roots(tower.base, f)
    d = len(f) - 1
    # tame everywhere; drop 1 at each zero of f, and at infinity eta^d != 1
    sing = tuple(SingularityDatum(z, drop=1) for z in roots)
    if len(roots) < d:
        raise ValueError("f should split over k with distinct roots")
    return ObjectDescriptor(DiagonalGroup(tower), fam, shift=1, weight=1, rank=1,
                            singularities=sing, label=f"Kummer eta(f), deg {d}")


def legendre_on_torus(torus_group):
    """The Legendre family R^1 pi_* (1/2) [1](1/2), pushed into the torus of f.

    t(x) = -a_x(k_n) / q_n; drops of 1 at the bad fibres 0 and 1.
    """
    sing = (SingularityDatum(0, drop=1), SingularityDatum(1, drop=1),
            SingularityDatum("inf", breaks=(0, 0)))
    return ObjectDescriptor(torus_group, LegendreFiber(), shift=1, weight=2, rank=2,
                            singularities=sing, label="Legendre on torus", bound=2.0)
