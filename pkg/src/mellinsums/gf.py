"""Finite fields F_{p^n}, towers of extensions, and polynomials over them.

Elements are plain Python ints in ``range(p**n)``: the base-p digits of an
element are the coefficients (lowest first) of its representative modulo
the defining polynomial.  Fields small enough for an exp/log table also get
vectorized numpy kernels, which is what the bulk character sums use.
"""

from __future__ import annotations

import math
import random
from functools import lru_cache

import numpy as np
from sympy import factorint, isprime

DEFAULT_TABLE_LIMIT = 1 << 25


class NotPrime(ValueError):
    pass


class CompositeModulus(ValueError):
    pass


class DegreeNotDivisible(ValueError):
    pass


class ZeroElement(ZeroDivisionError):
    pass


# ---------------------------------------------------------------------------
# dense linear algebra mod p (tiny matrices, used for Frobenius and embeddings)

def matinv_mod(a, p):
    """Inverse of a square integer matrix modulo the prime ``p``."""
    a = np.array(a, dtype=np.int64) % p
    k = a.shape[0]
    aug = np.concatenate([a, np.eye(k, dtype=np.int64)], axis=1)
    for col in range(k):
        piv = next((r for r in range(col, k) if aug[r, col]), None)
        if piv is None:
            raise ValueError("singular matrix")
        aug[[col, piv]] = aug[[piv, col]]
        aug[col] = aug[col] * pow(int(aug[col, col]), -1, p) % p
        for r in range(k):
            if r != col and aug[r, col]:
                aug[r] = (aug[r] - aug[r, col] * aug[col]) % p
    return aug[:, k:]


def _pivot_columns(a, p):
    """Indices of a maximal set of linearly independent columns mod p."""
    a = np.array(a, dtype=np.int64) % p
    rows, cols = a.shape
    pivots, r = [], 0
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if a[i, c]), None)
        if piv is None:
            continue
        a[[r, piv]] = a[[piv, r]]
        a[r] = a[r] * pow(int(a[r, c]), -1, p) % p
        for i in range(rows):
            if i != r and a[i, c]:
                a[i] = (a[i] - a[i, c] * a[r]) % p
        pivots.append(c)
        r += 1
    return pivots


# ---------------------------------------------------------------------------
# polynomials over F_p with int coefficients (used to build fields)

def _fp_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mulmod(a, b, m, p):
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    return _fp_mod(prod, m, p)


def _fp_mod(a, m, p):
    a = [x % p for x in a]
    dm = len(m) - 1
    inv = pow(m[-1], -1, p)
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] * inv % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return _fp_trim(a[:dm] if len(a) > dm else a)


def _fp_gcd(a, b, p):
    a, b = _fp_trim(list(a)), _fp_trim(list(b))
    while b:
        a, b = b, _fp_mod(a, b, p)
    return a


def _fp_powmod(a, e, m, p):
    result = [1]
    base = _fp_mod(a, m, p)
    while e:
        if e & 1:
            result = _fp_mulmod(result, base, m, p)
        base = _fp_mulmod(base, base, m, p)
        e >>= 1
    return result


def is_irreducible_fp(coeffs, p):
    """Ben-Or test: gcd(f, x^{p^i} - x) = 1 for all i <= deg f / 2."""
    f = [c % p for c in coeffs]
    n = len(f) - 1
    if n < 1 or f[-1] == 0:
        return False
    if n == 1:
        return True
    xp = [0, 1]
    for _ in range(n // 2):
        xp = _fp_powmod(xp, p, f, p)
        diff = list(xp) + [0] * max(0, 2 - len(xp))
        diff[1] = (diff[1] - 1) % p
        if len(_fp_gcd(f, diff, p)) > 1:
            return False
    return True


def smallest_irreducible(p, n):
    """Lexicographically smallest monic irreducible of degree n over F_p.

    Candidates are ordered by the coefficient tuple (c_{n-1}, ..., c_0).
    """
    for code in range(p**n):
        digits = [(code // p**i) % p for i in range(n)]
        coeffs = digits + [1]   # so the most significant digit is c_{n-1}
        if is_irreducible_fp(coeffs, p):
            return tuple(coeffs)
    raise AssertionError("no irreducible polynomial found")


# ---------------------------------------------------------------------------

class FieldCtx:
    """The finite field F_{p^n} = F_p[x]/(modulus)."""

    def __init__(self, p, n, modulus=None, table_limit=DEFAULT_TABLE_LIMIT):
        if not isprime(p):
            raise NotPrime(p)
        if n < 1:
            raise ValueError("degree must be >= 1")
        if modulus is None:
            modulus = smallest_irreducible(p, n)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != n + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree n")
        if not is_irreducible_fp(modulus, p):
            raise CompositeModulus(modulus)
        self.p = p
        self.n = n
        self.modulus = modulus
        self.q = p**n
        self.order = self.q - 1
        self._order_primes = sorted(factorint(self.order)) if self.order > 1 else []
        self.has_tables = self.q <= table_limit
        self._bsgs = None
        if self.has_tables:
            self._build_tables()
        else:
            self.generator = self._find_generator()
        self.frob_matrix = self._matrix_of(lambda y: self.pow(y, p))
        # trace to F_p of the basis monomials x^i
        self._tr_basis = np.array([self._slow_abs_trace(p**i) for i in range(n)], dtype=np.int64)

    def __repr__(self):
        return f"FieldCtx(p={self.p}, n={self.n}, modulus={list(self.modulus)})"

    # -- digit encoding ---------------------------------------------------
    def to_digits(self, a):
        return [(a // self.p**i) % self.p for i in range(self.n)]

    def from_digits(self, d):
        return sum(int(c) % self.p * self.p**i for i, c in enumerate(d))

    def digits_arr(self, a):
        a = np.asarray(a, dtype=np.int64)
        pw = self.p ** np.arange(self.n, dtype=np.int64)
        return (a[..., None] // pw) % self.p

    def from_digits_arr(self, d):
        pw = self.p ** np.arange(self.n, dtype=np.int64)
        return (np.asarray(d, dtype=np.int64) % self.p) @ pw

    def elements(self):
        return np.arange(self.q, dtype=np.int64)

    # -- scalar arithmetic ------------------------------------------------
    def add(self, a, b):
        if self.n == 1:
            return (a + b) % self.p
        da, db = self.to_digits(a), self.to_digits(b)
        return self.from_digits([x + y for x, y in zip(da, db)])

    def neg(self, a):
        if self.n == 1:
            return -a % self.p
        return self.from_digits([-x for x in self.to_digits(a)])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        if self.n == 1:
            return a * b % self.p
        if self.has_tables:
            return int(self.exp_table[(self.log_table[a] + self.log_table[b]) % self.order])
        prod = _fp_mulmod(self.to_digits(a), self.to_digits(b), list(self.modulus), self.p)
        return self.from_digits(prod)

    def pow(self, a, e):
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroElement
            return 0
        if self.n == 1:
            return pow(a, e, self.p)
        if self.has_tables and hasattr(self, "log_table"):
            return int(self.exp_table[(int(self.log_table[a]) * e) % self.order])
        e %= self.order
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, a):
        if a == 0:
            raise ZeroElement
        if self.n == 1:
            return pow(a, -1, self.p)
        return self.pow(a, self.order - 1)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def embed_prime(self, c):
        """The element c of the prime field F_p."""
        return c % self.p

    def frob(self, a, k=1):
        """a^(p^k)."""
        return self.pow(a, self.p ** (k % self.n))

    # -- vectorized arithmetic (requires tables) --------------------------
    def add_arr(self, a, b):
        if self.n == 1:
            return (np.asarray(a) + np.asarray(b)) % self.p
        return self.from_digits_arr(self.digits_arr(a) + self.digits_arr(b))

    def neg_arr(self, a):
        if self.n == 1:
            return -np.asarray(a) % self.p
        return self.from_digits_arr(-self.digits_arr(a))

    def sub_arr(self, a, b):
        return self.add_arr(a, self.neg_arr(b))

    def mul_arr(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.n == 1:
            return a * b % self.p
        out = self.exp_table[(self.log_table[a] + self.log_table[b]) % self.order]
        return np.where((a == 0) | (b == 0), 0, out)

    def scale_arr(self, c, a):
        """Multiply every entry of the array a by the scalar c."""
        return self.mul_arr(np.full(np.shape(a), c, dtype=np.int64), a)

    def inv_arr(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroElement
        return self.exp_table[(-self.log_table[a]) % self.order]

    def pow_arr(self, a, e):
        a = np.asarray(a, dtype=np.int64)
        out = self.exp_table[(self.log_table[a] * (e % self.order)) % self.order]
        if e == 0:
            return np.ones_like(a)
        return np.where(a == 0, 0, out)

    def frob_arr(self, a, k=1):
        m = self._matpow_mod(self.frob_matrix, k % self.n)
        return self.from_digits_arr(self.digits_arr(a) @ m % self.p)

    def abs_trace_arr(self, a):
        """Tr_{F_{p^n}/F_p} of every entry, as ints mod p."""
        return (self.digits_arr(a) @ self._tr_basis) % self.p

    def abs_trace(self, a):
        return int(sum(d * t for d, t in zip(self.to_digits(a), self._tr_basis)) % self.p)

    def dlog_arr(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroElement
        return self.log_table[a]

    def poly_eval_arr(self, coeffs, x):
        """Evaluate a polynomial with coefficients in this field at every x."""
        x = np.asarray(x, dtype=np.int64)
        acc = np.zeros_like(x)
        for c in reversed(list(coeffs)):
            acc = self.add_arr(self.mul_arr(acc, x), np.full_like(x, c))
        return acc

    # -- discrete logarithms ------------------------------------------------
    def dlog(self, a):
        """The exponent e with generator**e == a."""
        if a == 0:
            raise ZeroElement
        if self.has_tables:
            return int(self.log_table[a])
        return self._bsgs_log(a)

    def _bsgs_log(self, a):
        m = math.isqrt(self.order) + 1
        if self._bsgs is None:
            baby, cur = {}, 1
            for j in range(m):
                baby.setdefault(cur, j)
                cur = self.mul(cur, self.generator)
            self._bsgs = (baby, self.inv(self.pow(self.generator, m)))
        baby, giant = self._bsgs
        cur = a
        for i in range(m + 1):
            j = baby.get(cur)
            if j is not None:
                return (i * m + j) % self.order
            cur = self.mul(cur, giant)
        raise AssertionError("discrete log not found")

    def element_order(self, a):
        if a == 0:
            raise ZeroElement
        order = self.order
        for ell in self._order_primes:
            while order % ell == 0 and self.pow(a, order // ell) == 1:
                order //= ell
        return order

    # -- construction helpers ---------------------------------------------
    def _is_primitive(self, a):
        return a != 0 and all(self._slow_pow(a, self.order // ell) != 1 for ell in self._order_primes)

    def _slow_pow(self, a, e):
        if self.n == 1:
            return pow(a, e, self.p)
        result, base = [1], self.to_digits(a)
        m = list(self.modulus)
        while e:
            if e & 1:
                result = _fp_mulmod(result, base, m, self.p)
            base = _fp_mulmod(base, base, m, self.p)
            e >>= 1
        return self.from_digits(result)

    def _find_generator(self):
        for g in range(1, self.q):
            if self._is_primitive(g):
                return g
        raise AssertionError("no generator")

    def _mul_matrix(self, c):
        """Matrix of y -> c*y on digit row vectors (digits(cy) = digits(y) @ M)."""
        m = list(self.modulus)
        rows = [(_fp_mulmod(self.to_digits(c), [0] * i + [1], m, self.p) + [0] * self.n)[: self.n]
                for i in range(self.n)]
        return np.array(rows, dtype=np.int64)

    def _matrix_of(self, linear_map):
        rows = [self.to_digits(linear_map(self.p**i)) for i in range(self.n)]
        return np.array(rows, dtype=np.int64)

    def _matpow_mod(self, m, k):
        out = np.eye(self.n, dtype=np.int64)
        for _ in range(k):
            out = out @ m % self.p
        return out

    def _slow_abs_trace(self, a):
        total, cur = 0, a
        for _ in range(self.n):
            total = self.add(total, cur)
            cur = self._slow_pow(cur, self.p)
        return total  # lies in F_p, i.e. total < p

    def _build_tables(self):
        self.generator = self._find_generator()
        order, n, p = self.order, self.n, self.p
        # powers g^0..g^{b-1} one by one, then whole blocks by a single matrix product
        b = max(1, math.isqrt(order))
        mult = self._mul_matrix(self.generator)
        first = np.zeros((b, n), dtype=np.int64)
        cur = np.zeros(n, dtype=np.int64)
        cur[0] = 1
        for i in range(b):
            first[i] = cur
            cur = cur @ mult % p
        step = self._mul_matrix(self.from_digits(cur))   # multiplication by g^b
        blocks, block = [first], first
        for _ in range((order - 1) // b):
            block = block @ step % p
            blocks.append(block)
        powers = np.concatenate(blocks)[:order]
        exp = self.from_digits_arr(powers)
        log = np.full(self.q, -1, dtype=np.int64)
        log[exp] = np.arange(order, dtype=np.int64)
        if np.count_nonzero(log[1:] >= 0) != order:
            raise AssertionError("generator is not primitive")
        self.exp_table = exp
        self.log_table = log


@lru_cache(maxsize=None)
def field(p, n):
    """Shared context for F_{p^n} with the default modulus."""
    return FieldCtx(p, n)


def build_field(p, n, modulus=None):
    if modulus is None:
        return field(p, n)
    return FieldCtx(p, n, modulus)


# ---------------------------------------------------------------------------

class Embedding:
    """An embedding of F_{p^s} into F_{p^{s m}} with relative norm and trace.

    The image of the generator of the small field's polynomial basis is the
    smallest root (as an int) of the small field's modulus in the big field.
    """

    def __init__(self, sub: FieldCtx, big: FieldCtx):
        if sub.p != big.p or big.n % sub.n:
            raise DegreeNotDivisible(f"{sub.n} does not divide {big.n}")
        self.sub, self.big = sub, big
        self.degree = big.n // sub.n
        p = sub.p
        self.root = min(poly_roots(big, [big.embed_prime(c) for c in sub.modulus]))
        rows, cur = [], 1
        for _ in range(sub.n):
            rows.append(big.to_digits(cur))
            cur = big.mul(cur, self.root)
        self.matrix = np.array(rows, dtype=np.int64)          # sub digits -> big digits
        piv = _pivot_columns(self.matrix, p)
        self._pivots = piv
        self._restrict = matinv_mod(self.matrix[:, piv], p)   # big digits[piv] -> sub digits
        # Tr_{big/sub} as a matrix on big digits: sum of Frob^{s i}
        fs = big._matpow_mod(big.frob_matrix, sub.n)
        acc, cur_m = np.zeros((big.n, big.n), dtype=np.int64), np.eye(big.n, dtype=np.int64)
        for _ in range(self.degree):
            acc = (acc + cur_m) % p
            cur_m = cur_m @ fs % p
        self._trace_matrix = acc
        self.norm_exponent = big.order // sub.order
        # dlog_sub(N(g_big)): then dlog_sub(N y) = norm_log_factor * dlog_big(y)
        self.norm_log_factor = sub.dlog(self.restrict(big.pow(big.generator, self.norm_exponent)))

    def embed(self, a):
        return int(self.big.from_digits_arr(np.array(self.sub.to_digits(a)) @ self.matrix % self.sub.p))

    def embed_arr(self, a):
        return self.big.from_digits_arr(self.sub.digits_arr(a) @ self.matrix % self.sub.p)

    def restrict(self, y):
        """Preimage of an element of the image of the small field."""
        return int(self.restrict_arr(np.array([y]))[0])

    def restrict_arr(self, y):
        d = self.big.digits_arr(y)
        sub_digits = d[..., self._pivots] @ self._restrict % self.sub.p
        if not np.array_equal(sub_digits @ self.matrix % self.sub.p, d % self.sub.p):
            raise ValueError("element does not lie in the subfield")
        return self.sub.from_digits_arr(sub_digits)

    def norm(self, y):
        return self.restrict(self.big.pow(y, self.norm_exponent))

    def norm_arr(self, y):
        y = np.asarray(y, dtype=np.int64)
        out = self.sub.exp_table[(self.norm_log_factor * self.big.dlog_arr(y)) % self.sub.order]
        return out

    def norm_dlog_arr(self, y):
        """dlog in the small field of the norm of each (nonzero) entry."""
        return (self.norm_log_factor * self.big.dlog_arr(y)) % self.sub.order

    def trace(self, y):
        return int(self.trace_arr(np.array([y]))[0])

    def trace_arr(self, y):
        d = self.big.digits_arr(y) @ self._trace_matrix % self.sub.p
        return self.restrict_arr(self.big.from_digits_arr(d))


@lru_cache(maxsize=None)
def embedding(p, s, n):
    """Embedding of the default F_{p^s} into the default F_{p^{s n}}."""
    return Embedding(field(p, s), field(p, s * n))


class Tower:
    """Base field k = F_{p^s} together with its extensions k_n = F_{p^{s n}}."""

    def __init__(self, p, s=1):
        self.p, self.s = p, s
        self.base = field(p, s)
        self.q = self.base.q

    def ext(self, n):
        return field(self.p, self.s * n)

    def emb(self, n):
        return embedding(self.p, self.s, n)

    def __repr__(self):
        return f"Tower(p={self.p}, s={self.s})"


def relative_norm(ctx_n, x, base_degree):
    if ctx_n.n % base_degree:
        raise DegreeNotDivisible(f"{base_degree} does not divide {ctx_n.n}")
    return Embedding(field(ctx_n.p, base_degree), ctx_n).norm(x)


def relative_trace(ctx_n, x, base_degree):
    if ctx_n.n % base_degree:
        raise DegreeNotDivisible(f"{base_degree} does not divide {ctx_n.n}")
    return Embedding(field(ctx_n.p, base_degree), ctx_n).trace(x)


def dlog(ctx, x):
    return ctx.dlog(x)


# ---------------------------------------------------------------------------
# polynomials over a FieldCtx: tuples of field elements, lowest degree first

def ptrim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def pdeg(a):
    return len(a) - 1


def padd(F, a, b):
    n = max(len(a), len(b))
    a = tuple(a) + (0,) * (n - len(a))
    b = tuple(b) + (0,) * (n - len(b))
    return ptrim(F.add(x, y) for x, y in zip(a, b))


def psub(F, a, b):
    return padd(F, a, tuple(F.neg(y) for y in b))


def pscale(F, c, a):
    return ptrim(F.mul(c, x) for x in a)


def pmul(F, a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
    return ptrim(out)


def pdivmod(F, a, b):
    b = ptrim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(ptrim(a))
    db = len(b) - 1
    inv_lead = F.inv(b[-1])
    quot = [0] * max(0, len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = F.mul(a[i], inv_lead)
        if c:
            quot[i - db] = c
            for j in range(db + 1):
                a[i - db + j] = F.sub(a[i - db + j], F.mul(c, b[j]))
    return ptrim(quot), ptrim(a[:db])


def pmod(F, a, b):
    return pdivmod(F, a, b)[1]


def pmonic(F, a):
    a = ptrim(a)
    if not a:
        return a
    return pscale(F, F.inv(a[-1]), a)


def pgcd(F, a, b):
    a, b = ptrim(a), ptrim(b)
    while b:
        a, b = b, pmod(F, a, b)
    return pmonic(F, a)


def ppowmod(F, a, e, m):
    result, base = (1,), pmod(F, a, m)
    while e:
        if e & 1:
            result = pmod(F, pmul(F, result, base), m)
        base = pmod(F, pmul(F, base, base), m)
        e >>= 1
    return result


def pderiv(F, a):
    return ptrim([F.mul(F.embed_prime(i % F.p), c) for i, c in enumerate(a)][1:])


def peval(F, a, x):
    acc = 0
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def _frob_poly(F, a, k):
    """x^(|F|^k) mod a, computed by repeated |F|-th powering."""
    x = (0, 1)
    for _ in range(k):
        x = ppowmod(F, x, F.q, a)
    return x


def is_irreducible(F, a):
    a = pmonic(F, a)
    n = pdeg(a)
    if n < 1:
        return False
    xq = (0, 1)
    for _ in range(n // 2):
        xq = ppowmod(F, xq, F.q, a)
        if pdeg(pgcd(F, a, psub(F, xq, (0, 1)))) > 0:
            return False
    return True


def _pth_root(F, a):
    return ptrim(F.pow(a[i], F.q // F.p) for i in range(0, len(a), F.p))


def _squarefree(F, a):
    """Square-free factorization: list of (square-free poly, multiplicity)."""
    a = pmonic(F, a)
    da = pderiv(F, a)
    if not da:
        return [(g, m * F.p) for g, m in _squarefree(F, _pth_root(F, a))]
    out, i = [], 1
    c = pgcd(F, a, da)
    w = pdivmod(F, a, c)[0]
    while pdeg(w) > 0:
        y = pgcd(F, w, c)
        fac = pdivmod(F, w, y)[0]
        if pdeg(fac) > 0:
            out.append((fac, i))
        i += 1
        w, c = y, pdivmod(F, c, y)[0]
    if pdeg(c) > 0:
        out += [(g, m * F.p) for g, m in _squarefree(F, _pth_root(F, c))]
    return out


def _distinct_degree(F, a):
    out, i, xq = [], 1, (0, 1)
    while pdeg(a) >= 2 * i:
        xq = ppowmod(F, xq, F.q, a)
        g = pgcd(F, a, psub(F, xq, (0, 1)))
        if pdeg(g) > 0:
            out.append((g, i))
            a = pdivmod(F, a, g)[0]
            xq = pmod(F, xq, a)
        i += 1
    if pdeg(a) > 0:
        out.append((a, pdeg(a)))
    return out


def _equal_degree(F, a, d, rng):
    if pdeg(a) == d:
        return [a]
    e = (F.q**d - 1) // 2
    while True:
        r = ptrim(rng.randrange(F.q) for _ in range(pdeg(a)))
        if pdeg(r) < 1:
            continue
        if F.p == 2:
            # absolute trace map r + r^2 + ... + r^(2^(n d - 1)) splits instead
            acc, term = r, r
            for _ in range(F.n * d - 1):
                term = ppowmod(F, term, 2, a)
                acc = padd(F, acc, term)
            g = pgcd(F, a, acc)
        else:
            g = pgcd(F, a, psub(F, ppowmod(F, r, e, a), (1,)))
        if 0 < pdeg(g) < pdeg(a):
            return (_equal_degree(F, g, d, rng)
                    + _equal_degree(F, pdivmod(F, a, g)[0], d, rng))


def factor_monic(F, g, seed=0):
    """Factor a monic polynomial into irreducibles.

    Returns a list of (factor, multiplicity) sorted by degree and then by
    coefficients from the top down.
    """
    g = ptrim(g)
    if pdeg(g) < 1 or g[-1] != 1:
        raise ValueError("expected a monic polynomial of degree >= 1")
    rng = random.Random(seed)
    found = {}
    for sf, mult in _squarefree(F, g):
        for block, d in _distinct_degree(F, sf):
            for fac in _equal_degree(F, block, d, rng):
                found[fac] = found.get(fac, 0) + mult
    return sorted(found.items(), key=lambda fm: (len(fm[0]), fm[0][::-1]))


def poly_roots(F, a):
    """Distinct roots in F of a polynomial with coefficients in F."""
    a = pmonic(F, a)
    if pdeg(a) < 1:
        return []
    if pdeg(a) == 1:
        return [F.neg(a[0])]
    if F.has_tables and F.q <= 1 << 16:
        vals = F.poly_eval_arr(a, F.elements())
        return [int(x) for x in np.flatnonzero(vals == 0)]
    xq = ppowmod(F, (0, 1), F.q, a)
    lin = pgcd(F, a, psub(F, xq, (0, 1)))
    if pdeg(lin) < 1:
        return []
    if lin[0] == 0:
        roots = [0]
        lin = pdivmod(F, lin, (0, 1))[0]
    else:
        roots = []
    if pdeg(lin) >= 1:
        roots += [F.neg(fac[0]) for fac in _equal_degree(F, lin, 1, random.Random(0))]
    return sorted(roots)


def expand(F, factors):
    out = (1,)
    for fac, mult in factors:
        for _ in range(mult):
            out = pmul(F, out, fac)
    return out


def from_roots(F, roots):
    """prod (t - z) over the given roots."""
    out = (1,)
    for z in roots:
        out = pmul(F, out, (F.neg(z), 1))
    return out


def monic_polys(F, degree):
    """All monic polynomials of the given degree, as coefficient tuples."""
    for code in range(F.q**degree):
        coeffs = [(code // F.q**i) % F.q for i in range(degree)]
        yield tuple(coeffs) + (1,)


def pxgcd(F, a, b):
    """(g, s, t) with s a + t b = g monic."""
    r0, r1 = ptrim(a), ptrim(b)
    s0, s1, t0, t1 = (1,), (), (), (1,)
    while r1:
        quo, rem = pdivmod(F, r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, psub(F, s0, pmul(F, quo, s1))
        t0, t1 = t1, psub(F, t0, pmul(F, quo, t1))
    c = F.inv(r0[-1])
    return pscale(F, c, r0), pscale(F, c, s0), pscale(F, c, t0)
