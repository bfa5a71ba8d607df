"""Finite abelian groups, their characters, and exact roots of unity."""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from sympy import ZZ, Matrix, Poly, Symbol, cyclotomic_poly, factorint
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import smith_normal_decomp


class NotAbelian(ValueError):
    def __init__(self, g, h):
        super().__init__(f"elements do not commute: {g!r}, {h!r}")
        self.witness = (g, h)


class OrderMismatch(ValueError):
    pass


class WrongGroup(ValueError):
    pass


@dataclass(frozen=True)
class RootOfUnity:
    """e(angle) for a rational angle kept in [0, 1)."""

    angle: Fraction

    def __post_init__(self):
        object.__setattr__(self, "angle", Fraction(self.angle) % 1)

    @classmethod
    def from_ratio(cls, a, n):
        return cls(Fraction(a, n))

    def __mul__(self, other):
        return RootOfUnity(self.angle + other.angle)

    def __truediv__(self, other):
        return RootOfUnity(self.angle - other.angle)

    def __pow__(self, k):
        return RootOfUnity(self.angle * k)

    def conjugate(self):
        return RootOfUnity(-self.angle)

    @property
    def order(self):
        return self.angle.denominator

    def is_one(self):
        return self.angle == 0

    def __complex__(self):
        # reduce to the nearest angle in (-1/2, 1/2] before going to floats
        a = self.angle if self.angle <= Fraction(1, 2) else self.angle - 1
        return cmath.exp(2j * math.pi * float(a))

    @property
    def value(self):
        return complex(self)


def is_zero_sum(roots):
    """Whether a multiset of roots of unity sums to exactly zero.

    With N the common denominator of the angles, the sum is P(e(1/N)) for
    an integer polynomial P, and it vanishes iff the N-th cyclotomic
    polynomial divides P.
    """
    counts = {}
    for r in roots:
        counts[r.angle] = counts.get(r.angle, 0) + 1
    if not counts:
        return True
    den = math.lcm(*(a.denominator for a in counts))
    hist = [0] * den
    for a, c in counts.items():
        hist[int(a * den)] += c
    t = Symbol("t")
    poly = Poly(hist[::-1], t, domain=ZZ)
    return poly.rem(Poly(cyclotomic_poly(den, t), t, domain=ZZ)).is_zero


class AbelianGroupStructure:
    """A finite abelian group written as a product of cyclic groups.

    ``orders`` are the cyclic factor orders; ``encode`` sends an element to
    its exponent vector and ``decode`` goes back.  Structures produced by
    :func:`discover_structure` use the invariant factors d_1 | d_2 | ...;
    concrete groups built elsewhere may use any product decomposition, and
    :attr:`invariant_factors` always gives the canonical form.
    """

    def __init__(self, orders, encode, decode, generators=None, op=None, identity=None, name=""):
        self.orders = tuple(int(d) for d in orders)
        self._encode = encode
        self._decode = decode
        self.generators = generators
        self.op = op
        self.identity = identity
        self.name = name

    def __repr__(self):
        return f"AbelianGroupStructure({self.name or 'group'}, orders={self.orders})"

    @property
    def order(self):
        return math.prod(self.orders)

    @property
    def invariant_factors(self):
        return invariant_factors(self.orders)

    def encode(self, g):
        return tuple(int(e) % d for e, d in zip(self._encode(g), self.orders))

    def decode(self, v):
        return self._decode(tuple(int(e) % d for e, d in zip(v, self.orders)))

    def exponent_vectors(self):
        return itertools.product(*(range(d) for d in self.orders))

    def elements(self):
        return (self.decode(v) for v in self.exponent_vectors())

    def flat_index(self, v):
        return int(np.ravel_multi_index(tuple(int(e) for e in v), self.orders)) if self.orders else 0


def invariant_factors(orders):
    """Invariant factors of the product of cyclic groups of the given orders."""
    primes = {}
    for d in orders:
        for ell, k in factorint(d).items():
            primes.setdefault(ell, []).append(ell**k)
    length = max((len(v) for v in primes.values()), default=0)
    out = [1] * length
    for powers in primes.values():
        powers.sort()
        for i, pk in enumerate(reversed(powers)):
            out[length - 1 - i] *= pk
    return tuple(d for d in out if d > 1)


@dataclass(frozen=True)
class Character:
    """The character x -> e(sum c_i x_i / d_i) of a product of cyclic groups."""

    group: AbelianGroupStructure
    exponents: tuple

    @property
    def order(self):
        return math.lcm(1, *(d // math.gcd(c, d) for c, d in zip(self.exponents, self.group.orders)))

    def is_trivial(self):
        return not any(self.exponents)

    def angle_of_vector(self, v):
        return sum((Fraction(c * e, d) for c, e, d in zip(self.exponents, v, self.group.orders)), Fraction(0))

    def __call__(self, g):
        return eval_char(self, g)

    def conjugate(self):
        return Character(self.group, tuple(-c % d for c, d in zip(self.exponents, self.group.orders)))

    def __mul__(self, other):
        if other.group is not self.group:
            raise WrongGroup("characters of different groups")
        return Character(self.group, tuple((a + b) % d for a, b, d in
                                           zip(self.exponents, other.exponents, self.group.orders)))


def all_characters(G):
    """All characters of G in lexicographic order of exponent vectors."""
    return [Character(G, c) for c in G.exponent_vectors()]


def eval_char(chi, g, group=None):
    if group is not None and group is not chi.group:
        raise WrongGroup("character belongs to another group")
    try:
        v = chi.group.encode(g)
    except (KeyError, ValueError, TypeError) as exc:
        raise WrongGroup(f"{g!r} is not an element of {chi.group!r}") from exc
    return RootOfUnity(chi.angle_of_vector(v))


# ---------------------------------------------------------------------------
# structure discovery

def smith_form(rel):
    """Smith normal form of an integer matrix: returns (diag, U, V) with
    U rel V = diag(d), as sympy matrices."""
    dm = DomainMatrix.from_Matrix(Matrix(rel)).convert_to(ZZ)
    d, u, v = smith_normal_decomp(dm)
    return d.to_Matrix(), u.to_Matrix(), v.to_Matrix()


def discover_structure(order, op, identity, elements, check=True):
    """Invariant factors and generators of a finite abelian group.

    ``op(g, h)`` is the group law on hashable elements, and ``elements`` is
    an iterable over the whole group.  Generators are picked greedily by
    largest order relative to the span found so far; the resulting
    triangular relation matrix is then diagonalized by Smith normal form.
    """
    elems = list(elements)
    if len(elems) != order:
        raise OrderMismatch(f"enumerated {len(elems)} elements, expected {order}")

    def power(g, k):
        out = identity
        for _ in range(k):
            out = op(out, g)
        return out

    span = {identity: ()}
    gens, rel_orders, rel_rows = [], [], []
    remaining = elems
    while len(span) < order:
        # candidate with the largest order relative to the current span
        best, best_m, best_vec = None, 0, None
        for g in remaining:
            if g in span:
                continue
            h, m = g, 1
            while h not in span:
                h = op(h, g)
                m += 1
            if m > best_m:
                best, best_m, best_vec = g, m, span[h]
            if best_m * len(span) == order:
                break
        k = len(gens)
        gens.append(best)
        rel_orders.append(best_m)
        rel_rows.append([-c for c in best_vec] + [0] * (k - len(best_vec)) + [best_m])
        new_span = {}
        cur = identity
        for j in range(best_m):
            for s, vec in span.items():
                new_span[op(s, cur)] = vec + (0,) * (k - len(vec)) + (j,)
            cur = op(cur, best)
        span = new_span
        remaining = [g for g in remaining if g not in span]
    if len(span) != order:
        raise OrderMismatch("span does not match the stated order")
    for i, g in enumerate(gens):
        for h in gens[i + 1:]:
            if op(g, h) != op(h, g):
                raise NotAbelian(g, h)
    k = len(gens)
    if k == 0:
        return AbelianGroupStructure((), lambda g: (), lambda v: identity, [], op, identity)
    rel = [row + [0] * (k - len(row)) for row in rel_rows]
    d, _, v = smith_form(rel)
    vinv = v.inv()
    diag = [int(d[i, i]) for i in range(k)]
    keep = [i for i in range(k) if diag[i] != 1]
    orders = [abs(diag[i]) for i in keep]

    def combine(coeffs):
        out = identity
        for g, c in zip(gens, coeffs):
            out = op(out, power(g, int(c)))
        return out

    gen_orders = [_element_order(g, op, identity) for g in gens]
    new_gens = []
    for i in keep:
        row = [int(vinv[i, j]) % gen_orders[j] for j in range(k)]
        new_gens.append(combine(row))
    vmat = np.array(v.tolist(), dtype=object)
    table = {}
    for g, vec in span.items():
        coords = np.array(vec, dtype=object) @ vmat
        table[g] = tuple(int(coords[i]) % orders[j] for j, i in enumerate(keep))
    inverse = {vec: g for g, vec in table.items()}
    G = AbelianGroupStructure(orders, table.__getitem__, inverse.__getitem__, new_gens, op, identity)
    if check:
        verify_structure(G, elems)
    return G


def _element_order(g, op, identity):
    h, m = g, 1
    while h != identity:
        h = op(h, g)
        m += 1
    return m


def verify_structure(G, elements=None):
    """Check generator orders, divisibility of invariant factors and that the
    encode/decode maps are mutually inverse bijections (exhaustive)."""
    for a, b in zip(G.orders, G.orders[1:]):
        if b % a:
            raise OrderMismatch(f"invariant factors {G.orders} do not divide each other")
    if G.generators is not None and G.op is not None:
        for g, d in zip(G.generators, G.orders):
            if _element_order(g, G.op, G.identity) != d:
                raise OrderMismatch("generator order differs from its invariant factor")
    seen = set()
    for v in G.exponent_vectors():
        g = G.decode(v)
        if G.encode(g) != v:
            raise OrderMismatch("encode(decode(v)) != v")
        seen.add(g)
    if len(seen) != G.order:
        raise OrderMismatch("decode is not injective")
    if elements is not None:
        for g in elements:
            if G.decode(G.encode(g)) != g:
                raise OrderMismatch("decode(encode(g)) != g")
    if G.generators is not None and G.op is not None:
        # decode must be the homomorphism defined by the generators
        for v in itertools.islice(G.exponent_vectors(), 0, 2000):
            g = G.identity
            for gen, e in zip(G.generators, v):
                for _ in range(e):
                    g = G.op(g, gen)
            if g != G.decode(v):
                raise OrderMismatch("decode disagrees with the generators")
    return True


def cyclic_group(order, encode, decode, name=""):
    return AbelianGroupStructure((order,), lambda g: (encode(g),), lambda v: decode(v[0]), name=name)
