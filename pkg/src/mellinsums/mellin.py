"""Mellin transforms, Frobenius classes from power sums, and L-hat series.

For a table t on the exponent grid of Z/d_1 x ... x Z/d_k, the Mellin
transform at the character with exponents c is

    S(c) = sum_e t(e) e(c_1 e_1 / d_1 + ... + c_k e_k / d_k),

which is |G| times numpy's inverse FFT.  Characters are laid out on the
same grid, in lexicographic order of their exponent vectors.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np


class BudgetExceeded(RuntimeError):
    pass


class TowerUnavailable(RuntimeError):
    pass


class IncompleteSpectrum(ValueError):
    pass


DEFAULT_NAIVE_BUDGET = 10**7


# ---------------------------------------------------------------------------
# transforms

def mellin_fft(table):
    table = np.asarray(table, dtype=complex)
    return np.fft.ifftn(table) * table.size if table.ndim else table


def mellin_naive(table, budget=DEFAULT_NAIVE_BUDGET):
    """Character-by-character sum; cost |G|^2."""
    table = np.asarray(table, dtype=complex)
    shape = table.shape
    size = table.size
    if size * size > budget:
        raise BudgetExceeded(f"naive transform needs {size * size} products")
    grids = np.indices(shape).reshape(len(shape), -1)             # element exponents
    flat = table.reshape(-1)
    out = np.empty(size, dtype=complex)
    for idx in range(size):
        c = np.unravel_index(idx, shape)
        angle = np.zeros(size)
        for axis, d in enumerate(shape):
            angle += (c[axis] * grids[axis] % d) / d
        out[idx] = (flat * np.exp(2j * np.pi * angle)).sum()
    return out.reshape(shape)


def inverse_mellin(spectrum_values):
    """t(e) = |G|^-1 sum_c S(c) conj(chi_c(e))."""
    s = np.asarray(spectrum_values, dtype=complex)
    return np.fft.fftn(s) / s.size


@dataclass
class Spectrum:
    values: np.ndarray
    n: int = 1
    label: str = ""
    method: str = "fft"
    wall_time: float = 0.0

    @property
    def orders(self):
        return self.values.shape

    def __len__(self):
        return self.values.size

    def rows(self):
        """(exponent vector, value) pairs in lexicographic order."""
        for idx in np.ndindex(*self.values.shape):
            yield tuple(int(i) for i in idx), complex(self.values[idx])


def mellin_spectrum(M, n=1, method="fft", budget=DEFAULT_NAIVE_BUDGET):
    start = time.perf_counter()
    table = M.table(n)
    if method == "fft":
        values = mellin_fft(table)
    elif method == "naive":
        values = mellin_naive(table, budget)
    else:
        raise ValueError(f"unknown method {method!r}")
    return Spectrum(values, n, getattr(M, "label", ""), method, time.perf_counter() - start)


def invert_spectrum(spec: Spectrum):
    if spec.values is None or np.isnan(spec.values).any():
        raise IncompleteSpectrum("spectrum has missing entries")
    return inverse_mellin(spec.values)


def plancherel_sides(table, values):
    """(sum |t|^2, |G|^-1 sum |S|^2)."""
    table = np.asarray(table)
    values = np.asarray(values)
    return float(np.sum(np.abs(table) ** 2)), float(np.sum(np.abs(values) ** 2) / values.size)


# ---------------------------------------------------------------------------
# power sums and Frobenius classes

def power_sums(M, depth):
    """Tr(Theta(chi)^n) = sum_{x in G(k_n)} chi(N x) t(x; k_n), n = 1..depth,
    for every character chi of G(k).  Row 0 is left as NaN."""
    shape = M.group.orders(1)
    out = np.full((depth + 1,) + tuple(shape), np.nan, dtype=complex)
    for n in range(1, depth + 1):
        out[n] = mellin_fft(M.pushforward(n))
    return out


def power_sums_from_polynomials(M, depth, chunk=1 << 22):
    """The output of :func:`power_sums`, computed instead from the
    L-function sum_g lambda(g) chi(g) T^deg(g) over monic g in k[t].

    lambda is the family's raw function extended multiplicatively to
    polynomials through their roots, so only arithmetic in k is needed and
    memory stays bounded for deep towers.  The power sums are the
    coefficients of its logarithmic derivative.
    """
    group, family = M.group, M.family
    if M.dual_of is not None or not hasattr(group, "polynomial_norm_flat") \
            or not hasattr(family, "polynomial_weights"):
        raise NotImplementedError(f"no polynomial route for {M.label or M.variant}")
    k = M.tower.base
    shape = tuple(group.orders(1))
    size = math.prod(shape)
    coeff = [np.ones(size, dtype=complex)]
    for n in range(1, depth + 1):
        total = k.q**n
        binned = np.zeros(size, dtype=complex)
        for start in range(0, total, chunk):
            codes = np.arange(start, min(total, start + chunk), dtype=np.int64)
            rows = [(codes // k.q**i) % k.q for i in range(n)] + [np.ones_like(codes)]
            rows = np.stack(rows)
            idx, valid = group.polynomial_norm_flat(rows)
            w = family.polynomial_weights(k, rows)
            w = np.where(valid, w, 0)
            binned += (np.bincount(idx, weights=w.real, minlength=size)
                       + 1j * np.bincount(idx, weights=w.imag, minlength=size))
        coeff.append(mellin_fft(binned.reshape(shape)).ravel())
    out = np.full((depth + 1,) + shape, np.nan, dtype=complex)
    sums = [None]
    for n in range(1, depth + 1):
        s = n * coeff[n]
        for j in range(1, n):
            s = s - sums[j] * coeff[n - j]
        sums.append(s)
        out[n] = (s * M.norm_factor(n)).reshape(shape)
    return out


def elementary_from_power(ps, upto):
    """e_0..e_upto from p_1..p_upto (Newton's identities), vectorized over
    trailing axes.  ``ps[0]`` is ignored."""
    ps = np.asarray(ps, dtype=complex)
    e = np.zeros((upto + 1,) + ps.shape[1:], dtype=complex)
    e[0] = 1
    for j in range(1, upto + 1):
        acc = np.zeros(ps.shape[1:], dtype=complex)
        for i in range(1, j + 1):
            acc += (-1) ** (i - 1) * e[j - i] * ps[i]
        e[j] = acc / j
    return e


def unitary_completion(e_known, r):
    """Complete e_0..e_m (m >= ceil(r/2)) to e_0..e_r assuming the class is
    unitary, via e_{r-j} = det * conj(e_j)."""
    m = e_known.shape[0] - 1
    half = (r + 1) // 2
    if m < half:
        raise TowerUnavailable(f"need at least {half} power sums for rank {r}")
    if r % 2 == 0:
        num, den = e_known[r // 2], e_known[r // 2]
    else:
        num, den = e_known[half], e_known[half - 1]
    with np.errstate(divide="ignore", invalid="ignore"):
        det = num / np.conj(den)
    det = det / np.where(np.abs(det) > 0, np.abs(det), 1)
    e = np.zeros((r + 1,) + e_known.shape[1:], dtype=complex)
    e[: min(m, r) + 1] = e_known[: r + 1]
    for j in range(m + 1, r + 1):
        e[j] = det * np.conj(e[r - j])
    return e


def eigenvalues_from_elementary(e):
    """Roots of T^r - e_1 T^(r-1) + e_2 T^(r-2) - ... for each trailing index."""
    r = e.shape[0] - 1
    flat = e.reshape(r + 1, -1)
    count = flat.shape[1]
    if r == 0:
        return np.zeros((count, 0), dtype=complex)
    comp = np.zeros((count, r, r), dtype=complex)
    # companion matrix of the monic polynomial with coefficients a_j = (-1)^j e_j
    for j in range(1, r + 1):
        comp[:, 0, j - 1] = -((-1) ** j) * flat[j]
    if r > 1:
        comp[:, np.arange(1, r), np.arange(r - 1)] = 1
    good = np.all(np.isfinite(comp.reshape(count, -1)), axis=1)
    eig = np.full((count, r), np.nan, dtype=complex)
    if good.any():
        eig[good] = np.linalg.eigvals(comp[good])
    return eig


@dataclass
class FrobeniusClass:
    """A rank-r class: det(1 - T Theta) = sum_j coeffs[j] T^j."""

    r: int
    coeffs: np.ndarray
    eigenvalues: np.ndarray
    unimodularity_residual: float
    newton_residual: float
    char: tuple = ()
    tolerance: float = 1e-3

    @property
    def ramified_suspect(self):
        return not (self.unimodularity_residual <= self.tolerance
                    and self.newton_residual <= self.tolerance)

    @property
    def trace(self):
        return -self.coeffs[1] if self.r else 0j

    @property
    def det(self):
        return complex(np.prod(self.eigenvalues)) if self.r else 1 + 0j

    @property
    def angles(self):
        return np.angle(self.eigenvalues) / (2 * np.pi)

    def reconstructed_coeffs(self):
        poly = np.array([1 + 0j])
        for lam in self.eigenvalues:
            poly = np.convolve(poly, np.array([1, -lam]))
        return poly

    def as_record(self):
        return {
            "char": [int(c) for c in self.char],
            "r": self.r,
            "coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs],
            "eigen_angles": [float(a) for a in sorted(self.angles)],
            "unimodularity_residual": float(self.unimodularity_residual),
            "newton_residual": float(self.newton_residual),
            "ramified_suspect": bool(self.ramified_suspect),
        }


@dataclass
class ClassFamily:
    """Frobenius classes for every character of G(k), stored as arrays with
    the characters flattened in lexicographic order."""

    r: int
    shape: tuple
    elementary: np.ndarray            # (r+1, N)
    eigenvalues: np.ndarray           # (N, r)
    unimodularity: np.ndarray         # (N,)
    newton: np.ndarray                # (N,)
    power_sums: np.ndarray            # (depth+1, N)
    tolerance: float = 1e-3
    completion: str = "newton"

    @property
    def count(self):
        return self.eigenvalues.shape[0]

    @property
    def flagged(self):
        ok = (self.unimodularity <= self.tolerance) & (self.newton <= self.tolerance)
        return ~ok

    def predicted_power(self, m):
        """Tr(Theta^m) from the reconstructed eigenvalues."""
        return np.sum(self.eigenvalues**m, axis=1)

    def traces(self):
        return self.elementary[1] if self.r else np.zeros(self.count, dtype=complex)

    def dets(self):
        return np.prod(self.eigenvalues, axis=1)

    def char(self, idx):
        return tuple(int(i) for i in np.unravel_index(idx, self.shape))

    def get(self, idx):
        coeffs = np.array([(-1) ** j * self.elementary[j, idx] for j in range(self.r + 1)])
        return FrobeniusClass(self.r, coeffs, self.eigenvalues[idx], float(self.unimodularity[idx]),
                              float(self.newton[idx]), self.char(idx), self.tolerance)

    def __iter__(self):
        return (self.get(i) for i in range(self.count))


def classes_from_power_sums(ps, r, tolerance=1e-3, completion="auto"):
    """Reconstruct classes from power sums ``ps`` (rows 1..depth).

    ``completion`` is "newton" (needs depth >= r), "unitary" (uses the
    functional equation of a unitary class, needs depth >= ceil(r/2)), or
    "auto" (newton when possible).
    """
    ps = np.asarray(ps, dtype=complex)
    shape = ps.shape[1:]
    depth = ps.shape[0] - 1
    flat = ps.reshape(depth + 1, -1)
    if completion == "auto":
        completion = "newton" if depth >= r else "unitary"
    if completion == "newton":
        if depth < r:
            raise TowerUnavailable(f"depth {depth} < rank {r}")
        e = elementary_from_power(flat, r)
        first_check = r + 1
    else:
        m = (r + 1) // 2
        if depth < m:
            raise TowerUnavailable(f"need at least {m} power sums for rank {r}")
        e = unitary_completion(elementary_from_power(flat, m), r)
        first_check = m + 1
    eig = eigenvalues_from_elementary(e)
    with np.errstate(invalid="ignore", over="ignore"):
        unimod = np.max(np.abs(np.abs(eig) - 1), axis=1) if r else np.zeros(flat.shape[1])
        newton = np.zeros(flat.shape[1])
        for m in range(first_check, depth + 1):
            pred = np.sum(eig**m, axis=1)
            newton = np.maximum(newton, np.abs(pred - flat[m]))
    unimod = np.where(np.isfinite(unimod), unimod, np.inf)
    newton = np.where(np.isfinite(newton), newton, np.inf)
    return ClassFamily(r, tuple(shape), e, eig, unimod, newton, flat, tolerance, completion)


def frobenius_classes(M, r=None, depth=None, tolerance=1e-3, completion="auto", route="points"):
    """Classes Theta_M(chi) for all characters chi of G(k).

    ``route`` selects how power sums are obtained: "points" sums over
    G(k_n), "polynomials" goes through the L-function coefficients.
    """
    if r is None:
        from .tracefn import tannakian_dim
        r = tannakian_dim(M)
    if depth is None:
        depth = r + 2
    ps = power_sums_from_polynomials(M, depth) if route == "polynomials" else power_sums(M, depth)
    return classes_from_power_sums(ps, r, tolerance, completion)


def frobenius_class(M, chi, r=None, depth=None, tolerance=1e-3):
    """The class of a single character (given by its exponent tuple)."""
    family = frobenius_classes(M, r, depth, tolerance)
    chi = tuple(getattr(chi, "exponents", chi))
    return family.get(int(np.ravel_multi_index(chi, family.shape)))


def estimate_rank(ps, max_rank, tolerance=1e-3):
    """Smallest trial rank whose Newton extension matches the measured power
    sums (diagnostic mode)."""
    ps = np.asarray(ps, dtype=complex)
    depth = ps.shape[0] - 1
    for r in range(1, min(max_rank, depth - 1) + 1):
        fam = classes_from_power_sums(ps.reshape(depth + 1, -1), r, tolerance, "newton")
        if np.all(fam.newton <= tolerance):
            return r
    return None


# ---------------------------------------------------------------------------
# L-hat series

def exp_series(b, N):
    """Coefficients a_0..a_N of exp(sum_n b_n T^n / n); b[0] is ignored."""
    a = [1] + [0] * N
    exact = all(isinstance(x, (int, Fraction)) for x in b[1:N + 1])
    for k in range(1, N + 1):
        acc = sum(b[n] * a[k - n] for n in range(1, k + 1))
        a[k] = Fraction(acc, k) if exact else acc / k
    return a


def log_series(a, N):
    """b_1..b_N with exp(sum b_n T^n / n) = sum a_k T^k (a_0 = 1)."""
    b = [0] * (N + 1)
    for n in range(1, N + 1):
        b[n] = n * a[n] - sum(b[k] * a[n - k] for k in range(1, n))
    return b


def series_mul(a, b, N):
    return [sum(a[i] * b[k - i] for i in range(k + 1)) for k in range(N + 1)]


def berlekamp_massey(seq, tol=None):
    """Shortest connection polynomial C (C[0] = 1) with
    sum_{i=0}^{L} C[i] s[n-i] = 0 for all n >= L.  Exact over Fractions when
    ``tol`` is None, otherwise with |discrepancy| <= tol treated as zero."""
    zero = (lambda d: d == 0) if tol is None else (lambda d: abs(d) <= tol)
    C, B = [1], [1]
    L, m, bval = 0, 1, 1
    for n, s in enumerate(seq):
        d = s + sum(C[i] * seq[n - i] for i in range(1, L + 1))
        if zero(d):
            m += 1
            continue
        coef = d / bval if tol is not None else Fraction(d) / Fraction(bval)
        T = list(C)
        C = C + [0] * max(0, len(B) + m - len(C))
        for i, bi in enumerate(B):
            C[i + m] -= coef * bi
        if 2 * L <= n:
            L, B, bval, m = n + 1 - L, T, d, 1
        else:
            m += 1
    return C[: L + 1], L


@dataclass
class WeilRoot:
    value: complex
    multiplicity: int     # exponent in the denominator; negative means numerator
    weight: int | None
    modulus_error: float


@dataclass
class LhatSeries:
    b: list
    coeffs: list
    numerator: list = field(default_factory=list)
    denominator: list = field(default_factory=list)
    roots: list = field(default_factory=list)
    recurrence_found: bool = False
    q: int = 0

    def all_weil(self, tol=1e-6):
        return all(r.weight is not None and r.modulus_error <= tol for r in self.roots)


def _poly_from_roots(roots):
    poly = np.array([1 + 0j])
    for w in roots:
        poly = np.convolve(poly, np.array([1, -w]))
    return poly


def rationalize(b, q, N, tol=1e-9):
    """Detect L-hat = prod (1 - w T)^(-m_w) from b_1..b_N."""
    seq = list(b[1:N + 1])
    exact = all(isinstance(x, (int, Fraction)) for x in seq)
    if exact:
        C, L = berlekamp_massey([Fraction(x) for x in seq])
        C = [complex(float(c)) for c in C]
    else:
        scale = max(1.0, max(abs(complex(x)) for x in seq))
        C, L = berlekamp_massey([complex(x) for x in seq], tol=tol * scale)
    out = LhatSeries(list(b), exp_series(list(b), N), q=q)
    if 2 * L >= N:
        return out                     # NoRecurrenceWithinTruncation: reported via the flag
    if L == 0:
        out.numerator, out.denominator, out.recurrence_found = [1.0], [1.0], True
        return out
    # C(T) = prod (1 - w_i T): the w_i are the reciprocals of the roots of C
    roots = np.roots(np.array(C[::-1], dtype=complex))
    omegas = 1 / roots
    vander = np.array([[w**n for w in omegas] for n in range(1, N + 1)])
    mult, *_ = np.linalg.lstsq(vander, np.array(seq, dtype=complex), rcond=None)
    mult_int = np.rint(mult.real).astype(int)
    num, den = np.array([1 + 0j]), np.array([1 + 0j])
    for w, m in zip(omegas, mult_int):
        if m == 0:
            continue                   # spurious root of the numerical recurrence
        weight = 2 * math.log(abs(w)) / math.log(q) if abs(w) > 0 else None
        w_int = None if weight is None else int(round(weight))
        err = abs(abs(w) - q ** (w_int / 2)) if w_int is not None else math.inf
        out.roots.append(WeilRoot(complex(w), int(m), w_int, err))
        if m > 0:
            den = np.convolve(den, _poly_from_roots([w] * m))
        elif m < 0:
            num = np.convolve(num, _poly_from_roots([w] * (-m)))
    out.numerator = [complex(c) for c in num]
    out.denominator = [complex(c) for c in den]
    out.recurrence_found = True
    return out


def lhat(M, N=12):
    """b_n = |G(k_n)| t_M(e; k_n) for n = 1..N, the exponential series and
    the detected rational form."""
    b = [0] + [M.group.group_order(n) * M.identity_trace(n) for n in range(1, N + 1)]
    b = [_exactify(x) for x in b]
    return rationalize(b, M.tower.q, N)


def _exactify(x):
    if isinstance(x, complex) and x.imag == 0 and float(x.real).is_integer():
        return int(x.real)
    if isinstance(x, float) and x.is_integer():
        return int(x)
    return x


def rational_series(numerator, denominator, N):
    """Power series coefficients of numerator(T) / denominator(T)."""
    out = []
    num = list(numerator) + [0] * (N + 1)
    for k in range(N + 1):
        acc = num[k] - sum(denominator[i] * out[k - i] for i in range(1, min(k, len(denominator) - 1) + 1))
        out.append(acc / denominator[0])
    return out
