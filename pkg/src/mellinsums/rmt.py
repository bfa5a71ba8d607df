"""Compact groups U(r), SU(r), USp(2r), SO(r): trace moments, Haar samples,
and comparison of empirical classes against the reference measures."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import integrate

FAMILIES = ("U", "SU", "USp", "SO")


class UnsupportedMoment(ValueError):
    pass


class EmptySample(ValueError):
    pass


# ---------------------------------------------------------------------------
# exact moments

def _partitions(m, max_len, max_part=None):
    if max_part is None:
        max_part = m
    if m == 0:
        yield ()
        return
    if max_len == 0:
        return
    for first in range(min(m, max_part), 0, -1):
        for rest in _partitions(m - first, max_len - 1, first):
            yield (first,) + rest


def _dim_symmetric_irrep(lam):
    """f^lambda by the hook length formula."""
    m = sum(lam)
    conj = [sum(1 for part in lam if part > j) for j in range(lam[0])] if lam else []
    hooks = 1
    for i, part in enumerate(lam):
        for j in range(part):
            hooks *= (part - j - 1) + (conj[j] - i - 1) + 1
    return math.factorial(m) // hooks


@lru_cache(maxsize=None)
def unitary_abs_moment(r, m):
    """E |Tr g|^(2m) over U(r): sum of (f^lambda)^2 over partitions of m with
    at most r rows (equal to m! when m <= r)."""
    return sum(_dim_symmetric_irrep(lam) ** 2 for lam in _partitions(m, r))


def _double_factorial(k):
    return math.prod(range(k, 0, -2)) if k > 0 else 1


def reference_moment(family, r, kind, order):
    """Exact moment of the trace.

    kind "abs": E |Tr g|^order (order even); kind "power": E |Tr(g^order)|^2.
    ``r`` is the matrix size for U, SU, SO and the rank (matrix size 2r)
    for USp.
    """
    if family not in FAMILIES:
        raise UnsupportedMoment(family)
    if kind == "abs":
        if order % 2:
            raise UnsupportedMoment("odd absolute moments")
        m = order // 2
        if family in ("U", "SU"):
            # |Tr|^(2m) is invariant under the centre, so SU(r) agrees with U(r)
            return unitary_abs_moment(r, m)
        if family == "USp":
            if r == 1:
                return math.comb(2 * m, m) // (m + 1)          # Catalan: SU(2) = USp(2)
            if order <= r + 1:
                return _double_factorial(order - 1)
        if family == "SO" and order <= r // 2:
            return _double_factorial(order - 1)
        raise UnsupportedMoment(f"{family}({r}) |Tr|^{order}")
    if kind == "power":
        if family in ("U", "SU"):
            return min(order, r)
        raise UnsupportedMoment(f"power moments for {family}")
    raise UnsupportedMoment(kind)


# ---------------------------------------------------------------------------
# Haar samples

@dataclass
class EmpiricalSample:
    traces: np.ndarray
    eigenvalues: np.ndarray | None = None
    matrices: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.traces = np.asarray(self.traces, dtype=complex)
        if np.isnan(self.traces).any():
            raise ValueError("sample contains NaN")

    @property
    def size(self):
        return len(self.traces)


def _unitary(rng, r, count):
    z = (rng.standard_normal((count, r, r)) + 1j * rng.standard_normal((count, r, r))) / math.sqrt(2)
    q, rr = np.linalg.qr(z)
    d = np.diagonal(rr, axis1=1, axis2=2)
    return q * (d / np.abs(d))[:, None, :]


def _orthogonal(rng, r, count):
    q, rr = np.linalg.qr(rng.standard_normal((count, r, r)))
    d = np.sign(np.diagonal(rr, axis1=1, axis2=2))
    q = q * d[:, None, :]
    det = np.linalg.det(q)
    q[det < 0, :, 0] *= -1
    return q


def symplectic_form(r):
    return np.block([[np.zeros((r, r)), np.eye(r)], [-np.eye(r), np.zeros((r, r))]])


def _symplectic(rng, r, count):
    """Gram-Schmidt on Gaussian vectors, pairing each column v with J conj(v)."""
    n = 2 * r
    J = symplectic_form(r)
    out = np.zeros((count, n, n), dtype=complex)
    for j in range(r):
        v = (rng.standard_normal((count, n)) + 1j * rng.standard_normal((count, n))) / math.sqrt(2)
        for cols in (out[:, :, :j], out[:, :, r:r + j]):
            coeff = np.einsum("cij,ci->cj", cols.conj(), v)
            v = v - np.einsum("cij,cj->ci", cols, coeff)
        v /= np.linalg.norm(v, axis=1)[:, None]
        out[:, :, j] = v
        out[:, :, r + j] = -(J @ v.conj().T).T
    return out


def haar_matrices(family, r, count, seed=0, chunk=20000):
    ss = np.random.SeedSequence(seed)
    chunks = []
    sizes = [min(chunk, count - i) for i in range(0, count, chunk)]
    for child, size in zip(ss.spawn(len(sizes)), sizes):
        rng = np.random.default_rng(child)
        if family == "U":
            chunks.append(_unitary(rng, r, size))
        elif family == "SU":
            g = _unitary(rng, r, size)
            det = np.linalg.det(g)
            chunks.append(g * (det ** (-1 / r))[:, None, None])
        elif family == "USp":
            chunks.append(_symplectic(rng, r, size))
        elif family == "SO":
            chunks.append(_orthogonal(rng, r, size).astype(complex))
        else:
            raise ValueError(f"unknown family {family!r}")
    return np.concatenate(chunks) if chunks else np.zeros((0, r, r), dtype=complex)


def haar_sample(family, r, count, seed=0, keep_matrices=False):
    if count < 1:
        raise ValueError("count must be >= 1")
    g = haar_matrices(family, r, count, seed)
    eig = np.linalg.eigvals(g)
    return EmpiricalSample(np.trace(g, axis1=1, axis2=2), eig, g if keep_matrices else None,
                           {"source": "haar", "family": family, "r": r, "seed": seed})


def sample_from_classes(eigenvalues, **meta):
    eig = np.asarray(eigenvalues, dtype=complex)
    return EmpiricalSample(eig.sum(axis=1), eig, None, meta)


# ---------------------------------------------------------------------------
# Sato-Tate and KS

def sato_tate_density(t):
    t = np.asarray(t, dtype=float)
    return np.where(np.abs(t) < 2, np.sqrt(np.clip(1 - t**2 / 4, 0, None)) / np.pi, 0.0)


@lru_cache(maxsize=1)
def _sato_tate_grid(points=10**4):
    grid = np.linspace(-2, 2, points)
    cdf = integrate.cumulative_simpson(sato_tate_density(grid), x=grid, initial=0)
    return grid, cdf / cdf[-1]


def sato_tate_cdf(t):
    grid, cdf = _sato_tate_grid()
    return np.interp(t, grid, cdf, left=0.0, right=1.0)


def ks_distance(values, cdf):
    x = np.sort(np.asarray(values, dtype=float))
    n = len(x)
    if n == 0:
        raise EmptySample("no values")
    c = cdf(x)
    upper = np.arange(1, n + 1) / n - c
    lower = c - np.arange(0, n) / n
    return float(max(upper.max(), lower.max()))


def ks_two_sample(a, b):
    a, b = np.sort(np.asarray(a, float)), np.sort(np.asarray(b, float))
    allv = np.concatenate([a, b])
    fa = np.searchsorted(a, allv, side="right") / len(a)
    fb = np.searchsorted(b, allv, side="right") / len(b)
    return float(np.abs(fa - fb).max())


@dataclass
class ReferenceMeasure:
    family: str
    r: int
    samples: int = 20000
    seed: int = 12345

    @property
    def self_dual(self):
        return self.family in ("USp", "SO")

    @property
    def is_sato_tate(self):
        return (self.family, self.r) in (("USp", 1), ("SU", 2))

    def moment(self, kind, order):
        return reference_moment(self.family, self.r, kind, order)

    def moments(self):
        out = {}
        for order in (2, 4, 8):
            try:
                out[f"abs{order}"] = self.moment("abs", order)
            except UnsupportedMoment:
                pass
        for m in range(1, 11):
            try:
                out[f"power{m}"] = self.moment("power", m)
            except UnsupportedMoment:
                pass
        return out

    def scalar(self, traces):
        """The scalar pushforward used for KS: Re Tr for self-dual groups."""
        traces = np.asarray(traces)
        return traces.real if (self.self_dual or self.is_sato_tate) else np.abs(traces)

    def cdf(self):
        if self.is_sato_tate:
            return sato_tate_cdf
        ref = np.sort(self.scalar(haar_sample(self.family, self.r, self.samples, self.seed).traces))
        return lambda t: np.searchsorted(ref, t, side="right") / len(ref)


def empirical_moments(sample: EmpiricalSample, max_power=10):
    if sample.size == 0:
        raise EmptySample("no classes")
    a = np.abs(sample.traces)
    out = {f"abs{o}": float(np.mean(a**o)) for o in (2, 4, 8)}
    if sample.eigenvalues is not None:
        for m in range(1, max_power + 1):
            out[f"power{m}"] = float(np.mean(np.abs(np.sum(sample.eigenvalues**m, axis=1)) ** 2))
    return out


def compare_stats(sample: EmpiricalSample, ref: ReferenceMeasure, ks_threshold=0.1):
    if sample.size == 0:
        raise EmptySample("no classes")
    emp = empirical_moments(sample)
    refm = ref.moments()
    deltas = {k: emp[k] - v for k, v in refm.items() if k in emp}
    ks = ks_distance(ref.scalar(sample.traces), ref.cdf())
    # Monte-Carlo standard errors of the empirical moments
    a = np.abs(sample.traces)
    stderr = {f"abs{o}": float(np.std(a**o) / math.sqrt(sample.size)) for o in (2, 4, 8)}
    return {
        "family": ref.family,
        "r": ref.r,
        "moments": emp,
        "reference": refm,
        "deltas": deltas,
        "stderr": stderr,
        "ks": ks,
        "equidistributed": ks <= ks_threshold,
        "sample_size": sample.size,
        "seed": sample.meta.get("seed"),
    }
