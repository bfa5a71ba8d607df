import bisect
import itertools
import math

import numpy as np
import pytest

from mellinsums import rmt


def _longest_increasing(perm):
    tails = []
    for x in perm:
        i = bisect.bisect_left(tails, x)
        tails[i:i + 1] = [x]
    return len(tails)


def _lis_count(m, r):
    """Permutations of m letters with no increasing run longer than r; by
    RSK this is E |Tr g|^(2m) over U(r)."""
    return sum(1 for perm in itertools.permutations(range(m)) if _longest_increasing(perm) <= r)


@pytest.mark.parametrize("r", [1, 2, 3, 4, 5])
@pytest.mark.parametrize("m", [1, 2, 3, 4, 5, 6])
def test_unitary_moments_against_permutation_count(r, m):
    assert rmt.unitary_abs_moment(r, m) == _lis_count(m, r)


def test_frozen_reference_moments():
    assert rmt.unitary_abs_moment(4, 2) == 2
    assert rmt.unitary_abs_moment(5, 4) == 24
    assert rmt.unitary_abs_moment(2, 3) == 5
    assert rmt.reference_moment("USp", 1, "abs", 8) == 14
    assert rmt.reference_moment("USp", 4, "abs", 4) == 3
    assert rmt.reference_moment("SO", 8, "abs", 4) == 3
    assert rmt.reference_moment("U", 3, "power", 5) == 3
    for bad in [("GL", 2, "abs", 2), ("U", 2, "abs", 3), ("USp", 2, "abs", 8), ("SO", 3, "power", 2)]:
        with pytest.raises(rmt.UnsupportedMoment):
            rmt.reference_moment(*bad)


@pytest.mark.parametrize("family,r", [("U", 3), ("SU", 3), ("USp", 2), ("SO", 4)])
def test_haar_matrices_lie_in_the_group(family, r):
    g = rmt.haar_matrices(family, r, 200, seed=3)
    n = g.shape[-1]
    eye = np.eye(n)
    assert np.allclose(np.conj(np.swapaxes(g, 1, 2)) @ g, eye, atol=1e-10)
    det = np.linalg.det(g)
    if family in ("SU", "SO", "USp"):
        assert np.allclose(det, 1, atol=1e-9)
    if family == "USp":
        J = rmt.symplectic_form(r)
        assert np.allclose(np.swapaxes(g, 1, 2) @ J @ g, J, atol=1e-10)
    if family == "SO":
        assert np.allclose(g.imag, 0)


def test_haar_samples_are_reproducible_and_chunk_independent():
    a = rmt.haar_matrices("U", 3, 50, seed=9, chunk=50)
    b = rmt.haar_matrices("U", 3, 50, seed=9, chunk=50)
    assert np.array_equal(a, b)
    assert rmt.haar_matrices("U", 3, 50, seed=9, chunk=20).shape == (50, 3, 3)


@pytest.mark.parametrize("family,r", [("U", 3), ("USp", 1), ("USp", 2)])
def test_haar_moments_match_exact_values(family, r):
    sample = rmt.haar_sample(family, r, 40000, seed=1)
    emp = rmt.empirical_moments(sample)
    ref = rmt.ReferenceMeasure(family, r)
    for key, value in ref.moments().items():
        if key in ("abs2", "abs4") or key.startswith("power"):
            assert abs(emp[key] - value) < 0.08 * max(1, value), key


def test_sato_tate_cdf_and_ks():
    assert rmt.sato_tate_cdf(0.0) == pytest.approx(0.5, abs=1e-6)
    assert rmt.sato_tate_cdf(-2.5) == 0 and rmt.sato_tate_cdf(2.0) == pytest.approx(1)
    # density integrates to 1 (trapezoid on a fine grid)
    t = np.linspace(-2, 2, 20001)
    assert np.trapezoid(rmt.sato_tate_density(t), t) == pytest.approx(1, abs=1e-4)
    sample = rmt.haar_sample("SU", 2, 20000, seed=2)
    assert np.allclose(sample.traces.imag, 0, atol=1e-9)
    assert rmt.ks_distance(sample.traces.real, rmt.sato_tate_cdf) < 0.02
    uniform = np.linspace(-2, 2, 2000)
    assert rmt.ks_distance(uniform, rmt.sato_tate_cdf) > 0.05


def test_ks_two_sample_and_compare_stats():
    a = np.arange(100.0)
    assert rmt.ks_two_sample(a, a) == 0
    assert rmt.ks_two_sample(a, a + 1000) == 1
    eig = rmt.haar_sample("U", 2, 5000, seed=77).eigenvalues
    stats = rmt.compare_stats(rmt.sample_from_classes(eig, seed=77), rmt.ReferenceMeasure("U", 2, samples=5000))
    assert stats["equidistributed"] and stats["sample_size"] == 5000
    assert abs(stats["deltas"]["abs2"]) < 4 * stats["stderr"]["abs2"]
    assert stats["reference"]["abs4"] == 2
    with pytest.raises(rmt.EmptySample):
        rmt.ks_distance([], rmt.sato_tate_cdf)
    with pytest.raises(ValueError):
        rmt.sample_from_classes([[np.nan]])
