import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wernerholevo.channel import product_output_matrix
from wernerholevo.errors import DimensionMismatch, InvalidSchmidt, PoleHit
from wernerholevo.linalg import eig_hermitian
from wernerholevo.simplex import SimplexSampler
from wernerholevo.spectrum import (
    charpoly_coefficients_d3,
    cubic_roots_d3,
    full_spectrum,
    gamma_from_theta,
    pair_eigenvalues,
    root_block_charpoly,
    root_block_matrix,
    secular_function,
    secular_roots,
    secular_roots_batch,
    spectrum_batch,
    theta_d3,
)

# frozen from a 40-digit mpmath eigensolve of the root block
ROOTS_532 = [1.3034226463676789087, 0.5192848758077942677, 0.17729247782452682363]


def test_vertex_spectrum_d3():
    vals = full_spectrum([1, 0, 0]).values
    assert np.allclose(vals[:4], 0.25) and np.allclose(vals[4:], 0.0)


def test_barycenter_spectrum_d3():
    vals = full_spectrum([1 / 3] * 3).values
    assert math.isclose(vals[0], 1 / 3, abs_tol=1e-14)
    assert np.allclose(vals[1:], 1 / 12, atol=1e-14)


def test_barycenter_roots_general_d():
    for d in range(2, 9):
        g = secular_roots(np.full(d, 1.0 / d))
        assert math.isclose(g[0], 2 - 2 / d, abs_tol=1e-13)
        assert np.allclose(g[1:], 1 - 2 / d, atol=1e-13)


def test_frozen_roots():
    assert np.allclose(secular_roots([0.5, 0.3, 0.2]), ROOTS_532, atol=1e-13)


def test_pair_eigenvalues():
    e = pair_eigenvalues([0.5, 0.3, 0.2])
    assert e.size == 6
    assert np.allclose(sorted(e), sorted(np.array([0.2, 0.3, 0.5] * 2) / 4))


def test_d2():
    s = full_spectrum([0.5, 0.5])
    assert s.pair_values.tolist() == [0.0, 0.0]
    assert np.allclose(sorted(s.root_values), [0, 1])


@pytest.mark.parametrize("d", range(2, 9))
def test_matches_dense(d):
    for lam in SimplexSampler(d, seed=d, enrichment=0.3).sample_many(20):
        dense = eig_hermitian(product_output_matrix(lam))
        assert np.abs(full_spectrum(lam).values - dense).max() < 1e-12


def test_degenerate_cases():
    cases = [
        [1, 0, 0, 0],
        [0.5, 0.5, 0, 0],
        [0.25, 0.25, 0.25, 0.25],
        [0.4, 0.4, 0.2, 0.0],
        [0.3, 0.3 + 1e-13, 0.4 - 1e-13],
        [1e-15, 0.5, 0.5 - 1e-15],
        [1 - 3e-16, 1e-16, 1e-16, 1e-16],
    ]
    for lam in cases:
        lam = np.array(lam)
        g = secular_roots(lam)
        ref = np.linalg.eigvalsh(root_block_matrix(lam))[::-1]
        assert np.abs(g - ref).max() < 1e-12, lam


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 10), st.integers(0, 2**32 - 1))
def test_interlacing_and_trace(d, seed):
    lam = SimplexSampler(d, seed=seed, enrichment=0.3).sample()
    g = secular_roots(lam)
    nu = np.sort(1 - 2 * lam)[::-1]
    assert abs(g.sum() - (d - 1)) < 1e-12
    assert np.all(g >= nu - 1e-12)
    assert np.all(g[1:] <= nu[:-1] + 1e-12)
    assert g[0] <= nu[0] + 1.0 + 1e-12


def test_batch_agrees_with_single():
    lams = SimplexSampler(5, seed=1).sample_many(50)
    batch = secular_roots_batch(lams)
    for lam, row in zip(lams, batch):
        assert np.array_equal(row, secular_roots(lam))
    pairs, roots = spectrum_batch(lams)
    assert np.allclose(pairs.sum(axis=1) + roots.sum(axis=1), 1.0, atol=1e-13)


def test_trig_form():
    r = cubic_roots_d3([0.5, 0.3, 0.2])
    assert math.isclose(r.t, 0.03)
    assert np.allclose(r.gamma, np.array(ROOTS_532) / 4, atol=1e-13)
    assert math.isclose(cubic_roots_d3([1, 0, 0]).theta, math.pi)
    assert abs(cubic_roots_d3([1 / 3] * 3).theta) < 1e-7
    assert np.allclose(gamma_from_theta(math.pi), [0.25, 0.25, 0.0], atol=1e-15)
    assert np.allclose(gamma_from_theta(0.0), [1 / 3, 1 / 12, 1 / 12], atol=1e-15)
    with pytest.raises(DimensionMismatch):
        theta_d3([0.5, 0.5])


def test_charpoly_d3():
    lam = np.array([0.5, 0.3, 0.2])
    c = charpoly_coefficients_d3(lam)
    assert np.allclose(c, [1, -2, 1, -4 * 0.03], atol=1e-14)
    assert np.allclose(np.sort(np.roots(c))[::-1], ROOTS_532, atol=1e-12)


def test_secular_function_and_charpoly():
    lam = [0.5, 0.3, 0.2]
    for g in ROOTS_532:
        assert abs(secular_function(lam, g)) < 1e-12
        val, scale = root_block_charpoly(lam, g)
        assert abs(val) < 1e-14 * scale
    assert abs(secular_function(lam, 0.7)) > 1e-5
    with pytest.raises(PoleHit):
        secular_function(lam, 0.0)


def test_invalid_input():
    with pytest.raises(InvalidSchmidt):
        full_spectrum([0.5, 0.6])


def test_tiny_weight_near_coincident_pole():
    # a 1e-15 weight couples to an eigenvalue one 1e-15 away from its pole: no deflation allowed
    lam = np.array([1e-15, 0.5, 0.5 - 1e-15])
    ref = [1.0000000316227761017, 0.99999996837722289832, 1.0e-15]
    assert np.abs(secular_roots(lam) - ref).max() < 1e-13
