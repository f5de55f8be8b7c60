import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wernerholevo.channel import product_output_matrix
from wernerholevo.entropy import (
    entropy_batch,
    entropy_decomposition,
    normalized_distributions,
    s1_closed_form_d3,
    s1_reparameterized,
    s2_reparameterized,
    s2_theta_form,
)
from wernerholevo.errors import DegenerateDimension, DomainError
from wernerholevo.linalg import matrix_entropy
from wernerholevo.simplex import SimplexSampler
from wernerholevo.spectrum import full_spectrum, theta_d3

# (lambda, S, S1, S2); S frozen against a dense eigensolve of M(lambda)
FROZEN = [
    ((0.5, 0.3, 0.2), 2.8515161345548723, 1.7427376486136672, 1.108778485941205),
    ((0.7, 0.2, 0.1), 2.6415401182419345, 1.5783898247235202, 1.0631502935184147),
    ((0.4, 0.3, 0.2, 0.1), 3.8653349182919525, 2.747114777336066, 1.1182201409558858),
    ((0.2,) * 5, 4.595461844238323, 3.5527241956246556, 1.0427376486136672),
]


def test_vertex_d3():
    e = entropy_decomposition([1, 0, 0])
    assert (e.S, e.S1, e.S2) == (2.0, 1.0, 1.0)


def test_edge_midpoint_d3():
    e = entropy_decomposition([0.5, 0.5, 0])
    assert math.isclose(e.S, 2.5, abs_tol=1e-12)
    assert math.isclose(e.S1, 1.5, abs_tol=1e-12)
    assert math.isclose(e.S2, 1.0, abs_tol=1e-12)


def test_barycenter_d3_analytic():
    # spectrum {1/3, 1/12 x 8}
    expected = math.log2(3) / 3 + 2 * math.log2(12) / 3
    assert math.isclose(entropy_decomposition([1 / 3] * 3).S, expected, abs_tol=1e-12)


@pytest.mark.parametrize("lam,S,S1,S2", FROZEN)
def test_frozen_values(lam, S, S1, S2):
    e = entropy_decomposition(lam)
    assert abs(e.S - S) < 1e-12 and abs(e.S1 - S1) < 1e-12 and abs(e.S2 - S2) < 1e-12
    assert abs(matrix_entropy(product_output_matrix(lam)) - S) < 1e-11


def test_d2_is_zero():
    for lam in ([1, 0], [0.5, 0.5], [0.3, 0.7]):
        assert abs(entropy_decomposition(lam).S) < 1e-12


def test_nats():
    e2 = entropy_decomposition([0.5, 0.3, 0.2])
    ee = entropy_decomposition([0.5, 0.3, 0.2], base="e")
    assert math.isclose(ee.S, e2.S * math.log(2), rel_tol=1e-13)


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 8), st.integers(0, 2**32 - 1))
def test_reparameterizations(d, seed):
    lam = SimplexSampler(d, seed=seed, enrichment=0.3).sample()
    spec = full_spectrum(lam)
    nd = normalized_distributions(spec)
    assert abs(nd.e_tilde.sum() - 1) < 1e-12 and abs(nd.g_tilde.sum() - 1) < 1e-12
    e = entropy_decomposition(lam)
    assert abs(s1_reparameterized(nd.e_tilde, d) - e.S1) < 1e-9
    assert abs(s2_reparameterized(nd.g_tilde, d) - e.S2) < 1e-9


def test_s1_closed_form():
    for lam in SimplexSampler(3, seed=0, enrichment=0.3).sample_many(100):
        assert abs(s1_closed_form_d3(lam) - entropy_decomposition(lam).S1) < 1e-10


def test_degenerate_dimension():
    with pytest.raises(DegenerateDimension):
        normalized_distributions(full_spectrum([0.5, 0.5]))


def test_batch_matches_single():
    lams = SimplexSampler(4, seed=3, enrichment=0.3).sample_many(30)
    S, S1, S2 = entropy_batch(lams)
    for i, lam in enumerate(lams):
        e = entropy_decomposition(lam)
        assert abs(S[i] - e.S) < 1e-13 and abs(S1[i] - e.S1) < 1e-13 and abs(S2[i] - e.S2) < 1e-13


def test_theta_form():
    assert math.isclose(s2_theta_form(math.pi), 1.0, abs_tol=1e-15)
    assert math.isclose(s2_theta_form(0.0), 1.1258145836939113, abs_tol=1e-13)
    for lam in SimplexSampler(3, seed=5).sample_many(50):
        assert abs(s2_theta_form(theta_d3(lam)[1]) - entropy_decomposition(lam).S2) < 1e-9
    with pytest.raises(DomainError):
        s2_theta_form(4.0)


def test_s2_boundary_and_nonconcavity():
    a = np.random.default_rng(0).random(100)
    pts = np.column_stack([a, 1 - a, np.zeros(100)])
    assert np.abs(entropy_batch(pts)[2] - 1).max() < 1e-9
    lam = np.arange(501) / 1000
    s2 = entropy_batch(np.column_stack([lam, lam, 1 - 2 * lam]))[2]
    second = s2[2:] - 2 * s2[1:-1] + s2[:-2]
    assert second.max() > 0 and second.min() < 0
