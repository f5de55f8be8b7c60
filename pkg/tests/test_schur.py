import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wernerholevo import schur as sc
from wernerholevo.errors import (
    ConstraintViolated,
    DegreeOutOfRange,
    LengthMismatch,
    NotComparable,
    PoleProximity,
)
from wernerholevo.simplex import SimplexSampler
from wernerholevo.spectrum import secular_roots


def test_esp_small():
    assert sc.elementary_symmetric([1, 2, 3]).tolist() == [1, 6, 11, 6]
    assert sc.esp([1, 2, 3], 4) == 0.0 and sc.esp([1, 2, 3], -1) == 0.0
    assert sc.esp([], 0) == 1.0


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-2, 2), min_size=1, max_size=8))
def test_esp_matches_polynomial(x):
    # prod (z + x_i) = sum_k s_k z^(n-k)
    coeffs = np.poly(-np.asarray(x))
    assert np.allclose(sc.elementary_symmetric(x), coeffs, atol=1e-10)


def test_identities():
    rng = np.random.default_rng(0)
    for _ in range(200):
        n = int(rng.integers(2, 11))
        x = rng.uniform(-1.5, 1.5, n)
        i, j = rng.choice(n, 2, replace=False)
        k = int(rng.integers(0, n + 1))
        assert sc.esp_derivative_identity_defect(x, int(j), k) < 1e-6
        assert sc.esp_difference_identity_defect(x, int(i), int(j), k) < 1e-9
    with pytest.raises(ValueError):
        sc.esp_difference_identity_defect([1.0, 2.0], 0, 0, 1)


def test_majorization():
    assert sc.majorizes([1 / 3] * 3, [1, 0, 0])
    assert sc.majorizes([0.4, 0.3, 0.3], [0.5, 0.3, 0.2])
    assert not sc.majorizes([0.5, 0.3, 0.2], [0.4, 0.3, 0.3])
    assert not sc.majorizes([0.5, 0.5], [0.6, 0.6])
    with pytest.raises(LengthMismatch):
        sc.majorizes([1.0], [0.5, 0.5])


def test_random_pairs_are_ordered():
    lam, lp = sc.random_majorization_pairs(5, 2000, 1)
    assert sc.majorizes_batch(lam, lp).all()
    single = sc.random_majorization_pair([0.6, 0.3, 0.1], 0)
    assert sc.majorizes(single, [0.6, 0.3, 0.1])


def test_theorem_defects():
    for d in range(3, 7):
        lam, lp = sc.random_majorization_pairs(d, 1000, d)
        assert sc.s2_schur_defects_batch(lam, lp).max() <= 1e-9
    assert sc.s2_schur_concavity_defect([1 / 3] * 3, [1, 0, 0]) < 0
    with pytest.raises(NotComparable):
        sc.s2_schur_concavity_defect([0.6, 0.4, 0.0], [0.5, 0.3, 0.2])


def test_phi_bridge():
    for d in range(3, 7):
        for lam in SimplexSampler(d, seed=d, enrichment=0.3).sample_many(30):
            nu = sc.nu_from_lambda(lam)
            s_gamma = sc.elementary_symmetric(secular_roots(lam))
            for k in range(d + 1):
                assert abs(sc.phi_k(nu, k) - s_gamma[d - k]) < 1e-9
    with pytest.raises(DegreeOutOfRange):
        sc.phi_k(np.zeros(3), 4)


def test_phi_batches_match_scalar():
    nu = np.random.default_rng(2).uniform(-1, 1, (10, 5))
    p, g = sc.phi_batch(nu), sc.phi_gradient_batch(nu)
    for r in range(10):
        for k in range(6):
            assert abs(p[r, k] - sc.phi_k(nu[r], k)) < 1e-14
            assert np.abs(g[r, k] - sc.phi_k_gradient(nu[r], k)).max() < 1e-14


def test_gradient_matches_finite_difference():
    rng = np.random.default_rng(3)
    h = 1e-6
    for d in (3, 4, 6):
        nu = sc.nu_from_lambda(SimplexSampler(d, seed=rng).sample())
        for k in range(d + 1):
            fd = [(sc.phi_k(nu + h * e, k) - sc.phi_k(nu - h * e, k)) / (2 * h) for e in np.eye(d)]
            assert np.abs(np.array(fd) - sc.phi_k_gradient(nu, k)).max() < 1e-6


def test_criterion_nonpositive_and_closed_form():
    for d in (3, 4, 5, 7):
        for lam in SimplexSampler(d, seed=d).sample_many(20):
            nu = sc.nu_from_lambda(lam)
            for k in range(d + 1):
                for i in range(d):
                    for j in range(i + 1, d):
                        c = sc.schur_criterion_defect_phi_k(nu, k, i, j)
                        assert c <= 1e-12
                        assert abs(c - sc.schur_criterion_closed_form(nu, k, i, j)) < 1e-12


def test_lemma():
    rng = np.random.default_rng(4)
    for n in range(3, 9):
        lam = sc.sample_subsimplex(n, 5000, rng, targeted=0.6)
        vals = sc.lemma_values_batch(1 - 2 * lam)
        assert vals.min() >= -1e-9
        for row in range(3):
            nu = 1 - 2 * lam[row]
            for k in range(n):
                assert abs(sc.lemma_inequality_value(nu, k) - vals[row, k]) < 1e-12
    with pytest.raises(ConstraintViolated):
        sc.lemma_inequality_value([-1.0, -1.0, 1.0], 0)
    with pytest.raises(DegreeOutOfRange):
        sc.lemma_inequality_value([1.0, 1.0, 1.0], 3)


def test_subsimplex_sampler():
    lam = sc.sample_subsimplex(5, 4000, np.random.default_rng(0), targeted=0.5)
    assert lam.min() >= 0 and lam.sum(axis=1).max() <= 1 + 1e-12
    one_big = np.count_nonzero(lam > 0.5, axis=1) == 1
    assert 0.45 < one_big.mean() < 0.65


def test_auxiliary_sum():
    assert sc.main5_inequality_value([0.7, 0.3, 0.0]) == pytest.approx(-1.0, abs=1e-14)
    assert sc.main5_inequality_value([0.7, 0.1, 0.1]) < -1.0
    with pytest.raises(PoleProximity):
        sc.main5_inequality_value([0.5, 0.5, 0.0])
    with pytest.raises(ConstraintViolated):
        sc.main5_inequality_value([0.3, 0.3, 0.3])
    lam = sc.sample_subsimplex(6, 20000, np.random.default_rng(1), targeted=1.0)
    vals = sc.auxiliary_sum_batch(lam)
    assert vals.max() <= -1.0 + 1e-9 and vals.max() > -1.0 - 1e-3


def test_esp_entropy_monotonicity():
    assert sc.esp_dominated([0.5, 0.5, 0.0], [1 / 3] * 3)
    assert sc.graeme_monotonicity_check([0.5, 0.5, 0.0], [1 / 3] * 3)
    # not comparable: vacuous
    assert sc.graeme_monotonicity_check([1 / 3] * 3, [0.5, 0.5, 0.0])
