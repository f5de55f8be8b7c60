import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wernerholevo.errors import InvalidSchmidt
from wernerholevo.simplex import (
    SimplexSampler,
    as_schmidt,
    barycenter,
    barycentric_grid_d3,
    project_rows,
    project_to_simplex,
    random_permutation_matrix,
    vertex_distance,
    vertices,
)


def test_as_schmidt_validation():
    assert as_schmidt([1, 0, 0]).tolist() == [1.0, 0.0, 0.0]
    assert as_schmidt([1.0, -1e-13]).min() == 0.0
    for bad in ([0.5, 0.6], [1.2, -0.2], [[0.5, 0.5]], [], [np.nan, 1.0]):
        with pytest.raises(InvalidSchmidt):
            as_schmidt(bad)


def test_vertices_and_barycenter():
    v = vertices(3)
    assert len(v) == 3 and all(vertex_distance(x) == 0 for x in v)
    assert np.allclose(barycenter(4), 0.25)
    assert vertex_distance([0.5, 0.5, 0.0]) == 0.5


def test_projection_fixes_simplex_points():
    x = np.array([0.2, 0.3, 0.5])
    assert np.allclose(project_to_simplex(x), x)
    assert np.allclose(project_to_simplex([2.0, 0.0, 0.0]), [1, 0, 0])
    assert np.allclose(project_to_simplex([0.5, 0.5, 0.5]), [1 / 3] * 3)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=1, max_size=9))
def test_projection_properties(x):
    p = project_to_simplex(x)
    assert p.min() >= 0 and abs(p.sum() - 1) < 1e-12
    assert np.allclose(project_to_simplex(p), p, atol=1e-12)
    # optimality: x - p is orthogonal to every simplex direction, up to the support
    rng = np.random.default_rng(0)
    q = project_rows(rng.random((20, len(x))))
    assert np.all((np.asarray(x) - p) @ (q - p).T <= 1e-9)


def test_grid_counts():
    assert barycentric_grid_d3(0.01).shape == (5151, 3)
    g = barycentric_grid_d3(0.5)
    assert g.shape == (6, 3) and np.allclose(g.sum(axis=1), 1)
    with pytest.raises(ValueError):
        barycentric_grid_d3(0.3)


def test_sampler_reproducible_and_valid():
    a = SimplexSampler(5, seed=7, enrichment=0.3).sample_many(1000)
    b = SimplexSampler(5, seed=7, enrichment=0.3).sample_many(1000)
    assert np.array_equal(a, b)
    assert a.min() >= 0 and np.allclose(a.sum(axis=1), 1)
    on_face = (a == 0).any(axis=1).mean()
    assert 0.2 < on_face < 0.4
    assert (a == 0).sum(axis=1).max() <= 4


def test_sampler_flat_dirichlet_moments():
    x = SimplexSampler(3, seed=0).sample_many(200_000)
    # flat Dirichlet on 3 points: mean 1/3, variance 1/18
    assert np.allclose(x.mean(axis=0), 1 / 3, atol=3e-3)
    assert np.allclose(x.var(axis=0), 1 / 18, atol=2e-3)


def test_sampler_argument_checks():
    with pytest.raises(ValueError):
        SimplexSampler(3, enrichment=1.5)
    assert SimplexSampler(3, seed=np.random.default_rng(1)).sample().shape == (3,)


def test_permutation_matrix():
    p = random_permutation_matrix(4, np.random.default_rng(0))
    assert np.array_equal(p @ p.T, np.eye(4))
