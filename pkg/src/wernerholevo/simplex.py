"""Geometry of the probability simplex of Schmidt coefficients."""

from __future__ import annotations

import numpy as np

from .errors import InvalidSchmidt

NEG_TOL = 1e-12
SUM_TOL = 1e-10


def as_schmidt(lam, neg_tol=NEG_TOL, sum_tol=SUM_TOL):
    """Validate a Schmidt vector and return it as a clamped float array.

    Entries in ``[-neg_tol, 0)`` are clamped to zero; the vector is not
    renormalized.
    """
    x = np.array(lam, dtype=float)
    if x.ndim != 1 or x.size < 1:
        raise InvalidSchmidt(f"Schmidt vector must be 1-D and non-empty, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise InvalidSchmidt("Schmidt vector has non-finite entries")
    if np.any(x < -neg_tol):
        raise InvalidSchmidt(f"negative Schmidt coefficient {x.min():.3e}")
    if abs(x.sum() - 1.0) > sum_tol:
        raise InvalidSchmidt(f"Schmidt coefficients sum to {x.sum():.15g}, not 1")
    return np.clip(x, 0.0, None)


def as_schmidt_batch(lams, neg_tol=NEG_TOL, sum_tol=SUM_TOL):
    x = np.array(lams, dtype=float)
    if x.ndim != 2 or x.shape[1] < 1:
        raise InvalidSchmidt(f"expected an (N, d) array, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise InvalidSchmidt("Schmidt vectors have non-finite entries")
    if np.any(x < -neg_tol):
        raise InvalidSchmidt(f"negative Schmidt coefficient {x.min():.3e}")
    if np.any(np.abs(x.sum(axis=1) - 1.0) > sum_tol):
        raise InvalidSchmidt("some Schmidt vectors do not sum to 1")
    return np.clip(x, 0.0, None)


def vertices(d):
    """The d product-state vertices (1, 0, ..., 0) and its permutations."""
    return [row for row in np.eye(d)]


def barycenter(d):
    return np.full(d, 1.0 / d)


def vertex_distance(lam):
    """l-infinity distance from ``lam`` to the nearest vertex."""
    lam = np.asarray(lam, dtype=float)
    return float(np.min(np.max(np.abs(np.eye(lam.size) - lam), axis=1)))


def project_to_simplex(x):
    """Euclidean projection onto the simplex (sort-and-threshold)."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        return project_rows(x[None, :])[0]
    return project_rows(x)


def project_rows(x):
    x = np.asarray(x, dtype=float)
    n = x.shape[1]
    u = -np.sort(-x, axis=1)
    css = np.cumsum(u, axis=1) - 1.0
    k = np.arange(1, n + 1)
    cond = u - css / k > 0
    rho = n - 1 - np.argmax(cond[:, ::-1], axis=1)
    theta = css[np.arange(x.shape[0]), rho] / (rho + 1)
    return np.maximum(x - theta[:, None], 0.0)


def barycentric_grid_d3(step):
    """Points (l1, l2, 1 - l1 - l2) with l1, l2 on a lattice of the given step.

    ``1 / step`` must be (close to) an integer; there are (N+1)(N+2)/2 points.
    """
    n = int(round(1.0 / step))
    if n < 1 or abs(n * step - 1.0) > 1e-9:
        raise ValueError(f"grid step {step} does not divide 1")
    i, j = np.meshgrid(np.arange(n + 1), np.arange(n + 1), indexing="ij")
    keep = i + j <= n
    l1 = i[keep] / n
    l2 = j[keep] / n
    l3 = (n - i[keep] - j[keep]) / n
    return np.column_stack([l1, l2, l3])


def random_permutation_matrix(d, rng):
    return np.eye(d)[rng.permutation(d)]


class SimplexSampler:
    """Seeded sampler of Schmidt vectors.

    Interior draws are flat Dirichlet(1, ..., 1) obtained by normalizing
    exponential variates; with probability ``enrichment`` a draw instead
    lands uniformly on a random proper face (one or more coordinates zero).
    """

    def __init__(self, d, seed=None, enrichment=0.0):
        if d < 1:
            raise ValueError("d must be positive")
        if not 0.0 <= enrichment <= 1.0:
            raise ValueError("enrichment must lie in [0, 1]")
        if d == 1 and enrichment > 0:
            raise ValueError("a 1-point simplex has no proper faces")
        self.d = d
        self.enrichment = enrichment
        self.rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)

    def _exponentials(self, size, k):
        return -np.log1p(-self.rng.random((size, k)))

    def sample_many(self, size):
        """``size`` draws; exponentials normalized over the kept coordinates give a flat Dirichlet on a face."""
        d = self.d
        e = self._exponentials(size, d)
        if self.enrichment > 0:
            face = self.rng.random(size) < self.enrichment
            n_zero = np.where(face, self.rng.integers(1, max(d, 2), size), 0)
            rank = np.argsort(np.argsort(self.rng.random((size, d)), axis=1), axis=1)
            e[rank < n_zero[:, None]] = 0.0
        return e / e.sum(axis=1, keepdims=True)

    def sample(self):
        return self.sample_many(1)[0]
