"""Closed-form spectrum of the product-channel output M(lam).

M(lam) splits into d(d-1) "pair" eigenvalues ``(1 - l_a - l_b) / (d-1)^2``
(a != b) and d "root" eigenvalues, which are the eigenvalues of the
diagonal-plus-rank-one block ``diag(1 - 2 lam) + sqrt(lam) sqrt(lam)^T``
scaled by ``1 / (d-1)^2``. The root block is solved through its secular
equation ``1 + sum_a l_a / (nu_a - g) = 0`` with ``nu = 1 - 2 lam``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import check_dim
from .errors import DimensionMismatch, NoBracket, NoConvergence, PoleHit
from .simplex import as_schmidt, as_schmidt_batch

ZERO_WEIGHT = 1e-32
COINCIDENT_POLES = 1e-12
ROOT_TOL = 1e-13
MAX_ITER = 200
CLAMP_TOL = 1e-10


@dataclass(frozen=True)
class OutputSpectrum:
    d: int
    pair_values: np.ndarray
    root_values: np.ndarray

    @property
    def values(self):
        """All d^2 eigenvalues, sorted descending."""
        return np.sort(np.concatenate([self.pair_values, self.root_values]))[::-1]

    @property
    def total(self):
        return float(self.pair_values.sum() + self.root_values.sum())


@dataclass(frozen=True)
class CubicRootsD3:
    theta: float
    t: float
    gamma: np.ndarray


def pair_eigenvalues(lam):
    """e_ab = (1 - l_a - l_b) / (d-1)^2 over ordered pairs a != b (row-major)."""
    lam = as_schmidt(lam)
    d = check_dim(lam.size)
    e = 1.0 - lam[:, None] - lam[None, :]
    off = ~np.eye(d, dtype=bool)
    return e[off] / (d - 1) ** 2


def root_block_matrix(lam):
    lam = as_schmidt(lam)
    root = np.sqrt(lam)
    return np.diag(1.0 - 2.0 * lam) + np.outer(root, root)


def _safeguarded_newton(D, z, hi):
    """Solve 1 + sum_k z_k / (D_k - x) = 0 for x in (0, hi), elementwise.

    ``D`` has shape (m, d) (pole offsets relative to the bracket's lower
    pole, which sits at offset 0), ``z`` the matching weights, ``hi`` the
    bracket width. The function is increasing on the bracket, running from
    -inf at 0 to +inf (or >= 0) at ``hi``.
    """
    lo = np.zeros_like(hi)
    hi = hi.copy()
    x = 0.5 * hi
    done = np.zeros(hi.shape, dtype=bool)
    for _ in range(MAX_ITER):
        diff = D - x[:, None]
        with np.errstate(divide="ignore", invalid="ignore"):
            r = z / diff
            f = 1.0 + r.sum(axis=1)
            fp = (r / diff).sum(axis=1)
        neg = f < 0
        lo = np.where(neg & ~done, x, lo)
        hi = np.where(~neg & ~done, x, hi)
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = x - f / fp
        mid = 0.5 * (lo + hi)
        ok = np.isfinite(newton) & (newton > lo) & (newton < hi)
        x_new = np.where(ok, newton, mid)
        exact = f == 0
        x_new = np.where(exact, x, x_new)
        step = np.abs(x_new - x)
        converged = exact | (hi - lo <= ROOT_TOL) | (step <= 1e-17 + 4e-16 * np.abs(x_new))
        x = np.where(done, x, x_new)
        done |= converged
        if done.all():
            return x
    raise NoConvergence("secular root iteration did not converge")


def secular_roots_batch(lams):
    """Root-block eigenvalues for each row of ``lams``; shape (N, d), rows descending."""
    lams = as_schmidt_batch(lams)
    n_rows, d = lams.shape
    order = np.argsort(lams, axis=1, kind="stable")
    lam_s = np.take_along_axis(lams, order, axis=1)  # ascending lam = descending pole
    nu_s = 1.0 - 2.0 * lam_s
    z = lam_s.copy()
    active = z >= ZERO_WEIGHT
    z[~active] = 0.0
    # merge runs of coincident poles into the last member of the run
    for i in range(1, d):
        close = active[:, i - 1] & active[:, i] & (2.0 * (lam_s[:, i] - lam_s[:, i - 1]) < COINCIDENT_POLES)
        z[close, i] += z[close, i - 1]
        z[close, i - 1] = 0.0
        active[close, i - 1] = False

    roots = nu_s.copy()  # deflated poles are eigenvalues themselves
    rows, cols = np.nonzero(active)
    if rows.size == 0:
        return -np.sort(-roots, axis=1)

    # nearest active pole above each active pole (smaller lam index)
    upper = np.full((n_rows, d), -1)
    last = np.full(n_rows, -1)
    for i in range(d):
        upper[:, i] = last
        last = np.where(active[:, i], i, last)
    up = upper[rows, cols]
    total_weight = z.sum(axis=1)

    # offsets nu_k - nu_i = 2 (lam_i - lam_k)
    D = 2.0 * (lam_s[rows, cols][:, None] - lam_s[rows])
    W = z[rows]
    top = up < 0
    width = np.where(top, 0.0, 2.0 * (lam_s[rows, cols] - lam_s[rows, np.maximum(up, 0)]))
    width = np.where(top, total_weight[rows] * (1.0 + 1e-12) + 1e-300, width)

    if np.any(top):
        xt = width[top]
        with np.errstate(divide="ignore", invalid="ignore"):
            ft = 1.0 + (W[top] / (D[top] - xt[:, None])).sum(axis=1)
        if np.any(~(ft >= 0)):
            raise NoBracket("top secular root not bracketed within the rank-one norm")

    x = _safeguarded_newton(D, W, width)
    roots[rows, cols] = nu_s[rows, cols] + x
    return -np.sort(-roots, axis=1)


def secular_roots(lam):
    """The d eigenvalues of the root block, sorted descending."""
    lam = as_schmidt(lam)
    return secular_roots_batch(lam[None, :])[0]


def _clamp(values):
    return np.where((values < 0) & (values >= -CLAMP_TOL), 0.0, values)


def pair_values_batch(lams):
    lams = as_schmidt_batch(lams)
    d = lams.shape[1]
    e = 1.0 - lams[:, :, None] - lams[:, None, :]
    off = ~np.eye(d, dtype=bool)
    return _clamp(e[:, off] / (d - 1) ** 2)


def spectrum_batch(lams):
    """(pair_values, root_values) arrays of shapes (N, d(d-1)) and (N, d)."""
    lams = as_schmidt_batch(lams)
    d = check_dim(lams.shape[1])
    return pair_values_batch(lams), _clamp(secular_roots_batch(lams) / (d - 1) ** 2)


def full_spectrum(lam):
    lam = as_schmidt(lam)
    d = check_dim(lam.size)
    pairs, roots = spectrum_batch(lam[None, :])
    return OutputSpectrum(d=d, pair_values=pairs[0], root_values=roots[0])


def theta_d3(lam):
    """(t, theta) with t = l1 l2 l3 and theta = atan2(sqrt(t (1/27 - t)), t - 1/54)."""
    lam = as_schmidt(lam)
    if lam.size != 3:
        raise DimensionMismatch("the trigonometric form exists only for d = 3")
    t = float(np.prod(lam))
    theta = math.atan2(math.sqrt(max(t * (1.0 / 27.0 - t), 0.0)), t - 1.0 / 54.0)
    return t, theta


def gamma_from_theta(theta):
    k = np.arange(3)
    return np.cos(theta / 6.0 - 2.0 * np.pi * k / 6.0) ** 2 / 3.0


def cubic_roots_d3(lam):
    """Trigonometric solution of the d = 3 root block (eigenvalues of M itself)."""
    t, theta = theta_d3(lam)
    return CubicRootsD3(theta=theta, t=t, gamma=gamma_from_theta(theta))


def _poles(lam):
    return 1.0 - 2.0 * lam


def secular_function(lam, gamma):
    """F(g) = prod_{a!=b}(1 - l_a - l_b - g) * prod_a(nu_a - g) * [1 + sum_a l_a / (nu_a - g)]."""
    lam = as_schmidt(lam)
    nu = _poles(lam)
    if np.any(np.abs(nu - gamma) < 1e-14):
        raise PoleHit(f"gamma = {gamma!r} coincides with a pole")
    d = lam.size
    off = ~np.eye(d, dtype=bool)
    pair = (1.0 - lam[:, None] - lam[None, :] - gamma)[off]
    return float(np.prod(pair) * np.prod(nu - gamma) * (1.0 + np.sum(lam / (nu - gamma))))


def root_block_charpoly(lam, gamma):
    """Pole-free form prod(nu - g) + sum_a l_a prod_{b != a}(nu_b - g) = det(B - g I).

    Returns ``(value, scale)`` where ``scale`` is the sum of absolute terms,
    for relative residual checks.
    """
    lam = as_schmidt(lam)
    diff = _poles(lam) - gamma
    d = lam.size
    terms = [np.prod(diff)]
    for a in range(d):
        terms.append(lam[a] * np.prod(np.delete(diff, a)))
    terms = np.array(terms)
    return float(terms.sum()), float(np.abs(terms).sum())


def charpoly_coefficients_d3(lam):
    """Monic coefficients (1, a2, a1, a0) of det(g I - B) for d = 3, from the matrix."""
    b = root_block_matrix(lam)
    if b.shape != (3, 3):
        raise DimensionMismatch("d must be 3")
    tr = np.trace(b)
    minors = 0.5 * (tr ** 2 - np.trace(b @ b))
    return np.array([1.0, -tr, minors, -np.linalg.det(b)])
