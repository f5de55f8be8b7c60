"""Majorization, elementary symmetric polynomials and the Schur-concavity machinery.

Sign convention: a symmetric differentiable function f is Schur-concave iff
``(x_i - x_j) * (df/dx_i - df/dx_j) <= 0`` for all i, j.

The root-block eigenvalues gamma relate to nu = 1 - 2 lam through

    s_{d-k}(gamma) = Phi_k(nu) = s_{d-k}(nu) + sum_l s_{d-1-k}(nu without nu_l) (1 - nu_l) / 2.
"""

from __future__ import annotations

import numpy as np

from .entropy import entropy_batch, entropy_decomposition
from .errors import (
    ConstraintViolated,
    DegreeOutOfRange,
    LengthMismatch,
    NotComparable,
    PoleProximity,
)
from .linalg import shannon_entropy
from .simplex import as_schmidt

MAJ_PARTIAL_TOL = 1e-12
MAJ_TOTAL_TOL = 1e-10
FD_STEP = 1e-6
POLE_GUARD = 1e-12


# -- elementary symmetric polynomials ---------------------------------------

def esp_batch(x):
    """s_0..s_n of the last axis of ``x``; output has trailing size n + 1.

    Built by multiplying out prod_i (1 + x_i z) one factor at a time.
    """
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    s = np.zeros(x.shape[:-1] + (n + 1,))
    s[..., 0] = 1.0
    for i in range(n):
        xi = x[..., i, None]
        s[..., 1:i + 2] = s[..., 1:i + 2] + xi * s[..., 0:i + 1]
    return s


def elementary_symmetric(x):
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError("expected a 1-D vector")
    return esp_batch(x)


def esp(x, k):
    """s_k(x) with s_k = 0 outside 0 <= k <= len(x)."""
    x = np.asarray(x, dtype=float)
    if k < 0 or k > x.size:
        return 0.0
    return float(elementary_symmetric(x)[k])


def esp_derivative_identity_defect(x, j, k, h=FD_STEP):
    """|d s_k / d x_j - s_{k-1}(x without x_j)|, derivative by central difference."""
    x = np.asarray(x, dtype=float)
    up, dn = x.copy(), x.copy()
    up[j] += h
    dn[j] -= h
    fd = (esp(up, k) - esp(dn, k)) / (2 * h)
    return abs(fd - esp(np.delete(x, j), k - 1))


def esp_difference_identity_defect(x, i, j, k):
    """|s_k(x\\x_i) - s_k(x\\x_j) - (x_j - x_i) s_{k-1}(x\\x_i\\x_j)|."""
    if i == j:
        raise ValueError("indices must differ")
    x = np.asarray(x, dtype=float)
    lhs = esp(np.delete(x, i), k) - esp(np.delete(x, j), k)
    rhs = (x[j] - x[i]) * esp(np.delete(x, [i, j]), k - 1)
    return abs(lhs - rhs)


# -- majorization ------------------------------------------------------------

def majorizes(x, y):
    """True iff x is majorized by y (x < y in the majorization order)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise LengthMismatch(f"lengths differ: {x.shape} vs {y.shape}")
    cx = np.cumsum(np.sort(x)[::-1])
    cy = np.cumsum(np.sort(y)[::-1])
    if abs(cx[-1] - cy[-1]) > MAJ_TOTAL_TOL:
        return False
    return bool(np.all(cx[:-1] <= cy[:-1] + MAJ_PARTIAL_TOL))


def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_majorization_pair(lam_prime, seed=None, n_terms=None):
    """Return lam = sum_k w_k P_k lam' for random permutations and convex weights.

    Any such Birkhoff mixture is majorized by ``lam_prime``.
    """
    lam_prime = as_schmidt(lam_prime)
    rng = _rng(seed)
    d = lam_prime.size
    if n_terms is None:
        n_terms = int(rng.integers(1, d + 2))
    w = rng.dirichlet(np.ones(n_terms))
    lam = np.zeros(d)
    for wk in w:
        lam += wk * lam_prime[rng.permutation(d)]
    return lam


def random_permutations(size, d, rng):
    """``size`` independent uniform permutations of range(d), as index rows."""
    return np.argsort(rng.random((size, d)), axis=1)


def birkhoff_mix(lam_prime, seed=None):
    """Row-wise sum_k w_k P_k lam' with 1..d+1 random permutations and Dirichlet(1) weights."""
    rng = _rng(seed)
    lp = np.asarray(lam_prime, dtype=float)
    size, d = lp.shape
    n_terms = rng.integers(1, d + 2, size)
    w = rng.gamma(1.0, size=(size, d + 1)) * (np.arange(d + 1)[None, :] < n_terms[:, None])
    w /= w.sum(axis=1, keepdims=True)
    perms = np.argsort(rng.random((size, d + 1, d)), axis=2)
    mixed = np.take_along_axis(np.broadcast_to(lp[:, None, :], perms.shape), perms, axis=2)
    lam = (w[:, :, None] * mixed).sum(axis=1)
    return lam / lam.sum(axis=1, keepdims=True)


def majorizes_batch(x, y):
    """Row-wise ``majorizes``."""
    cx = np.cumsum(-np.sort(-np.asarray(x, dtype=float), axis=1), axis=1)
    cy = np.cumsum(-np.sort(-np.asarray(y, dtype=float), axis=1), axis=1)
    total = np.abs(cx[:, -1] - cy[:, -1]) <= MAJ_TOTAL_TOL
    return total & np.all(cx[:, :-1] <= cy[:, :-1] + MAJ_PARTIAL_TOL, axis=1)


def random_majorization_pairs(d, size, seed=None):
    """Batch of (lam, lam_prime) pairs with lam majorized by lam_prime.

    ``lam_prime`` is drawn from Dirichlet(a) with a random concentration
    per row (so that both near-vertex and near-barycenter points occur),
    a quarter of the rows being pushed onto a random face.
    """
    rng = _rng(seed)
    conc = np.exp(rng.uniform(np.log(0.05), np.log(5.0), size))
    lp = rng.gamma(conc[:, None], size=(size, d))
    face = rng.random(size) < 0.25
    n_zero = np.where(face, rng.integers(1, max(d, 2), size), 0)
    rank = np.argsort(random_permutations(size, d, rng), axis=1)
    lp[rank < n_zero[:, None]] = 0.0
    bad = lp.sum(axis=1) <= 0
    lp[bad, 0] = 1.0
    lp /= lp.sum(axis=1, keepdims=True)
    lam = birkhoff_mix(lp, rng)
    return lam, lp


def s2_schur_concavity_defect(lam, lam_prime, base=2):
    """S2(lam') - S2(lam) for lam majorized by lam'; Schur concavity makes it <= 0."""
    lam = as_schmidt(lam)
    lam_prime = as_schmidt(lam_prime)
    if not majorizes(lam, lam_prime):
        raise NotComparable("lam is not majorized by lam_prime")
    return entropy_decomposition(lam_prime, base).S2 - entropy_decomposition(lam, base).S2


def s2_schur_defects_batch(lam, lam_prime, base=2):
    return entropy_batch(lam_prime, base)[2] - entropy_batch(lam, base)[2]


# -- the nu variables and Phi_k ---------------------------------------------

def nu_from_lambda(lam):
    return 1.0 - 2.0 * np.asarray(lam, dtype=float)


def phi_k(nu, k):
    nu = np.asarray(nu, dtype=float)
    d = nu.size
    if not 0 <= k <= d:
        raise DegreeOutOfRange(f"k = {k} outside 0..{d}")
    total = esp(nu, d - k)
    for l in range(d):
        total += esp(np.delete(nu, l), d - 1 - k) * (1.0 - nu[l]) / 2.0
    return total


def phi_k_gradient(nu, k):
    """Analytic partials dPhi_k / dnu_i.

    d/dnu_i of s_{d-1-k}(nu without nu_l), l != i, is s_{d-2-k}(nu without nu_i, nu_l).
    """
    nu = np.asarray(nu, dtype=float)
    d = nu.size
    if not 0 <= k <= d:
        raise DegreeOutOfRange(f"k = {k} outside 0..{d}")
    grad = np.empty(d)
    for i in range(d):
        rest = np.delete(nu, i)
        g = 0.5 * esp(rest, d - 1 - k)
        for l in range(d):
            if l != i:
                g += esp(np.delete(nu, [i, l]), d - 2 - k) * (1.0 - nu[l]) / 2.0
        grad[i] = g
    return grad


def _leave_two_out_index(n):
    idx = np.zeros((n, n, max(n - 2, 0)), dtype=np.intp)
    for i in range(n):
        for l in range(n):
            if i != l:
                idx[i, l] = [j for j in range(n) if j not in (i, l)]
    return idx


def phi_batch(nu):
    """Phi_k for every row of ``nu`` (shape (N, d)) and every k; output (N, d + 1)."""
    nu = np.asarray(nu, dtype=float)
    d = nu.shape[1]
    full = esp_batch(nu)
    loo = esp_batch(_leave_one_out(nu))  # (N, d, d)
    w = (1.0 - nu) / 2.0
    out = np.empty((nu.shape[0], d + 1))
    for k in range(d + 1):
        out[:, k] = full[:, d - k]
        if d - 1 - k >= 0:
            out[:, k] += (loo[:, :, d - 1 - k] * w).sum(axis=1)
    return out


def phi_gradient_batch(nu):
    """Analytic gradients of every Phi_k; output (N, d + 1, d), same formula as ``phi_k_gradient``."""
    nu = np.asarray(nu, dtype=float)
    n_rows, d = nu.shape
    loo = esp_batch(_leave_one_out(nu))  # (N, d, d)
    l2o = esp_batch(nu[:, _leave_two_out_index(d)])  # (N, d, d, d - 1)
    w = (1.0 - nu) / 2.0
    mask = ~np.eye(d, dtype=bool)
    out = np.zeros((n_rows, d + 1, d))
    for k in range(d + 1):
        if d - 1 - k >= 0:
            out[:, k] = 0.5 * loo[:, :, d - 1 - k]
        if d - 2 - k >= 0:
            out[:, k] += (l2o[:, :, :, d - 2 - k] * w[:, None, :] * mask).sum(axis=2)
    return out


def schur_criterion_defect_phi_k(nu, k, i, j):
    """(nu_i - nu_j) (dPhi_k/dnu_i - dPhi_k/dnu_j); Schur concavity requires <= 0."""
    if i == j:
        raise ValueError("indices must differ")
    nu = np.asarray(nu, dtype=float)
    g = phi_k_gradient(nu, k)
    return float((nu[i] - nu[j]) * (g[i] - g[j]))


def schur_criterion_closed_form(nu, k, i, j):
    """-(nu_i - nu_j)^2 / 2 * sum_{l != i, j} (1 - nu_l) s_{d-k-3}(nu without i, j, l)."""
    nu = np.asarray(nu, dtype=float)
    d = nu.size
    acc = 0.0
    for l in range(d):
        if l not in (i, j):
            acc += (1.0 - nu[l]) * esp(np.delete(nu, [i, j, l]), d - k - 3)
    return -0.5 * (nu[i] - nu[j]) ** 2 * acc


# -- the Lemma and its auxiliary inequality --------------------------------

def check_lemma_constraints(nu, tol=1e-12):
    nu = np.asarray(nu, dtype=float)
    n = nu.size
    if np.any(nu > 1 + tol) or np.any(nu < -1 - tol):
        raise ConstraintViolated("entries of nu must lie in [-1, 1]")
    if nu.sum() < n - 2 - tol:
        raise ConstraintViolated(f"sum(nu) = {nu.sum():.12g} < n - 2 = {n - 2}")
    return nu


def lemma_inequality_value(nu, k):
    """sum_l (1 - nu_l) s_{n-k-1}(nu without nu_l); the Lemma asserts >= 0.

    Valid degrees are 0 <= k <= n - 1 (n = d - 2, so k <= d - 3).
    """
    nu = check_lemma_constraints(nu)
    n = nu.size
    if not 0 <= k <= n - 1:
        raise DegreeOutOfRange(f"k = {k} outside 0..{n - 1}")
    return float(sum((1.0 - nu[l]) * esp(np.delete(nu, l), n - k - 1) for l in range(n)))


def _leave_one_out(x):
    n = x.shape[-1]
    idx = np.array([[j for j in range(n) if j != l] for l in range(n)], dtype=np.intp)
    return x[..., idx]  # (..., n, n - 1)


def lemma_values_batch(nu):
    """Lemma sums for each row of ``nu`` (shape (N, n)); output (N, n), column k."""
    nu = np.asarray(nu, dtype=float)
    n = nu.shape[1]
    s = esp_batch(_leave_one_out(nu))  # (N, n, n) : s_0..s_{n-1} for each l
    weights = (1.0 - nu)[:, :, None]
    return np.stack([(weights[:, :, 0] * s[:, :, n - k - 1]).sum(axis=1) for k in range(n)], axis=1)


def main5_inequality_value(lam):
    """sum_l lam_l / (1 - 2 lam_l), for exactly one lam_l > 1/2; asserted <= 0 (max -1)."""
    lam = np.asarray(lam, dtype=float)
    if np.any(np.abs(1.0 - 2.0 * lam) < POLE_GUARD):
        raise PoleProximity("a coefficient lies within 1e-12 of 1/2")
    if np.any(lam < 0) or lam.sum() > 1 + 1e-12:
        raise ConstraintViolated("need lam >= 0 and sum(lam) <= 1")
    if np.count_nonzero(lam > 0.5) != 1:
        raise ConstraintViolated("exactly one coefficient must exceed 1/2")
    return float(np.sum(lam / (1.0 - 2.0 * lam)))


def auxiliary_sum_batch(lam):
    lam = np.asarray(lam, dtype=float)
    return np.sum(lam / (1.0 - 2.0 * lam), axis=1)


def sample_subsimplex(n, size, rng, targeted=0.5):
    """Vectors lam >= 0 of length n with sum(lam) <= 1.

    A fraction ``targeted`` has exactly one entry above 1/2; half of those
    sit near the extremal configuration (lam_1, 1 - lam_1, 0, ..., 0).
    """
    rng = _rng(rng)
    out = rng.dirichlet(np.ones(n + 1), size)[:, :n]
    n_t = int(round(targeted * size))
    if n_t:
        big = rng.uniform(0.5, 1.0, n_t)
        big = np.where(np.abs(1 - 2 * big) < 1e-9, 0.5 + 1e-6, big)
        rest = rng.dirichlet(np.ones(n), n_t)[:, : n - 1] * (1.0 - big)[:, None]
        extremal = rng.random(n_t) < 0.5
        eps = 10.0 ** rng.uniform(-12, -3, n_t)
        shape = np.zeros((n_t, n - 1))
        shape[:, 0] = 1.0 - eps
        if n > 2:
            spread = rng.dirichlet(np.ones(n - 1), n_t)[:, 1:] * eps[:, None]
            shape[:, 1:] = spread
        rest = np.where(extremal[:, None], shape * (1.0 - big)[:, None], rest)
        block = np.column_stack([big, rest])
        out[:n_t] = np.take_along_axis(block, random_permutations(n_t, n, rng), axis=1)
    return out


# -- entropy monotonicity in symmetric polynomials --------------------------

def esp_dominated(g1, g2, tol=1e-12):
    """True iff s_k(g1) <= s_k(g2) + tol for every k >= 2."""
    g1 = np.asarray(g1, dtype=float)
    g2 = np.asarray(g2, dtype=float)
    if g1.shape != g2.shape:
        raise LengthMismatch("distributions have different lengths")
    return bool(np.all(elementary_symmetric(g1)[2:] <= elementary_symmetric(g2)[2:] + tol))


def graeme_monotonicity_check(g1, g2, base=2):
    """False only for a counterexample: g1 is ESP-dominated by g2 yet H(g1) > H(g2).

    Pairs that are not ESP-comparable return True (nothing to refute).
    """
    if not esp_dominated(g1, g2):
        return True
    return shannon_entropy(g1, base) <= shannon_entropy(g2, base) + 1e-9
