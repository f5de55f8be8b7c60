"""The antisymmetric Werner-Holevo channel and its two-fold product.

``Phi(mu) = (I tr(mu) - mu^T) / (d - 1)`` acts on d x d matrices.
On the d^2-dimensional space of the product channel the composite index
(alpha, beta) maps to ``alpha * d + beta`` (zero-based).
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, NotNormalized, NotUnitary
from .linalg import as_square, scalar_log
from .simplex import as_schmidt

NORM_TOL = 1e-10
UNITARY_TOL = 1e-10


def check_dim(d):
    if int(d) != d or d < 2:
        raise DimensionMismatch(f"channel dimension must be an integer >= 2, got {d}")
    return int(d)


def apply_channel(d, mu):
    d = check_dim(d)
    mu = as_square(mu)
    if mu.shape[0] != d:
        raise DimensionMismatch(f"input is {mu.shape[0]}x{mu.shape[0]}, channel expects {d}x{d}")
    return (np.eye(d) * np.trace(mu) - mu.T) / (d - 1)


def apply_product_channel(d, x):
    """(Phi (x) Phi)(x) for a d^2 x d^2 matrix in the composite basis."""
    d = check_dim(d)
    x = as_square(x)
    if x.shape[0] != d * d:
        raise DimensionMismatch(f"product channel expects a {d * d}x{d * d} matrix")
    t = x.reshape(d, d, d, d)  # t[a, b, a', b'] = <ab| x |a'b'>
    eye = np.eye(d)
    # first factor
    tr1 = np.einsum("cbcy->by", t)
    t = (np.einsum("ax,by->abxy", eye, tr1) - np.transpose(t, (2, 1, 0, 3))) / (d - 1)
    # second factor
    tr2 = np.einsum("acxc->ax", t)
    t = (np.einsum("ax,by->abxy", tr2, eye) - np.transpose(t, (0, 3, 2, 1))) / (d - 1)
    return t.reshape(d * d, d * d)


def _normalized_state(d, psi):
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (d,):
        raise DimensionMismatch(f"state has shape {psi.shape}, expected ({d},)")
    if abs(np.vdot(psi, psi).real - 1.0) > NORM_TOL:
        raise NotNormalized("pure state is not normalized")
    return psi


def output_pure(d, psi):
    """Channel output on |psi><psi|: (I - |conj psi><conj psi|) / (d - 1)."""
    d = check_dim(d)
    psi = _normalized_state(d, psi)
    bar = np.conj(psi)
    return (np.eye(d) - np.outer(bar, bar.conj())) / (d - 1)


def min_output_entropy_single(d, base=2):
    return scalar_log(check_dim(d) - 1, base)


def choi_matrix(d):
    """sum_{a,b} |a><b| (x) Phi(|a><b|), a d^2 x d^2 Hermitian matrix."""
    d = check_dim(d)
    choi = np.zeros((d * d, d * d))
    for a in range(d):
        for b in range(d):
            unit = np.zeros((d, d))
            unit[a, b] = 1.0
            choi += np.kron(unit, apply_channel(d, unit))
    return choi


def is_unitary(u, tol=UNITARY_TOL):
    u = as_square(u)
    return bool(np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0]))) <= tol)


def covariance_defect(d, u, mu):
    """max |Phi(U mu U*) - conj(U) Phi(mu) conj(U)*| entrywise."""
    d = check_dim(d)
    u = as_square(u)
    if u.shape[0] != d:
        raise DimensionMismatch("unitary has the wrong dimension")
    if not is_unitary(u):
        raise NotUnitary("matrix is not unitary within 1e-10")
    lhs = apply_channel(d, u @ mu @ u.conj().T)
    ubar = np.conj(u)
    rhs = ubar @ apply_channel(d, mu) @ ubar.conj().T
    return float(np.max(np.abs(lhs - rhs)))


def random_unitary(d, rng):
    """QR of a complex Gaussian matrix with the phases of R's diagonal removed."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_pure_state(d, rng):
    z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return z / np.linalg.norm(z)


def random_complex_matrix(d, rng):
    return rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))


def schmidt_state(lam):
    """sum_a sqrt(lam_a) |a a> as a vector of length d^2."""
    lam = as_schmidt(lam)
    d = lam.size
    psi = np.zeros(d * d)
    psi[np.arange(d) * (d + 1)] = np.sqrt(lam)
    return psi


def product_output_matrix(lam):
    """M(lam): product-channel output on the canonical Schmidt state.

    Real symmetric d^2 x d^2 matrix
    ``[sum |ab><ab| (1 - l_a - l_b) + sum sqrt(l_a l_b) |aa><bb|] / (d-1)^2``.
    """
    lam = as_schmidt(lam)
    d = check_dim(lam.size)
    diag = (1.0 - lam[:, None] - lam[None, :]).ravel()
    m = np.diag(diag)
    idx = np.arange(d) * (d + 1)
    root = np.sqrt(lam)
    m[np.ix_(idx, idx)] += np.outer(root, root)
    return m / (d - 1) ** 2


def holevo_capacity(d, h, base=2):
    """log d - h for an irreducibly covariant channel on a d-dim input."""
    if h < 0:
        raise ValueError("minimum output entropy cannot be negative")
    if d < 1:
        raise DimensionMismatch("dimension must be positive")
    return scalar_log(d, base) - h
