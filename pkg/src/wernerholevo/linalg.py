"""Dense Hermitian eigensolver and entropy primitives.

The eigensolver is a cyclic Jacobi method using the round-robin (parallel)
ordering, so that each round applies ``n // 2`` disjoint rotations at once
with vectorized row/column updates. It serves as the brute-force oracle
for every closed-form spectrum in the package.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .errors import (
    DimensionMismatch,
    NegativeEigenvalue,
    NoConvergence,
    NotHermitian,
    NotNormalized,
)

HERMITIAN_TOL = 1e-12
REAL_TOL = 1e-14
MAX_SWEEPS = 100
OFFDIAG_RTOL = 1e-13
CLAMP_TOL = 1e-10


def log_fn(base):
    """Return a vectorized logarithm for ``base`` (2, ``'e'`` or a positive number)."""
    if base == 2 or base == "2":
        return np.log2
    if base in ("e", math.e):
        return np.log
    b = float(base)
    if b <= 0 or b == 1:
        raise ValueError(f"invalid logarithm base {base!r}")
    lb = math.log(b)
    return lambda x: np.log(x) / lb


def scalar_log(x, base=2):
    return float(log_fn(base)(np.float64(x)))


def neg_xlogx_sum(values, base=2):
    """-sum(x log x) with 0 log 0 = 0; no normalization or sign checks."""
    v = np.asarray(values, dtype=float)
    pos = v > 0
    out = np.zeros_like(v)
    out[pos] = v[pos] * log_fn(base)(v[pos])
    return float(-out.sum()) + 0.0


def as_square(m):
    a = np.asarray(m)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DimensionMismatch(f"expected a non-empty square matrix, got shape {a.shape}")
    return a


def is_hermitian(m, tol=HERMITIAN_TOL):
    a = as_square(m)
    return bool(np.max(np.abs(a - a.conj().T)) <= tol)


@lru_cache(maxsize=None)
def _rounds(n):
    """Round-robin schedule of disjoint index pairs covering all pairs once."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for i in range(m // 2):
            p, q = players[i], players[m - 1 - i]
            if p < n and q < n:
                ps.append(min(p, q))
                qs.append(max(p, q))
        rounds.append((np.array(ps, dtype=np.intp), np.array(qs, dtype=np.intp)))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def _offdiag_norm(a):
    off = a.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.linalg.norm(off))


def _rotate(a, v, p, q):
    apq = a[p, q]
    mag = np.abs(apq)
    keep = mag > 0
    if not np.any(keep):
        return
    p, q, apq, mag = p[keep], q[keep], apq[keep], mag[keep]
    app = a[p, p].real
    aqq = a[q, q].real
    phase = np.conj(apq / mag)
    tau = (aqq - app) / (2.0 * mag)
    t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.hypot(1.0, tau))
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    # G = diag(1, phase) @ [[c, s], [-s, c]]
    g00, g01 = c, s
    g10, g11 = -s * phase, c * phase

    cp, cq = a[:, p].copy(), a[:, q].copy()
    a[:, p] = cp * g00 + cq * g10
    a[:, q] = cp * g01 + cq * g11
    rp, rq = a[p, :].copy(), a[q, :].copy()
    a[p, :] = np.conj(g00)[:, None] * rp + np.conj(g10)[:, None] * rq
    a[q, :] = np.conj(g01)[:, None] * rp + np.conj(g11)[:, None] * rq
    a[p, q] = 0.0
    a[q, p] = 0.0

    vp, vq = v[:, p].copy(), v[:, q].copy()
    v[:, p] = vp * g00 + vq * g10
    v[:, q] = vp * g01 + vq * g11


def eig_hermitian(m, vectors=False, max_sweeps=MAX_SWEEPS):
    """Eigenvalues (descending) of a Hermitian matrix by cyclic Jacobi.

    With ``vectors=True`` returns ``(values, V)`` where the columns of ``V``
    are orthonormal eigenvectors, ``m ~= V @ diag(values) @ V.conj().T``.
    Matrices whose imaginary parts are all below 1e-14 are processed in
    real arithmetic.
    """
    a = as_square(m)
    if not is_hermitian(a):
        raise NotHermitian("matrix is not Hermitian within 1e-12")
    if np.iscomplexobj(a) and np.max(np.abs(a.imag), initial=0.0) < REAL_TOL:
        a = a.real
    a = np.array(a, dtype=complex if np.iscomplexobj(a) else float)
    a = 0.5 * (a + a.conj().T)
    n = a.shape[0]
    v = np.eye(n, dtype=a.dtype)

    tol = OFFDIAG_RTOL * float(np.linalg.norm(a))
    sweeps = 0
    while _offdiag_norm(a) > tol:
        if sweeps >= max_sweeps:
            raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")
        for p, q in _rounds(n):
            _rotate(a, v, p, q)
        sweeps += 1

    w = np.diag(a).real.copy()
    order = np.argsort(-w, kind="stable")
    w = w[order]
    if vectors:
        return w, v[:, order]
    return w


def von_neumann_entropy(spec, base=2):
    """Entropy of a density-matrix spectrum, clamping roundoff negatives."""
    p = np.asarray(spec, dtype=float)
    if np.any(p < -CLAMP_TOL):
        raise NegativeEigenvalue(f"eigenvalue {p.min():.3e} below -1e-10")
    if abs(p.sum() - 1.0) > 1e-6:
        raise NotNormalized(f"spectrum sums to {p.sum():.12g}")
    return neg_xlogx_sum(np.clip(p, 0.0, None), base)


def shannon_entropy(p, base=2):
    p = np.asarray(p, dtype=float)
    if np.any(p < -1e-12):
        raise NotNormalized("probability vector has negative entries")
    if abs(p.sum() - 1.0) > 1e-9:
        raise NotNormalized(f"probability vector sums to {p.sum():.12g}")
    return neg_xlogx_sum(np.clip(p, 0.0, None), base)


def matrix_entropy(m, base=2):
    """von Neumann entropy of a density matrix via the Jacobi oracle."""
    return von_neumann_entropy(eig_hermitian(m), base)
