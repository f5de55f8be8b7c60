"""Output entropy S = S1 + S2 of the product channel.

S1 collects the pair eigenvalues and S2 the secular-root eigenvalues.
Both are also available through the normalized distributions ``e_tilde``
and ``g_tilde``, which turn them into Shannon entropies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import check_dim
from .errors import DegenerateDimension, DomainError, IdentityViolation
from .linalg import log_fn, neg_xlogx_sum, scalar_log, shannon_entropy
from .simplex import as_schmidt, as_schmidt_batch
from .spectrum import OutputSpectrum, full_spectrum, gamma_from_theta, spectrum_batch

IDENTITY_TOL = 1e-9


@dataclass(frozen=True)
class EntropyDecomposition:
    S: float
    S1: float
    S2: float
    base: object = 2


@dataclass(frozen=True)
class NormalizedDistributions:
    e_tilde: np.ndarray
    g_tilde: np.ndarray


def normalized_distributions(spec: OutputSpectrum) -> NormalizedDistributions:
    d = spec.d
    if d < 3:
        raise DegenerateDimension("e_tilde is undefined for d = 2 (the pair part has zero weight)")
    return NormalizedDistributions(
        e_tilde=spec.pair_values * (d - 1) / (d - 2),
        g_tilde=spec.root_values * (d - 1),
    )


def s1_reparameterized(e_tilde, d, base=2):
    w = (d - 2) / (d - 1)
    return w * shannon_entropy(e_tilde, base) - w * scalar_log(w, base)


def s2_reparameterized(g_tilde, d, base=2):
    return shannon_entropy(g_tilde, base) / (d - 1) + scalar_log(d - 1, base) / (d - 1)


def s1_closed_form_d3(lam, base=2):
    """S1 for d = 3: half the Shannon entropy of lam plus log 2."""
    lam = as_schmidt(lam)
    return 0.5 * shannon_entropy(lam, base) + scalar_log(2, base)


def entropy_decomposition(lam, base=2, check=True) -> EntropyDecomposition:
    """(S, S1, S2) at ``lam``.

    With ``check`` the Shannon-entropy forms of S1 and S2 are recomputed
    and compared with the raw sums; a disagreement beyond 1e-9 raises
    :class:`IdentityViolation`.
    """
    lam = as_schmidt(lam)
    d = check_dim(lam.size)
    spec = full_spectrum(lam)
    s1 = neg_xlogx_sum(spec.pair_values, base)
    s2 = neg_xlogx_sum(spec.root_values, base)
    if check:
        g_tilde = spec.root_values * (d - 1)
        alt2 = s2_reparameterized(g_tilde, d, base)
        if abs(alt2 - s2) > IDENTITY_TOL:
            raise IdentityViolation(f"S2 identity off by {abs(alt2 - s2):.3e}")
        if d >= 3:
            e_tilde = normalized_distributions(spec).e_tilde
            alt1 = s1_reparameterized(e_tilde, d, base)
            if abs(alt1 - s1) > IDENTITY_TOL:
                raise IdentityViolation(f"S1 identity off by {abs(alt1 - s1):.3e}")
    return EntropyDecomposition(S=s1 + s2, S1=s1, S2=s2, base=base)


def _neg_xlogx_rows(x, base):
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = x[pos] * log_fn(base)(x[pos])
    return -out.sum(axis=1) + 0.0


def entropy_batch(lams, base=2):
    """Arrays (S, S1, S2) for each row of ``lams``."""
    lams = as_schmidt_batch(lams)
    pairs, roots = spectrum_batch(lams)
    s1 = _neg_xlogx_rows(pairs, base)
    s2 = _neg_xlogx_rows(roots, base)
    return s1 + s2, s1, s2


def s2_theta_form(theta, base=2):
    """S2 for d = 3 written through the angle theta in [0, pi]."""
    if not (-1e-12 <= theta <= math.pi + 1e-12):
        raise DomainError(f"theta = {theta} outside [0, pi]")
    theta = min(max(theta, 0.0), math.pi)
    return neg_xlogx_sum(gamma_from_theta(theta), base)
