"""Randomized property suites behind ``wernerholevo verify``.

Every check draws its own random stream from ``(seed, check name)``, so a
check's outcome does not depend on which other checks run or on how many
worker processes are used.
"""

from __future__ import annotations

import math
import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import channel as ch
from . import entropy as en
from . import schur as sc
from . import spectrum as sp
from .linalg import eig_hermitian, matrix_entropy, scalar_log
from .minimize import vertex_certificate
from .simplex import SimplexSampler, as_schmidt, barycenter, vertices

SUITES = ("channel", "spectrum", "entropy", "schur", "lemma")


@dataclass
class SuiteReport:
    suite: str
    check: str
    cases: int
    failures: int
    max_violation: float
    tolerance: float
    seed: int
    wall_time: float = 0.0
    gating: bool = True
    note: str = ""

    @property
    def passed(self):
        return self.failures == 0

    def to_dict(self, timing=False):
        out = asdict(self)
        if not timing:
            out.pop("wall_time")
        return out


@dataclass(frozen=True)
class Check:
    name: str
    tolerance: float
    fn: object
    gating: bool = True
    note: str = ""

    @property
    def suite(self):
        return self.name.split("/")[0]


def check_rng(seed, name):
    return np.random.default_rng(np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, zlib.crc32(name.encode())]))


def _dirichlet(rng, d, n):
    return SimplexSampler(d, seed=rng).sample_many(n)


def _mixed(rng, d, n, enrichment=0.25):
    return SimplexSampler(d, seed=rng, enrichment=enrichment).sample_many(n)


# -- channel ------------------------------------------------------------------

def _trace_preservation(rng, trials, d_max):
    errs = []
    for d in range(2, d_max + 1):
        for _ in range(trials):
            mu = ch.random_complex_matrix(d, rng)
            errs.append(abs(np.trace(ch.apply_channel(d, mu)) - np.trace(mu)))
    return errs


def _unitality(rng, trials, d_max):
    return [float(np.max(np.abs(ch.apply_channel(d, np.eye(d)) - np.eye(d)))) for d in range(2, d_max + 1)]


def _choi_positivity(rng, trials, d_max):
    return [max(0.0, -float(eig_hermitian(ch.choi_matrix(d))[-1])) for d in range(2, d_max + 1)]


def _choi_pattern(rng, trials, d_max):
    errs = []
    for d in range(2, d_max + 1):
        w = eig_hermitian(ch.choi_matrix(d))
        m = d * (d - 1) // 2
        expected = np.concatenate([np.full(m, 2.0 / (d - 1)), np.zeros(d * d - m)])
        errs.append(float(np.max(np.abs(w - expected))))
    return errs


def _covariance(rng, trials, d_max):
    errs = []
    for d in range(2, d_max + 1):
        for _ in range(trials):
            errs.append(ch.covariance_defect(d, ch.random_unitary(d, rng), ch.random_complex_matrix(d, rng)))
    return errs


def _output_universality(rng, trials, d_max):
    errs = []
    for d in range(2, d_max + 1):
        target = math.log2(d - 1)
        for _ in range(trials):
            out = ch.output_pure(d, ch.random_pure_state(d, rng))
            errs.append(abs(matrix_entropy(out) - target))
    return errs


def _vertex_tensor(rng, trials, d_max):
    errs = []
    for d in range(2, d_max + 1):
        for a, v in enumerate(vertices(d)):
            single = ch.output_pure(d, np.eye(d)[a])
            errs.append(float(np.max(np.abs(ch.product_output_matrix(v) - np.kron(single, single)))))
    return errs


def _schmidt_output(rng, trials, d_max):
    errs = []
    for d in range(2, d_max + 1):
        for lam in _mixed(rng, d, trials):
            psi = ch.schmidt_state(lam)
            direct = ch.apply_product_channel(d, np.outer(psi, psi))
            errs.append(float(np.max(np.abs(direct - ch.product_output_matrix(lam)))))
    return errs


# -- spectrum -----------------------------------------------------------------

def _oracle_equivalence(rng, trials, d_max):
    errs = []
    for d in range(2, d_max + 1):
        for lam in _dirichlet(rng, d, trials):
            dense = eig_hermitian(ch.product_output_matrix(lam))
            errs.append(float(np.max(np.abs(sp.full_spectrum(lam).values - dense))))
    return errs


def _secular_vs_block(rng, trials, d_max):
    errs = []
    for d in range(2, d_max + 1):
        for lam in _mixed(rng, d, trials):
            errs.append(float(np.max(np.abs(sp.secular_roots(lam) - eig_hermitian(sp.root_block_matrix(lam))))))
    return errs


def _cubic_d3(rng, trials, d_max):
    lams = _mixed(rng, 3, trials)
    roots = sp.secular_roots_batch(lams) / 4.0
    errs = [float(np.max(np.abs(sp.cubic_roots_d3(l).gamma - r))) for l, r in zip(lams, roots)]
    errs.append(abs(sp.cubic_roots_d3([1.0, 0.0, 0.0]).theta - math.pi))
    errs.append(abs(sp.cubic_roots_d3(barycenter(3)).theta))
    return errs


def _root_sum(rng, trials, d_max):
    errs = []
    for d in range(2, d_max + 1):
        r = sp.secular_roots_batch(_mixed(rng, d, trials))
        errs.extend(np.abs(r.sum(axis=1) - (d - 1)).tolist())
    return errs


def _interlacing(rng, trials, d_max):
    errs = []
    for d in range(2, d_max + 1):
        lams = _mixed(rng, d, trials)
        g = sp.secular_roots_batch(lams)
        nu = -np.sort(-(1.0 - 2.0 * lams), axis=1)
        upper = np.maximum(nu - g, 0.0).max(axis=1)  # g_(i) >= nu_(i)
        lower = np.maximum(g[:, 1:] - nu[:, :-1], 0.0).max(axis=1) if d > 1 else 0.0  # nu_(i) >= g_(i+1)
        errs.extend(np.maximum(upper, lower).tolist())
    return errs


def _charpoly_d3(rng, trials, d_max):
    errs = []
    for lam in _mixed(rng, 3, trials):
        expected = np.array([1.0, -2.0, 1.0, -4.0 * np.prod(lam)])
        errs.append(float(np.max(np.abs(sp.charpoly_coefficients_d3(lam) - expected))))
    return errs


def _trace_identity(rng, trials, d_max):
    errs = []
    for d in range(2, d_max + 1):
        pairs, roots = sp.spectrum_batch(_mixed(rng, d, trials))
        errs.extend(np.abs(pairs.sum(axis=1) + roots.sum(axis=1) - 1.0).tolist())
        errs.extend(np.abs(pairs.sum(axis=1) - (d - 2) / (d - 1)).tolist())
        errs.extend(np.abs(roots.sum(axis=1) - 1.0 / (d - 1)).tolist())
    return errs


def _secular_residual(rng, trials, d_max):
    errs = []
    for d in range(2, d_max + 1):
        for lam in _mixed(rng, d, trials):
            for g in sp.secular_roots(lam):
                val, scale = sp.root_block_charpoly(lam, g)
                errs.append(abs(val) / max(scale, 1e-300))
    return errs


# -- entropy ------------------------------------------------------------------

def _s1_closed_form(rng, trials, d_max):
    lams = _dirichlet(rng, 3, trials)
    _, s1, _ = en.entropy_batch(lams)
    return np.abs(s1 - np.array([en.s1_closed_form_d3(l) for l in lams])).tolist()


def _reparameterization(rng, trials, d_max):
    errs = []
    for d in range(3, d_max + 1):
        for lam in _dirichlet(rng, d, trials):
            spec = sp.full_spectrum(lam)
            nd = en.normalized_distributions(spec)
            from .linalg import neg_xlogx_sum
            s1 = neg_xlogx_sum(spec.pair_values)
            s2 = neg_xlogx_sum(spec.root_values)
            errs.append(max(abs(en.s1_reparameterized(nd.e_tilde, d) - s1),
                            abs(en.s2_reparameterized(nd.g_tilde, d) - s2)))
    return errs


def _boundary_points_d3(rng, n):
    pts = np.zeros((n, 3))
    zero = rng.integers(0, 3, n)
    a = rng.random(n)
    for r in range(n):
        keep = [i for i in range(3) if i != zero[r]]
        pts[r, keep] = [a[r], 1.0 - a[r]]
    return pts


def _s2_boundary(rng, trials, d_max):
    _, _, s2 = en.entropy_batch(_boundary_points_d3(rng, trials))
    return np.abs(s2 - 1.0).tolist()


def _s2_theta_form(rng, trials, d_max):
    errs = []
    lams = _mixed(rng, 3, trials)
    _, _, s2 = en.entropy_batch(lams)
    for lam, v in zip(lams, s2):
        errs.append(abs(en.s2_theta_form(sp.theta_d3(lam)[1]) - v))
    return errs


def _theta_minimum(rng, trials, d_max):
    grid = np.linspace(0.0, math.pi, 1000)
    vals = np.array([en.s2_theta_form(t) for t in grid])
    err = abs(vals.min() - 1.0)
    if int(np.argmin(vals)) != grid.size - 1 and vals.min() < vals[-1]:
        err = max(err, vals[-1] - vals.min())
    return [err]


def _s2_nonconcavity(rng, trials, d_max):
    lam = np.arange(501) / 1000.0
    _, _, s2 = en.entropy_batch(np.column_stack([lam, lam, 1.0 - 2.0 * lam]))
    second = s2[2:] - 2 * s2[1:-1] + s2[:-2]
    return [max(0.0, -float(second.max()))]


def _vertex_minimum(rng, trials, d_max):
    errs = []
    for d in range(3, d_max + 1):
        errs.extend(vertex_certificate(d, trials=trials, seed=rng))
    return errs


def _concavity_probe(rng, trials, d_max):
    a = _dirichlet(rng, 3, trials)
    b = _dirichlet(rng, 3, trials)
    s_a = en.entropy_batch(a)[0]
    s_b = en.entropy_batch(b)[0]
    s_m = en.entropy_batch(0.5 * (a + b))[0]
    return np.maximum(0.5 * (s_a + s_b) - s_m, 0.0).tolist()


# -- schur --------------------------------------------------------------------

def _theorem(rng, trials, d_max):
    errs = []
    for d in range(3, d_max + 1):
        lam, lp = sc.random_majorization_pairs(d, trials, rng)
        errs.extend(np.maximum(sc.s2_schur_defects_batch(lam, lp), 0.0).tolist())
    return errs


def _phi_bridge(rng, trials, d_max):
    errs = []
    for d in range(3, d_max + 1):
        lams = _mixed(rng, d, trials)
        s_gamma = sc.esp_batch(sp.secular_roots_batch(lams))
        phi = sc.phi_batch(sc.nu_from_lambda(lams))
        errs.extend(np.abs(phi - s_gamma[:, ::-1]).max(axis=1).tolist())
    return errs


def _esp_derivative(rng, trials, d_max):
    errs = []
    for _ in range(trials):
        n = int(rng.integers(1, 11))
        x = rng.uniform(-1.5, 1.5, n)
        j = int(rng.integers(n))
        k = int(rng.integers(0, n + 1))
        errs.append(sc.esp_derivative_identity_defect(x, j, k))
    return errs


def _esp_difference(rng, trials, d_max):
    errs = []
    for _ in range(trials):
        n = int(rng.integers(2, 11))
        x = rng.uniform(-1.5, 1.5, n)
        i, j = rng.choice(n, 2, replace=False)
        k = int(rng.integers(0, n))
        errs.append(sc.esp_difference_identity_defect(x, int(i), int(j), k))
    return errs


def _criterion_matrix(nu, grad):
    """(nu_i - nu_j)(dPhi_k/dnu_i - dPhi_k/dnu_j); shapes (N, d) and (N, d+1, d) -> (N, d+1, d, d)."""
    dn = nu[:, None, :, None] - nu[:, None, None, :]
    return dn * (grad[:, :, :, None] - grad[:, :, None, :])


def _criterion_phi_k(rng, trials, d_max):
    errs = []
    for d in range(3, d_max + 1):
        nu = sc.nu_from_lambda(_mixed(rng, d, trials))
        crit = _criterion_matrix(nu, sc.phi_gradient_batch(nu))
        errs.extend(np.maximum(crit.max(axis=(2, 3)), 0.0).ravel().tolist())
    return errs


def _criterion_fd(rng, trials, d_max):
    errs = []
    h = 1e-6
    for d in range(3, d_max + 1):
        nu = sc.nu_from_lambda(_mixed(rng, d, trials))
        fd = np.stack([(sc.phi_batch(nu + h * e) - sc.phi_batch(nu - h * e)) / (2 * h) for e in np.eye(d)], axis=2)
        errs.extend(np.abs(fd - sc.phi_gradient_batch(nu)).max(axis=2).ravel().tolist())
    return errs


def _criterion_sign(rng, trials, d_max):
    """A small transfer between lam_i and lam_j toward equality must move Phi_k the way the criterion says."""
    errs = []
    for d in range(3, d_max + 1):
        lam = _dirichlet(rng, d, trials)
        pick = sc.random_permutations(trials, d, rng)[:, :2]
        rows = np.arange(trials)
        i, j = pick[:, 0], pick[:, 1]
        nu = sc.nu_from_lambda(lam)
        eps = 1e-4 * np.abs(lam[rows, i] - lam[rows, j]) * np.sign(lam[rows, i] - lam[rows, j])
        moved = lam.copy()
        moved[rows, i] -= eps
        moved[rows, j] += eps
        phi0 = sc.phi_batch(nu)
        direct = sc.phi_batch(sc.nu_from_lambda(moved)) - phi0
        crit = _criterion_matrix(nu, sc.phi_gradient_batch(nu))[rows, :, i, j]
        scale = 1e-12 * np.maximum(1.0, np.abs(phi0))
        bad = ((crit < -scale) & (direct < -scale)) | ((crit > scale) & (direct > scale))
        errs.extend(bad.astype(float).ravel().tolist())
    return errs


def _sk_gtilde(rng, trials, d_max):
    errs = []
    for d in range(3, d_max + 1):
        lam, lp = sc.random_majorization_pairs(d, trials, rng)
        g = sp.secular_roots_batch(lam) / (d - 1)
        gp = sp.secular_roots_batch(lp) / (d - 1)
        diff = sc.esp_batch(gp) - sc.esp_batch(g)
        errs.extend(np.maximum(diff.max(axis=1), 0.0).tolist())
    return errs


def _majorization_order(rng, trials, d_max):
    errs = []
    for d in range(2, d_max + 1):
        lam = _mixed(rng, d, trials)
        mid = sc.birkhoff_mix(lam, rng)
        low = sc.birkhoff_mix(mid, rng)
        vert = np.eye(d)[rng.integers(0, d, trials)]
        bary = np.full((trials, d), 1.0 / d)
        ok = (sc.majorizes_batch(lam, lam) & sc.majorizes_batch(bary, lam) & sc.majorizes_batch(lam, vert)
              & sc.majorizes_batch(mid, lam) & sc.majorizes_batch(low, mid) & sc.majorizes_batch(low, lam))
        errs.extend((~ok).astype(float).tolist())
    return errs


def _esp_entropy_monotonicity(rng, trials, d_max):
    """Counterexamples to 'ESP-dominated implies larger entropy' among g_tilde pairs."""
    errs = []
    for d in range(3, d_max + 1):
        lam, lp = sc.random_majorization_pairs(d, trials, rng)
        g1 = sp.secular_roots_batch(lp) / (d - 1)
        g2 = sp.secular_roots_batch(lam) / (d - 1)
        g1 /= g1.sum(axis=1, keepdims=True)
        g2 /= g2.sum(axis=1, keepdims=True)
        g1, g2 = np.clip(g1, 0.0, None), np.clip(g2, 0.0, None)
        dominated = np.all(sc.esp_batch(g1)[:, 2:] <= sc.esp_batch(g2)[:, 2:] + 1e-12, axis=1)
        h1 = en._neg_xlogx_rows(g1, 2)
        h2 = en._neg_xlogx_rows(g2, 2)
        errs.extend((dominated & (h1 > h2 + 1e-9)).astype(float).tolist())
    return errs


# -- lemma --------------------------------------------------------------------

def _lemma_inequality(rng, trials, d_max):
    errs = []
    for n in range(3, max(d_max, 3) + 1):
        lam = sc.sample_subsimplex(n, trials, rng, targeted=0.6)
        vals = sc.lemma_values_batch(1.0 - 2.0 * lam)
        errs.extend(np.maximum(-vals.min(axis=1), 0.0).tolist())
    return errs


def _aux_sum_samples(rng, trials, d_max):
    out = []
    for n in range(2, max(d_max, 3) + 1):
        lam = sc.sample_subsimplex(n, trials, rng, targeted=1.0)
        keep = (np.count_nonzero(lam > 0.5, axis=1) == 1) & np.all(np.abs(1 - 2 * lam) >= sc.POLE_GUARD, axis=1)
        out.append(sc.auxiliary_sum_batch(lam[keep]))
    return np.concatenate(out)


def _aux_sum_nonpositive(rng, trials, d_max):
    return np.maximum(_aux_sum_samples(rng, trials, d_max), 0.0).tolist()


def _aux_sum_extremal(rng, trials, d_max):
    top = float(_aux_sum_samples(rng, trials, d_max).max())
    if top > -1.0 + 1e-9:
        return [top + 1.0]
    return [max(0.0, -1.0 - top - 1e-3)]


CHECKS = [
    Check("channel/trace_preservation", 1e-12, _trace_preservation),
    Check("channel/unitality", 1e-15, _unitality),
    Check("channel/choi_positivity", 1e-10, _choi_positivity),
    Check("channel/choi_pattern", 1e-10, _choi_pattern),
    Check("channel/covariance", 1e-10, _covariance),
    Check("channel/output_universality", 1e-9, _output_universality),
    Check("channel/vertex_tensor", 1e-12, _vertex_tensor),
    Check("channel/schmidt_output", 1e-12, _schmidt_output),
    Check("spectrum/oracle_equivalence", 1e-9, _oracle_equivalence),
    Check("spectrum/secular_vs_block", 1e-10, _secular_vs_block),
    Check("spectrum/cubic_d3", 1e-10, _cubic_d3),
    Check("spectrum/root_sum", 1e-10, _root_sum),
    Check("spectrum/interlacing", 1e-12, _interlacing),
    Check("spectrum/charpoly_d3", 1e-12, _charpoly_d3),
    Check("spectrum/trace_identity", 1e-10, _trace_identity),
    Check("spectrum/secular_residual", 1e-8, _secular_residual),
    Check("entropy/s1_closed_form_d3", 1e-10, _s1_closed_form),
    Check("entropy/reparameterization", 1e-9, _reparameterization),
    Check("entropy/s2_boundary_d3", 1e-9, _s2_boundary),
    Check("entropy/s2_theta_form", 1e-9, _s2_theta_form),
    Check("entropy/theta_minimum", 1e-9, _theta_minimum),
    Check("entropy/s2_nonconcavity", 0.0, _s2_nonconcavity,
          note="violation is minus the largest second difference of S2 along l1 = l2"),
    Check("entropy/vertex_minimum", 1e-9, _vertex_minimum),
    Check("entropy/concavity_conjecture", 1e-9, _concavity_probe, gating=False,
          note="midpoint concavity of S on random segments; conjecture support only"),
    Check("schur/theorem", 1e-9, _theorem),
    Check("schur/phi_bridge", 1e-9, _phi_bridge),
    Check("schur/esp_derivative_identity", 1e-6, _esp_derivative),
    Check("schur/esp_difference_identity", 1e-9, _esp_difference),
    Check("schur/criterion_phi_k", 1e-9, _criterion_phi_k),
    Check("schur/criterion_gradient_fd", 1e-6, _criterion_fd),
    Check("schur/criterion_sign_consistency", 0.5, _criterion_sign),
    Check("schur/sk_gtilde", 1e-9, _sk_gtilde),
    Check("schur/majorization_order", 0.5, _majorization_order),
    Check("schur/esp_entropy_monotonicity", 0.5, _esp_entropy_monotonicity),
    Check("lemma/inequality", 1e-9, _lemma_inequality),
    Check("lemma/aux_sum_nonpositive", 1e-9, _aux_sum_nonpositive),
    Check("lemma/aux_sum_extremal", 0.0, _aux_sum_extremal,
          note="largest sample must lie in [-1 - 1e-9, -1 + 1e-3]"),
]
CHECKS_BY_NAME = {c.name: c for c in CHECKS}


def select_checks(suite):
    if suite == "all":
        return list(CHECKS)
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    return [c for c in CHECKS if c.suite == suite]


def run_check(name, trials, d_max, seed, tolerance=None):
    check = CHECKS_BY_NAME[name]
    tol = check.tolerance if tolerance is None else tolerance
    rng = check_rng(seed, name)
    t0 = time.perf_counter()
    errs = np.asarray(check.fn(rng, trials, d_max), dtype=float)
    wall = time.perf_counter() - t0
    failures = int(np.count_nonzero(~(errs <= tol)))
    return SuiteReport(
        suite=check.suite,
        check=name,
        cases=int(errs.size),
        failures=failures,
        max_violation=float(errs.max()) if errs.size else 0.0,
        tolerance=tol,
        seed=int(seed),
        wall_time=wall,
        gating=check.gating,
        note=check.note,
    )


def _run_args(args):
    return run_check(*args)


def run_suite(suite="all", trials=100, d_max=4, seed=0, parallel=1, tolerances=None):
    """Run the checks of ``suite``; returns SuiteReports in registry order."""
    tolerances = tolerances or {}
    jobs = [(c.name, trials, d_max, seed, tolerances.get(c.name)) for c in select_checks(suite)]
    if parallel <= 1:
        return [run_check(*j) for j in jobs]
    with ProcessPoolExecutor(max_workers=parallel) as pool:
        return list(pool.map(_run_args, jobs))
