"""Certify that S(M(lam)) is minimized at the vertices of the simplex."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .channel import check_dim
from .entropy import entropy_batch, entropy_decomposition
from .errors import BudgetTooSmall
from .linalg import scalar_log
from .simplex import (
    SimplexSampler,
    as_schmidt,
    barycentric_grid_d3,
    project_rows,
    vertex_distance,
    vertices,
)

ENRICHMENT = 0.25
GRID_STEP_D3 = 0.005
FD_STEP = 1e-6
N_STARTS = 10
MAX_DESCENT_ITERS = 150
CHUNK = 20000
COUNTEREXAMPLE_TOL = 1e-6


@dataclass
class MinimizationReport:
    d: int
    min_value: float
    argmin: list
    vertex_value: float
    samples_evaluated: int
    max_vertex_distance_of_argmin: float
    seed: int
    base: object = 2
    refined: bool = False
    best_non_vertex_value: float | None = None
    max_descent_increase: float = 0.0
    counterexample: list | None = None
    extra: dict = field(default_factory=dict)

    @property
    def gap(self):
        return self.min_value - self.vertex_value

    def to_dict(self):
        return asdict(self)


def evaluate_objective(lam, base=2):
    return entropy_decomposition(lam, base, check=False).S


def evaluate_batch(lams, base=2):
    lams = np.asarray(lams, dtype=float)
    out = np.empty(lams.shape[0])
    for start in range(0, lams.shape[0], CHUNK):
        out[start:start + CHUNK] = entropy_batch(lams[start:start + CHUNK], base)[0]
    return out


def _tangent_gradient(x, f0, base, h=FD_STEP):
    """Central differences of S o proj along e_a - 1/d; the result lies in the tangent plane."""
    d = x.size
    dirs = np.eye(d) - 1.0 / d
    pts = project_rows(np.vstack([x + h * dirs, x - h * dirs]))
    vals = evaluate_batch(pts, base)
    return (vals[:d] - vals[d:]) / (2 * h)


def projected_descent(x0, base=2, max_iter=MAX_DESCENT_ITERS):
    """Projected-gradient descent with step halving; never accepts an uphill step.

    Returns ``(x, f, evaluations, max_increase)``.
    """
    x = as_schmidt(x0)
    f = float(evaluate_batch(x[None, :], base)[0])
    evals = 1
    max_increase = 0.0
    step = 0.1
    for _ in range(max_iter):
        g = _tangent_gradient(x, f, base)
        evals += 2 * x.size
        gnorm = np.linalg.norm(g)
        if not np.isfinite(gnorm) or gnorm == 0:
            break
        moved = False
        while step > 1e-14:
            cand = project_rows((x - step * g / gnorm)[None, :])[0]
            fc = float(evaluate_batch(cand[None, :], base)[0])
            evals += 1
            if fc < f:
                max_increase = max(max_increase, fc - f)
                moved = np.max(np.abs(cand - x)) > 1e-15
                x, f = cand, fc
                step = min(step * 2.0, 1.0)
                break
            step *= 0.5
        if not moved:
            break
    return x, f, evals, max_increase


def minimize_over_simplex(d, budget=10_000, seed=0, refine=True, base=2,
                          enrichment=ENRICHMENT, grid_step=GRID_STEP_D3):
    """Search the simplex for points beating the vertex value 2 log(d - 1).

    Candidates: all vertices, the barycentric grid (d = 3 only), ``budget``
    random points (a fraction ``enrichment`` on random faces) and, with
    ``refine``, projected-gradient descent from the 10 best random points.
    """
    d = check_dim(d)
    if budget < d:
        raise BudgetTooSmall(f"budget {budget} is smaller than the number of vertices {d}")
    vert = np.array(vertices(d))
    vert_vals = evaluate_batch(vert, base)
    vertex_value = float(vert_vals.max())

    cand = [vert]
    vals = [vert_vals]
    if d == 3:
        grid = barycentric_grid_d3(grid_step)
        cand.append(grid)
        vals.append(evaluate_batch(grid, base))
    sampler = SimplexSampler(d, seed=seed, enrichment=enrichment)
    rnd = sampler.sample_many(budget)
    rnd_vals = evaluate_batch(rnd, base)
    cand.append(rnd)
    vals.append(rnd_vals)
    n_eval = sum(v.size for v in vals)

    max_increase = 0.0
    if refine:
        starts = rnd[np.argsort(rnd_vals)[:N_STARTS]]
        ref_pts, ref_vals = [], []
        for x0 in starts:
            x, f, ne, inc = projected_descent(x0, base)
            n_eval += ne
            max_increase = max(max_increase, inc)
            ref_pts.append(x)
            ref_vals.append(f)
        cand.append(np.array(ref_pts))
        vals.append(np.array(ref_vals))

    pts = np.vstack(cand)
    allv = np.concatenate(vals)
    best = int(np.argmin(allv))
    non_vertex = np.array([vertex_distance(p) > 1e-12 for p in pts])
    best_nv = float(allv[non_vertex].min()) if non_vertex.any() else None

    report = MinimizationReport(
        d=d,
        min_value=float(allv[best]),
        argmin=pts[best].tolist(),
        vertex_value=vertex_value,
        samples_evaluated=int(n_eval),
        max_vertex_distance_of_argmin=vertex_distance(pts[best]),
        seed=int(seed) if seed is not None else 0,
        base=base,
        refined=bool(refine),
        best_non_vertex_value=best_nv,
        max_descent_increase=max_increase,
    )
    below = allv < vertex_value - COUNTEREXAMPLE_TOL
    if below.any():
        report.counterexample = pts[int(np.argmin(np.where(below, allv, np.inf)))].tolist()
    report.extra["expected_vertex_value"] = 2 * scalar_log(d - 1, base)
    return report


def vertex_certificate(d, trials=1000, seed=0, base=2):
    """Largest amounts by which random points undercut the vertex values of S1 and S2.

    Returns ``(s1_violation, s2_violation)``; each is ``max(S_vertex - S(lam), 0)``
    over the sample, so both are zero when the vertices minimize each summand.
    """
    d = check_dim(d)
    if d < 3:
        raise ValueError("the vertex certificate needs d >= 3")
    _, s1v, s2v = entropy_batch(np.array(vertices(d)), base)
    sampler = SimplexSampler(d, seed=seed, enrichment=ENRICHMENT)
    lams = np.vstack([sampler.sample_many(trials), np.full((1, d), 1.0 / d)])
    _, s1, s2 = entropy_batch(lams, base)
    return (float(max(np.max(s1v.min() - s1), 0.0)), float(max(np.max(s2v.min() - s2), 0.0)))
