"""Ant-colony projection pursuit over discretized view weights.

The 2K weights of the view axes (K per axis; K is the data dimension, or 3
when optimizing inside the current subspace) are discretized onto a uniform
level grid over [-1, 1].  Ants pick one level per weight with probability
proportional to pheromone, candidates are normalized and Gram-Schmidt'd into
orthonormal axis pairs, scored by the chosen view metric, and the elite of
each generation reinforces its levels.  Pheromone starts uniform except for
a boost on the levels nearest the incoming view, biasing the search toward
it; a window constraint turns the search into a local refinement.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .core_math import gram_schmidt
from .errors import DegenerateCandidate, DegenerateData
from .metrics import MetricContext
from .projection import ProjectionBasis, TrackballState, _continued_z, bake_rotation

PHEROMONE_FLOOR = 1e-12


@dataclass
class AcoConfig:
    """Colony parameters; the defaults finish a 10-D search in seconds."""

    levels: int = 21
    ants: int = 24
    generations: int = 60
    evaporation: float = 0.1
    init_boost: float = 5.0
    elite: int = 4
    window: int | None = None  # half-width in levels around the initial view
    seed: int = 0

    def __post_init__(self):
        if self.levels < 3:
            raise ValueError("need at least 3 levels per parameter")
        if self.elite > self.ants:
            raise ValueError("elite cannot exceed the number of ants")
        if not 0.0 < self.evaporation < 1.0:
            raise ValueError("evaporation must be in (0, 1)")


@dataclass
class AcoState:
    """Pheromone table over 2K parameters by L levels."""

    pheromone: np.ndarray  # (2K, L), strictly positive
    level_values: np.ndarray  # (L,), strictly increasing over [-1, 1]
    mask: np.ndarray  # (2K, L) bool, sampleable levels
    init_levels: np.ndarray  # (2K,) level index nearest the initial view


@dataclass
class AcoResult:
    ppa_x: np.ndarray
    ppa_y: np.ndarray
    score: float
    trace: np.ndarray  # best-so-far score per generation


def init_pheromone(initial_view, cfg):
    """Uniform pheromone with a boost on the initial view's nearest levels."""
    x0, y0 = initial_view
    weights = np.concatenate([np.asarray(x0, dtype=float), np.asarray(y0, dtype=float)])
    n_params = weights.shape[0]
    values = np.linspace(-1.0, 1.0, cfg.levels)
    init_levels = np.abs(weights[:, None] - values[None, :]).argmin(axis=1)
    pheromone = np.ones((n_params, cfg.levels))
    pheromone[np.arange(n_params), init_levels] *= 1.0 + cfg.init_boost
    if cfg.window is None:
        mask = np.ones((n_params, cfg.levels), dtype=bool)
    else:
        offsets = np.abs(np.arange(cfg.levels)[None, :] - init_levels[:, None])
        mask = offsets <= cfg.window
    return AcoState(
        pheromone=pheromone, level_values=values, mask=mask, init_levels=init_levels
    )


def _build_candidate(weights, k):
    """Normalize the first K weights, Gram-Schmidt the rest; None if degenerate."""
    x_raw = weights[:k]
    norm = np.linalg.norm(x_raw)
    if norm < 1e-9:
        return None
    x = x_raw / norm
    y = weights[k:].astype(float, copy=True)
    for _ in range(2):
        y = y - (y @ x) * x
    norm = np.linalg.norm(y)
    if norm < 1e-8:
        return None
    return x, y / norm


def _build_candidates_batch(weights, k):
    """Vectorized _build_candidate over rows of a (m, 2K) weight matrix.

    Returns (x, y, valid): (m, K) axis arrays and a validity mask; rows of
    invalid candidates are unit placeholders so downstream math stays finite.
    """
    m = weights.shape[0]
    x = weights[:, :k].astype(float, copy=True)
    xn = np.linalg.norm(x, axis=1)
    valid = xn >= 1e-9
    x[~valid] = 0.0
    x[~valid, 0] = 1.0
    x /= np.where(valid, xn, 1.0)[:, None]
    y = weights[:, k:].astype(float, copy=True)
    for _ in range(2):
        y -= (np.einsum("mk,mk->m", y, x))[:, None] * x
    yn = np.linalg.norm(y, axis=1)
    valid &= yn >= 1e-8
    y[yn < 1e-8] = 0.0
    if k > 1:
        y[yn < 1e-8, 1] = 1.0
    yn = np.linalg.norm(y, axis=1)
    y /= yn[:, None]
    return x, y, valid


def _sample_levels(pheromone, mask, rng, ants):
    """One level index per parameter per ant, proportional to pheromone."""
    n_levels = pheromone.shape[1]
    weights = np.where(mask, pheromone, 0.0)
    cum = np.cumsum(weights, axis=1)  # (2K, L)
    # draws in (0, total]: a zero draw could land on a masked zero-weight level
    draws = (1.0 - rng.random((ants, pheromone.shape[0]))) * cum[:, -1]
    # inverse CDF for all (ant, parameter) pairs in one comparison
    idx = (draws[:, :, None] > cum[None, :, :]).sum(axis=2)
    return idx.clip(max=n_levels - 1)


def run(data, labels, metric, initial_view, cfg, ref_points=None, on_generation=None):
    """Optimize an axis pair for `metric` over `data`, starting at `initial_view`.

    Returns the better of the final per-parameter argmax-pheromone solution
    and the best candidate ever scored; the trace holds the best-so-far score
    after each generation.  `ref_points` supplies the distances stress
    compares against when `data` lives in a transformed space.
    `on_generation(index, best_score)` may return False to cancel between
    generations.

    Raises DegenerateData when no candidate ever spans a 2D view.
    """
    data = np.asarray(data, dtype=float)
    k = data.shape[1]
    ctx = MetricContext(
        metric, points=data if ref_points is None else ref_points, labels=labels
    )
    centered = data - data.mean(axis=0)
    rng = np.random.default_rng(cfg.seed)
    state = init_pheromone(initial_view, cfg)

    def evaluate(params):
        cand = _build_candidate(state.level_values[params], k)
        if cand is None:
            return None, float("-inf")
        xy = centered @ np.column_stack(cand)
        return cand, ctx.score_xy(xy)

    best_params = state.init_levels.copy()
    best_cand, best_score = evaluate(best_params)

    trace = np.empty(cfg.generations)
    generations_run = 0
    param_index = np.arange(2 * k)
    for gen in range(cfg.generations):
        sampled = _sample_levels(state.pheromone, state.mask, rng, cfg.ants)
        xs, ys, valid = _build_candidates_batch(state.level_values[sampled], k)
        # (ants, n, 2) in one multiply, then one batched metric call.
        planes = np.stack([xs, ys], axis=2)  # (ants, K, 2)
        xy_all = np.einsum("nk,akc->anc", centered, planes)
        scores = ctx.score_xy_batch(xy_all)
        scores[~valid] = -np.inf

        gen_best = int(np.argmax(scores))
        if scores[gen_best] > best_score:
            best_score = float(scores[gen_best])
            best_cand = (xs[gen_best].copy(), ys[gen_best].copy())
            best_params = sampled[gen_best].copy()

        state.pheromone *= 1.0 - cfg.evaporation
        np.maximum(state.pheromone, PHEROMONE_FLOOR, out=state.pheromone)
        order = np.argsort(-scores, kind="stable")
        for rank in range(min(cfg.elite, cfg.ants)):
            a = order[rank]
            if not np.isfinite(scores[a]):
                continue
            deposit = (cfg.elite - rank) / cfg.elite
            state.pheromone[param_index, sampled[a]] += deposit

        trace[gen] = best_score
        generations_run = gen + 1
        if on_generation is not None and on_generation(gen, best_score) is False:
            break

    # Prefer the pheromone-argmax solution when it outscores the best-ever.
    marginal = np.where(state.mask, state.pheromone, -1.0)
    argmax_params = marginal.argmax(axis=1)
    argmax_cand, argmax_score = evaluate(argmax_params)
    if argmax_score > best_score:
        best_cand, best_score = argmax_cand, argmax_score

    if best_cand is None:
        raise DegenerateData("every candidate view collapsed; data rank < 2")
    return AcoResult(
        ppa_x=best_cand[0],
        ppa_y=best_cand[1],
        score=float(best_score),
        trace=trace[:generations_run],
    )


SCOPE_WINDOWS = {"narrow": 2, "expanded": 6, "global": None}


def optimize_state(state, points, labels, metric, cfg, scope="global", on_generation=None):
    """Run ACO from the current view and return (new_state, result).

    Scopes: "narrow" and "expanded" constrain each weight to a window of 2 or
    6 levels around the current view; "global" searches the whole grid;
    "within_view" searches rotations inside the current 3D subspace only (the
    six weights of an axis pair over the subspace's own basis).  The returned
    view never scores below the incoming one.
    """
    baked = bake_rotation(state)
    points = np.asarray(points, dtype=float)
    centered_full = points - points.mean(axis=0)

    if scope == "within_view":
        run_cfg = replace(cfg, window=None)
        sub = centered_full @ baked.basis.axes.T
        initial = (np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0]))
        result = run(sub, labels, metric, initial, run_cfg, ref_points=points,
                     on_generation=on_generation)
        x = result.ppa_x @ baked.basis.axes
        y = result.ppa_y @ baked.basis.axes
    elif scope in SCOPE_WINDOWS:
        run_cfg = replace(cfg, window=SCOPE_WINDOWS[scope])
        initial = (baked.basis.ppa_x, baked.basis.ppa_y)
        result = run(points, labels, metric, initial, run_cfg,
                     on_generation=on_generation)
        x, y = result.ppa_x, result.ppa_y
    else:
        raise ValueError(f"unknown scope {scope!r}")

    # Keep the incoming view when the grid search cannot beat it.
    ctx = MetricContext(metric, points=points, labels=labels)
    incoming = ctx.score_xy(centered_full @ baked.basis.axes[:2].T)
    if incoming >= result.score:
        x, y = baked.basis.ppa_x.copy(), baked.basis.ppa_y.copy()
        result = replace(result, ppa_x=x, ppa_y=y, score=float(incoming))
    else:
        y = gram_schmidt(x[None, :], y)  # tighten orthogonality to working precision

    z = _continued_z(np.vstack([x, y]), baked.basis.ppa_z)
    new_basis = ProjectionBasis(np.vstack([x, y, z]), baked.basis.origin.copy())
    new_state = TrackballState(basis=new_basis, rotation=np.eye(3), zoom=state.zoom)
    return new_state, result


def export_trace(trace, path):
    """Two-column text file: generation index and best score."""
    with open(path, "w") as fh:
        for gen, value in enumerate(trace):
            fh.write(f"{gen} {float(value)!r}\n")
