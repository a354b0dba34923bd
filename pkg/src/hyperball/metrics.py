"""Scalar quality indices over 2D projections.

Every kind is oriented so that higher is better (stress is negated) and is
invariant under rigid rotation and uniform scaling of the projected cloud:
stress correlates normalized distance vectors, holes/central-mass whiten the
cloud, the consistency metrics depend only on relative positions, and the
grid-based distribution consistency first canonicalizes the orientation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import MissingLabels
from .projection import TrackballState, project

KINDS = (
    "stress",
    "distance_consistency",
    "distribution_consistency",
    "class_separation",
    "holes",
    "central_mass",
)
CLASS_KINDS = frozenset(
    ("distance_consistency", "distribution_consistency", "class_separation")
)


@dataclass
class QualityMetric:
    """Named quality index plus its sampling/grid parameters."""

    kind: str = "holes"
    grid_size: int = 16
    sample_size: int = 20000
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown metric kind {self.kind!r}")

    @property
    def needs_labels(self):
        return self.kind in CLASS_KINDS


class MetricContext:
    """Reference data for scoring many projections of one fixed point set.

    Precomputes the sampled pair set and high-dimensional pair distances for
    stress, and the class bookkeeping for the consistency metrics, so the
    optimizer pays only the 2D part per candidate view.
    """

    def __init__(self, metric, points=None, labels=None):
        self.metric = metric
        self.kind = metric.kind
        if metric.needs_labels:
            if labels is None:
                raise MissingLabels(f"{metric.kind} requires class labels")
            labels = np.asarray(labels)
            self.classes, self.class_ids = np.unique(labels, return_inverse=True)
            self.n_classes = len(self.classes)
        if self.kind == "stress":
            if points is None:
                raise ValueError("stress requires the original points")
            points = np.asarray(points, dtype=float)
            n = points.shape[0]
            n_pairs = n * (n - 1) // 2
            if n_pairs <= metric.sample_size:
                self.pair_i, self.pair_j = np.triu_indices(n, k=1)
            else:
                rng = np.random.default_rng(metric.seed)
                i = rng.integers(0, n, size=metric.sample_size)
                j = rng.integers(0, n - 1, size=metric.sample_size)
                j = np.where(j >= i, j + 1, j)
                self.pair_i, self.pair_j = i, j
            diff = points[self.pair_i] - points[self.pair_j]
            self.ref_dist = np.linalg.norm(diff, axis=1)
            self.ref_sq = float(self.ref_dist @ self.ref_dist)

    def score_xy(self, xy):
        """Score one 2D cloud; -inf for a fully collapsed projection."""
        xy = np.asarray(xy, dtype=float)
        if xy.shape[0] < 3:
            raise ValueError("need at least 3 projected points")
        spread = xy.max(axis=0) - xy.min(axis=0)
        if float(spread.max(initial=0.0)) < 1e-12:
            return float("-inf")
        if self.kind == "stress":
            return self._stress(xy)
        if self.kind == "distance_consistency":
            return self._distance_consistency(xy)
        if self.kind == "distribution_consistency":
            return self._distribution_consistency(xy)
        if self.kind == "class_separation":
            return self._class_separation(xy)
        holes = self._holes(xy)
        return holes if self.kind == "holes" else 1.0 - holes

    def score_xy_batch(self, xy_batch):
        """Score a stack of 2D clouds (m, n, 2) at once.

        Holes and central-mass run fully vectorized (they are the optimizer's
        hot path); the other kinds fall back to a per-cloud loop.
        """
        xy_batch = np.asarray(xy_batch, dtype=float)
        if self.kind not in ("holes", "central_mass"):
            return np.array([self.score_xy(xy) for xy in xy_batch])
        centered = xy_batch - xy_batch.mean(axis=1, keepdims=True)
        n = xy_batch.shape[1]
        cov = np.einsum("mnc,mnd->mcd", centered, centered) / n
        sxx, syy = cov[:, 0, 0], cov[:, 1, 1]
        sxy = cov[:, 0, 1]
        det = sxx * syy - sxy * sxy
        floor = np.maximum(sxx + syy, 1.0) * 1e-12
        ok = det >= floor * floor
        scores = np.full(xy_batch.shape[0], -np.inf)
        if ok.any():
            c = centered[ok]
            r2 = (
                syy[ok, None] * c[:, :, 0] ** 2
                - 2.0 * sxy[ok, None] * c[:, :, 0] * c[:, :, 1]
                + sxx[ok, None] * c[:, :, 1] ** 2
            ) / det[ok, None]
            kernel = np.exp(-0.5 * r2).mean(axis=1)
            holes = (1.0 - kernel) / (1.0 - np.exp(-1.0))
            scores[ok] = holes if self.kind == "holes" else 1.0 - holes
        # Near-singular clouds go through the scalar path (exact spread check).
        for idx in np.flatnonzero(~ok):
            scores[idx] = self.score_xy(xy_batch[idx])
        return scores

    def _stress(self, xy):
        diff = xy[self.pair_i] - xy[self.pair_j]
        d2 = np.linalg.norm(diff, axis=1)
        d2_sq = float(d2 @ d2)
        if d2_sq <= 0.0:
            return float("-inf")
        if self.ref_sq <= 0.0:
            return 0.0  # coincident source points are preserved by any view
        corr = float(d2 @ self.ref_dist) / np.sqrt(d2_sq * self.ref_sq)
        stress = np.sqrt(max(0.0, 1.0 - corr * corr))
        return -float(stress)

    def _centroids(self, xy):
        sums = np.zeros((self.n_classes, 2))
        np.add.at(sums, self.class_ids, xy)
        counts = np.bincount(self.class_ids, minlength=self.n_classes)
        return sums / counts[:, None]

    def _distance_consistency(self, xy):
        if self.n_classes == 1:
            return 1.0
        centroids = self._centroids(xy)
        d = ((xy[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        return float(np.mean(np.argmin(d, axis=1) == self.class_ids))

    def _distribution_consistency(self, xy):
        if self.n_classes == 1:
            return 1.0
        g = self.metric.grid_size
        coords = _canonical_orientation(xy)
        lo = coords.min(axis=0)
        span = coords.max(axis=0) - lo
        span[span <= 0.0] = 1.0
        cells = np.minimum((g * (coords - lo) / span).astype(int), g - 1)
        flat = cells[:, 0] * g + cells[:, 1]
        counts = np.zeros((g * g, self.n_classes))
        np.add.at(counts, (flat, self.class_ids), 1.0)
        totals = counts.sum(axis=1)
        occupied = totals > 0
        p = counts[occupied] / totals[occupied, None]
        with np.errstate(divide="ignore", invalid="ignore"):
            ent = -np.where(p > 0.0, p * np.log(p), 0.0).sum(axis=1)
        weights = totals[occupied] / xy.shape[0]
        return 1.0 - float(weights @ ent) / np.log(self.n_classes)

    def _class_separation(self, xy):
        if self.n_classes == 1:
            return 1.0
        centroids = self._centroids(xy)
        counts = np.bincount(self.class_ids, minlength=self.n_classes)
        overall = xy.mean(axis=0)
        between = float(counts @ ((centroids - overall) ** 2).sum(axis=1))
        within = float(((xy - centroids[self.class_ids]) ** 2).sum())
        total = between + within
        if total <= 0.0:
            return float("-inf")
        return between / total

    def _holes(self, xy):
        # Mahalanobis form of the whitened radius; the 2x2 inverse is closed
        # form, which keeps the optimizer's per-candidate cost low.
        centered = xy - xy.mean(axis=0)
        n = xy.shape[0]
        sxx = float(centered[:, 0] @ centered[:, 0]) / n
        syy = float(centered[:, 1] @ centered[:, 1]) / n
        sxy = float(centered[:, 0] @ centered[:, 1]) / n
        det = sxx * syy - sxy * sxy
        floor = max(sxx + syy, 1.0) * 1e-12
        if det < floor * floor:
            z = _whiten(centered)
            r2 = (z * z).sum(axis=1)
        else:
            r2 = (
                syy * centered[:, 0] ** 2
                - 2.0 * sxy * centered[:, 0] * centered[:, 1]
                + sxx * centered[:, 1] ** 2
            ) / det
        mean_kernel = float(np.mean(np.exp(-0.5 * r2)))
        return (1.0 - mean_kernel) / (1.0 - np.exp(-1.0))


def _canonical_orientation(xy):
    """Rotate the cloud into its principal 2D axes with a fixed sign rule."""
    centered = xy - xy.mean(axis=0)
    cov = centered.T @ centered
    _, vecs = np.linalg.eigh(cov)
    axes = vecs[:, ::-1].T  # rows, descending variance
    for i in range(2):
        j = int(np.argmax(np.abs(axes[i])))
        if axes[i, j] < 0:
            axes[i] = -axes[i]
    return centered @ axes.T


def _whiten(xy):
    """Symmetric whitening of the cloud; eigenvalues floored for stability."""
    centered = xy - xy.mean(axis=0)
    cov = centered.T @ centered / xy.shape[0]
    w, v = np.linalg.eigh(cov)
    floor = max(w[-1], 1.0) * 1e-12
    w = np.maximum(w, floor)
    transform = (v * (1.0 / np.sqrt(w))) @ v.T
    return centered @ transform


def score(metric, proj, points=None, labels=None):
    """Score a projected cloud under the chosen metric (higher is better)."""
    ctx = MetricContext(metric, points=points, labels=labels)
    return ctx.score_xy(proj.xy)


def rank_views(metric, candidates, points, labels=None):
    """Indices of (basis, rotation) candidates by descending score, stable."""
    if not candidates:
        raise ValueError("need at least one candidate view")
    ctx = MetricContext(metric, points=np.asarray(points, dtype=float), labels=labels)
    scores = []
    for basis, rotation in candidates:
        state = TrackballState(basis=basis, rotation=np.asarray(rotation, dtype=float))
        scores.append(ctx.score_xy(project(state, points).xy))
    return sorted(range(len(candidates)), key=lambda i: (-scores[i], i))
