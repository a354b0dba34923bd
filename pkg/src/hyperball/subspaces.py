"""Candidate 3D subspaces: random orthonormal triples and k-means cluster bases.

Each k-means cluster is treated as a subspace of its own, characterized by
the top three principal components of its members.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core_math import pca, random_orthonormal
from .projection import ProjectionBasis, make_basis


@dataclass
class SubspaceCluster:
    member_ids: np.ndarray
    basis: ProjectionBasis
    centroid: np.ndarray
    color_tag: int


def random_subspace(n_dims, seed, origin=None):
    """Orthonormalized triple of i.i.d. standard-normal N-vectors."""
    if n_dims < 3:
        raise ValueError("need at least 3 dimensions")
    rng = np.random.default_rng(seed)
    axes = random_orthonormal(n_dims, 3, rng)
    if origin is None:
        origin = np.zeros(n_dims)
    return ProjectionBasis(axes, np.asarray(origin, dtype=float))


def _kmeans_pp_init(points, k, rng):
    """k-means++ seeding: spread the initial centroids by squared distance."""
    n = points.shape[0]
    centroids = np.empty((k, points.shape[1]))
    centroids[0] = points[rng.integers(n)]
    closest = ((points - centroids[0]) ** 2).sum(axis=1)
    for i in range(1, k):
        total = closest.sum()
        if total <= 0.0:
            centroids[i] = points[rng.integers(n)]
            continue
        draw = rng.random() * total
        idx = int(np.searchsorted(np.cumsum(closest), draw))
        centroids[i] = points[min(idx, n - 1)]
        closest = np.minimum(closest, ((points - centroids[i]) ** 2).sum(axis=1))
    return centroids


def kmeans(points, k, seed, max_iter=100):
    """Lloyd's algorithm with k-means++ init on Euclidean distance.

    Runs to an assignment fixpoint or max_iter.  An emptied cluster is
    re-seeded at the point farthest from its assigned centroid.

    Returns (labels, centroids).
    """
    points = np.asarray(points, dtype=float)
    n = points.shape[0]
    if k < 1:
        raise ValueError("k must be positive")
    if n < k:
        raise ValueError("fewer points than clusters")
    rng = np.random.default_rng(seed)
    centroids = _kmeans_pp_init(points, k, rng)
    labels = np.full(n, -1)
    for _ in range(max_iter):
        d = ((points[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        new_labels = d.argmin(axis=1)
        for c in range(k):
            members = new_labels == c
            if members.any():
                centroids[c] = points[members].mean(axis=0)
            else:
                farthest = int(np.argmax(d[np.arange(n), new_labels]))
                centroids[c] = points[farthest]
                new_labels[farthest] = c
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
    return labels, centroids


def kmeans_subspaces(points, k, seed, point_ids=None):
    """Cluster the points and derive one PCA basis per cluster.

    Clusters come back ordered by size (descending); color tags count from 1
    so 0 stays the neutral palette entry.  The basis origin is the global
    data mean so views over different clusters stay comparable.
    """
    points = np.asarray(points, dtype=float)
    n = points.shape[0]
    if n < 3 * k:
        raise ValueError("need at least 3k points")
    if point_ids is None:
        point_ids = np.arange(n)
    point_ids = np.asarray(point_ids)
    labels, centroids = kmeans(points, k, seed)
    origin = points.mean(axis=0)
    rng = np.random.default_rng(seed)

    order = sorted(range(k), key=lambda c: (-(labels == c).sum(), c))
    clusters = []
    for tag, c in enumerate(order, start=1):
        members = np.flatnonzero(labels == c)
        cluster_points = points[members]
        if len(members) >= 2:
            comps = pca(cluster_points, 3).components
            basis = make_basis(comps[0], comps[1], z_source=comps[2], origin=origin)
        else:
            basis = random_subspace(points.shape[1], rng.integers(2**32), origin=origin)
        clusters.append(
            SubspaceCluster(
                member_ids=point_ids[members],
                basis=basis,
                centroid=centroids[c].copy(),
                color_tag=tag,
            )
        )
    return clusters
