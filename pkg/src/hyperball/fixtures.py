"""Synthetic benchmark datasets with known planted structure."""

from __future__ import annotations

import numpy as np

from .core_math import random_orthonormal, random_rotation3
from .dataset import make_dataset


def _clipped_normal(rng, sigma, size, clip=3.0):
    """Gaussian noise truncated at +-clip sigma so shells keep a hard gap."""
    return np.clip(rng.standard_normal(size), -clip, clip) * sigma


def gen_tube_stick(n_tube=900, n_stick=100, embed_dims=6, seed=0, axis_aligned=False):
    """Hollow tube with a stick along its axis, hidden off the data axes.

    The tube is a cylinder shell (radius 1, half-length 2, radial noise
    sigma 0.05); the stick sits on the axis segment with radial sigma 0.02.
    The assembly is rigidly rotated by a seeded random 3D rotation and then
    embedded into `embed_dims` dimensions through a random orthonormal
    injection plus sigma 0.01 isotropic noise, so no axis-aligned view can
    reveal the stick.  `axis_aligned` skips both rotations (used by tests
    that check the construction itself).

    Returns a Dataset whose class column marks tube (0) vs stick (1).
    """
    if embed_dims < 3:
        raise ValueError("need at least 3 embedding dimensions")
    rng = np.random.default_rng(seed)

    theta = rng.uniform(0.0, 2.0 * np.pi, n_tube)
    radius = 1.0 + _clipped_normal(rng, 0.05, n_tube)
    height = rng.uniform(-2.0, 2.0, n_tube)
    tube = np.column_stack([radius * np.cos(theta), radius * np.sin(theta), height])

    stick_xy = _clipped_normal(rng, 0.02, (n_stick, 2))
    stick_h = rng.uniform(-2.0, 2.0, n_stick)
    stick = np.column_stack([stick_xy, stick_h])

    points3 = np.vstack([tube, stick])
    if not axis_aligned:
        rotation = random_rotation3(rng)
        # Avoid the measure-zero case of a near axis-aligned rotation.
        while np.max(np.abs(rotation)) > 0.99:
            rotation = random_rotation3(rng)
        points3 = points3 @ rotation.T
        injection = random_orthonormal(embed_dims, 3, rng)  # (3, N), orthonormal rows
        points = points3 @ injection
    else:
        points = np.zeros((points3.shape[0], embed_dims))
        points[:, :3] = points3
    points = points + _clipped_normal(rng, 0.01, points.shape)

    labels = np.concatenate([np.zeros(n_tube, dtype=int), np.ones(n_stick, dtype=int)])
    attributes = [f"dim{i}" for i in range(embed_dims)]
    return make_dataset(
        f"tube_stick_{seed}", attributes, points, labels, ["tube", "stick"]
    )


def gen_three_clusters(n_per=300, n_dims=10, seed=0):
    """Three Gaussians, each stretched along its own 3-dimension subset.

    Cluster i is elongated (sigma 1.0) along dimensions {3i, 3i+1, 3i+2}
    (mod N) and tight (sigma 0.1) elsewhere; the cluster means are offset
    along each other's stretched subsets, so a single cluster's PCA view
    spreads that cluster but leaves the co-clusters overlapping until the
    view is nudged into an adjacent subspace.
    """
    if n_dims < 4:
        raise ValueError("need at least 4 dimensions")
    rng = np.random.default_rng(seed)
    subsets = [
        np.array([(3 * i + j) % n_dims for j in range(3)]) for i in range(3)
    ]
    means = np.zeros((3, n_dims))
    for i in range(3):
        # Offset partly inside the *next* cluster's stretched subset: in
        # cluster i's own PCA view those directions are quiet, so the other
        # clusters project on top of each other there.
        own = subsets[i]
        other = subsets[(i + 1) % 3]
        means[i, own[0]] += 2.0
        means[i, other[1]] += 4.0
        means[i, other[2]] -= 2.0

    blocks, labels = [], []
    for i in range(3):
        sigma = np.full(n_dims, 0.1)
        sigma[subsets[i]] = 1.0
        blocks.append(means[i] + rng.standard_normal((n_per, n_dims)) * sigma)
        labels.append(np.full(n_per, i, dtype=int))

    points = np.vstack(blocks)
    labels = np.concatenate(labels)
    attributes = [f"attr{i}" for i in range(n_dims)]
    return make_dataset(
        f"three_clusters_{seed}", attributes, points, labels,
        ["cluster0", "cluster1", "cluster2"],
    )
