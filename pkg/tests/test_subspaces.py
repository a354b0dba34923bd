import numpy as np
import numpy.testing as npt
import pytest
from scipy import stats

from hyperball.core_math import orthonormality_error, pca
from hyperball.subspaces import kmeans, kmeans_subspaces, random_subspace


def test_random_subspace_full_rank_in_3d(rng):
    basis = random_subspace(3, seed=5)
    # any 3-vector reconstructs exactly from the basis
    v = rng.standard_normal(3)
    npt.assert_allclose(basis.axes.T @ (basis.axes @ v), v, atol=1e-9)


def test_random_subspace_deterministic():
    a = random_subspace(7, seed=123)
    b = random_subspace(7, seed=123)
    npt.assert_array_equal(a.axes, b.axes)


def test_random_subspace_orthonormal():
    for seed in range(20):
        assert random_subspace(10, seed=seed).orthonormality_error() <= 1e-8


def test_random_subspace_first_coordinate_distribution():
    # |x . e1| for a uniform unit 10-vector: x1^2 ~ Beta(1/2, (N-1)/2)
    n_dims = 10
    samples = np.array(
        [abs(random_subspace(n_dims, seed=s).ppa_x[0]) for s in range(1000)]
    )
    cdf = lambda t: stats.beta.cdf(np.square(t), 0.5, (n_dims - 1) / 2)
    result = stats.kstest(samples, cdf)
    assert result.pvalue > 0.01


def test_random_subspace_dimension_permutation_invariance():
    # the coordinate picked cannot matter: compare |x_0| with |x_7| samples
    a = np.array([abs(random_subspace(10, seed=s).ppa_x[0]) for s in range(1000)])
    b = np.array([abs(random_subspace(10, seed=s + 5000).ppa_x[7]) for s in range(1000)])
    assert stats.ks_2samp(a, b).pvalue > 0.01


def test_kmeans_recovers_well_separated_gaussians(rng):
    a = rng.standard_normal((60, 4)) + np.array([20, 0, 0, 0])
    b = rng.standard_normal((60, 4)) - np.array([20, 0, 0, 0])
    pts = np.vstack([a, b])
    truth = np.r_[np.zeros(60, int), np.ones(60, int)]
    labels, centroids = kmeans(pts, 2, seed=0)
    # labels match the generation labels up to cluster renaming
    agreement = max(np.mean(labels == truth), np.mean(labels == 1 - truth))
    assert agreement == 1.0


def test_kmeans_objective_not_worse_than_init(rng):
    pts = rng.standard_normal((150, 5))
    labels, centroids = kmeans(pts, 4, seed=3)
    final = np.sum((pts - centroids[labels]) ** 2)
    # fixpoint: reassigning to the returned centroids changes nothing
    d = ((pts[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    npt.assert_array_equal(d.argmin(axis=1), labels)
    # and the objective beats assigning everything to one centroid
    assert final <= np.sum((pts - pts.mean(axis=0)) ** 2)


def test_kmeans_objective_non_increasing_over_iterations(rng):
    pts = rng.standard_normal((120, 4))
    objectives = []
    for iters in range(1, 8):
        labels, centroids = kmeans(pts, 3, seed=9, max_iter=iters)
        objectives.append(float(np.sum((pts - centroids[labels]) ** 2)))
    assert all(b <= a + 1e-9 for a, b in zip(objectives, objectives[1:]))


def test_kmeans_subspaces_single_cluster_is_global_pca(rng):
    pts = rng.standard_normal((50, 6)) * np.array([3, 2, 1, 0.5, 0.2, 0.1])
    clusters = kmeans_subspaces(pts, 1, seed=0)
    assert len(clusters) == 1
    expected = pca(pts, 3).components
    got = clusters[0].basis.axes
    for row_e, row_g in zip(expected, got):
        assert min(np.linalg.norm(row_g - row_e), np.linalg.norm(row_g + row_e)) <= 1e-8


def test_kmeans_subspaces_order_and_tags(rng):
    a = rng.standard_normal((80, 4)) + [15, 0, 0, 0]
    b = rng.standard_normal((30, 4)) - [15, 0, 0, 0]
    clusters = kmeans_subspaces(np.vstack([a, b]), 2, seed=1)
    sizes = [len(c.member_ids) for c in clusters]
    assert sizes == sorted(sizes, reverse=True)
    assert [c.color_tag for c in clusters] == [1, 2]
    ids = np.concatenate([c.member_ids for c in clusters])
    npt.assert_array_equal(np.sort(ids), np.arange(110))


def test_kmeans_subspaces_bases_orthonormal(rng):
    pts = rng.standard_normal((90, 7))
    for cluster in kmeans_subspaces(pts, 3, seed=2):
        assert orthonormality_error(cluster.basis.axes) <= 1e-8


def test_kmeans_subspaces_requires_enough_points(rng):
    with pytest.raises(ValueError):
        kmeans_subspaces(rng.standard_normal((5, 4)), 2, seed=0)
