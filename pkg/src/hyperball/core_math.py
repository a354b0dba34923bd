"""Linear-algebra primitives: orthonormalization, rotations, PCA, principal angles.

Vectors are 1-D float64 numpy arrays; orthonormal frames are stored as the
rows of a (k, N) matrix.  All functions are pure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateCandidate

# Residual below this norm counts as linearly dependent.
DEGENERATE_TOL = 1e-8


def gram_schmidt(fixed, candidate):
    """Orthonormalize `candidate` against the orthonormal rows of `fixed`.

    Uses the modified (re-orthogonalizing) variant: the projection pass runs
    twice, which keeps the result orthogonal to working precision even for
    large N where the classical single pass drifts.

    Parameters
    ----------
    fixed : sequence of 1-D arrays, or (k, N) array, possibly empty
    candidate : 1-D array of length N

    Returns
    -------
    1-D unit vector orthogonal to every row of `fixed`.

    Raises
    ------
    DegenerateCandidate
        If the residual norm falls below 1e-8; the caller must resample.
    """
    v = np.array(candidate, dtype=float)
    fixed = np.atleast_2d(np.asarray(fixed, dtype=float)) if len(fixed) else None
    if fixed is not None:
        for _ in range(2):
            v = v - fixed.T @ (fixed @ v)
    norm = np.linalg.norm(v)
    if norm < DEGENERATE_TOL:
        raise DegenerateCandidate("candidate lies in the span of the fixed vectors")
    return v / norm


def orthonormalize_rows(rows):
    """Gram-Schmidt each row in order against its predecessors."""
    rows = np.asarray(rows, dtype=float)
    out = np.empty_like(rows)
    for i in range(rows.shape[0]):
        out[i] = gram_schmidt(out[:i], rows[i])
    return out


def orthonormality_error(frame):
    """Max |F F^T - I| entry; 0 for a perfectly orthonormal row frame."""
    frame = np.atleast_2d(np.asarray(frame, dtype=float))
    gram = frame @ frame.T
    return float(np.max(np.abs(gram - np.eye(frame.shape[0]))))


def sphere_map(screen):
    """Map a point of the unit trackball disk onto the upper hemisphere.

    Inside the disk z = sqrt(1 - x^2 - y^2); outside, the point is clamped
    to the rim (z = 0) and renormalized.
    """
    x, y = float(screen[0]), float(screen[1])
    r2 = x * x + y * y
    if r2 <= 1.0:
        return np.array([x, y, np.sqrt(1.0 - r2)])
    r = np.sqrt(r2)
    return np.array([x / r, y / r, 0.0])


def axis_angle_rotation(axis, angle):
    """Rodrigues rotation matrix about a (not necessarily unit) 3-vector axis."""
    axis = np.asarray(axis, dtype=float)
    n = np.linalg.norm(axis)
    if n == 0.0:
        return np.eye(3)
    x, y, z = axis / n
    c, s = np.cos(angle), np.sin(angle)
    cc = 1.0 - c
    return np.array(
        [
            [c + cc * x * x, cc * x * y - s * z, cc * x * z + s * y],
            [cc * x * y + s * z, c + cc * y * y, cc * y * z - s * x],
            [cc * x * z - s * y, cc * y * z + s * x, c + cc * z * z],
        ]
    )


def rotation_between(a, b):
    """Rotation matrix carrying unit 3-vector `a` onto unit 3-vector `b`.

    The axis is a x b and the angle acos(a.b).  Coincident inputs give the
    identity; antipodal inputs rotate 180 degrees about a deterministic axis
    orthogonal to `a` (the lowest-index coordinate axis with `a` projected
    out).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = float(np.clip(np.dot(a, b), -1.0, 1.0))
    axis = np.cross(a, b)
    if np.linalg.norm(axis) < 1e-12:
        if c > 0.0:
            return np.eye(3)
        # Antipodal: any axis orthogonal to a gives a valid half turn.
        for i in range(3):
            e = np.zeros(3)
            e[i] = 1.0
            v = e - np.dot(e, a) * a
            if np.linalg.norm(v) > 1e-6:
                axis = v
                break
    return axis_angle_rotation(axis, np.arccos(c))


def is_rotation(m, tol=1e-9):
    """True when m is orthogonal with determinant +1 within tol."""
    m = np.asarray(m, dtype=float)
    return (
        np.max(np.abs(m.T @ m - np.eye(3))) <= tol
        and abs(np.linalg.det(m) - 1.0) <= tol
    )


@dataclass
class PcaResult:
    """Principal components of a point cloud.

    components holds unit, mutually orthogonal rows ordered by explained
    variance (descending); variances are the matching sample variances,
    zero-padded when the data rank is below k.
    """

    mean: np.ndarray
    components: np.ndarray
    variances: np.ndarray


def pca(points, k):
    """Top-k principal components via SVD of the centered data matrix.

    Rank deficiency is not an error: trailing variances are zero and the
    component rows are completed to an orthonormal set (deterministically,
    from the coordinate axes).  Sign convention: the largest-magnitude entry
    of each component is made positive.
    """
    points = np.asarray(points, dtype=float)
    n, dim = points.shape
    if n < 2:
        raise ValueError("pca needs at least 2 points")
    if k > dim:
        raise ValueError("k exceeds the data dimension")
    mean = points.mean(axis=0)
    centered = points - mean
    _, svals, vt = np.linalg.svd(centered, full_matrices=False)
    variances = svals**2 / (n - 1)

    avail = min(k, vt.shape[0])
    components = np.zeros((k, dim))
    components[:avail] = vt[:avail]
    out_var = np.zeros(k)
    out_var[:avail] = variances[:avail]

    # Complete missing rows (k > rank of the SVD factor) from coordinate axes.
    for i in range(avail, k):
        for j in range(dim):
            e = np.zeros(dim)
            e[j] = 1.0
            try:
                components[i] = gram_schmidt(components[:i], e)
                break
            except DegenerateCandidate:
                continue

    for i in range(k):
        j = int(np.argmax(np.abs(components[i])))
        if components[i, j] < 0:
            components[i] = -components[i]
    return PcaResult(mean=mean, components=components, variances=out_var)


def principal_angles(frame_a, frame_b):
    """Canonical angles between the spans of two orthonormal row frames.

    Returned ascending in [0, pi/2]; all zeros iff the spans coincide.
    Small angles come from the sine route (SVD of A restricted to the
    orthogonal complement of span B), which stays accurate where arccos of
    a near-unit cosine loses half the working precision.
    """
    frame_a = np.atleast_2d(np.asarray(frame_a, dtype=float))
    frame_b = np.atleast_2d(np.asarray(frame_b, dtype=float))
    cosines = np.clip(np.linalg.svd(frame_a @ frame_b.T, compute_uv=False), -1.0, 1.0)
    residual = frame_a - (frame_a @ frame_b.T) @ frame_b
    sines = np.sort(np.clip(np.linalg.svd(residual, compute_uv=False), 0.0, 1.0))
    angles = np.where(
        sines**2 <= 0.5, np.arcsin(sines), np.arccos(cosines)
    )
    return angles


def random_orthonormal(n_dims, k, rng):
    """k orthonormal rows of dimension n_dims drawn from the rotation-invariant law."""
    for _ in range(16):
        try:
            return orthonormalize_rows(rng.standard_normal((k, n_dims)))
        except DegenerateCandidate:  # pragma: no cover - probability ~0
            continue
    raise DegenerateCandidate("could not draw an orthonormal frame")


def random_rotation3(rng):
    """Haar-ish random 3x3 rotation (QR of a Gaussian with det fixed to +1)."""
    m = random_orthonormal(3, 3, rng)
    if np.linalg.det(m) < 0:
        m[2] = -m[2]
    return m
