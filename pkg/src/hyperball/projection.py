"""Projection state: the 3xN basis, the trackball rotation, and point projection.

The current generalized 3D subspace is spanned by three orthonormal N-D
axis vectors (rows of ProjectionBasis.axes).  The trackball contributes a
3x3 rotation T and a zoom scalar; the compound matrix M = zoom * T * P maps
centered N-D points to screen (x, y) plus a depth coordinate z.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .core_math import gram_schmidt, orthonormalize_rows, orthonormality_error
from .errors import ColinearSelection, DegenerateCandidate

#: exp(k * drag) turns a signed drag amount into the z-reweighting exponent.
DEEP_SPEED = 0.5


@dataclass
class ProjectionBasis:
    """Three orthonormal N-D row vectors plus the data-centering origin."""

    axes: np.ndarray  # (3, N), rows = ppa_x, ppa_y, ppa_z
    origin: np.ndarray  # (N,)

    @property
    def ppa_x(self):
        return self.axes[0]

    @property
    def ppa_y(self):
        return self.axes[1]

    @property
    def ppa_z(self):
        return self.axes[2]

    @property
    def n_dims(self):
        return self.axes.shape[1]

    def copy(self):
        return ProjectionBasis(self.axes.copy(), self.origin.copy())

    def orthonormality_error(self):
        return orthonormality_error(self.axes)


@dataclass
class TrackballState:
    """Value object holding the basis, trackball rotation and zoom.

    deep_seed / deep_power track an in-progress depth-drag sequence: the
    ppa-z in effect when the sequence started and the cumulative reweighting
    exponent.  Keeping the seed makes opposite drags cancel exactly.  Any
    operation that replaces the basis resets them.
    """

    basis: ProjectionBasis
    rotation: np.ndarray = field(default_factory=lambda: np.eye(3))
    zoom: float = 1.0
    deep_seed: np.ndarray | None = None
    deep_power: float = 1.0

    @property
    def n_dims(self):
        return self.basis.n_dims

    def compound(self):
        """M = zoom * T * P, shape (3, N)."""
        return self.zoom * (self.rotation @ self.basis.axes)

    def baked_axes(self):
        """The basis rows with the trackball rotation folded in."""
        return self.rotation @ self.basis.axes

    def copy(self):
        return TrackballState(
            basis=self.basis.copy(),
            rotation=self.rotation.copy(),
            zoom=self.zoom,
            deep_seed=None if self.deep_seed is None else self.deep_seed.copy(),
            deep_power=self.deep_power,
        )


@dataclass
class ProjectedCloud:
    """Screen coordinates plus retained depth for a set of points."""

    xy: np.ndarray  # (n, 2)
    z: np.ndarray  # (n,)
    point_ids: np.ndarray  # (n,)


def make_basis(x, y, z_source="random", origin=None, rng=None, retries=16):
    """Complete an orthonormal (x, y) pair to a full 3D subspace basis.

    z_source is either "random" (resampled standard-normal candidates) or an
    explicit N-vector candidate, typically the third principal component of
    the cluster that produced x and y.  The candidate is orthonormalized
    against x and y.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n_dims = x.shape[0]
    if origin is None:
        origin = np.zeros(n_dims)
    fixed = np.vstack([x, y])
    if isinstance(z_source, str):
        if z_source != "random":
            raise ValueError(f"unknown z_source {z_source!r}")
        if rng is None:
            rng = np.random.default_rng()
        err = None
        for _ in range(retries):
            try:
                z = gram_schmidt(fixed, rng.standard_normal(n_dims))
                break
            except DegenerateCandidate as exc:  # pragma: no cover - prob ~0
                err = exc
        else:  # pragma: no cover
            raise err
    else:
        z = gram_schmidt(fixed, np.asarray(z_source, dtype=float))
    return ProjectionBasis(np.vstack([x, y, z]), np.asarray(origin, dtype=float))


def fresh_state(basis, zoom=1.0):
    """New trackball state over `basis` with the rotation reset to identity."""
    return TrackballState(basis=basis.copy(), rotation=np.eye(3), zoom=zoom)


def project(state, points, point_ids=None):
    """Project N-D points through the compound matrix M = zoom * T * P."""
    points = np.asarray(points, dtype=float)
    coords = (points - state.basis.origin) @ state.compound().T
    if point_ids is None:
        point_ids = np.arange(points.shape[0])
    return ProjectedCloud(xy=coords[:, :2], z=coords[:, 2], point_ids=np.asarray(point_ids))


def rotate(state, delta):
    """Compose a trackball rotation; the subspace itself is untouched."""
    out = state.copy()
    out.rotation = np.asarray(delta, dtype=float) @ state.rotation
    return out


def bake_rotation(state):
    """Fold the trackball rotation into the basis; projections are unchanged.

    A Gram-Schmidt cleanup pass absorbs the rounding drift of the matrix
    product so long interaction sequences cannot accumulate error.
    """
    baked = state.rotation @ state.basis.axes
    baked = orthonormalize_rows(baked)
    out = state.copy()
    out.basis = ProjectionBasis(baked, state.basis.origin.copy())
    out.rotation = np.eye(3)
    out.deep_seed = None
    out.deep_power = 1.0
    return out


def deep_adjust(state, drag_amount, speed=DEEP_SPEED):
    """Re-weight the depth axis: emphasize (up-drag) or flatten (down-drag).

    The magnitudes of the ppa-z components are raised to the power
    exp(speed * drag_amount), signs kept, then the vector is renormalized and
    re-orthonormalized against ppa-x/y.  The exponent accumulates on the seed
    vector captured when the drag sequence began, so equal and opposite drags
    cancel exactly.  A collapse into span(x, y) reverts to the previous z.
    """
    if drag_amount == 0.0:
        return state.copy()
    seed = state.deep_seed if state.deep_seed is not None else state.basis.ppa_z.copy()
    power = state.deep_power * float(np.exp(speed * drag_amount))
    weighted = np.sign(seed) * np.abs(seed) ** power
    norm = np.linalg.norm(weighted)
    out = state.copy()
    if norm < 1e-12:
        return out  # revert: exponent drove every component to zero
    try:
        z = gram_schmidt(state.basis.axes[:2], weighted / norm)
    except DegenerateCandidate:
        return out  # revert to the previous z
    axes = state.basis.axes.copy()
    axes[2] = z
    out.basis = ProjectionBasis(axes, state.basis.origin.copy())
    out.deep_seed = seed.copy()
    out.deep_power = power
    return out


def _lowdin2(a):
    """Symmetric orthonormalization of a 2-row frame: A <- (A A^T)^-1/2 A."""
    gram = a @ a.T
    w, v = np.linalg.eigh(gram)
    if w[0] < 1e-14:
        raise DegenerateCandidate("rows are linearly dependent")
    inv_sqrt = (v * (1.0 / np.sqrt(w))) @ v.T
    return inv_sqrt @ a


def _unit_columns(a, fallback):
    norms = np.linalg.norm(a, axis=0)
    units = np.where(norms > 1e-12, norms, 1.0)
    u = a / units
    u[:, norms <= 1e-12] = fallback[:, None]
    return u, norms


def equal_express(state, dims):
    """Re-weight the view so the selected dimensions are equally, maximally expressed.

    Each selected dimension keeps its current on-screen direction; its
    projected length is raised to the largest value c the orthonormality of
    the (ppa_x, ppa_y) rows allows, identical for all selected dimensions.
    The unselected columns are reshaped (Procrustes-closest to their current
    values) to absorb the remaining Gram mass, which keeps the rows exactly
    orthonormal.  With every dimension selected the same goal is reached by
    alternating column rescaling with symmetric orthonormalization.
    """
    dims = sorted(set(int(d) for d in dims))
    n_dims = state.n_dims
    if not 2 <= len(dims) <= n_dims:
        raise ValueError("need between 2 and N selected dimensions")
    if any(d < 0 or d >= n_dims for d in dims):
        raise ValueError("dimension index out of range")

    baked = bake_rotation(state)
    a = baked.basis.axes[:2].copy()
    units, _ = _unit_columns(a[:, dims], np.array([1.0, 0.0]))

    if len(dims) == n_dims:
        new_a = _equal_express_all(a, units)
    else:
        new_a = _equal_express_subset(a, dims, units)

    # Cleanup: the construction is orthonormal up to rounding.
    x = new_a[0] / np.linalg.norm(new_a[0])
    y = gram_schmidt(x[None, :], new_a[1])
    axes = np.vstack([x, y, baked.basis.ppa_z])
    axes[2] = _continued_z(axes[:2], baked.basis.ppa_z)
    out = baked
    out.basis = ProjectionBasis(axes, baked.basis.origin.copy())
    return out


def _cap_column_norms(v, cap, max_sweeps=256):
    """Givens-balance columns until none is longer than `cap`.

    Right-multiplying by a rotation preserves V V^T (hence the row Gram), so
    norm can be moved from the loudest column into the quietest without
    disturbing orthonormality.  When the average norm already exceeds the
    cap this converges to the balanced best effort instead.
    """
    v = v.copy()
    cap2 = cap * cap + 1e-12
    for _ in range(max_sweeps):
        norms2 = (v * v).sum(axis=0)
        hi = int(np.argmax(norms2))
        lo = int(np.argmin(norms2))
        if norms2[hi] <= cap2 or hi == lo:
            break
        gamma = float(v[:, hi] @ v[:, lo])
        theta = 0.5 * np.arctan2(norms2[lo] - norms2[hi], 2.0 * gamma)
        cs, sn = np.cos(theta), np.sin(theta)
        p, q = v[:, hi].copy(), v[:, lo].copy()
        v[:, hi] = cs * p + sn * q
        v[:, lo] = -sn * p + cs * q
    return v


def _equal_express_subset(a, dims, units):
    """Closed form when some dimensions stay unselected."""
    n_dims = a.shape[1]
    unsel = [k for k in range(n_dims) if k not in dims]
    frame_gram = units @ units.T  # sum of u u^T over selected directions
    evals = np.linalg.eigvalsh(frame_gram)
    c = 1.0 / np.sqrt(evals[-1])
    residual = np.eye(2) - c * c * frame_gram
    w, v = np.linalg.eigh(residual)
    w = np.clip(w, 0.0, None)
    t = v * np.sqrt(w)  # residual = t t^T

    # Row-orthonormal factor closest to the current unselected columns.
    current = a[:, unsel]
    if len(unsel) >= 2:
        p, _, qt = np.linalg.svd(t.T @ current, full_matrices=False)
        new_unsel = t @ (p @ qt)
        if (new_unsel * new_unsel).sum(axis=0).max() > c * c + 1e-9:
            new_unsel = _cap_column_norms(new_unsel, c)
    else:
        # One leftover column can only absorb a rank-1 residual; best effort.
        new_unsel = (v[:, -1] * np.sqrt(w[-1]))[:, None]

    out = np.empty_like(a)
    out[:, dims] = c * units
    out[:, unsel] = new_unsel
    return out


def _equal_express_all(a, units):
    """Alternating projections toward an equal-norm orthonormal-row frame."""
    n_dims = a.shape[1]
    target = np.sqrt(2.0 / n_dims)
    spread = np.linalg.eigvalsh(units @ units.T)
    if spread[-1] <= 1e-12 or spread[0] / spread[-1] < 1e-12:
        raise ColinearSelection("selected dimensions all project onto one line")
    cur = a.copy()
    best = cur
    best_spread = np.inf
    stall = 0
    for _ in range(2000):
        u, _ = _unit_columns(cur, np.array([1.0, 0.0]))
        try:
            cur = _lowdin2(target * u)
        except DegenerateCandidate:
            raise ColinearSelection("selected dimensions all project onto one line")
        norms = np.linalg.norm(cur, axis=0)
        gap = float(norms.max() - norms.min())
        if gap < best_spread - 1e-15:
            best, best_spread, stall = cur, gap, 0
        else:
            stall += 1
        if gap < 1e-9 or stall > 50:
            break
    return best


def _continued_z(xy_rows, z_candidate):
    """Depth axis continuing `z_candidate`, falling back to coordinate axes."""
    try:
        return gram_schmidt(xy_rows, z_candidate)
    except DegenerateCandidate:
        pass
    n_dims = xy_rows.shape[1]
    for j in range(n_dims):
        e = np.zeros(n_dims)
        e[j] = 1.0
        try:
            return gram_schmidt(xy_rows, e)
        except DegenerateCandidate:
            continue
    raise DegenerateCandidate("no completion for the depth axis")  # pragma: no cover


def membership(basis, points, quantile):
    """Flag points whose residual off the subspace is within the given quantile.

    The residual is the distance between the centered point and its
    orthogonal projection onto span(ppa_x, ppa_y, ppa_z); the threshold is
    the `quantile`-th residual, making the filter scale-free.
    """
    if not 0.0 < quantile <= 1.0:
        raise ValueError("quantile must be in (0, 1]")
    points = np.asarray(points, dtype=float)
    centered = points - basis.origin
    coeffs = centered @ basis.axes.T
    residual = np.linalg.norm(centered - coeffs @ basis.axes, axis=1)
    threshold = np.quantile(residual, quantile)
    return residual <= threshold + 1e-12
