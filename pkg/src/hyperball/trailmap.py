"""Saved-view management: weight-vector embedding, map layout, and transitions.

Each saved view is summarized by an N-vector of per-dimension weights (the
L2 norms of the baked basis columns), which is invariant to the in-subspace
rotation stored with the view.  The map lays these vectors out with PCA
inside a word cloud of the strongest attribute labels; keyframe paths
animate along the geodesic between view planes.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .core_math import pca, principal_angles
from .errors import PathTooShort
from .projection import ProjectionBasis, TrackballState, _continued_z

LAYOUT_MARGIN = 0.05
LABEL_RADIUS = 0.45
MAX_MAP_LABELS = 10
SEGMENT_FRAMES = 30


@dataclass
class SavedView:
    """A frozen basis + rotation + metadata entry on the trail map."""

    view_id: int
    basis: ProjectionBasis
    rotation: np.ndarray
    zoom: float
    name: str = ""
    thumbnail_xy: np.ndarray | None = None  # (n, 2) snapshot
    thumbnail_colors: np.ndarray | None = None
    created_at: float = field(default_factory=time.time)

    def baked_axes(self):
        return self.rotation @ self.basis.axes

    def to_state(self):
        return TrackballState(
            basis=self.basis.copy(), rotation=self.rotation.copy(), zoom=self.zoom
        )


@dataclass
class TrailMapLayout:
    positions: dict  # view_id -> (x, y) in the unit square
    label_placements: list  # (dim, (x, y), weight), at most MAX_MAP_LABELS
    paths: list  # ordered view_id lists


def view_weight_vector(view):
    """Per-dimension weight W_k: the L2 norm of baked-basis column k."""
    return np.linalg.norm(view.baked_axes(), axis=0)


def _rescale_unit_square(coords):
    """Center and uniformly scale into the unit square with a 5% margin.

    The scale is isotropic so pairwise distances stay proportional to the
    distances in the embedding space.
    """
    lo = coords.min(axis=0)
    hi = coords.max(axis=0)
    span = float((hi - lo).max(initial=0.0))
    if span <= 0.0:
        return np.full_like(coords, 0.5)
    center = (lo + hi) / 2.0
    return 0.5 + (1.0 - 2.0 * LAYOUT_MARGIN) * (coords - center) / span


def _push_apart(placed, pos, min_gap=0.08):
    """Greedy radial push away from the map center until clear of `placed`."""
    center = np.array([0.5, 0.5])
    pos = np.asarray(pos, dtype=float)
    direction = pos - center
    norm = np.linalg.norm(direction)
    direction = direction / norm if norm > 1e-9 else np.array([1.0, 0.0])
    for _ in range(32):
        if all(np.linalg.norm(pos - q) >= min_gap for q in placed):
            break
        pos = pos + 0.02 * direction
    return pos


def layout(views, paths=()):
    """PCA layout of the views' weight vectors inside a label word cloud."""
    views = list(views)
    if not views:
        raise ValueError("need at least one view")
    weights = np.vstack([view_weight_vector(v) for v in views])
    ids = [v.view_id for v in views]

    if len(views) == 1:
        positions = {ids[0]: (0.5, 0.5)}
        strengths = weights[0]
        loadings = None
    else:
        result = pca(weights, 2)
        coords = (weights - result.mean) @ result.components.T
        scaled = _rescale_unit_square(coords)
        positions = {vid: (float(x), float(y)) for vid, (x, y) in zip(ids, scaled)}
        loadings = result.components.T  # (N, 2)
        strengths = np.linalg.norm(loadings, axis=1)

    top = np.argsort(-strengths, kind="stable")[:MAX_MAP_LABELS]
    top = [int(d) for d in top if strengths[d] > 1e-12]
    label_placements = []
    placed = []
    peak = max((strengths[d] for d in top), default=1.0)
    for rank, dim in enumerate(top):
        if loadings is None:
            angle = 2.0 * np.pi * rank / max(len(top), 1)
            raw = 0.5 + 0.35 * np.array([np.cos(angle), np.sin(angle)])
        else:
            raw = 0.5 + LABEL_RADIUS * loadings[dim] / peak
        pos = _push_apart(placed, raw)
        placed.append(pos)
        label_placements.append((dim, (float(pos[0]), float(pos[1])), float(strengths[dim] / peak)))
    return TrailMapLayout(positions=positions, label_placements=label_placements, paths=[list(p) for p in paths])


def _geodesic_frames(frame_a, frame_b):
    """Principal-vector pairs and angles for the plane geodesic a -> b.

    Returns (rot_a, wa, angles, g) where wa holds the principal vectors of
    A's plane (rows), g the unit directions toward B's plane, and rot_a the
    2x2 map with rot_a @ wa == frame_a, used to de-rotate interpolated frames
    back into A's in-plane coordinates.
    """
    m = frame_a @ frame_b.T
    p, svals, qt = np.linalg.svd(m)
    cosines = np.clip(svals, -1.0, 1.0)
    angles = np.arccos(cosines)
    wa = p.T @ frame_a
    wb = qt @ frame_b
    g = np.zeros_like(wa)
    for i in range(wa.shape[0]):
        resid = wb[i] - cosines[i] * wa[i]
        norm = np.linalg.norm(resid)
        if norm > 1e-9:
            g[i] = resid / norm
    return p, wa, angles, g


def interpolate(a, b, t, z_hint=None):
    """State at fraction t along the geodesic between two saved views.

    t = 0 reproduces a's baked frame exactly; t = 1 spans b's plane (its
    in-plane rotation may differ, which the de-rotation hides).  The depth
    axis continues `z_hint` (defaults to a's) for visual continuity.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must be in [0, 1]")
    axes_a = a.baked_axes()
    origin = a.basis.origin.copy()
    zoom = (1.0 - t) * a.zoom + t * b.zoom
    if t == 0.0:
        basis = ProjectionBasis(axes_a.copy(), origin)
        return TrackballState(basis=basis, rotation=np.eye(3), zoom=zoom)

    axes_b = b.baked_axes()
    rot_a, wa, angles, g = _geodesic_frames(axes_a[:2], axes_b[:2])
    swept = t * angles
    frame = np.cos(swept)[:, None] * wa + np.sin(swept)[:, None] * g
    frame = rot_a @ frame

    z_candidate = axes_a[2] if z_hint is None else z_hint
    try:
        z = _continued_z(frame, z_candidate)
    except Exception:
        z = _continued_z(frame, axes_b[2])
    basis = ProjectionBasis(np.vstack([frame, z]), origin)
    return TrackballState(basis=basis, rotation=np.eye(3), zoom=zoom)


def segment_length(a, b):
    """Geodesic length between two view planes: the sum of principal angles."""
    return float(principal_angles(a.baked_axes()[:2], b.baked_axes()[:2]).sum())


def path_lengths(views):
    if len(views) < 2:
        raise PathTooShort("a path needs at least two views")
    return np.array([segment_length(views[i], views[i + 1]) for i in range(len(views) - 1)])


def path_state(views, t):
    """State at global parameter t in [0, 1], arc-length uniform over segments.

    Keyframes land exactly: when the cumulative length hits a boundary the
    state is the keyframe itself.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must be in [0, 1]")
    lengths = path_lengths(views)
    total = float(lengths.sum())
    if total <= 0.0:
        return interpolate(views[0], views[1], 0.0)
    if t == 1.0:
        return views[-1].to_state()
    target = t * total
    cum = 0.0
    for i, seg in enumerate(lengths):
        # strict bound: an exact boundary lands on the keyframe itself
        if target < cum + seg or i == len(lengths) - 1:
            local = 0.0 if seg == 0.0 else (target - cum) / seg
            return interpolate(views[i], views[i + 1], float(np.clip(local, 0.0, 1.0)))
        cum += seg
    raise AssertionError("unreachable")


def step_path(views, cursor, frames=SEGMENT_FRAMES):
    """States animating the segment cursor -> cursor+1 (both ends included)."""
    if len(views) < 2:
        raise PathTooShort("a path needs at least two views")
    if not 0 <= cursor < len(views) - 1:
        raise ValueError("cursor out of range")
    a, b = views[cursor], views[cursor + 1]
    states = []
    z_hint = None
    for i in range(frames):
        t = i / (frames - 1)
        state = interpolate(a, b, t, z_hint=z_hint)
        z_hint = state.basis.ppa_z
        states.append(state)
    return states
