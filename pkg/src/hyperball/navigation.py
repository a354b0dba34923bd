"""Mouse gestures: in-subspace rotation, cluster chasing, attribute alignment.

Chasing re-weights the dimensions whose projected directions align with the
mouse motion, transitioning the view into an adjacent 3D subspace.  Each
affected dimension k receives a signed increment proportional to the
component of the motion along its on-screen direction, attenuated by a
Gaussian in the line angle between motion and direction, so inward drags
shrink a dimension as readily as outward drags grow it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core_math import gram_schmidt, rotation_between, sphere_map
from .errors import DegenerateCandidate, NoAffectedDims
from .projection import ProjectionBasis, bake_rotation


@dataclass
class ChaseConfig:
    """Tuning constants for cluster chasing.

    k_a scales drag distance into weight increments; k_d (rad^-2) sets the
    Gaussian reach exp(-k_d * phi^2) over the misalignment angle, so phi
    within 1/sqrt(k_d) (about 20 degrees at the default) counts as aligned.
    """

    k_a: float = 0.5
    k_d: float = 8.0
    max_affected: int = 4

    def __post_init__(self):
        if self.k_a <= 0 or self.k_d <= 0 or self.max_affected <= 0:
            raise ValueError("chase constants must be positive")

    def reach(self):
        return 1.0 / np.sqrt(self.k_d)


@dataclass
class DragEvent:
    """One mouse drag in trackball-disk coordinates ([-1, 1]^2)."""

    from_xy: tuple
    to_xy: tuple
    button: str = "left"  # left | right | middle
    pinned_dim: int | None = None


def drag_to_rotation(ev):
    """In-subspace rotation for a left drag: both endpoints mapped to the sphere."""
    return rotation_between(sphere_map(ev.from_xy), sphere_map(ev.to_xy))


def _column_angle(axes2, dim):
    return float(np.arctan2(axes2[1, dim], axes2[0, dim]))


def _inplane_rotation(angle):
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]])


def _reorthonormalize(axes2, old_z):
    x_norm = np.linalg.norm(axes2[0])
    if x_norm < 1e-9:
        raise DegenerateCandidate("ppa-x collapsed")
    x = axes2[0] / x_norm
    y = gram_schmidt(x[None, :], axes2[1])
    z = gram_schmidt(np.vstack([x, y]), old_z)
    return np.vstack([x, y, z])


def chase(state, ev, cfg):
    """Right-drag: push the aligned dimensions' weights along the motion.

    The state is baked first so the update operates on the on-screen axes.
    Dimensions within the Gaussian reach of the motion line (at most
    cfg.max_affected of them) receive increments along their own projected
    directions; the basis is then re-orthonormalized.  When a dimension is
    pinned, a final in-plane rotation restores its projected angle, keeping
    it fixed under the cursor for the duration of the gesture.
    """
    if ev.button != "right":
        raise ValueError("chase expects a right-button drag")
    if ev.pinned_dim is not None and not 0 <= ev.pinned_dim < state.n_dims:
        raise ValueError("pinned_dim out of range")
    delta = np.asarray(ev.to_xy, dtype=float) - np.asarray(ev.from_xy, dtype=float)
    dist = float(np.linalg.norm(delta))
    state = bake_rotation(state)
    if dist == 0.0:
        return state

    axes = state.basis.axes
    a = axes[:2].copy()
    col_norms = np.linalg.norm(a, axis=0)
    motion = delta / dist

    live = col_norms > 1e-9
    units = np.zeros_like(a)
    units[:, live] = a[:, live] / col_norms[live]
    cos_line = np.abs(units.T @ motion)
    phi = np.arccos(np.clip(cos_line, 0.0, 1.0))
    eligible = np.flatnonzero(live & (phi <= cfg.reach()))
    if eligible.size == 0:
        raise NoAffectedDims("no dimension direction within the gesture's reach")
    if eligible.size > cfg.max_affected:
        order = np.argsort(phi[eligible], kind="stable")
        eligible = eligible[order[: cfg.max_affected]]

    pinned_angle = None
    if ev.pinned_dim is not None and col_norms[ev.pinned_dim] > 1e-9:
        pinned_angle = _column_angle(a, ev.pinned_dim)

    for k in eligible:
        weight = np.exp(-cfg.k_d * phi[k] ** 2)
        step = cfg.k_a * weight * float(delta @ units[:, k])
        if step < 0.0 and -step >= col_norms[k]:
            a[:, k] = 0.0  # inward drags bottom out at zero weight
        else:
            a[:, k] = a[:, k] + step * units[:, k]

    try:
        new_axes = _reorthonormalize(a, axes[2])
    except DegenerateCandidate:
        return state  # revert the step

    if pinned_angle is not None:
        correction = pinned_angle - _column_angle(new_axes[:2], ev.pinned_dim)
        new_axes[:2] = _inplane_rotation(correction) @ new_axes[:2]

    out = state.copy()
    out.basis = ProjectionBasis(new_axes, state.basis.origin.copy())
    out.deep_seed = None
    out.deep_power = 1.0
    return out


def align_attribute(state, dim, target_dir, step, cfg=None):
    """Rotate one dimension's projected direction toward a target direction.

    The projected length is preserved; `step` in (0, 1] is the fraction of
    the angular gap closed by this call.  Re-orthonormalization afterwards
    may perturb the angle slightly (a degree or two at most for generic
    bases).
    """
    if not 0.0 < step <= 1.0:
        raise ValueError("step must be in (0, 1]")
    target = np.asarray(target_dir, dtype=float)
    if abs(np.linalg.norm(target) - 1.0) > 1e-6:
        raise ValueError("target_dir must be a unit vector")
    state = bake_rotation(state)
    axes = state.basis.axes
    a = axes[:2].copy()
    length = float(np.linalg.norm(a[:, dim]))
    if length < 1e-12:
        return state  # no direction to rotate

    current = _column_angle(a, dim)
    goal = float(np.arctan2(target[1], target[0]))
    gap = (goal - current + np.pi) % (2.0 * np.pi) - np.pi
    new_angle = current + step * gap
    a[:, dim] = length * np.array([np.cos(new_angle), np.sin(new_angle)])

    try:
        new_axes = _reorthonormalize(a, axes[2])
    except DegenerateCandidate:
        return state

    # The selected dimension stays under the cursor: undo the angular drift
    # the orthonormalization introduced, like the pinned case of chase.
    correction = new_angle - _column_angle(new_axes[:2], dim)
    new_axes[:2] = _inplane_rotation(correction) @ new_axes[:2]

    out = state.copy()
    out.basis = ProjectionBasis(new_axes, state.basis.origin.copy())
    out.deep_seed = None
    out.deep_power = 1.0
    return out
