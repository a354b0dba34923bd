"""Attribute labels on the trackball periphery: angle, strength, overlap removal.

A dimension's label sits at the angle of its projected direction; font size
and opacity grow with the projected length.  Overlapping labels are spread
apart by at least a spacing that depends on how vertical the label is
(vertical neighborhoods need more room than horizontal ones).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SPACING_VERTICAL = 24.0  # degrees needed beside a vertically aligned label
SPACING_HORIZONTAL = 4.0  # degrees past 45 degrees from vertical
MIN_FONT_PT = 8.0
MAX_FONT_PT = 18.0
MIN_OPACITY = 0.25


@dataclass
class LabelPlacement:
    dim: int
    angle: float  # natural angle, degrees in [0, 360)
    strength: float  # projected length, clamped to [0, 1]
    display_angle: float  # after overlap adjustment
    visible: bool

    @property
    def font_pt(self):
        return MIN_FONT_PT + (MAX_FONT_PT - MIN_FONT_PT) * self.strength

    @property
    def opacity(self):
        return MIN_OPACITY + (1.0 - MIN_OPACITY) * self.strength


def base_angles(baked_axes):
    """Placement for every dimension from the baked basis columns.

    The angle is the two-argument arctangent of (w_y, w_x) so every quadrant
    resolves correctly; zero-length columns are hidden.
    """
    a = np.asarray(baked_axes, dtype=float)[:2]
    placements = []
    for dim in range(a.shape[1]):
        wx, wy = a[0, dim], a[1, dim]
        norm = float(np.hypot(wx, wy))
        if norm < 1e-12:
            placements.append(LabelPlacement(dim, 0.0, 0.0, 0.0, False))
            continue
        angle = float(np.degrees(np.arctan2(wy, wx))) % 360.0
        strength = min(norm, 1.0)
        placements.append(LabelPlacement(dim, angle, strength, angle, True))
    return placements


def gamma_from_angle(angle):
    """Angular distance (degrees, in [0, 90]) from the nearest vertical axis."""
    angle = angle % 360.0
    d_up = min(abs(angle - 90.0), 360.0 - abs(angle - 90.0))
    d_down = min(abs(angle - 270.0), 360.0 - abs(angle - 270.0))
    return min(d_up, d_down)


def required_spacing(gamma):
    """Minimal angular gap (degrees) next to a label gamma degrees from vertical."""
    if not 0.0 <= gamma <= 90.0:
        raise ValueError("gamma must be in [0, 90]")
    if gamma >= 45.0:
        return SPACING_HORIZONTAL
    return SPACING_VERTICAL - (SPACING_VERTICAL - SPACING_HORIZONTAL) * gamma / 45.0


def _spacing_at(absolute_angle):
    return required_spacing(gamma_from_angle(absolute_angle))


def _sweep(entries, anchor_angle):
    """Push offsets counterclockwise so each gap meets the pushed label's need.

    entries: list of [offset_from_anchor, placement]; mutated in place to the
    resolved offsets.  Returns True when the wrap-around gap also fits.
    """
    prev = 0.0
    for entry in entries:
        offset = entry[0]
        if offset - prev < _spacing_at(anchor_angle + offset) - 1e-12:
            # Fixed point of offset = prev + spacing(angle(offset)); the
            # spacing varies slower than the angle, so iteration contracts.
            offset = max(offset, prev)
            for _ in range(64):
                nxt = prev + _spacing_at(anchor_angle + offset)
                if abs(nxt - offset) < 1e-12:
                    break
                offset = nxt
            entry[0] = max(entry[0], offset)
        prev = entry[0]
    return 360.0 - prev >= _spacing_at(anchor_angle) - 1e-12


def resolve_overlaps(placements, max_labels=10, selected=None):
    """Displace visible labels so adjacent gaps meet the required spacing.

    The `max_labels` strongest labels stay visible (or exactly the
    user-`selected` dims when given); the rest are hidden with their angles
    untouched.  The strongest visible label anchors the sweep, which pushes
    the others counterclockwise; when the circle cannot fit them all, the
    weakest are hidden until it can.
    """
    out = [
        LabelPlacement(p.dim, p.angle, p.strength, p.angle, p.visible)
        for p in placements
    ]
    candidates = [p for p in out if p.strength > 0.0]
    if selected is not None:
        chosen = [p for p in candidates if p.dim in selected]
    else:
        candidates.sort(key=lambda p: (-p.strength, p.dim))
        chosen = candidates[: max_labels]
    chosen_dims = {p.dim for p in chosen}
    for p in out:
        p.visible = p.dim in chosen_dims

    while len(chosen) > 1:
        anchor = max(chosen, key=lambda p: (p.strength, -p.dim))
        rest = [p for p in chosen if p is not anchor]
        entries = sorted(
            ([(p.angle - anchor.angle) % 360.0, p] for p in rest),
            key=lambda e: (e[0], e[1].dim),
        )
        if _sweep(entries, anchor.angle):
            anchor.display_angle = anchor.angle
            for offset, p in entries:
                p.display_angle = (anchor.angle + offset) % 360.0
            return out
        # The circle does not close.  True overflow drops the weakest label
        # overall; a local jam against the fixed anchor drops the label
        # wedged into it, which keeps the rest of the ring intact.
        total_need = sum(_spacing_at(p.display_angle) for p in chosen)
        if total_need > 360.0:
            victim = min(chosen, key=lambda p: (p.strength, -p.dim))
        else:
            victim = entries[-1][1]
        victim.visible = False
        victim.display_angle = victim.angle
        chosen = [p for p in chosen if p is not victim]
    return out
