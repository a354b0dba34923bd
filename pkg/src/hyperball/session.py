"""Session state: one dataset, one trackball, saved views, paths, and config.

The session is the engine's single mutable object; every interactive
operation goes through a method here and returns the refreshed frame.
Deactivated points are excluded from every computed statistic (PCA, k-means,
metric scoring, optimization, membership thresholds) but still appear in
frames, flagged inactive.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from . import aco, labels as labels_mod, trailmap
from .core_math import pca
from .dataset import Dataset, PointTags, brush, make_dataset
from .errors import DatasetError, HyperballError, NoAffectedDims, PathTooShort
from .metrics import KINDS, MetricContext, QualityMetric
from .navigation import ChaseConfig, DragEvent, align_attribute, chase, drag_to_rotation
from .projection import (
    ProjectionBasis,
    TrackballState,
    deep_adjust,
    equal_express,
    fresh_state,
    make_basis,
    membership,
    project,
    rotate,
)
from .subspaces import kmeans_subspaces

SESSION_FILE_VERSION = 1


@dataclass
class SessionConfig:
    chase: ChaseConfig = field(default_factory=ChaseConfig)
    aco: aco.AcoConfig = field(default_factory=aco.AcoConfig)
    metric: QualityMetric = field(default_factory=QualityMetric)
    membership_quantile: float = 0.9
    max_labels: int = 10
    turnoff: bool = False  # show only points that belong to the subspace
    small_view_size: float = 0.12
    seed: int = 0


# set_config wire keys -> (target object name, attribute, caster)
_CONFIG_KEYS = {
    "chase_k_a": ("chase", "k_a", float),
    "chase_k_d": ("chase", "k_d", float),
    "chase_max_affected": ("chase", "max_affected", int),
    "aco_levels": ("aco", "levels", int),
    "aco_ants": ("aco", "ants", int),
    "aco_generations": ("aco", "generations", int),
    "aco_evaporation": ("aco", "evaporation", float),
    "aco_init_boost": ("aco", "init_boost", float),
    "aco_elite": ("aco", "elite", int),
    "aco_seed": ("aco", "seed", int),
    "metric_kind": ("metric", "kind", str),
    "metric_grid_size": ("metric", "grid_size", int),
    "metric_sample_size": ("metric", "sample_size", int),
    "metric_seed": ("metric", "seed", int),
    "membership_quantile": (None, "membership_quantile", float),
    "max_labels": (None, "max_labels", int),
    "turnoff": (None, "turnoff", bool),
    "small_view_size": (None, "small_view_size", float),
    "seed": (None, "seed", int),
}


class Session:
    def __init__(self, dataset=None, config=None):
        self.config = config or SessionConfig()
        self.dataset = None
        self.tags = None
        self.state = None
        self.views = {}
        self.next_view_id = 1
        self.paths = []
        self.current_path = None
        self.path_cursor = 0
        self.dragging = False
        self.optimizing = False
        if dataset is not None:
            self.load_dataset(dataset)

    # ------------------------------------------------------------------ data

    def load_dataset(self, dataset):
        self.dataset = dataset
        self.tags = PointTags.neutral(dataset.n_points)
        self.views = {}
        self.paths = []
        self.current_path = None
        self.next_view_id = 1
        self.reset_view()

    def reset_view(self):
        """Initial basis: the global top-3 principal components."""
        result = pca(self.active_points(), 3)
        basis = make_basis(
            result.components[0],
            result.components[1],
            z_source=result.components[2],
            origin=np.zeros(self.dataset.n_dims),
        )
        self.state = fresh_state(basis)

    def active_indices(self):
        return np.flatnonzero(self.tags.active)

    def active_points(self):
        return self.dataset.normalized[self.tags.active]

    def active_labels(self):
        """Class ids used for metric scoring, restricted to active points.

        The dataset's class column wins; otherwise brushed colors serve as
        classes once the user has painted any point.
        """
        if self.dataset.class_ids is not None:
            return self.dataset.class_ids[self.tags.active]
        colors = self.tags.color[self.tags.active]
        if np.any(colors != 0):
            return colors
        return None

    # ---------------------------------------------------------------- frames

    def frame(self):
        ds = self.dataset
        cloud = project(self.state, ds.normalized)
        member = np.zeros(ds.n_points, dtype=bool)
        active = self.tags.active
        if active.any():
            member[active] = membership(
                self.state.basis,
                ds.normalized[active],
                self.config.membership_quantile,
            )
        placements = labels_mod.base_angles(self.state.baked_axes())
        if not self.dragging:
            placements = labels_mod.resolve_overlaps(
                placements, max_labels=self.config.max_labels
            )
        else:
            strongest = sorted(placements, key=lambda p: (-p.strength, p.dim))
            keep = {p.dim for p in strongest[: self.config.max_labels]}
            for p in placements:
                p.visible = p.visible and p.dim in keep

        frame = {
            "points": {
                "id": cloud.point_ids.tolist(),
                "x": cloud.xy[:, 0].tolist(),
                "y": cloud.xy[:, 1].tolist(),
                "z": cloud.z.tolist(),
                "color": self.tags.color.tolist(),
                "active": self.tags.active.tolist(),
                "member": member.tolist(),
            },
            "labels": [
                {
                    "dim": p.dim,
                    "text": ds.attributes[p.dim],
                    "angle": p.angle,
                    "display_angle": p.display_angle,
                    "strength": p.strength,
                    "font_pt": p.font_pt,
                    "opacity": p.opacity,
                    "visible": p.visible,
                }
                for p in placements
            ],
            "zoom": self.state.zoom,
            "turnoff": self.config.turnoff,
            "stm": self.stm_layout(),
            "status": {"optimizing": self.optimizing},
        }
        return frame

    def stm_layout(self):
        if not self.views:
            return None
        layout = trailmap.layout(self.views.values(), paths=self.paths)
        return {
            "positions": {str(k): [v[0], v[1]] for k, v in layout.positions.items()},
            "labels": [
                {
                    "dim": dim,
                    "text": self.dataset.attributes[dim],
                    "x": pos[0],
                    "y": pos[1],
                    "weight": weight,
                }
                for dim, pos, weight in layout.label_placements
            ],
            "paths": layout.paths,
            "names": {str(v.view_id): v.name for v in self.views.values()},
            "thumb_size": self.config.small_view_size,
        }

    # ------------------------------------------------------------- gestures

    def drag(self, button, from_xy, to_xy, pinned_dim=None):
        ev = DragEvent(
            from_xy=tuple(from_xy), to_xy=tuple(to_xy),
            button=button, pinned_dim=pinned_dim,
        )
        self.dragging = True
        if button == "left":
            self.state = rotate(self.state, drag_to_rotation(ev))
        elif button == "right":
            try:
                self.state = chase(self.state, ev, self.config.chase)
            except NoAffectedDims:
                pass  # nothing within reach: the gesture is a no-op
        elif button == "middle":
            self.deep(float(to_xy[1]) - float(from_xy[1]))
        else:
            raise ValueError(f"unknown button {button!r}")

    def release(self):
        self.dragging = False

    def deep(self, amount):
        self.dragging = True
        self.state = deep_adjust(self.state, float(amount))

    def align(self, dim, target_dir, step=0.25):
        self.dragging = True
        self.state = align_attribute(self.state, int(dim), target_dir, step,
                                     self.config.chase)

    def equal_express(self, dims):
        self.dragging = False
        self.state = equal_express(self.state, dims)

    def set_zoom(self, zoom):
        if zoom <= 0:
            raise ValueError("zoom must be positive")
        self.state.zoom = float(zoom)

    # ------------------------------------------------------------ analytics

    def optimize(self, scope="narrow", metric_kind=None, on_generation=None):
        metric = self.config.metric
        if metric_kind is not None:
            metric = QualityMetric(
                kind=metric_kind,
                grid_size=metric.grid_size,
                sample_size=metric.sample_size,
                seed=metric.seed,
            )
        self.optimizing = True
        try:
            new_state, result = aco.optimize_state(
                self.state,
                self.active_points(),
                self.active_labels(),
                metric,
                self.config.aco,
                scope=scope,
                on_generation=on_generation,
            )
        finally:
            self.optimizing = False
        self.dragging = False
        self.state = new_state
        return result

    def cluster_subspaces(self, k):
        clusters = kmeans_subspaces(
            self.active_points(), k, self.config.seed,
            point_ids=self.active_indices(),
        )
        for cluster in clusters:
            self.tags.color[cluster.member_ids] = cluster.color_tag
        return clusters

    def brush_points(self, ids, action, color=None):
        self.dragging = False
        self.tags = brush(self.tags, ids, action, color=color)

    # ----------------------------------------------------------- trail map

    def save_view(self, name=None):
        view_id = self.next_view_id
        self.next_view_id += 1
        cloud = project(self.state, self.dataset.normalized)
        view = trailmap.SavedView(
            view_id=view_id,
            basis=self.state.basis.copy(),
            rotation=self.state.rotation.copy(),
            zoom=self.state.zoom,
            name=name or f"view {view_id}",
            thumbnail_xy=cloud.xy.copy(),
            thumbnail_colors=self.tags.color.copy(),
        )
        self.views[view_id] = view
        return view

    def restore_view(self, view_id):
        view = self._view(view_id)
        self.state = view.to_state()
        self.dragging = False

    def _view(self, view_id):
        try:
            return self.views[int(view_id)]
        except KeyError:
            raise HyperballError(f"no view with id {view_id}")

    def build_path(self, view_ids):
        ids = [int(v) for v in view_ids]
        if len(ids) < 2:
            raise PathTooShort("a path needs at least two views")
        for v in ids:
            self._view(v)
        self.current_path = ids
        self.paths.append(ids)
        self.path_cursor = 0
        return ids

    def _path_views(self):
        if not self.current_path:
            raise PathTooShort("no path built")
        return [self._view(v) for v in self.current_path]

    def path_t(self, t):
        self.dragging = False
        self.state = trailmap.path_state(self._path_views(), float(t))

    def path_next(self, frames=trailmap.SEGMENT_FRAMES):
        """Advance to the next keyframe; returns the intermediate states."""
        views = self._path_views()
        states = trailmap.step_path(views, self.path_cursor, frames=frames)
        self.path_cursor = (self.path_cursor + 1) % (len(views) - 1)
        self.dragging = False
        self.state = states[-1]
        return states

    # -------------------------------------------------------------- config

    def set_config(self, updates):
        for key, value in updates.items():
            if key not in _CONFIG_KEYS:
                raise HyperballError(f"unknown config key {key!r}")
            target_name, attr, caster = _CONFIG_KEYS[key]
            value = caster(value)
            if key == "metric_kind" and value not in KINDS:
                raise HyperballError(f"unknown metric kind {value!r}")
            target = self.config if target_name is None else getattr(self.config, target_name)
            setattr(target, attr, value)

    # -------------------------------------------------------- persistence

    def to_dict(self):
        ds = self.dataset
        return {
            "version": SESSION_FILE_VERSION,
            "dataset": None
            if ds is None
            else {
                "name": ds.name,
                "attributes": list(ds.attributes),
                "raw": ds.raw.tolist(),
                "class_ids": None if ds.class_ids is None else ds.class_ids.tolist(),
                "class_names": ds.class_names,
            },
            "tags": None
            if self.tags is None
            else {"color": self.tags.color.tolist(), "active": self.tags.active.tolist()},
            "state": _state_to_dict(self.state),
            "views": [_view_to_dict(v) for v in self.views.values()],
            "paths": [list(p) for p in self.paths],
            "current_path": self.current_path,
            "path_cursor": self.path_cursor,
            "next_view_id": self.next_view_id,
            "dragging": self.dragging,
            "config": {
                "chase": asdict(self.config.chase),
                "aco": asdict(self.config.aco),
                "metric": asdict(self.config.metric),
                "membership_quantile": self.config.membership_quantile,
                "max_labels": self.config.max_labels,
                "turnoff": self.config.turnoff,
                "small_view_size": self.config.small_view_size,
                "seed": self.config.seed,
            },
        }

    def save_session(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh)

    @classmethod
    def from_dict(cls, data):
        if data.get("version") != SESSION_FILE_VERSION:
            raise DatasetError(f"unsupported session version {data.get('version')!r}")
        cfg = data["config"]
        config = SessionConfig(
            chase=ChaseConfig(**cfg["chase"]),
            aco=aco.AcoConfig(**cfg["aco"]),
            metric=QualityMetric(**cfg["metric"]),
            membership_quantile=cfg["membership_quantile"],
            max_labels=cfg["max_labels"],
            turnoff=cfg["turnoff"],
            small_view_size=cfg["small_view_size"],
            seed=cfg["seed"],
        )
        session = cls(config=config)
        if data["dataset"] is not None:
            d = data["dataset"]
            session.dataset = make_dataset(
                d["name"],
                d["attributes"],
                np.array(d["raw"], dtype=float),
                None if d["class_ids"] is None else np.array(d["class_ids"], dtype=int),
                d["class_names"],
            )
        if data["tags"] is not None:
            session.tags = PointTags(
                color=np.array(data["tags"]["color"], dtype=int),
                active=np.array(data["tags"]["active"], dtype=bool),
            )
        session.state = _state_from_dict(data["state"])
        session.views = {}
        for v in data["views"]:
            view = _view_from_dict(v)
            session.views[view.view_id] = view
        session.paths = [list(p) for p in data["paths"]]
        session.current_path = data["current_path"]
        session.path_cursor = data["path_cursor"]
        session.next_view_id = data["next_view_id"]
        session.dragging = data.get("dragging", False)
        return session

    @classmethod
    def load_session(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def _state_to_dict(state):
    if state is None:
        return None
    return {
        "axes": state.basis.axes.tolist(),
        "origin": state.basis.origin.tolist(),
        "rotation": state.rotation.tolist(),
        "zoom": state.zoom,
        "deep_seed": None if state.deep_seed is None else state.deep_seed.tolist(),
        "deep_power": state.deep_power,
    }


def _state_from_dict(data):
    if data is None:
        return None
    basis = ProjectionBasis(
        np.array(data["axes"], dtype=float), np.array(data["origin"], dtype=float)
    )
    return TrackballState(
        basis=basis,
        rotation=np.array(data["rotation"], dtype=float),
        zoom=data["zoom"],
        deep_seed=None
        if data["deep_seed"] is None
        else np.array(data["deep_seed"], dtype=float),
        deep_power=data["deep_power"],
    )


def _view_to_dict(view):
    return {
        "view_id": view.view_id,
        "axes": view.basis.axes.tolist(),
        "origin": view.basis.origin.tolist(),
        "rotation": view.rotation.tolist(),
        "zoom": view.zoom,
        "name": view.name,
        "thumbnail_xy": None if view.thumbnail_xy is None else view.thumbnail_xy.tolist(),
        "thumbnail_colors": None
        if view.thumbnail_colors is None
        else view.thumbnail_colors.tolist(),
        "created_at": view.created_at,
    }


def _view_from_dict(data):
    return trailmap.SavedView(
        view_id=data["view_id"],
        basis=ProjectionBasis(
            np.array(data["axes"], dtype=float), np.array(data["origin"], dtype=float)
        ),
        rotation=np.array(data["rotation"], dtype=float),
        zoom=data["zoom"],
        name=data["name"],
        thumbnail_xy=None
        if data["thumbnail_xy"] is None
        else np.array(data["thumbnail_xy"], dtype=float),
        thumbnail_colors=None
        if data["thumbnail_colors"] is None
        else np.array(data["thumbnail_colors"], dtype=int),
        created_at=data["created_at"],
    )
