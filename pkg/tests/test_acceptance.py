"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines and timings.
"""

import itertools
import json
import time

import numpy as np
import numpy.testing as npt
import pytest

from hyperball.aco import AcoConfig, _build_candidate, optimize_state, run
from hyperball.core_math import (
    axis_angle_rotation,
    pca,
    principal_angles,
    random_orthonormal,
)
from hyperball.dataset import make_dataset
from hyperball.errors import NoAffectedDims
from hyperball.fixtures import gen_three_clusters, gen_tube_stick
from hyperball.labels import (
    LabelPlacement,
    gamma_from_angle,
    required_spacing,
    resolve_overlaps,
)
from hyperball.metrics import MetricContext, QualityMetric
from hyperball.navigation import ChaseConfig, DragEvent, chase
from hyperball.projection import (
    ProjectionBasis,
    bake_rotation,
    deep_adjust,
    equal_express,
    fresh_state,
    rotate,
)
from hyperball.session import Session
from hyperball.subspaces import kmeans_subspaces
from hyperball.trailmap import SavedView, interpolate, layout, view_weight_vector


def report(number, name, passed, detail=""):
    status = "PASS" if passed else "FAIL"
    print(f"ACCEPTANCE {number:2d} {status} {name} {detail}".rstrip())
    assert passed, f"criterion {number} ({name}) failed: {detail}"


def random_basis(n_dims, rng):
    return ProjectionBasis(random_orthonormal(n_dims, 3, rng), np.zeros(n_dims))


def test_01_orthonormality_fuzz():
    started = time.perf_counter()
    rng = np.random.default_rng(1)
    cfg = ChaseConfig()
    worst = 0.0
    failures = 0
    for _ in range(10_000):
        state = fresh_state(random_basis(10, rng))
        for _ in range(6):
            op = rng.integers(5)
            if op == 0:
                axis = rng.standard_normal(3)
                state = rotate(state, axis_angle_rotation(axis, rng.uniform(-2, 2)))
            elif op == 1:
                state = bake_rotation(state)
            elif op == 2:
                ev = DragEvent(
                    from_xy=tuple(rng.uniform(-0.9, 0.9, 2)),
                    to_xy=tuple(rng.uniform(-0.9, 0.9, 2)),
                    button="right",
                    pinned_dim=int(rng.integers(10)) if rng.random() < 0.3 else None,
                )
                try:
                    state = chase(state, ev, cfg)
                except NoAffectedDims:
                    pass
            elif op == 3:
                state = deep_adjust(state, float(rng.uniform(-1.5, 1.5)))
            else:
                dims = rng.choice(10, size=int(rng.integers(2, 11)), replace=False)
                state = equal_express(state, dims)
        baked = bake_rotation(state)
        err = baked.basis.orthonormality_error()
        worst = max(worst, err)
        if err > 1e-6:
            failures += 1
    elapsed = time.perf_counter() - started
    report(
        1,
        "orthonormality fuzz",
        failures == 0 and elapsed < 60.0,
        f"(worst {worst:.2e}, {elapsed:.1f}s)",
    )


def test_02_rotation_isometry():
    rng = np.random.default_rng(2)
    state = fresh_state(random_basis(12, rng))
    pts = rng.standard_normal((1000, 12))
    from hyperball.projection import project

    base = project(state, pts)
    coords0 = np.column_stack([base.xy, base.z])
    d0 = np.linalg.norm(coords0[:, None] - coords0[None, :], axis=2)
    worst = 0.0
    for _ in range(10):
        delta = axis_angle_rotation(rng.standard_normal(3), rng.uniform(-3, 3))
        spun = rotate(state, delta)
        cloud = project(spun, pts)
        coords = np.column_stack([cloud.xy, cloud.z])
        d1 = np.linalg.norm(coords[:, None] - coords[None, :], axis=2)
        worst = max(worst, float(np.max(np.abs(d1 - d0))))
    report(2, "rotation isometry", worst <= 1e-9, f"(worst {worst:.2e})")


def test_03_aco_vs_exhaustive_oracle():
    started = time.perf_counter()
    rng = np.random.default_rng(3)
    t = rng.uniform(0, 2 * np.pi, 150)
    data = np.column_stack([np.cos(t), 0.4 * np.sin(t)]) + rng.normal(0, 0.05, (150, 2))
    metric = QualityMetric(kind="holes")
    ctx = MetricContext(metric)
    centered = data - data.mean(axis=0)
    levels = np.linspace(-1, 1, 5)
    oracle = -np.inf
    combos = 0
    for combo in itertools.product(range(5), repeat=4):
        combos += 1
        cand = _build_candidate(levels[list(combo)], 2)
        if cand is None:
            continue
        oracle = max(oracle, ctx.score_xy(centered @ np.column_stack(cand)))
    assert combos == 625
    initial = (np.array([1.0, 0.0]), np.array([0.0, 1.0]))
    wins = 0
    for seed in range(100):
        result = run(data, None, metric, initial, AcoConfig(levels=5, seed=seed))
        if result.score >= 0.95 * oracle:
            wins += 1
    elapsed = time.perf_counter() - started
    report(
        3,
        "ACO vs exhaustive oracle",
        wins >= 90 and elapsed < 5.0,
        f"(wins {wins}/100, oracle {oracle:.4f}, {elapsed:.1f}s)",
    )


def balanced_nn_accuracy(xy, labels):
    """Leave-one-out 1-NN accuracy averaged over the two classes."""
    d = ((xy[:, None, :] - xy[None, :, :]) ** 2).sum(axis=2)
    np.fill_diagonal(d, np.inf)
    nn = labels[d.argmin(axis=1)]
    per_class = [np.mean(nn[labels == c] == c) for c in np.unique(labels)]
    return float(np.mean(per_class))


def test_04_tube_and_stick_recovery():
    started = time.perf_counter()
    ds = gen_tube_stick(900, 100, embed_dims=6, seed=0)
    points = ds.normalized
    labels = ds.class_ids
    axis_best = max(
        balanced_nn_accuracy(points[:, [i, j]], labels)
        for i in range(6)
        for j in range(i + 1, 6)
    )
    start = pca(points, 3)
    result = run(
        points,
        None,
        QualityMetric(kind="holes"),
        (start.components[0], start.components[1]),
        AcoConfig(seed=0),
    )
    xy = (points - points.mean(axis=0)) @ np.column_stack([result.ppa_x, result.ppa_y])
    optimized = balanced_nn_accuracy(xy, labels)
    elapsed = time.perf_counter() - started
    report(
        4,
        "tube-and-stick recovery",
        optimized >= 0.95 and axis_best < 0.80 and elapsed < 30.0,
        f"(optimized {optimized:.3f}, best axis pair {axis_best:.3f}, {elapsed:.1f}s)",
    )


def test_05_three_cluster_workflow():
    ds = gen_three_clusters(300, 10, seed=0)
    points = ds.normalized
    clusters = kmeans_subspaces(points, 3, seed=0)
    km_labels = np.empty(ds.n_points, dtype=int)
    for cluster in clusters:
        km_labels[cluster.member_ids] = cluster.color_tag - 1
    ari = adjusted_rand(km_labels, ds.class_ids)
    metric = QualityMetric(kind="distance_consistency")
    ctx = MetricContext(metric, labels=km_labels)
    centered = points - points.mean(axis=0)
    improvements = []
    optimized_scores = []
    for cluster in clusters:
        state = fresh_state(cluster.basis)
        raw_score = ctx.score_xy(centered @ cluster.basis.axes[:2].T)
        _, result = optimize_state(
            state, points, km_labels, metric, AcoConfig(seed=0), scope="narrow"
        )
        improvements.append(result.score > raw_score)
        optimized_scores.append(result.score)
    report(
        5,
        "three-cluster workflow",
        ari >= 0.9 and all(improvements) and min(optimized_scores) >= 0.9,
        f"(ARI {ari:.3f}, optimized DC {['%.3f' % s for s in optimized_scores]})",
    )


def test_06_label_spacing():
    exact = (
        required_spacing(0.0) == 24.0
        and required_spacing(45.0) == 4.0
        and required_spacing(60.0) == 4.0
        and required_spacing(90.0) == 4.0
    )
    rng = np.random.default_rng(6)
    all_gaps_ok = True
    for _ in range(100):
        n = int(rng.integers(2, 30))
        placements = [
            LabelPlacement(
                dim=i,
                angle=float(rng.uniform(0, 360)),
                strength=float(rng.uniform(0.05, 1)),
                display_angle=0.0,
                visible=True,
            )
            for i in range(n)
        ]
        for p in placements:
            p.display_angle = p.angle
        out = resolve_overlaps(placements, max_labels=10)
        visible = sorted((p for p in out if p.visible), key=lambda p: p.display_angle)
        if len(visible) < 2:
            continue
        for prev, cur in zip(visible, visible[1:] + visible[:1]):
            gap = (cur.display_angle - prev.display_angle) % 360.0
            need = required_spacing(gamma_from_angle(cur.display_angle))
            if gap < need - 1e-9:
                all_gaps_ok = False
    report(6, "label spacing", exact and all_gaps_ok)


def test_07_interpolation_endpoints():
    rng = np.random.default_rng(7)
    worst_end = 0.0
    worst_orth = 0.0
    exact_start = True
    for pair in range(200):
        a = SavedView(
            view_id=0, basis=random_basis(12, rng),
            rotation=axis_angle_rotation(rng.standard_normal(3), rng.uniform(-2, 2)),
            zoom=1.0,
        )
        b = SavedView(
            view_id=1, basis=random_basis(12, rng),
            rotation=axis_angle_rotation(rng.standard_normal(3), rng.uniform(-2, 2)),
            zoom=1.0,
        )
        state0 = interpolate(a, b, 0.0)
        if not np.array_equal(state0.basis.axes, a.baked_axes()):
            exact_start = False
        state1 = interpolate(a, b, 1.0)
        worst_end = max(
            worst_end,
            float(np.max(principal_angles(state1.basis.axes[:2], b.baked_axes()[:2]))),
        )
        for t in np.arange(0.0, 1.0001, 0.01):
            state = interpolate(a, b, float(min(t, 1.0)))
            worst_orth = max(worst_orth, state.basis.orthonormality_error())
    report(
        7,
        "interpolation endpoints",
        exact_start and worst_end <= 1e-8 and worst_orth <= 1e-8,
        f"(end angle {worst_end:.2e}, orth {worst_orth:.2e})",
    )


def test_08_trail_map_invariance():
    rng = np.random.default_rng(8)
    worst = 0.0
    for _ in range(100):
        basis = random_basis(9, rng)
        view = SavedView(view_id=0, basis=basis, rotation=np.eye(3), zoom=1.0)
        base = view_weight_vector(view)
        spun = SavedView(
            view_id=0,
            basis=basis,
            rotation=axis_angle_rotation(rng.standard_normal(3), rng.uniform(-3, 3)),
            zoom=1.0,
        )
        worst = max(worst, float(np.max(np.abs(view_weight_vector(spun) - base))))
    a = SavedView(view_id=1, basis=random_basis(7, rng), rotation=np.eye(3), zoom=1.0)
    twin = SavedView(view_id=2, basis=a.basis.copy(), rotation=np.eye(3), zoom=1.0)
    other = SavedView(view_id=3, basis=random_basis(7, rng), rotation=np.eye(3), zoom=1.0)
    out = layout([a, twin, other])
    identical = out.positions[1] == out.positions[2]
    report(8, "trail map invariance", worst <= 1e-9 and identical, f"(worst {worst:.2e})")


def test_09_correlated_attribute_labels():
    from hyperball.labels import base_angles
    from hyperball.projection import make_basis

    gaps = {}
    for r in (0.99, -0.99):
        rng = np.random.default_rng(9)
        n = 2000
        z = rng.standard_normal(n)
        a0 = z
        a1 = r * z + np.sqrt(1 - r * r) * rng.standard_normal(n)
        rest = rng.standard_normal((n, 8)) * 0.4
        raw = np.column_stack([3 * a0, 3 * a1, rest])
        ds = make_dataset("corr", [f"a{i}" for i in range(10)], raw)
        result = pca(ds.normalized, 3)
        basis = make_basis(
            result.components[0], result.components[1], z_source=result.components[2]
        )
        placements = base_angles(fresh_state(basis).baked_axes())
        gap = abs(placements[0].angle - placements[1].angle) % 360.0
        gaps[r] = min(gap, 360.0 - gap)
    passed = gaps[0.99] <= 5.0 and abs(gaps[-0.99] - 180.0) <= 5.0
    report(
        9,
        "correlated attribute labels",
        passed,
        f"(r=+0.99 gap {gaps[0.99]:.2f} deg, r=-0.99 gap {gaps[-0.99]:.2f} deg)",
    )


def test_10_session_round_trip(tmp_path):
    rng = np.random.default_rng(10)
    all_exact = True
    for case in range(50):
        n, dims = int(rng.integers(20, 50)), int(rng.integers(4, 8))
        raw = rng.standard_normal((n, dims)) * rng.uniform(0.5, 3.0, dims)
        class_ids = rng.integers(0, 3, n) if rng.random() < 0.5 else None
        ds = make_dataset(
            f"case{case}",
            [f"v{i}" for i in range(dims)],
            raw,
            class_ids,
            ["a", "b", "c"] if class_ids is not None else None,
        )
        session = Session(dataset=ds)
        for _ in range(int(rng.integers(1, 6))):
            op = rng.integers(5)
            if op == 0:
                session.drag("left", tuple(rng.uniform(-0.8, 0.8, 2)), tuple(rng.uniform(-0.8, 0.8, 2)))
            elif op == 1:
                session.drag("right", tuple(rng.uniform(-0.5, 0.5, 2)), tuple(rng.uniform(-0.5, 0.5, 2)))
            elif op == 2:
                session.deep(float(rng.uniform(-1, 1)))
            elif op == 3:
                session.save_view(f"v{case}")
            else:
                session.brush_points(
                    rng.choice(n, size=max(1, n // 5), replace=False),
                    "color",
                    color=int(rng.integers(1, 6)),
                )
        first = tmp_path / f"s{case}.json"
        second = tmp_path / f"s{case}b.json"
        session.save_session(str(first))
        loaded = Session.load_session(str(first))
        loaded.save_session(str(second))
        if first.read_bytes() != second.read_bytes():
            all_exact = False
        if not np.array_equal(loaded.state.basis.axes, session.state.basis.axes):
            all_exact = False
        if json.dumps(loaded.frame()) != json.dumps(session.frame()):
            all_exact = False
    report(10, "session round-trip", all_exact)


def adjusted_rand(a, b):
    from math import comb

    ca, cb = np.unique(a), np.unique(b)
    table = np.array([[np.sum((a == x) & (b == y)) for y in cb] for x in ca])
    s_ij = sum(comb(int(v), 2) for v in table.flat)
    s_a = sum(comb(int(v), 2) for v in table.sum(axis=1))
    s_b = sum(comb(int(v), 2) for v in table.sum(axis=0))
    n = comb(len(a), 2)
    expected = s_a * s_b / n
    return (s_ij - expected) / ((s_a + s_b) / 2 - expected)
