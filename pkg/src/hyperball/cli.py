"""Headless command line: optimize, cluster, project, gen, serve."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import server
from .aco import AcoConfig, export_trace, optimize_state
from .core_math import pca
from .dataset import load_csv, write_csv
from .errors import HyperballError
from .fixtures import gen_three_clusters, gen_tube_stick
from .metrics import KINDS, QualityMetric
from .projection import ProjectionBasis, fresh_state, make_basis, project
from .subspaces import kmeans_subspaces


def _basis_to_dict(basis):
    return {"axes": basis.axes.tolist(), "origin": basis.origin.tolist()}


def _basis_from_file(path):
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    return ProjectionBasis(
        np.array(data["axes"], dtype=float), np.array(data["origin"], dtype=float)
    )


def _initial_state(dataset):
    result = pca(dataset.normalized, 3)
    basis = make_basis(
        result.components[0], result.components[1], z_source=result.components[2],
        origin=np.zeros(dataset.n_dims),
    )
    return fresh_state(basis)


def cmd_optimize(args):
    dataset = load_csv(args.data, class_column=args.class_column)
    metric = QualityMetric(kind=args.metric, sample_size=args.sample_size,
                           grid_size=args.grid_size, seed=args.seed)
    cfg = AcoConfig(levels=args.levels, ants=args.ants, generations=args.generations,
                    evaporation=args.evaporation, init_boost=args.init_boost,
                    elite=args.elite, seed=args.seed)
    labels = dataset.class_ids
    state = _initial_state(dataset)
    new_state, result = optimize_state(
        state, dataset.normalized, labels, metric, cfg, scope=args.scope
    )
    print(f"score {result.score!r}")
    if args.out_basis:
        with open(args.out_basis, "w", encoding="utf-8") as fh:
            json.dump(_basis_to_dict(new_state.basis), fh)
    if args.out_trace:
        export_trace(result.trace, args.out_trace)
    if args.out_score:
        with open(args.out_score, "w", encoding="utf-8") as fh:
            fh.write(f"{result.score!r}\n")
    return 0


def cmd_cluster(args):
    dataset = load_csv(args.data, class_column=args.class_column)
    clusters = kmeans_subspaces(dataset.normalized, args.k, args.seed)
    assignments = np.zeros(dataset.n_points, dtype=int)
    for c in clusters:
        assignments[c.member_ids] = c.color_tag
    if args.out_assignments:
        with open(args.out_assignments, "w", encoding="utf-8") as fh:
            fh.write("point_id,cluster\n")
            for i, a in enumerate(assignments):
                fh.write(f"{i},{a}\n")
    if args.out_bases:
        payload = [
            {
                "color_tag": c.color_tag,
                "size": int(len(c.member_ids)),
                "centroid": c.centroid.tolist(),
                **_basis_to_dict(c.basis),
            }
            for c in clusters
        ]
        with open(args.out_bases, "w", encoding="utf-8") as fh:
            json.dump(payload, fh)
    for c in clusters:
        print(f"cluster {c.color_tag}: {len(c.member_ids)} points")
    return 0


def cmd_project(args):
    dataset = load_csv(args.data, class_column=args.class_column)
    basis = _basis_from_file(args.basis)
    cloud = project(fresh_state(basis), dataset.normalized)
    out = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        out.write("x,y,z\n")
        for (x, y), z in zip(cloud.xy, cloud.z):
            out.write(f"{float(x)!r},{float(y)!r},{float(z)!r}\n")
    finally:
        if args.out:
            out.close()
    return 0


def cmd_gen(args):
    if args.fixture == "tube-stick":
        dataset = gen_tube_stick(
            n_tube=args.n_tube, n_stick=args.n_stick,
            embed_dims=args.dims, seed=args.seed,
        )
    else:
        dataset = gen_three_clusters(n_per=args.n_per, n_dims=args.dims, seed=args.seed)
    write_csv(dataset, args.out)
    print(f"wrote {dataset.n_points} x {dataset.n_dims} to {args.out}")
    return 0


def cmd_serve(args):
    srv = server.Server(port=args.port)
    print(f"serving on port {srv.server_address[1]}", flush=True)
    try:
        srv.serve_forever()
    finally:
        srv.server_close()
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="hyperball")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("optimize", help="projection pursuit over a CSV")
    p.add_argument("--data", required=True)
    p.add_argument("--class-column", default=None)
    p.add_argument("--metric", default="holes", choices=sorted(KINDS))
    p.add_argument("--scope", default="global",
                   choices=["global", "narrow", "expanded", "within_view"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--levels", type=int, default=21)
    p.add_argument("--ants", type=int, default=24)
    p.add_argument("--generations", type=int, default=60)
    p.add_argument("--evaporation", type=float, default=0.1)
    p.add_argument("--init-boost", type=float, default=5.0)
    p.add_argument("--elite", type=int, default=4)
    p.add_argument("--sample-size", type=int, default=20000)
    p.add_argument("--grid-size", type=int, default=16)
    p.add_argument("--out-basis", default=None)
    p.add_argument("--out-trace", default=None)
    p.add_argument("--out-score", default=None)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("cluster", help="k-means subspace clustering")
    p.add_argument("--data", required=True)
    p.add_argument("--class-column", default=None)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-assignments", default=None)
    p.add_argument("--out-bases", default=None)
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("project", help="project a CSV through a stored basis")
    p.add_argument("--data", required=True)
    p.add_argument("--class-column", default=None)
    p.add_argument("--basis", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("gen", help="generate a synthetic fixture")
    p.add_argument("fixture", choices=["tube-stick", "three-clusters"])
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dims", type=int, default=6)
    p.add_argument("--n-tube", type=int, default=900)
    p.add_argument("--n-stick", type=int, default=100)
    p.add_argument("--n-per", type=int, default=300)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("serve", help="run the session service")
    p.add_argument("--port", type=int, default=server.default_port())
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except HyperballError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
