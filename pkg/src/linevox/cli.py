"""Command-line surface: build, render, stats, bench."""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

import numpy as np

from . import view as view_mod
from .errors import BadCameraFlags, LinevoxError
from .render import (
    COLOR_DIRECTION,
    COLOR_UNIFORM,
    RenderSettings,
    image_mae,
    render,
    write_ppm,
)
from .grid import VoxelScene, build_scene, voxel_center
from .orders import MODE_AXIS, MODE_DATASET, MODE_RANDOM, precompute_orders
from .scene_io import load_scene, save_scene
from .tck import parse_tck
from .view import Camera, Orthographic, Perspective

DEFAULT_VOXEL_SIZE = 10.0


def _parse_triple(text: str, flag: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise BadCameraFlags(f"{flag} wants 'x,y,z', got {text!r}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise BadCameraFlags(f"{flag} has a non-numeric component: {text!r}") from None


def _parse_size(text: str) -> tuple[int, int]:
    try:
        w_s, h_s = text.lower().split("x")
        w, h = int(w_s), int(h_s)
    except ValueError:
        raise BadCameraFlags(f"--size wants 'WxH', got {text!r}") from None
    if w < 1 or h < 1:
        raise BadCameraFlags(f"--size must be positive, got {text!r}")
    return w, h


def _parse_orders(text: str) -> tuple[str, int]:
    if text == MODE_DATASET:
        return MODE_DATASET, 0
    if text == MODE_AXIS:
        return MODE_AXIS, 0
    if text.startswith("random:"):
        try:
            k = int(text.split(":", 1)[1])
        except ValueError:
            k = 0
        if k < 1:
            raise argparse.ArgumentTypeError(f"bad random order count in {text!r}")
        return MODE_RANDOM, k
    raise argparse.ArgumentTypeError(
        f"--orders must be dataset, axis, or random:K (got {text!r})"
    )


def scene_bounds(scene: VoxelScene) -> tuple[np.ndarray, np.ndarray]:
    """Axis-aligned bounds of the occupied voxels, in world units."""
    coords = np.array(list(scene.voxels.keys()), dtype=np.float64)
    lo = scene.params.b_min + coords.min(axis=0) * scene.params.voxel_size
    hi = scene.params.b_min + (coords.max(axis=0) + 1.0) * scene.params.voxel_size
    return lo, hi


def _camera_from_args(args, scene: VoxelScene, width: int, height: int) -> Camera:
    lo, hi = scene_bounds(scene)
    center = 0.5 * (lo + hi)
    extent = float(max(np.max(hi - lo), 1e-6))

    target = _parse_triple(args.target, "--target") if args.target else tuple(center)
    if args.eye:
        eye = _parse_triple(args.eye, "--eye")
    else:
        eye = (target[0], target[1], target[2] + 2.5 * extent)
    up = _parse_triple(args.up, "--up") if args.up else (0.0, 1.0, 0.0)

    if args.near <= 0:
        raise BadCameraFlags(f"--near must be positive, got {args.near}")
    aspect = width / height
    if args.projection == "orthographic":
        half_height = args.half_height
        if half_height is None:
            half_height = 0.6 * extent
        if half_height <= 0:
            raise BadCameraFlags(f"--half-height must be positive, got {half_height}")
        proj = Orthographic(half_height, aspect, args.near)
    else:
        if not 0.0 < args.fov_deg < 180.0:
            raise BadCameraFlags(f"--fov-deg must be in (0, 180), got {args.fov_deg}")
        proj = Perspective(math.radians(args.fov_deg), aspect, args.near)
    return Camera(eye, target, up, proj)


def _add_camera_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--eye", help="camera position 'x,y,z' (default: auto-framed)")
    p.add_argument("--target", help="look-at point 'x,y,z' (default: scene center)")
    p.add_argument("--up", help="up hint 'x,y,z' (default: 0,1,0)")
    p.add_argument(
        "--projection", choices=("perspective", "orthographic"), default="perspective"
    )
    p.add_argument("--fov-deg", type=float, default=45.0)
    p.add_argument(
        "--half-height", type=float, default=None, help="orthographic half height"
    )
    p.add_argument("--near", type=float, default=0.1)
    p.add_argument("--size", default="512x512", help="image size WxH")


def _settings_from_args(args, width: int, height: int, opacity=None):
    opacity = args.opacity if opacity is None else opacity
    if not 0.0 < opacity <= 1.0:
        raise BadCameraFlags(f"--opacity must be in (0, 1], got {opacity}")
    color_mode = COLOR_DIRECTION
    rgb = (1.0, 1.0, 1.0)
    if args.color != "direction":
        color_mode = COLOR_UNIFORM
        rgb = _parse_triple(args.color, "--color")
    return RenderSettings(
        opacity=opacity,
        color_mode=color_mode,
        uniform_rgb=rgb,
        width=width,
        height=height,
    )


def _build_scene_from_file(path: str, voxel_size: float, mode: str, k: int, seed: int):
    with open(path, "rb") as fh:
        sset = parse_tck(fh.read())
    scene = build_scene(sset, voxel_size=voxel_size)
    precompute_orders(scene, mode, k=k, seed=seed)
    return sset, scene


def cmd_build(args) -> int:
    mode, k = args.orders
    t0 = time.perf_counter()
    sset, scene = _build_scene_from_file(
        args.input, args.voxel_size, mode, k, args.seed
    )
    n_bytes = save_scene(scene, args.output)
    dt = time.perf_counter() - t0
    stored = {MODE_DATASET: 0, MODE_AXIS: 3}.get(mode, k)
    print(f"streamlines: {sset.n_streamlines}")
    print(f"points: {sset.n_points}")
    print(f"voxels: {len(scene.voxels)}")
    print(f"segments: {scene.n_segments}")
    print(f"orders: {mode} ({stored} stored directions)")
    print(f"build time: {dt:.3f} s")
    print(f"wrote {args.output} ({n_bytes} bytes)")
    return 0


def cmd_render(args) -> int:
    scene = load_scene(args.scene)
    width, height = _parse_size(args.size)
    cam = _camera_from_args(args, scene, width, height)
    if args.mode == "approx":
        order = view_mod.approx_paint_order(scene, cam)
        settings = _settings_from_args(args, width, height)
    elif args.mode == "oracle":
        order = view_mod.exact_paint_order(scene, cam)
        settings = _settings_from_args(args, width, height)
    else:  # opaque
        order = view_mod.exact_paint_order(scene, cam)
        settings = _settings_from_args(args, width, height, opacity=1.0)
    t0 = time.perf_counter()
    img = render(scene, order, cam, settings)
    dt = time.perf_counter() - t0
    with open(args.output, "wb") as fh:
        fh.write(write_ppm(img))
    print(f"rendered {width}x{height} ({args.mode}, {len(order)} segments) in {dt:.3f} s")
    print(f"wrote {args.output}")
    return 0


def _segment_histogram(scene: VoxelScene) -> dict:
    counts = np.array([len(m.segments) for m in scene.voxels.values()], dtype=np.int64)
    if counts.size == 0:
        return {"min": 0, "median": 0.0, "mean": 0.0, "max": 0}
    return {
        "min": int(counts.min()),
        "median": float(np.median(counts)),
        "mean": float(counts.mean()),
        "max": int(counts.max()),
    }


def _make_test_vectors(scene: VoxelScene, cam_template: Camera, n: int, seed: int):
    """Seeded (eye, voxel) probes for cross-language conformance checks.

    Each entry pins the direction select_direction picks and the voxel's
    rank in the back-to-front sort for that eye. Entries come in whole
    per-eye groups so a consumer can re-rank every voxel it sees per eye.
    """
    lo, hi = scene_bounds(scene)
    center = 0.5 * (lo + hi)
    extent = float(max(np.max(hi - lo), 1e-6))
    rng = np.random.default_rng(seed)
    coords_all = scene.voxel_list
    vectors = []
    while len(vectors) < n:
        u = rng.normal(size=3)
        u /= np.linalg.norm(u)
        radius = extent * rng.uniform(1.5, 4.0)
        eye = center + u * radius
        cam = Camera(tuple(eye), tuple(center), projection=cam_template.projection)
        ranked = view_mod.sort_voxels_back_to_front(scene, cam)
        for rank, coord in enumerate(ranked):
            c = voxel_center(coord, scene.params)
            d = view_mod.select_direction(scene.orders[coord], c, cam)
            vectors.append(
                {
                    "eye": [float(v) for v in eye],
                    "voxel": [int(v) for v in coord],
                    "voxel_center": [float(v) for v in c],
                    "expected_direction": [float(v) for v in d],
                    "expected_rank": rank,
                }
            )
        if not coords_all:
            break
    return vectors[:n]


def cmd_stats(args) -> int:
    scene = load_scene(args.scene)
    width, height = _parse_size(args.size)
    cam = _camera_from_args(args, scene, width, height)
    approx = view_mod.approx_paint_order(scene, cam)
    exact = view_mod.exact_paint_order(scene, cam)
    inv_rate = view_mod.pair_inversion_rate(approx, exact, args.samples, seed=args.seed)
    settings = _settings_from_args(args, width, height)
    img_a = render(scene, approx, cam, settings)
    img_e = render(scene, exact, cam, settings)
    mae = image_mae(img_a, img_e)

    report = {
        "voxels": len(scene.voxels),
        "segments": scene.n_segments,
        "segments_per_voxel": _segment_histogram(scene),
        "order_mode": scene.order_mode,
        "k_dirs": {MODE_DATASET: 0, MODE_AXIS: 3}.get(
            scene.order_mode, scene.random_k
        ),
        "camera": {
            "eye": [float(v) for v in cam.eye],
            "target": [float(v) for v in cam.target],
            "projection": type(cam.projection).__name__.lower(),
        },
        "opacity": args.opacity,
        "samples": args.samples,
        "seed": args.seed,
        "inversion_rate": inv_rate,
        "image_mae": mae,
    }
    if args.json:
        payload = dict(report)
        if args.test_vectors:
            payload["test_vectors"] = _make_test_vectors(
                scene, cam, args.test_vectors, args.seed
            )
        json.dump(payload, sys.stdout)
        print()
        return 0
    if args.test_vectors:
        raise BadCameraFlags("--test-vectors requires --json")
    h = report["segments_per_voxel"]
    print(f"voxels: {report['voxels']}")
    print(f"segments: {report['segments']}")
    print(
        "segments/voxel: "
        f"min {h['min']}, median {h['median']:g}, mean {h['mean']:.2f}, max {h['max']}"
    )
    print(f"order mode: {report['order_mode']} (k={report['k_dirs']})")
    print(f"camera eye: {tuple(report['camera']['eye'])}")
    print(f"pair inversion rate (approx vs oracle): {inv_rate:.6f}")
    print(f"image MAE (approx vs oracle, {width}x{height}): {mae:.6e}")
    return 0


def cmd_bench(args) -> int:
    mode, k = args.orders
    width, height = _parse_size(args.size)

    t0 = time.perf_counter()
    with open(args.input, "rb") as fh:
        sset = parse_tck(fh.read())
    t_parse = time.perf_counter() - t0

    t0 = time.perf_counter()
    scene = build_scene(sset, voxel_size=args.voxel_size)
    t_voxelize = time.perf_counter() - t0

    t0 = time.perf_counter()
    precompute_orders(scene, mode, k=k, seed=args.seed)
    t_orders = time.perf_counter() - t0

    cam = _camera_from_args(args, scene, width, height)
    t0 = time.perf_counter()
    order = view_mod.approx_paint_order(scene, cam)
    t_frame = time.perf_counter() - t0

    settings = _settings_from_args(args, width, height)
    t0 = time.perf_counter()
    render(scene, order, cam, settings)
    t_render = time.perf_counter() - t0

    total = t_parse + t_voxelize + t_orders + t_frame + t_render
    rows = {
        "streamlines": sset.n_streamlines,
        "points": sset.n_points,
        "voxels": len(scene.voxels),
        "orders_mode": mode,
        "parse_s": t_parse,
        "voxelize_s": t_voxelize,
        "orders_s": t_orders,
        "frame_assembly_s": t_frame,
        "render_s": t_render,
        "total_s": total,
    }
    if args.json:
        json.dump(rows, sys.stdout)
        print()
        return 0
    for key, val in rows.items():
        if isinstance(val, float):
            print(f"{key}: {val:.4f}")
        else:
            print(f"{key}: {val}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="linevox",
        description="Voxel-order transparency for streamline datasets.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="voxelize a TCK file into a VXLN scene")
    p.add_argument("input", help="input .tck path")
    p.add_argument("output", help="output .vxln path")
    p.add_argument("--voxel-size", type=float, default=DEFAULT_VOXEL_SIZE)
    p.add_argument("--orders", type=_parse_orders, default=(MODE_AXIS, 0))
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("render", help="render a scene to a PPM image")
    p.add_argument("scene", help="input .vxln path")
    p.add_argument("output", help="output .ppm path")
    _add_camera_flags(p)
    p.add_argument("--opacity", type=float, default=0.05)
    p.add_argument("--color", default="direction", help="'direction' or 'r,g,b'")
    p.add_argument("--mode", choices=("approx", "oracle", "opaque"), default="approx")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("stats", help="order-quality metrics for a scene")
    p.add_argument("scene", help="input .vxln path")
    _add_camera_flags(p)
    p.add_argument("--opacity", type=float, default=0.05)
    p.add_argument("--color", default="direction")
    p.add_argument("--samples", type=int, default=20000, help="pairs to sample")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.add_argument(
        "--test-vectors",
        type=int,
        default=0,
        metavar="N",
        help="emit N conformance vectors in the JSON report",
    )
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("bench", help="stage timings from TCK to first frame")
    p.add_argument("input", help="input .tck path")
    p.add_argument("--voxel-size", type=float, default=DEFAULT_VOXEL_SIZE)
    p.add_argument("--orders", type=_parse_orders, default=(MODE_AXIS, 0))
    p.add_argument("--seed", type=int, default=0)
    _add_camera_flags(p)
    p.add_argument("--opacity", type=float, default=0.05)
    p.add_argument("--color", default="direction")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bench)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except LinevoxError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: OSError: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
