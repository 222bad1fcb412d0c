"""Shared builders used across test modules."""

import numpy as np

from linevox import StreamlineSet, build_scene, precompute_orders

# filled by test_acceptance, echoed by the terminal-summary hook in conftest
ACCEPTANCE_RESULTS: list[str] = []


def random_walk_set(
    rng: np.random.Generator,
    n_lines: int,
    min_pts: int = 2,
    max_pts: int = 60,
    box: float = 100.0,
    step: float = 2.0,
) -> StreamlineSet:
    """Random polylines: uniform start in [0, box]^3, unit-step random walk."""
    streamlines = []
    for _ in range(n_lines):
        n = int(rng.integers(min_pts, max_pts + 1))
        start = rng.uniform(0.0, box, size=3)
        dirs = rng.normal(size=(n - 1, 3))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        pts = np.vstack([np.zeros(3), np.cumsum(dirs * step, axis=0)]) + start
        streamlines.append(pts.astype(np.float32))
    return StreamlineSet(streamlines, {})


def quick_scene(seed=0, n_lines=10, voxel_size=10.0, mode="axis", k=0, order_seed=0):
    rng = np.random.default_rng(seed)
    sset = random_walk_set(rng, n_lines)
    scene = build_scene(sset, voxel_size=voxel_size)
    precompute_orders(scene, mode, k=k, seed=order_seed)
    return sset, scene
