"""Precomputed per-voxel segment render orders.

For a sorting direction d, segments sort ascending by the key
(p0 + p1) . d  -- the sum of the endpoints, which orders identically to
their average.  Axis mode stores the three permutations for +X, +Y, +Z and
derives the negative-direction orders by reversal at query time.  Random
mode stores k seeded unit directions per voxel plus their permutations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyOrderSet
from .grid import VoxelCoord, VoxelMesh, VoxelScene

MODE_DATASET = "dataset"
MODE_AXIS = "axis"
MODE_RANDOM = "random"

AXIS_DIRECTIONS = np.eye(3, dtype=np.float64)  # rows: +X, +Y, +Z


@dataclass(eq=False)
class OrderSet:
    """Stored sorting directions and their segment permutations for one voxel.

    Each permutation sorts the owning mesh's segments ascending by key along
    its direction, ties broken by base (dataset) order.  Axis mode stores
    positive directions only.
    """

    mode: str
    directions: np.ndarray  # (k, 3) float64
    permutations: list[np.ndarray]  # k arrays of uint32, each a bijection


def segment_keys(mesh: VoxelMesh, d) -> np.ndarray:
    """Sort key (p0 + p1) . d for every segment of the mesh."""
    p0, p1 = mesh.segment_endpoints()
    return (p0 + p1) @ np.asarray(d, dtype=np.float64)


def segment_key(mesh: VoxelMesh, seg: int, d) -> float:
    p0, p1 = mesh.segment_endpoints()
    return float((p0[seg] + p1[seg]) @ np.asarray(d, dtype=np.float64))


def axis_orders(mesh: VoxelMesh) -> OrderSet:
    """Permutations ascending by the X, Y, Z component of (p0 + p1).

    Base order within a voxel is ascending (streamline_id, segment_index),
    so a stable sort realizes that tie-break.
    """
    p0, p1 = mesh.segment_endpoints()
    sums = p0 + p1
    perms = [
        np.argsort(sums[:, ax], kind="stable").astype(np.uint32) for ax in range(3)
    ]
    return OrderSet(MODE_AXIS, AXIS_DIRECTIONS.copy(), perms)


def voxel_random_directions(coord: VoxelCoord, k: int, seed: int) -> np.ndarray:
    """k deterministic unit directions for one voxel, uniform on the sphere.

    A counter-based generator (Philox) is keyed by (seed, voxel coordinate),
    so directions differ per voxel but are reproducible.  Sampling is the
    inverse-CDF map: z uniform in [-1, 1], azimuth uniform in [0, 2pi).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    key = np.random.SeedSequence([seed & 0xFFFFFFFF, *(int(c) for c in coord)])
    rng = np.random.Generator(np.random.Philox(key))
    z = rng.uniform(-1.0, 1.0, k)
    az = rng.uniform(0.0, 2.0 * np.pi, k)
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    return np.stack([r * np.cos(az), r * np.sin(az), z], axis=1)


def random_orders(mesh: VoxelMesh, k: int, seed: int) -> OrderSet:
    """k per-voxel pseudo-random directions with their sorted orders."""
    dirs = voxel_random_directions(mesh.coord, k, seed)
    p0, p1 = mesh.segment_endpoints()
    keys = (p0 + p1) @ dirs.T  # (ns, k)
    perms = [np.argsort(keys[:, i], kind="stable").astype(np.uint32) for i in range(k)]
    return OrderSet(MODE_RANDOM, dirs, perms)


def dataset_order(mesh: VoxelMesh) -> OrderSet:
    """Trivial order set: in-voxel order is the base (dataset) order."""
    return OrderSet(MODE_DATASET, np.empty((0, 3), dtype=np.float64), [])


def candidate_directions(orders: OrderSet) -> np.ndarray:
    """Directions eligible for selection, in tie-break enumeration order.

    Axis mode interleaves negations: +X, -X, +Y, -Y, +Z, -Z.  Random mode
    uses storage order.  Dataset mode has no candidates.
    """
    if orders.mode == MODE_AXIS:
        cands = np.empty((6, 3), dtype=np.float64)
        cands[0::2] = orders.directions
        cands[1::2] = -orders.directions
        return cands
    return orders.directions


def _resolve(orders: OrderSet, d) -> tuple[int, bool]:
    """Map a direction to (stored permutation index, negated?)."""
    cands = candidate_directions(orders)
    if len(cands) == 0:
        raise EmptyOrderSet("order set stores no directions")
    best = int(np.argmax(cands @ np.asarray(d, dtype=np.float64)))
    if orders.mode == MODE_AXIS:
        return best // 2, best % 2 == 1
    return best, False


def order_for_direction(orders: OrderSet, d_query) -> np.ndarray:
    """Permutation ascending by key along `d_query`.

    `d_query` is matched to the nearest stored direction (or its negation in
    axis mode); a negated axis returns the reversed positive permutation.
    """
    idx, negated = _resolve(orders, d_query)
    perm = orders.permutations[idx]
    return perm[::-1] if negated else perm


def precompute_orders(
    scene: VoxelScene, mode: str, k: int = 0, seed: int = 0
) -> VoxelScene:
    """Attach per-voxel OrderSets to the scene and return it."""
    if mode == MODE_DATASET:
        scene.orders = {c: dataset_order(m) for c, m in scene.voxels.items()}
    elif mode == MODE_AXIS:
        scene.orders = {c: axis_orders(m) for c, m in scene.voxels.items()}
    elif mode == MODE_RANDOM:
        scene.orders = {c: random_orders(m, k, seed) for c, m in scene.voxels.items()}
    else:
        raise ValueError(f"unknown order mode {mode!r}")
    scene.random_k = k if mode == MODE_RANDOM else 0
    scene.order_mode = mode
    scene.seed = seed
    return scene
