"""Voxelization of streamline sets into per-voxel line meshes.

A streamline is cut into *voxlines*: maximal runs of consecutive points that
share one voxel coordinate.  Every voxline that does not contain the final
streamline point is extended by exactly one connecting point (the next point
of the streamline, which lies in another voxel) so that no segment is lost
at voxel borders.  Consequence: the segment (p_i, p_{i+1}) is owned by the
voxel of p_i, and each original segment is owned exactly once.

Per voxel, a mesh is then built whose vertices are the voxline points (in
dataset order, connecting points duplicated across meshes) and whose
segments are the consecutive point pairs within each voxline.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import EmptyDataset
from .tck import StreamlineSet

VoxelCoord = tuple[int, int, int]

DEFAULT_VOXEL_SIZE = 10.0


@dataclass(frozen=True)
class GridParams:
    """Grid origin (dataset minimum bound, mm) and cubic voxel edge length."""

    b_min: np.ndarray  # (3,) float64
    voxel_size: float

    def __post_init__(self):
        object.__setattr__(
            self, "b_min", np.asarray(self.b_min, dtype=np.float64).reshape(3)
        )
        if not self.voxel_size > 0:
            raise ValueError("voxel_size must be > 0")


@dataclass(eq=False)
class Voxline:
    """Maximal same-voxel run of one streamline, plus the connecting point.

    `points` is an ``(n, 3)`` float32 view; all points except possibly the
    last lie inside the owning voxel.  `start` is the index of the first
    point within the source streamline.
    """

    streamline_id: int
    points: np.ndarray
    start: int = 0


@dataclass(eq=False)
class VoxelMesh:
    """Renderable line set of one voxel.

    `segments` holds (a, b) vertex index pairs in dataset (base) order.
    `segment_meta` carries per-segment (streamline_id, segment index within
    streamline); it is None for meshes loaded from a scene file.
    """

    coord: VoxelCoord
    vertices: np.ndarray  # (nv, 3) float32
    segments: np.ndarray  # (ns, 2) uint32
    segment_meta: np.ndarray | None = None  # (ns, 2) int64

    @property
    def n_segments(self) -> int:
        return len(self.segments)

    def segment_endpoints(self) -> tuple[np.ndarray, np.ndarray]:
        """(p0, p1) float64 arrays of shape (ns, 3)."""
        v = self.vertices.astype(np.float64)
        return v[self.segments[:, 0]], v[self.segments[:, 1]]


def compute_bounds(sset: StreamlineSet) -> tuple[np.ndarray, np.ndarray]:
    """Component-wise (min, max) over all points, as float64."""
    if sset.n_points == 0:
        raise EmptyDataset("cannot compute bounds of an empty streamline set")
    mins = np.min([s.min(axis=0) for s in sset.streamlines], axis=0)
    maxs = np.max([s.max(axis=0) for s in sset.streamlines], axis=0)
    return mins.astype(np.float64), maxs.astype(np.float64)


def voxel_coord(p, params: GridParams) -> VoxelCoord:
    """floor((p - b_min) / voxel_size), component-wise."""
    rel = np.asarray(p, dtype=np.float64) - params.b_min
    v = np.floor(rel / params.voxel_size).astype(np.int64)
    return (int(v[0]), int(v[1]), int(v[2]))


def voxel_coords(points: np.ndarray, params: GridParams) -> np.ndarray:
    """Vectorized :func:`voxel_coord` for an (n, 3) array; returns (n, 3) int64."""
    rel = points.astype(np.float64) - params.b_min
    return np.floor(rel / params.voxel_size).astype(np.int64)


def voxel_center(coord: VoxelCoord, params: GridParams) -> np.ndarray:
    s = params.voxel_size
    return params.b_min + (np.asarray(coord, dtype=np.float64) + 0.5) * s


def generate_voxlines(
    sset: StreamlineSet, params: GridParams
) -> dict[VoxelCoord, list[Voxline]]:
    """Split every streamline into voxlines, grouped by voxel coordinate.

    Per-voxel voxline order equals dataset order.  Trailing runs of a single
    final point become 1-point voxlines that later yield no segments.
    """
    out: dict[VoxelCoord, list[Voxline]] = {}
    if sset.n_streamlines == 0:
        return out

    lens = np.array([len(s) for s in sset.streamlines], dtype=np.int64)
    offsets = np.concatenate([[0], np.cumsum(lens)])
    points = np.vstack(sset.streamlines)
    n = len(points)
    vox = voxel_coords(points, params)

    # A run starts at each streamline head and wherever the coordinate changes.
    is_start = np.zeros(n, dtype=bool)
    is_start[offsets[:-1]] = True
    is_start[1:] |= (vox[1:] != vox[:-1]).any(axis=1)
    run_starts = np.flatnonzero(is_start)
    run_ends = np.append(run_starts[1:], n)
    run_sl = np.searchsorted(offsets, run_starts, side="right") - 1
    sl_ends = offsets[run_sl + 1]
    # Runs that do not reach the streamline's final point get the connecting point.
    extended = run_ends < sl_ends

    for rs, re, sl, ext in zip(run_starts, run_ends, run_sl, extended):
        stop = re + 1 if ext else re
        coord = (int(vox[rs, 0]), int(vox[rs, 1]), int(vox[rs, 2]))
        vl = Voxline(int(sl), points[rs:stop], start=int(rs - offsets[sl]))
        out.setdefault(coord, []).append(vl)
    return out


def build_voxel_meshes(
    voxlines: dict[VoxelCoord, list[Voxline]],
) -> dict[VoxelCoord, VoxelMesh]:
    """Concatenate each voxel's voxlines into a mesh.

    Vertices follow dataset order; duplicates across voxels (connecting
    points) are kept.  1-point voxlines contribute neither vertices nor
    segments.  Segments never bridge two voxlines.
    """
    meshes: dict[VoxelCoord, VoxelMesh] = {}
    for coord, vls in voxlines.items():
        parts = [vl.points for vl in vls if len(vl.points) >= 2]
        if not parts:
            meshes[coord] = VoxelMesh(
                coord,
                np.empty((0, 3), dtype=np.float32),
                np.empty((0, 2), dtype=np.uint32),
                np.empty((0, 2), dtype=np.int64),
            )
            continue
        vertices = np.vstack(parts)

        firsts, metas = [], []
        off = 0
        for vl in vls:
            k = len(vl.points)
            if k < 2:
                continue
            firsts.append(np.arange(off, off + k - 1, dtype=np.uint32))
            meta = np.empty((k - 1, 2), dtype=np.int64)
            meta[:, 0] = vl.streamline_id
            meta[:, 1] = np.arange(vl.start, vl.start + k - 1)
            metas.append(meta)
            off += k
        a = np.concatenate(firsts)
        segments = np.stack([a, a + np.uint32(1)], axis=1)
        meshes[coord] = VoxelMesh(coord, vertices, segments, np.vstack(metas))
    return meshes


@dataclass(eq=False)
class VoxelScene:
    """Grid parameters plus the voxel meshes, and (optionally) per-voxel
    precomputed segment orders attached by :mod:`linevox.orders`."""

    params: GridParams
    voxels: dict[VoxelCoord, VoxelMesh]
    orders: dict[VoxelCoord, "object"] | None = None  # VoxelCoord -> OrderSet
    order_mode: str = "dataset"  # 'dataset' | 'axis' | 'random'
    random_k: int = 0
    seed: int = 0

    @cached_property
    def _index(self) -> "_SceneIndex":
        return _SceneIndex(self)

    @property
    def voxel_list(self) -> list[VoxelCoord]:
        return self._index.voxel_list

    @property
    def n_segments(self) -> int:
        return int(self._index.seg_offsets[-1])

    @property
    def voxel_centers(self) -> np.ndarray:
        return self._index.centers

    def segment_endpoints(self) -> tuple[np.ndarray, np.ndarray]:
        """Global (p0, p1) float64 arrays in canonical order: voxels in
        insertion order, segments in base order within each voxel."""
        return self._index.p0, self._index.p1

    def segment_voxel_index(self) -> np.ndarray:
        """Voxel index (into voxel_list) owning each global segment."""
        return self._index.seg_voxel

    def segment_meta(self) -> np.ndarray | None:
        """(M, 2) int64 of (streamline_id, segment index), or None."""
        return self._index.meta

    def global_id(self, coord: VoxelCoord, local: int) -> int:
        idx = self._index
        return int(idx.seg_offsets[idx.voxel_pos[coord]] + local)

    def segment_ref(self, gid: int) -> tuple[VoxelCoord, int]:
        idx = self._index
        v = int(np.searchsorted(idx.seg_offsets, gid, side="right") - 1)
        return idx.voxel_list[v], int(gid - idx.seg_offsets[v])


class _SceneIndex:
    """Flat global-segment view of a scene, built once on first use."""

    def __init__(self, scene: VoxelScene):
        self.voxel_list = list(scene.voxels.keys())
        self.voxel_pos = {c: i for i, c in enumerate(self.voxel_list)}
        counts = np.array(
            [scene.voxels[c].n_segments for c in self.voxel_list], dtype=np.int64
        )
        self.seg_offsets = np.concatenate([[0], np.cumsum(counts)])
        self.seg_voxel = np.repeat(np.arange(len(counts)), counts)

        p0s, p1s, metas = [], [], []
        have_meta = True
        for c in self.voxel_list:
            mesh = scene.voxels[c]
            a, b = mesh.segment_endpoints()
            p0s.append(a)
            p1s.append(b)
            if mesh.segment_meta is None:
                have_meta = False
            elif have_meta:
                metas.append(mesh.segment_meta)
        empty = np.empty((0, 3), dtype=np.float64)
        self.p0 = np.vstack(p0s) if p0s else empty
        self.p1 = np.vstack(p1s) if p1s else empty
        self.meta = np.vstack(metas) if have_meta and metas else None

        coords = np.array(self.voxel_list, dtype=np.float64).reshape(-1, 3)
        s = scene.params.voxel_size
        self.centers = scene.params.b_min + (coords + 0.5) * s


def build_scene(sset: StreamlineSet, voxel_size: float = DEFAULT_VOXEL_SIZE) -> VoxelScene:
    """compute_bounds -> generate_voxlines -> build_voxel_meshes, composed.

    Deterministic for a given input.  Orders are not attached here; see
    :func:`linevox.orders.precompute_orders`.
    """
    b_min, _ = compute_bounds(sset)
    params = GridParams(b_min, voxel_size)
    voxlines = generate_voxlines(sset, params)
    meshes = build_voxel_meshes(voxlines)
    return VoxelScene(params, meshes)
