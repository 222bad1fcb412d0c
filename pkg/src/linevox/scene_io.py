"""Binary scene file ("VXLN") shared with the browser viewer.

Fixed little-endian layout, no compression, so thin clients can stream it:

    header:  magic 'VXLN' | u32 version=1 | 3*f32 b_min | f32 voxel_size
             | u32 order_mode (0 dataset, 1 axis, 2 random) | u32 k_dirs
             | u32 voxel_count
    voxel:   3*i32 coord | u32 vertex_count | vertex_count*3*f32
             | u32 segment_count | segment_count*2*u32 (base order pairs)
             | k_dirs times: 3*f32 direction + segment_count*u32 permutation

Axis mode stores only the three positive-axis permutations (k_dirs = 3);
readers derive negative directions by reversal.
"""

from __future__ import annotations

import struct

import numpy as np

from .errors import BadSceneFile
from .grid import GridParams, VoxelMesh, VoxelScene
from .orders import MODE_AXIS, MODE_DATASET, MODE_RANDOM, OrderSet

MAGIC = b"VXLN"
VERSION = 1

_MODE_CODES = {MODE_DATASET: 0, MODE_AXIS: 1, MODE_RANDOM: 2}
_MODE_NAMES = {v: k for k, v in _MODE_CODES.items()}


def write_scene(scene: VoxelScene) -> bytes:
    """Serialize scene (meshes + attached orders) to VXLN bytes."""
    if scene.orders is None:
        raise BadSceneFile("scene has no attached orders; precompute them first")
    mode = scene.order_mode
    if mode == MODE_DATASET:
        k_dirs = 0
    elif mode == MODE_AXIS:
        k_dirs = 3
    else:
        k_dirs = scene.random_k
        if k_dirs < 1:
            raise BadSceneFile("random mode scene with no stored directions")

    chunks = [
        struct.pack("<4sI", MAGIC, VERSION),
        np.asarray([*scene.params.b_min, scene.params.voxel_size], dtype="<f4").tobytes(),
        struct.pack("<III", _MODE_CODES[mode], k_dirs, len(scene.voxels)),
    ]
    for coord, mesh in scene.voxels.items():
        oset = scene.orders[coord]
        if len(oset.permutations) != k_dirs:
            raise BadSceneFile(
                f"voxel {coord} stores {len(oset.permutations)} orders, expected {k_dirs}"
            )
        chunks.append(np.asarray(coord, dtype="<i4").tobytes())
        chunks.append(struct.pack("<I", len(mesh.vertices)))
        chunks.append(np.ascontiguousarray(mesh.vertices, dtype="<f4").tobytes())
        chunks.append(struct.pack("<I", len(mesh.segments)))
        chunks.append(np.ascontiguousarray(mesh.segments, dtype="<u4").tobytes())
        for d, perm in zip(oset.directions, oset.permutations):
            chunks.append(np.asarray(d, dtype="<f4").tobytes())
            chunks.append(np.ascontiguousarray(perm, dtype="<u4").tobytes())
    return b"".join(chunks)


class _Cursor:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise BadSceneFile(
                f"truncated scene file: wanted {n} bytes at offset {self.pos}"
            )
        out = self.data[self.pos : self.pos + n]
        self.pos += n
        return out

    def u32(self) -> int:
        return struct.unpack("<I", self.take(4))[0]

    def array(self, dtype: str, count: int) -> np.ndarray:
        itemsize = np.dtype(dtype).itemsize
        return np.frombuffer(self.take(itemsize * count), dtype=dtype)


def read_scene(data: bytes) -> VoxelScene:
    """Parse VXLN bytes back into a VoxelScene.

    Loaded meshes carry no per-segment streamline metadata (the format does
    not store it); everything needed for ordering and rendering is present.
    """
    cur = _Cursor(data)
    if cur.take(4) != MAGIC:
        raise BadSceneFile("bad magic; not a VXLN scene file")
    version = cur.u32()
    if version != VERSION:
        raise BadSceneFile(f"unsupported scene version {version}")
    b_min = cur.array("<f4", 3).astype(np.float64)
    voxel_size = float(cur.array("<f4", 1)[0])
    mode_code, k_dirs, voxel_count = cur.u32(), cur.u32(), cur.u32()
    if mode_code not in _MODE_NAMES:
        raise BadSceneFile(f"unknown order mode code {mode_code}")
    mode = _MODE_NAMES[mode_code]
    if mode == MODE_DATASET and k_dirs != 0:
        raise BadSceneFile("dataset mode must store 0 directions")
    if mode == MODE_AXIS and k_dirs != 3:
        raise BadSceneFile("axis mode must store exactly 3 directions")
    if mode == MODE_RANDOM and k_dirs < 1:
        raise BadSceneFile("random mode must store at least 1 direction")

    params = GridParams(b_min, voxel_size)
    voxels: dict = {}
    orders: dict = {}
    for _ in range(voxel_count):
        coord = tuple(int(c) for c in cur.array("<i4", 3))
        nv = cur.u32()
        vertices = cur.array("<f4", nv * 3).reshape(nv, 3)
        ns = cur.u32()
        segments = cur.array("<u4", ns * 2).reshape(ns, 2)
        if ns and segments.max() >= nv:
            raise BadSceneFile(f"voxel {coord}: segment index out of range")
        dirs = np.empty((k_dirs, 3), dtype=np.float64)
        perms = []
        for i in range(k_dirs):
            dirs[i] = cur.array("<f4", 3)
            perm = cur.array("<u4", ns)
            if ns and perm.max() >= ns:
                raise BadSceneFile(f"voxel {coord}: permutation out of range")
            perms.append(perm)
        voxels[coord] = VoxelMesh(coord, vertices.copy(), segments.copy())
        orders[coord] = OrderSet(mode, dirs, [p.copy() for p in perms])
    if cur.pos != len(data):
        raise BadSceneFile(f"{len(data) - cur.pos} trailing bytes after last voxel")

    scene = VoxelScene(params, voxels, orders, mode)
    scene.random_k = k_dirs if mode == MODE_RANDOM else 0
    return scene


def save_scene(scene: VoxelScene, path) -> int:
    blob = write_scene(scene)
    with open(path, "wb") as fh:
        fh.write(blob)
    return len(blob)


def load_scene(path) -> VoxelScene:
    with open(path, "rb") as fh:
        return read_scene(fh.read())
