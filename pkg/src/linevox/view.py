"""Per-frame ordering: voxel sort, direction selection, paint orders.

The approximate paint order concatenates the voxels back to front and,
inside each voxel, applies the precomputed permutation of the stored
direction nearest to the viewing direction.  Stored permutations ascend by
key along their direction; since the selected direction points from the eye
toward the voxel, compositing runs in descending key order (the reverse of
the stored permutation), which is far-to-near.

The exact per-segment depth sort is also provided; it is the oracle the
approximation is measured against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateView, EmptyOrderSet, MismatchedSegmentSets
from .grid import VoxelCoord, VoxelScene
from .orders import MODE_DATASET, OrderSet, candidate_directions, order_for_direction

# Above this many total pairs, pair_inversion_rate switches to seeded sampling.
EXACT_PAIR_CAP = 2_000_000


@dataclass(frozen=True)
class Perspective:
    fov_y: float  # radians
    aspect: float = 1.0
    near: float = 0.1

    def __post_init__(self):
        if not 0.0 < self.fov_y < math.pi:
            raise ValueError("fov_y must be in (0, pi)")
        if self.near <= 0:
            raise ValueError("near must be > 0")


@dataclass(frozen=True)
class Orthographic:
    half_height: float  # mm
    aspect: float = 1.0
    near: float = 0.1

    def __post_init__(self):
        if self.half_height <= 0:
            raise ValueError("half_height must be > 0")
        if self.near <= 0:
            raise ValueError("near must be > 0")


@dataclass(frozen=True)
class Camera:
    eye: np.ndarray
    target: np.ndarray
    up: np.ndarray = field(default_factory=lambda: np.array([0.0, 1.0, 0.0]))
    projection: Perspective | Orthographic = Perspective(math.radians(45.0))

    def __post_init__(self):
        object.__setattr__(self, "eye", np.asarray(self.eye, dtype=np.float64).reshape(3))
        object.__setattr__(self, "target", np.asarray(self.target, dtype=np.float64).reshape(3))
        object.__setattr__(self, "up", np.asarray(self.up, dtype=np.float64).reshape(3))
        if np.array_equal(self.eye, self.target):
            raise DegenerateView("camera eye and target coincide")

    def basis(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(right, up, forward) orthonormal basis; forward points eye->target."""
        f = self.target - self.eye
        f = f / np.linalg.norm(f)
        r = np.cross(f, self.up)
        rn = np.linalg.norm(r)
        if rn < 1e-12:
            raise DegenerateView("camera up is parallel to the view direction")
        r = r / rn
        return r, np.cross(r, f), f


@dataclass(eq=False)
class PaintOrder:
    """Global compositing sequence; element 0 is painted first (farthest).

    Segments are stored as global ids (see VoxelScene); `refs` resolves them
    to (voxel coordinate, local segment index) pairs.
    """

    seg_ids: np.ndarray  # (m,) int64

    def __len__(self) -> int:
        return len(self.seg_ids)

    def refs(self, scene: VoxelScene) -> list[tuple[VoxelCoord, int]]:
        return [scene.segment_ref(int(g)) for g in self.seg_ids]


def _voxel_sort_indices(scene: VoxelScene, cam: Camera) -> np.ndarray:
    """Voxel indices sorted far-to-near by squared eye distance to center,
    ties broken by lexicographically ascending coordinate."""
    centers = scene.voxel_centers
    d = centers - cam.eye
    dist2 = np.einsum("ij,ij->i", d, d)
    coords = np.array(scene.voxel_list, dtype=np.int64).reshape(-1, 3)
    return np.lexsort((coords[:, 2], coords[:, 1], coords[:, 0], -dist2))


def sort_voxels_back_to_front(scene: VoxelScene, cam: Camera) -> list[VoxelCoord]:
    """Voxel coordinates ordered by decreasing eye distance to voxel center."""
    return [scene.voxel_list[i] for i in _voxel_sort_indices(scene, cam)]


def select_direction(orders: OrderSet, voxel_center, cam: Camera) -> np.ndarray:
    """Stored direction (or axis negation) nearest the viewing direction.

    Maximizes s . u with u the unit vector from the eye to the voxel center;
    ties resolve to the first candidate in enumeration order.  Scalar
    arithmetic is kept explicit so any IEEE-754 consumer of exported scenes
    reproduces the choice bit-for-bit.
    """
    cands = candidate_directions(orders)
    if len(cands) == 0:
        raise EmptyOrderSet("order set stores no directions")
    center = np.asarray(voxel_center, dtype=np.float64)
    dx = float(center[0]) - float(cam.eye[0])
    dy = float(center[1]) - float(cam.eye[1])
    dz = float(center[2]) - float(cam.eye[2])
    norm = math.sqrt(dx * dx + dy * dy + dz * dz)
    if norm == 0.0:
        raise DegenerateView("voxel center coincides with the camera eye")
    ux, uy, uz = dx / norm, dy / norm, dz / norm

    best, best_dot = 0, -math.inf
    for i in range(len(cands)):
        dot = float(cands[i, 0]) * ux + float(cands[i, 1]) * uy + float(cands[i, 2]) * uz
        if dot > best_dot:
            best, best_dot = i, dot
    return cands[best]


def approx_paint_order(scene: VoxelScene, cam: Camera) -> PaintOrder:
    """Voxels back to front; inside each voxel the nearest stored order,
    reversed so compositing runs far-to-near along the selected direction.

    Dataset mode (or a scene without attached orders) keeps base order
    inside each voxel.
    """
    idx = scene._index
    parts = []
    for v in _voxel_sort_indices(scene, cam):
        coord = scene.voxel_list[v]
        ns = scene.voxels[coord].n_segments
        if ns == 0:
            continue
        base = idx.seg_offsets[v]
        oset = scene.orders.get(coord) if scene.orders is not None else None
        if oset is None or oset.mode == MODE_DATASET:
            parts.append(np.arange(base, base + ns, dtype=np.int64))
        else:
            s = select_direction(oset, idx.centers[v], cam)
            perm = order_for_direction(oset, s)
            parts.append(base + perm[::-1].astype(np.int64))
    if not parts:
        return PaintOrder(np.empty(0, dtype=np.int64))
    return PaintOrder(np.concatenate(parts))


def _segment_depths(scene: VoxelScene, cam: Camera) -> np.ndarray:
    """Midpoint depth per global segment: squared eye distance under
    perspective, signed forward-axis projection under orthographic."""
    p0, p1 = scene.segment_endpoints()
    mid = (p0 + p1) * 0.5
    if isinstance(cam.projection, Orthographic):
        _, _, f = cam.basis()
        return (mid - cam.eye) @ f
    d = mid - cam.eye
    return np.einsum("ij,ij->i", d, d)


def exact_paint_order(scene: VoxelScene, cam: Camera) -> PaintOrder:
    """All segments sorted far-to-near by midpoint depth (the oracle).

    Ties fall back to (streamline_id, segment_index) when the scene carries
    segment metadata, else to the global segment id.
    """
    depth = _segment_depths(scene, cam)
    meta = scene.segment_meta()
    if meta is not None:
        order = np.lexsort((meta[:, 1], meta[:, 0], -depth))
    else:
        order = np.lexsort((np.arange(len(depth)), -depth))
    return PaintOrder(order.astype(np.int64))


def _positions_in(order: PaintOrder, ids: np.ndarray) -> np.ndarray:
    sorter = np.argsort(order.seg_ids, kind="stable")
    return sorter[np.searchsorted(order.seg_ids, ids, sorter=sorter)]


def pair_inversion_rate(
    a: PaintOrder, b: PaintOrder, sample_pairs: int, seed: int = 0
) -> float:
    """Fraction of unordered segment pairs whose relative order differs.

    Counts exactly when `sample_pairs` covers all pairs and the total is at
    most EXACT_PAIR_CAP; otherwise samples `sample_pairs` pairs with a
    seeded generator.
    """
    if sample_pairs < 1:
        raise ValueError("sample_pairs must be >= 1")
    a_sorted = np.sort(a.seg_ids)
    if len(a) != len(b) or not np.array_equal(a_sorted, np.sort(b.seg_ids)):
        raise MismatchedSegmentSets("paint orders cover different segment sets")
    n = len(a)
    total = n * (n - 1) // 2
    if total == 0:
        return 0.0

    pos_b = _positions_in(b, a.seg_ids)  # position in b of a's i-th segment
    if sample_pairs >= total and total <= EXACT_PAIR_CAP:
        later = pos_b[:, None] > pos_b[None, :]
        inversions = int(np.triu(later, k=1).sum())
        return inversions / total

    rng = np.random.Generator(np.random.PCG64(seed))
    need = sample_pairs
    differing = 0
    while need > 0:
        i = rng.integers(0, n, size=2 * need)
        j = rng.integers(0, n, size=2 * need)
        ok = i != j
        i, j = i[ok][:need], j[ok][:need]
        differing += int(np.count_nonzero((pos_b[i] > pos_b[j]) != (i > j)))
        need -= len(i)
    return differing / sample_pairs
