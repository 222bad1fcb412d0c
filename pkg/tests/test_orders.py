"""Order precomputation tests.

The sorting oracle is an independent selection sort over exact float keys;
permutations from axis_orders / random_orders must reproduce it.
"""

import numpy as np
import pytest

from linevox import (
    EmptyOrderSet,
    MODE_AXIS,
    MODE_DATASET,
    MODE_RANDOM,
    VoxelMesh,
    axis_orders,
    candidate_directions,
    dataset_order,
    order_for_direction,
    random_orders,
    segment_key,
    segment_keys,
    voxel_random_directions,
)


def mesh_from_segments(segs, coord=(0, 0, 0), meta=None) -> VoxelMesh:
    """Build a mesh with one 2-point voxline per requested segment."""
    segs = np.asarray(segs, dtype=np.float32)  # (ns, 2, 3)
    verts = segs.reshape(-1, 3)
    idx = np.arange(0, len(verts), 2, dtype=np.uint32)
    pairs = np.stack([idx, idx + 1], axis=1)
    if meta is None:
        meta = np.stack(
            [np.zeros(len(segs), dtype=np.int64), np.arange(len(segs))], axis=1
        )
    return VoxelMesh(coord, verts, pairs, np.asarray(meta, dtype=np.int64))


def brute_force_ascending(mesh: VoxelMesh, d) -> list[int]:
    """Stable selection sort by exact key; the oracle permutation."""
    keys = [segment_key(mesh, i, d) for i in range(mesh.n_segments)]
    remaining = list(range(mesh.n_segments))
    out = []
    while remaining:
        best = remaining[0]
        for i in remaining[1:]:
            if keys[i] < keys[best]:
                best = i
        out.append(best)
        remaining.remove(best)
    return out


def test_segment_key_examples():
    mesh = mesh_from_segments([[(0, 0, 0), (2, 0, 0)]])
    assert segment_key(mesh, 0, (1, 0, 0)) == 2.0
    assert segment_key(mesh, 0, (0, 1, 0)) == 0.0


def test_sum_key_ranks_like_average_key(rng):
    segs = rng.uniform(-5, 5, size=(40, 2, 3))
    mesh = mesh_from_segments(segs)
    d = rng.normal(size=3)
    d /= np.linalg.norm(d)
    sum_keys = segment_keys(mesh, d)
    p0, p1 = mesh.segment_endpoints()
    avg_keys = ((p0 + p1) / 2.0) @ d
    np.testing.assert_array_equal(np.argsort(sum_keys), np.argsort(avg_keys))


def test_axis_orders_example_from_sums():
    """Summed X components 4, 0, 2 -> +X permutation [1, 2, 0]."""
    mesh = mesh_from_segments(
        [
            [(1, 0, 0), (3, 0, 0)],  # sum x = 4
            [(0, 1, 0), (0, 2, 0)],  # sum x = 0
            [(1, 5, 0), (1, 6, 0)],  # sum x = 2
        ]
    )
    oset = axis_orders(mesh)
    assert oset.mode == MODE_AXIS
    np.testing.assert_array_equal(oset.permutations[0], [1, 2, 0])


def test_axis_orders_empty_mesh():
    mesh = VoxelMesh(
        (0, 0, 0),
        np.empty((0, 3), dtype=np.float32),
        np.empty((0, 2), dtype=np.uint32),
        np.empty((0, 2), dtype=np.int64),
    )
    oset = axis_orders(mesh)
    assert [len(p) for p in oset.permutations] == [0, 0, 0]


def test_axis_orders_tie_keeps_dataset_order():
    mesh = mesh_from_segments(
        [
            [(1, 0, 0), (1, 1, 0)],  # sum x = 2
            [(1, 2, 0), (1, 3, 0)],  # sum x = 2 (tie)
            [(0, 0, 0), (0, 1, 0)],  # sum x = 0
        ]
    )
    np.testing.assert_array_equal(axis_orders(mesh).permutations[0], [2, 0, 1])


def test_axis_orders_match_brute_force(rng):
    for _ in range(20):
        ns = int(rng.integers(1, 25))
        mesh = mesh_from_segments(rng.uniform(-10, 10, size=(ns, 2, 3)))
        oset = axis_orders(mesh)
        for ax, d in enumerate(np.eye(3)):
            assert list(oset.permutations[ax]) == brute_force_ascending(mesh, d)


def test_random_orders_match_brute_force(rng):
    for trial in range(10):
        ns = int(rng.integers(1, 20))
        mesh = mesh_from_segments(
            rng.uniform(-10, 10, size=(ns, 2, 3)), coord=(trial, 0, 2)
        )
        oset = random_orders(mesh, k=5, seed=99)
        assert oset.mode == MODE_RANDOM
        for i in range(5):
            d = oset.directions[i]
            assert list(oset.permutations[i]) == brute_force_ascending(mesh, d)


def test_random_orders_deterministic(rng):
    mesh = mesh_from_segments(rng.uniform(-10, 10, size=(12, 2, 3)), coord=(3, 1, 4))
    a = random_orders(mesh, k=8, seed=5)
    b = random_orders(mesh, k=8, seed=5)
    np.testing.assert_array_equal(a.directions, b.directions)
    for pa, pb in zip(a.permutations, b.permutations):
        np.testing.assert_array_equal(pa, pb)


def test_random_directions_unit_norm_and_voxel_dependence():
    a = voxel_random_directions((0, 0, 0), 64, seed=0)
    b = voxel_random_directions((1, 0, 0), 64, seed=0)
    c = voxel_random_directions((0, 0, 0), 64, seed=1)
    np.testing.assert_allclose(np.linalg.norm(a, axis=1), 1.0, atol=1e-6)
    assert not np.array_equal(a, b)  # differ per voxel
    assert not np.array_equal(a, c)  # differ per seed
    np.testing.assert_array_equal(
        a, voxel_random_directions((0, 0, 0), 64, seed=0)
    )


def test_random_directions_sphere_coverage():
    """Uniform sampling: every octant hit, mean near zero for many draws."""
    d = voxel_random_directions((2, 3, 4), 4096, seed=7)
    octants = {tuple(np.sign(v).astype(int)) for v in d}
    assert len(octants) == 8
    assert np.linalg.norm(d.mean(axis=0)) < 0.05


def test_permutations_are_bijections(rng):
    mesh = mesh_from_segments(rng.uniform(-10, 10, size=(30, 2, 3)))
    for oset in (axis_orders(mesh), random_orders(mesh, 6, 0)):
        for perm in oset.permutations:
            np.testing.assert_array_equal(np.sort(perm), np.arange(30))


def test_ascending_by_key_invariant(rng):
    mesh = mesh_from_segments(rng.uniform(-10, 10, size=(25, 2, 3)))
    for oset in (axis_orders(mesh), random_orders(mesh, 4, 11)):
        for d, perm in zip(oset.directions, oset.permutations):
            keys = segment_keys(mesh, d)[perm]
            assert (np.diff(keys) >= 0).all()


def test_candidate_directions_axis_enumeration():
    mesh = mesh_from_segments([[(0, 0, 0), (1, 0, 0)]])
    cands = candidate_directions(axis_orders(mesh))
    expect = [
        (1, 0, 0), (-1, 0, 0),
        (0, 1, 0), (0, -1, 0),
        (0, 0, 1), (0, 0, -1),
    ]
    np.testing.assert_array_equal(cands, expect)


def test_order_for_direction_negative_axis_is_reversal(rng):
    segs = rng.uniform(-10, 10, size=(15, 2, 3))
    mesh = mesh_from_segments(segs)
    oset = axis_orders(mesh)
    for ax, d in enumerate(np.eye(3)):
        pos = order_for_direction(oset, d)
        neg = order_for_direction(oset, -d)
        np.testing.assert_array_equal(neg, pos[::-1])
        # with distinct keys, reversal equals brute-force descending sort
        keys = segment_keys(mesh, d)
        if len(np.unique(keys)) == len(keys):
            assert list(neg) == brute_force_ascending(mesh, -d)


def test_order_for_direction_positive_axis_stored():
    mesh = mesh_from_segments([[(0, 0, 0), (1, 2, 3)], [(4, 0, 0), (5, 1, 1)]])
    oset = axis_orders(mesh)
    np.testing.assert_array_equal(
        order_for_direction(oset, (0, 1, 0)), oset.permutations[1]
    )


def test_order_for_direction_random_mode_exact_hit(rng):
    mesh = mesh_from_segments(rng.uniform(-10, 10, size=(10, 2, 3)), coord=(5, 5, 5))
    oset = random_orders(mesh, 16, seed=2)
    for i in (0, 7, 15):
        got = order_for_direction(oset, oset.directions[i])
        np.testing.assert_array_equal(got, oset.permutations[i])


def test_dataset_order_has_no_candidates():
    mesh = mesh_from_segments([[(0, 0, 0), (1, 0, 0)]])
    oset = dataset_order(mesh)
    assert oset.mode == MODE_DATASET
    assert len(candidate_directions(oset)) == 0
    with pytest.raises(EmptyOrderSet):
        order_for_direction(oset, (1, 0, 0))


def test_random_orders_k_must_be_positive():
    mesh = mesh_from_segments([[(0, 0, 0), (1, 0, 0)]])
    with pytest.raises(ValueError):
        random_orders(mesh, 0, seed=0)
