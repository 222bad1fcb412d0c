"""End-to-end CLI tests driving main() with real files."""

import json

import numpy as np
import pytest

from linevox import (
    Camera,
    Perspective,
    StreamlineSet,
    load_scene,
    select_direction,
    sort_voxels_back_to_front,
    voxel_center,
    write_tck,
)
from linevox.cli import main, scene_bounds
from helpers import random_walk_set


@pytest.fixture
def tck_path(tmp_path, rng):
    sset = random_walk_set(rng, 12)
    path = tmp_path / "in.tck"
    path.write_bytes(write_tck(sset))
    return path


def run(args, capsys):
    code = main([str(a) for a in args])
    out, err = capsys.readouterr()
    return code, out, err


# ---------------------------------------------------------------------------
# build
# ---------------------------------------------------------------------------

def test_build_axis_scene(tck_path, tmp_path, capsys):
    out_path = tmp_path / "scene.vxln"
    code, out, err = run(["build", tck_path, out_path, "--orders", "axis"], capsys)
    assert code == 0 and err == ""
    assert "streamlines: 12" in out
    assert f"wrote {out_path}" in out
    scene = load_scene(out_path)
    assert scene.order_mode == "axis"
    assert scene.n_segments > 0


def test_build_is_deterministic(tck_path, tmp_path, capsys):
    a, b = tmp_path / "a.vxln", tmp_path / "b.vxln"
    run(["build", tck_path, a, "--orders", "random:4", "--seed", 9], capsys)
    run(["build", tck_path, b, "--orders", "random:4", "--seed", 9], capsys)
    assert a.read_bytes() == b.read_bytes()
    scene = load_scene(a)
    assert scene.order_mode == "random" and scene.random_k == 4


def test_build_voxel_size_flag(tck_path, tmp_path, capsys):
    coarse, fine = tmp_path / "c.vxln", tmp_path / "f.vxln"
    run(["build", tck_path, coarse, "--voxel-size", 50], capsys)
    run(["build", tck_path, fine, "--voxel-size", 5], capsys)
    assert len(load_scene(fine).voxels) > len(load_scene(coarse).voxels)


# ---------------------------------------------------------------------------
# render
# ---------------------------------------------------------------------------

@pytest.fixture
def scene_path(tck_path, tmp_path, capsys):
    path = tmp_path / "scene.vxln"
    assert main(["build", str(tck_path), str(path), "--orders", "axis"]) == 0
    capsys.readouterr()
    return path


def test_render_writes_ppm(scene_path, tmp_path, capsys):
    img = tmp_path / "out.ppm"
    code, out, _ = run(
        ["render", scene_path, img, "--size", "64x48", "--opacity", 0.1], capsys
    )
    assert code == 0
    data = img.read_bytes()
    assert data.startswith(b"P6\n64 48\n255\n")
    assert len(data) == len(b"P6\n64 48\n255\n") + 64 * 48 * 3


@pytest.mark.parametrize("mode", ["approx", "oracle", "opaque"])
def test_render_modes(scene_path, tmp_path, capsys, mode):
    img = tmp_path / f"{mode}.ppm"
    code, _, _ = run(
        ["render", scene_path, img, "--mode", mode, "--size", "32x32"], capsys
    )
    assert code == 0 and img.exists()


def test_opaque_render_ignores_stored_order_mode(tck_path, tmp_path, capsys):
    imgs = []
    for mode in ("dataset", "random:3"):
        tag = mode.replace(":", "")
        scn = tmp_path / f"{tag}.vxln"
        img = tmp_path / f"{tag}.ppm"
        run(["build", tck_path, scn, "--orders", mode, "--seed", 5], capsys)
        run(
            ["render", scn, img, "--mode", "opaque", "--size", "48x48",
             "--eye", "150,150,150", "--target", "50,50,50"],
            capsys,
        )
        imgs.append(img.read_bytes())
    assert imgs[0] == imgs[1]


def test_axis_view_approx_matches_oracle_bytes(tmp_path, rng, capsys):
    # single voxel, orthographic view along -z through the voxel center
    raw = random_walk_set(rng, 4, box=30.0)
    pts = np.concatenate(raw.streamlines)
    lo = pts.min(axis=0)
    scale = 80.0 / (pts.max(axis=0) - lo).max()
    sset = StreamlineSet(
        [((s - lo) * scale).astype(np.float32) for s in raw.streamlines], {}
    )
    tck = tmp_path / "one.tck"
    tck.write_bytes(write_tck(sset))
    scn = tmp_path / "one.vxln"
    run(["build", tck, scn, "--voxel-size", 100, "--orders", "axis"], capsys)
    assert len(load_scene(scn).voxels) == 1
    # data spans [0, 80]^3, so the voxel center is exactly (50, 50, 50)
    common = ["--projection", "orthographic", "--half-height", 100,
              "--eye", "50,50,250", "--target", "50,50,50", "--size", "96x96",
              "--opacity", 0.2]
    a, o = tmp_path / "a.ppm", tmp_path / "o.ppm"
    run(["render", scn, a, "--mode", "approx", *common], capsys)
    run(["render", scn, o, "--mode", "oracle", *common], capsys)
    assert a.read_bytes() == o.read_bytes()


# ---------------------------------------------------------------------------
# stats
# ---------------------------------------------------------------------------

def test_stats_text_output(scene_path, capsys):
    code, out, _ = run(["stats", scene_path, "--size", "48x48"], capsys)
    assert code == 0
    assert "pair inversion rate" in out
    assert "image MAE" in out


def test_stats_json_report(scene_path, capsys):
    code, out, _ = run(
        ["stats", scene_path, "--json", "--size", "48x48", "--samples", 5000], capsys
    )
    assert code == 0
    report = json.loads(out)
    scene = load_scene(scene_path)
    assert report["voxels"] == len(scene.voxels)
    assert report["segments"] == scene.n_segments
    assert report["order_mode"] == "axis"
    assert report["k_dirs"] == 3
    assert 0.0 <= report["inversion_rate"] <= 1.0
    assert report["image_mae"] >= 0.0
    assert report["segments_per_voxel"]["max"] >= report["segments_per_voxel"]["min"]
    assert report["camera"]["projection"] == "perspective"


def test_stats_test_vectors_self_consistent(scene_path, capsys):
    code, out, _ = run(
        ["stats", scene_path, "--json", "--test-vectors", 60, "--seed", 3,
         "--size", "32x32"],
        capsys,
    )
    assert code == 0
    vectors = json.loads(out)["test_vectors"]
    assert len(vectors) == 60
    scene = load_scene(scene_path)
    lo, hi = scene_bounds(scene)
    target = tuple(0.5 * (lo + hi))
    proj = Perspective(0.8)  # selection and ranking ignore the projection
    by_eye = {}
    for v in vectors:
        by_eye.setdefault(tuple(v["eye"]), []).append(v)
    assert len(by_eye) >= 2
    for eye, group in by_eye.items():
        cam = Camera(eye, target, projection=proj)
        ranked = sort_voxels_back_to_front(scene, cam)
        for v in group:
            coord = tuple(v["voxel"])
            assert ranked[v["expected_rank"]] == coord
            c = voxel_center(coord, scene.params)
            np.testing.assert_array_equal(c, v["voxel_center"])
            got = select_direction(scene.orders[coord], c, cam)
            np.testing.assert_array_equal(got, v["expected_direction"])


def test_stats_vectors_require_json(scene_path, capsys):
    code, _, err = run(["stats", scene_path, "--test-vectors", 5], capsys)
    assert code == 1
    assert "error: BadCameraFlags" in err


# ---------------------------------------------------------------------------
# bench
# ---------------------------------------------------------------------------

def test_bench_text(tck_path, capsys):
    code, out, _ = run(["bench", tck_path, "--size", "32x32"], capsys)
    assert code == 0
    rows = dict(line.split(": ") for line in out.strip().splitlines())
    assert rows["streamlines"] == "12"
    for key in ("parse_s", "voxelize_s", "orders_s", "frame_assembly_s",
                "render_s", "total_s"):
        assert float(rows[key]) >= 0.0
    assert float(rows["parse_s"]) + float(rows["voxelize_s"]) <= float(
        rows["total_s"]
    ) + 1e-9


def test_bench_json(tck_path, capsys):
    code, out, _ = run(["bench", tck_path, "--json", "--size", "32x32"], capsys)
    assert code == 0
    rows = json.loads(out)
    stages = [rows[k] for k in ("parse_s", "voxelize_s", "orders_s",
                                "frame_assembly_s", "render_s")]
    assert rows["total_s"] == pytest.approx(sum(stages))
    assert rows["orders_mode"] == "axis"


# ---------------------------------------------------------------------------
# error handling
# ---------------------------------------------------------------------------

def test_missing_input_file(tmp_path, capsys):
    code, _, err = run(["build", tmp_path / "nope.tck", tmp_path / "x.vxln"], capsys)
    assert code == 1
    assert err.startswith("error: OSError")


def test_non_tck_input(tmp_path, capsys):
    bad = tmp_path / "bad.tck"
    bad.write_bytes(b"definitely not a track file")
    code, _, err = run(["build", bad, tmp_path / "x.vxln"], capsys)
    assert code == 1
    assert "error: MissingMagic" in err


def test_bad_opacity(scene_path, tmp_path, capsys):
    code, _, err = run(
        ["render", scene_path, tmp_path / "x.ppm", "--opacity", 0], capsys
    )
    assert code == 1
    assert "error: BadCameraFlags" in err


def test_bad_size(scene_path, tmp_path, capsys):
    code, _, err = run(
        ["render", scene_path, tmp_path / "x.ppm", "--size", "huge"], capsys
    )
    assert code == 1
    assert "error: BadCameraFlags" in err


def test_degenerate_camera(scene_path, tmp_path, capsys):
    code, _, err = run(
        ["render", scene_path, tmp_path / "x.ppm",
         "--eye", "1,2,3", "--target", "1,2,3"],
        capsys,
    )
    assert code == 1
    assert "error: DegenerateView" in err


def test_bad_orders_flag_is_usage_error(tck_path, tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["build", str(tck_path), str(tmp_path / "x.vxln"),
              "--orders", "random:0"])
    assert exc.value.code == 2
