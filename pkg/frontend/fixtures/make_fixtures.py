"""Regenerate the committed viewer fixtures from the Python package.

Run from this directory:

    python3 make_fixtures.py

Produces:
    axis_scene.vxln  multi-voxel axis-mode scene (the conformance scene)
    vectors.json     1200 (eye, voxel) conformance vectors for that scene
    demo.vxln        single-voxel axis-mode scene used by the HUD/sweep tests
"""

import io
import json
from contextlib import redirect_stdout
from pathlib import Path

import numpy as np

from linevox import StreamlineSet, write_tck
from linevox.cli import main

HERE = Path(__file__).parent


def walk_set(rng, n_lines, n_pts, step, box):
    starts = rng.uniform(0.0, box, size=(n_lines, 1, 3))
    steps = rng.normal(scale=step, size=(n_lines, n_pts - 1, 3))
    pts = np.concatenate(
        [starts, starts + np.cumsum(steps, axis=1)], axis=1
    ).astype(np.float32)
    return StreamlineSet(list(pts), {})


def build(tck_bytes, out_name, voxel_size):
    tck = HERE / "_tmp.tck"
    tck.write_bytes(tck_bytes)
    try:
        assert main(
            ["build", str(tck), str(HERE / out_name),
             "--voxel-size", str(voxel_size), "--orders", "axis"]
        ) == 0
    finally:
        tck.unlink()


def make_axis_scene_and_vectors():
    rng = np.random.default_rng(2026)
    build(write_tck(walk_set(rng, 25, 80, 2.5, 80.0)), "axis_scene.vxln", 10.0)
    buf = io.StringIO()
    with redirect_stdout(buf):
        assert main(
            ["stats", str(HERE / "axis_scene.vxln"), "--json",
             "--test-vectors", "1200", "--seed", "3"]
        ) == 0
    payload = json.loads(buf.getvalue())
    (HERE / "vectors.json").write_text(json.dumps(payload, indent=1))
    print(f"axis_scene.vxln: {payload['voxels']} voxels, "
          f"{payload['segments']} segments, "
          f"{len(payload['test_vectors'])} vectors")


def make_demo_scene():
    rng = np.random.default_rng(7)
    pts = rng.uniform(0.0, 80.0, size=(3, 12, 3)).astype(np.float32)
    build(write_tck(StreamlineSet(list(pts), {})), "demo.vxln", 100.0)
    print("demo.vxln: 1 voxel")


if __name__ == "__main__":
    make_axis_scene_and_vectors()
    make_demo_scene()
