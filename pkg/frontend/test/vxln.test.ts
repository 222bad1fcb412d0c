import { describe, expect, it } from "vitest";

import {
  BadMagic,
  SceneFormatError,
  UnsupportedVersion,
  parseScene,
} from "../src/vxln.js";
import { fixtureBuffer, fixtureScene } from "./util.js";

describe("VXLN parsing", () => {
  it("parses the 1-voxel demo scene", () => {
    const scene = fixtureScene("demo.vxln");
    expect(scene.orderMode).toBe("axis");
    expect(scene.kDirs).toBe(3);
    expect(scene.voxels).toHaveLength(1);
    const v = scene.voxels[0];
    expect(v.coord).toEqual([0, 0, 0]);
    expect(v.segments.length / 2).toBe(33);
    expect(v.permutations).toHaveLength(3);
    for (const perm of v.permutations) {
      expect(Array.from(perm).sort((a, b) => a - b)).toEqual(
        Array.from({ length: 33 }, (_, i) => i),
      );
    }
  });

  it("parses the conformance scene", () => {
    const scene = fixtureScene("axis_scene.vxln");
    expect(scene.voxels).toHaveLength(389);
    const total = scene.voxels.reduce((n, v) => n + v.segments.length / 2, 0);
    expect(total).toBe(1975);
    expect(scene.voxelSize).toBe(10);
  });

  it("stored permutations ascend by segment key along their direction", () => {
    const scene = fixtureScene("demo.vxln");
    const v = scene.voxels[0];
    for (let d = 0; d < 3; d++) {
      const dir = [
        v.directions[d * 3],
        v.directions[d * 3 + 1],
        v.directions[d * 3 + 2],
      ];
      const key = (s: number) => {
        const a = v.segments[s * 2] * 3;
        const b = v.segments[s * 2 + 1] * 3;
        let k = 0;
        for (let c = 0; c < 3; c++) {
          k += (v.vertices[a + c] + v.vertices[b + c]) * dir[c];
        }
        return k;
      };
      const perm = v.permutations[d];
      for (let i = 1; i < perm.length; i++) {
        expect(key(perm[i])).toBeGreaterThanOrEqual(key(perm[i - 1]));
      }
    }
  });

  it("rejects a bad magic", () => {
    const buf = fixtureBuffer("demo.vxln");
    new Uint8Array(buf)[0] = 0x58;
    expect(() => parseScene(buf)).toThrow(BadMagic);
  });

  it("rejects an unsupported version", () => {
    const buf = fixtureBuffer("demo.vxln");
    new DataView(buf).setUint32(4, 9, true);
    expect(() => parseScene(buf)).toThrow(UnsupportedVersion);
  });

  it("rejects a mode/direction-count mismatch", () => {
    const buf = fixtureBuffer("demo.vxln");
    new DataView(buf).setUint32(28, 5, true); // axis scene claiming 5 dirs
    expect(() => parseScene(buf)).toThrow(SceneFormatError);
  });

  it("rejects truncation and trailing bytes", () => {
    const whole = fixtureBuffer("demo.vxln");
    expect(() => parseScene(whole.slice(0, whole.byteLength - 3))).toThrow(
      /truncated/,
    );
    const grown = new Uint8Array(whole.byteLength + 1);
    grown.set(new Uint8Array(whole));
    expect(() => parseScene(grown.buffer)).toThrow(/trailing/);
  });
});
