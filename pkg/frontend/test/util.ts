import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { parseScene, type Scene } from "../src/vxln.js";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "..", "fixtures");

export function fixtureBuffer(name: string): ArrayBuffer {
  const buf = readFileSync(join(FIXTURES, name));
  return buf.buffer.slice(buf.byteOffset, buf.byteOffset + buf.byteLength);
}

export function fixtureScene(name: string): Scene {
  return parseScene(fixtureBuffer(name));
}

export interface TestVector {
  eye: [number, number, number];
  voxel: [number, number, number];
  voxel_center: [number, number, number];
  expected_direction: [number, number, number];
  expected_rank: number;
}

export function fixtureVectors(): TestVector[] {
  const raw = readFileSync(join(FIXTURES, "vectors.json"), "utf-8");
  return JSON.parse(raw).test_vectors as TestVector[];
}

export function coordKey(c: readonly number[]): string {
  return `${c[0]},${c[1]},${c[2]}`;
}
