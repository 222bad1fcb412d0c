/** Ordering rules duplicated from the scene-producing side.
 *
 * The arithmetic below is written scalar-by-scalar, left to right, so the
 * selected direction and voxel ranking agree bit-for-bit with the producer
 * for identical doubles; conformance is pinned by the shared JSON test
 * vectors rather than re-derivation.
 */

import type { OrderMode, Scene, VoxelRecord } from "./vxln.js";

export type Vec3 = [number, number, number];

export function voxelCenter(
  coord: readonly [number, number, number],
  bMin: readonly [number, number, number],
  voxelSize: number,
): Vec3 {
  return [
    bMin[0] + (coord[0] + 0.5) * voxelSize,
    bMin[1] + (coord[1] + 0.5) * voxelSize,
    bMin[2] + (coord[2] + 0.5) * voxelSize,
  ];
}

/** Directions eligible for selection, in tie-break enumeration order:
 * axis mode interleaves negations (+X, -X, +Y, -Y, +Z, -Z); random mode
 * uses storage order; dataset mode has none. */
export function candidateDirections(
  mode: OrderMode,
  directions: Float64Array,
): Vec3[] {
  const stored: Vec3[] = [];
  for (let i = 0; i < directions.length; i += 3) {
    stored.push([directions[i], directions[i + 1], directions[i + 2]]);
  }
  if (mode !== "axis") {
    return mode === "dataset" ? [] : stored;
  }
  const cands: Vec3[] = [];
  for (const d of stored) {
    cands.push(d);
    cands.push([-d[0], -d[1], -d[2]]);
  }
  return cands;
}

/** Index into candidateDirections() maximizing s . u, u the unit vector
 * from the eye to the voxel center; ties resolve to the first candidate. */
export function selectDirectionIndex(
  cands: readonly Vec3[],
  center: Vec3,
  eye: Vec3,
): number {
  if (cands.length === 0) {
    throw new Error("order set stores no directions");
  }
  const dx = center[0] - eye[0];
  const dy = center[1] - eye[1];
  const dz = center[2] - eye[2];
  const norm = Math.sqrt(dx * dx + dy * dy + dz * dz);
  if (norm === 0) {
    throw new Error("voxel center coincides with the camera eye");
  }
  const ux = dx / norm;
  const uy = dy / norm;
  const uz = dz / norm;
  let best = 0;
  let bestDot = -Infinity;
  for (let i = 0; i < cands.length; i++) {
    const dot = cands[i][0] * ux + cands[i][1] * uy + cands[i][2] * uz;
    if (dot > bestDot) {
      best = i;
      bestDot = dot;
    }
  }
  return best;
}

export function selectDirection(
  mode: OrderMode,
  directions: Float64Array,
  center: Vec3,
  eye: Vec3,
): Vec3 {
  const cands = candidateDirections(mode, directions);
  return cands[selectDirectionIndex(cands, center, eye)];
}

/** Voxel indices ordered far-to-near by squared eye distance to center,
 * ties broken by lexicographically ascending coordinate. */
export function sortVoxelsBackToFront(scene: Scene, eye: Vec3): number[] {
  const n = scene.voxels.length;
  const dist2 = new Float64Array(n);
  for (let i = 0; i < n; i++) {
    const c = voxelCenter(scene.voxels[i].coord, scene.bMin, scene.voxelSize);
    const dx = c[0] - eye[0];
    const dy = c[1] - eye[1];
    const dz = c[2] - eye[2];
    dist2[i] = dx * dx + dy * dy + dz * dz;
  }
  const order = Array.from({ length: n }, (_, i) => i);
  order.sort((a, b) => {
    if (dist2[a] !== dist2[b]) return dist2[a] > dist2[b] ? -1 : 1;
    const ca = scene.voxels[a].coord;
    const cb = scene.voxels[b].coord;
    return ca[0] - cb[0] || ca[1] - cb[1] || ca[2] - cb[2];
  });
  return order;
}

/** Which stored permutation a candidate maps to, and whether it must be
 * read reversed to ascend along the candidate direction. */
export function resolveCandidate(
  mode: OrderMode,
  candIdx: number,
): { dirIndex: number; negated: boolean } {
  if (mode === "axis") {
    return { dirIndex: candIdx >> 1, negated: (candIdx & 1) === 1 };
  }
  return { dirIndex: candIdx, negated: false };
}

/** Segment order to paint the voxel far-to-near along the selected
 * candidate: the ascending-by-key permutation, reversed. */
export function paintPermutation(
  voxel: VoxelRecord,
  mode: OrderMode,
  candIdx: number,
): Uint32Array {
  const ns = voxel.segments.length / 2;
  if (mode === "dataset") {
    const base = new Uint32Array(ns);
    for (let i = 0; i < ns; i++) base[i] = i;
    return base;
  }
  const { dirIndex, negated } = resolveCandidate(mode, candIdx);
  const perm = voxel.permutations[dirIndex];
  if (negated) {
    // ascending along -d is the reversal, painting reverses again
    return perm.slice();
  }
  const out = new Uint32Array(ns);
  for (let i = 0; i < ns; i++) out[i] = perm[ns - 1 - i];
  return out;
}
