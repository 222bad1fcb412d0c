/** VXLN scene file parser.
 *
 * Layout (all little-endian):
 *   header:  magic 'VXLN' | u32 version=1 | 3*f32 b_min | f32 voxel_size
 *            | u32 order_mode (0 dataset, 1 axis, 2 random) | u32 k_dirs
 *            | u32 voxel_count
 *   voxel:   3*i32 coord | u32 vertex_count | vertex_count*3*f32
 *            | u32 segment_count | segment_count*2*u32
 *            | k_dirs times: 3*f32 direction + segment_count*u32 permutation
 *
 * Axis mode stores the three positive-axis permutations; negative
 * directions are derived by reversal on the consumer side.
 */

export type OrderMode = "dataset" | "axis" | "random";

export interface VoxelRecord {
  coord: [number, number, number];
  /** xyz triples, uploaded once */
  vertices: Float32Array;
  /** base-order segment index pairs, flat [a0,b0,a1,b1,...] */
  segments: Uint32Array;
  /** stored directions, xyz triples (f32 values widened to doubles) */
  directions: Float64Array;
  /** one ascending-by-key permutation per stored direction */
  permutations: Uint32Array[];
}

export interface Scene {
  bMin: [number, number, number];
  voxelSize: number;
  orderMode: OrderMode;
  kDirs: number;
  voxels: VoxelRecord[];
}

export class SceneFormatError extends Error {}
export class BadMagic extends SceneFormatError {}
export class UnsupportedVersion extends SceneFormatError {}

const MODE_NAMES: OrderMode[] = ["dataset", "axis", "random"];

class Cursor {
  private view: DataView;
  pos = 0;

  constructor(private buf: ArrayBuffer) {
    this.view = new DataView(buf);
  }

  private need(n: number): number {
    if (this.pos + n > this.buf.byteLength) {
      throw new SceneFormatError(
        `truncated scene file: wanted ${n} bytes at offset ${this.pos}`,
      );
    }
    const at = this.pos;
    this.pos += n;
    return at;
  }

  u32(): number {
    return this.view.getUint32(this.need(4), true);
  }

  i32(): number {
    return this.view.getInt32(this.need(4), true);
  }

  f32(): number {
    return this.view.getFloat32(this.need(4), true);
  }

  bytes(n: number): Uint8Array {
    return new Uint8Array(this.buf, this.need(n), n);
  }

  f32Array(count: number): Float32Array {
    const at = this.need(count * 4);
    // copy: the buffer offset may not be 4-aligned for a direct view
    const out = new Float32Array(count);
    for (let i = 0; i < count; i++) out[i] = this.view.getFloat32(at + i * 4, true);
    return out;
  }

  u32Array(count: number): Uint32Array {
    const at = this.need(count * 4);
    const out = new Uint32Array(count);
    for (let i = 0; i < count; i++) out[i] = this.view.getUint32(at + i * 4, true);
    return out;
  }
}

export function parseScene(buf: ArrayBuffer): Scene {
  const cur = new Cursor(buf);
  const magic = cur.bytes(4);
  if (String.fromCharCode(...magic) !== "VXLN") {
    throw new BadMagic("bad magic; not a VXLN scene file");
  }
  const version = cur.u32();
  if (version !== 1) {
    throw new UnsupportedVersion(`unsupported scene version ${version}`);
  }
  const bMin: [number, number, number] = [cur.f32(), cur.f32(), cur.f32()];
  const voxelSize = cur.f32();
  const modeCode = cur.u32();
  const kDirs = cur.u32();
  const voxelCount = cur.u32();
  const orderMode = MODE_NAMES[modeCode];
  if (orderMode === undefined) {
    throw new SceneFormatError(`unknown order mode code ${modeCode}`);
  }
  if (
    (orderMode === "dataset" && kDirs !== 0) ||
    (orderMode === "axis" && kDirs !== 3) ||
    (orderMode === "random" && kDirs < 1)
  ) {
    throw new SceneFormatError(
      `order mode ${orderMode} cannot store ${kDirs} directions`,
    );
  }

  const voxels: VoxelRecord[] = [];
  for (let v = 0; v < voxelCount; v++) {
    const coord: [number, number, number] = [cur.i32(), cur.i32(), cur.i32()];
    const nv = cur.u32();
    const vertices = cur.f32Array(nv * 3);
    const ns = cur.u32();
    const segments = cur.u32Array(ns * 2);
    for (let i = 0; i < segments.length; i++) {
      if (segments[i] >= nv) {
        throw new SceneFormatError(
          `voxel (${coord}): segment index out of range`,
        );
      }
    }
    const directions = new Float64Array(kDirs * 3);
    const permutations: Uint32Array[] = [];
    for (let d = 0; d < kDirs; d++) {
      directions[d * 3] = cur.f32();
      directions[d * 3 + 1] = cur.f32();
      directions[d * 3 + 2] = cur.f32();
      const perm = cur.u32Array(ns);
      for (let i = 0; i < perm.length; i++) {
        if (perm[i] >= ns) {
          throw new SceneFormatError(
            `voxel (${coord}): permutation out of range`,
          );
        }
      }
      permutations.push(perm);
    }
    voxels.push({ coord, vertices, segments, directions, permutations });
  }
  if (cur.pos !== buf.byteLength) {
    throw new SceneFormatError(
      `${buf.byteLength - cur.pos} trailing bytes after last voxel`,
    );
  }
  return { bMin, voxelSize, orderMode, kDirs, voxels };
}
