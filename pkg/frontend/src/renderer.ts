/** Frame planning (pure) and the WebGL line renderer.
 *
 * Vertices are uploaded once per voxel; switching view direction only
 * rebinds a precomputed index buffer, which is the whole point of the
 * per-voxel order scheme.
 */

import type { Vec3 } from "./ordering.js";
import {
  candidateDirections,
  paintPermutation,
  selectDirectionIndex,
  sortVoxelsBackToFront,
  voxelCenter,
} from "./ordering.js";
import type { Scene, VoxelRecord } from "./vxln.js";

export interface FramePlan {
  /** voxel indices, farthest first */
  voxelOrder: number[];
  /** per voxel index: selected candidate index, or null for base order */
  bindings: (number | null)[];
}

/** Pure per-frame decision: draw order plus the order binding per voxel. */
export function planFrame(
  scene: Scene,
  eye: Vec3,
  toggle: "dataset" | "stored" = "stored",
): FramePlan {
  const voxelOrder = sortVoxelsBackToFront(scene, eye);
  const useStored = toggle === "stored" && scene.orderMode !== "dataset";
  const bindings = scene.voxels.map((voxel) => {
    if (!useStored || voxel.segments.length === 0) return null;
    const cands = candidateDirections(scene.orderMode, voxel.directions);
    const center = voxelCenter(voxel.coord, scene.bMin, scene.voxelSize);
    return selectDirectionIndex(cands, center, eye);
  });
  return { voxelOrder, bindings };
}

/** Line indices (vertex index pairs) painting the voxel's segments in the
 * order the binding dictates. */
export function lineIndices(
  voxel: VoxelRecord,
  mode: Scene["orderMode"],
  candIdx: number | null,
): Uint32Array {
  const ns = voxel.segments.length / 2;
  const out = new Uint32Array(ns * 2);
  if (candIdx === null) {
    out.set(voxel.segments);
    return out;
  }
  const painted = paintPermutation(voxel, mode, candIdx);
  for (let i = 0; i < ns; i++) {
    out[i * 2] = voxel.segments[painted[i] * 2];
    out[i * 2 + 1] = voxel.segments[painted[i] * 2 + 1];
  }
  return out;
}

/** |normalized tangent| per vertex (of the outgoing segment), the usual
 * tractography coloring. */
export function vertexColors(voxel: VoxelRecord): Float32Array {
  const colors = new Float32Array(voxel.vertices.length).fill(0.7);
  const ns = voxel.segments.length / 2;
  for (let s = 0; s < ns; s++) {
    const a = voxel.segments[s * 2];
    const b = voxel.segments[s * 2 + 1];
    const tx = voxel.vertices[b * 3] - voxel.vertices[a * 3];
    const ty = voxel.vertices[b * 3 + 1] - voxel.vertices[a * 3 + 1];
    const tz = voxel.vertices[b * 3 + 2] - voxel.vertices[a * 3 + 2];
    const n = Math.hypot(tx, ty, tz) || 1;
    for (const v of [a, b]) {
      colors[v * 3] = Math.abs(tx) / n;
      colors[v * 3 + 1] = Math.abs(ty) / n;
      colors[v * 3 + 2] = Math.abs(tz) / n;
    }
  }
  return colors;
}

const AXIS_COLORS: Vec3[] = [
  [1.0, 0.25, 0.25], [0.55, 0.0, 0.0],
  [0.25, 1.0, 0.25], [0.0, 0.55, 0.0],
  [0.35, 0.35, 1.0], [0.0, 0.0, 0.6],
];

export function bindingColor(
  mode: Scene["orderMode"],
  candIdx: number | null,
): Vec3 {
  if (candIdx === null) return [0.5, 0.5, 0.5];
  if (mode === "axis") return AXIS_COLORS[candIdx];
  const h = (candIdx * 0.381966) % 1; // golden-ratio hues
  const f = (off: number) =>
    Math.max(0, Math.min(1, Math.abs(((h + off) % 1) * 6 - 3) - 1));
  return [f(0), f(2 / 3), f(1 / 3)];
}

const VERT_SRC = `
attribute vec3 aPos;
attribute vec3 aColor;
uniform mat4 uView;
uniform mat4 uProj;
varying vec3 vColor;
void main() {
  vColor = aColor;
  gl_Position = uProj * uView * vec4(aPos, 1.0);
}`;

const FRAG_SRC = `
precision mediump float;
uniform float uAlpha;
varying vec3 vColor;
void main() {
  gl_FragColor = vec4(vColor, uAlpha);
}`;

interface VoxelBuffers {
  vbo: WebGLBuffer;
  colorVbo: WebGLBuffer;
  /** candidate index (or -1 for base) -> index buffer */
  variants: Map<number, { ebo: WebGLBuffer; count: number }>;
}

export class GlRenderer {
  private program: WebGLProgram;
  private aPos: number;
  private aColor: number;
  private uView: WebGLUniformLocation;
  private uProj: WebGLUniformLocation;
  private uAlpha: WebGLUniformLocation;
  private buffers: VoxelBuffers[] = [];
  private boxVbo: WebGLBuffer;
  private boxColorVbo: WebGLBuffer;

  constructor(private gl: WebGLRenderingContext, private scene: Scene) {
    const ext = gl.getExtension("OES_element_index_uint");
    if (!ext) throw new Error("OES_element_index_uint is required");
    this.program = this.link(VERT_SRC, FRAG_SRC);
    this.aPos = gl.getAttribLocation(this.program, "aPos");
    this.aColor = gl.getAttribLocation(this.program, "aColor");
    this.uView = gl.getUniformLocation(this.program, "uView")!;
    this.uProj = gl.getUniformLocation(this.program, "uProj")!;
    this.uAlpha = gl.getUniformLocation(this.program, "uAlpha")!;
    for (const voxel of scene.voxels) {
      const vbo = gl.createBuffer()!;
      gl.bindBuffer(gl.ARRAY_BUFFER, vbo);
      gl.bufferData(gl.ARRAY_BUFFER, voxel.vertices, gl.STATIC_DRAW);
      const colorVbo = gl.createBuffer()!;
      gl.bindBuffer(gl.ARRAY_BUFFER, colorVbo);
      gl.bufferData(gl.ARRAY_BUFFER, vertexColors(voxel), gl.STATIC_DRAW);
      this.buffers.push({ vbo, colorVbo, variants: new Map() });
    }
    this.boxVbo = gl.createBuffer()!;
    this.boxColorVbo = gl.createBuffer()!;
  }

  private link(vs: string, fs: string): WebGLProgram {
    const gl = this.gl;
    const compile = (type: number, src: string) => {
      const sh = gl.createShader(type)!;
      gl.shaderSource(sh, src);
      gl.compileShader(sh);
      if (!gl.getShaderParameter(sh, gl.COMPILE_STATUS)) {
        throw new Error(gl.getShaderInfoLog(sh) ?? "shader compile failed");
      }
      return sh;
    };
    const prog = gl.createProgram()!;
    gl.attachShader(prog, compile(gl.VERTEX_SHADER, vs));
    gl.attachShader(prog, compile(gl.FRAGMENT_SHADER, fs));
    gl.linkProgram(prog);
    if (!gl.getProgramParameter(prog, gl.LINK_STATUS)) {
      throw new Error(gl.getProgramInfoLog(prog) ?? "program link failed");
    }
    return prog;
  }

  private variant(v: number, candIdx: number | null) {
    const buf = this.buffers[v];
    const key = candIdx ?? -1;
    let entry = buf.variants.get(key);
    if (!entry) {
      const gl = this.gl;
      const idx = lineIndices(this.scene.voxels[v], this.scene.orderMode, candIdx);
      const ebo = gl.createBuffer()!;
      gl.bindBuffer(gl.ELEMENT_ARRAY_BUFFER, ebo);
      gl.bufferData(gl.ELEMENT_ARRAY_BUFFER, idx, gl.STATIC_DRAW);
      entry = { ebo, count: idx.length };
      buf.variants.set(key, entry);
    }
    return entry;
  }

  draw(
    plan: FramePlan,
    view: Float32Array,
    proj: Float32Array,
    alpha: number,
    showBoxes: boolean,
  ): void {
    const gl = this.gl;
    gl.enable(gl.BLEND);
    gl.blendFunc(gl.SRC_ALPHA, gl.ONE_MINUS_SRC_ALPHA);
    gl.disable(gl.DEPTH_TEST);
    gl.depthMask(false);
    gl.useProgram(this.program);
    gl.uniformMatrix4fv(this.uView, false, view);
    gl.uniformMatrix4fv(this.uProj, false, proj);
    gl.uniform1f(this.uAlpha, alpha);
    gl.enableVertexAttribArray(this.aPos);
    gl.enableVertexAttribArray(this.aColor);

    for (const v of plan.voxelOrder) {
      const entry = this.variant(v, plan.bindings[v]);
      if (entry.count === 0) continue;
      gl.bindBuffer(gl.ARRAY_BUFFER, this.buffers[v].vbo);
      gl.vertexAttribPointer(this.aPos, 3, gl.FLOAT, false, 0, 0);
      gl.bindBuffer(gl.ARRAY_BUFFER, this.buffers[v].colorVbo);
      gl.vertexAttribPointer(this.aColor, 3, gl.FLOAT, false, 0, 0);
      gl.bindBuffer(gl.ELEMENT_ARRAY_BUFFER, entry.ebo);
      gl.drawElements(gl.LINES, entry.count, gl.UNSIGNED_INT, 0);
    }
    if (showBoxes) this.drawBoxes(plan);
  }

  private drawBoxes(plan: FramePlan): void {
    const gl = this.gl;
    const s = this.scene.voxelSize;
    const pos: number[] = [];
    const col: number[] = [];
    const E = [
      [0, 1], [1, 3], [3, 2], [2, 0],
      [4, 5], [5, 7], [7, 6], [6, 4],
      [0, 4], [1, 5], [2, 6], [3, 7],
    ];
    for (const v of plan.voxelOrder) {
      const { coord } = this.scene.voxels[v];
      const rgb = bindingColor(this.scene.orderMode, plan.bindings[v]);
      const base = [
        this.scene.bMin[0] + coord[0] * s,
        this.scene.bMin[1] + coord[1] * s,
        this.scene.bMin[2] + coord[2] * s,
      ];
      const corner = (m: number) => [
        base[0] + (m & 1 ? s : 0),
        base[1] + (m & 2 ? s : 0),
        base[2] + (m & 4 ? s : 0),
      ];
      for (const [a, b] of E) {
        pos.push(...corner(a), ...corner(b));
        col.push(...rgb, ...rgb);
      }
    }
    gl.bindBuffer(gl.ARRAY_BUFFER, this.boxVbo);
    gl.bufferData(gl.ARRAY_BUFFER, new Float32Array(pos), gl.DYNAMIC_DRAW);
    gl.vertexAttribPointer(this.aPos, 3, gl.FLOAT, false, 0, 0);
    gl.bindBuffer(gl.ARRAY_BUFFER, this.boxColorVbo);
    gl.bufferData(gl.ARRAY_BUFFER, new Float32Array(col), gl.DYNAMIC_DRAW);
    gl.vertexAttribPointer(this.aColor, 3, gl.FLOAT, false, 0, 0);
    gl.uniform1f(this.uAlpha, 0.85);
    gl.bindBuffer(gl.ELEMENT_ARRAY_BUFFER, null);
    gl.drawArrays(gl.LINES, 0, pos.length / 3);
  }
}
