/** Orbit camera state and the matrices the renderer consumes. */

import type { Vec3 } from "./ordering.js";

export interface ViewerState {
  azimuth: number;
  /** clamped inside (-pi/2, pi/2) so the up vector never degenerates */
  elevation: number;
  radius: number;
  target: Vec3;
  opacity: number;
  orderToggle: "dataset" | "stored";
  showVoxelBoxes: boolean;
}

const MAX_ELEVATION = Math.PI / 2 - 1e-3;

export function clampState(s: ViewerState): ViewerState {
  s.radius = Math.max(s.radius, 1e-6);
  s.elevation = Math.min(Math.max(s.elevation, -MAX_ELEVATION), MAX_ELEVATION);
  s.opacity = Math.min(Math.max(s.opacity, 0.001), 1);
  return s;
}

/** Y-up orbit: azimuth sweeps the XZ plane, elevation tilts toward +Y. */
export function eyeFromOrbit(s: ViewerState): Vec3 {
  const ce = Math.cos(s.elevation);
  return [
    s.target[0] + s.radius * ce * Math.cos(s.azimuth),
    s.target[1] + s.radius * Math.sin(s.elevation),
    s.target[2] + s.radius * ce * Math.sin(s.azimuth),
  ];
}

function sub(a: Vec3, b: Vec3): Vec3 {
  return [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
}

function cross(a: Vec3, b: Vec3): Vec3 {
  return [
    a[1] * b[2] - a[2] * b[1],
    a[2] * b[0] - a[0] * b[2],
    a[0] * b[1] - a[1] * b[0],
  ];
}

function normalize(a: Vec3): Vec3 {
  const n = Math.hypot(a[0], a[1], a[2]);
  return [a[0] / n, a[1] / n, a[2] / n];
}

/** Column-major view matrix looking from eye at target, Y-up. */
export function lookAt(eye: Vec3, target: Vec3): Float32Array {
  const f = normalize(sub(target, eye));
  const r = normalize(cross(f, [0, 1, 0]));
  const u = cross(r, f);
  // rows are the camera basis; translation brings the eye to the origin
  return new Float32Array([
    r[0], u[0], -f[0], 0,
    r[1], u[1], -f[1], 0,
    r[2], u[2], -f[2], 0,
    -(r[0] * eye[0] + r[1] * eye[1] + r[2] * eye[2]),
    -(u[0] * eye[0] + u[1] * eye[1] + u[2] * eye[2]),
    f[0] * eye[0] + f[1] * eye[1] + f[2] * eye[2],
    1,
  ]);
}

export function perspective(
  fovY: number,
  aspect: number,
  near: number,
  far: number,
): Float32Array {
  const t = 1 / Math.tan(fovY / 2);
  const d = 1 / (near - far);
  return new Float32Array([
    t / aspect, 0, 0, 0,
    0, t, 0, 0,
    0, 0, (near + far) * d, -1,
    0, 0, 2 * near * far * d, 0,
  ]);
}

export function defaultState(center: Vec3, extent: number): ViewerState {
  return {
    azimuth: 0.7,
    elevation: 0.35,
    radius: 2.2 * Math.max(extent, 1e-6),
    target: center,
    opacity: 0.05,
    orderToggle: "stored",
    showVoxelBoxes: false,
  };
}
